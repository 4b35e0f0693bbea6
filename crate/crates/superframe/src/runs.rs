//! Experiment runners. Each returns a [`RunResult`] whose checks carry a
//! value, a tolerance and a pass flag; reports are built only from
//! deterministic quantities so that a fixed scenario and seed reproduce the
//! same bytes.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use superframe_core::potential::check_potential_invariance;
use superframe_core::superposition::BornSampler;
use superframe_core::wavefield::{check_derivative_transform, transform_with_report};
use superframe_core::{
    AlgebraError, CounterRng, Dim, EuclideanTransform, FiniteGroup, FrameError, FrameSuperposition, GradientReference,
    GridError, GroupError, GroupWavefunction, Potential, PotentialError, WaveField,
};
use thiserror::Error;

use crate::scenario::ScenarioConfig;
use crate::schrodinger::{
    check_time_derivative_transform, commutation, diagnose, energy, EvolutionError, TimeReference,
};

/// Groups exercised by `verify-appendix` when none is named.
pub const DEFAULT_GROUPS: [&str; 5] = ["C4", "D4", "S3", "S4", "cube"];

pub const PRODUCT_LAW_TOL: f64 = 1e-14;
pub const APPENDIX_TOL: f64 = 1e-12;
pub const IDENTITY_RESIDUAL_TOL: f64 = 1e-13;
pub const LATTICE_RESIDUAL_TOL: f64 = 1e-10;
/// Interpolation-limited tolerance for transforms that need resampling.
pub const RESAMPLED_TOL: f64 = 1e-3;
/// Cubic resampling is third order in value; each derivative costs one order
/// in `dx`, so second-derivative checks get a looser bound.
pub const RESAMPLED_SECOND_DERIVATIVE_TOL: f64 = 1e-2;
pub const POTENTIAL_TOL: f64 = 1e-12;
pub const SPATIAL_DERIVATIVE_TOL: f64 = 1e-6;
pub const TEMPORAL_DERIVATIVE_TOL: f64 = 1e-8;
pub const ENERGY_DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Setup(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Passes when `value ≤ tolerance`.
    AtMost,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Non-finite values serialize as `null` and never pass.
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    pub expected_fail: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            comparison: Comparison::AtMost,
            pass: value <= tolerance,
            expected_fail: false,
        }
    }

    /// A failure that does not count against the run.
    pub fn counts(&self) -> bool {
        !self.pass && !self.expected_fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunResult {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub config_hash: String,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub details: Value,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
    #[serde(skip)]
    pub fields: Vec<(String, WaveField)>,
}

impl RunResult {
    pub fn new(command: &str, config_hash: String) -> Self {
        RunResult {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            config_hash,
            checks: Vec::new(),
            passed: true,
            details: Value::Null,
            diagnostics: Vec::new(),
            timings: Vec::new(),
            fields: Vec::new(),
        }
    }

    /// Adds a check. Names are unique within a run.
    pub fn push(&mut self, check: Check) {
        assert!(
            self.checks.iter().all(|c| c.name != check.name),
            "check {} declared twice",
            check.name
        );
        self.passed &= !check.counts();
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameters serialize"),
        );
    }

    fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((phase.to_string(), start.elapsed().as_secs_f64()));
        out
    }

    /// Folds `other` into `self`, prefixing its check and field names.
    pub fn absorb(&mut self, prefix: &str, other: RunResult) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.push(c);
        }
        if let Value::Object(map) = &mut self.details {
            map.insert(prefix.to_string(), other.details);
        } else {
            self.details = json!({ prefix: other.details });
        }
        self.diagnostics
            .extend(other.diagnostics.into_iter().map(|d| format!("{prefix}: {d}")));
        self.timings
            .extend(other.timings.into_iter().map(|(k, v)| (format!("{prefix}.{k}"), v)));
        self.fields
            .extend(other.fields.into_iter().map(|(k, v)| (format!("{prefix}.{k}"), v)));
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the canonical (compact, schema-ordered) serialization of the
/// scenario, so formatting differences in the source file do not matter.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    sha256_hex(serde_json::to_string(&cfg.raw).expect("scenario serializes").as_bytes())
}

fn transform_json(t: &EuclideanTransform) -> Value {
    let d = t.dim().get();
    let r = t.rotation();
    let rows: Vec<Vec<f64>> = (0..d).map(|i| r[i][..d].to_vec()).collect();
    let mut out = json!({
        "rotation": rows,
        "translation": t.translation()[..d].to_vec(),
    });
    match t.dim() {
        Dim::Two => out["angle_deg"] = json!(t.planar_angle().map(f64::to_degrees)),
        Dim::Three => {
            if let Some((axis, angle)) = t.axis_angle_parts() {
                out["axis"] = json!(axis);
                out["angle_deg"] = json!(angle.to_degrees());
            }
        }
        Dim::One => {}
    }
    out
}

fn superposition_json(s: &FrameSuperposition) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|(t, c)| {
            let mut v = transform_json(t);
            v["amplitude"] = json!({ "re": c.re, "im": c.im });
            v
        })
        .collect();
    json!({ "source": s.source().as_str(), "target": s.target().as_str(), "terms": terms })
}

/// Composes the listed superpositions left to right and checks each output
/// amplitude against the sum of `c_a · c_b` over the pairs that produce it.
pub fn run_compose(cfg: &ScenarioConfig) -> Result<RunResult, RunError> {
    let mut result = RunResult::new("compose", config_hash(cfg));
    let sups = &cfg.superpositions;
    if sups.len() < 2 {
        return Err(RunError::Setup(format!(
            "compose needs a chain of at least two superpositions, scenario has {}",
            sups.len()
        )));
    }
    let mut acc = sups[0].clone();
    let mut law_gap: f64 = 0.0;
    let mut steps = Vec::new();
    let start = Instant::now();
    for next in &sups[1..] {
        let pairs = FrameSuperposition::composed_pairs(&acc, next)?;
        let composed = acc.compose(next)?;
        let mut collisions = 0usize;
        for (t, c) in composed.terms() {
            let contributing: Vec<_> = pairs.iter().filter(|p| p.transform.approx_eq(t)).collect();
            collisions += contributing.len().saturating_sub(1);
            let expected: superframe_core::Amplitude = contributing.iter().map(|p| p.amplitude).sum();
            law_gap = law_gap.max((c - expected).norm());
        }
        steps.push(json!({
            "source": acc.source().as_str(),
            "via": next.source().as_str(),
            "target": next.target().as_str(),
            "pairs": pairs.len(),
            "terms": composed.len(),
            "collisions": collisions,
            "collision_free": composed.len() == pairs.len(),
        }));
        acc = composed;
    }
    result.timings.push(("compose".into(), start.elapsed().as_secs_f64()));
    result.push(Check::at_most("product_law", law_gap, PRODUCT_LAW_TOL));
    result.details = json!({
        "steps": steps,
        "composed": superposition_json(&acc),
        "total_weight": acc.total_weight(),
    });
    Ok(result)
}

/// Draws `n` Born samples from the first superposition with one seeded
/// stream and checks every frequency against a 3σ binomial band.
pub fn run_sample(cfg: &ScenarioConfig, n: u64) -> Result<RunResult, RunError> {
    let mut result = RunResult::new("sample", config_hash(cfg));
    result.param("n", n);
    result.param("seed", cfg.seed);
    if n == 0 {
        return Err(RunError::Setup("sample count must be at least 1".into()));
    }
    let sup = cfg
        .superpositions
        .first()
        .ok_or_else(|| RunError::Setup("scenario has no superposition to sample".into()))?;
    let counts = result.timed("sample", || {
        let sampler = BornSampler::new(sup);
        let mut rng = CounterRng::new(cfg.seed);
        let mut counts = vec![0u64; sup.len()];
        for _ in 0..n {
            counts[sampler.draw(&mut rng)] += 1;
        }
        counts
    });
    let mut rows = Vec::new();
    for (k, ((t, p), count)) in sup.born_probabilities().into_iter().zip(&counts).enumerate() {
        let freq = *count as f64 / n as f64;
        let band = 3.0 * (p * (1.0 - p) / n as f64).sqrt();
        result.push(Check::at_most(format!("frequency[{k}]"), (freq - p).abs(), band));
        let mut row = transform_json(&t);
        row["probability"] = json!(p);
        row["count"] = json!(count);
        row["frequency"] = json!(freq);
        row["band"] = json!(band);
        rows.push(row);
    }
    result.details = json!({ "terms": rows });
    Ok(result)
}

/// Commutation of evolution with the first superposition, plus the
/// potential, derivative, norm and energy checks.
pub fn run_invariance(cfg: &ScenarioConfig) -> Result<RunResult, RunError> {
    let mut result = RunResult::new("invariance", config_hash(cfg));
    let setup = cfg
        .fields
        .as_ref()
        .ok_or_else(|| RunError::Setup("invariance needs initial_state, potential and evolution".into()))?;
    let sup = cfg
        .superpositions
        .first()
        .ok_or_else(|| RunError::Setup("scenario has no superposition".into()))?;
    if sup.dim() != Dim::Two {
        return Err(RunError::Setup("invariance needs a 2-D superposition".into()));
    }
    let psi0 = &setup.initial;
    let v = &setup.potential;
    let p = &setup.params;
    let masses: Vec<f64> = vec![p.masses.first().copied().unwrap_or(1.0)];

    let report = transform_with_report(psi0, sup)?;
    let identity_only = sup.terms().iter().all(|(t, _)| t.is_identity());
    let lattice_exact = report.lattice_exact;
    let (residual_tol, gradient_tol, second_order_tol) = if identity_only {
        (IDENTITY_RESIDUAL_TOL, SPATIAL_DERIVATIVE_TOL, SPATIAL_DERIVATIVE_TOL)
    } else if lattice_exact {
        (LATTICE_RESIDUAL_TOL, SPATIAL_DERIVATIVE_TOL, SPATIAL_DERIVATIVE_TOL)
    } else {
        (RESAMPLED_TOL, RESAMPLED_TOL, RESAMPLED_SECOND_DERIVATIVE_TOL)
    };
    let temporal_tol = if lattice_exact {
        TEMPORAL_DERIVATIVE_TOL
    } else {
        RESAMPLED_SECOND_DERIVATIVE_TOL
    };
    result
        .diagnostics
        .extend(diagnose(psi0, v, p).iter().map(|d| d.to_string()));

    let run = result.timed("commutation", || commutation(psi0, v, p, sup))?;
    result.push(Check::at_most("commutation_residual", run.residual, residual_tol));

    let potential_gap = result.timed("potential", || {
        check_potential_invariance(v, sup, &setup.grid, 2, &masses)
    })?;
    result.push(Check::at_most("potential_invariance", potential_gap, POTENTIAL_TOL));

    let spatial = result.timed("derivatives", || {
        check_derivative_transform(psi0, sup, GradientReference::Discrete)
    })?;
    result.push(Check::at_most("gradient_transform", spatial.gradient, gradient_tol));
    result.push(Check::at_most(
        "laplacian_transform",
        spatial.laplacian,
        second_order_tol,
    ));
    let temporal = result.timed("time_derivative", || {
        check_time_derivative_transform(psi0, v, p, sup, TimeReference::Discrete)
    })?;
    result.push(Check::at_most("time_derivative_transform", temporal, temporal_tol));

    let norm0 = psi0.l2_norm();
    let norm1 = run.evolved.l2_norm();
    let norm_tol = 1e-12 * p.steps as f64 / 1000.0;
    result.push(Check::at_most("norm_drift", (norm1 - norm0).abs(), norm_tol));
    let e0 = energy(psi0, v, &masses);
    let e1 = energy(&run.evolved, v, &masses);
    let energy_drift = if e0 == 0.0 {
        (e1 - e0).abs()
    } else {
        ((e1 - e0) / e0).abs()
    };
    result.push(Check::at_most("energy_drift", energy_drift, ENERGY_DRIFT_TOL));

    let negative_control = !v.is_euclidean_invariant();
    if negative_control {
        for c in &mut result.checks {
            c.expected_fail = true;
        }
        result.passed = true;
    }

    result.details = json!({
        "superposition": superposition_json(sup),
        "lattice_exact": lattice_exact,
        "identity_only": identity_only,
        "clipped_fraction": report.clipped,
        "negative_control": negative_control,
        "potential": potential_name(v),
        "grid": { "n": setup.grid.n()[0], "extent": setup.grid.half_width()[0] },
        "dt": p.dt,
        "steps": p.steps,
        "duration": p.duration(),
        "norm": { "initial": norm0, "evolved": norm1 },
        "energy": { "initial": e0, "evolved": e1 },
        "transformed_norm": run.evolve_then_transform.l2_norm(),
    });
    if cfg.write_fields {
        result.fields = vec![
            ("initial".into(), psi0.clone()),
            ("evolved".into(), run.evolved),
            ("evolve_then_transform".into(), run.evolve_then_transform),
            ("transform_then_evolve".into(), run.transform_then_evolve),
        ];
    }
    Ok(result)
}

fn potential_name(v: &Potential) -> &'static str {
    match v {
        Potential::Free => "free",
        Potential::IsotropicHarmonic { .. } => "isotropic_harmonic",
        Potential::AnisotropicHarmonic { .. } => "anisotropic_harmonic",
        Potential::PairwiseCentral(_) => "pairwise_central",
    }
}

/// Finite check of the group-algebra composition on one group.
pub fn run_appendix_verification(group_name: &str, trials: u64, seed: u64) -> Result<RunResult, RunError> {
    let group = FiniteGroup::by_name(group_name)?;
    let hash_input = json!({ "group": group.name(), "trials": trials, "seed": seed });
    let mut result = RunResult::new("verify-appendix", sha256_hex(hash_input.to_string().as_bytes()));
    result.param("group", group.name());
    result.param("trials", trials);
    result.param("seed", seed);

    let (convolution_gap, total_gap) = result.timed("random_pairs", || {
        let mut rng = CounterRng::new(seed);
        let mut conv: f64 = 0.0;
        let mut total: f64 = 0.0;
        for _ in 0..trials {
            let a = GroupWavefunction::random(&group, &mut rng);
            let b = GroupWavefunction::random(&group, &mut rng);
            let ab = a.convolve(&b).expect("same group");
            for h in 0..group.order() {
                let brute = a.brute_force_restricted_sum(&b, h).expect("same group");
                conv = conv.max((ab.amplitudes()[h] - brute).norm());
            }
            total = total.max(a.total_sum_check(&b).expect("same group").deviation);
        }
        (conv, total)
    });
    let delta_gap = result.timed("delta_law", || {
        let mut worst: f64 = 0.0;
        for f in 0..group.order() {
            let df = GroupWavefunction::delta(&group, f).expect("element in range");
            for g in 0..group.order() {
                let dg = GroupWavefunction::delta(&group, g).expect("element in range");
                let want = GroupWavefunction::delta(&group, group.mul(f, g)).expect("element in range");
                let got = df.convolve(&dg).expect("same group");
                for (x, y) in got.amplitudes().iter().zip(want.amplitudes()) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
        worst
    });
    result.push(Check::at_most(
        "convolution_vs_brute_force",
        convolution_gap,
        APPENDIX_TOL,
    ));
    result.push(Check::at_most("delta_law", delta_gap, 0.0));
    result.push(Check::at_most("total_sum", total_gap, APPENDIX_TOL));
    result.details = json!({
        "group": group.name(),
        "order": group.order(),
        "abelian": group.is_abelian(),
        "trials": trials,
    });
    Ok(result)
}

/// Runs [`run_appendix_verification`] over several groups into one result.
pub fn run_appendix_suite(groups: &[&str], trials: u64, seed: u64) -> Result<RunResult, RunError> {
    let hash_input = json!({ "groups": groups, "trials": trials, "seed": seed });
    let mut result = RunResult::new("verify-appendix", sha256_hex(hash_input.to_string().as_bytes()));
    result.param("groups", groups);
    result.param("trials", trials);
    result.param("seed", seed);
    result.details = json!({});
    for name in groups {
        let one = run_appendix_verification(name, trials, seed)?;
        let label = one.details["group"].as_str().unwrap_or(name).to_string();
        result.absorb(&label, one);
    }
    Ok(result)
}
