//! Scenario files: the JSON schema, its validation and the derived runtime
//! objects.
//!
//! A [`ScenarioFile`] mirrors the JSON exactly and serializes back to an
//! equivalent document. [`ScenarioConfig::from_file`] checks every invariant
//! and builds the superpositions, initial state, potential and evolution
//! parameters used by the runners.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use superframe_core::{
    Amplitude, Dim, EuclideanTransform, FrameId, FrameSuperposition, GridSpec, Potential, RadialTable, WaveField,
};
use thiserror::Error;

use crate::schrodinger::EvolutionParams;

pub const DEFAULT_GRID_N: usize = 256;
pub const DEFAULT_EXTENT: f64 = 8.0;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema violation at `{key}` (line {line}, column {column}): {message}")]
    Schema {
        key: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid value at `{key}`: {message}")]
    Invalid { key: String, message: String },
}

fn invalid(key: impl Into<String>, message: impl ToString) -> ScenarioError {
    ScenarioError::Invalid {
        key: key.into(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dimension: usize,
    pub frames: Vec<String>,
    pub superpositions: Vec<SuperpositionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialStateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<String>,
}

fn default_outputs() -> Vec<String> {
    vec!["report".to_string()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperpositionSpec {
    pub source: String,
    pub target: String,
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<RotationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<f64>>,
    pub amplitude: ComplexSpec,
}

/// Either an angle (degrees, with an axis in 3-D) or an explicit row-major
/// matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialStateSpec {
    Gaussian {
        center: [f64; 2],
        sigma: f64,
        #[serde(default)]
        momentum: [f64; 2],
    },
    /// Unit-norm spike on the node nearest `position`.
    Spike { position: [f64; 2] },
    /// Ground-state width `1/√(mω)` displaced to `center`.
    Coherent {
        center: [f64; 2],
        #[serde(default)]
        momentum: [f64; 2],
        #[serde(default = "one")]
        omega: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Free,
    IsotropicHarmonic { omega: f64 },
    AnisotropicHarmonic { omega: [f64; 2] },
    PairwiseCentral { r: Vec<f64>, v: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSpec {
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "unit_masses")]
    pub masses: Vec<f64>,
    #[serde(default)]
    pub grid: GridConfig,
}

fn unit_masses() -> Vec<f64> {
    vec![1.0]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    /// Half-width `L` of the square `[-L, L]²`.
    #[serde(default = "default_extent")]
    pub extent: f64,
}

fn default_n() -> usize {
    DEFAULT_GRID_N
}

fn default_extent() -> f64 {
    DEFAULT_EXTENT
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n: DEFAULT_GRID_N,
            extent: DEFAULT_EXTENT,
        }
    }
}

pub const KNOWN_OUTPUTS: [&str; 2] = ["report", "fields"];

impl ScenarioFile {
    /// Parses JSON text, reporting the offending key path and position on
    /// schema violations.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let parsed: Result<ScenarioFile, _> = serde_path_to_error::deserialize(&mut de);
        let file = parsed.map_err(|e| {
            let key = e.path().to_string();
            let inner = e.into_inner();
            ScenarioError::Schema {
                key,
                line: inner.line(),
                column: inner.column(),
                message: strip_position(&inner.to_string()),
            }
        })?;
        de.end().map_err(|e| ScenarioError::Schema {
            key: ".".to_string(),
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files serialize")
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub raw: ScenarioFile,
    pub dim: Dim,
    pub frames: Vec<FrameId>,
    pub superpositions: Vec<FrameSuperposition>,
    pub fields: Option<FieldSetup>,
    pub seed: u64,
    pub write_fields: bool,
}

/// Everything needed to evolve and transform a field.
#[derive(Clone, Debug)]
pub struct FieldSetup {
    pub grid: GridSpec,
    pub initial: WaveField,
    pub potential: Potential,
    pub params: EvolutionParams,
}

pub fn parse_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ScenarioConfig::from_file(ScenarioFile::from_json(&text)?)
}

impl ScenarioConfig {
    pub fn from_file(raw: ScenarioFile) -> Result<Self, ScenarioError> {
        let dim = match raw.dimension {
            2 => Dim::Two,
            3 => Dim::Three,
            other => return Err(invalid("dimension", format!("must be 2 or 3, got {other}"))),
        };

        let mut frames = Vec::with_capacity(raw.frames.len());
        let mut seen = BTreeSet::new();
        for (i, label) in raw.frames.iter().enumerate() {
            let id = FrameId::new(label.clone()).map_err(|e| invalid(format!("frames[{i}]"), e))?;
            if !seen.insert(label.clone()) {
                return Err(invalid(format!("frames[{i}]"), format!("duplicate frame {label:?}")));
            }
            frames.push(id);
        }

        let resolve = |key: String, label: &str| -> Result<FrameId, ScenarioError> {
            frames
                .iter()
                .find(|f| f.as_str() == label)
                .cloned()
                .ok_or_else(|| invalid(key, format!("unknown frame {label:?}")))
        };

        let mut superpositions = Vec::with_capacity(raw.superpositions.len());
        for (s, spec) in raw.superpositions.iter().enumerate() {
            let key = format!("superpositions[{s}]");
            let source = resolve(format!("{key}.source"), &spec.source)?;
            let target = resolve(format!("{key}.target"), &spec.target)?;
            let mut terms = Vec::with_capacity(spec.terms.len());
            for (t, term) in spec.terms.iter().enumerate() {
                terms.push(build_term(dim, &format!("{key}.terms[{t}]"), term)?);
            }
            let sup = FrameSuperposition::new(source, target, terms).map_err(|e| invalid(key.clone(), e))?;
            superpositions.push(sup);
        }

        let fields = build_fields(&raw, dim)?;

        let mut write_fields = false;
        for (i, name) in raw.outputs.iter().enumerate() {
            match name.as_str() {
                "report" => {}
                "fields" => write_fields = true,
                other => {
                    return Err(invalid(
                        format!("outputs[{i}]"),
                        format!("unknown output {other:?}; expected one of {KNOWN_OUTPUTS:?}"),
                    ))
                }
            }
        }

        Ok(ScenarioConfig {
            dim,
            frames,
            superpositions,
            fields,
            seed: raw.seed,
            write_fields,
            raw,
        })
    }
}

fn build_term(dim: Dim, key: &str, term: &TermSpec) -> Result<(EuclideanTransform, Amplitude), ScenarioError> {
    let d = dim.get();
    let translation = term.translation.clone().unwrap_or_else(|| vec![0.0; d]);
    if translation.len() != d {
        return Err(invalid(
            format!("{key}.translation"),
            format!("expected {d} components, got {}", translation.len()),
        ));
    }
    let rotation = match &term.rotation {
        None => identity_rows(d),
        Some(spec) => rotation_rows(dim, &format!("{key}.rotation"), spec)?,
    };
    let t = EuclideanTransform::from_parts(dim, &rotation, &translation).map_err(|e| invalid(key, e))?;
    let c = Amplitude::new(term.amplitude.re, term.amplitude.im);
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(invalid(format!("{key}.amplitude"), "must be finite"));
    }
    Ok((t, c))
}

fn identity_rows(d: usize) -> Vec<f64> {
    (0..d * d).map(|k| if k / d == k % d { 1.0 } else { 0.0 }).collect()
}

fn rotation_rows(dim: Dim, key: &str, spec: &RotationSpec) -> Result<Vec<f64>, ScenarioError> {
    let d = dim.get();
    match (spec.angle_deg, &spec.matrix) {
        (Some(_), Some(_)) => Err(invalid(key, "give either angle_deg or matrix, not both")),
        (None, None) => Err(invalid(key, "needs angle_deg or matrix")),
        (None, Some(rows)) => {
            if spec.axis.is_some() {
                return Err(invalid(format!("{key}.axis"), "only used with angle_deg"));
            }
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(invalid(format!("{key}.matrix"), format!("must be {d}×{d}")));
            }
            Ok(rows.iter().flatten().copied().collect())
        }
        (Some(deg), None) => {
            let angle = deg.to_radians();
            let t = match (dim, spec.axis) {
                (Dim::Two, None) => EuclideanTransform::planar(angle, [0.0, 0.0]),
                (Dim::Two, Some(_)) => return Err(invalid(format!("{key}.axis"), "not used in 2-D")),
                (_, Some(axis)) => EuclideanTransform::axis_angle(axis, angle, [0.0; 3]),
                (_, None) => return Err(invalid(format!("{key}.axis"), "required in 3-D")),
            }
            .map_err(|e| invalid(key, e))?;
            let r = t.rotation();
            Ok((0..d * d).map(|k| r[k / d][k % d]).collect())
        }
    }
}

fn build_fields(raw: &ScenarioFile, dim: Dim) -> Result<Option<FieldSetup>, ScenarioError> {
    let (state, potential, evolution) = match (&raw.initial_state, &raw.potential, &raw.evolution) {
        (None, None, None) => return Ok(None),
        (Some(s), Some(p), Some(e)) => (s, p, e),
        _ => {
            return Err(invalid(
                "initial_state",
                "initial_state, potential and evolution must be given together",
            ))
        }
    };
    if dim != Dim::Two {
        return Err(invalid("dimension", "field scenarios need dimension 2"));
    }
    let grid = GridSpec::square(evolution.grid.n, evolution.grid.extent).map_err(|e| invalid("evolution.grid", e))?;
    let params = EvolutionParams::new(evolution.dt, evolution.steps, evolution.masses.clone())
        .map_err(|e| invalid("evolution", e))?;
    let potential = match potential {
        PotentialSpec::Free => Potential::Free,
        PotentialSpec::IsotropicHarmonic { omega } => {
            finite("potential.omega", *omega)?;
            Potential::IsotropicHarmonic { omega: *omega }
        }
        PotentialSpec::AnisotropicHarmonic { omega } => {
            finite("potential.omega", omega[0])?;
            finite("potential.omega", omega[1])?;
            Potential::AnisotropicHarmonic { omega: *omega }
        }
        PotentialSpec::PairwiseCentral { r, v } => {
            Potential::PairwiseCentral(RadialTable::new(r.clone(), v.clone()).map_err(|e| invalid("potential", e))?)
        }
    };
    let mass = params.masses.first().copied().unwrap_or(1.0);
    let initial = match state {
        InitialStateSpec::Gaussian {
            center,
            sigma,
            momentum,
        } => {
            if !(sigma.is_finite() && *sigma > 0.0) {
                return Err(invalid("initial_state.sigma", "must be finite and positive"));
            }
            WaveField::gaussian(grid, *center, *sigma, *momentum)
        }
        InitialStateSpec::Coherent {
            center,
            momentum,
            omega,
        } => {
            if !(omega.is_finite() && *omega > 0.0) {
                return Err(invalid("initial_state.omega", "must be finite and positive"));
            }
            WaveField::gaussian(grid, *center, 1.0 / (mass * omega).sqrt(), *momentum)
        }
        InitialStateSpec::Spike { position } => {
            if !grid.contains(*position) {
                return Err(invalid("initial_state.position", "outside the grid"));
            }
            let index = |axis: usize| {
                let n = grid.n()[axis];
                let i = (position[axis] / grid.spacing(axis)).round() as i64 + (n / 2) as i64;
                i.rem_euclid(n as i64) as usize
            };
            WaveField::spike(grid, index(0), index(1))
        }
    };
    Ok(Some(FieldSetup {
        grid,
        initial,
        potential,
        params,
    }))
}

fn finite(key: &str, v: f64) -> Result<(), ScenarioError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, "must be finite"))
    }
}
