//! Split-step spectral evolution and the evolve/transform commutation checks.
//!
//! Units are natural (ħ = 1). On the configuration grid the Hamiltonian is
//! `H = Σ_a k_a²/(2 m_a) + V(q)`, where axis `a` belongs to particle
//! `a / particle_dim`. One Strang step is `e^{-iV dt/2} F⁻¹ e^{-iT dt} F e^{-iV dt/2}`.

use std::fmt;

use num_complex::Complex64;
use superframe_core::wavefield::transform_config;
use superframe_core::{ConfigField, FrameSuperposition, GridError, GridSpec, Potential, WaveField};
use thiserror::Error;

use crate::fft::{wavenumbers, Fft2};

/// Spectral tail fraction above which the grid is considered under-resolved.
pub const SPECTRAL_TAIL_LIMIT: f64 = 1e-10;
/// Kick phases above this per step are flagged as too coarse.
pub const STIFFNESS_LIMIT: f64 = 0.1;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("time step must be finite and positive, got {0}")]
    BadTimeStep(f64),
    #[error("mass {index} must be finite and positive, got {value}")]
    BadMass { index: usize, value: f64 },
    #[error("state became non-finite after {steps} steps")]
    NonFinite { steps: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionParams {
    pub dt: f64,
    pub steps: usize,
    /// `m_I` per particle; particles beyond the list have mass 1.
    pub masses: Vec<f64>,
}

impl EvolutionParams {
    pub fn new(dt: f64, steps: usize, masses: Vec<f64>) -> Result<Self, EvolutionError> {
        if !(dt.is_finite() && dt > 0.0) || !(dt * steps as f64).is_finite() {
            return Err(EvolutionError::BadTimeStep(dt));
        }
        if let Some((index, &value)) = masses.iter().enumerate().find(|(_, m)| !(m.is_finite() && **m > 0.0)) {
            return Err(EvolutionError::BadMass { index, value });
        }
        Ok(EvolutionParams { dt, steps, masses })
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.steps as f64
    }

    fn mass(&self, particle: usize) -> f64 {
        self.masses.get(particle).copied().unwrap_or(1.0)
    }
}

/// Precondition violations that do not stop the run.
#[derive(Clone, Debug, PartialEq)]
pub enum Diagnostic {
    /// Fraction of `‖ψ‖²` in the outer half of the spectrum.
    UnderResolved { tail: f64 },
    /// `dt · max|V|` on the grid.
    CoarseStep { phase: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnderResolved { tail } => write!(
                f,
                "spectral tail holds {tail:.3e} of the norm (limit {SPECTRAL_TAIL_LIMIT:e}); refine the grid"
            ),
            Diagnostic::CoarseStep { phase } => write!(
                f,
                "dt·max|V| = {phase:.3e} exceeds {STIFFNESS_LIMIT}; reduce the time step"
            ),
        }
    }
}

/// A reusable Strang propagator for one grid, layout, potential and step.
pub struct SplitStep {
    fft: Fft2,
    half_kick: Vec<Complex64>,
    drift: Vec<Complex64>,
    dt: f64,
}

impl SplitStep {
    /// `dt` may be negative to step backwards.
    pub fn new(grid: &GridSpec, particle_dim: usize, potential: &Potential, masses: &[f64], dt: f64) -> Self {
        let [nx, ny] = grid.n();
        let mass_of_axis = |axis: usize| {
            let particle = if particle_dim == 2 { 0 } else { axis };
            masses.get(particle).copied().unwrap_or(1.0)
        };
        let kx = wavenumbers(nx, grid.spacing(0));
        let ky = wavenumbers(ny, grid.spacing(1));
        let (mx, my) = (mass_of_axis(0), mass_of_axis(1));
        let mut drift = Vec::with_capacity(grid.len());
        for y in &ky {
            for x in &kx {
                let t = x * x / (2.0 * mx) + y * y / (2.0 * my);
                drift.push(Complex64::from_polar(1.0, -t * dt));
            }
        }
        let half_kick = potential
            .sample(grid, particle_dim, masses)
            .into_iter()
            .map(|v| Complex64::from_polar(1.0, -0.5 * v * dt))
            .collect();
        SplitStep {
            fft: Fft2::new(nx, ny),
            half_kick,
            drift,
            dt,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&mut self, values: &mut [Complex64]) {
        for (v, k) in values.iter_mut().zip(&self.half_kick) {
            *v *= k;
        }
        self.fft.forward(values);
        for (v, d) in values.iter_mut().zip(&self.drift) {
            *v *= d;
        }
        self.fft.inverse(values);
        for (v, k) in values.iter_mut().zip(&self.half_kick) {
            *v *= k;
        }
    }
}

fn masses_for(params: &EvolutionParams, particles: usize) -> Vec<f64> {
    (0..particles).map(|i| params.mass(i)).collect()
}

fn propagate<F: ConfigField>(
    psi: &F,
    potential: &Potential,
    masses: &[f64],
    dt: f64,
    steps: usize,
) -> Result<F, EvolutionError> {
    let src = psi.field();
    let grid = *src.grid();
    let mut values = src.values().to_vec();
    let mut stepper = SplitStep::new(&grid, psi.particle_dim(), potential, masses, dt);
    for _ in 0..steps {
        stepper.step(&mut values);
    }
    let time = src.time() + dt * steps as f64;
    let field = WaveField::new(grid, values, time).map_err(|e| match e {
        GridError::NonFinite(_) => EvolutionError::NonFinite { steps },
        other => EvolutionError::Grid(other),
    })?;
    Ok(psi.with_field(field))
}

/// Evolves `psi` by `params.steps` Strang steps. Resolution problems are
/// logged as warnings; a non-finite result is an error.
pub fn evolve<F: ConfigField>(psi: &F, potential: &Potential, params: &EvolutionParams) -> Result<F, EvolutionError> {
    for d in diagnose(psi, potential, params) {
        log::warn!("{d}");
    }
    let masses = masses_for(params, psi.particle_count());
    propagate(psi, potential, &masses, params.dt, params.steps)
}

pub fn diagnose<F: ConfigField>(psi: &F, potential: &Potential, params: &EvolutionParams) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let tail = spectral_tail(psi.field());
    if tail > SPECTRAL_TAIL_LIMIT {
        out.push(Diagnostic::UnderResolved { tail });
    }
    let masses = masses_for(params, psi.particle_count());
    let phase = params.dt * potential.max_abs_on(psi.field().grid(), psi.particle_dim(), &masses);
    if phase > STIFFNESS_LIMIT {
        out.push(Diagnostic::CoarseStep { phase });
    }
    out
}

/// Fraction of `‖ψ‖²` carried by modes beyond half the Nyquist wavenumber on
/// either axis.
pub fn spectral_tail(psi: &WaveField) -> f64 {
    let [nx, ny] = psi.grid().n();
    let mut work = psi.values().to_vec();
    Fft2::new(nx, ny).forward(&mut work);
    let outer = |i: usize, n: usize| {
        let m = if i < n / 2 { i } else { n - i };
        m > n / 4
    };
    let mut tail = 0.0;
    let mut total = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let w = work[j * nx + i].norm_sqr();
            total += w;
            if outer(i, nx) || outer(j, ny) {
                tail += w;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩` with the kinetic term evaluated spectrally.
pub fn energy<F: ConfigField>(psi: &F, potential: &Potential, masses: &[f64]) -> f64 {
    let field = psi.field();
    let grid = field.grid();
    let [nx, ny] = grid.n();
    let mass_of_axis = |axis: usize| {
        let particle = if psi.particle_dim() == 2 { 0 } else { axis };
        masses.get(particle).copied().unwrap_or(1.0)
    };
    let kx = wavenumbers(nx, grid.spacing(0));
    let ky = wavenumbers(ny, grid.spacing(1));
    let mut spectrum = field.values().to_vec();
    Fft2::new(nx, ny).forward(&mut spectrum);
    let mut kinetic = 0.0;
    for (j, y) in ky.iter().enumerate() {
        for (i, x) in kx.iter().enumerate() {
            let t = x * x / (2.0 * mass_of_axis(0)) + y * y / (2.0 * mass_of_axis(1));
            kinetic += t * spectrum[j * nx + i].norm_sqr();
        }
    }
    kinetic /= (nx * ny) as f64;
    let v = potential.sample(grid, psi.particle_dim(), masses);
    let potential_energy: f64 = field.values().iter().zip(&v).map(|(p, v)| p.norm_sqr() * v).sum();
    let norm: f64 = field.values().iter().map(|p| p.norm_sqr()).sum();
    (kinetic + potential_energy) / norm
}

/// Both orders of evolving and transforming `ψ₀`.
#[derive(Clone, Debug)]
pub struct Commutation<F> {
    /// `U ψ₀`.
    pub evolved: F,
    /// `T(U ψ₀)`.
    pub evolve_then_transform: F,
    /// `U(T ψ₀)`.
    pub transform_then_evolve: F,
    /// `‖T(U ψ₀) − U(T ψ₀)‖ / ‖T(U ψ₀)‖`.
    pub residual: f64,
}

pub fn commutation<F: ConfigField>(
    psi0: &F,
    potential: &Potential,
    params: &EvolutionParams,
    sup: &FrameSuperposition,
) -> Result<Commutation<F>, EvolutionError> {
    let evolved = evolve(psi0, potential, params)?;
    let evolve_then_transform = transform_config(&evolved, sup)?;
    let transform_then_evolve = evolve(&transform_config(psi0, sup)?, potential, params)?;
    let scale = evolve_then_transform.field().l2_norm();
    let gap = evolve_then_transform
        .field()
        .l2_distance(transform_then_evolve.field())?;
    Ok(Commutation {
        evolved,
        evolve_then_transform,
        transform_then_evolve,
        residual: if scale == 0.0 { gap } else { gap / scale },
    })
}

/// `‖T(U ψ₀) − U(T ψ₀)‖ / ‖T(U ψ₀)‖` where `U` is the evolution and `T`
/// the frame transformation.
pub fn commutation_residual<F: ConfigField>(
    psi0: &F,
    potential: &Potential,
    params: &EvolutionParams,
    sup: &FrameSuperposition,
) -> Result<f64, EvolutionError> {
    Ok(commutation(psi0, potential, params, sup)?.residual)
}

/// What `∂_t ψ'` is compared against.
pub enum TimeReference<'a> {
    /// The transform of the same centered difference applied to `ψ`.
    Discrete,
    /// Exact `∂_t ψ(q, t)` evaluated at the mapped configuration points.
    Analytic(&'a dyn Fn([f64; 2], f64) -> Complex64),
}

/// Max-norm gap between the centered time difference (over one `dt`) of
/// the transformed state and the transformed time derivative.
pub fn check_time_derivative_transform<F: ConfigField>(
    psi: &F,
    potential: &Potential,
    params: &EvolutionParams,
    sup: &FrameSuperposition,
    reference: TimeReference<'_>,
) -> Result<f64, EvolutionError> {
    let masses = masses_for(params, psi.particle_count());
    let dt = params.dt;
    let centered = |state: &F| -> Result<Vec<Complex64>, EvolutionError> {
        let ahead = propagate(state, potential, &masses, dt, 1)?;
        let behind = propagate(state, potential, &masses, -dt, 1)?;
        Ok(ahead
            .field()
            .values()
            .iter()
            .zip(behind.field().values())
            .map(|(a, b)| (a - b) / (2.0 * dt))
            .collect())
    };

    let transformed = transform_config(psi, sup)?;
    let lhs = centered(&transformed)?;

    let grid = *psi.field().grid();
    let rhs: Vec<Complex64> = match reference {
        TimeReference::Discrete => {
            let d = WaveField::new(grid, centered(psi)?, psi.field().time())?;
            transform_config(&psi.with_field(d), sup)?.field().values().to_vec()
        }
        TimeReference::Analytic(exact) => {
            let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
            let time = psi.field().time();
            for (t, c) in sup.terms() {
                let map = superframe_core::resample::AffineMap::from_transform(t, psi.particle_dim())?;
                for (a, q) in acc.iter_mut().zip(grid.nodes()) {
                    *a += c * exact(map.apply(q), time);
                }
            }
            acc
        }
    };
    Ok(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};
    use superframe_core::{Amplitude, Dim, EuclideanTransform, FrameId, MultiParticleField};

    fn free_params(dt: f64, steps: usize) -> EvolutionParams {
        EvolutionParams::new(dt, steps, vec![1.0]).unwrap()
    }

    fn second_moments(psi: &WaveField) -> [f64; 2] {
        let mut m = [0.0; 2];
        let mut total = 0.0;
        for (q, v) in psi.grid().nodes().zip(psi.values()) {
            let w = v.norm_sqr();
            m[0] += w * q[0] * q[0];
            m[1] += w * q[1] * q[1];
            total += w;
        }
        [m[0] / total, m[1] / total]
    }

    fn quarter_pair() -> FrameSuperposition {
        let h = Amplitude::new(FRAC_1_SQRT_2, 0.0);
        FrameSuperposition::new(
            FrameId::new("O").unwrap(),
            FrameId::new("O'").unwrap(),
            [
                (EuclideanTransform::identity(Dim::Two), h),
                (EuclideanTransform::quarter_turns(1, [0.0, 0.0]).unwrap(), h),
            ],
        )
        .unwrap()
    }

    #[test]
    fn params_reject_bad_inputs() {
        assert!(EvolutionParams::new(0.0, 10, vec![]).is_err());
        assert!(EvolutionParams::new(f64::NAN, 10, vec![]).is_err());
        assert!(matches!(
            EvolutionParams::new(1e-3, 10, vec![1.0, -2.0]),
            Err(EvolutionError::BadMass { index: 1, .. })
        ));
    }

    #[test]
    fn zero_steps_is_the_identity() {
        let grid = GridSpec::square(32, 6.0).unwrap();
        let psi = WaveField::gaussian(grid, [0.5, 0.0], 1.0, [1.0, 0.0]);
        let out = evolve(
            &psi,
            &Potential::IsotropicHarmonic { omega: 1.0 },
            &free_params(1e-3, 0),
        )
        .unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn free_gaussian_spreads_at_the_analytic_rate() {
        let grid = GridSpec::square(256, 8.0).unwrap();
        let sigma0: f64 = 1.0;
        let psi = WaveField::gaussian(grid, [0.0, 0.0], sigma0, [0.0, 0.0]);
        let out = evolve(&psi, &Potential::Free, &free_params(1e-3, 1000)).unwrap();
        let t: f64 = 1.0;
        let want = sigma0 * sigma0 * (1.0 + t * t / sigma0.powi(4));
        for m in second_moments(&out) {
            // |ψ|² ∝ exp(−x²/σ²) per axis, so σ² = 2⟨x²⟩.
            assert!((2.0 * m - want).abs() <= 1e-6 * want, "{} vs {want}", 2.0 * m);
        }
    }

    #[test]
    fn coherent_state_revives_after_one_period() {
        let grid = GridSpec::square(128, 8.0).unwrap();
        let psi = WaveField::gaussian(grid, [2.0, 0.0], 1.0, [0.0, 1.0]);
        let steps = 4000;
        let params = free_params(2.0 * PI / steps as f64, steps);
        let out = evolve(&psi, &Potential::IsotropicHarmonic { omega: 1.0 }, &params).unwrap();
        let overlap = psi.inner(&out).unwrap().norm_sqr() / (psi.l2_norm().powi(2) * out.l2_norm().powi(2));
        assert!(overlap >= 1.0 - 1e-6, "fidelity {overlap}");
    }

    #[test]
    fn coherent_state_center_follows_the_classical_orbit() {
        let grid = GridSpec::square(128, 8.0).unwrap();
        let psi = WaveField::gaussian(grid, [2.0, 0.0], 1.0, [0.0, 2.0]);
        let steps = 1000;
        let params = free_params(0.5 * PI / steps as f64, steps);
        let out = evolve(&psi, &Potential::IsotropicHarmonic { omega: 1.0 }, &params).unwrap();
        let mut center = [0.0; 2];
        for (q, v) in grid.nodes().zip(out.values()) {
            center[0] += v.norm_sqr() * q[0] * grid.cell_area();
            center[1] += v.norm_sqr() * q[1] * grid.cell_area();
        }
        // Released from (2, 0) with momentum (0, 2): a quarter period later
        // the packet is at (0, 2).
        assert!(center[0].abs() < 1e-5 && (center[1] - 2.0).abs() < 1e-5, "{center:?}");
    }

    #[test]
    fn norm_is_conserved() {
        let grid = GridSpec::square(64, 8.0).unwrap();
        let psi = WaveField::gaussian(grid, [1.0, -0.5], 1.0, [0.5, 0.5]);
        let before = psi.l2_norm();
        let out = evolve(
            &psi,
            &Potential::IsotropicHarmonic { omega: 1.0 },
            &free_params(1e-3, 1000),
        )
        .unwrap();
        assert!((out.l2_norm() - before).abs() <= 1e-12);
    }

    fn relative_energy_drift(psi: &WaveField, v: &Potential, dt: f64, steps: usize) -> f64 {
        let e0 = energy(psi, v, &[1.0]);
        let out = evolve(psi, v, &free_params(dt, steps)).unwrap();
        (energy(&out, v, &[1.0]) - e0) / e0
    }

    #[test]
    fn energy_is_conserved_for_free_and_stationary_states() {
        let grid = GridSpec::square(64, 8.0).unwrap();
        let moving = WaveField::gaussian(grid, [1.0, -0.5], 1.0, [0.5, 0.5]);
        assert!(relative_energy_drift(&moving, &Potential::Free, 1e-3, 1000).abs() <= 1e-8);
        let ground = WaveField::gaussian(grid, [0.0, 0.0], 1.0, [0.0, 0.0]);
        let trap = Potential::IsotropicHarmonic { omega: 1.0 };
        assert!(relative_energy_drift(&ground, &trap, 1e-3, 1000).abs() <= 1e-8);
    }

    #[test]
    fn energy_error_of_a_moving_packet_is_second_order_in_dt() {
        let grid = GridSpec::square(64, 8.0).unwrap();
        let psi = WaveField::gaussian(grid, [1.0, -0.5], 1.0, [0.5, 0.5]);
        let trap = Potential::IsotropicHarmonic { omega: 1.0 };
        let fine = relative_energy_drift(&psi, &trap, 1e-3, 1000);
        let coarse = relative_energy_drift(&psi, &trap, 2e-3, 500);
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio} ({coarse:e} / {fine:e})");
    }

    #[test]
    fn evolution_is_linear() {
        let grid = GridSpec::square(32, 6.0).unwrap();
        let a = WaveField::gaussian(grid, [0.5, 0.0], 0.8, [1.0, 0.0]);
        let b = WaveField::gaussian(grid, [-0.5, 0.3], 0.7, [0.0, -1.0]);
        let (alpha, beta) = (Complex64::new(0.3, -1.2), Complex64::new(-0.7, 0.4));
        let v = Potential::IsotropicHarmonic { omega: 1.0 };
        let p = free_params(1e-2, 50);
        let combined = a.scaled(alpha).add_scaled(&b, beta).unwrap();
        let lhs = evolve(&combined, &v, &p).unwrap();
        let rhs = evolve(&a, &v, &p)
            .unwrap()
            .scaled(alpha)
            .add_scaled(&evolve(&b, &v, &p).unwrap(), beta)
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn backward_steps_undo_forward_steps() {
        let grid = GridSpec::square(32, 6.0).unwrap();
        let psi = WaveField::gaussian(grid, [0.5, 0.0], 0.8, [1.0, 0.0]);
        let v = Potential::IsotropicHarmonic { omega: 1.0 };
        let fwd = propagate(&psi, &v, &[1.0], 1e-2, 20).unwrap();
        let back = propagate(&fwd, &v, &[1.0], -1e-2, 20).unwrap();
        assert!(back.max_abs_diff(&psi).unwrap() <= 1e-12);
        assert!(back.time().abs() < 1e-15);
    }

    #[test]
    fn identity_superposition_commutes_exactly() {
        let grid = GridSpec::square(32, 6.0).unwrap();
        let psi = WaveField::gaussian(grid, [0.5, 0.0], 0.8, [1.0, 0.0]);
        let id = FrameSuperposition::delta(
            EuclideanTransform::identity(Dim::Two),
            FrameId::new("O").unwrap(),
            FrameId::new("O'").unwrap(),
        )
        .unwrap();
        let r = commutation_residual(&psi, &Potential::Free, &free_params(1e-3, 100), &id).unwrap();
        assert!(r <= 1e-13);
    }

    #[test]
    fn quarter_turns_commute_with_small_grid_evolution() {
        let grid = GridSpec::square(32, 6.0).unwrap();
        let psi = WaveField::gaussian(grid, [0.7, -0.2], 0.8, [1.0, 0.3]);
        let v = Potential::IsotropicHarmonic { omega: 1.0 };
        let r = commutation_residual(&psi, &v, &free_params(1e-2, 100), &quarter_pair()).unwrap();
        assert!(r <= 1e-12, "{r}");
    }

    #[test]
    fn two_particles_on_a_line_commute_with_common_translation() {
        let grid = GridSpec::square(128, 12.0).unwrap();
        let dx = grid.spacing(0);
        let field = WaveField::from_fn(grid, |x1, x2| {
            Complex64::new((-(x1 - 0.5).powi(2) - (x2 + 0.5).powi(2)).exp(), 0.0)
        });
        let psi = MultiParticleField::new(field, 1).unwrap();
        // Soft repulsion tabulated on the grid's own distance lattice, so the
        // sampled potential has no interpolation kinks (their momentum tails
        // would reach the clipped border).
        let r: Vec<f64> = (0..=64).map(|i| i as f64 * dx).collect();
        let v: Vec<f64> = r.iter().map(|r| 0.5 * (-r * r).exp()).collect();
        let v = Potential::PairwiseCentral(superframe_core::RadialTable::new(r, v).unwrap());
        let h = Amplitude::new(FRAC_1_SQRT_2, 0.0);
        let sup = FrameSuperposition::new(
            FrameId::new("O").unwrap(),
            FrameId::new("O'").unwrap(),
            [
                (EuclideanTransform::translation_only(&[4.0 * dx]).unwrap(), h),
                (EuclideanTransform::translation_only(&[-4.0 * dx]).unwrap(), h),
            ],
        )
        .unwrap();
        let p = EvolutionParams::new(1e-2, 50, vec![1.0, 2.0]).unwrap();
        let r = commutation_residual(&psi, &v, &p, &sup).unwrap();
        assert!(r <= 1e-12, "{r}");
    }

    #[test]
    fn time_derivative_discrete_route_is_exact_for_quarter_turns() {
        let grid = GridSpec::square(64, 8.0).unwrap();
        let psi = WaveField::gaussian(grid, [0.7, -0.2], 1.0, [1.0, 0.3]);
        let d = check_time_derivative_transform(
            &psi,
            &Potential::Free,
            &free_params(1e-3, 1),
            &quarter_pair(),
            TimeReference::Discrete,
        )
        .unwrap();
        assert!(d <= 1e-10, "{d}");
    }

    #[test]
    fn under_resolved_state_is_flagged() {
        let grid = GridSpec::square(16, 8.0).unwrap();
        let spiky = WaveField::spike(grid, 8, 8);
        let d = diagnose(&spiky, &Potential::Free, &free_params(1e-3, 1));
        assert!(matches!(d[0], Diagnostic::UnderResolved { .. }));
        let stiff = diagnose(
            &WaveField::gaussian(grid, [0.0, 0.0], 1.0, [0.0, 0.0]),
            &Potential::IsotropicHarmonic { omega: 10.0 },
            &free_params(1e-2, 1),
        );
        assert!(stiff.iter().any(|d| matches!(d, Diagnostic::CoarseStep { .. })));
    }
}
