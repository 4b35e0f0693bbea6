//! External and interaction potentials on configuration space.

use alloc::vec::Vec;

use thiserror::Error;

use crate::grid::{GridError, GridSpec};
use crate::resample::AffineMap;
use crate::superposition::FrameSuperposition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("radial table needs at least two points with strictly increasing r ≥ 0")]
    BadTable,
    #[error("parameter {0} must be finite")]
    NonFinite(&'static str),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Piecewise-linear `v(r)`, clamped to the end values outside the table.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialTable {
    r: Vec<f64>,
    v: Vec<f64>,
}

impl RadialTable {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self, PotentialError> {
        let ordered = r.windows(2).all(|w| w[0] < w[1]);
        if r.len() < 2 || r.len() != v.len() || !ordered || r[0] < 0.0 {
            return Err(PotentialError::BadTable);
        }
        if r.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(PotentialError::NonFinite("radial table"));
        }
        Ok(RadialTable { r, v })
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn eval(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r <= self.r[0] {
            return self.v[0];
        }
        if r >= self.r[n - 1] {
            return self.v[n - 1];
        }
        let k = self.r.partition_point(|&x| x <= r) - 1;
        let t = (r - self.r[k]) / (self.r[k + 1] - self.r[k]);
        self.v[k] + t * (self.v[k + 1] - self.v[k])
    }
}

/// Potentials in natural units (ħ = 1). Harmonic terms are
/// `½ m_I ω² |x_I|²` so that `ω` is the oscillation frequency for any mass.
#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    Free,
    IsotropicHarmonic {
        omega: f64,
    },
    /// Per-axis frequencies; not rotation invariant. Used as a negative
    /// control.
    AnisotropicHarmonic {
        omega: [f64; 2],
    },
    /// `Σ_{I<J} v(|x_I − x_J|)`.
    PairwiseCentral(RadialTable),
}

impl Potential {
    /// Whether the potential is invariant under every rigid motion.
    pub fn is_euclidean_invariant(&self) -> bool {
        match self {
            Potential::Free | Potential::IsotropicHarmonic { .. } | Potential::PairwiseCentral(_) => true,
            Potential::AnisotropicHarmonic { omega } => omega[0] == omega[1],
        }
    }

    /// Energy at a configuration-space point. `masses[I]` belongs to
    /// particle `I`; missing entries default to 1.
    pub fn value(&self, q: [f64; 2], particle_dim: usize, masses: &[f64]) -> f64 {
        let mass = |i: usize| masses.get(i).copied().unwrap_or(1.0);
        match self {
            Potential::Free => 0.0,
            Potential::IsotropicHarmonic { omega } => {
                if particle_dim == 2 {
                    0.5 * mass(0) * omega * omega * (q[0] * q[0] + q[1] * q[1])
                } else {
                    0.5 * omega * omega * (mass(0) * q[0] * q[0] + mass(1) * q[1] * q[1])
                }
            }
            Potential::AnisotropicHarmonic { omega } => {
                if particle_dim == 2 {
                    0.5 * mass(0) * (omega[0] * omega[0] * q[0] * q[0] + omega[1] * omega[1] * q[1] * q[1])
                } else {
                    // One spatial axis: the first frequency applies to both particles.
                    0.5 * omega[0] * omega[0] * (mass(0) * q[0] * q[0] + mass(1) * q[1] * q[1])
                }
            }
            Potential::PairwiseCentral(table) => {
                if particle_dim == 1 {
                    table.eval((q[0] - q[1]).abs())
                } else {
                    0.0
                }
            }
        }
    }

    /// Samples the potential on every grid node.
    pub fn sample(&self, grid: &GridSpec, particle_dim: usize, masses: &[f64]) -> Vec<f64> {
        grid.nodes().map(|q| self.value(q, particle_dim, masses)).collect()
    }

    pub fn max_abs_on(&self, grid: &GridSpec, particle_dim: usize, masses: &[f64]) -> f64 {
        self.sample(grid, particle_dim, masses)
            .into_iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `max_{k, nodes} |V(T_k x) − V(x)|` over the support of `sup`.
pub fn check_potential_invariance(
    potential: &Potential,
    sup: &FrameSuperposition,
    grid: &GridSpec,
    particle_dim: usize,
    masses: &[f64],
) -> Result<f64, PotentialError> {
    let mut worst: f64 = 0.0;
    for (t, _) in sup.terms() {
        let map = AffineMap::from_transform(t, particle_dim)?;
        for q in grid.nodes() {
            let moved = potential.value(map.apply(q), particle_dim, masses);
            let here = potential.value(q, particle_dim, masses);
            worst = worst.max((moved - here).abs());
        }
    }
    Ok(worst)
}
