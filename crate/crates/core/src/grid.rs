//! Uniform two-axis grids and complex fields sampled on them.
//!
//! Nodes sit at `x_i = (i − n/2)·dx`, `dx = 2L/n`, so the origin is a node
//! and the grid covers `[-L, L)` per axis. Values are stored row-major with
//! `x` fastest: `index = j·n_x + i`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("axis {axis}: {n} points is not a power of two ≥ 4")]
    NotPowerOfTwo { axis: usize, n: usize },
    #[error("axis {axis}: half-width {half_width} must be positive and finite")]
    BadExtent { axis: usize, half_width: f64 },
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("field value {0} is not finite")]
    NonFinite(usize),
    #[error("fields live on different grids")]
    Mismatch,
    #[error("{fraction:e} of the norm² falls outside the grid after transformation")]
    Clipped { fraction: f64 },
    #[error("transform is {got}-D but the field needs {expected}-D transforms")]
    Dimension { expected: usize, got: usize },
    #[error("particle dimension must be 1 or 2, got {0}")]
    ParticleLayout(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    n: [usize; 2],
    half_width: [f64; 2],
}

impl GridSpec {
    pub fn new(n: [usize; 2], half_width: [f64; 2]) -> Result<Self, GridError> {
        for axis in 0..2 {
            if n[axis] < 4 || !n[axis].is_power_of_two() {
                return Err(GridError::NotPowerOfTwo { axis, n: n[axis] });
            }
            let l = half_width[axis];
            if !(l.is_finite() && l > 0.0) {
                return Err(GridError::BadExtent { axis, half_width: l });
            }
        }
        Ok(GridSpec { n, half_width })
    }

    pub fn square(n: usize, half_width: f64) -> Result<Self, GridError> {
        Self::new([n, n], [half_width, half_width])
    }

    pub fn n(&self) -> [usize; 2] {
        self.n
    }

    pub fn half_width(&self) -> [f64; 2] {
        self.half_width
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.half_width[axis] / self.n[axis] as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing(0) * self.spacing(1)
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        (i as f64 - (self.n[axis] / 2) as f64) * self.spacing(axis)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n[0] + i
    }

    /// Node coordinates in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.n[1]).flat_map(move |j| (0..self.n[0]).map(move |i| [self.coord(0, i), self.coord(1, j)]))
    }

    /// Whether `p` lies in the closed square `[-L, L]²` (with a rounding
    /// allowance of `1e-9·dx`).
    pub fn contains(&self, p: [f64; 2]) -> bool {
        (0..2).all(|a| p[a].abs() <= self.half_width[a] + 1e-9 * self.spacing(a))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveField {
    grid: GridSpec,
    values: Vec<Complex64>,
    time: f64,
}

impl WaveField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, time: f64) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::Length {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(GridError::NonFinite(i));
        }
        Ok(WaveField { grid, values, time })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        WaveField {
            grid,
            values: alloc::vec![Complex64::new(0.0, 0.0); grid.len()],
            time: 0.0,
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = grid.nodes().map(|[x, y]| f(x, y)).collect();
        WaveField {
            grid,
            values,
            time: 0.0,
        }
    }

    /// Normalized Gaussian packet
    /// `ψ = (√π σ)⁻¹ exp(−|x − c|²/(2σ²) + i k·x)`.
    pub fn gaussian(grid: GridSpec, center: [f64; 2], sigma: f64, momentum: [f64; 2]) -> Self {
        let norm = 1.0 / (core::f64::consts::PI.sqrt() * sigma);
        Self::from_fn(grid, |x, y| {
            let (dx, dy) = (x - center[0], y - center[1]);
            let envelope = norm * (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
            Complex64::from_polar(envelope, momentum[0] * x + momentum[1] * y)
        })
    }

    /// Discrete position eigenstate: one node carrying the whole norm.
    pub fn spike(grid: GridSpec, i: usize, j: usize) -> Self {
        let mut field = Self::zeros(grid);
        let k = grid.index(i, j);
        field.values[k] = Complex64::new(1.0 / grid.cell_area().sqrt(), 0.0);
        field
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    /// `⟨self|other⟩ = Σ conj(self)·other·dx·dy`.
    pub fn inner(&self, other: &Self) -> Result<Complex64, GridError> {
        self.check_grid(other)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.cell_area())
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|c| c.norm_sqr()).sum();
        (s * self.grid.cell_area()).sqrt()
    }

    pub fn l2_distance(&self, other: &Self) -> Result<f64, GridError> {
        self.check_grid(other)?;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.grid.cell_area()).sqrt())
    }

    /// Largest pointwise `|self − other|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, GridError> {
        self.check_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        WaveField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
            time: self.time,
        }
    }

    /// `self + factor·other`.
    pub fn add_scaled(&self, other: &Self, factor: Complex64) -> Result<Self, GridError> {
        self.check_grid(other)?;
        Ok(WaveField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + factor * b)
                .collect(),
            time: self.time,
        })
    }

    pub fn normalized(&self) -> Self {
        self.scaled(Complex64::new(1.0 / self.l2_norm(), 0.0))
    }

    fn check_grid(&self, other: &Self) -> Result<(), GridError> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(GridError::Mismatch)
        }
    }
}

/// Wavefunction over the product grid of several particles' coordinates.
/// With two grid axes this is either one particle in 2-D
/// (`particle_dim = 2`) or two particles in 1-D (`particle_dim = 1`, axis 0
/// is particle 1, axis 1 is particle 2).
#[derive(Clone, Debug, PartialEq)]
pub struct MultiParticleField {
    field: WaveField,
    particle_dim: usize,
}

impl MultiParticleField {
    pub fn new(field: WaveField, particle_dim: usize) -> Result<Self, GridError> {
        if !(particle_dim == 1 || particle_dim == 2) {
            return Err(GridError::ParticleLayout(particle_dim));
        }
        Ok(MultiParticleField { field, particle_dim })
    }

    pub fn particles(&self) -> usize {
        2 / self.particle_dim
    }

    pub fn into_field(self) -> WaveField {
        self.field
    }
}

/// A gridded wavefunction together with how its axes split into particles.
pub trait ConfigField: Clone {
    fn field(&self) -> &WaveField;
    fn particle_dim(&self) -> usize;
    fn with_field(&self, field: WaveField) -> Self;

    fn particle_count(&self) -> usize {
        2 / self.particle_dim()
    }
}

impl ConfigField for WaveField {
    fn field(&self) -> &WaveField {
        self
    }

    fn particle_dim(&self) -> usize {
        2
    }

    fn with_field(&self, field: WaveField) -> Self {
        field
    }
}

impl ConfigField for MultiParticleField {
    fn field(&self) -> &WaveField {
        &self.field
    }

    fn particle_dim(&self) -> usize {
        self.particle_dim
    }

    fn with_field(&self, field: WaveField) -> Self {
        MultiParticleField {
            field,
            particle_dim: self.particle_dim,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::square(64, 8.0).is_ok());
        assert!(matches!(
            GridSpec::square(48, 8.0),
            Err(GridError::NotPowerOfTwo { .. })
        ));
        assert!(matches!(GridSpec::square(2, 8.0), Err(GridError::NotPowerOfTwo { .. })));
        assert!(matches!(GridSpec::square(64, 0.0), Err(GridError::BadExtent { .. })));
    }

    #[test]
    fn origin_is_a_node() {
        let g = GridSpec::new([16, 32], [4.0, 2.0]).unwrap();
        assert_eq!(g.coord(0, 8), 0.0);
        assert_eq!(g.coord(1, 16), 0.0);
        assert_eq!(g.coord(0, 0), -4.0);
        assert_eq!(g.spacing(1), 0.125);
        let nodes: Vec<_> = g.nodes().take(2).collect();
        assert_eq!(nodes, [[-4.0, -2.0], [-3.5, -2.0]]);
    }

    #[test]
    fn normalized_gaussian_has_unit_norm() {
        let g = GridSpec::square(128, 8.0).unwrap();
        let psi = WaveField::gaussian(g, [0.5, -1.0], 1.0, [1.0, 0.5]);
        assert!((psi.l2_norm() - 1.0).abs() < 1e-10);
        assert_eq!(psi.l2_distance(&psi).unwrap(), 0.0);
        let spike = WaveField::spike(g, 3, 4);
        assert!((spike.l2_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = WaveField::zeros(GridSpec::square(16, 8.0).unwrap());
        let b = WaveField::zeros(GridSpec::square(16, 4.0).unwrap());
        assert_eq!(a.l2_distance(&b), Err(GridError::Mismatch));
        assert!(WaveField::new(*a.grid(), alloc::vec![], 0.0).is_err());
    }

    #[test]
    fn distance_is_symmetric() {
        let g = GridSpec::square(32, 6.0).unwrap();
        let a = WaveField::gaussian(g, [0.0, 0.0], 1.0, [0.0, 0.0]);
        let b = WaveField::gaussian(g, [0.5, 0.0], 1.2, [0.3, 0.0]);
        assert_eq!(a.l2_distance(&b).unwrap(), b.l2_distance(&a).unwrap());
        assert!(a.l2_distance(&b).unwrap() > 0.0);
    }
}
