//! Transforming wavefunctions into a superposed frame:
//! `ψ'(x') = Σ_k c_k ψ(T_k x')`, with every particle moved by the same
//! `T_k` within a term. Time is untouched.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::{ConfigField, GridError, MultiParticleField, WaveField};
use crate::resample::{is_lattice_exact, resample, AffineMap};
use crate::superposition::FrameSuperposition;

/// Transformation fails when more than this fraction of the norm² would be
/// pushed off the grid.
pub const MAX_CLIPPED_FRACTION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Transformed<F> {
    pub field: F,
    /// Largest per-term fraction of `‖ψ‖²` not visible to any output node.
    pub clipped: f64,
    /// Every term was applied as an exact index permutation.
    pub lattice_exact: bool,
}

/// Applies `sup` without failing on clipping; the caller inspects the report.
pub fn transform_with_report<F: ConfigField>(psi: &F, sup: &FrameSuperposition) -> Result<Transformed<F>, GridError> {
    let src = psi.field();
    let grid = *src.grid();
    let mut acc = alloc::vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut clipped: f64 = 0.0;
    let mut lattice_exact = true;
    for (t, c) in sup.terms() {
        let map = AffineMap::from_transform(t, psi.particle_dim())?;
        lattice_exact &= is_lattice_exact(&map, &grid);
        let (moved, lost) = resample(src, &map);
        clipped = clipped.max(lost);
        for (a, v) in acc.iter_mut().zip(moved.values()) {
            *a += c * v;
        }
    }
    let field = WaveField::new(grid, acc, src.time())?;
    Ok(Transformed {
        field: psi.with_field(field),
        clipped,
        lattice_exact,
    })
}

/// `ψ'(x') = Σ_k c_k ψ(T_k x')` for any particle layout.
pub fn transform_config<F: ConfigField>(psi: &F, sup: &FrameSuperposition) -> Result<F, GridError> {
    let out = transform_with_report(psi, sup)?;
    if out.clipped > MAX_CLIPPED_FRACTION {
        return Err(GridError::Clipped { fraction: out.clipped });
    }
    Ok(out.field)
}

/// Single particle in the plane.
pub fn transform_field(psi: &WaveField, sup: &FrameSuperposition) -> Result<WaveField, GridError> {
    transform_config(psi, sup)
}

/// `ψ'(x'₁, …, x'_n) = Σ_k c_k ψ(T_k x'₁, …, T_k x'_n)`.
pub fn transform_multiparticle(
    psi: &MultiParticleField,
    sup: &FrameSuperposition,
) -> Result<MultiParticleField, GridError> {
    transform_config(psi, sup)
}

/// Periodic second-order central differences `[∂ₓψ, ∂ᵧψ]`.
pub fn central_gradient(psi: &WaveField) -> [WaveField; 2] {
    let grid = *psi.grid();
    let [nx, ny] = grid.n();
    let (hx, hy) = (0.5 / grid.spacing(0), 0.5 / grid.spacing(1));
    let mut gx = Vec::with_capacity(grid.len());
    let mut gy = Vec::with_capacity(grid.len());
    for j in 0..ny {
        let (jm, jp) = ((j + ny - 1) % ny, (j + 1) % ny);
        for i in 0..nx {
            let (im, ip) = ((i + nx - 1) % nx, (i + 1) % nx);
            gx.push((psi.at(ip, j) - psi.at(im, j)) * hx);
            gy.push((psi.at(i, jp) - psi.at(i, jm)) * hy);
        }
    }
    [
        WaveField::new(grid, gx, psi.time()).expect("finite differences of finite values"),
        WaveField::new(grid, gy, psi.time()).expect("finite differences of finite values"),
    ]
}

/// Periodic five-point Laplacian.
pub fn central_laplacian(psi: &WaveField) -> WaveField {
    let grid = *psi.grid();
    let [nx, ny] = grid.n();
    let (cx, cy) = (1.0 / grid.spacing(0).powi(2), 1.0 / grid.spacing(1).powi(2));
    let mut out = Vec::with_capacity(grid.len());
    for j in 0..ny {
        let (jm, jp) = ((j + ny - 1) % ny, (j + 1) % ny);
        for i in 0..nx {
            let (im, ip) = ((i + nx - 1) % nx, (i + 1) % nx);
            let c = psi.at(i, j);
            out.push((psi.at(ip, j) - c * 2.0 + psi.at(im, j)) * cx + (psi.at(i, jp) - c * 2.0 + psi.at(i, jm)) * cy);
        }
    }
    WaveField::new(grid, out, psi.time()).expect("finite differences of finite values")
}

/// What the derivative of the transformed field is compared against.
pub enum GradientReference<'a> {
    /// `Σ_k c_k R_kᵀ (Dψ)(T_k x')` with `D` the same central-difference
    /// operator applied to `ψ` first. Isolates the transformation law from
    /// truncation error.
    Discrete,
    /// Exact `∇ψ` and `∇²ψ` evaluated at the mapped points.
    Analytic {
        gradient: &'a dyn Fn(f64, f64) -> [Complex64; 2],
        laplacian: &'a dyn Fn(f64, f64) -> Complex64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeDiscrepancy {
    /// Max-norm gap between `∇'ψ'` and `Σ_k c_k R_kᵀ (∇ψ)(T_k x')`.
    pub gradient: f64,
    /// Max-norm gap between `∇'²ψ'` and `Σ_k c_k (∇²ψ)(T_k x')`.
    pub laplacian: f64,
}

/// Compares central differences of `transform_field(ψ, sup)` with the
/// transformed derivatives of `ψ`.
pub fn check_derivative_transform(
    psi: &WaveField,
    sup: &FrameSuperposition,
    reference: GradientReference<'_>,
) -> Result<DerivativeDiscrepancy, GridError> {
    let transformed = transform_field(psi, sup)?;
    let lhs_grad = central_gradient(&transformed);
    let lhs_lap = central_laplacian(&transformed);

    let grid = *psi.grid();
    let zero = Complex64::new(0.0, 0.0);
    let mut rhs_grad = [alloc::vec![zero; grid.len()], alloc::vec![zero; grid.len()]];
    let mut rhs_lap = alloc::vec![zero; grid.len()];

    match reference {
        GradientReference::Discrete => {
            let grad = central_gradient(psi);
            let lap = central_laplacian(psi);
            for (t, c) in sup.terms() {
                let map = AffineMap::from_transform(t, 2)?;
                let gx = resample(&grad[0], &map).0;
                let gy = resample(&grad[1], &map).0;
                let l = resample(&lap, &map).0;
                let r = t.rotation();
                for k in 0..grid.len() {
                    let (u, v) = (gx.values()[k], gy.values()[k]);
                    rhs_grad[0][k] += c * (u * r[0][0] + v * r[1][0]);
                    rhs_grad[1][k] += c * (u * r[0][1] + v * r[1][1]);
                    rhs_lap[k] += c * l.values()[k];
                }
            }
        }
        GradientReference::Analytic { gradient, laplacian } => {
            for (t, c) in sup.terms() {
                let map = AffineMap::from_transform(t, 2)?;
                let r = t.rotation();
                for (k, q) in grid.nodes().enumerate() {
                    let p = map.apply(q);
                    let [u, v] = gradient(p[0], p[1]);
                    rhs_grad[0][k] += c * (u * r[0][0] + v * r[1][0]);
                    rhs_grad[1][k] += c * (u * r[0][1] + v * r[1][1]);
                    rhs_lap[k] += c * laplacian(p[0], p[1]);
                }
            }
        }
    }

    let max_gap = |lhs: &WaveField, rhs: &[Complex64]| {
        lhs.values()
            .iter()
            .zip(rhs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    };
    Ok(DerivativeDiscrepancy {
        gradient: max_gap(&lhs_grad[0], &rhs_grad[0]).max(max_gap(&lhs_grad[1], &rhs_grad[1])),
        laplacian: max_gap(&lhs_lap, &rhs_lap),
    })
}
