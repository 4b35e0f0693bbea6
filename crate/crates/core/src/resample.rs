//! Sampling a gridded field at affinely mapped points.
//!
//! An [`AffineMap`] sends each output node `q'` to the source point
//! `q = A q' + b` in configuration space. Maps that send nodes to nodes
//! (signed axis permutations with whole-cell shifts) are applied as index
//! permutations; everything else goes through Keys cubic convolution
//! (`a = −0.5`) on a 4×4 stencil.
//!
//! The grid is treated as the closed square `[-L, L]²` with opposite edges
//! identified. Source points outside it read as zero.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::{GridError, GridSpec, WaveField};
use crate::transform::{Dim, EuclideanTransform};

const LATTICE_TOL: f64 = 1e-12;
const SHIFT_TOL: f64 = 1e-9;
const KEYS_A: f64 = -0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub matrix: [[f64; 2]; 2],
    pub offset: [f64; 2],
}

impl AffineMap {
    /// The configuration-space action of `t` applied to every particle.
    /// `particle_dim = 2`: one particle, `q = R q' + t`.
    /// `particle_dim = 1`: two particles on a line, each `x = r x' + t`.
    pub fn from_transform(t: &EuclideanTransform, particle_dim: usize) -> Result<Self, GridError> {
        let expected = match particle_dim {
            1 => Dim::One,
            2 => Dim::Two,
            other => return Err(GridError::ParticleLayout(other)),
        };
        if t.dim() != expected {
            return Err(GridError::Dimension {
                expected: expected.get(),
                got: t.dim().get(),
            });
        }
        let r = t.rotation();
        let s = t.translation();
        Ok(match expected {
            Dim::Two => AffineMap {
                matrix: [[r[0][0], r[0][1]], [r[1][0], r[1][1]]],
                offset: [s[0], s[1]],
            },
            _ => AffineMap {
                matrix: [[r[0][0], 0.0], [0.0, r[0][0]]],
                offset: [s[0], s[0]],
            },
        })
    }

    pub fn apply(&self, q: [f64; 2]) -> [f64; 2] {
        let m = &self.matrix;
        [
            m[0][0] * q[0] + m[0][1] * q[1] + self.offset[0],
            m[1][0] * q[0] + m[1][1] * q[1] + self.offset[1],
        ]
    }

    /// `Aᵀ(q − b)`; `A` is orthogonal for every map built from a transform.
    pub fn apply_inverse(&self, q: [f64; 2]) -> [f64; 2] {
        let m = &self.matrix;
        let d = [q[0] - self.offset[0], q[1] - self.offset[1]];
        [m[0][0] * d[0] + m[1][0] * d[1], m[0][1] * d[0] + m[1][1] * d[1]]
    }

    /// Integer form of the map when it sends grid nodes to grid nodes.
    pub fn lattice_form(&self, grid: &GridSpec) -> Option<LatticeMap> {
        let mut perm = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let v = self.matrix[i][j];
                let r = v.round();
                if (v - r).abs() > LATTICE_TOL || r.abs() > 1.0 {
                    return None;
                }
                perm[i][j] = r as i64;
            }
        }
        let signed_perm = |p: [[i64; 2]; 2]| {
            (p[0][1] == 0 && p[1][0] == 0 && p[0][0] != 0 && p[1][1] != 0)
                || (p[0][0] == 0 && p[1][1] == 0 && p[0][1] != 0 && p[1][0] != 0)
        };
        if !signed_perm(perm) {
            return None;
        }
        if perm[0][1] != 0 && (grid.n()[0] != grid.n()[1] || grid.spacing(0) != grid.spacing(1)) {
            return None;
        }
        let mut shift = [0i64; 2];
        for a in 0..2 {
            let steps = self.offset[a] / grid.spacing(a);
            let r = steps.round();
            if (steps - r).abs() > SHIFT_TOL {
                return None;
            }
            shift[a] = r as i64;
        }
        Some(LatticeMap { perm, shift })
    }
}

/// `s = P k + shift` on node offsets `k = index − n/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub perm: [[i64; 2]; 2],
    pub shift: [i64; 2],
}

/// Values of `field` at `map(q')` for every output node `q'`, plus the
/// fraction of the source norm² that no output node can see.
pub fn resample(field: &WaveField, map: &AffineMap) -> (WaveField, f64) {
    let grid = *field.grid();
    let values = match map.lattice_form(&grid) {
        Some(lattice) => permute(field, &lattice),
        None => cubic(field, map),
    };
    let out = WaveField::new(grid, values, field.time()).expect("resampling preserves shape and finiteness");
    (out, clipped_fraction(field, map))
}

pub fn is_lattice_exact(map: &AffineMap, grid: &GridSpec) -> bool {
    map.lattice_form(grid).is_some()
}

fn permute(field: &WaveField, lattice: &LatticeMap) -> alloc::vec::Vec<Complex64> {
    let grid = field.grid();
    let [nx, ny] = grid.n();
    let (hx, hy) = ((nx / 2) as i64, (ny / 2) as i64);
    let src_index = |s: i64, n: usize| -> Option<usize> {
        let n = n as i64;
        match s {
            _ if s == n => Some(0),
            _ if (0..n).contains(&s) => Some(s as usize),
            _ => None,
        }
    };
    let p = lattice.perm;
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); grid.len()];
    for j in 0..ny {
        let ky = j as i64 - hy;
        for i in 0..nx {
            let kx = i as i64 - hx;
            let sx = p[0][0] * kx + p[0][1] * ky + lattice.shift[0] + hx;
            let sy = p[1][0] * kx + p[1][1] * ky + lattice.shift[1] + hy;
            if let (Some(si), Some(sj)) = (src_index(sx, nx), src_index(sy, ny)) {
                out[grid.index(i, j)] = field.at(si, sj);
            }
        }
    }
    out
}

fn keys(x: f64) -> f64 {
    let x = x.abs();
    if x <= 1.0 {
        ((KEYS_A + 2.0) * x - (KEYS_A + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        ((KEYS_A * x - 5.0 * KEYS_A) * x + 8.0 * KEYS_A) * x - 4.0 * KEYS_A
    } else {
        0.0
    }
}

fn keys_weights(t: f64) -> [f64; 4] {
    [keys(1.0 + t), keys(t), keys(1.0 - t), keys(2.0 - t)]
}

/// Keys cubic convolution at an arbitrary point, stencil indices wrapping
/// periodically.
pub fn cubic_sample(field: &WaveField, p: [f64; 2]) -> Complex64 {
    let grid = field.grid();
    if !grid.contains(p) {
        return Complex64::new(0.0, 0.0);
    }
    let [nx, ny] = grid.n();
    let ux = p[0] / grid.spacing(0) + (nx / 2) as f64;
    let uy = p[1] / grid.spacing(1) + (ny / 2) as f64;
    let (fx, fy) = (ux.floor(), uy.floor());
    let wx = keys_weights(ux - fx);
    let wy = keys_weights(uy - fy);
    let (ix, iy) = (fx as i64, fy as i64);
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, wyb) in wy.iter().enumerate() {
        let sj = (iy - 1 + b as i64).rem_euclid(ny as i64) as usize;
        let mut row = Complex64::new(0.0, 0.0);
        for (a, wxa) in wx.iter().enumerate() {
            let si = (ix - 1 + a as i64).rem_euclid(nx as i64) as usize;
            row += field.at(si, sj) * wxa;
        }
        acc += row * wyb;
    }
    acc
}

fn cubic(field: &WaveField, map: &AffineMap) -> alloc::vec::Vec<Complex64> {
    let grid = *field.grid();
    grid.nodes().map(|q| cubic_sample(field, map.apply(q))).collect()
}

fn clipped_fraction(field: &WaveField, map: &AffineMap) -> f64 {
    let grid = field.grid();
    let mut lost = 0.0;
    let mut total = 0.0;
    for (s, v) in grid.nodes().zip(field.values()) {
        let w = v.norm_sqr();
        total += w;
        if w > 0.0 && !grid.contains(map.apply_inverse(s)) {
            lost += w;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        lost / total
    }
}
