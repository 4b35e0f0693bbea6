//! Rigid motions `x = R x' + t` with proper rotations.
//!
//! Every transform carries its dimension; storage is always 3×3 / length 3
//! with unused entries padded by the identity, so composition is a single
//! code path for one, two, and three dimensions.

use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::rng::CounterRng;

/// Bound on `‖RᵀR − I‖_F` and `|det R − 1|` accepted at construction.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Two transforms are equal when both the Frobenius distance of their
/// rotations and the Euclidean distance of their translations fall below
/// this bound.
pub const EQUALITY_TOL: f64 = 1e-9;

/// Quantum used to round entries for the canonical term order.
pub const ORDER_QUANTUM: f64 = 1e-9;

/// Angles this close to a multiple of 90° produce exact 0/±1 rotation entries.
const QUARTER_SNAP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Dim {
    pub fn get(self) -> usize {
        self as usize
    }

    pub fn from_usize(n: usize) -> Option<Dim> {
        match n {
            1 => Some(Dim::One),
            2 => Some(Dim::Two),
            3 => Some(Dim::Three),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("rotation is not orthogonal: ‖RᵀR − I‖_F = {0:e}")]
    NotOrthogonal(f64),
    #[error("rotation is not proper: det R = {0}")]
    Improper(f64),
    #[error("transform has a non-finite entry")]
    NonFinite,
    #[error("a {dim}-D {what} needs {expected} entries, got {got}")]
    Shape {
        dim: usize,
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("rotation axis has zero length")]
    ZeroAxis,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
}

/// A rigid motion mapping target-frame coordinates `x'` to source-frame
/// coordinates `x = R x' + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EuclideanTransform {
    dim: Dim,
    rotation: [[f64; 3]; 3],
    translation: [f64; 3],
}

const IDENTITY3: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

impl EuclideanTransform {
    pub fn identity(dim: Dim) -> Self {
        EuclideanTransform {
            dim,
            rotation: IDENTITY3,
            translation: [0.0; 3],
        }
    }

    /// Builds a transform from a row-major `d×d` rotation and a length-`d`
    /// translation, validating orthogonality and orientation.
    pub fn from_parts(dim: Dim, rotation: &[f64], translation: &[f64]) -> Result<Self, TransformError> {
        let d = dim.get();
        if rotation.len() != d * d {
            return Err(TransformError::Shape {
                dim: d,
                what: "rotation",
                expected: d * d,
                got: rotation.len(),
            });
        }
        if translation.len() != d {
            return Err(TransformError::Shape {
                dim: d,
                what: "translation",
                expected: d,
                got: translation.len(),
            });
        }
        let mut t = EuclideanTransform::identity(dim);
        for i in 0..d {
            for j in 0..d {
                t.rotation[i][j] = rotation[i * d + j];
            }
            t.translation[i] = translation[i];
        }
        t.validate()?;
        Ok(t)
    }

    /// A pure translation in `translation.len()` dimensions.
    pub fn translation_only(translation: &[f64]) -> Result<Self, TransformError> {
        let dim = Dim::from_usize(translation.len()).ok_or(TransformError::UnsupportedDimension(translation.len()))?;
        let mut t = EuclideanTransform::identity(dim);
        t.translation[..translation.len()].copy_from_slice(translation);
        t.validate()?;
        Ok(t)
    }

    /// Planar rotation by `angle` (radians, counter-clockwise) followed by a
    /// translation. Multiples of 90° give exact matrices.
    pub fn planar(angle: f64, translation: [f64; 2]) -> Result<Self, TransformError> {
        if !angle.is_finite() {
            return Err(TransformError::NonFinite);
        }
        let (s, c) = snapped_sin_cos(angle);
        let mut t = EuclideanTransform::identity(Dim::Two);
        t.rotation[0][0] = c;
        t.rotation[0][1] = -s;
        t.rotation[1][0] = s;
        t.rotation[1][1] = c;
        t.translation[0] = translation[0];
        t.translation[1] = translation[1];
        t.validate()?;
        Ok(t)
    }

    /// Planar rotation by `k` quarter turns (exact entries).
    pub fn quarter_turns(k: i32, translation: [f64; 2]) -> Result<Self, TransformError> {
        Self::planar(f64::from(k.rem_euclid(4)) * FRAC_PI_2, translation)
    }

    /// Rotation by `angle` about `axis` (right-hand rule) followed by a
    /// translation. The angle is canonicalized to `[0, π]`; negative angles
    /// flip the axis.
    pub fn axis_angle(axis: [f64; 3], angle: f64, translation: [f64; 3]) -> Result<Self, TransformError> {
        if !angle.is_finite() || axis.iter().any(|a| !a.is_finite()) {
            return Err(TransformError::NonFinite);
        }
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if norm == 0.0 {
            return Err(TransformError::ZeroAxis);
        }
        let mut n = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
        let (angle, flip) = canonical_angle(angle);
        if flip {
            n = [-n[0], -n[1], -n[2]];
        }
        let (s, c) = snapped_sin_cos(angle);
        let v = 1.0 - c;
        let rotation = [
            [
                c + n[0] * n[0] * v,
                n[0] * n[1] * v - n[2] * s,
                n[0] * n[2] * v + n[1] * s,
            ],
            [
                n[1] * n[0] * v + n[2] * s,
                c + n[1] * n[1] * v,
                n[1] * n[2] * v - n[0] * s,
            ],
            [
                n[2] * n[0] * v - n[1] * s,
                n[2] * n[1] * v + n[0] * s,
                c + n[2] * n[2] * v,
            ],
        ];
        let t = EuclideanTransform {
            dim: Dim::Three,
            rotation,
            translation,
        };
        t.validate()?;
        Ok(t)
    }

    /// Uniformly distributed rotation with a translation drawn from
    /// `[-max_translation, max_translation)` per component.
    pub fn random(dim: Dim, max_translation: f64, rng: &mut CounterRng) -> Self {
        let mut t = match dim {
            Dim::One => EuclideanTransform::identity(Dim::One),
            Dim::Two => {
                let angle = rng.uniform(-PI, PI);
                Self::planar(angle, [0.0, 0.0]).expect("finite angle")
            }
            Dim::Three => {
                // Shoemake's uniform unit quaternion.
                let (u1, u2, u3) = (rng.next_f64(), rng.next_f64(), rng.next_f64());
                let a = (1.0 - u1).sqrt();
                let b = u1.sqrt();
                let q = [
                    a * (TAU * u2).sin(),
                    a * (TAU * u2).cos(),
                    b * (TAU * u3).sin(),
                    b * (TAU * u3).cos(),
                ];
                Self::from_unit_quaternion(q)
            }
        };
        for i in 0..dim.get() {
            t.translation[i] = rng.uniform(-max_translation, max_translation);
        }
        t
    }

    /// `q = [w, x, y, z]`, assumed unit length.
    fn from_unit_quaternion(q: [f64; 4]) -> Self {
        let [w, x, y, z] = q;
        let rotation = [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ];
        EuclideanTransform {
            dim: Dim::Three,
            rotation,
            translation: [0.0; 3],
        }
    }

    fn validate(&self) -> Result<(), TransformError> {
        let d = self.dim.get();
        let finite =
            self.rotation.iter().flatten().all(|v| v.is_finite()) && self.translation.iter().all(|v| v.is_finite());
        if !finite {
            return Err(TransformError::NonFinite);
        }
        let mut frob = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut dot = 0.0;
                for k in 0..d {
                    dot += self.rotation[k][i] * self.rotation[k][j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                frob += (dot - target) * (dot - target);
            }
        }
        let frob = frob.sqrt();
        if frob >= ORTHOGONALITY_TOL {
            return Err(TransformError::NotOrthogonal(frob));
        }
        let det = self.determinant();
        if (det - 1.0).abs() >= ORTHOGONALITY_TOL {
            return Err(TransformError::Improper(det));
        }
        Ok(())
    }

    fn determinant(&self) -> f64 {
        let r = &self.rotation;
        match self.dim {
            Dim::One => r[0][0],
            Dim::Two => r[0][0] * r[1][1] - r[0][1] * r[1][0],
            Dim::Three => {
                r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                    + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
            }
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Rotation block padded to 3×3 with the identity.
    pub fn rotation(&self) -> &[[f64; 3]; 3] {
        &self.rotation
    }

    /// Translation padded to length 3 with zeros.
    pub fn translation(&self) -> &[f64; 3] {
        &self.translation
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &EuclideanTransform) -> EuclideanTransform {
        assert_eq!(self.dim, other.dim, "composing transforms of different dimension");
        let mut rotation = [[0.0; 3]; 3];
        let mut translation = self.translation;
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += self.rotation[i][k] * other.rotation[k][j];
                }
                rotation[i][j] = acc;
            }
            for k in 0..3 {
                translation[i] += self.rotation[i][k] * other.translation[k];
            }
        }
        EuclideanTransform {
            dim: self.dim,
            rotation,
            translation,
        }
    }

    /// `(Rᵀ, −Rᵀ t)`.
    pub fn inverse(&self) -> EuclideanTransform {
        let mut rotation = [[0.0; 3]; 3];
        let mut translation = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                rotation[i][j] = self.rotation[j][i];
            }
        }
        for i in 0..3 {
            let mut acc = 0.0;
            for k in 0..3 {
                acc += rotation[i][k] * self.translation[k];
            }
            translation[i] = -acc;
        }
        EuclideanTransform {
            dim: self.dim,
            rotation,
            translation,
        }
    }

    /// Maps a point given in target-frame coordinates (padded to length 3).
    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let mut out = self.translation;
        for (i, o) in out.iter_mut().enumerate() {
            for (k, pk) in p.iter().enumerate() {
                *o += self.rotation[i][k] * pk;
            }
        }
        out
    }

    pub fn rotation_distance(&self, other: &EuclideanTransform) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let d = self.rotation[i][j] - other.rotation[i][j];
                acc += d * d;
            }
        }
        acc.sqrt()
    }

    pub fn translation_distance(&self, other: &EuclideanTransform) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            let d = self.translation[i] - other.translation[i];
            acc += d * d;
        }
        acc.sqrt()
    }

    /// Equality within [`EQUALITY_TOL`].
    pub fn approx_eq(&self, other: &EuclideanTransform) -> bool {
        self.approx_eq_within(other, EQUALITY_TOL)
    }

    pub fn approx_eq_within(&self, other: &EuclideanTransform, tol: f64) -> bool {
        self.dim == other.dim && self.rotation_distance(other) < tol && self.translation_distance(other) < tol
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&EuclideanTransform::identity(self.dim))
    }

    /// Total order: dimension, then rotation entries and translation entries
    /// rounded to [`ORDER_QUANTUM`], then raw bits as a tie-breaker.
    pub fn canonical_cmp(&self, other: &EuclideanTransform) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.order_key().cmp(&other.order_key()))
            .then_with(|| {
                self.entries()
                    .zip(other.entries())
                    .map(|(a, b)| a.total_cmp(&b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }

    fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        let d = self.dim.get();
        (0..d * d)
            .map(move |k| self.rotation[k / d][k % d])
            .chain(self.translation[..d].iter().copied())
    }

    fn order_key(&self) -> [i64; 12] {
        let mut key = [0i64; 12];
        for (slot, v) in key.iter_mut().zip(self.entries()) {
            // +0.0 and -0.0 share a key.
            *slot = (v / ORDER_QUANTUM).round() as i64;
        }
        key
    }

    /// Counter-clockwise angle in `(-π, π]` of a planar rotation.
    pub fn planar_angle(&self) -> Option<f64> {
        (self.dim == Dim::Two).then(|| self.rotation[1][0].atan2(self.rotation[0][0]))
    }

    /// `(axis, angle)` with `angle ∈ [0, π]` for a spatial rotation. The
    /// axis of the identity is reported as `ẑ`.
    pub fn axis_angle_parts(&self) -> Option<([f64; 3], f64)> {
        if self.dim != Dim::Three {
            return None;
        }
        let r = &self.rotation;
        let trace = r[0][0] + r[1][1] + r[2][2];
        let skew = [r[2][1] - r[1][2], r[0][2] - r[2][0], r[1][0] - r[0][1]];
        let skew_norm = (skew[0] * skew[0] + skew[1] * skew[1] + skew[2] * skew[2]).sqrt();
        let angle = (skew_norm / 2.0).atan2((trace - 1.0) / 2.0);
        if skew_norm > 1e-9 {
            return Some(([skew[0] / skew_norm, skew[1] / skew_norm, skew[2] / skew_norm], angle));
        }
        if angle < 1e-6 {
            return Some(([0.0, 0.0, 1.0], 0.0));
        }
        // Half turn: R = 2nnᵀ − I. Take the largest diagonal for stability.
        let k = (0..3).max_by(|&a, &b| r[a][a].total_cmp(&r[b][b])).unwrap_or(0);
        let nk = ((r[k][k] + 1.0) / 2.0).max(0.0).sqrt();
        let mut n = [0.0; 3];
        for i in 0..3 {
            n[i] = if i == k { nk } else { (r[i][k] + r[k][i]) / (4.0 * nk) };
        }
        Some((n, angle))
    }
}

/// Reduces an angle to `(-π, π]`, then returns `(|angle|, angle < 0)`.
fn canonical_angle(angle: f64) -> (f64, bool) {
    let mut a = angle - TAU * (angle / TAU).floor();
    if a > PI {
        a -= TAU;
    }
    (a.abs(), a < 0.0)
}

fn snapped_sin_cos(angle: f64) -> (f64, f64) {
    let quarters = angle / FRAC_PI_2;
    let nearest = quarters.round();
    if (quarters - nearest).abs() < QUARTER_SNAP {
        match (nearest as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        angle.sin_cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_orthogonal_and_improper() {
        let skewed = EuclideanTransform::from_parts(Dim::Two, &[1.0, 0.1, 0.0, 1.0], &[0.0, 0.0]);
        assert!(matches!(skewed, Err(TransformError::NotOrthogonal(_))));
        let reflection = EuclideanTransform::from_parts(Dim::Two, &[1.0, 0.0, 0.0, -1.0], &[0.0, 0.0]);
        assert!(matches!(reflection, Err(TransformError::Improper(_))));
        let short = EuclideanTransform::from_parts(Dim::Three, &[1.0; 4], &[0.0; 3]);
        assert!(matches!(short, Err(TransformError::Shape { .. })));
    }

    #[test]
    fn quarter_turns_are_exact() {
        let r = EuclideanTransform::quarter_turns(1, [0.0, 0.0]).unwrap();
        assert_eq!(r.rotation()[0][..2], [0.0, -1.0]);
        assert_eq!(r.rotation()[1][..2], [1.0, 0.0]);
        let full = r.compose(&r).compose(&r).compose(&r);
        assert_eq!(full, EuclideanTransform::identity(Dim::Two));
    }

    #[test]
    fn axis_angle_canonicalizes_negative_angles() {
        let a = EuclideanTransform::axis_angle([0.0, 0.0, 1.0], -0.7, [0.0; 3]).unwrap();
        let b = EuclideanTransform::axis_angle([0.0, 0.0, -1.0], 0.7, [0.0; 3]).unwrap();
        assert!(a.approx_eq_within(&b, 1e-15));
        let (axis, angle) = a.axis_angle_parts().unwrap();
        assert!((angle - 0.7).abs() < 1e-12);
        assert!((axis[2] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn axis_angle_round_trips_half_turn() {
        let n = [1.0 / 3f64.sqrt(); 3];
        let t = EuclideanTransform::axis_angle(n, PI, [0.0; 3]).unwrap();
        let (axis, angle) = t.axis_angle_parts().unwrap();
        assert!((angle - PI).abs() < 1e-12);
        let back = EuclideanTransform::axis_angle(axis, angle, [0.0; 3]).unwrap();
        assert!(back.approx_eq(&t));
    }

    #[test]
    fn inverse_composes_to_identity() {
        let mut rng = CounterRng::new(3);
        for dim in [Dim::One, Dim::Two, Dim::Three] {
            for _ in 0..50 {
                let t = EuclideanTransform::random(dim, 4.0, &mut rng);
                assert!(t
                    .compose(&t.inverse())
                    .approx_eq_within(&EuclideanTransform::identity(dim), 1e-13));
                assert!(t.inverse().compose(&t).is_identity());
            }
        }
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let rot = EuclideanTransform::quarter_turns(1, [0.0, 0.0]).unwrap();
        let shift = EuclideanTransform::translation_only(&[1.0, 0.0]).unwrap();
        // rot ∘ shift: (1,0) -> (2,0) -> (0,2)
        let p = rot.compose(&shift).apply([1.0, 0.0, 0.0]);
        assert_eq!(p, [0.0, 2.0, 0.0]);
    }

    #[test]
    fn canonical_order_ignores_sub_quantum_noise() {
        let a = EuclideanTransform::planar(0.3, [1.0, 2.0]).unwrap();
        let b = EuclideanTransform::planar(0.3 + 1e-15, [1.0, 2.0 + 1e-14]).unwrap();
        assert!(a.approx_eq(&b));
        let c = EuclideanTransform::planar(0.4, [1.0, 2.0]).unwrap();
        assert_eq!(a.canonical_cmp(&c), c.canonical_cmp(&a).reverse());
        assert_ne!(a.canonical_cmp(&c), Ordering::Equal);
    }

    #[test]
    fn random_rotations_are_valid() {
        let mut rng = CounterRng::new(11);
        for _ in 0..200 {
            let t = EuclideanTransform::random(Dim::Three, 1.0, &mut rng);
            t.validate().unwrap();
        }
    }
}
