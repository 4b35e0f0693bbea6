//! Complex amplitudes over a finite group and their convolution.
//!
//! `convolve` scatters each product `a[f]·b[g]` into `f∘g`; the brute-force
//! restricted sum instead fixes `h` and filters all ordered pairs by the
//! membership test `f∘g = h`. Both visit pairs in the same order, so they
//! agree bit for bit.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::group::FiniteGroup;
use crate::rng::CounterRng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("wavefunctions live on different groups ({0} vs {1})")]
    GroupMismatch(alloc::string::String, alloc::string::String),
    #[error("expected {expected} amplitudes, got {got}")]
    Length { expected: usize, got: usize },
    #[error("amplitude {0} is not finite")]
    NonFinite(usize),
    #[error("element {0} is not in a group of order {1}")]
    NoSuchElement(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupWavefunction<'g> {
    group: &'g FiniteGroup,
    amplitudes: Vec<Complex64>,
}

impl<'g> GroupWavefunction<'g> {
    pub fn new(group: &'g FiniteGroup, amplitudes: Vec<Complex64>) -> Result<Self, AlgebraError> {
        if amplitudes.len() != group.order() {
            return Err(AlgebraError::Length {
                expected: group.order(),
                got: amplitudes.len(),
            });
        }
        if let Some(i) = amplitudes.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(AlgebraError::NonFinite(i));
        }
        Ok(GroupWavefunction { group, amplitudes })
    }

    pub fn delta(group: &'g FiniteGroup, element: usize) -> Result<Self, AlgebraError> {
        if element >= group.order() {
            return Err(AlgebraError::NoSuchElement(element, group.order()));
        }
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); group.order()];
        amplitudes[element] = Complex64::new(1.0, 0.0);
        Ok(GroupWavefunction { group, amplitudes })
    }

    pub fn uniform(group: &'g FiniteGroup, value: Complex64) -> Self {
        GroupWavefunction {
            group,
            amplitudes: alloc::vec![value; group.order()],
        }
    }

    /// Real and imaginary parts uniform in `[-1, 1)`.
    pub fn random(group: &'g FiniteGroup, rng: &mut CounterRng) -> Self {
        let amplitudes = (0..group.order())
            .map(|_| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
            .collect();
        GroupWavefunction { group, amplitudes }
    }

    /// Rescaled so that `Σ|a[f]|² = 1`.
    pub fn normalized(&self) -> Self {
        let norm = self.norm_sqr().sqrt();
        GroupWavefunction {
            group: self.group,
            amplitudes: self.amplitudes.iter().map(|c| c / norm).collect(),
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn sum(&self) -> Complex64 {
        self.amplitudes.iter().sum()
    }

    fn same_group(&self, other: &Self) -> Result<(), AlgebraError> {
        if core::ptr::eq(self.group, other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(AlgebraError::GroupMismatch(
                self.group.name().into(),
                other.group.name().into(),
            ))
        }
    }

    /// `out[h] = Σ_{f∘g = h} a[f]·b[g]`, one pass over the Cayley table.
    pub fn convolve(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let g = self.group;
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); g.order()];
        for (f, af) in self.amplitudes.iter().enumerate() {
            for (h, bh) in other.amplitudes.iter().enumerate() {
                out[g.mul(f, h)] += af * bh;
            }
        }
        Ok(GroupWavefunction {
            group: g,
            amplitudes: out,
        })
    }

    /// Enumerates every ordered pair `(f, g)`, keeps those whose product is
    /// `h`, and sums `a[f]·b[g]`.
    pub fn brute_force_restricted_sum(&self, other: &Self, h: usize) -> Result<Complex64, AlgebraError> {
        self.same_group(other)?;
        let g = self.group;
        if h >= g.order() {
            return Err(AlgebraError::NoSuchElement(h, g.order()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for f in 0..g.order() {
            for k in 0..g.order() {
                if g.mul(f, k) == h {
                    acc += self.amplitudes[f] * other.amplitudes[k];
                }
            }
        }
        Ok(acc)
    }

    /// `a[f] → conj(a[f⁻¹])`.
    pub fn reversed(&self) -> Self {
        let g = self.group;
        GroupWavefunction {
            group: g,
            amplitudes: (0..g.order()).map(|f| self.amplitudes[g.inverse(f)].conj()).collect(),
        }
    }

    /// `|(a ⋆ reversed(a))[e]|`, which equals `Σ|a[f]|²`.
    pub fn verify_identity_relation(&self) -> f64 {
        let round_trip = self.convolve(&self.reversed()).expect("same group");
        round_trip.amplitudes[self.group.identity()].norm()
    }

    /// Compares `Σ_h (a⋆b)[h]` with `(Σ a)(Σ b)`.
    pub fn total_sum_check(&self, other: &Self) -> Result<TotalSum, AlgebraError> {
        let total = self.convolve(other)?.sum();
        let product = self.sum() * other.sum();
        Ok(TotalSum {
            total,
            product,
            deviation: (total - product).norm(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TotalSum {
    pub total: Complex64,
    pub product: Complex64,
    pub deviation: f64,
}

impl TotalSum {
    pub fn holds(&self, tol: f64) -> bool {
        self.deviation <= tol
    }
}
