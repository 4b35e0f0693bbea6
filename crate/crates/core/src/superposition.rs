//! Finite superpositions of rigid motions between two frames.
//!
//! A [`FrameSuperposition`] is a finitely supported complex amplitude over
//! transforms `O ← O'`. Terms are stored unnormalized and in canonical order;
//! transforms equal within [`EQUALITY_TOL`](crate::transform::EQUALITY_TOL)
//! are merged by adding their amplitudes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::rng::CounterRng;
use crate::transform::{Dim, EuclideanTransform, TransformError};

pub type Amplitude = Complex64;

/// Superpositions need at least one amplitude above this magnitude.
pub const MIN_AMPLITUDE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("frame label must be nonempty")]
    EmptyFrameId,
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("amplitude of term {0} is not finite")]
    NonFiniteAmplitude(usize),
    #[error("superposition has no terms")]
    Empty,
    #[error("every amplitude vanishes (max |c| = {0:e})")]
    Degenerate(f64),
    #[error("terms mix {0}-D and {1}-D transforms")]
    MixedDimension(usize, usize),
    #[error("cannot compose {left_source}←{left_target} with {right_source}←{right_target}")]
    ChainMismatch {
        left_source: FrameId,
        left_target: FrameId,
        right_source: FrameId,
        right_target: FrameId,
    },
    #[error("selected transform is not in the support")]
    NotInSupport,
    #[error("source and target are both {0}")]
    SameFrame(FrameId),
}

/// Name of a reference frame, e.g. `O`, `O'`, `O''`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameId(String);

impl FrameId {
    pub fn new(label: impl Into<String>) -> Result<Self, FrameError> {
        let label = label.into();
        if label.is_empty() {
            return Err(FrameError::EmptyFrameId);
        }
        Ok(FrameId(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FrameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One contributing pair of a composition, before coincident results merge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComposedPair {
    pub left: usize,
    pub right: usize,
    pub transform: EuclideanTransform,
    pub amplitude: Amplitude,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameSuperposition {
    source: FrameId,
    target: FrameId,
    terms: Vec<(EuclideanTransform, Amplitude)>,
}

impl FrameSuperposition {
    /// Builds a superposition, merging coincident transforms and sorting the
    /// support into canonical order.
    pub fn new(
        source: FrameId,
        target: FrameId,
        terms: impl IntoIterator<Item = (EuclideanTransform, Amplitude)>,
    ) -> Result<Self, FrameError> {
        let mut merged: Vec<(EuclideanTransform, Amplitude)> = Vec::new();
        let mut dim: Option<Dim> = None;
        for (index, (t, c)) in terms.into_iter().enumerate() {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(FrameError::NonFiniteAmplitude(index));
            }
            match dim {
                None => dim = Some(t.dim()),
                Some(d) if d != t.dim() => return Err(FrameError::MixedDimension(d.get(), t.dim().get())),
                _ => {}
            }
            match merged.iter_mut().find(|(u, _)| u.approx_eq(&t)) {
                Some((_, acc)) => *acc += c,
                None => merged.push((t, c)),
            }
        }
        if merged.is_empty() {
            return Err(FrameError::Empty);
        }
        let largest = merged.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        if largest <= MIN_AMPLITUDE {
            return Err(FrameError::Degenerate(largest));
        }
        merged.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Ok(FrameSuperposition {
            source,
            target,
            terms: merged,
        })
    }

    /// The fixed-transform wavefunctional: a single term with amplitude 1.
    pub fn delta(t: EuclideanTransform, source: FrameId, target: FrameId) -> Result<Self, FrameError> {
        let d = t.dim().get();
        let rotation: Vec<f64> = (0..d * d).map(|k| t.rotation()[k / d][k % d]).collect();
        // Re-validate: transforms produced by long composition chains are
        // unchecked.
        EuclideanTransform::from_parts(t.dim(), &rotation, &t.translation()[..d])?;
        Self::new(source, target, [(t, Amplitude::new(1.0, 0.0))])
    }

    pub fn source(&self) -> &FrameId {
        &self.source
    }

    pub fn target(&self) -> &FrameId {
        &self.target
    }

    pub fn terms(&self) -> &[(EuclideanTransform, Amplitude)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> Dim {
        self.terms[0].0.dim()
    }

    pub fn amplitude_of(&self, t: &EuclideanTransform) -> Option<Amplitude> {
        self.terms.iter().find(|(u, _)| u.approx_eq(t)).map(|(_, c)| *c)
    }

    /// `Σ |c_k|²`.
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    /// Every ordered pair `(t_a, t_b)` with its product amplitude, in
    /// canonical order of `a` then `b`.
    pub fn composed_pairs(a: &Self, b: &Self) -> Result<Vec<ComposedPair>, FrameError> {
        if a.target != b.source {
            return Err(FrameError::ChainMismatch {
                left_source: a.source.clone(),
                left_target: a.target.clone(),
                right_source: b.source.clone(),
                right_target: b.target.clone(),
            });
        }
        if a.dim() != b.dim() {
            return Err(FrameError::MixedDimension(a.dim().get(), b.dim().get()));
        }
        let mut pairs = Vec::with_capacity(a.len() * b.len());
        for (i, (ta, ca)) in a.terms.iter().enumerate() {
            for (j, (tb, cb)) in b.terms.iter().enumerate() {
                pairs.push(ComposedPair {
                    left: i,
                    right: j,
                    transform: ta.compose(tb),
                    amplitude: ca * cb,
                });
            }
        }
        Ok(pairs)
    }

    /// `Ψ_{O←O''}` from `self = Ψ_{O←O'}` and `next = Ψ_{O'←O''}`: the
    /// amplitude of each composite transform is the coherent sum of
    /// `c_a · c_b` over all pairs composing to it.
    pub fn compose(&self, next: &Self) -> Result<Self, FrameError> {
        let pairs = Self::composed_pairs(self, next)?;
        Self::new(
            self.source.clone(),
            next.target.clone(),
            pairs.into_iter().map(|p| (p.transform, p.amplitude)),
        )
    }

    /// `Ψ_{O'←O}`: each term `(t, c)` becomes `(t⁻¹, c̄)`.
    pub fn reverse(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(t, c)| (t.inverse(), c.conj())).collect();
        terms.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        FrameSuperposition {
            source: self.target.clone(),
            target: self.source.clone(),
            terms,
        }
    }

    /// Measures how far `compose(self, reverse(self))` is from the identity
    /// delta: the summed magnitude off the identity divided by the magnitude
    /// at the identity. `+∞` when the identity carries no amplitude.
    pub fn identity_deviation(&self) -> Result<f64, FrameError> {
        if self.source == self.target {
            return Err(FrameError::SameFrame(self.source.clone()));
        }
        let round_trip = self.compose(&self.reverse())?;
        let mut at_identity = 0.0;
        let mut elsewhere = 0.0;
        for (t, c) in &round_trip.terms {
            if t.is_identity() {
                at_identity += c.norm();
            } else {
                elsewhere += c.norm();
            }
        }
        if at_identity == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(elsewhere / at_identity)
    }

    /// Born-rule probabilities `|c_k|² / Σ|c_j|²` in canonical order.
    pub fn born_probabilities(&self) -> Vec<(EuclideanTransform, f64)> {
        let total = self.total_weight();
        self.terms.iter().map(|(t, c)| (*t, c.norm_sqr() / total)).collect()
    }

    /// One Born-rule draw from the stream seeded with `seed`.
    pub fn born_sample(&self, seed: u64) -> EuclideanTransform {
        let sampler = BornSampler::new(self);
        let mut rng = CounterRng::new(seed);
        self.terms[sampler.draw(&mut rng)].0
    }

    /// Replaces the superposition by the delta on `selected`, which must lie
    /// in the support.
    pub fn collapse(&self, selected: &EuclideanTransform) -> Result<Self, FrameError> {
        let (t, _) = self
            .terms
            .iter()
            .find(|(u, _)| u.approx_eq(selected))
            .ok_or(FrameError::NotInSupport)?;
        Ok(FrameSuperposition {
            source: self.source.clone(),
            target: self.target.clone(),
            terms: alloc::vec![(*t, Amplitude::new(1.0, 0.0))],
        })
    }

    /// Born probability that an interaction selects a transform satisfying
    /// `member`.
    pub fn probability_mass(&self, member: impl Fn(&EuclideanTransform) -> bool) -> f64 {
        let total = self.total_weight();
        let inside: f64 = self
            .terms
            .iter()
            .filter(|(t, _)| member(t))
            .map(|(_, c)| c.norm_sqr())
            .sum();
        (inside / total).clamp(0.0, 1.0)
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: Amplitude) -> Result<Self, FrameError> {
        Self::new(
            self.source.clone(),
            self.target.clone(),
            self.terms.iter().map(|(t, c)| (*t, c * factor)),
        )
    }

    /// Term-wise sum of two superpositions between the same frames.
    pub fn superpose(&self, other: &Self) -> Result<Self, FrameError> {
        if self.source != other.source || self.target != other.target {
            return Err(FrameError::ChainMismatch {
                left_source: self.source.clone(),
                left_target: self.target.clone(),
                right_source: other.source.clone(),
                right_target: other.target.clone(),
            });
        }
        Self::new(
            self.source.clone(),
            self.target.clone(),
            self.terms.iter().chain(other.terms.iter()).copied(),
        )
    }

    /// Same frames, same support (within transform tolerance) and amplitudes
    /// within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((ta, ca), (tb, cb))| ta.approx_eq(tb) && (ca - cb).norm() <= tol)
    }
}

/// Cumulative Born table for repeated draws.
#[derive(Clone, Debug)]
pub struct BornSampler {
    cumulative: Vec<f64>,
}

impl BornSampler {
    pub fn new(sup: &FrameSuperposition) -> Self {
        let total = sup.total_weight();
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = sup
            .terms()
            .iter()
            .map(|(_, c)| {
                acc += c.norm_sqr() / total;
                acc
            })
            .collect();
        // Pin the last nonzero edge so u < 1 always lands in the support.
        if let Some(last) = cumulative.iter().rposition(|&p| p > 0.0) {
            for p in &mut cumulative[last..] {
                *p = 1.0;
            }
        }
        BornSampler { cumulative }
    }

    /// Index of the selected term in canonical order.
    pub fn draw(&self, rng: &mut CounterRng) -> usize {
        let u = rng.next_f64();
        self.cumulative.partition_point(|&p| p <= u)
    }
}
