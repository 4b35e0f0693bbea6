//! Superpositions of classical reference frames.
//!
//! A frame superposition assigns complex amplitudes to a finite set of rigid
//! motions relating two frames. This crate holds the allocation-only core:
//!
//! - [`transform`]: rigid motions in one, two, or three dimensions.
//! - [`superposition`]: the superposed-frame calculus (composition, reversal,
//!   Born-rule probabilities and sampling, collapse).
//! - [`group`] and [`group_algebra`]: finite groups and exact convolution on
//!   their group algebra, checked against a brute-force restricted pair sum.
//! - [`grid`], [`resample`], [`wavefield`]: gridded wavefunctions and their
//!   transformation into a superposed frame.
//! - [`potential`]: Euclidean-invariant potentials and the invariance check.
//! - [`rng`]: the seeded counter-based stream used for sampling.
//!
//! Time evolution and file formats live in the `superframe` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod grid;
pub mod group;
pub mod group_algebra;
pub mod potential;
pub mod resample;
pub mod rng;
pub mod superposition;
pub mod transform;
pub mod wavefield;

pub use num_complex::Complex64;

pub use grid::{ConfigField, GridError, GridSpec, MultiParticleField, WaveField};
pub use group::{FiniteGroup, GroupError};
pub use group_algebra::{AlgebraError, GroupWavefunction, TotalSum};
pub use potential::{Potential, PotentialError, RadialTable};
pub use rng::CounterRng;
pub use superposition::{Amplitude, FrameError, FrameId, FrameSuperposition};
pub use transform::{Dim, EuclideanTransform, TransformError};
pub use wavefield::{DerivativeDiscrepancy, GradientReference, Transformed};
