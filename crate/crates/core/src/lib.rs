//! Position-momentum superpositions in free propagation.
//!
//! A state localized in both a position interval `|x| <= L/2` and a momentum
//! interval `|p| <= B/2` would, if particles moved on straight lines, have to
//! be found in `|x| <= L` at time `t = m L / B`. This crate computes the
//! probabilities involved for the equal-weight superposition of a localized
//! component and its momentum companion, and the defect by which quantum
//! interference undercuts that expectation.
//!
//! Units are `hbar = m = 1`; most entry points take `L = 1`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod grid;
pub mod localization;
pub mod numerics;
pub mod propagation;
pub mod superposition;
pub mod wavefunction;

pub use analysis::{Family, ProbabilityReport, SweepGrid};
pub use error::{Error, Result};
pub use grid::Grid;
pub use localization::LocalizationCoefficients;
pub use numerics::QuadratureSpec;
pub use propagation::PropagatedState;
pub use superposition::{PlusState, Scenario, Target};
pub use wavefunction::{Interval, Representation, Wavefunction};
