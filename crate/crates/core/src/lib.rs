//! Open-closed cobordisms: surface invariants, sewing, the vanishing
//! classifier, Frobenius transfer models and a small TQFT evaluator.

pub mod cells;
pub mod classifier;
pub mod frobenius;
pub mod io;
pub mod par;
pub mod sewing;
pub mod surface;
pub mod tqft;

/// Exact scalars used by every linear-algebra routine.
pub type Q = num_rational::Rational64;
