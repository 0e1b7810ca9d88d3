//! Cycles (circles, parabolas, hyperbolas and lines) in spaces with a
//! diagonal metric `diag(-1, sigma)`, represented by 2x2 matrices with
//! Clifford algebra entries.
//!
//! The crate is generic over a scalar ring: exact rationals for identity
//! checks, `f64` for drawing, and truncated power series for limits.

pub mod clifford;
pub mod cycle;
pub mod cycle2d;
mod linalg;
pub mod render;
pub mod scalar;
pub mod verify;

pub use clifford::{Frame, FsccMatrix, Multivector};
pub use cycle::{Condition, Cycle, CycleError, SignMatrix, Slot};
pub use cycle2d::Cycle2D;
pub use scalar::{jump, Jet, Rational, Scalar, ScalarError};
