//! Linear ramp secret sharing from nested one-point algebraic geometric codes
//! on extended norm-trace curves.
//!
//! The crate is organised bottom-up:
//!
//! * [`finite_field`] and [`linalg`]: exact arithmetic in GF(p^m) and
//!   Gaussian elimination over it.
//! * [`curve`]: the points of `x^u = Tr(y)` grouped into departments.
//! * [`semigroup`]: pole orders, `H(Q)` and `H*(Q)`.
//! * [`codes`]: evaluation codes and exact coalition leakage.
//! * [`rghw`]: footprint and semigroup bounds on relative generalized Hamming
//!   weights, plus an exhaustive oracle.
//! * [`ramp`]: dealing, reconstruction and privacy/reconstruction numbers.
//! * [`qualifying`]: explicit maximum non-qualifying coalitions.

pub mod codes;
pub mod curve;
pub mod error;
pub mod finite_field;
pub mod linalg;
pub mod qualifying;
pub mod ramp;
pub mod rghw;
pub mod semigroup;

pub use error::{Error, ErrorKind, Result};
