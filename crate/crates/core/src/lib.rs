//! Exact multilinear polynomials, read-once formulas (ROFs) and sums of
//! read-once polynomials.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalars`]: exact arithmetic over ℚ and F_p, including square roots.
//! * [`mpoly`]: multilinear polynomials with restriction, discrete partial
//!   derivatives and commutators, plus the named families `S_n^k`,
//!   `M_n^{α,β}` and `f^{α,β,γ}`.
//! * [`rof`]: normal-form read-once formulas and sums of them.
//! * [`recognize`]: ROP recognition with witnesses and the sum-of-two-ROPs
//!   structure tests and closed-form family decision.
//! * [`decompose`]: constructive decompositions into sums of ROPs.
//! * [`oracle`]: exhaustive enumeration of ROPs over small prime fields and
//!   minimal summand counts.

pub mod decompose;
pub mod error;
pub mod mpoly;
pub mod oracle;
pub mod recognize;
pub mod rof;
pub mod scalars;

pub use error::{Error, Result};
pub use mpoly::{MultilinearPoly, SparsePoly};
pub use rof::{Rof, RopSum};
pub use scalars::{Field, FieldElem};
