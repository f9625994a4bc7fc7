//! Smoothness and rational smoothness of closures of orthogonal-group orbits
//! on the flag variety of `GL_n`, indexed by involutions of `S_n`.
//!
//! Three independent classifiers are provided:
//!
//! * [`bruhat`]: degrees of `w0`-conjugates in the Bruhat graph of the order
//!   ideal above an involution, compared with the rank of the ideal;
//! * [`pattern`]: avoidance of (decorated) involution patterns;
//! * [`determinantal`]: the Jacobian criterion on symmetric determinantal
//!   equations, computed exactly over prime fields.
//!
//! [`driver`] ties them together into surveys and equivalence checks.

pub mod bruhat;
pub mod determinantal;
pub mod driver;
pub mod error;
pub mod field;
pub mod linalg;
pub mod pattern;
pub mod perm;

pub use error::{Error, Result};
pub use field::{Field, FiniteField, Fp, PrimeField};
pub use perm::{Involution, RankMatrix};

/// The default prime field, integers modulo `2^31 - 1`.
pub type Fp31 = Fp<{ field::DEFAULT_PRIME }>;
/// Small field used for sampling equivalence checks.
pub type F101 = Fp<101>;
/// Exact rationals, for characteristic-zero cross-checks.
pub type Rational = num_rational::BigRational;
/// Dense matrices over the default prime field.
pub type Matrix31 = linalg::Matrix<Fp31>;
