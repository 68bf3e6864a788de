//! Exact computation of the bigraded Hilbert series of the diagonal
//! coinvariants `DR_n` and of the stable polynomials `P_{a,b}(n)` giving
//! `dim DR_n^{a,b}` for `n >= a + b`.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] / [`polyalg`]: exact polynomial arithmetic, q-analogs, Knuth's
//!   pentagonal coefficient formula, power sums.
//! * [`combinat`]: permutations, descents, runs, w-sequences, parking functions.
//! * [`schedules`]: the Schedules Formula and bigraded coefficient extraction.
//! * [`stability`]: the maximal-spot recursion counting `D_S ∩ W(τ, U)` as a
//!   polynomial in `n`, and the assembly of `P_{a,b}`.
//! * [`oracle`]: brute-force ground truth used to cross-check everything above.
//! * [`verify`]: named verification suites producing [`oracle::VerificationReport`]s.

pub mod combinat;
mod error;
pub mod oracle;
pub mod poly;
pub mod polyalg;
pub mod schedules;
pub mod stability;
pub mod verify;

pub use error::Error;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

pub use poly::Poly;

/// Polynomial in `q` with integer coefficients (q-integers, q-factorials).
pub type QPolynomial = Poly<BigInt>;

/// Polynomial in `n` with exact rational coefficients.
pub type DimensionPolynomial = Poly<BigRational>;

pub type Result<T, E = Error> = std::result::Result<T, E>;
