//! Exact c-differential spectra of power functions `x^d` over F_{p^n}, p odd.
//!
//! Everything here is brute force or exact integer arithmetic; there is no
//! floating point anywhere. The crate is `no_std` and needs only `alloc`.
//!
//! - [`finite_field`]: field construction, arithmetic, quadratic character, square roots.
//! - [`char_sum`]: quadratic character sums, including the two elliptic-curve sums
//!   and their Frobenius-trace lift.
//! - [`diff_spectrum`]: c-differential counts, spectra, N4 and the D-set census.
//! - [`closed_form`]: closed-form spectrum predictions and the harness that checks
//!   them against brute force.

#![no_std]

extern crate alloc;

pub mod char_sum;
pub mod closed_form;
pub mod diff_spectrum;
pub mod error;
pub mod finite_field;
pub mod num;

pub use error::{BudgetKind, Error, Residue, Result};
pub use finite_field::{make_field, ArithOp, FieldCtx, FieldElement, Limits, Sign};
