//! Maximality tests for orders `Z[alpha]` generated by a root of a monic
//! irreducible integer polynomial.
//!
//! The core check factors `f` modulo each prime `p` whose square divides the
//! discriminant and, for every repeated factor, asks whether the remainder of
//! `f` by a monic lift of that factor has `p`-adic Gauss valuation exactly 1.
//! Around it sit closed-form tests for `x^n - u` over `Z` and over quadratic
//! rings of integers, Eisenstein-type sufficient conditions, and the classical
//! gcd form of Dedekind's criterion as an independent cross-check.

pub mod arith;
pub mod criterion;
pub mod eisenstein;
mod error;
pub mod fppoly;
pub mod purepower;
pub mod quadratic;
pub mod zpoly;

pub use criterion::{
    classical_dedekind_oracle, is_maximal_global, lift_stability_check, local_maximality,
    Certificate, FactorEvidence, IrreducibilityStatus, LocalReport, RemainderValuation, Verdict,
};
pub use error::{Error, Result};
pub use fppoly::{factor_mod_p, FactorizationModP, FpPoly};
pub use zpoly::{parse_poly, IntPoly};
