#![cfg_attr(not(any(test, feature = "std")), no_std)]

//! Computable objects around the sum-of-divisors function: exact σ(n)
//! from factorizations, sign-certified Robin gaps, exponent
//! canonicalization, the ε-excess machinery, candidate generators
//! (primorials, descending-exponent numbers, colossally abundant
//! numbers), and empirical checks of the prime asymptotics they rest on.
//!
//! Everything real-valued is carried as a rigorous enclosure
//! ([`interval::CertifiedReal`]); signs and inequalities are only ever
//! reported when the enclosures separate.

extern crate alloc;

pub mod asymptotics;
pub mod canonical;
pub mod error;
pub mod interval;
pub mod factor;
pub mod functional;
pub mod generators;
pub mod primes;

pub use error::{Error, Result};
pub use interval::{CertifiedReal, CertifiedSign, EscalationPolicy, RealCtx};
