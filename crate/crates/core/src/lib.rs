//! Exact fermionic multiplicity sums, classical and deformed Q-systems, and
//! the generating-function identities relating restricted and unrestricted sums
//! for every simple Lie algebra.
//!
//! The crate is `no_std` and only needs an allocator. All arithmetic is exact:
//! integers are arbitrary precision and rational functions are kept as
//! numerator/denominator pairs of sparse Laurent polynomials.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod algebra;
pub mod arith;
pub mod deformed;
pub mod fermionic;
pub mod genfun;
pub mod oracle;
pub mod qsystem;

mod error;

pub use error::Error;
