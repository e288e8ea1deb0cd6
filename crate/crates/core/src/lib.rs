//! Exact-arithmetic kernel for Weyl-group combinatorics, glued coset
//! diagrams, and chain-level verification tools.
//!
//! Everything here is `no_std + alloc`: no floating point, no IO. Rational
//! numbers are arbitrary-precision (`num-rational` over `num-bigint`).

#![cfg_attr(not(test), no_std)]
// Index loops over square relation matrices and parallel arrays are the
// local idiom; iterator rewrites obscure the arithmetic.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod chainalg;
pub mod coxeter;
pub mod error;
pub mod glue;
pub mod hocolim;
pub mod linalg;
pub mod parabolic;
pub mod poly;
pub mod polytope;
