//! Roots of zero-dimensional polynomial systems via Bezout matrices.
//!
//! The pipeline builds the Bezout family `B(1), B(x_1), ..., B(x_n)` of a
//! square system by Fourier interpolation ([`bezmat`]), reduces it until
//! `B(1)` is square and invertible ([`reduce`]), forms the multiplication
//! matrices `X_j = B(x_j) B(1)^{-1}` and reads the roots off a random linear
//! combination of them ([`solve`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bezmat;
pub mod bezout1d;
mod error;
pub mod linalg;
pub mod poly;
pub mod reduce;
pub mod solve;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
