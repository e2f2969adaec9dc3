//! Spectral and zeta-function machinery for even-dimensional compact rank-one
//! locally symmetric spaces `Γ\G/K` and their compact duals.
//!
//! Everything here is `no_std` with `alloc`: exact rational root data and Weyl
//! polynomials, the dual theta function and regularized determinants, geodesic
//! class weights, Selberg and Ruelle zeta evaluation, and the divisor catalogs
//! of the four rank-one families. File formats, the CLI and thread pools live in
//! the `zetascope` crate.
#![no_std]
// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod branching;
pub mod catalog;
pub mod dual;
pub mod error;
pub mod fuchsian;
pub mod geodesics;
pub mod mtype;
pub mod poly;
pub mod rational;
pub mod ruelle;
pub mod space;
pub mod special;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use rational::Q;
