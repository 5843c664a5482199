//! Numerical verification of gauge factorizations, Krein-space metrics and
//! point interactions for PT-symmetric Schrödinger operators.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod abelian;
pub mod cartan;
pub mod check;
pub mod clifford;
pub mod error;
pub mod jaynes_cummings;
pub mod matrix_schrodinger;
pub mod numerics;
pub mod point;
pub mod sampling;

pub use check::{all_pass, Check, Relation};
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
