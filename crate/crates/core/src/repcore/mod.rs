//! Exact linear algebra over finite fields and `k[Z/p^v]`-module utilities.

pub mod cyclic;
pub mod field;
pub mod matrix;

pub use cyclic::{induced_module, shapiro_check, CyclicModule};
pub use field::{Fq, FqContext};
pub use matrix::{EchelonBasis, FqMatrix};
