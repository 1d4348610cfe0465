//! Dimension of the tangent space `H^1(G, T_X)` of the equivariant
//! deformation functor of a curve `X` with an action of a p-group `G`,
//! computed from the ramification data of `X -> Y = X/G`.
//!
//! Three routes are implemented and cross-checked:
//!
//! * [`weakly`]: covers with `G_2(P) = 1` everywhere, with the local
//!   homology computed from the normalized bar resolution.
//! * [`borne`]: cyclic `G = Z/p^v`, through pushforwards of `2D*` down the
//!   tower of degree-p quotients.
//! * [`prank`]: the semisimple part of the Cartier split, which leaves the
//!   nilpotent covariants as an explicit parameter.
//!
//! All arithmetic is exact.

pub mod borne;
pub mod cover;
pub mod error;
pub mod filtration;
pub mod prank;
pub mod repcore;
pub mod weakly;

pub use cover::{BranchPoint, CoverSpec, GroupShape};
pub use error::{Error, Result};
pub use filtration::{delta, delta_iter, LowerFiltration, PrimeChar};
