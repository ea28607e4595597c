//! Exact arithmetic for torsion Breuil modules over `k[u]/u^s` with `k = F_p`.
//!
//! Objects of the category are presented by a square matrix `A` over
//! `T_s = F_p[u]/u^s`: the filtration is the row span of `A` and the divided
//! Frobenius sends the `i`-th row to `c^r` times the `i`-th basis vector.
//! Everything else (duality, morphism spaces, kernels, truncation and lifting,
//! the monodromy layer) is computed from these presentations.

pub mod abelian;
pub mod error;
pub mod functors;
pub mod io;
pub mod linalg;
pub mod monodromy;
pub mod phimod;
pub mod random;
pub mod ring;
pub mod selftest;

pub use error::{BreuilError, Result};
pub use linalg::{AdaptedBasis, TMatrix};
pub use phimod::{PhiModule, PhiMorphism};
pub use ring::{RingParams, TPoly, Valuation};
