//! Matrix algebra over `T_s` and over `F_p`.

mod fp;
mod matrix;
mod semilinear;
mod smith;

pub use fp::FpMatrix;
pub use matrix::TMatrix;
pub use semilinear::{solve_semilinear, SemilinearSolution};
pub use smith::{intersect, left_kernel, solve_left, solve_left_matrix, two_sided_cofactor, AdaptedBasis, SmithForm};

/// `M^{-1}`, by Gauss-Jordan elimination with unit pivots.
pub fn mat_invert(m: &TMatrix) -> crate::Result<TMatrix> {
    m.invert()
}

/// Adapted basis of the submodule of `T_s^d` spanned by the rows of `gens`.
pub fn adapted_basis(gens: &TMatrix, d: usize) -> crate::Result<AdaptedBasis> {
    AdaptedBasis::of_span(gens, d)
}
