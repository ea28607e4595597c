//! Subobjects and quotients given by free direct summands.
//!
//! Both reduce to [`present`]: from generators of `Fil^r` (in some basis `n`
//! of a free module) and their `phi_r`-images divided by `c^r`, produce a
//! presentation matrix and the basis in which it is written.

use crate::error::{BreuilError, Result};
use crate::linalg::{intersect, solve_left_matrix, AdaptedBasis, SmithForm, TMatrix};
use crate::ring::RingParams;

use super::{PhiModule, PhiMorphism};

/// Presentation of a free module with `Fil^r` spanned by the rows of `g` and
/// `phi_r(g_i) = c^r h_i`. Returns `(A', E)` where the new basis is `E n`.
pub(crate) fn present(params: &RingParams, g: &TMatrix, h: &TMatrix) -> Result<(TMatrix, TMatrix)> {
    let (p, s) = (params.p(), params.s());
    let d = g.cols();
    if d == 0 {
        return Ok((TMatrix::zeros(p, s, 0, 0), TMatrix::zeros(p, s, 0, 0)));
    }
    if g.rows() < d {
        return Err(BreuilError::NotAPresentation { exponent: s, er: params.er() });
    }
    let smith = SmithForm::compute(g);
    let images = smith.left.frobenius().mul(h);
    let rest = images.submatrix(d..images.rows(), 0..d);
    if !rest.is_zero() {
        return Err(BreuilError::NotAMorphism("induced divided Frobenius is not well defined".into()));
    }
    let e = images.submatrix(0..d, 0..d);
    let e_inv = e
        .invert()
        .map_err(|_| BreuilError::NotAMorphism("image of the divided Frobenius does not generate".into()))?;
    let a = smith.diagonal(d, d).mul(&smith.right_inv).mul(&e_inv);
    Ok((a, e))
}

impl PhiModule {
    /// The subobject on the free summand whose basis is the rows of `w`, with
    /// `Fil^r` induced from `self`. Returns the object and its inclusion.
    pub fn subobject(&self, w: &TMatrix) -> Result<(PhiModule, PhiMorphism)> {
        let (p, s) = (self.p(), self.s());
        let k = w.rows();
        if w.cols() != self.rank() {
            return Err(BreuilError::DimensionMismatch(format!(
                "subobject basis has {} columns, rank is {}",
                w.cols(),
                self.rank()
            )));
        }
        if k == 0 {
            let zero = PhiModule::zero(self.params().clone());
            let incl = PhiMorphism::zero(&zero, self);
            return Ok((zero, incl));
        }
        let gens = intersect(w, self.a());
        let t = solve_left_matrix(self.a(), &gens).ok_or_else(|| BreuilError::internal("intersection outside Fil"))?;
        let not_sub = || BreuilError::NotAMorphism("rows do not span a subobject".into());
        let mut g = solve_left_matrix(w, &gens).ok_or_else(not_sub)?;
        let mut h = solve_left_matrix(w, &t.frobenius()).ok_or_else(not_sub)?;
        if g.rows() < k {
            let pad = TMatrix::zeros(p, s, k - g.rows(), k);
            g = g.vstack(&pad);
            h = h.vstack(&pad);
        }
        let (a, e) = present(self.params(), &g, &h)?;
        let sub = PhiModule::new(self.params().clone(), a)?;
        let incl = PhiMorphism::from_basis_matrix(sub.clone(), self.clone(), &e.mul(w))?;
        Ok((sub, incl))
    }

    /// The quotient by the subobject spanned by the rows of `w`, which must be
    /// a free direct summand. Returns the object and the projection.
    pub fn quotient(&self, w: &TMatrix) -> Result<(PhiModule, PhiMorphism)> {
        let d = self.rank();
        let ab = AdaptedBasis::of_span(w, d)?;
        if !ab.is_free_summand() {
            return Err(BreuilError::NotAMorphism("quotient by a submodule that is not a free summand".into()));
        }
        let a = ab.exponents().iter().filter(|&&x| x == 0).count();
        let cq = ab.q_inv().submatrix(0..d, a..d);
        let (aq, e) = present(self.params(), &self.a().mul(&cq), &cq)?;
        let quot = PhiModule::new(self.params().clone(), aq)?;
        let proj = PhiMorphism::from_basis_matrix(self.clone(), quot.clone(), &cq.mul(&e.invert()?))?;
        Ok((quot, proj))
    }
}
