//! Multiplicative, nilpotent, unipotent and étale parts.

use crate::abelian::{check_exact, ShortExactSeq};
use crate::error::{BreuilError, Result};
use crate::linalg::{AdaptedBasis, TMatrix};

use super::{PhiModule, PhiMorphism};

/// The two canonical short exact sequences
/// `0 -> M^m -> M -> M^nil -> 0` and `0 -> M^uni -> M -> M^et -> 0`.
#[derive(Debug, Clone)]
pub struct PartsDecomposition {
    pub m_part: PhiModule,
    pub m_incl: PhiMorphism,
    pub nil_quotient: PhiModule,
    pub nil_proj: PhiMorphism,
    pub uni_part: PhiModule,
    pub uni_incl: PhiMorphism,
    pub et_quotient: PhiModule,
    pub et_proj: PhiMorphism,
}

impl PartsDecomposition {
    pub fn multiplicative_sequence(&self) -> ShortExactSeq {
        ShortExactSeq::new(self.m_incl.clone(), self.nil_proj.clone())
    }

    pub fn etale_sequence(&self) -> ShortExactSeq {
        ShortExactSeq::new(self.uni_incl.clone(), self.et_proj.clone())
    }

    /// Ranks of `(M^m, M^nil, M^uni, M^et)`.
    pub fn ranks(&self) -> [usize; 4] {
        [self.m_part.rank(), self.nil_quotient.rank(), self.uni_part.rank(), self.et_quotient.rank()]
    }
}

impl PhiModule {
    /// Basis (rows) of the largest submodule `W` with
    /// `W = span phi_r(u^{er} W)`.
    fn max_multiplicative_basis(&self) -> Result<TMatrix> {
        let d = self.rank();
        let mut w = AdaptedBasis::of_span(&TMatrix::identity(self.p(), self.s(), d), d)?;
        loop {
            // phi_r(u^{er} w) = phi_r((w B) A) = c^r phi(w B).
            let next = AdaptedBasis::of_span(&w.generators().mul(self.b()).frobenius(), d)?;
            if next.dim_fp() == w.dim_fp() {
                break;
            }
            w = next;
        }
        if !w.is_free_summand() {
            return Err(BreuilError::internal("multiplicative part is not a free summand"));
        }
        Ok(w.free_basis())
    }

    /// `M^m` with its inclusion.
    pub fn max_multiplicative(&self) -> Result<(PhiModule, PhiMorphism)> {
        let w = self.max_multiplicative_basis()?;
        let (mm, incl) = self.subobject(&w)?;
        if !mm.is_multiplicative() {
            return Err(BreuilError::internal("maximal multiplicative submodule is not multiplicative"));
        }
        Ok((mm, incl))
    }

    pub fn parts(&self) -> Result<PartsDecomposition> {
        let internal = |e: BreuilError| BreuilError::internal(format!("parts construction: {e}"));
        let (m_part, m_incl) = self.max_multiplicative().map_err(internal)?;
        let w = self.max_multiplicative_basis().map_err(internal)?;
        let (nil_quotient, nil_proj) = self.quotient(&w).map_err(internal)?;

        let dual = self.cartier_dual();
        let (dual_m, dual_incl) = dual.max_multiplicative().map_err(internal)?;
        let dual_w = dual.max_multiplicative_basis().map_err(internal)?;
        let (dual_nil, dual_proj) = dual.quotient(&dual_w).map_err(internal)?;

        let uni_part = dual_nil.cartier_dual();
        let uni_incl = PhiMorphism::from_basis_matrix(uni_part.clone(), self.clone(), &dual_proj.phi_x().transpose())
            .map_err(internal)?;
        let et_quotient = dual_m.cartier_dual();
        let et_proj = PhiMorphism::from_basis_matrix(self.clone(), et_quotient.clone(), &dual_incl.phi_x().transpose())
            .map_err(internal)?;

        let parts =
            PartsDecomposition { m_part, m_incl, nil_quotient, nil_proj, uni_part, uni_incl, et_quotient, et_proj };
        if !parts.et_quotient.is_etale() {
            return Err(BreuilError::internal("étale quotient is not étale"));
        }
        for seq in [parts.multiplicative_sequence(), parts.etale_sequence()] {
            let report = check_exact(&seq)?;
            if !report.is_exact() {
                return Err(BreuilError::internal(format!("part sequence not exact: {report}")));
            }
        }
        Ok(parts)
    }

    /// No nonzero multiplicative subobject.
    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.max_multiplicative()?.0.rank() == 0)
    }

    /// No nonzero étale quotient, decided through the dual: `M` is unipotent
    /// iff `M^∨` is nilpotent. Cross-checked against [`Self::product_criterion`].
    pub fn is_unipotent(&self) -> Result<bool> {
        let dual = self.unipotent_by_dual()?;
        let product = self.product_criterion();
        if dual != product {
            return Err(BreuilError::CriteriaDisagree { dual, product });
        }
        Ok(dual)
    }

    pub fn unipotent_by_dual(&self) -> Result<bool> {
        self.cartier_dual().is_nilpotent()
    }

    /// Whether `A phi(A) ... phi^N(A)` vanishes for some `N` up to
    /// `ceil(log_p s) + d + 1`.
    pub fn product_criterion(&self) -> bool {
        let d = self.rank();
        if d == 0 {
            return true;
        }
        let cutoff = product_cutoff(self.p(), self.s(), d);
        let mut prod = self.a().clone();
        let mut twist = self.a().clone();
        for _ in 0..=cutoff {
            if prod.is_zero() {
                return true;
            }
            twist = twist.frobenius();
            prod = prod.mul(&twist);
        }
        prod.is_zero()
    }
}

/// `ceil(log_p s) + d + 1`. Once `p^n >= s`, `phi^n(A)` is the constant
/// matrix `A(0)`, so the running product is `P * A(0)^k` and its vanishing is
/// decided within `d` further factors.
pub fn product_cutoff(p: u32, s: usize, d: usize) -> usize {
    let mut n = 0;
    let mut pow = 1usize;
    while pow < s {
        pow = pow.saturating_mul(p as usize);
        n += 1;
    }
    n + d + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingParams;

    fn rank1(params: &RingParams, coeffs: &[i64]) -> PhiModule {
        PhiModule::new(params.clone(), TMatrix::scalar(1, &params.poly(coeffs))).unwrap()
    }

    #[test]
    fn max_multiplicative_examples() {
        let p = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        assert_eq!(rank1(&p, &[0, 0, 1]).max_multiplicative().unwrap().0.rank(), 1);
        assert_eq!(rank1(&p, &[2]).max_multiplicative().unwrap().0.rank(), 0);
        let a = TMatrix::from_coeffs(3, 6, &[vec![vec![0, 0, 1], vec![]], vec![vec![], vec![0, 1]]]);
        let m = PhiModule::new(p, a).unwrap();
        assert_eq!(m.max_multiplicative().unwrap().0.rank(), 1);
    }

    #[test]
    fn unipotency_examples() {
        let p3 = RingParams::with_unit_c(3, 2, 1, 3).unwrap();
        assert!(!rank1(&p3, &[1]).is_unipotent().unwrap());
        assert!(rank1(&p3, &[0, 1]).is_unipotent().unwrap());
        let p6 = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        assert!(rank1(&p6, &[0, 0, 1]).is_unipotent().unwrap());
        assert!(PhiModule::zero(p6).is_unipotent().unwrap());
    }

    #[test]
    fn parts_of_pure_objects() {
        let p = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        let et = rank1(&p, &[1, 1]);
        assert_eq!(et.parts().unwrap().ranks(), [0, 1, 0, 1]);
        let mu = rank1(&p, &[0, 0, 2]);
        assert_eq!(mu.parts().unwrap().ranks(), [1, 0, 1, 0]);
        let sum = et.direct_sum(&mu).unwrap();
        let parts = sum.parts().unwrap();
        assert_eq!(parts.ranks(), [1, 1, 1, 1]);
        assert!(parts.m_part.is_multiplicative());
        assert!(parts.et_quotient.is_etale());
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(product_cutoff(3, 3, 1), 3);
        assert_eq!(product_cutoff(3, 6, 2), 5);
        assert_eq!(product_cutoff(5, 10, 3), 6);
    }
}

#[cfg(test)]
mod props {
    use crate::random::{fixture_rng, random_grid_params, random_object};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn parts_are_complementary(seed in any::<u64>(), d in 0usize..=3) {
            let mut rng = fixture_rng(seed);
            let params = random_grid_params(&mut rng);
            let m = random_object(&mut rng, &params, d);
            let parts = m.parts().unwrap();
            let [mult, nil, uni, et] = parts.ranks();
            prop_assert_eq!(mult + nil, d);
            prop_assert_eq!(uni + et, d);
            prop_assert!(parts.m_part.is_multiplicative());
            prop_assert!(parts.et_quotient.is_etale());
            prop_assert_eq!(parts.nil_quotient.is_nilpotent().unwrap(), true);
            prop_assert_eq!(parts.uni_part.is_unipotent().unwrap(), true);
        }

        #[test]
        fn unipotency_criteria_agree(seed in any::<u64>(), d in 0usize..=3) {
            let mut rng = fixture_rng(seed);
            let params = random_grid_params(&mut rng);
            let m = random_object(&mut rng, &params, d);
            let by_dual = m.unipotent_by_dual().unwrap();
            prop_assert_eq!(by_dual, m.product_criterion());
            prop_assert_eq!(by_dual, m.is_unipotent().unwrap());
        }
    }
}
