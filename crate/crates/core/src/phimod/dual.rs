//! Cartier duality.
//!
//! `M^∨ = Hom(M, T_s)` with `Fil^r M^∨ = {f : f(Fil^r M) ⊆ u^{er} T_s}`. The
//! columns of `B` generate this filtration (`A B = u^{er} Id`), and the
//! functional `f_j = B e_j` has `phi_r^∨(f_j) = m_j^*`. Since `phi_r^∨` is
//! semilinear, the presentation is written in the basis
//! `n_j = kappa m_j^*` with `kappa = phi(c^r) / c^r`, where it becomes
//! `A^∨ = (c^r / kappa) B^T`. For constant `c`, `kappa = 1`.

use crate::error::{BreuilError, Result};
use crate::linalg::{AdaptedBasis, TMatrix};
use crate::ring::TPoly;

use super::{PhiModule, PhiMorphism};

fn kappa(m: &PhiModule) -> TPoly {
    let cr = m.params().c_r();
    &cr.frobenius() * &cr.invert_unit().expect("c is a unit")
}

impl PhiModule {
    pub fn cartier_dual(&self) -> PhiModule {
        let cr = self.params().c_r();
        let mu = &cr * &kappa(self).invert_unit().expect("kappa is a unit");
        let a = self.b().transpose().scale(&mu);
        PhiModule::new(self.params().clone(), a).expect("dual of a presentation is a presentation")
    }

    /// Checks the defining pairing between `Fil^r M` and `Fil^r M^∨`:
    /// every pairing of generators lies in `u^{er} T_s`, `phi_r` of the pairing
    /// matrix is `c^r` times `phi_r^∨`-images, and `Fil^r M^∨` has the
    /// dimension of the full annihilator.
    pub fn verify_dual(&self, dual: &PhiModule) -> Result<()> {
        let (p, s, d) = (self.p(), self.s(), self.rank());
        let er = self.params().er();
        if dual.rank() != d || dual.params() != self.params() {
            return Err(BreuilError::VerificationFailed("dual has the wrong shape".into()));
        }
        // Dual generators in the m^* coordinates.
        let gens = dual.a().scale(&kappa(self));
        let pairing = self.a().mul(&gens.transpose());
        if pairing.entries().iter().any(|x| x.valuation() < crate::ring::Valuation::Finite(er)) {
            return Err(BreuilError::VerificationFailed("pairing leaves u^{er} T_s".into()));
        }
        let q = pairing.shift_down(er);
        let expected = TMatrix::scalar(d, &self.params().c_r().frobenius());
        if q.frobenius() != expected {
            return Err(BreuilError::VerificationFailed("pairing does not intertwine phi_r".into()));
        }
        let fil = self.filtration();
        let want: usize = fil.exponents().iter().map(|&x| s - er + x).sum();
        let got = AdaptedBasis::of_span(dual.a(), d)?.dim_fp();
        if want != got {
            return Err(BreuilError::VerificationFailed(format!(
                "dual filtration has dimension {got}, annihilator has {want} (p = {p})"
            )));
        }
        Ok(())
    }

    /// The natural isomorphism `M -> M^∨∨`.
    pub fn double_dual_iso(&self) -> Result<PhiMorphism> {
        let dd = self.cartier_dual().cartier_dual();
        PhiMorphism::from_basis_matrix(self.clone(), dd, &TMatrix::identity(self.p(), self.s(), self.rank()))
    }
}

impl PhiMorphism {
    /// `f^∨: M2^∨ -> M1^∨`, `g -> g ∘ f`.
    pub fn cartier_dual(&self) -> Result<PhiMorphism> {
        PhiMorphism::from_basis_matrix(
            self.target().cartier_dual(),
            self.source().cartier_dual(),
            &self.phi_x().transpose(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phimod::hom_space;
    use crate::ring::RingParams;

    fn rank1(params: &RingParams, coeffs: &[i64]) -> PhiModule {
        PhiModule::new(params.clone(), TMatrix::scalar(1, &params.poly(coeffs))).unwrap()
    }

    #[test]
    fn rank_one_examples() {
        let p = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        assert_eq!(rank1(&p, &[1]).cartier_dual().a(), &TMatrix::scalar(1, &p.u_pow(2)));
        assert_eq!(rank1(&p, &[0, 1]).cartier_dual().a(), &TMatrix::scalar(1, &p.u_pow(1)));
        assert!(rank1(&p, &[0, 0, 1]).cartier_dual().is_etale());
    }

    #[test]
    fn pairing_and_double_dual_with_nonconstant_twist() {
        let p = RingParams::new(5, 2, 2, 7, &[2, 1, 3]).unwrap();
        let a = TMatrix::from_coeffs(5, 7, &[vec![vec![0, 1, 1], vec![2]], vec![vec![], vec![0, 0, 0, 1]]]);
        let m = PhiModule::new(p, a).unwrap();
        let d = m.cartier_dual();
        m.verify_dual(&d).unwrap();
        assert!(m.double_dual_iso().unwrap().is_isomorphism());
    }

    #[test]
    fn dual_morphisms_are_morphisms() {
        let p = RingParams::with_unit_c(3, 2, 1, 4).unwrap();
        let a = TMatrix::from_coeffs(3, 4, &[vec![vec![0, 1], vec![1]], vec![vec![], vec![0, 1]]]);
        let m = PhiModule::new(p.clone(), a).unwrap();
        let n = rank1(&p, &[0, 1]);
        for f in hom_space(&m, &n).unwrap().iter().chain(hom_space(&n, &m).unwrap().iter()) {
            let fd = f.cartier_dual().unwrap();
            assert_eq!(fd.cartier_dual().unwrap().phi_x(), f.phi_x());
        }
    }
}

#[cfg(test)]
mod props {
    use crate::phimod::{hom_dimension, is_isomorphic};
    use crate::random::{fixture_rng, random_grid_params, random_object};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn dual_is_involutive(seed in any::<u64>(), d in 0usize..=3) {
            let mut rng = fixture_rng(seed);
            let params = random_grid_params(&mut rng);
            let m = random_object(&mut rng, &params, d);
            let dual = m.cartier_dual();
            prop_assert!(m.verify_dual(&dual).is_ok());
            prop_assert!(m.double_dual_iso().unwrap().is_isomorphism());
            prop_assert!(is_isomorphic(&m, &dual.cartier_dual()).unwrap().is_some());
            prop_assert_eq!(dual.rank(), d);
        }

        #[test]
        fn dual_reverses_hom(seed in any::<u64>(), d1 in 0usize..=2, d2 in 0usize..=2) {
            let mut rng = fixture_rng(seed);
            let params = random_grid_params(&mut rng);
            let (m1, m2) = (random_object(&mut rng, &params, d1), random_object(&mut rng, &params, d2));
            prop_assert_eq!(
                hom_dimension(&m1, &m2).unwrap(),
                hom_dimension(&m2.cartier_dual(), &m1.cartier_dual()).unwrap()
            );
        }
    }
}
