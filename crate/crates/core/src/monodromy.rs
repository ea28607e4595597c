//! Monodromy operators on objects over `T_{ep}`.
//!
//! `N` is given on the basis by `N(m_i) = sum_j Lambda_ij m_j` and extended by
//! `N(a x) = N(a) x + a N(x)`, with `N(u) = -u`. `E(u)` is `u^e` modulo `p`.

use crate::error::{BreuilError, Result};
use crate::linalg::{solve_left, TMatrix};
use crate::phimod::PhiModule;
use crate::ring::TPoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonodromyModule {
    base: PhiModule,
    lambda: TMatrix,
}

/// Outcome of [`MonodromyModule::check_monodromy`], one entry per generator
/// of `Fil^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyReport {
    /// `u^e N(alpha_i)` lies in `Fil^r`.
    pub griffiths: Vec<bool>,
    /// `phi_r(u^e N(alpha_i)) = c N(phi_r(alpha_i))`; `None` when the
    /// membership condition already fails.
    pub frobenius: Vec<Option<bool>>,
}

impl MonodromyReport {
    pub fn griffiths_ok(&self) -> bool {
        self.griffiths.iter().all(|&b| b)
    }

    pub fn frobenius_ok(&self) -> bool {
        self.frobenius.iter().all(|b| *b == Some(true))
    }

    pub fn passes(&self) -> bool {
        self.griffiths_ok() && self.frobenius_ok()
    }

    /// Name of the first failing axiom, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.griffiths_ok() {
            Some("u^e N(Fil^r) is not contained in Fil^r")
        } else if !self.frobenius_ok() {
            Some("phi_r(u^e N(x)) != c N(phi_r(x))")
        } else {
            None
        }
    }
}

impl MonodromyModule {
    pub fn new(base: PhiModule, lambda: TMatrix) -> Result<Self> {
        let params = base.params();
        if params.r() + 1 >= params.p() {
            return Err(BreuilError::RankViolation { r: params.r(), p: params.p() });
        }
        if params.s() != params.ep() {
            return Err(BreuilError::LevelViolation(format!(
                "monodromy lives at s = ep = {}, got s = {}",
                params.ep(),
                params.s()
            )));
        }
        let d = base.rank();
        if lambda.shape() != (d, d) || lambda.p() != base.p() || lambda.s() != base.s() {
            return Err(BreuilError::DimensionMismatch(format!("N matrix must be {d}x{d} over the base ring")));
        }
        Ok(MonodromyModule { base, lambda })
    }

    pub fn base(&self) -> &PhiModule {
        &self.base
    }

    pub fn lambda(&self) -> &TMatrix {
        &self.lambda
    }

    /// `N(sum a_i m_i) = sum N(a_i) m_i + sum a_i N(m_i)`.
    pub fn apply_n(&self, v: &[TPoly]) -> Result<Vec<TPoly>> {
        if v.len() != self.base.rank() {
            return Err(BreuilError::DimensionMismatch(format!(
                "vector of length {} in a module of rank {}",
                v.len(),
                self.base.rank()
            )));
        }
        let twist = self.lambda.vec_mul(v);
        Ok(v.iter().zip(twist).map(|(a, t)| &a.derivation_n() + &t).collect())
    }

    pub fn check_monodromy(&self) -> MonodromyReport {
        let params = self.base.params();
        let (p, s, d) = (params.p(), params.s(), self.base.rank());
        let ue = params.u_pow(params.e() as usize);
        let c = params.c();
        let cr = params.c_r();
        let fil = self.base.filtration();
        let a = self.base.a();
        let mut griffiths = Vec::with_capacity(d);
        let mut frobenius = Vec::with_capacity(d);
        for i in 0..d {
            let n_alpha = self.apply_n(a.row(i)).expect("row of the presentation");
            let w: Vec<TPoly> = n_alpha.iter().map(|x| x * &ue).collect();
            let inside = fil.contains(&w);
            griffiths.push(inside);
            if !inside {
                frobenius.push(None);
                continue;
            }
            let t = solve_left(a, &w).expect("membership was checked");
            let lhs: Vec<TPoly> = t.iter().map(|x| &x.frobenius() * &cr).collect();
            // c N(c^r m_i) = c (N(c^r) m_i + c^r Lambda_i).
            let rhs: Vec<TPoly> = (0..d)
                .map(|j| {
                    let mut x = &cr * &self.lambda[(i, j)];
                    if i == j {
                        x = &x + &cr.derivation_n();
                    }
                    c * &x
                })
                .collect();
            debug_assert!(lhs.iter().all(|x| x.p() == p && x.len() == s));
            frobenius.push(Some(lhs == rhs));
        }
        MonodromyReport { griffiths, frobenius }
    }

    /// The same structure written in the basis `phi(V) m`, where the
    /// presentation becomes `V A phi(V)^{-1}`.
    pub fn base_change(&self, v: &TMatrix) -> Result<MonodromyModule> {
        let a = self.base.a();
        let pv = v.frobenius();
        let pv_inv = pv.invert()?;
        let a2 = v.mul(a).mul(&pv_inv);
        let lambda = pv.derivation_n().add(&pv.mul(&self.lambda)).mul(&pv_inv);
        MonodromyModule::new(PhiModule::new(self.base.params().clone(), a2)?, lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingParams;

    fn params() -> RingParams {
        RingParams::with_unit_c(5, 2, 1, 10).unwrap()
    }

    fn rank1(params: &RingParams, coeffs: &[i64], lambda: &[i64]) -> MonodromyModule {
        let base = PhiModule::new(params.clone(), TMatrix::scalar(1, &params.poly(coeffs))).unwrap();
        MonodromyModule::new(base, TMatrix::scalar(1, &params.poly(lambda))).unwrap()
    }

    #[test]
    fn apply_n_examples() {
        let p = params();
        let m = rank1(&p, &[1], &[]);
        assert_eq!(m.apply_n(&[p.one()]).unwrap(), vec![p.zero()]);
        assert_eq!(m.apply_n(&[p.u_pow(1)]).unwrap(), vec![p.poly(&[0, -1])]);
        let id = rank1(&p, &[1], &[1]);
        assert_eq!(id.apply_n(&[p.u_pow(1)]).unwrap(), vec![p.zero()]);
    }

    #[test]
    fn rank_one_checks() {
        let p = params();
        assert!(rank1(&p, &[0, 0, 1], &[]).check_monodromy().passes());
        assert!(rank1(&p, &[1], &[]).check_monodromy().passes());
        let bad = rank1(&p, &[0, 0, 1], &[1]).check_monodromy();
        assert!(bad.griffiths_ok());
        assert!(!bad.frobenius_ok());
    }

    #[test]
    fn diagram_fails_with_identity_operator() {
        let p = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        let report = rank1(&p, &[0, 0, 1], &[1]).check_monodromy();
        assert_eq!(report.griffiths, vec![true]);
        assert_eq!(report.frobenius, vec![Some(false)]);
    }

    #[test]
    fn large_filtration_level_is_rejected() {
        let p = RingParams::with_unit_c(3, 1, 2, 3).unwrap();
        let base = PhiModule::new(p.clone(), TMatrix::scalar(1, &p.one())).unwrap();
        assert_eq!(
            MonodromyModule::new(base, TMatrix::zeros(3, 3, 1, 1)),
            Err(BreuilError::RankViolation { r: 2, p: 3 })
        );
    }

    #[test]
    fn zero_operator_can_fail_the_diagram_despite_membership() {
        // A = diag(1, u^2) [[1, u], [0, 1]]: u^2 N(alpha_1) = -u^3 m_2 lies in
        // Fil, but phi_r of it is -u^5 m_2 while the right side vanishes.
        let p = params();
        let a = TMatrix::from_coeffs(5, 10, &[vec![vec![1], vec![0, 1]], vec![vec![], vec![0, 0, 1]]]);
        let base = PhiModule::new(p, a).unwrap();
        let m = MonodromyModule::new(base, TMatrix::zeros(5, 10, 2, 2)).unwrap();
        let report = m.check_monodromy();
        assert!(report.griffiths_ok());
        assert!(!report.frobenius_ok());
    }

    #[test]
    fn base_change_preserves_the_axioms() {
        let p = params();
        let m = rank1(&p, &[0, 1], &[]);
        assert!(m.check_monodromy().passes());
        let v = TMatrix::scalar(1, &p.poly(&[2, 1, 3]));
        assert!(m.base_change(&v).unwrap().check_monodromy().passes());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::random::{fixture_rng, random_invertible, random_matrix, random_tpoly};
    use crate::ring::RingParams;
    use proptest::prelude::*;
    use rand::Rng;

    fn params() -> RingParams {
        RingParams::with_unit_c(5, 2, 1, 10).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn n_satisfies_leibniz(seed in any::<u64>(), d in 1usize..=3) {
            let mut rng = fixture_rng(seed);
            let params = params();
            let exps: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=2)).collect();
            let a = TMatrix::u_diagonal(5, 10, &exps).mul(&random_invertible(&mut rng, 5, 10, d));
            let m = MonodromyModule::new(PhiModule::new(params, a).unwrap(), random_matrix(&mut rng, 5, 10, d, d)).unwrap();
            let scalar = random_tpoly(&mut rng, 5, 10);
            let v: Vec<TPoly> = (0..d).map(|_| random_tpoly(&mut rng, 5, 10)).collect();
            let av: Vec<TPoly> = v.iter().map(|x| &scalar * x).collect();
            let nv = m.apply_n(&v).unwrap();
            let expected: Vec<TPoly> = v.iter().zip(&nv).map(|(x, y)| &(&scalar.derivation_n() * x) + &(&scalar * y)).collect();
            prop_assert_eq!(m.apply_n(&av).unwrap(), expected);
        }

        #[test]
        fn base_change_preserves_the_verdict(seed in any::<u64>(), d in 1usize..=2, zero_lambda in any::<bool>()) {
            let mut rng = fixture_rng(seed);
            let exps: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=2)).collect();
            let constant = random_invertible(&mut rng, 5, 1, d).lift(10);
            let a = TMatrix::u_diagonal(5, 10, &exps).mul(&constant);
            let lambda = if zero_lambda { TMatrix::zeros(5, 10, d, d) } else { random_matrix(&mut rng, 5, 10, d, d) };
            let m = MonodromyModule::new(PhiModule::new(params(), a).unwrap(), lambda).unwrap();
            let v = random_invertible(&mut rng, 5, 10, d);
            let changed = m.base_change(&v).unwrap();
            prop_assert_eq!(changed.check_monodromy().passes(), m.check_monodromy().passes());
            if zero_lambda {
                prop_assert!(m.check_monodromy().passes());
            }
        }
    }
}
