//! Truncation `M -> M / u^s M` from level `t` to level `s`, and its
//! quasi-inverses on objects and morphisms.

use crate::error::{BreuilError, Result};
use crate::linalg::TMatrix;
use crate::phimod::{PhiModule, PhiMorphism};
use crate::ring::RingParams;

/// Which equivalence statement covers a pair of levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `er < p - 1`: truncation is an equivalence.
    Strict,
    /// `er = p - 1` and `s > p`.
    BoundaryDeep,
    /// `er = p - 1` and `s = p`: an equivalence on unipotent objects only.
    BoundaryUnipotent,
}

/// Levels `ep >= t > s >= p` together with their regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelPair {
    pub t: usize,
    pub s: usize,
    pub regime: Regime,
}

impl LevelPair {
    pub fn new(params: &RingParams, t: usize, s: usize) -> Result<LevelPair> {
        let (p, ep) = (params.p() as usize, params.ep());
        if !(ep >= t && t > s && s >= p) {
            return Err(BreuilError::LevelViolation(format!("need ep = {ep} >= t = {t} > s = {s} >= p = {p}")));
        }
        let regime = if params.strict() {
            Regime::Strict
        } else if s > p {
            Regime::BoundaryDeep
        } else {
            Regime::BoundaryUnipotent
        };
        Ok(LevelPair { t, s, regime })
    }
}

fn check_down(params: &RingParams, s: usize) -> Result<()> {
    LevelPair::new(params, params.s(), s).map(|_| ())
}

pub fn truncate(m: &PhiModule, s: usize) -> Result<PhiModule> {
    check_down(m.params(), s)?;
    PhiModule::new(m.params().at_level(s)?, m.a().truncate(s))
}

pub fn truncate_morphism(f: &PhiMorphism, s: usize) -> Result<PhiMorphism> {
    let source = truncate(f.source(), s)?;
    let target = truncate(f.target(), s)?;
    PhiMorphism::new(source, target, f.x().truncate(s))
}

/// The object at level `t` whose presentation is the minimal-degree lift of
/// `A`; its truncation to the level of `m` is `m` itself.
pub fn lift_object(m: &PhiModule, t: usize) -> Result<PhiModule> {
    let params = m.params();
    let levels = LevelPair::new(params, t, params.s())?;
    if levels.regime == Regime::BoundaryUnipotent && !m.is_unipotent()? {
        return Err(BreuilError::RegimeViolation(format!(
            "er = p - 1 and s = p: lifting is only defined on unipotent objects (rank {})",
            m.rank()
        )));
    }
    let s = params.s();
    let er = params.er();
    let lifted = params.at_level(t)?;
    let a = m.a().lift(t);
    let b = m.b().lift(t);
    let d = m.rank();
    // B A = u^{er} + u^s Q, and (Id + u^{s-er} Q)^{-1} B is a left cofactor.
    let u_er = TMatrix::scalar(d, &lifted.u_pow(er));
    let defect = b.mul(&a).sub(&u_er);
    if defect.shift_down(s).shift_up(s) != defect {
        return Err(BreuilError::internal("cofactor defect not divisible by u^s"));
    }
    let q = defect.shift_down(s);
    let corr = TMatrix::identity(params.p(), t, d).add(&q.shift_up(s - er));
    let b_hat = corr.invert()?.mul(&b);
    if b_hat.mul(&a) != u_er {
        return Err(BreuilError::VerificationFailed("corrected cofactor does not invert the lift".into()));
    }
    // b_hat is only a left cofactor in general; the stored two-sided one
    // comes from the Smith form.
    PhiModule::new(lifted, a)
}

/// Upper bound on fixed-point rounds in [`lift_morphism`].
fn round_cap(t: usize) -> usize {
    4 * t + 64
}

/// Lifts `f` to a morphism between lifts of its endpoints.
///
/// With `A1 phi(X) - X A2 = u^s Q` for the minimal-degree lift `X`, the
/// correction `u Y` solves the morphism equation when
/// `Y = u^{s-1-er} Q B2 + u^{p-1-er} A1 phi(Y) B2`, which is found by
/// iterating from `Y = 0`.
pub fn lift_morphism(f: &PhiMorphism, source: &PhiModule, target: &PhiModule) -> Result<PhiMorphism> {
    let params = f.source().params();
    let (p, s, er) = (params.p() as usize, params.s(), params.er());
    let t = source.s();
    let levels = LevelPair::new(params, t, s)?;
    if target.s() != t || truncate(source, s)? != *f.source() || truncate(target, s)? != *f.target() {
        return Err(BreuilError::LevelViolation("lifted endpoints do not truncate to the endpoints of f".into()));
    }
    if levels.regime == Regime::BoundaryUnipotent && !f.source().is_unipotent()? {
        return Err(BreuilError::RegimeViolation("er = p - 1 and s = p: source must be unipotent".into()));
    }
    let (a1, a2, b2) = (source.a(), target.a(), target.b());
    let x0 = f.x().lift(t);
    let defect = a1.mul(&x0.frobenius()).sub(&x0.mul(a2));
    if defect.shift_down(s).shift_up(s) != defect {
        return Err(BreuilError::internal("morphism defect not divisible by u^s"));
    }
    let head = defect.shift_down(s).mul(b2).shift_up(s - 1 - er);
    let mut y = TMatrix::zeros(params.p(), t, x0.rows(), x0.cols());
    let mut converged = false;
    for _ in 0..round_cap(t) {
        let next = head.add(&a1.mul(&y.frobenius()).mul(b2).shift_up(p - 1 - er));
        if next == y {
            converged = true;
            break;
        }
        y = next;
    }
    if !converged {
        return Err(BreuilError::VerificationFailed("correction series did not stabilise".into()));
    }
    let x = x0.add(&y.shift_up(1));
    let lifted = PhiMorphism::new(source.clone(), target.clone(), x)
        .map_err(|e| BreuilError::VerificationFailed(format!("lifted matrix: {e}")))?;
    if lifted.phi_x().truncate(s) != *f.phi_x() {
        return Err(BreuilError::VerificationFailed("lift does not reduce to the original morphism".into()));
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phimod::{hom_dimension, hom_space};

    #[test]
    fn truncation_example() {
        let p6 = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        let a = TMatrix::from_coeffs(3, 6, &[vec![vec![0, 0, 1], vec![]], vec![vec![], vec![1, 0, 0, 0, 1]]]);
        let m = PhiModule::new(p6, a).unwrap();
        let m4 = truncate(&m, 4).unwrap();
        assert_eq!(m4.a(), &TMatrix::from_coeffs(3, 4, &[vec![vec![0, 0, 1], vec![]], vec![vec![], vec![1]]]));
        let back = lift_object(&m4, 6).unwrap();
        assert_eq!(truncate(&back, 4).unwrap(), m4);
        assert!(matches!(truncate(&m, 2), Err(BreuilError::LevelViolation(_))));
    }

    #[test]
    fn etale_lift_at_boundary_is_rejected() {
        let p3 = RingParams::with_unit_c(3, 2, 1, 3).unwrap();
        let et = PhiModule::new(p3.clone(), TMatrix::scalar(1, &p3.one())).unwrap();
        assert!(matches!(lift_object(&et, 6), Err(BreuilError::RegimeViolation(_))));
    }

    #[test]
    fn morphism_lifts_preserve_hom_dimension() {
        let p3 = RingParams::with_unit_c(3, 2, 1, 3).unwrap();
        let a = TMatrix::from_coeffs(3, 3, &[vec![vec![0, 1], vec![1]], vec![vec![], vec![0, 1]]]);
        let m = PhiModule::new(p3.clone(), a).unwrap();
        let n = PhiModule::new(p3, TMatrix::from_coeffs(3, 3, &[vec![vec![0, 1]]])).unwrap();
        assert!(m.is_unipotent().unwrap() && n.is_unipotent().unwrap());
        let (mh, nh) = (lift_object(&m, 6).unwrap(), lift_object(&n, 6).unwrap());
        for (x, y) in [(&m, &n), (&n, &m), (&m, &m)] {
            let (xh, yh) = (lift_object(x, 6).unwrap(), lift_object(y, 6).unwrap());
            assert_eq!(hom_dimension(x, y).unwrap(), hom_dimension(&xh, &yh).unwrap());
            for f in hom_space(x, y).unwrap() {
                let fh = lift_morphism(&f, &xh, &yh).unwrap();
                assert_eq!(truncate_morphism(&fh, 3).unwrap(), f);
            }
        }
        let id = PhiMorphism::identity(&m);
        assert_eq!(lift_morphism(&id, &mh, &mh).unwrap(), PhiMorphism::identity(&mh));
        let z = PhiMorphism::zero(&m, &n);
        assert!(lift_morphism(&z, &mh, &nh).unwrap().is_zero());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::random::{fixture_rng, random_grid_params, random_object};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn truncate_after_lift_is_identity(seed in any::<u64>(), d in 0usize..=3, step in 1usize..=5) {
            let mut rng = fixture_rng(seed);
            let params = random_grid_params(&mut rng);
            let m = random_object(&mut rng, &params, d);
            let s = params.s();
            let t = (s + step).min(params.ep());
            prop_assume!(t > s);
            match lift_object(&m, t) {
                Ok(lifted) => {
                    prop_assert_eq!(lifted.s(), t);
                    prop_assert_eq!(truncate(&lifted, s).unwrap(), m);
                }
                Err(BreuilError::RegimeViolation(_)) => {
                    prop_assert!(!params.strict() && s == params.p() as usize);
                    prop_assert!(!m.is_unipotent().unwrap());
                }
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }

        #[test]
        fn truncation_preserves_rank_and_exponents(seed in any::<u64>(), d in 0usize..=3) {
            let mut rng = fixture_rng(seed);
            let params = random_grid_params(&mut rng);
            let p = params.p() as usize;
            prop_assume!(params.s() > p);
            let m = random_object(&mut rng, &params, d);
            let low = truncate(&m, p).unwrap();
            prop_assert_eq!(low.rank(), d);
            let exps: Vec<usize> = m.filtration().exponents().iter().map(|&x| x.min(p)).collect();
            let low_exps: Vec<usize> = low.filtration().exponents().iter().map(|&x| x.min(p)).collect();
            prop_assert_eq!(exps, low_exps);
        }
    }
}
