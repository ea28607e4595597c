use crate::error::{BreuilError, Result};
use crate::linalg::{solve_left_matrix, solve_semilinear, two_sided_cofactor, AdaptedBasis, TMatrix};
use crate::ring::RingParams;

/// An object `(M, Fil^r M, phi_r)` of rank `d`, presented by `A`.
///
/// `M` is free on `m_1..m_d`; `Fil^r M` is the row span of `A`, and
/// `phi_r(sum_j A_ij m_j) = c^r m_i`. The cofactor `B` satisfies
/// `A B = B A = u^{er} Id` and is a deterministic function of `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhiModule {
    params: RingParams,
    a: TMatrix,
    b: TMatrix,
}

impl PhiModule {
    /// Validates the presentation and computes its cofactor.
    pub fn new(params: RingParams, a: TMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(BreuilError::DimensionMismatch(format!(
                "presentation must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if a.p() != params.p() || a.s() != params.s() {
            return Err(BreuilError::ParamMismatch(format!(
                "matrix over F_{}[u]/u^{}, params over F_{}[u]/u^{}",
                a.p(),
                a.s(),
                params.p(),
                params.s()
            )));
        }
        let b = two_sided_cofactor(&a, params.er())?;
        Ok(PhiModule { params, a, b })
    }

    pub fn zero(params: RingParams) -> Self {
        let (p, s) = (params.p(), params.s());
        PhiModule { params, a: TMatrix::zeros(p, s, 0, 0), b: TMatrix::zeros(p, s, 0, 0) }
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn a(&self) -> &TMatrix {
        &self.a
    }

    pub fn b(&self) -> &TMatrix {
        &self.b
    }

    pub fn p(&self) -> u32 {
        self.params.p()
    }

    pub fn s(&self) -> usize {
        self.params.s()
    }

    /// Adapted basis of `Fil^r M` inside `M`.
    pub fn filtration(&self) -> AdaptedBasis {
        AdaptedBasis::of_span(&self.a, self.rank()).expect("square presentation")
    }

    /// `Fil^r M = u^{er} M`.
    pub fn is_multiplicative(&self) -> bool {
        let er = self.params.er();
        self.filtration().exponents().iter().all(|&x| x == er)
    }

    /// `Fil^r M = M`.
    pub fn is_etale(&self) -> bool {
        self.filtration().exponents().iter().all(|&x| x == 0)
    }

    /// `M1 ⊕ M2`, presented block-diagonally.
    pub fn direct_sum(&self, other: &PhiModule) -> Result<PhiModule> {
        check_same_params(self, other)?;
        let (p, s) = (self.p(), self.s());
        let (d1, d2) = (self.rank(), other.rank());
        let a = TMatrix::block(&self.a, &TMatrix::zeros(p, s, d1, d2), &TMatrix::zeros(p, s, d2, d1), &other.a);
        PhiModule::new(self.params.clone(), a)
    }
}

pub(crate) fn check_same_params(m1: &PhiModule, m2: &PhiModule) -> Result<()> {
    if m1.params != m2.params {
        return Err(BreuilError::ParamMismatch(format!("{:?} vs {:?}", m1.params, m2.params)));
    }
    Ok(())
}

/// A morphism `f: M1 -> M2`, recorded by a matrix `X` with
/// `f(Fil generators of M1) = X (Fil generators of M2)`.
///
/// `phi(X)` is the matrix of `f` on the bases (`f(m_i) = sum_j phi(X)_ij n_j`)
/// and is the only invariant of the morphism; `X` itself is not unique.
#[derive(Debug, Clone)]
pub struct PhiMorphism {
    source: PhiModule,
    target: PhiModule,
    x: TMatrix,
    phi_x: TMatrix,
}

impl PartialEq for PhiMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.phi_x == other.phi_x
    }
}

impl Eq for PhiMorphism {}

impl PhiMorphism {
    /// Checks `A1 phi(X) = X A2`.
    pub fn new(source: PhiModule, target: PhiModule, x: TMatrix) -> Result<Self> {
        check_same_params(&source, &target)?;
        if x.shape() != (source.rank(), target.rank()) {
            return Err(BreuilError::DimensionMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                x.rows(),
                x.cols(),
                source.rank(),
                target.rank()
            )));
        }
        let phi_x = x.frobenius();
        if source.a.mul(&phi_x) != x.mul(&target.a) {
            return Err(BreuilError::NotAMorphism("A1 phi(X) != X A2".into()));
        }
        Ok(PhiMorphism { source, target, x, phi_x })
    }

    /// The morphism whose matrix on the bases is `f`, if `f` respects the
    /// filtrations and commutes with `phi_r`.
    pub fn from_basis_matrix(source: PhiModule, target: PhiModule, f: &TMatrix) -> Result<Self> {
        check_same_params(&source, &target)?;
        // f(Fil gens) = A1 f (in target coordinates) must equal X A2.
        let rhs = source.a.mul(f);
        let x = solve_left_matrix(&target.a, &rhs)
            .ok_or_else(|| BreuilError::NotAMorphism("image of Fil^r is not inside Fil^r".into()))?;
        let m = PhiMorphism::new(source, target, x)?;
        if &m.phi_x != f {
            return Err(BreuilError::NotAMorphism("map does not commute with phi_r".into()));
        }
        Ok(m)
    }

    pub fn identity(m: &PhiModule) -> Self {
        let id = TMatrix::identity(m.p(), m.s(), m.rank());
        PhiMorphism { source: m.clone(), target: m.clone(), x: id.clone(), phi_x: id }
    }

    pub fn zero(source: &PhiModule, target: &PhiModule) -> Self {
        let z = TMatrix::zeros(source.p(), source.s(), source.rank(), target.rank());
        PhiMorphism { source: source.clone(), target: target.clone(), x: z.clone(), phi_x: z }
    }

    pub fn source(&self) -> &PhiModule {
        &self.source
    }

    pub fn target(&self) -> &PhiModule {
        &self.target
    }

    pub fn x(&self) -> &TMatrix {
        &self.x
    }

    /// Matrix of the underlying `T_s`-linear map on the bases.
    pub fn phi_x(&self) -> &TMatrix {
        &self.phi_x
    }

    pub fn is_zero(&self) -> bool {
        self.phi_x.is_zero()
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &PhiMorphism) -> Result<PhiMorphism> {
        if self.target != then.source {
            return Err(BreuilError::DimensionMismatch("composing non-composable morphisms".into()));
        }
        let x = self.x.mul(&then.x);
        let phi_x = self.phi_x.mul(&then.phi_x);
        Ok(PhiMorphism { source: self.source.clone(), target: then.target.clone(), x, phi_x })
    }

    /// `F_p`-linear combination of parallel morphisms.
    pub fn linear_combination(terms: &[(u32, &PhiMorphism)], source: &PhiModule, target: &PhiModule) -> Result<Self> {
        let mut acc = PhiMorphism::zero(source, target);
        for (k, f) in terms {
            if &f.source != source || &f.target != target {
                return Err(BreuilError::DimensionMismatch("combining non-parallel morphisms".into()));
            }
            acc.x = acc.x.add(&f.x.map(|e| e.scale(*k)));
            acc.phi_x = acc.phi_x.add(&f.phi_x.map(|e| e.scale(*k)));
        }
        Ok(acc)
    }

    /// Whether the underlying map is bijective (then it is an isomorphism).
    pub fn is_isomorphism(&self) -> bool {
        self.source.rank() == self.target.rank() && self.phi_x.constant_part().is_invertible()
    }
}

/// `F_p`-basis of `Hom(M1, M2)`, in canonical reduced form.
pub fn hom_space(m1: &PhiModule, m2: &PhiModule) -> Result<Vec<PhiMorphism>> {
    check_same_params(m1, m2)?;
    let sol = solve_semilinear(m1.a(), m2.a())?;
    Ok(sol
        .morphisms
        .into_iter()
        .map(|(x, phi_x)| PhiMorphism { source: m1.clone(), target: m2.clone(), x, phi_x })
        .collect())
}

pub fn hom_dimension(m1: &PhiModule, m2: &PhiModule) -> Result<usize> {
    check_same_params(m1, m2)?;
    Ok(solve_semilinear(m1.a(), m2.a())?.morphism_dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::TPoly;

    fn params() -> RingParams {
        RingParams::with_unit_c(3, 2, 1, 6).unwrap()
    }

    fn rank1(params: &RingParams, coeffs: &[i64]) -> PhiModule {
        PhiModule::new(params.clone(), TMatrix::scalar(1, &params.poly(coeffs))).unwrap()
    }

    #[test]
    fn validate_examples() {
        let m = rank1(&params(), &[0, 0, 1]);
        assert!(m.is_multiplicative());
        let bad = PhiModule::new(params(), TMatrix::scalar(1, &params().u_pow(3)));
        assert_eq!(bad, Err(BreuilError::NotAPresentation { exponent: 3, er: 2 }));
    }

    #[test]
    fn zero_object_conventions() {
        let z = PhiModule::zero(params());
        assert!(z.is_multiplicative() && z.is_etale());
        assert_eq!(hom_dimension(&z, &rank1(&params(), &[1])).unwrap(), 0);
    }

    #[test]
    fn hom_examples() {
        let p3 = RingParams::with_unit_c(3, 2, 1, 3).unwrap();
        let m = rank1(&p3, &[0, 1]);
        assert_eq!(hom_dimension(&m, &m).unwrap(), 1);
        let et = rank1(&p3, &[1]);
        let mu = rank1(&p3, &[0, 0, 1]);
        assert_eq!(hom_dimension(&et, &mu).unwrap(), 0);
        let basis = hom_space(&m, &m).unwrap();
        assert_eq!(basis[0], PhiMorphism::identity(&m));
    }

    #[test]
    fn composition_laws() {
        let p = params();
        let a = TMatrix::from_coeffs(3, 6, &[vec![vec![0, 1], vec![1]], vec![vec![], vec![0, 1]]]);
        let m = PhiModule::new(p.clone(), a).unwrap();
        let ends = hom_space(&m, &m).unwrap();
        let id = PhiMorphism::identity(&m);
        for f in &ends {
            assert_eq!(&id.then(f).unwrap(), f);
            assert_eq!(&f.then(&id).unwrap(), f);
            for g in &ends {
                for h in &ends {
                    let left = f.then(g).unwrap().then(h).unwrap();
                    let right = f.then(&g.then(h).unwrap()).unwrap();
                    assert_eq!(left, right);
                    assert!(PhiMorphism::new(m.clone(), m.clone(), left.x().clone()).is_ok());
                }
            }
        }
    }

    #[test]
    fn from_basis_matrix_rejects_non_morphisms() {
        let p = params();
        let et = rank1(&p, &[1]);
        let mu = rank1(&p, &[0, 0, 1]);
        let one = TMatrix::scalar(1, &TPoly::one(3, 6));
        let u3 = TMatrix::scalar(1, &p.u_pow(3));
        assert!(PhiMorphism::from_basis_matrix(et.clone(), mu.clone(), &u3).is_ok());
        assert!(matches!(PhiMorphism::from_basis_matrix(mu.clone(), et.clone(), &one), Err(BreuilError::NotAMorphism(_))));
        assert!(matches!(PhiMorphism::from_basis_matrix(et, mu, &one), Err(BreuilError::NotAMorphism(_))));
    }
}
