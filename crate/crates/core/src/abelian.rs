//! Kernels, images, cokernels, exactness and extensions.
//!
//! At `s = p` a morphism matrix `phi(X)` has constant entries, so kernels and
//! images are `F_p`-subspaces tensored up to free summands. For `s > p` the
//! constructions are made at level `p` and lifted back.

use std::fmt;

use crate::error::{BreuilError, Result};
use crate::functors::{lift_morphism, lift_object, truncate_morphism};
use crate::linalg::{left_kernel, AdaptedBasis, FpMatrix, SmithForm, TMatrix};
use crate::phimod::{present, PhiModule, PhiMorphism};
use crate::ring::TPoly;

/// `0 -> left --inj--> middle --surj--> right -> 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortExactSeq {
    pub left: PhiModule,
    pub middle: PhiModule,
    pub right: PhiModule,
    pub inj: PhiMorphism,
    pub surj: PhiMorphism,
}

impl ShortExactSeq {
    pub fn new(inj: PhiMorphism, surj: PhiMorphism) -> Self {
        ShortExactSeq {
            left: inj.source().clone(),
            middle: inj.target().clone(),
            right: surj.target().clone(),
            inj,
            surj,
        }
    }

    pub fn truncate(&self, s: usize) -> Result<ShortExactSeq> {
        Ok(ShortExactSeq::new(truncate_morphism(&self.inj, s)?, truncate_morphism(&self.surj, s)?))
    }

    pub fn cartier_dual(&self) -> Result<ShortExactSeq> {
        Ok(ShortExactSeq::new(self.surj.cartier_dual()?, self.inj.cartier_dual()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExactnessCondition {
    ModuleInjective,
    ModuleSurjective,
    ModuleMiddle,
    FilInjective,
    FilSurjective,
    FilMiddle,
}

impl ExactnessCondition {
    pub const ALL: [ExactnessCondition; 6] = [
        ExactnessCondition::ModuleInjective,
        ExactnessCondition::ModuleSurjective,
        ExactnessCondition::ModuleMiddle,
        ExactnessCondition::FilInjective,
        ExactnessCondition::FilSurjective,
        ExactnessCondition::FilMiddle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExactnessCondition::ModuleInjective => "module injectivity",
            ExactnessCondition::ModuleSurjective => "module surjectivity",
            ExactnessCondition::ModuleMiddle => "module middle exactness",
            ExactnessCondition::FilInjective => "Fil injectivity",
            ExactnessCondition::FilSurjective => "Fil surjectivity",
            ExactnessCondition::FilMiddle => "Fil middle exactness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub failures: Vec<ExactnessCondition>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<ExactnessCondition> {
        self.failures.first().copied()
    }
}

impl fmt::Display for ExactnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_failure() {
            None => write!(f, "exact"),
            Some(c) => write!(f, "not exact: {} fails", c.name()),
        }
    }
}

fn injective(f: &TMatrix) -> bool {
    f.rows() <= f.cols() && SmithForm::compute(f).exponents.iter().all(|&x| x == 0)
}

fn surjective(f: &TMatrix) -> bool {
    AdaptedBasis::of_span(f, f.cols()).is_ok_and(|ab| ab.exponents().iter().all(|&x| x == 0))
}

fn same_span(g1: &TMatrix, g2: &TMatrix) -> bool {
    let d = g1.cols();
    match (AdaptedBasis::of_span(g1, d), AdaptedBasis::of_span(g2, d)) {
        (Ok(a), Ok(b)) => a.same_submodule(&b),
        _ => false,
    }
}

pub fn check_exact(seq: &ShortExactSeq) -> Result<ExactnessReport> {
    if seq.left.params() != seq.middle.params() || seq.middle.params() != seq.right.params() {
        return Err(BreuilError::ParamMismatch("sequence terms over different rings".into()));
    }
    if seq.inj.target() != seq.surj.source() {
        return Err(BreuilError::DimensionMismatch("maps are not composable".into()));
    }
    let (f1, f2) = (seq.inj.phi_x(), seq.surj.phi_x());
    let (a1, a, a2) = (seq.left.a(), seq.middle.a(), seq.right.a());
    let fil_left = a1.mul(f1);
    let fil_right = a.mul(f2);

    let mut failures = Vec::new();
    for cond in ExactnessCondition::ALL {
        let ok = match cond {
            ExactnessCondition::ModuleInjective => injective(f1),
            ExactnessCondition::ModuleSurjective => surjective(f2),
            ExactnessCondition::ModuleMiddle => f1.mul(f2).is_zero() && same_span(f1, &left_kernel(f2)),
            ExactnessCondition::FilInjective => left_kernel(&fil_left).mul(a1).is_zero(),
            ExactnessCondition::FilSurjective => same_span(&fil_right, a2),
            ExactnessCondition::FilMiddle => same_span(&fil_left, &left_kernel(&fil_right).mul(a)),
        };
        if !ok {
            failures.push(cond);
        }
    }
    Ok(ExactnessReport { failures })
}

/// `f = mono ∘ epi` through the image.
#[derive(Debug, Clone)]
pub struct ImageFactorization {
    pub image: PhiModule,
    pub epi: PhiMorphism,
    pub mono: PhiMorphism,
}

fn constant_matrix(p: u32, s: usize, m: &FpMatrix) -> TMatrix {
    TMatrix::from_fn(p, s, m.rows(), m.cols(), |i, j| TPoly::constant(p, s, m.get(i, j) as i64))
}

/// Kernels and cokernels exist at `s = p`; above it, for `er = p - 1`, only
/// between unipotent objects.
fn check_regime(f: &PhiMorphism) -> Result<()> {
    let params = f.source().params();
    if params.s() > params.p() as usize
        && params.boundary()
        && !(f.source().is_unipotent()? && f.target().is_unipotent()?)
    {
        return Err(BreuilError::RegimeViolation(
            "er = p - 1 and s > p: kernels and cokernels are only available between unipotent objects".into(),
        ));
    }
    Ok(())
}

fn at_base(f: &PhiMorphism) -> bool {
    f.source().s() == f.source().p() as usize
}

fn base_level(f: &PhiMorphism) -> Result<PhiMorphism> {
    truncate_morphism(f, f.source().p() as usize)
}

pub fn kernel(f: &PhiMorphism) -> Result<(PhiModule, PhiMorphism)> {
    check_regime(f)?;
    if f.is_zero() {
        return Ok((f.source().clone(), PhiMorphism::identity(f.source())));
    }
    if at_base(f) {
        let (p, s) = (f.source().p(), f.source().s());
        let null = f.phi_x().constant_part().left_nullspace();
        return f.source().subobject(&constant_matrix(p, s, &null));
    }
    let (k, incl) = kernel(&base_level(f)?)?;
    let k_hat = lift_object(&k, f.source().s())?;
    let incl_hat = lift_morphism(&incl, &k_hat, f.source())?;
    if !incl_hat.then(f)?.is_zero()
        || !injective(incl_hat.phi_x())
        || !same_span(incl_hat.phi_x(), &left_kernel(f.phi_x()))
    {
        return Err(BreuilError::internal("transported kernel failed validation"));
    }
    Ok((k_hat, incl_hat))
}

pub fn image(f: &PhiMorphism) -> Result<ImageFactorization> {
    check_regime(f)?;
    let (src, tgt) = (f.source(), f.target());
    if f.is_zero() {
        let zero = PhiModule::zero(src.params().clone());
        return Ok(ImageFactorization {
            epi: PhiMorphism::zero(src, &zero),
            mono: PhiMorphism::zero(&zero, tgt),
            image: zero,
        });
    }
    if at_base(f) {
        let (p, s) = (src.p(), src.s());
        let fc = f.phi_x().constant_part();
        let rows = fc.row_basis();
        let coords = fc.coordinates_in(&rows).ok_or_else(|| BreuilError::internal("row basis"))?;
        let (r, c) = (constant_matrix(p, s, &rows), constant_matrix(p, s, &coords));
        let (a, e) = present(src.params(), &src.a().mul(&c), &c)?;
        let image = PhiModule::new(src.params().clone(), a)?;
        let epi = PhiMorphism::from_basis_matrix(src.clone(), image.clone(), &c.mul(&e.invert()?))?;
        let mono = PhiMorphism::from_basis_matrix(image.clone(), tgt.clone(), &e.mul(&r))?;
        return Ok(ImageFactorization { image, epi, mono });
    }
    let base = image(&base_level(f)?)?;
    let image = lift_object(&base.image, src.s())?;
    let epi = lift_morphism(&base.epi, src, &image)?;
    let mono = lift_morphism(&base.mono, &image, tgt)?;
    if epi.then(&mono)? != *f || !surjective(epi.phi_x()) || !injective(mono.phi_x()) {
        return Err(BreuilError::internal("transported image failed validation"));
    }
    Ok(ImageFactorization { image, epi, mono })
}

pub fn cokernel(f: &PhiMorphism) -> Result<(PhiModule, PhiMorphism)> {
    check_regime(f)?;
    if f.is_zero() {
        return Ok((f.target().clone(), PhiMorphism::identity(f.target())));
    }
    if at_base(f) {
        let (p, s) = (f.source().p(), f.source().s());
        let rows = f.phi_x().constant_part().row_basis();
        return f.target().quotient(&constant_matrix(p, s, &rows));
    }
    let (q, proj) = cokernel(&base_level(f)?)?;
    let q_hat = lift_object(&q, f.source().s())?;
    let proj_hat = lift_morphism(&proj, f.target(), &q_hat)?;
    if !f.then(&proj_hat)?.is_zero()
        || !surjective(proj_hat.phi_x())
        || !same_span(f.phi_x(), &left_kernel(proj_hat.phi_x()))
    {
        return Err(BreuilError::internal("transported cokernel failed validation"));
    }
    Ok((q_hat, proj_hat))
}

/// The extension with presentation `[[A1, 0], [C, A2]]`, when that is a
/// presentation; `M1` is the subobject and `M2` the quotient.
pub fn build_extension_general(m1: &PhiModule, m2: &PhiModule, c: &TMatrix) -> Result<ShortExactSeq> {
    if m1.params() != m2.params() {
        return Err(BreuilError::ParamMismatch("extension of objects over different rings".into()));
    }
    let (p, s) = (m1.p(), m1.s());
    let (d1, d2) = (m1.rank(), m2.rank());
    if c.shape() != (d2, d1) {
        return Err(BreuilError::DimensionMismatch(format!("extension block must be {d2}x{d1}")));
    }
    let a = TMatrix::block(m1.a(), &TMatrix::zeros(p, s, d1, d2), c, m2.a());
    let middle = PhiModule::new(m1.params().clone(), a)?;
    let inj_x = TMatrix::block(
        &TMatrix::identity(p, s, d1),
        &TMatrix::zeros(p, s, d1, d2),
        &TMatrix::zeros(p, s, 0, d1),
        &TMatrix::zeros(p, s, 0, d2),
    );
    let surj_x = TMatrix::zeros(p, s, d1, d2).vstack(&TMatrix::identity(p, s, d2));
    let seq = ShortExactSeq::new(
        PhiMorphism::new(m1.clone(), middle.clone(), inj_x)?,
        PhiMorphism::new(middle, m2.clone(), surj_x)?,
    );
    let report = check_exact(&seq)?;
    if !report.is_exact() {
        return Err(BreuilError::NotExact(report.to_string()));
    }
    Ok(seq)
}

/// The extension with lower-left block `u^{er} C0`, whose cofactor is
/// `[[B1, 0], [-B2 C0 B1, B2]]`.
pub fn build_extension(m1: &PhiModule, m2: &PhiModule, c0: &TMatrix) -> Result<ShortExactSeq> {
    let er = m1.params().er();
    let seq = build_extension_general(m1, m2, &c0.shift_up(er))?;
    let (p, s) = (m1.p(), m1.s());
    let (b1, b2) = (m1.b(), m2.b());
    let b = TMatrix::block(b1, &TMatrix::zeros(p, s, m1.rank(), m2.rank()), &b2.mul(c0).mul(b1).neg(), b2);
    let u_er = TMatrix::scalar(m1.rank() + m2.rank(), &m1.params().u_pow(er));
    let a = seq.middle.a();
    if a.mul(&b) != u_er || b.mul(a) != u_er {
        return Err(BreuilError::internal("block cofactor does not invert the extension"));
    }
    Ok(seq)
}
