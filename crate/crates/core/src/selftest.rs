//! Property suites run by `breuil selftest`.
//!
//! Each suite draws from its own ChaCha8 stream of the given seed, so suites
//! are independent and may run concurrently; results are reported in name
//! order.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::abelian::{build_extension, check_exact, cokernel, image, kernel};
use crate::error::{BreuilError, Result};
use crate::functors::{lift_morphism, lift_object, truncate, truncate_morphism};
use crate::io::{
    parse_module, parse_morphism, parse_sequence, serialize_module, serialize_monodromy, serialize_morphism,
    serialize_sequence, ModuleDocument,
};
use crate::linalg::{
    solve_semilinear, two_sided_cofactor, AdaptedBasis, FpMatrix, TMatrix,
};
use crate::monodromy::MonodromyModule;
use crate::phimod::{hom_dimension, hom_space, is_isomorphic, PhiModule, PhiMorphism};
use crate::random::{
    random_grid_params, random_invertible, random_matrix, random_morphism, random_object, random_structured_morphism, random_tpoly,
    random_unipotent, random_unit, split_rng, FixtureRng,
};
use crate::ring::{fil_quotient_dim, RingParams, TPoly, Valuation};

pub const SUITES: [&str; 14] = [
    "abelian",
    "adapted",
    "cofactor",
    "duality",
    "equivalence",
    "extensions",
    "filcmp",
    "io",
    "monodromy",
    "parts",
    "ring",
    "semilinear",
    "transport",
    "unipotency",
];

pub const DEFAULT_ITERATIONS: usize = 100;
/// Failures kept per suite for reporting.
const KEEP_FAILURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { iterations: DEFAULT_ITERATIONS, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<12} {} checks, {} failed", self.name, self.checks, self.failed)?;
        for msg in &self.failures {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

struct Ctx {
    rng: FixtureRng,
    iterations: usize,
    checks: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Ctx {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEEP_FAILURES {
                self.failures.push(msg());
            }
        }
    }

    fn object(&mut self, params: &RingParams, max_rank: usize) -> PhiModule {
        let d = rank_of(&mut self.rng, max_rank);
        random_object(&mut self.rng, params, d)
    }

    fn unipotent(&mut self, params: &RingParams, max_rank: usize) -> Result<PhiModule> {
        let d = rank_of(&mut self.rng, max_rank);
        random_unipotent(&mut self.rng, params, d)
    }

    /// Runs one instance; an error counts as a failed check.
    fn attempt(&mut self, label: &str, body: impl FnOnce(&mut Ctx) -> Result<()>) {
        if let Err(e) = body(self) {
            self.check(false, || format!("{label}: {e}"));
        }
    }
}

/// Looks up a suite by name.
pub fn suite_index(name: &str) -> Option<usize> {
    SUITES.iter().position(|&s| s == name)
}

pub fn run_suite(name: &str, cfg: SuiteConfig) -> Result<SuiteResult> {
    let idx = suite_index(name).ok_or_else(|| BreuilError::ParseError {
        location: "--suite".into(),
        message: format!("unknown suite `{name}`; known: {}", SUITES.join(", ")),
    })?;
    let mut ctx = Ctx {
        rng: split_rng(cfg.seed, idx as u64),
        iterations: cfg.iterations,
        checks: 0,
        failed: 0,
        failures: Vec::new(),
    };
    let body: fn(&mut Ctx) = match SUITES[idx] {
        "abelian" => suite_abelian,
        "adapted" => suite_adapted,
        "cofactor" => suite_cofactor,
        "duality" => suite_duality,
        "equivalence" => suite_equivalence,
        "extensions" => suite_extensions,
        "filcmp" => suite_filcmp,
        "io" => suite_io,
        "monodromy" => suite_monodromy,
        "parts" => suite_parts,
        "ring" => suite_ring,
        "semilinear" => suite_semilinear,
        "transport" => suite_transport,
        "unipotency" => suite_unipotency,
        _ => unreachable!(),
    };
    body(&mut ctx);
    Ok(SuiteResult { name: SUITES[idx], checks: ctx.checks, failed: ctx.failed, failures: ctx.failures })
}

/// Runs the named suites (all when `names` is empty) on parallel threads and
/// returns the results in name order.
pub fn run_suites(names: &[&str], cfg: SuiteConfig) -> Result<Vec<SuiteResult>> {
    let selected: Vec<&str> = if names.is_empty() { SUITES.to_vec() } else { names.to_vec() };
    for name in &selected {
        if suite_index(name).is_none() {
            return run_suite(name, cfg).map(|_| Vec::new());
        }
    }
    let mut results: Vec<SuiteResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected.iter().map(|name| scope.spawn(move || run_suite(name, cfg))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(BreuilError::internal("suite panicked"))))
            .collect::<Result<Vec<_>>>()
    })?;
    results.sort_by_key(|r| r.name);
    Ok(results)
}

fn rank_of(rng: &mut FixtureRng, max: usize) -> usize {
    rng.gen_range(0..=max)
}

/// Grid parameters, with a random twist `c` half of the time.
fn grid_params_any_c(rng: &mut FixtureRng) -> RingParams {
    let params = random_grid_params(rng);
    if rng.gen_bool(0.5) {
        return params;
    }
    let c = random_unit(rng, params.p(), params.s());
    RingParams::new(params.p(), params.e(), params.r(), params.s(), c.coeffs()).expect("unit twist")
}

fn flat_phi(f: &PhiMorphism) -> Vec<u32> {
    f.phi_x().entries().iter().flat_map(|x| x.coeffs().iter().copied()).collect()
}

fn span_rank(p: u32, vecs: &[Vec<u32>]) -> usize {
    match vecs.first() {
        None => 0,
        Some(v) => FpMatrix::from_rows(p, v.len(), vecs).rank(),
    }
}

fn suite_ring(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations {
        let params = random_grid_params(&mut ctx.rng);
        let (p, s) = (params.p(), params.s());
        let a = random_tpoly(&mut ctx.rng, p, s).shift_up(ctx.rng.gen_range(0..s));
        let b = random_tpoly(&mut ctx.rng, p, s).shift_up(ctx.rng.gen_range(0..s));
        ctx.check((&a + &b).frobenius() == &a.frobenius() + &b.frobenius(), || format!("phi additive: {a}, {b}"));
        ctx.check((&a * &b).frobenius() == &a.frobenius() * &b.frobenius(), || format!("phi multiplicative: {a}, {b}"));
        let expected = match (a.valuation(), b.valuation()) {
            (Valuation::Finite(x), Valuation::Finite(y)) if x + y < s => Valuation::Finite(x + y),
            _ => Valuation::Infinity,
        };
        ctx.check((&a * &b).valuation() == expected, || format!("valuation of product: {a}, {b}"));
        let leibniz = &(&a.derivation_n() * &b) + &(&a * &b.derivation_n());
        ctx.check((&a * &b).derivation_n() == leibniz, || format!("Leibniz: {a}, {b}"));
        let unit = random_unit(&mut ctx.rng, p, s);
        ctx.check(unit.invert_unit().is_ok_and(|v| (&v * &unit).is_one()), || format!("inverse of {unit}"));
    }
    for k in 0..27u32 {
        let coeffs = [k % 3, (k / 3) % 3, k / 9];
        let a = TPoly::from_residues(3, 3, &coeffs);
        let ok = match a.invert_unit() {
            Ok(b) => a.is_unit() && (&a * &b).is_one(),
            Err(_) => !a.is_unit(),
        };
        ctx.check(ok, || format!("exhaustive inverse at {a}"));
    }
}

/// All elements of the row span of `g` in `T_s^d`, by enumeration.
fn enumerate_span(g: &TMatrix) -> BTreeSet<Vec<u32>> {
    let (p, s, k) = (g.p(), g.s(), g.rows());
    let scalars = (p as usize).pow(s as u32);
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; k];
    loop {
        let t: Vec<TPoly> = idx
            .iter()
            .map(|&n| {
                let coeffs: Vec<u32> = (0..s).map(|i| ((n / (p as usize).pow(i as u32)) % p as usize) as u32).collect();
                TPoly::from_residues(p, s, &coeffs)
            })
            .collect();
        let v = if k == 0 { vec![TPoly::zero(p, s); g.cols()] } else { g.vec_mul(&t) };
        out.insert(v.iter().flat_map(|x| x.coeffs().iter().copied()).collect());
        let mut pos = 0;
        while pos < k {
            idx[pos] += 1;
            if idx[pos] < scalars {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == k {
            return out;
        }
    }
}

fn suite_adapted(ctx: &mut Ctx) {
    let (p, s, d) = (3, 3, 2);
    for _ in 0..ctx.iterations {
        let k = ctx.rng.gen_range(0..=3);
        let mut g = random_matrix(&mut ctx.rng, p, s, k, d);
        for i in 0..k {
            let shift = ctx.rng.gen_range(0..=s);
            for j in 0..d {
                g[(i, j)] = g[(i, j)].shift_up(shift);
            }
        }
        let ab = match AdaptedBasis::of_span(&g, d) {
            Ok(ab) => ab,
            Err(e) => return ctx.check(false, || format!("adapted basis: {e}")),
        };
        let span = enumerate_span(&g);
        let adapted = enumerate_span(&ab.generators());
        ctx.check(span == adapted, || format!("span mismatch for generators {g}"));
        ctx.check(span.len() == (p as usize).pow(ab.dim_fp() as u32), || format!("dimension count for {g}"));
        ctx.check(ab.exponents().windows(2).all(|w| w[0] <= w[1]), || "exponents unsorted".into());
        // Re-present the same submodule.
        let extra = random_matrix(&mut ctx.rng, p, s, 1, k).mul(&g);
        let regen = random_invertible(&mut ctx.rng, p, s, k).mul(&g).vstack(&extra);
        let again = AdaptedBasis::of_span(&regen, d).expect("shape");
        ctx.check(again.exponents() == ab.exponents(), || format!("exponents depend on presentation: {g}"));
    }
}

fn suite_cofactor(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations {
        let params = grid_params_any_c(&mut ctx.rng);
        let d = rank_of(&mut ctx.rng, 3);
        let m = random_object(&mut ctx.rng, &params, d);
        let u_er = TMatrix::scalar(d, &params.u_pow(params.er()));
        ctx.check(m.a().mul(m.b()) == u_er && m.b().mul(m.a()) == u_er, || format!("cofactor of {}", m.a()));
        let (p, s) = (params.p(), params.s());
        let twisted = random_invertible(&mut ctx.rng, p, s, d).mul(m.a()).mul(&random_invertible(&mut ctx.rng, p, s, d));
        ctx.attempt("cofactor of equivalent matrix", |ctx| {
            let b = two_sided_cofactor(&twisted, params.er())?;
            ctx.check(twisted.mul(&b) == u_er && b.mul(&twisted) == u_er, || format!("cofactor of {twisted}"));
            Ok(())
        });
        let bad = TMatrix::scalar(1, &params.u_pow(params.er() + 1));
        ctx.check(
            matches!(PhiModule::new(params.clone(), bad), Err(BreuilError::NotAPresentation { .. })),
            || "exponent above er accepted".into(),
        );
    }
}

fn suite_semilinear(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations {
        let params = random_grid_params(&mut ctx.rng);
        let (d1, d2) = (rank_of(&mut ctx.rng, 2), rank_of(&mut ctx.rng, 2));
        let m1 = random_object(&mut ctx.rng, &params, d1);
        let m2 = random_object(&mut ctx.rng, &params, d2);
        ctx.attempt("solve", |ctx| {
            let sol = solve_semilinear(m1.a(), m2.a())?;
            for x in &sol.nullspace {
                ctx.check(m1.a().mul(&x.frobenius()) == x.mul(m2.a()), || format!("non-solution {x}"));
            }
            let images: Vec<Vec<u32>> = sol
                .nullspace
                .iter()
                .map(|x| x.frobenius().entries().iter().flat_map(|e| e.coeffs().iter().copied()).collect())
                .collect();
            ctx.check(span_rank(params.p(), &images) == sol.morphism_dim(), || "morphism dimension".into());
            Ok(())
        });
    }
    // Rank one at p = 3, s = 3: enumerate all 27 scalars.
    let params = RingParams::with_unit_c(3, 2, 1, 3).expect("grid");
    for x1 in 0..=2 {
        for x2 in 0..=2 {
            let a1 = params.u_pow(x1);
            let a2 = &params.u_pow(x2) * &params.poly(&[2, 1]);
            let mut phis = BTreeSet::new();
            for k in 0..27u32 {
                let t = TPoly::from_residues(3, 3, &[k % 3, (k / 3) % 3, k / 9]);
                if &a1 * &t.frobenius() == &t * &a2 {
                    phis.insert(t.frobenius().coeffs().to_vec());
                }
            }
            let m1 = PhiModule::new(params.clone(), TMatrix::scalar(1, &a1)).expect("valid");
            let m2 = PhiModule::new(params.clone(), TMatrix::scalar(1, &a2)).expect("valid");
            let dim = hom_dimension(&m1, &m2).expect("same params");
            ctx.check(3usize.pow(dim as u32) == phis.len(), || format!("Hom(u^{x1}, u^{x2}(2+u)) count"));
        }
    }
}

fn suite_duality(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations {
        let params = grid_params_any_c(&mut ctx.rng);
        let d = rank_of(&mut ctx.rng, 3);
        let m = random_object(&mut ctx.rng, &params, d);
        ctx.attempt("duality", |ctx| {
            let dual = m.cartier_dual();
            m.verify_dual(&dual)?;
            let natural = m.double_dual_iso()?;
            ctx.check(natural.is_isomorphism(), || "natural map to the double dual".into());
            ctx.check(is_isomorphic(&m, &dual.cartier_dual())?.is_some(), || "no witness for M ≅ M^∨∨".into());
            let parts = m.parts()?;
            let dparts = dual.parts()?;
            let pairs = [
                (&parts.m_part, &dparts.et_quotient),
                (&parts.nil_quotient, &dparts.uni_part),
                (&parts.uni_part, &dparts.nil_quotient),
                (&parts.et_quotient, &dparts.m_part),
            ];
            for (a, b) in pairs {
                ctx.check(is_isomorphic(&a.cartier_dual(), b)?.is_some(), || "dual does not exchange parts".into());
            }
            for seq in [parts.multiplicative_sequence(), parts.etale_sequence()] {
                ctx.check(check_exact(&seq.cartier_dual()?)?.is_exact(), || "dual sequence not exact".into());
            }
            Ok(())
        });
    }
}

fn suite_parts(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations {
        let params = grid_params_any_c(&mut ctx.rng);
        let d = rank_of(&mut ctx.rng, 3);
        let m = random_object(&mut ctx.rng, &params, d);
        ctx.attempt("parts", |ctx| {
            let parts = m.parts()?;
            let er = params.er();
            ctx.check(parts.m_part.filtration().exponents().iter().all(|&x| x == er), || "M^m not multiplicative".into());
            ctx.check(parts.et_quotient.is_etale(), || "M^et not étale".into());
            ctx.check(parts.nil_quotient.is_nilpotent()?, || "M^nil has a multiplicative part".into());
            ctx.check(parts.uni_part.is_unipotent()?, || "M^uni not unipotent".into());
            for seq in [parts.multiplicative_sequence(), parts.etale_sequence()] {
                ctx.check(check_exact(&seq)?.is_exact(), || "part sequence not exact".into());
            }
            Ok(())
        });
        let (p, s) = (params.p(), params.s());
        let pmat = random_invertible(&mut ctx.rng, p, s, d);
        ctx.attempt("pure objects", |ctx| {
            let mult = PhiModule::new(params.clone(), pmat.shift_up(params.er()))?;
            let et = PhiModule::new(params.clone(), pmat.clone())?;
            ctx.check(mult.parts()?.ranks() == [d, 0, d, 0], || "parts of a multiplicative object".into());
            ctx.check(et.parts()?.ranks() == [0, d, 0, d], || "parts of an étale object".into());
            Ok(())
        });
    }
}

fn suite_unipotency(ctx: &mut Ctx) {
    let params3 = RingParams::with_unit_c(3, 2, 1, 3).expect("grid");
    let params6 = RingParams::with_unit_c(3, 2, 1, 6).expect("grid");
    for params in [params3, params6] {
        let s = params.s();
        for x in 0..=params.er() {
            for k in 0..3usize.pow(s as u32) {
                let coeffs: Vec<u32> = (0..s).map(|i| ((k / 3usize.pow(i as u32)) % 3) as u32).collect();
                let unit = TPoly::from_residues(3, s, &coeffs);
                if !unit.is_unit() {
                    continue;
                }
                let a = TMatrix::scalar(1, &(&unit * &params.u_pow(x)));
                let m = PhiModule::new(params.clone(), a).expect("valid rank one");
                ctx.attempt("rank one", |ctx| {
                    let u = m.is_unipotent()?;
                    ctx.check(u == (x > 0), || format!("rank one u^{x}·{unit}"));
                    Ok(())
                });
            }
        }
    }
    for _ in 0..ctx.iterations * 5 {
        let params = grid_params_any_c(&mut ctx.rng);
        let d = rank_of(&mut ctx.rng, 3);
        let m = random_object(&mut ctx.rng, &params, d);
        ctx.attempt("criteria agree", |ctx| {
            m.is_unipotent()?;
            ctx.check(true, String::new);
            Ok(())
        });
    }
}

/// Levels `t > s` and objects for one of the three admissible regimes.
fn regime_sample(ctx: &mut Ctx, which: usize, unipotent: bool) -> Result<(PhiModule, usize)> {
    let (params, t) = match which {
        0 => {
            let s = ctx.rng.gen_range(5..=9);
            (RingParams::with_unit_c(5, 2, 1, s)?, ctx.rng.gen_range(s + 1..=10))
        }
        1 => {
            let s = ctx.rng.gen_range(4..=5);
            (RingParams::with_unit_c(3, 2, 1, s)?, ctx.rng.gen_range(s + 1..=6))
        }
        _ => (RingParams::with_unit_c(3, 2, 1, 3)?, ctx.rng.gen_range(4..=6)),
    };
    let d = rank_of(&mut ctx.rng, 2);
    let m = if unipotent || which == 2 {
        random_unipotent(&mut ctx.rng, &params, d)?
    } else {
        random_object(&mut ctx.rng, &params, d)
    };
    Ok((m, t))
}

fn suite_equivalence(ctx: &mut Ctx) {
    for i in 0..ctx.iterations * 3 {
        let which = i % 3;
        ctx.attempt("equivalence", |ctx| {
            let (m1, t) = regime_sample(ctx, which, false)?;
            let other = if which == 2 { ctx.unipotent(m1.params(), 2)? } else { ctx.object(m1.params(), 2) };
            // Correlated targets keep Hom(M1, M2) from being mostly zero.
            let m2 = match ctx.rng.gen_range(0..3) {
                0 => m1.clone(),
                1 if other.rank() < 2 => m1.direct_sum(&other)?,
                _ => other,
            };
            let s = m1.s();
            let (l1, l2) = (lift_object(&m1, t)?, lift_object(&m2, t)?);
            ctx.check(truncate(&l1, s)? == m1 && truncate(&l2, s)? == m2, || "round trip".into());
            ctx.check(hom_dimension(&m1, &m2)? == hom_dimension(&l1, &l2)?, || {
                format!("Hom dimension changes between levels {s} and {t}")
            });
            ctx.check(m1.is_unipotent()? == l1.is_unipotent()?, || "unipotency changes under lifting".into());
            let f = random_morphism(&mut ctx.rng, &m1, &m2)?;
            let g = random_morphism(&mut ctx.rng, &m2, &m1)?;
            let (fl, gl) = (lift_morphism(&f, &l1, &l2)?, lift_morphism(&g, &l2, &l1)?);
            ctx.check(truncate_morphism(&fl, s)? == f, || "lift does not truncate back".into());
            let composite = lift_morphism(&f.then(&g)?, &l1, &l1)?;
            ctx.check(composite == fl.then(&gl)?, || "lifting is not functorial".into());
            Ok(())
        });
    }
    let params = RingParams::with_unit_c(3, 2, 1, 3).expect("grid");
    for _ in 0..ctx.iterations / 4 + 1 {
        let d = ctx.rng.gen_range(1..=2);
        let m = random_object(&mut ctx.rng, &params, d);
        ctx.attempt("boundary rejection", |ctx| {
            let unip = m.is_unipotent()?;
            let lifted = lift_object(&m, 6);
            ctx.check(unip == lifted.is_ok(), || "lift at s = p ignores unipotency".into());
            if !unip {
                ctx.check(matches!(lifted, Err(BreuilError::RegimeViolation(_))), || "wrong rejection".into());
            }
            Ok(())
        });
    }
}

/// Universal properties of the kernel and cokernel of `f`, tested against
/// the test object `n`.
fn universal_properties(ctx: &mut Ctx, f: &PhiMorphism, n: &PhiModule) -> Result<()> {
    let p = f.source().p();
    let (k, incl) = kernel(f)?;
    let (q, proj) = cokernel(f)?;
    // Maps N -> M1 killed by f are exactly the maps factoring through K.
    let to_src = hom_space(n, f.source())?;
    let composed: Vec<Vec<u32>> = to_src.iter().map(|g| g.then(f).map(|h| flat_phi(&h))).collect::<Result<_>>()?;
    let killed_dim = to_src.len() - span_rank(p, &composed);
    let to_k = hom_space(n, &k)?;
    let through: Vec<Vec<u32>> = to_k.iter().map(|h| h.then(&incl).map(|x| flat_phi(&x))).collect::<Result<_>>()?;
    ctx.check(span_rank(p, &through) == to_k.len(), || "factorization through the kernel is not unique".into());
    ctx.check(to_k.len() == killed_dim, || "maps killed by f do not factor through the kernel".into());
    // Maps M2 -> N killing f are exactly the maps factoring through Q.
    let from_tgt = hom_space(f.target(), n)?;
    let pre: Vec<Vec<u32>> = from_tgt.iter().map(|g| f.then(g).map(|h| flat_phi(&h))).collect::<Result<_>>()?;
    let killing_dim = from_tgt.len() - span_rank(p, &pre);
    let from_q = hom_space(&q, n)?;
    let via: Vec<Vec<u32>> = from_q.iter().map(|h| proj.then(h).map(|x| flat_phi(&x))).collect::<Result<_>>()?;
    ctx.check(span_rank(p, &via) == from_q.len(), || "factorization through the cokernel is not unique".into());
    ctx.check(from_q.len() == killing_dim, || "maps killing f do not factor through the cokernel".into());
    Ok(())
}

fn check_morphism(ctx: &mut Ctx, f: &PhiMorphism, n: &PhiModule) -> Result<()> {
    let (k, incl) = kernel(f)?;
    let (q, proj) = cokernel(f)?;
    let im = image(f)?;
    ctx.check(incl.then(f)?.is_zero() && f.then(&proj)?.is_zero(), || "kernel or cokernel does not compose to 0".into());
    ctx.check(im.epi.then(&im.mono)? == *f, || "image factorization".into());
    ctx.check(f.source().rank() == k.rank() + im.image.rank(), || "rank(source) != rank(ker) + rank(im)".into());
    ctx.check(f.target().rank() == im.image.rank() + q.rank(), || "rank(target) != rank(im) + rank(coker)".into());
    let (coim, _) = cokernel(&incl)?;
    ctx.check(is_isomorphic(&coim, &im.image)?.is_some(), || "image and coimage differ".into());
    let seq = crate::abelian::ShortExactSeq::new(incl, im.epi.clone());
    ctx.check(check_exact(&seq)?.is_exact(), || "0 -> ker -> M -> im -> 0 not exact".into());
    let seq = crate::abelian::ShortExactSeq::new(im.mono, proj);
    ctx.check(check_exact(&seq)?.is_exact(), || "0 -> im -> M -> coker -> 0 not exact".into());
    universal_properties(ctx, f, n)?;
    universal_properties(ctx, f, &k)?;
    Ok(())
}

fn suite_abelian(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations {
        let p = if ctx.rng.gen_bool(0.5) { 3 } else { 5 };
        let params = RingParams::with_unit_c(p, 2, 1, p as usize).expect("grid");
        let n = ctx.object(&params, 2);
        ctx.attempt("abelian", |ctx| {
            let f = random_structured_morphism(&mut ctx.rng, &params, false)?;
            check_morphism(ctx, &f, &n)
        });
    }
}

fn suite_transport(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations / 2 + 1 {
        let s = ctx.rng.gen_range(4..=6);
        let params = RingParams::with_unit_c(3, 2, 1, s).expect("grid");
        ctx.attempt("transport", |ctx| {
            let n = ctx.unipotent(&params, 2)?;
            let f = random_structured_morphism(&mut ctx.rng, &params, true)?;
            check_morphism(ctx, &f, &n)
        });
        ctx.attempt("transport rejection", |ctx| {
            let et = PhiModule::new(params.clone(), random_invertible(&mut ctx.rng, 3, s, 1))?;
            let id = PhiMorphism::identity(&et);
            ctx.check(matches!(kernel(&id), Err(BreuilError::RegimeViolation(_))), || "kernel accepted".into());
            ctx.check(matches!(cokernel(&id), Err(BreuilError::RegimeViolation(_))), || "cokernel accepted".into());
            Ok(())
        });
    }
}

fn suite_extensions(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations * 2 {
        let params = random_grid_params(&mut ctx.rng);
        ctx.attempt("extension", |ctx| {
            let pick = |ctx: &mut Ctx| -> Result<PhiModule> {
                let d = ctx.rng.gen_range(1..=2);
                if ctx.rng.gen_bool(0.5) {
                    random_unipotent(&mut ctx.rng, &params, d)
                } else {
                    Ok(random_object(&mut ctx.rng, &params, d))
                }
            };
            let (m1, m2) = (pick(ctx)?, pick(ctx)?);
            let c0 = random_matrix(&mut ctx.rng, params.p(), params.s(), m2.rank(), m1.rank());
            let seq = build_extension(&m1, &m2, &c0)?;
            let both = m1.is_unipotent()? && m2.is_unipotent()?;
            ctx.check(seq.middle.is_unipotent()? == both, || "extension unipotency".into());
            let (p, s) = (params.p() as usize, params.s());
            if s > p {
                let lower = ctx.rng.gen_range(p..s);
                ctx.check(check_exact(&seq.truncate(lower)?)?.is_exact(), || "truncation breaks exactness".into());
            }
            Ok(())
        });
    }
}

fn suite_filcmp(ctx: &mut Ctx) {
    for p in [2u32, 3, 5, 7] {
        for e in 1..=3u32 {
            for b in 0..=p {
                for a in 0..b {
                    let lo = fil_quotient_dim(a, b, e, p as usize);
                    let hi = fil_quotient_dim(a, b, e, 2 * p as usize);
                    let equal = matches!((lo, hi), (Ok(x), Ok(y)) if x == y);
                    let predicted = e * b <= p || e * a >= 2 * p;
                    ctx.check(equal == predicted, || format!("p = {p}, e = {e}, a = {a}, b = {b}"));
                }
            }
        }
    }
    ctx.check(fil_quotient_dim(2, 1, 2, 3) == Err(BreuilError::InvalidLevels { a: 2, b: 1 }), || "a > b".into());
}

fn suite_monodromy(ctx: &mut Ctx) {
    let grids = [(3u32, 2u32, 1u32), (5, 2, 1), (5, 1, 1), (5, 1, 2), (7, 2, 1)];
    for _ in 0..ctx.iterations {
        let (p, e, r) = grids[ctx.rng.gen_range(0..grids.len())];
        let params = RingParams::with_unit_c(p, e, r, (e * p) as usize).expect("grid");
        let s = params.s();
        let d = rank_of(&mut ctx.rng, 3);
        ctx.attempt("monodromy", |ctx| {
            let exps: Vec<usize> = (0..d).map(|_| ctx.rng.gen_range(0..=params.er())).collect();
            let constant = random_invertible(&mut ctx.rng, p, s, d).map(|x| TPoly::constant(p, s, x.coeff(0) as i64));
            let constant = if constant.invert().is_ok() { constant } else { TMatrix::identity(p, s, d) };
            let a = TMatrix::u_diagonal(p, s, &exps).mul(&constant);
            let m = MonodromyModule::new(PhiModule::new(params.clone(), a)?, TMatrix::zeros(p, s, d, d))?;
            ctx.check(m.check_monodromy().passes(), || format!("N = 0 fails on {}", m.base().a()));
            let v = random_invertible(&mut ctx.rng, p, s, d);
            ctx.check(m.base_change(&v)?.check_monodromy().passes(), || "base change breaks the axioms".into());
            let lambda = random_matrix(&mut ctx.rng, p, s, d, d);
            let n = MonodromyModule::new(m.base().clone(), lambda)?;
            let x = random_tpoly(&mut ctx.rng, p, s);
            let vec: Vec<TPoly> = (0..d).map(|_| random_tpoly(&mut ctx.rng, p, s)).collect();
            let scaled: Vec<TPoly> = vec.iter().map(|y| &x * y).collect();
            let lhs = n.apply_n(&scaled)?;
            let nv = n.apply_n(&vec)?;
            let rhs: Vec<TPoly> = vec.iter().zip(&nv).map(|(y, ny)| &(&x.derivation_n() * y) + &(&x * ny)).collect();
            ctx.check(lhs == rhs, || "Leibniz rule for N".into());
            Ok(())
        });
    }
    let params = RingParams::with_unit_c(3, 2, 1, 6).expect("grid");
    let base = PhiModule::new(params.clone(), TMatrix::scalar(1, &params.u_pow(2))).expect("valid");
    let perturbed = MonodromyModule::new(base, TMatrix::identity(3, 6, 1)).expect("valid");
    let report = perturbed.check_monodromy();
    ctx.check(report.griffiths_ok() && !report.frobenius_ok(), || "perturbed operator passes".into());
    let wide = RingParams::with_unit_c(3, 1, 2, 3).expect("valid");
    let base = PhiModule::new(wide, TMatrix::identity(3, 3, 1)).expect("valid");
    ctx.check(
        matches!(MonodromyModule::new(base, TMatrix::zeros(3, 3, 1, 1)), Err(BreuilError::RankViolation { .. })),
        || "r >= p - 1 accepted".into(),
    );
}

fn suite_io(ctx: &mut Ctx) {
    for _ in 0..ctx.iterations {
        let params = grid_params_any_c(&mut ctx.rng);
        let m = ctx.object(&params, 3);
        let n = ctx.object(&params, 3);
        ctx.attempt("io", |ctx| {
            let text = serialize_module(&m);
            ctx.check(parse_module(&text)? == ModuleDocument::Phi(m.clone()), || "module round trip".into());
            ctx.check(serialize_module(&parse_module(&text)?.into_phi()) == text, || "canonical text".into());
            let f = random_morphism(&mut ctx.rng, &m, &n)?;
            let back = parse_morphism(&serialize_morphism(&f), None)?;
            ctx.check(back == f && back.x() == f.x(), || "morphism round trip".into());
            let c0 = random_matrix(&mut ctx.rng, params.p(), params.s(), n.rank(), m.rank());
            let seq = build_extension(&m, &n, &c0)?;
            ctx.check(parse_sequence(&serialize_sequence(&seq), None)? == seq, || "sequence round trip".into());
            if params.s() == params.ep() && params.r() + 1 < params.p() {
                let lambda = random_matrix(&mut ctx.rng, params.p(), params.s(), m.rank(), m.rank());
                let mm = MonodromyModule::new(m.clone(), lambda)?;
                let doc = parse_module(&serialize_monodromy(&mm))?;
                ctx.check(doc == ModuleDocument::Monodromy(mm), || "monodromy round trip".into());
            }
            Ok(())
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_briefly() {
        let cfg = SuiteConfig { iterations: 3, seed: 11 };
        for result in run_suites(&[], cfg).unwrap() {
            assert!(result.passed(), "{result}");
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", SuiteConfig::default()).is_err());
        assert!(run_suites(&["ring", "nope"], SuiteConfig::default()).is_err());
    }

    #[test]
    fn span_enumeration_counts() {
        let g = TMatrix::from_coeffs(3, 3, &[vec![vec![0, 1], vec![0, 1]], vec![vec![], vec![0, 0, 1]]]);
        assert_eq!(enumerate_span(&g).len(), 27);
    }
}
