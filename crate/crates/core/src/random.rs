//! Seeded random generation.
//!
//! All generators draw from ChaCha8 (`rand_chacha`), keyed by a `u64` seed
//! through `seed_from_u64`; independent streams for the same seed are
//! obtained with `set_stream`. Given the seed, every output is reproducible
//! across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::TMatrix;
use crate::phimod::{hom_space, PhiModule, PhiMorphism};
use crate::ring::{RingParams, TPoly};

pub type FixtureRng = ChaCha8Rng;

pub fn fixture_rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `stream` of the generator keyed by `seed`.
pub fn split_rng(seed: u64, stream: u64) -> FixtureRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_tpoly(rng: &mut impl Rng, p: u32, s: usize) -> TPoly {
    let coeffs: Vec<u32> = (0..s).map(|_| rng.gen_range(0..p)).collect();
    TPoly::from_residues(p, s, &coeffs)
}

pub fn random_unit(rng: &mut impl Rng, p: u32, s: usize) -> TPoly {
    let mut coeffs: Vec<u32> = (0..s).map(|_| rng.gen_range(0..p)).collect();
    coeffs[0] = rng.gen_range(1..p);
    TPoly::from_residues(p, s, &coeffs)
}

pub fn random_matrix(rng: &mut impl Rng, p: u32, s: usize, rows: usize, cols: usize) -> TMatrix {
    TMatrix::from_fn(p, s, rows, cols, |_, _| random_tpoly(rng, p, s))
}

/// Product of a random unit diagonal and `2 d` random elementary matrices.
pub fn random_invertible(rng: &mut impl Rng, p: u32, s: usize, d: usize) -> TMatrix {
    let diag: Vec<TPoly> = (0..d).map(|_| random_unit(rng, p, s)).collect();
    let mut m = TMatrix::diagonal(p, s, &diag);
    if d < 2 {
        return m;
    }
    for _ in 0..2 * d {
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        if rng.gen_bool(0.2) {
            m.swap_rows(i, j);
        } else {
            let f = random_tpoly(rng, p, s);
            m.add_row_multiple(i, j, &f);
        }
    }
    m
}

/// `A = diag(u^{x_i}) P` with `x_i` uniform in `[0, er]` and `P` invertible.
pub fn random_object(rng: &mut impl Rng, params: &RingParams, d: usize) -> PhiModule {
    let (p, s) = (params.p(), params.s());
    let exps: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=params.er())).collect();
    let a = TMatrix::u_diagonal(p, s, &exps).mul(&random_invertible(rng, p, s, d));
    PhiModule::new(params.clone(), a).expect("diag(u^x) P is a presentation")
}

pub fn random_object_seeded(seed: u64, params: &RingParams, d: usize) -> PhiModule {
    random_object(&mut fixture_rng(seed), params, d)
}

/// A unipotent object: random objects are drawn until one is unipotent, and
/// after 32 misses the exponents are forced to be positive, which makes `A`
/// vanish mod `u`.
pub fn random_unipotent(rng: &mut impl Rng, params: &RingParams, d: usize) -> Result<PhiModule> {
    for _ in 0..32 {
        let m = random_object(rng, params, d);
        if m.is_unipotent()? {
            return Ok(m);
        }
    }
    let (p, s) = (params.p(), params.s());
    let exps: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=params.er())).collect();
    let a = TMatrix::u_diagonal(p, s, &exps).mul(&random_invertible(rng, p, s, d));
    Ok(PhiModule::new(params.clone(), a).expect("diag(u^x) P is a presentation"))
}

/// A uniformly random element of `Hom(M1, M2)`.
pub fn random_morphism(rng: &mut impl Rng, m1: &PhiModule, m2: &PhiModule) -> Result<PhiMorphism> {
    let basis = hom_space(m1, m2)?;
    let p = m1.p();
    let terms: Vec<(u32, &PhiMorphism)> = basis.iter().map(|f| (rng.gen_range(0..p), f)).collect();
    PhiMorphism::linear_combination(&terms, m1, m2)
}

fn pick_object(rng: &mut impl Rng, params: &RingParams, d: usize, unipotent: bool) -> Result<PhiModule> {
    if unipotent {
        random_unipotent(rng, params, d)
    } else {
        Ok(random_object(rng, params, d))
    }
}

/// A random morphism drawn from one of four families that are rarely zero:
/// endomorphisms of `M ⊕ N`, the two maps of a random extension, the maps of
/// the parts decomposition, and plain random morphisms. With `unipotent` all
/// endpoints are unipotent.
pub fn random_structured_morphism(rng: &mut impl Rng, params: &RingParams, unipotent: bool) -> Result<PhiMorphism> {
    let (p, s) = (params.p(), params.s());
    match rng.gen_range(0..4) {
        0 => {
            let d = rng.gen_range(1..=2);
            let m = pick_object(rng, params, d, unipotent)?;
            let n = if rng.gen_bool(0.5) { m.clone() } else { pick_object(rng, params, 1, unipotent)? };
            let sum = m.direct_sum(&n)?;
            random_morphism(rng, &sum, &sum)
        }
        1 => {
            let d = rng.gen_range(1..=2);
            let m1 = pick_object(rng, params, d, unipotent)?;
            let d = rng.gen_range(1..=2);
            let m2 = pick_object(rng, params, d, unipotent)?;
            let c0 = random_matrix(rng, p, s, m2.rank(), m1.rank());
            let seq = crate::abelian::build_extension(&m1, &m2, &c0)?;
            Ok(if rng.gen_bool(0.5) { seq.inj } else { seq.surj })
        }
        2 => {
            let d = rng.gen_range(1..=3);
            let m = pick_object(rng, params, d, unipotent)?;
            let parts = m.parts()?;
            Ok(match rng.gen_range(0..4) {
                0 => parts.m_incl,
                1 => parts.nil_proj,
                2 => parts.uni_incl,
                _ => parts.et_proj,
            })
        }
        _ => {
            let d = rng.gen_range(0..=3);
            let m1 = pick_object(rng, params, d, unipotent)?;
            let d = rng.gen_range(0..=3);
            let m2 = pick_object(rng, params, d, unipotent)?;
            random_morphism(rng, &m1, &m2)
        }
    }
}

/// Random parameters from the default grid: `(3, 2, 1)` with `s` in `3..=6`
/// or `(5, 2, 1)` with `s` in `5..=10`.
pub fn random_grid_params(rng: &mut impl Rng) -> RingParams {
    let (p, s) = if rng.gen_bool(0.5) { (3, rng.gen_range(3..=6)) } else { (5, rng.gen_range(5..=10)) };
    RingParams::with_unit_c(p, 2, 1, s).expect("grid parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let params = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        assert_eq!(random_object_seeded(9, &params, 3), random_object_seeded(9, &params, 3));
        assert!(random_object_seeded(9, &params, 0).is_zero());
    }

    #[test]
    fn invertible_matrices_invert() {
        let mut rng = fixture_rng(1);
        for _ in 0..50 {
            let m = random_invertible(&mut rng, 5, 7, 3);
            assert!(m.mul(&m.invert().unwrap()).is_identity());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = split_rng(4, 0);
        let mut b = split_rng(4, 1);
        let xa: Vec<u32> = (0..8).map(|_| a.gen()).collect();
        let xb: Vec<u32> = (0..8).map(|_| b.gen()).collect();
        assert_ne!(xa, xb);
    }

    #[test]
    fn unipotent_sampler() {
        let params = RingParams::with_unit_c(3, 2, 1, 3).unwrap();
        let mut rng = fixture_rng(2);
        for _ in 0..10 {
            assert!(random_unipotent(&mut rng, &params, 2).unwrap().is_unipotent().unwrap());
        }
    }
}
