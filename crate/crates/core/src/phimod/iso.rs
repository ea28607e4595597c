//! Isomorphism witnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BreuilError, Result};
use crate::linalg::FpMatrix;

use super::{check_same_params, hom_space, PhiModule, PhiMorphism};

/// Largest `F_p`-dimension of the space of constant terms searched
/// exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 12;
const RANDOM_TRIALS: usize = 64;

/// A morphism `M1 -> M2` whose underlying map is bijective, if one exists.
///
/// A morphism is an isomorphism iff its matrix is invertible mod `u`, so only
/// the span of the constant terms of the morphism basis matters.
pub fn is_isomorphic(m1: &PhiModule, m2: &PhiModule) -> Result<Option<PhiMorphism>> {
    check_same_params(m1, m2)?;
    if m1.rank() != m2.rank() {
        return Ok(None);
    }
    if m1 == m2 {
        return Ok(Some(PhiMorphism::identity(m1)));
    }
    let p = m1.p();
    let basis = hom_space(m1, m2)?;
    if let Some(f) = basis.iter().find(|f| f.is_isomorphism()) {
        return Ok(Some(f.clone()));
    }
    if basis.is_empty() {
        return Ok(None);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..RANDOM_TRIALS {
        let terms: Vec<(u32, &PhiMorphism)> = basis.iter().map(|f| (rng.gen_range(0..p), f)).collect();
        let f = PhiMorphism::linear_combination(&terms, m1, m2)?;
        if f.is_isomorphism() {
            return Ok(Some(f));
        }
    }

    // Keep a subset of the basis whose constant terms are independent.
    let d = m1.rank();
    let flat = |f: &PhiMorphism| -> Vec<u32> {
        let c = f.phi_x().constant_part();
        (0..d * d).map(|k| c.get(k / d, k % d)).collect()
    };
    let mut chosen: Vec<&PhiMorphism> = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for f in &basis {
        let mut trial = rows.clone();
        trial.push(flat(f));
        if FpMatrix::from_rows(p, d * d, &trial).rank() == trial.len() {
            rows = trial;
            chosen.push(f);
        }
    }
    let dim = chosen.len();
    if dim > EXHAUSTIVE_LIMIT {
        return Err(BreuilError::SearchInconclusive { dimension: dim });
    }
    let mut coeffs = vec![0u32; dim];
    loop {
        // Odometer over F_p^dim.
        let mut k = 0;
        while k < dim {
            coeffs[k] += 1;
            if coeffs[k] < p {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
        if k == dim {
            return Ok(None);
        }
        let constant = FpMatrix::from_fn(p, d, d, |i, j| {
            (0..dim).map(|t| coeffs[t] as u64 * rows[t][i * d + j] as u64).sum::<u64>() as u32 % p
        });
        if constant.is_invertible() {
            let terms: Vec<(u32, &PhiMorphism)> = coeffs.iter().copied().zip(chosen.iter().copied()).collect();
            let f = PhiMorphism::linear_combination(&terms, m1, m2)?;
            debug_assert!(f.is_isomorphism());
            return Ok(Some(f));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TMatrix;
    use crate::ring::RingParams;

    #[test]
    fn rank_mismatch_and_self() {
        let p = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        let m = PhiModule::new(p.clone(), TMatrix::scalar(1, &p.u_pow(1))).unwrap();
        let n = m.direct_sum(&m).unwrap();
        assert!(is_isomorphic(&m, &n).unwrap().is_none());
        assert_eq!(is_isomorphic(&m, &m).unwrap().unwrap(), PhiMorphism::identity(&m));
    }

    #[test]
    fn base_change_orbit() {
        let p = RingParams::with_unit_c(3, 2, 1, 6).unwrap();
        let a = TMatrix::scalar(1, &p.u_pow(1));
        let v = TMatrix::scalar(1, &p.poly(&[2, 1, 0, 1]));
        let a2 = v.mul(&a).mul(&v.frobenius().invert().unwrap());
        let m1 = PhiModule::new(p.clone(), a).unwrap();
        let m2 = PhiModule::new(p, a2).unwrap();
        assert!(is_isomorphic(&m1, &m2).unwrap().is_some());
    }

    #[test]
    fn non_isomorphic_same_rank() {
        let p = RingParams::with_unit_c(3, 2, 1, 3).unwrap();
        let et = PhiModule::new(p.clone(), TMatrix::scalar(1, &p.one())).unwrap();
        let mu = PhiModule::new(p.clone(), TMatrix::scalar(1, &p.u_pow(2))).unwrap();
        assert!(is_isomorphic(&et, &mu).unwrap().is_none());
    }
}
