//! The equation `A1 phi(X) = X A2` as an `F_p`-linear system.
//!
//! Since `k = F_p`, Frobenius is `F_p`-linear, so the solutions form an
//! `F_p`-subspace of the `d1 * d2 * s` coefficients of `X`. Only `phi(X)`
//! matters for the morphism, so the second output is the image of that
//! subspace under `X -> phi(X)`.

use crate::error::{BreuilError, Result};
use crate::ring::TPoly;

use super::{FpMatrix, TMatrix};

#[derive(Debug, Clone)]
pub struct SemilinearSolution {
    /// `F_p`-basis of `{X : A1 phi(X) = X A2}`.
    pub nullspace: Vec<TMatrix>,
    /// Pairs `(X, phi(X))` whose `phi(X)` form the reduced echelon basis of
    /// the morphism space.
    pub morphisms: Vec<(TMatrix, TMatrix)>,
}

impl SemilinearSolution {
    pub fn nullspace_dim(&self) -> usize {
        self.nullspace.len()
    }

    pub fn morphism_dim(&self) -> usize {
        self.morphisms.len()
    }
}

pub(crate) fn flatten(m: &TMatrix) -> Vec<u32> {
    m.entries().iter().flat_map(|e| e.coeffs().iter().copied()).collect()
}

pub(crate) fn unflatten(p: u32, s: usize, rows: usize, cols: usize, v: &[u32]) -> TMatrix {
    TMatrix::from_fn(p, s, rows, cols, |i, j| {
        let off = (i * cols + j) * s;
        TPoly::from_residues(p, s, &v[off..off + s])
    })
}

pub fn solve_semilinear(a1: &TMatrix, a2: &TMatrix) -> Result<SemilinearSolution> {
    if (a1.p(), a1.s()) != (a2.p(), a2.s()) {
        return Err(BreuilError::ParamMismatch("presentations over different rings".into()));
    }
    if !a1.is_square() || !a2.is_square() {
        return Err(BreuilError::DimensionMismatch("presentations must be square".into()));
    }
    let (p, s) = (a1.p(), a1.s());
    let (d1, d2) = (a1.rows(), a2.rows());
    let n = d1 * d2 * s;

    // Column k of the system is the image of the k-th coefficient unit u^c E_ij.
    let mut system = FpMatrix::zeros(p, n, n);
    for i in 0..d1 {
        for j in 0..d2 {
            for c in 0..s {
                let k = (i * d2 + j) * s + c;
                let mut x = TMatrix::zeros(p, s, d1, d2);
                x[(i, j)] = TPoly::monomial(p, s, c, 1);
                let image = a1.mul(&x.frobenius()).sub(&x.mul(a2));
                for (row, &v) in flatten(&image).iter().enumerate() {
                    if v != 0 {
                        system.set(row, k, v);
                    }
                }
            }
        }
    }

    let nullspace: Vec<TMatrix> = system.nullspace().iter().map(|v| unflatten(p, s, d1, d2, v)).collect();

    // Row-reduce [phi(X) | X] so the phi-part is in reduced echelon form; the
    // rows with nonzero phi-part give a canonical morphism basis.
    let width = 2 * n;
    let rows: Vec<Vec<u32>> = nullspace
        .iter()
        .map(|x| {
            let mut row = flatten(&x.frobenius());
            row.extend(flatten(x));
            row
        })
        .collect();
    let mut aug = FpMatrix::from_rows(p, width, &rows);
    let pivots = aug.rref();
    let morphisms = pivots
        .iter()
        .enumerate()
        .take_while(|(_, &c)| c < n)
        .map(|(r, _)| {
            let row = aug.row(r);
            (unflatten(p, s, d1, d2, &row[n..]), unflatten(p, s, d1, d2, &row[..n]))
        })
        .collect();
    Ok(SemilinearSolution { nullspace, morphisms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(p: u32, s: usize, c: &[i64]) -> TMatrix {
        TMatrix::from_coeffs(p, s, &[vec![c.to_vec()]])
    }

    /// All X in T_s (rank one) with a1 phi(X) = X a2, by enumeration.
    fn brute_force(p: u32, s: usize, a1: &TPoly, a2: &TPoly) -> (usize, usize) {
        let mut sols = Vec::new();
        let total = (p as usize).pow(s as u32);
        for k in 0..total {
            let digits: Vec<i64> = (0..s).map(|i| ((k / (p as usize).pow(i as u32)) % p as usize) as i64).collect();
            let x = TPoly::from_coeffs(p, s, &digits);
            if a1 * &x.frobenius() == &x * a2 {
                sols.push(x);
            }
        }
        let phis: std::collections::HashSet<TPoly> = sols.iter().map(TPoly::frobenius).collect();
        (sols.len(), phis.len())
    }

    #[test]
    fn scalar_u_endomorphisms() {
        let (p, s) = (3, 3);
        let a = scalar(p, s, &[0, 1]);
        let sol = solve_semilinear(&a, &a).unwrap();
        let (n_sols, n_phis) = brute_force(p, s, &a[(0, 0)], &a[(0, 0)]);
        assert_eq!(n_sols, 9);
        assert_eq!(n_phis, 3);
        assert_eq!(sol.nullspace_dim(), 2);
        assert_eq!(sol.morphism_dim(), 1);
        for x in &sol.nullspace {
            assert_eq!(a.mul(&x.frobenius()), x.mul(&a));
        }
    }

    #[test]
    fn etale_to_multiplicative_is_zero() {
        let (p, s) = (3, 3);
        let et = scalar(p, s, &[1]);
        let mu = scalar(p, s, &[0, 0, 1]);
        let sol = solve_semilinear(&et, &mu).unwrap();
        let (_, n_phis) = brute_force(p, s, &et[(0, 0)], &mu[(0, 0)]);
        assert_eq!(n_phis, 1);
        assert_eq!(sol.morphism_dim(), 0);
    }

    #[test]
    fn identity_is_a_solution() {
        let a = TMatrix::from_coeffs(3, 4, &[vec![vec![1, 1], vec![0, 1]], vec![vec![0, 2], vec![0, 0, 1]]]);
        let sol = solve_semilinear(&a, &a).unwrap();
        assert!(sol.morphism_dim() >= 1);
        let id = TMatrix::identity(3, 4, 2);
        // phi(Id) = Id must lie in the span of the morphism basis.
        let basis: Vec<Vec<u32>> = sol.morphisms.iter().map(|(_, f)| flatten(f)).collect();
        let mut with_id = basis.clone();
        with_id.push(flatten(&id));
        let cols = basis[0].len();
        assert_eq!(FpMatrix::from_rows(3, cols, &with_id).rank(), basis.len());
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
        fn solutions_solve(seed in any::<u64>(), d1 in 0usize..=2, d2 in 0usize..=2) {
            let mut rng = fixture_rng(seed);
            let params = random_grid_params(&mut rng);
            let (a1, a2) = (random_object(&mut rng, &params, d1), random_object(&mut rng, &params, d2));
            let sol = solve_semilinear(a1.a(), a2.a()).unwrap();
            for x in &sol.nullspace {
                prop_assert_eq!(a1.a().mul(&x.frobenius()), x.mul(a2.a()));
            }
            prop_assert_eq!(sol.morphisms.len(), sol.morphism_dim());
            prop_assert!(sol.morphism_dim() <= sol.nullspace.len());
        }
    }
}
