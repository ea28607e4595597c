//! Smith-type normal form over the local ring `T_s`.
//!
//! Every ideal of `T_s` is `(u^x)`, so elimination with a pivot of minimal
//! u-valuation always clears its row and column. Ties are broken by the
//! lexicographically smallest `(row, col)` so that normal forms are
//! deterministic.

use crate::error::{BreuilError, Result};
use crate::ring::{TPoly, Valuation};

use super::TMatrix;

/// `left * M * right = diag(u^{x_1}, ..., u^{x_m})` (padded with zero rows or
/// columns), with `left`, `right` invertible and `x_1 <= ... <= x_m`,
/// `m = min(rows, cols)`. An exponent equal to `s` is a zero invariant factor.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub left: TMatrix,
    pub right: TMatrix,
    pub right_inv: TMatrix,
    pub exponents: Vec<usize>,
}

impl SmithForm {
    pub fn compute(m: &TMatrix) -> SmithForm {
        let (n, d) = m.shape();
        let (p, s) = (m.p(), m.s());
        let mut work = m.clone();
        let mut left = TMatrix::identity(p, s, n);
        let mut right = TMatrix::identity(p, s, d);
        let mut right_inv = TMatrix::identity(p, s, d);
        let mut exponents = Vec::with_capacity(n.min(d));

        for k in 0..n.min(d) {
            let mut best: Option<(usize, usize, usize)> = None;
            'search: for i in k..n {
                for j in k..d {
                    if let Valuation::Finite(v) = work[(i, j)].valuation() {
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                            if v == 0 {
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((v, pi, pj)) = best else {
                exponents.extend(std::iter::repeat_n(s, n.min(d) - k));
                break;
            };
            work.swap_rows(k, pi);
            left.swap_rows(k, pi);
            work.swap_cols(k, pj);
            right.swap_cols(k, pj);
            right_inv.swap_rows(k, pj);

            let unit = work[(k, k)].shift_down(v);
            let unit_inv = unit.invert_unit().expect("pivot cofactor is a unit");
            work.scale_row(k, &unit_inv);
            left.scale_row(k, &unit_inv);
            debug_assert_eq!(work[(k, k)], TPoly::monomial(p, s, v, 1));

            for i in k + 1..n {
                if work[(i, k)].is_zero() {
                    continue;
                }
                let f = -&work[(i, k)].shift_down(v);
                work.add_row_multiple(i, k, &f);
                left.add_row_multiple(i, k, &f);
            }
            for j in k + 1..d {
                if work[(k, j)].is_zero() {
                    continue;
                }
                let q = work[(k, j)].shift_down(v);
                let f = -&q;
                work.add_col_multiple(j, k, &f);
                right.add_col_multiple(j, k, &f);
                right_inv.add_row_multiple(k, j, &q);
            }
            exponents.push(v);
        }
        SmithForm { left, right, right_inv, exponents }
    }

    /// `diag(u^{x_i})` with the shape of the input matrix.
    pub fn diagonal(&self, rows: usize, cols: usize) -> TMatrix {
        let (p, s) = (self.left.p(), self.left.s());
        let mut d = TMatrix::zeros(p, s, rows, cols);
        for (i, &x) in self.exponents.iter().enumerate() {
            d[(i, i)] = TPoly::monomial(p, s, x, 1);
        }
        d
    }
}

/// A submodule `N` of `T_s^d` in adapted form: `N = sum_i T_s u^{x_i} q_i`
/// where `q_i` are the rows of the invertible matrix `q`.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    q: TMatrix,
    q_inv: TMatrix,
    exponents: Vec<usize>,
}

impl AdaptedBasis {
    /// Adapted basis for the row span of `gens` inside `T_s^d`.
    pub fn of_span(gens: &TMatrix, d: usize) -> Result<AdaptedBasis> {
        if gens.cols() != d {
            return Err(BreuilError::DimensionMismatch(format!(
                "generators have {} columns, ambient rank is {d}",
                gens.cols()
            )));
        }
        let smith = SmithForm::compute(gens);
        let mut exponents = smith.exponents;
        exponents.resize(d, gens.s());
        Ok(AdaptedBasis { q: smith.right_inv, q_inv: smith.right, exponents })
    }

    pub fn q(&self) -> &TMatrix {
        &self.q
    }

    pub fn q_inv(&self) -> &TMatrix {
        &self.q_inv
    }

    /// Sorted ascending; `s` encodes a zero summand.
    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn ambient_rank(&self) -> usize {
        self.q.rows()
    }

    /// Number of nonzero summands.
    pub fn summands(&self) -> usize {
        let s = self.q.s();
        self.exponents.iter().filter(|&&x| x < s).count()
    }

    /// Dimension over `F_p`.
    pub fn dim_fp(&self) -> usize {
        let s = self.q.s();
        self.exponents.iter().map(|&x| s - x.min(s)).sum()
    }

    /// Whether the submodule is a free direct summand (all exponents 0 or s).
    pub fn is_free_summand(&self) -> bool {
        let s = self.q.s();
        self.exponents.iter().all(|&x| x == 0 || x == s)
    }

    /// Generators `u^{x_i} q_i` of the nonzero summands.
    pub fn generators(&self) -> TMatrix {
        let s = self.q.s();
        let mut rows = Vec::new();
        for (i, &x) in self.exponents.iter().enumerate() {
            if x < s {
                let g = TPoly::monomial(self.q.p(), s, x, 1);
                rows.push(self.q.row(i).iter().map(|e| e * &g).collect::<Vec<_>>());
            }
        }
        TMatrix::from_rows(self.q.p(), s, self.ambient_rank(), &rows)
    }

    /// Rows `q_i` with `x_i = 0`: a basis when the submodule is a free summand.
    pub fn free_basis(&self) -> TMatrix {
        let idx: Vec<usize> = (0..self.exponents.len()).filter(|&i| self.exponents[i] == 0).collect();
        self.q.select_rows(&idx)
    }

    pub fn contains(&self, v: &[TPoly]) -> bool {
        let y = self.q_inv.vec_mul(v);
        y.iter().zip(&self.exponents).all(|(yi, &x)| match yi.valuation() {
            Valuation::Infinity => true,
            Valuation::Finite(val) => val >= x,
        })
    }

    pub fn contains_rows(&self, m: &TMatrix) -> bool {
        (0..m.rows()).all(|i| self.contains(m.row(i)))
    }

    pub fn same_submodule(&self, other: &AdaptedBasis) -> bool {
        self.dim_fp() == other.dim_fp() && self.contains_rows(&other.generators())
    }
}

/// Left cofactor/right cofactor `B` with `A B = B A = u^{er} Id`.
///
/// From `L A R = diag(u^{x_i})` this is `B = R diag(u^{er - x_i}) L`; it exists
/// iff every invariant exponent is at most `er`.
pub fn two_sided_cofactor(a: &TMatrix, er: usize) -> Result<TMatrix> {
    if !a.is_square() {
        return Err(BreuilError::DimensionMismatch(format!("presentation is {}x{}", a.rows(), a.cols())));
    }
    let smith = SmithForm::compute(a);
    if let Some(&x) = smith.exponents.iter().find(|&&x| x > er) {
        return Err(BreuilError::NotAPresentation { exponent: x, er });
    }
    let comp: Vec<usize> = smith.exponents.iter().map(|&x| er - x).collect();
    let d = TMatrix::u_diagonal(a.p(), a.s(), &comp);
    Ok(smith.right.mul(&d).mul(&smith.left))
}

/// Generators (rows) of the left kernel `{t : t M = 0}`.
pub fn left_kernel(m: &TMatrix) -> TMatrix {
    let (n, d) = m.shape();
    let (p, s) = (m.p(), m.s());
    let smith = SmithForm::compute(m);
    let mut rows = Vec::new();
    for i in 0..n {
        let x = if i < d { smith.exponents[i] } else { s };
        if x == 0 {
            continue;
        }
        let f = TPoly::monomial(p, s, s - x, 1);
        rows.push(smith.left.row(i).iter().map(|e| e * &f).collect::<Vec<_>>());
    }
    TMatrix::from_rows(p, s, n, &rows)
}

/// Some `t` with `t M = v`, if one exists.
pub fn solve_left(m: &TMatrix, v: &[TPoly]) -> Option<Vec<TPoly>> {
    let smith = SmithForm::compute(m);
    solve_left_with(m, &smith, v)
}

pub(crate) fn solve_left_with(m: &TMatrix, smith: &SmithForm, v: &[TPoly]) -> Option<Vec<TPoly>> {
    let (n, d) = m.shape();
    let (p, s) = (m.p(), m.s());
    assert_eq!(v.len(), d);
    // t L^{-1} D = v R; write z = t L^{-1}.
    let target = smith.right.vec_mul(v);
    let mut z = vec![TPoly::zero(p, s); n];
    for j in 0..d {
        let x = smith.exponents.get(j).copied().unwrap_or(s);
        match target[j].valuation() {
            Valuation::Infinity => {}
            Valuation::Finite(val) if val >= x && x < s => z[j] = target[j].shift_down(x),
            Valuation::Finite(_) => return None,
        }
    }
    let t = smith.left.vec_mul(&z);
    debug_assert_eq!(m.vec_mul(&t), v);
    Some(t)
}

/// Solves `X M = V` row by row.
pub fn solve_left_matrix(m: &TMatrix, v: &TMatrix) -> Option<TMatrix> {
    let smith = SmithForm::compute(m);
    let rows: Option<Vec<Vec<TPoly>>> = (0..v.rows()).map(|i| solve_left_with(m, &smith, v.row(i))).collect();
    Some(TMatrix::from_rows(m.p(), m.s(), m.rows(), &rows?))
}

/// Generators of `rowspan(g1) ∩ rowspan(g2)`.
pub fn intersect(g1: &TMatrix, g2: &TMatrix) -> TMatrix {
    assert_eq!(g1.cols(), g2.cols());
    let stacked = g1.vstack(&g2.neg());
    let ker = left_kernel(&stacked);
    let y = ker.submatrix(0..ker.rows(), 0..g1.rows());
    y.mul(g1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, s: usize, data: &[Vec<Vec<i64>>]) -> TMatrix {
        TMatrix::from_coeffs(p, s, data)
    }

    #[test]
    fn smith_reconstructs() {
        let a = m(3, 6, &[vec![vec![0, 1, 2], vec![0, 0, 1]], vec![vec![1, 1], vec![0, 2, 0, 1]]]);
        let sm = SmithForm::compute(&a);
        let d = sm.diagonal(2, 2);
        assert_eq!(sm.left.mul(&a).mul(&sm.right), d);
        assert!(sm.right.mul(&sm.right_inv).is_identity());
    }

    #[test]
    fn adapted_basis_example() {
        // rows (u, u), (0, u^2) in T_3^2
        let g = m(3, 3, &[vec![vec![0, 1], vec![0, 1]], vec![vec![], vec![0, 0, 1]]]);
        let ab = AdaptedBasis::of_span(&g, 2).unwrap();
        assert_eq!(ab.exponents(), &[1, 2]);
        assert_eq!(ab.q(), &m(3, 3, &[vec![vec![1], vec![1]], vec![vec![], vec![1]]]));
    }

    #[test]
    fn adapted_basis_degenerate() {
        let g = m(3, 4, &[vec![vec![1], vec![]]]);
        assert_eq!(AdaptedBasis::of_span(&g, 2).unwrap().exponents(), &[0, 4]);
        let empty = TMatrix::zeros(3, 4, 0, 2);
        assert_eq!(AdaptedBasis::of_span(&empty, 2).unwrap().exponents(), &[4, 4]);
        assert!(matches!(AdaptedBasis::of_span(&g, 3), Err(BreuilError::DimensionMismatch(_))));
    }

    #[test]
    fn cofactor_examples() {
        let er = 2;
        let a = TMatrix::scalar(2, &TPoly::monomial(3, 6, 2, 1));
        assert!(two_sided_cofactor(&a, er).unwrap().is_identity());
        let a = m(3, 6, &[vec![vec![1], vec![]], vec![vec![], vec![0, 0, 1]]]);
        assert_eq!(two_sided_cofactor(&a, er).unwrap(), m(3, 6, &[vec![vec![0, 0, 1], vec![]], vec![vec![], vec![1]]]));
        let a = m(3, 6, &[vec![vec![0, 0, 0, 2, 1], vec![]], vec![vec![], vec![1]]]);
        assert_eq!(two_sided_cofactor(&a, er), Err(BreuilError::NotAPresentation { exponent: 3, er: 2 }));
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(3, 4, &[vec![vec![0, 1], vec![0, 2]], vec![vec![0, 0, 1], vec![0, 0, 2]]]);
        let k = left_kernel(&a);
        assert!(k.mul(&a).is_zero());
        // (1, 0) A = (u, 2u); (u, 2u) is solvable, (u, u) is not
        let v = a.row(0).to_vec();
        let t = solve_left(&a, &v).unwrap();
        assert_eq!(a.vec_mul(&t), v);
        let w = vec![TPoly::monomial(3, 4, 1, 1), TPoly::monomial(3, 4, 1, 1)];
        assert!(solve_left(&a, &w).is_none());
    }

    #[test]
    fn intersection_of_lines() {
        // span{(1,0)} ∩ span{(1,1), (0,u)} = span{(u,0)}
        let g1 = m(3, 3, &[vec![vec![1], vec![]]]);
        let g2 = m(3, 3, &[vec![vec![1], vec![1]], vec![vec![], vec![0, 1]]]);
        let i = intersect(&g1, &g2);
        let ab = AdaptedBasis::of_span(&i, 2).unwrap();
        let expected = AdaptedBasis::of_span(&m(3, 3, &[vec![vec![0, 1], vec![]]]), 2).unwrap();
        assert!(ab.same_submodule(&expected));
    }
}
