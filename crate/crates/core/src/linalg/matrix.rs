use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{BreuilError, Result};
use crate::ring::{TPoly, Valuation};

/// Dense row-major matrix over `T_s`. Row vectors are the coordinate
/// convention throughout: a submodule is the row span of its generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TMatrix {
    rows: usize,
    cols: usize,
    p: u32,
    s: usize,
    entries: Vec<TPoly>,
}

impl TMatrix {
    pub fn zeros(p: u32, s: usize, rows: usize, cols: usize) -> Self {
        TMatrix { rows, cols, p, s, entries: vec![TPoly::zero(p, s); rows * cols] }
    }

    pub fn identity(p: u32, s: usize, n: usize) -> Self {
        let mut m = Self::zeros(p, s, n, n);
        for i in 0..n {
            m[(i, i)] = TPoly::one(p, s);
        }
        m
    }

    pub fn scalar(n: usize, value: &TPoly) -> Self {
        Self::diagonal(value.p(), value.len(), &vec![value.clone(); n])
    }

    pub fn diagonal(p: u32, s: usize, diag: &[TPoly]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(p, s, n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// `diag(u^{x_1}, ..., u^{x_n})`, with `u^x = 0` once `x >= s`.
    pub fn u_diagonal(p: u32, s: usize, exponents: &[usize]) -> Self {
        let diag: Vec<TPoly> = exponents.iter().map(|&x| TPoly::monomial(p, s, x, 1)).collect();
        Self::diagonal(p, s, &diag)
    }

    pub fn from_fn(p: u32, s: usize, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert!(x.p() == p && x.len() == s, "entry over the wrong ring");
                entries.push(x);
            }
        }
        TMatrix { rows, cols, p, s, entries }
    }

    pub fn from_rows(p: u32, s: usize, cols: usize, rows: &[Vec<TPoly>]) -> Self {
        Self::from_fn(p, s, rows.len(), cols, |i, j| rows[i][j].clone())
    }

    /// Convenience for tests and fixtures: nested integer coefficient lists.
    pub fn from_coeffs(p: u32, s: usize, data: &[Vec<Vec<i64>>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Self::from_fn(p, s, rows, cols, |i, j| TPoly::from_coeffs(p, s, &data[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[TPoly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[TPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_matrix(&self, i: usize) -> TMatrix {
        self.select_rows(&[i])
    }

    pub fn select_rows(&self, idx: &[usize]) -> TMatrix {
        Self::from_fn(self.p, self.s, idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> TMatrix {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(self.p, self.s, rows.len(), cols.len(), |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// `[[top_left, top_right], [bottom_left, bottom_right]]`.
    pub fn block(tl: &TMatrix, tr: &TMatrix, bl: &TMatrix, br: &TMatrix) -> TMatrix {
        assert_eq!(tl.rows, tr.rows);
        assert_eq!(bl.rows, br.rows);
        assert_eq!(tl.cols, bl.cols);
        assert_eq!(tr.cols, br.cols);
        let (r1, c1) = tl.shape();
        Self::from_fn(tl.p, tl.s, tl.rows + bl.rows, tl.cols + tr.cols, |i, j| match (i < r1, j < c1) {
            (true, true) => tl[(i, j)].clone(),
            (true, false) => tr[(i, j - c1)].clone(),
            (false, true) => bl[(i - r1, j)].clone(),
            (false, false) => br[(i - r1, j - c1)].clone(),
        })
    }

    pub fn vstack(&self, other: &TMatrix) -> TMatrix {
        assert_eq!(self.cols, other.cols);
        let r = self.rows;
        Self::from_fn(self.p, self.s, self.rows + other.rows, self.cols, |i, j| {
            if i < r { self[(i, j)].clone() } else { other[(i - r, j)].clone() }
        })
    }

    pub fn map(&self, f: impl Fn(&TPoly) -> TPoly) -> TMatrix {
        let entries: Vec<TPoly> = self.entries.iter().map(f).collect();
        let s = entries.first().map_or(self.s, |e| e.len());
        TMatrix { rows: self.rows, cols: self.cols, p: self.p, s, entries }
    }

    pub fn transpose(&self) -> TMatrix {
        Self::from_fn(self.p, self.s, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Entrywise Frobenius.
    pub fn frobenius(&self) -> TMatrix {
        self.map(TPoly::frobenius)
    }

    pub fn frobenius_pow(&self, n: u32) -> TMatrix {
        self.map(|x| x.frobenius_pow(n))
    }

    /// Entrywise monodromy derivation.
    pub fn derivation_n(&self) -> TMatrix {
        self.map(TPoly::derivation_n)
    }

    pub fn scale(&self, k: &TPoly) -> TMatrix {
        self.map(|x| x * k)
    }

    pub fn shift_up(&self, k: usize) -> TMatrix {
        self.map(|x| x.shift_up(k))
    }

    pub fn shift_down(&self, k: usize) -> TMatrix {
        self.map(|x| x.shift_down(k))
    }

    pub fn truncate(&self, s: usize) -> TMatrix {
        let mut out = self.map(|x| x.truncate(s));
        out.s = s;
        out
    }

    pub fn lift(&self, t: usize) -> TMatrix {
        let mut out = self.map(|x| x.lift(t));
        out.s = t;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(TPoly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() })
            })
    }

    /// Whether all entries are constants (lie in `F_p`).
    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(TPoly::is_constant)
    }

    pub fn min_valuation(&self) -> Valuation {
        self.entries.iter().map(TPoly::valuation).min().unwrap_or(Valuation::Infinity)
    }

    pub fn mul(&self, rhs: &TMatrix) -> TMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        assert_eq!((self.p, self.s), (rhs.p, rhs.s), "matrix product over different rings");
        let mut out = Self::zeros(self.p, self.s, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &TMatrix) -> TMatrix {
        assert_eq!(self.shape(), rhs.shape());
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        TMatrix { entries, ..self.clone_shape() }
    }

    pub fn sub(&self, rhs: &TMatrix) -> TMatrix {
        assert_eq!(self.shape(), rhs.shape());
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        TMatrix { entries, ..self.clone_shape() }
    }

    pub fn neg(&self) -> TMatrix {
        self.map(|x| -x)
    }

    fn clone_shape(&self) -> TMatrix {
        TMatrix { rows: self.rows, cols: self.cols, p: self.p, s: self.s, entries: Vec::new() }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[TPoly]) -> Vec<TPoly> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = TPoly::zero(self.p, self.s);
                for (i, vi) in v.iter().enumerate() {
                    if !vi.is_zero() {
                        acc = &acc + &(vi * &self[(i, j)]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += factor * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &TPoly) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(src, j)] * factor;
            self[(dst, j)] = &self[(dst, j)] + &t;
        }
    }

    /// `col[dst] += col[src] * factor`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &TPoly) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, src)] * factor;
            self[(i, dst)] = &self[(i, dst)] + &t;
        }
    }

    pub fn scale_row(&mut self, i: usize, factor: &TPoly) {
        for j in 0..self.cols {
            self[(i, j)] = &self[(i, j)] * factor;
        }
    }

    pub fn scale_col(&mut self, j: usize, factor: &TPoly) {
        for i in 0..self.rows {
            self[(i, j)] = &self[(i, j)] * factor;
        }
    }

    /// Gauss-Jordan inversion. An entry can serve as pivot iff it is a unit.
    pub fn invert(&self) -> Result<TMatrix> {
        if !self.is_square() {
            return Err(BreuilError::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = TMatrix::identity(self.p, self.s, n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| work[(i, col)].is_unit()).ok_or(BreuilError::NotInvertible)?;
            work.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let scale = work[(col, col)].invert_unit()?;
            work.scale_row(col, &scale);
            inv.scale_row(col, &scale);
            for i in 0..n {
                if i != col && !work[(i, col)].is_zero() {
                    let f = -&work[(i, col)];
                    work.add_row_multiple(i, col, &f);
                    inv.add_row_multiple(i, col, &f);
                }
            }
        }
        Ok(inv)
    }

    /// Constant terms of all entries, as a matrix over `F_p`.
    pub fn constant_part(&self) -> super::FpMatrix {
        super::FpMatrix::from_fn(self.p, self.rows, self.cols, |i, j| self[(i, j)].coeff(0))
    }
}

impl Index<(usize, usize)> for TMatrix {
    type Output = TPoly;
    fn index(&self, (i, j): (usize, usize)) -> &TPoly {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for TMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut TPoly {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for TMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::random::{fixture_rng, random_invertible, random_matrix};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn inverse_round_trip(seed in any::<u64>(), d in 0usize..=4, s in 1usize..=8) {
            let m = random_invertible(&mut fixture_rng(seed), 5, s, d);
            let inv = m.invert().unwrap();
            prop_assert!(m.mul(&inv).is_identity() && inv.mul(&m).is_identity());
        }

        #[test]
        fn two_by_two_inverse_is_the_adjugate(seed in any::<u64>(), s in 1usize..=6) {
            let m = random_matrix(&mut fixture_rng(seed), 3, s, 2, 2);
            let (a, b, c, d) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
            let det = &(a * d) - &(b * c);
            match det.invert_unit() {
                Ok(k) => {
                    let adj = TMatrix::from_rows(3, s, 2, &[vec![d.clone(), -b], vec![-c, a.clone()]]);
                    prop_assert_eq!(m.invert().unwrap(), adj.scale(&k));
                }
                Err(_) => prop_assert_eq!(m.invert(), Err(BreuilError::NotInvertible)),
            }
        }

        #[test]
        fn multiplication_is_associative(seed in any::<u64>(), s in 1usize..=6) {
            let mut rng = fixture_rng(seed);
            let (x, y, z) = (random_matrix(&mut rng, 3, s, 2, 3), random_matrix(&mut rng, 3, s, 3, 1), random_matrix(&mut rng, 3, s, 1, 2));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }
    }
}
