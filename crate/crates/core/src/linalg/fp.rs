use crate::ring::inv_mod;

/// Dense matrix over the prime field `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j) % p;
            }
        }
        m
    }

    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        Self::from_fn(p, rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        Self::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows);
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * rhs.get(k, j) as u64) % p) as u32;
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), self.p) as u64;
            for j in c..self.cols {
                let idx = r * self.cols + j;
                self.data[idx] = (self.data[idx] as u64 * inv % p) as u32;
            }
            for i in 0..self.rows {
                let f = self.get(i, c) as u64;
                if i == r || f == 0 {
                    continue;
                }
                let neg = p - f;
                for j in c..self.cols {
                    let v = self.data[r * self.cols + j] as u64;
                    if v != 0 {
                        let idx = i * self.cols + j;
                        self.data[idx] = ((self.data[idx] as u64 + neg * v) % p) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis (as rows) of `{x : M x = 0}`, in the standard form attached to
    /// the reduced echelon form.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let x = m.get(r, free);
                v[pc] = if x == 0 { 0 } else { p - x };
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `{v : v M = 0}` as rows.
    pub fn left_nullspace(&self) -> FpMatrix {
        let rows = self.transpose().nullspace();
        FpMatrix::from_rows(self.p, self.rows, &rows)
    }

    /// Reduced echelon basis of the row space.
    pub fn row_basis(&self) -> FpMatrix {
        let mut m = self.clone();
        let rank = m.rref().len();
        FpMatrix { p: self.p, rows: rank, cols: self.cols, data: m.data[..rank * self.cols].to_vec() }
    }

    /// Coefficients `C` with `self = C * basis`, where `basis` is in reduced
    /// echelon form (as returned by [`row_basis`](Self::row_basis)).
    pub fn coordinates_in(&self, basis: &FpMatrix) -> Option<FpMatrix> {
        let pivots: Vec<usize> =
            (0..basis.rows).map(|k| basis.row(k).iter().position(|&x| x != 0)).collect::<Option<_>>()?;
        let coeffs = Self::from_fn(self.p, self.rows, basis.rows, |i, k| self.get(i, pivots[k]));
        (coeffs.mul(basis) == *self).then_some(coeffs)
    }

    /// Extends the rows of an echelon basis to a basis of `F_p^cols` with
    /// standard unit vectors; returns only the added rows.
    pub fn complement_rows(&self) -> FpMatrix {
        let mut m = self.clone();
        let pivots = m.rref();
        let rows: Vec<Vec<u32>> = (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|c| {
                let mut v = vec![0; self.cols];
                v[c] = 1;
                v
            })
            .collect();
        FpMatrix::from_rows(self.p, self.cols, &rows)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_is_annihilated() {
        let m = FpMatrix::from_rows(3, 4, &[vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 0, 1, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 4 - m.rank());
        for v in ns {
            let col = FpMatrix::from_fn(3, 4, 1, |i, _| v[i]);
            assert!(m.mul(&col).is_zero());
        }
    }

    #[test]
    fn coordinates_and_complement() {
        let m = FpMatrix::from_rows(5, 3, &[vec![1, 2, 3], vec![2, 4, 1], vec![3, 1, 4]]);
        let basis = m.row_basis();
        let coords = m.coordinates_in(&basis).unwrap();
        assert_eq!(coords.mul(&basis), m);
        let comp = basis.complement_rows();
        assert_eq!(comp.rows() + basis.rows(), 3);
        let mut full = basis.clone();
        full.data.extend_from_slice(&comp.data);
        full.rows += comp.rows;
        assert!(full.is_invertible());
    }
}
