//! Sparse and dense matrices over F2[H].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::poly::Poly;

/// Column-sparse matrix. Column `j` is the image of the `j`-th source basis
/// vector, stored as a map from row index to a nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Poly>>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![BTreeMap::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    /// Builds a matrix from `(row, col, entry)` triples; repeated positions are summed.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Poly)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (i, j, p) in entries {
            m.add_to(i, j, &p);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Poly {
        self.data[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        if p.is_zero() {
            self.data[j].remove(&i);
        } else {
            self.data[j].insert(i, p);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, p: &Poly) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        if p.is_zero() {
            return;
        }
        let col = &mut self.data[j];
        match col.get_mut(&i) {
            Some(e) => {
                *e += p;
                if e.is_zero() {
                    col.remove(&i);
                }
            }
            None => {
                col.insert(i, p.clone());
            }
        }
    }

    /// Nonzero entries of column `j` as `(row, entry)`.
    pub fn column(&self, j: usize) -> &BTreeMap<usize, Poly> {
        &self.data[j]
    }

    /// All nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(&i, p)| (i, j, p)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, v: &BTreeMap<usize, Poly>) -> BTreeMap<usize, Poly> {
        let mut out: BTreeMap<usize, Poly> = BTreeMap::new();
        for (&j, c) in v {
            for (&i, p) in &self.data[j] {
                let term = c * p;
                let e = out.entry(i).or_default();
                *e += &term;
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Applies the matrix to a dense vector.
    pub fn apply_dense(&self, v: &[Poly]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.rows];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (&i, p) in &self.data[j] {
                out[i] += &(c * p);
            }
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = PolyMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            out.data[j] = self.apply(&rhs.data[j]);
        }
        out
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.cols, self.rows);
        for (i, j, p) in self.entries() {
            out.data[i].insert(j, p.clone());
        }
        out
    }

    pub fn add(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in sum");
        let mut out = self.clone();
        for (i, j, p) in rhs.entries() {
            out.add_to(i, j, p);
        }
        out
    }

    /// Substitutes a value for `H` in every entry, giving an F2 matrix.
    pub fn eval(&self, h: bool) -> PolyMatrix {
        PolyMatrix::from_entries(
            self.rows,
            self.cols,
            self.entries().map(|(i, j, p)| (i, j, Poly::constant(p.eval(h)))),
        )
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, p) in self.entries() {
            d.data[i][j] = p.clone();
        }
        d
    }

    /// Keeps the listed rows and columns, in the listed order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut row_pos = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            row_pos[r] = k;
        }
        let mut out = PolyMatrix::zeros(rows.len(), cols.len());
        for (k, &c) in cols.iter().enumerate() {
            for (&i, p) in &self.data[c] {
                if row_pos[i] != usize::MAX {
                    out.data[k].insert(row_pos[i], p.clone());
                }
            }
        }
        out
    }
}

/// Dense row-major matrix, used where elimination touches most entries anyway.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Poly>>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![vec![Poly::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Poly::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix { rows: r, cols: c, data: rows }
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i][j]
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k][j];
                    if !b.is_zero() {
                        let t = a * b;
                        out.data[i][j] += &t;
                    }
                }
            }
        }
        out
    }

    pub fn to_sparse(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    m.set(i, j, p.clone());
                }
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    /// `row[dst] += c * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Poly) {
        if c.is_zero() {
            return;
        }
        let (d, s) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x += &(c * y);
            }
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Poly) {
        if c.is_zero() {
            return;
        }
        for row in &mut self.data {
            if !row[src].is_zero() {
                let t = c * &row[src];
                row[dst] += &t;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let h = Poly::h();
        let a = PolyMatrix::from_entries(2, 2, [(0, 0, Poly::one()), (0, 1, h.clone()), (1, 1, h.clone())]);
        let b = a.mul(&a);
        assert_eq!(b.get(0, 1), Poly::from_exponents([1, 2]));
        assert_eq!(b.get(1, 1), Poly::monomial(2));
        assert_eq!(a.transpose().get(1, 0), h);
        assert_eq!(a.to_dense().mul(&a.to_dense()).to_sparse(), b);
    }

    #[test]
    fn repeated_entries_cancel() {
        let m = PolyMatrix::from_entries(1, 1, [(0, 0, Poly::one()), (0, 0, Poly::one())]);
        assert!(m.is_zero());
        assert_eq!(m.nnz(), 0);
    }
}
