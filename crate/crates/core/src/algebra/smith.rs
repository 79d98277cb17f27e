//! Smith normal form over the Euclidean domain F2[H].

use super::matrix::{DenseMatrix, PolyMatrix};
use super::poly::Poly;

/// Result of a Smith normal form computation: `U * M * V = D` where `D` has the
/// invariant factors `diag[0] | diag[1] | ...` on its leading diagonal.
#[derive(Clone, Debug)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero invariant factors, each monic.
    pub diag: Vec<Poly>,
    /// Original row index that ended in position `k`, following swaps only.
    pub row_origin: Vec<usize>,
    /// Original column index that ended in position `k`, following swaps only.
    pub col_origin: Vec<usize>,
    pub transforms: Option<Transforms>,
}

/// Unimodular transforms with `U * M * V = D`.
#[derive(Clone, Debug)]
pub struct Transforms {
    pub u: DenseMatrix,
    pub u_inv: DenseMatrix,
    pub v: DenseMatrix,
    pub v_inv: DenseMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Invariant factors that are not units.
    pub fn nonunit_factors(&self) -> impl Iterator<Item = &Poly> {
        self.diag.iter().filter(|p| !p.is_one())
    }
}

struct Work {
    a: DenseMatrix,
    t: Option<Transforms>,
    row_origin: Vec<usize>,
    col_origin: Vec<usize>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        self.row_origin.swap(i, j);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(i, j);
            t.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        self.col_origin.swap(i, j);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(i, j);
            t.v_inv.swap_rows(i, j);
        }
    }

    // row[dst] += c * row[src]
    fn row_op(&mut self, dst: usize, src: usize, c: &Poly) {
        self.a.add_row_multiple(dst, src, c);
        if let Some(t) = &mut self.t {
            t.u.add_row_multiple(dst, src, c);
            t.u_inv.add_col_multiple(src, dst, c);
        }
    }

    // col[dst] += c * col[src]
    fn col_op(&mut self, dst: usize, src: usize, c: &Poly) {
        self.a.add_col_multiple(dst, src, c);
        if let Some(t) = &mut self.t {
            t.v.add_col_multiple(dst, src, c);
            t.v_inv.add_row_multiple(src, dst, c);
        }
    }

    /// Minimal-degree nonzero entry in the trailing block, ties by (row, col).
    fn find_pivot(&self, from: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in from..self.a.rows {
            for j in from..self.a.cols {
                if let Some(d) = self.a.data[i][j].degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                        if d == 0 {
                            return Some((i, j));
                        }
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Clears row and column `t` outside the pivot, lowering the pivot degree
    /// with Euclidean remainders when it does not divide an entry.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let mut reduced = false;
            for i in t + 1..self.a.rows {
                if self.a.data[i][t].is_zero() {
                    continue;
                }
                let (q, r) = self.a.data[i][t].div_rem(&self.a.data[t][t]);
                self.row_op(i, t, &q);
                if !r.is_zero() {
                    self.swap_rows(i, t);
                    reduced = true;
                }
            }
            for j in t + 1..self.a.cols {
                if self.a.data[t][j].is_zero() {
                    continue;
                }
                let (q, r) = self.a.data[t][j].div_rem(&self.a.data[t][t]);
                self.col_op(j, t, &q);
                if !r.is_zero() {
                    self.swap_cols(j, t);
                    reduced = true;
                }
            }
            if !reduced {
                break;
            }
        }
    }

    /// Finds an entry of the trailing block not divisible by the pivot.
    fn non_divisible(&self, t: usize) -> Option<usize> {
        let p = &self.a.data[t][t];
        if p.is_one() {
            return None;
        }
        (t + 1..self.a.rows)
            .find(|&i| (t + 1..self.a.cols).any(|j| !p.divides(&self.a.data[i][j])))
    }
}

/// Smith normal form of a dense matrix; `track` requests the transforms.
pub fn smith_dense(m: &DenseMatrix, track: bool) -> Smith {
    let mut w = Work {
        a: m.clone(),
        t: track.then(|| Transforms {
            u: DenseMatrix::identity(m.rows),
            u_inv: DenseMatrix::identity(m.rows),
            v: DenseMatrix::identity(m.cols),
            v_inv: DenseMatrix::identity(m.cols),
        }),
        row_origin: (0..m.rows).collect(),
        col_origin: (0..m.cols).collect(),
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.rows.min(m.cols) {
        let Some((pi, pj)) = w.find_pivot(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            w.clear_cross(t);
            match w.non_divisible(t) {
                Some(i) => w.row_op(t, i, &Poly::one()),
                None => break,
            }
        }
        diag.push(w.a.data[t][t].clone());
        t += 1;
    }
    Smith {
        rows: m.rows,
        cols: m.cols,
        diag,
        row_origin: w.row_origin,
        col_origin: w.col_origin,
        transforms: w.t,
    }
}

pub fn smith(m: &PolyMatrix, track: bool) -> Smith {
    smith_dense(&m.to_dense(), track)
}

/// Invariant factors only.
pub fn snf(m: &PolyMatrix) -> Vec<Poly> {
    smith(m, false).diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(exps: &[usize]) -> Poly {
        Poly::from_exponents(exps.iter().copied())
    }

    fn dense(rows: &[&[&[usize]]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|e| p(e)).collect()).collect())
    }

    // Independent oracle: the k-th determinantal divisor is the gcd of all k x k
    // minors, and d_k = D_k / D_{k-1}.
    fn det(m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        if n == 0 {
            return Poly::one();
        }
        let mut acc = Poly::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            acc += &(&m[0][j] * &det(&minor));
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    fn determinantal_factors(m: &DenseMatrix) -> Vec<Poly> {
        let mut divisors = vec![Poly::one()];
        for k in 1..=m.rows.min(m.cols) {
            let mut g = Poly::zero();
            for rs in subsets(m.rows, k) {
                for cs in subsets(m.cols, k) {
                    let minor: Vec<Vec<Poly>> =
                        rs.iter().map(|&r| cs.iter().map(|&c| m.data[r][c].clone()).collect()).collect();
                    g = Poly::gcd(&g, &det(&minor));
                }
            }
            if g.is_zero() {
                break;
            }
            divisors.push(g);
        }
        divisors.windows(2).map(|w| w[1].div_rem(&w[0]).0).collect()
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let m = dense(&[&[&[1], &[]], &[&[], &[2]]]);
        assert_eq!(smith_dense(&m, false).diag, vec![Poly::h(), Poly::monomial(2)]);
    }

    #[test]
    fn unit_entry() {
        let m = dense(&[&[&[0]]]);
        assert_eq!(smith_dense(&m, false).diag, vec![Poly::one()]);
    }

    #[test]
    fn mixed_two_by_two() {
        // [[H, H^2], [H^2, H^3 + H]] has determinant H^2 and content H.
        let m = dense(&[&[&[1], &[2]], &[&[2], &[3, 1]]]);
        let s = smith_dense(&m, true);
        assert_eq!(s.diag, vec![Poly::h(), Poly::h()]);
        assert_eq!(s.diag, determinantal_factors(&m));
    }

    #[test]
    fn requires_divisibility_fixup() {
        // diag(H, H + 1) has invariant factors (1, H^2 + H).
        let m = dense(&[&[&[1], &[]], &[&[], &[0, 1]]]);
        assert_eq!(smith_dense(&m, false).diag, vec![Poly::one(), p(&[1, 2])]);
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(0.6) {
                    let bits: u8 = rng.gen_range(0..16);
                    m.data[i][j] = Poly::from_exponents((0..4).filter(|k| bits >> k & 1 == 1));
                }
            }
        }
        m
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..5));
            let m = random_matrix(&mut rng, r, c);
            let s = smith_dense(&m, true);
            let t = s.transforms.as_ref().unwrap();
            let d = t.u.mul(&m).mul(&t.v);
            for i in 0..r {
                for j in 0..c {
                    let expect = if i == j && i < s.rank() { s.diag[i].clone() } else { Poly::zero() };
                    assert_eq!(d.data[i][j], expect);
                }
            }
            assert_eq!(t.u.mul(&t.u_inv), DenseMatrix::identity(r));
            assert_eq!(t.v_inv.mul(&t.v), DenseMatrix::identity(c));
            for w in s.diag.windows(2) {
                assert!(w[0].divides(&w[1]));
            }
            assert_eq!(s.diag, determinantal_factors(&m));
        }
    }

    proptest! {
        #[test]
        fn invariant_under_unimodular_operations(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..5));
            let m = random_matrix(&mut rng, r, c);
            let before = smith_dense(&m, false).diag;
            let mut scrambled = m.clone();
            for _ in 0..10 {
                let bits: u8 = rng.gen_range(1..8);
                let coef = Poly::from_exponents((0..3).filter(|k| bits >> k & 1 == 1));
                if rng.gen_bool(0.5) && r > 1 {
                    let a = rng.gen_range(0..r);
                    let b = (a + rng.gen_range(1..r)) % r;
                    scrambled.add_row_multiple(a, b, &coef);
                } else if c > 1 {
                    let a = rng.gen_range(0..c);
                    let b = (a + rng.gen_range(1..c)) % c;
                    scrambled.add_col_multiple(a, b, &coef);
                }
            }
            prop_assert_eq!(smith_dense(&scrambled, false).diag, before);
        }
    }
}
