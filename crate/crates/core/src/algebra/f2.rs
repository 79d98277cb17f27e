//! Linear algebra over `F2` on packed bit vectors.

use crate::algebra::{Poly, PolyMatrix};

/// A bit vector that grows on demand; trailing zero words are ignored by `==`.
#[derive(Clone, Debug, Default)]
pub struct BitVec {
    words: Vec<u64>,
}

impl PartialEq for BitVec {
    fn eq(&self, other: &Self) -> bool {
        let n = self.words.len().max(other.words.len());
        (0..n).all(|i| self.word(i) == other.word(i))
    }
}

impl Eq for BitVec {}

impl BitVec {
    pub fn new() -> Self {
        BitVec::default()
    }

    fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }

    pub fn get(&self, i: usize) -> bool {
        self.word(i / 64) >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        if i / 64 >= self.words.len() {
            if !b {
                return;
            }
            self.words.resize(i / 64 + 1, 0);
        }
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Reduction of a polynomial vector at `H = h`.
    pub fn from_polys(v: &[Poly], h: bool) -> Self {
        let mut out = BitVec::new();
        for (i, p) in v.iter().enumerate() {
            if p.eval(h) {
                out.set(i, true);
            }
        }
        out
    }
}

impl FromIterator<usize> for BitVec {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v = BitVec::new();
        for i in iter {
            v.flip(i);
        }
        v
    }
}

/// Columns of a polynomial matrix evaluated at `H = h`.
pub fn columns_at(m: &PolyMatrix, h: bool) -> Vec<BitVec> {
    let mut cols = vec![BitVec::new(); m.cols()];
    for (i, j, p) in m.entries() {
        if p.eval(h) {
            cols[j].flip(i);
        }
    }
    cols
}

/// Image of a bit vector under a polynomial matrix evaluated at `H = h`.
pub fn apply_at(m: &PolyMatrix, h: bool, v: &BitVec) -> BitVec {
    let mut out = BitVec::new();
    for j in v.ones() {
        for (i, p) in m.column(j) {
            if p.eval(h) {
                out.flip(*i);
            }
        }
    }
    out
}

/// Row echelon basis built incrementally, remembering how each row was made.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, BitVec, BitVec)>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors offered so far; tag bits refer to this numbering.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Returns `(residual, tag)` with `v = residual + sum of inserted vectors in tag`.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut r = v.clone();
        let mut tag = BitVec::new();
        for (p, row, t) in &self.rows {
            if r.get(*p) {
                r.xor_assign(row);
                tag.xor_assign(t);
            }
        }
        (r, tag)
    }

    /// Adds `v`; returns whether it was independent of the earlier vectors.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let (r, mut tag) = self.reduce(v);
        tag.flip(self.inserted);
        self.inserted += 1;
        match r.first_one() {
            Some(p) => {
                self.rows.push((p, r, tag));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }
}

/// Rank of a polynomial matrix at `H = h`.
pub fn rank_at(m: &PolyMatrix, h: bool) -> usize {
    let mut e = Echelon::new();
    for c in columns_at(m, h) {
        e.insert(&c);
    }
    e.rank()
}
