//! Gaussian elimination of unit entries.

use std::collections::BTreeMap;

use crate::algebra::{PolyMatrix, Poly};

use super::{ChainMap, Gen, GradedComplex};

type SparseVec = BTreeMap<usize, Poly>;

fn axpy(dst: &mut SparseVec, c: &Poly, src: &SparseVec) {
    for (&k, v) in src {
        let t = c * v;
        let e = dst.entry(k).or_default();
        *e += &t;
        if e.is_zero() {
            dst.remove(&k);
        }
    }
}

/// A differential stored by rows and by columns at once.
struct Twin {
    rows: Vec<SparseVec>,
    cols: Vec<SparseVec>,
}

impl Twin {
    fn from(m: &PolyMatrix) -> Self {
        let mut rows = vec![SparseVec::new(); m.rows()];
        let mut cols = vec![SparseVec::new(); m.cols()];
        for (i, j, p) in m.entries() {
            rows[i].insert(j, p.clone());
            cols[j].insert(i, p.clone());
        }
        Twin { rows, cols }
    }

    fn add(&mut self, i: usize, j: usize, p: &Poly) {
        let e = self.rows[i].entry(j).or_default();
        *e += p;
        if e.is_zero() {
            self.rows[i].remove(&j);
            self.cols[j].remove(&i);
        } else {
            self.cols[j].insert(i, e.clone());
        }
    }

    fn clear_row(&mut self, i: usize) {
        for j in std::mem::take(&mut self.rows[i]).into_keys() {
            self.cols[j].remove(&i);
        }
    }

    fn clear_col(&mut self, j: usize) {
        for i in std::mem::take(&mut self.cols[j]).into_keys() {
            self.rows[i].remove(&j);
        }
    }
}

/// A simplified complex with the homotopy equivalences to and from the input.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub complex: GradedComplex,
    /// Original index of each surviving generator, per degree.
    pub kept: Vec<Vec<usize>>,
    /// `f`: original -> simplified.
    pub to_small: Option<ChainMap>,
    /// `g`: simplified -> original.
    pub to_big: Option<ChainMap>,
}

/// Cancels every unit entry; homotopy equivalent to the input.
pub fn simplify(c: &GradedComplex) -> GradedComplex {
    eliminate(c, false, &|_, _, _| true).complex
}

pub fn simplify_with_maps(c: &GradedComplex) -> Simplified {
    eliminate(c, true, &|_, _, _| true)
}

/// Cancels unit entries `d^h(i, j)` for which `allow(h, i, j)` holds, repeating
/// until none is left. Indices refer to the original generators.
pub fn eliminate(
    c: &GradedComplex,
    track: bool,
    allow: &dyn Fn(i32, usize, usize) -> bool,
) -> Simplified {
    let n = c.gens.len();
    let mut d: Vec<Twin> = c.diffs.iter().map(Twin::from).collect();
    let mut alive: Vec<Vec<bool>> = c.gens.iter().map(|g| vec![true; g.len()]).collect();
    // f as rows over original generators; g as columns over original generators.
    let mut f: Vec<Vec<SparseVec>> = Vec::new();
    let mut g: Vec<Vec<SparseVec>> = Vec::new();
    if track {
        for gens in &c.gens {
            let unit: Vec<SparseVec> =
                (0..gens.len()).map(|i| SparseVec::from([(i, Poly::one())])).collect();
            f.push(unit.clone());
            g.push(unit);
        }
    }

    for k in 0..n.saturating_sub(1) {
        let h = c.h_min + k as i32;
        loop {
            // Cheapest unit pivot by fill-in estimate, scanning columns in order.
            let mut best: Option<(usize, usize, usize)> = None;
            for (j, col) in d[k].cols.iter().enumerate() {
                for (&i, p) in col {
                    if p.is_one() && allow(h, i, j) {
                        let cost = (col.len() - 1) * (d[k].rows[i].len() - 1);
                        if best.is_none_or(|(bc, _, _)| cost < bc) {
                            best = Some((cost, i, j));
                        }
                    }
                }
                if matches!(best, Some((0, _, _))) {
                    break;
                }
            }
            let Some((_, i, j)) = best else { break };

            let col_j: Vec<(usize, Poly)> =
                d[k].cols[j].iter().filter(|(&l, _)| l != i).map(|(&l, p)| (l, p.clone())).collect();
            let row_i: Vec<(usize, Poly)> =
                d[k].rows[i].iter().filter(|(&m, _)| m != j).map(|(&m, p)| (m, p.clone())).collect();
            for (l, a) in &col_j {
                for (m, b) in &row_i {
                    d[k].add(*l, *m, &(a * b));
                }
            }
            if track {
                let fi = f[k + 1][i].clone();
                for (l, a) in &col_j {
                    axpy(&mut f[k + 1][*l], a, &fi);
                }
                let gj = g[k][j].clone();
                for (m, b) in &row_i {
                    axpy(&mut g[k][*m], b, &gj);
                }
                f[k + 1][i].clear();
                f[k][j].clear();
                g[k][j].clear();
                g[k + 1][i].clear();
            }
            d[k].clear_row(i);
            d[k].clear_col(j);
            if k > 0 {
                d[k - 1].clear_row(j);
            }
            if k + 1 < n {
                d[k + 1].clear_col(i);
            }
            alive[k][j] = false;
            alive[k + 1][i] = false;
        }
    }

    let kept: Vec<Vec<usize>> =
        alive.iter().map(|a| a.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect()).collect();
    let mut new_pos: Vec<Vec<usize>> = alive.iter().map(|a| vec![usize::MAX; a.len()]).collect();
    for (k, ks) in kept.iter().enumerate() {
        for (p, &i) in ks.iter().enumerate() {
            new_pos[k][i] = p;
        }
    }
    let gens: Vec<Vec<Gen>> =
        kept.iter().enumerate().map(|(k, ks)| ks.iter().map(|&i| c.gens[k][i].clone()).collect()).collect();
    let diffs: Vec<PolyMatrix> = (0..n)
        .map(|k| {
            let rows = kept.get(k + 1).map_or(0, |v| v.len());
            let entries = kept[k].iter().enumerate().flat_map(|(pj, &j)| {
                d[k].cols[j].iter().map(move |(&i, p)| (i, pj, p.clone()))
            });
            let entries: Vec<_> = entries.map(|(i, pj, p)| (new_pos[k + 1][i], pj, p)).collect();
            PolyMatrix::from_entries(rows, kept[k].len(), entries)
        })
        .collect();
    let complex = GradedComplex { theory: c.theory.clone(), h_min: c.h_min, gens, diffs };

    let (to_small, to_big) = if track {
        let mut fb = BTreeMap::new();
        let mut gb = BTreeMap::new();
        for k in 0..n {
            let h = c.h_min + k as i32;
            let big = c.gens[k].len();
            let small = kept[k].len();
            let fe = kept[k]
                .iter()
                .enumerate()
                .flat_map(|(p, &i)| f[k][i].iter().map(move |(&o, v)| (p, o, v.clone())));
            fb.insert(h, PolyMatrix::from_entries(small, big, fe));
            let ge = kept[k]
                .iter()
                .enumerate()
                .flat_map(|(p, &i)| g[k][i].iter().map(move |(&o, v)| (o, p, v.clone())));
            gb.insert(h, PolyMatrix::from_entries(big, small, ge));
        }
        (
            Some(ChainMap { h_shift: 0, q_shift: 0, blocks: fb }),
            Some(ChainMap { h_shift: 0, q_shift: 0, blocks: gb }),
        )
    } else {
        (None, None)
    };
    Simplified { complex, kept, to_small, to_big }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FrobeniusTheory;
    use crate::complex::build_complex;
    use crate::diagram::parse_pd;

    #[test]
    fn maps_are_chain_maps_and_f_g_is_identity() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let c = build_complex(&d, &FrobeniusTheory::bar_natan()).unwrap();
        let s = simplify_with_maps(&c);
        assert!(!s.complex.has_unit_entry());
        s.complex.check_d_squared().unwrap();
        let f = s.to_small.as_ref().unwrap();
        let g = s.to_big.as_ref().unwrap();
        f.check(&c, &s.complex).unwrap();
        g.check(&s.complex, &c).unwrap();
        let fg = g.then(f, &s.complex, &c, &s.complex);
        assert_eq!(fg, ChainMap::identity(&s.complex));
    }

    #[test]
    fn idempotent() {
        let d = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        let c = simplify(&build_complex(&d, &FrobeniusTheory::bar_natan()).unwrap());
        assert_eq!(simplify(&c), c);
    }
}
