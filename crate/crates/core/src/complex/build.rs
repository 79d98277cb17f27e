//! The cube of resolutions.

use std::collections::HashMap;

use crate::algebra::{FrobeniusTheory, PolyMatrix, Poly};
use crate::diagram::resolve::{resolve, state_bit, State, StateCircles};
use crate::diagram::Diagram;
use crate::error::{Error, Result};

use super::{Gen, GradedComplex};

pub const DEFAULT_MAX_CROSSINGS: usize = 14;

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub max_crossings: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_crossings: DEFAULT_MAX_CROSSINGS }
    }
}

/// The cube complex together with the resolution data of each vertex.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub complex: GradedComplex,
    pub vertices: HashMap<State, StateCircles>,
    /// Position of a generator: `(h, index)` keyed by `(state, labels)`.
    pub index: HashMap<(State, u64), usize>,
}

impl CubeComplex {
    pub fn circles(&self, state: State) -> &StateCircles {
        &self.vertices[&state]
    }

    pub fn position(&self, state: State, labels: u64) -> usize {
        self.index[&(state, labels)]
    }
}

/// q-degree of the generator with the given labels on a vertex with `circles` circles.
///
/// `X` sits two above `1`; the unknot generators land at `-1` and `+1`.
pub fn generator_q(d: &Diagram, state: State, circles: usize, labels: u64) -> i32 {
    let xs = labels.count_ones() as i32;
    let ones = circles as i32 - xs;
    xs - ones - state.count_ones() as i32 - d.n_plus() as i32 + 2 * d.n_minus() as i32
}

/// Result of an elementary edge or cobordism on the labels of the touched circles.
pub(crate) type LabelImage = Vec<(u64, Poly)>;

/// Applies the structure map for an edge whose source circles `src` become the
/// target circles `dst` (merge: two to one, split: one to two).
pub(crate) fn edge_image(theory: &FrobeniusTheory, src_bits: &[u8], n_dst: usize) -> Vec<(Vec<u8>, Poly)> {
    let basis = |b: u8| if b == 0 { [Poly::one(), Poly::zero()] } else { [Poly::zero(), Poly::one()] };
    let mut out = Vec::new();
    match (src_bits.len(), n_dst) {
        (2, 1) => {
            let e = theory.mul(&basis(src_bits[0]), &basis(src_bits[1]));
            for (b, c) in e.into_iter().enumerate() {
                if !c.is_zero() {
                    out.push((vec![b as u8], c));
                }
            }
        }
        (1, 2) => {
            let t = theory.comul_basis(src_bits[0] as usize);
            for (i, row) in t.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        out.push((vec![i as u8, j as u8], c.clone()));
                    }
                }
            }
        }
        _ => unreachable!("edge maps are merges or splits"),
    }
    out
}

/// Builds the cube complex; homological degree `|s| - n_-`.
pub fn build_complex(d: &Diagram, theory: &FrobeniusTheory) -> Result<GradedComplex> {
    Ok(build_cube(d, theory, &BuildOptions::default())?.complex)
}

pub fn build_cube(d: &Diagram, theory: &FrobeniusTheory, opts: &BuildOptions) -> Result<CubeComplex> {
    let n = d.n_crossings();
    if n > opts.max_crossings || n > 40 {
        return Err(Error::TooLarge { crossings: n, limit: opts.max_crossings.min(40) });
    }
    let mut by_weight: Vec<Vec<State>> = vec![Vec::new(); n + 1];
    for s in 0..(1u64 << n) {
        by_weight[s.count_ones() as usize].push(s);
    }
    let mut vertices = HashMap::new();
    let mut index = HashMap::new();
    let mut gens: Vec<Vec<Gen>> = vec![Vec::new(); n + 1];
    for (r, states) in by_weight.iter().enumerate() {
        for &s in states {
            let sc = resolve(d, s);
            let k = sc.len();
            for labels in 0..(1u64 << k) {
                index.insert((s, labels), gens[r].len());
                gens[r].push(Gen { q: generator_q(d, s, k, labels), state: s, labels });
            }
            vertices.insert(s, sc);
        }
    }

    let mut diffs = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let rows = gens.get(r + 1).map_or(0, |g| g.len());
        let mut entries = Vec::new();
        for &s in &by_weight[r] {
            let src = &vertices[&s];
            for x in 0..n {
                if state_bit(s, x) == 1 {
                    continue;
                }
                let t = s | (1 << x);
                let dst = &vertices[&t];
                let edge = EdgeGeometry::new(d, x, src, dst);
                for labels in 0..(1u64 << src.len()) {
                    let j = index[&(s, labels)];
                    for (out, c) in edge.apply(theory, labels) {
                        entries.push((index[&(t, out)], j, c));
                    }
                }
            }
        }
        diffs.push(PolyMatrix::from_entries(rows, gens[r].len(), entries));
    }
    let complex = GradedComplex::new(theory.clone(), -(d.n_minus() as i32), gens, diffs)?;
    Ok(CubeComplex { complex, vertices, index })
}

/// How circles correspond across a cube edge that changes crossing `x`.
pub(crate) struct EdgeGeometry {
    /// Target circle of each untouched source circle (`None` if touched).
    carry: Vec<Option<usize>>,
    src_touched: Vec<usize>,
    dst_touched: Vec<usize>,
}

impl EdgeGeometry {
    pub(crate) fn new(d: &Diagram, x: usize, src: &StateCircles, dst: &StateCircles) -> Self {
        let strands: Vec<usize> = d.crossings[x].iter().map(|&l| d.index_of(l).unwrap()).collect();
        let mut src_touched: Vec<usize> = strands.iter().map(|&s| src.circle_of[s]).collect();
        src_touched.sort_unstable();
        src_touched.dedup();
        let mut dst_touched: Vec<usize> = strands.iter().map(|&s| dst.circle_of[s]).collect();
        dst_touched.sort_unstable();
        dst_touched.dedup();
        let carry = (0..src.len())
            .map(|c| (!src_touched.contains(&c)).then(|| dst.circle_of[src.circles[c][0]]))
            .collect();
        EdgeGeometry { carry, src_touched, dst_touched }
    }

    pub(crate) fn apply(&self, theory: &FrobeniusTheory, labels: u64) -> LabelImage {
        let mut base = 0u64;
        for (c, t) in self.carry.iter().enumerate() {
            if let Some(t) = t {
                if labels >> c & 1 == 1 {
                    base |= 1 << t;
                }
            }
        }
        let bits: Vec<u8> = self.src_touched.iter().map(|&c| (labels >> c & 1) as u8).collect();
        edge_image(theory, &bits, self.dst_touched.len())
            .into_iter()
            .map(|(out, c)| {
                let mut l = base;
                for (k, &b) in out.iter().enumerate() {
                    if b == 1 {
                        l |= 1 << self.dst_touched[k];
                    }
                }
                (l, c)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn unknot_complex() {
        let c = build_complex(&parse_pd("components: 1").unwrap(), &FrobeniusTheory::bar_natan()).unwrap();
        assert_eq!(c.total_rank(), 2);
        let qs: Vec<i32> = c.gens[0].iter().map(|g| g.q).collect();
        assert_eq!(qs, vec![-1, 1]);
        assert!(c.diffs[0].is_zero());
    }

    #[test]
    fn hopf_cube_ranks() {
        let c = build_complex(&parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap(), &FrobeniusTheory::bar_natan()).unwrap();
        let ranks: Vec<usize> = c.gens.iter().map(|g| g.len()).collect();
        assert_eq!(ranks, vec![4, 4, 4]);
        c.check_d_squared().unwrap();
        c.check_homogeneous().unwrap();
    }

    #[test]
    fn trefoil_d_squared() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        for t in [FrobeniusTheory::bar_natan(), FrobeniusTheory::localized()] {
            let c = build_complex(&d, &t).unwrap();
            assert_eq!(c.gens.iter().map(|g| g.len()).sum::<usize>(), 4 + 3 * 2 + 3 * 4 + 8);
            c.check_d_squared().unwrap();
        }
    }

    #[test]
    fn resource_guard() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let err = build_cube(&d, &FrobeniusTheory::bar_natan(), &BuildOptions { max_crossings: 2 }).unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }
}
