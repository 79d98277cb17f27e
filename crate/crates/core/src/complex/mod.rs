//! Bigraded chain complexes of free `F2[H]`-modules.

pub mod build;
pub mod homology;
pub mod reduce;
pub mod reduced;

use serde::{Deserialize, Serialize};

use crate::algebra::{FrobeniusTheory, PolyMatrix, Poly};
use crate::error::{Error, Result};

pub use build::{build_complex, generator_q, BuildOptions, CubeComplex, DEFAULT_MAX_CROSSINGS};
pub use homology::{homology, homology_oracle, GradedModule, Homology, HomologyClass};
pub use reduce::{simplify, simplify_with_maps, Simplified};
pub use reduced::{reduced_complex, verify_splitting, Flavor, SplittingReport};

/// A basis element of a chain group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gen {
    pub q: i32,
    /// Cube vertex the generator lives on.
    pub state: u64,
    /// Bit `i` set when circle `i` of the vertex carries `X`.
    pub labels: u64,
}

/// A cochain complex `C^h -> C^{h+1}` of free modules with a q-degree per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub theory: FrobeniusTheory,
    pub h_min: i32,
    /// Generators per degree, `gens[k]` at `h = h_min + k`.
    pub gens: Vec<Vec<Gen>>,
    /// `diffs[k]` maps `gens[k]` to `gens[k + 1]` (the last one to zero).
    pub diffs: Vec<PolyMatrix>,
}

impl GradedComplex {
    /// Assembles a complex, checking dimensions.
    pub fn new(theory: FrobeniusTheory, h_min: i32, gens: Vec<Vec<Gen>>, diffs: Vec<PolyMatrix>) -> Result<Self> {
        if gens.len() != diffs.len() {
            return Err(Error::Invariant("one differential per degree expected".into()));
        }
        for k in 0..gens.len() {
            let next = gens.get(k + 1).map_or(0, |g| g.len());
            if diffs[k].cols() != gens[k].len() || diffs[k].rows() != next {
                return Err(Error::Invariant(format!("differential at index {k} has wrong shape")));
            }
        }
        Ok(GradedComplex { theory, h_min, gens, diffs })
    }

    pub fn zero(theory: FrobeniusTheory) -> Self {
        GradedComplex { theory, h_min: 0, gens: Vec::new(), diffs: Vec::new() }
    }

    pub fn h_max(&self) -> i32 {
        self.h_min + self.gens.len() as i32 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.h_min..self.h_min + self.gens.len() as i32
    }

    fn index(&self, h: i32) -> Option<usize> {
        let k = h - self.h_min;
        (k >= 0 && (k as usize) < self.gens.len()).then_some(k as usize)
    }

    pub fn gens_at(&self, h: i32) -> &[Gen] {
        self.index(h).map_or(&[], |k| &self.gens[k])
    }

    pub fn rank_at(&self, h: i32) -> usize {
        self.gens_at(h).len()
    }

    pub fn total_rank(&self) -> usize {
        self.gens.iter().map(|g| g.len()).sum()
    }

    /// `d^h : C^h -> C^{h+1}`, a zero matrix of the right shape outside the support.
    pub fn d(&self, h: i32) -> PolyMatrix {
        match self.index(h) {
            Some(k) => self.diffs[k].clone(),
            None => PolyMatrix::zeros(self.rank_at(h + 1), self.rank_at(h)),
        }
    }

    pub fn d_ref(&self, h: i32) -> Option<&PolyMatrix> {
        self.index(h).map(|k| &self.diffs[k])
    }

    /// Checks `d∘d = 0`.
    pub fn check_d_squared(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k].mul(&self.diffs[k - 1]).is_zero() {
                return Err(Error::Invariant(format!("d∘d ≠ 0 at h = {}", self.h_min + k as i32 - 1)));
            }
        }
        Ok(())
    }

    /// Checks that every nonzero entry is a monomial matching the q-degrees.
    pub fn check_homogeneous(&self) -> Result<()> {
        for (k, d) in self.diffs.iter().enumerate() {
            for (i, j, p) in d.entries() {
                let (src, dst) = (&self.gens[k][j], &self.gens[k + 1][i]);
                let ok = p.h_power().is_some_and(|e| dst.q + 2 * e as i32 == src.q);
                if !ok {
                    return Err(Error::Invariant(format!(
                        "entry {p} from q = {} to q = {} is not homogeneous",
                        src.q, dst.q
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_graded(&self) -> bool {
        self.check_homogeneous().is_ok()
    }

    /// Whether some differential entry is a unit.
    pub fn has_unit_entry(&self) -> bool {
        self.diffs.iter().any(|d| d.entries().any(|(_, _, p)| p.is_one()))
    }

    /// Substitutes a value for `H` in every differential entry.
    pub fn eval_h(&self, h: bool) -> GradedComplex {
        let theory = if h { FrobeniusTheory::localized() } else { FrobeniusTheory { e1: Poly::zero(), e2: Poly::zero() } };
        GradedComplex {
            theory,
            h_min: self.h_min,
            gens: self.gens.clone(),
            diffs: self.diffs.iter().map(|d| d.eval(h)).collect(),
        }
    }

    /// Shifts every q-degree by `dq` and every homological degree by `dh`.
    pub fn shifted(&self, dh: i32, dq: i32) -> GradedComplex {
        let mut c = self.clone();
        c.h_min += dh;
        for g in c.gens.iter_mut().flatten() {
            g.q += dq;
        }
        c
    }
}

/// Degree-preserving chain map `C -> D`, possibly shifting degrees by a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub h_shift: i32,
    pub q_shift: i32,
    /// Block from `C^h` to `D^{h + h_shift}`, keyed by the source degree.
    pub blocks: std::collections::BTreeMap<i32, PolyMatrix>,
}

impl ChainMap {
    pub fn block(&self, src: &GradedComplex, dst: &GradedComplex, h: i32) -> PolyMatrix {
        self.blocks
            .get(&h)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(dst.rank_at(h + self.h_shift), src.rank_at(h)))
    }

    pub fn identity(c: &GradedComplex) -> ChainMap {
        ChainMap {
            h_shift: 0,
            q_shift: 0,
            blocks: c.degrees().map(|h| (h, PolyMatrix::identity(c.rank_at(h)))).collect(),
        }
    }

    /// `other ∘ self`, where `self: A -> B` and `other: B -> C`.
    pub fn then(&self, other: &ChainMap, a: &GradedComplex, b: &GradedComplex, c: &GradedComplex) -> ChainMap {
        let blocks = a
            .degrees()
            .map(|h| {
                let first = self.block(a, b, h);
                let second = other.block(b, c, h + self.h_shift);
                (h, second.mul(&first))
            })
            .collect();
        ChainMap { h_shift: self.h_shift + other.h_shift, q_shift: self.q_shift + other.q_shift, blocks }
    }

    /// Checks `d_D f = f d_C` and the q-shift on every nonzero entry.
    pub fn check(&self, src: &GradedComplex, dst: &GradedComplex) -> Result<()> {
        for h in src.h_min - 1..=src.h_max() {
            let lhs = dst.d(h + self.h_shift).mul(&self.block(src, dst, h));
            let rhs = self.block(src, dst, h + 1).mul(&src.d(h));
            if lhs != rhs {
                return Err(Error::Invariant(format!("chain map does not commute at h = {h}")));
            }
        }
        if src.is_graded() && dst.is_graded() {
            for h in src.degrees() {
                for (i, j, p) in self.block(src, dst, h).entries() {
                    let from = src.gens_at(h)[j].q + self.q_shift;
                    let to = dst.gens_at(h + self.h_shift)[i].q;
                    if p.h_power().map(|e| to + 2 * e as i32) != Some(from) {
                        return Err(Error::Invariant(format!(
                            "map entry {p} at h = {h} breaks the q-shift {}",
                            self.q_shift
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
