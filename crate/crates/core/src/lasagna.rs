//! Finite stages of the cabling system for 2-handlebodies, Künneth accounting
//! for disjoint unions and transport of torsion orders through gluing.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::f2::{BitVec, Echelon};
use crate::algebra::{FrobeniusTheory, Poly, PolyMatrix};
use crate::cobordism::{induced_on_homology, movie_map, same_frame, HomologyMap, Movie};
use crate::complex::{build_complex, homology, simplify, BuildOptions, Gen, GradedComplex, GradedModule, Homology, HomologyClass};
use crate::diagram::{cable, disjoint_union, Diagram, Move, Mult};
use crate::error::{Error, Result};
use crate::torsion::TorsionOrder;

/// A pair of relative classes with the boundary assignment of each link component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DoubleClass {
    /// Handle coefficients of the two classes.
    pub alpha_minus: Vec<i64>,
    pub alpha_plus: Vec<i64>,
    /// `ε_{i,+}` per boundary component; `ε_{i,-}` is its complement.
    pub eps_plus: Vec<bool>,
}

impl DoubleClass {
    pub fn eps_minus(&self) -> Vec<bool> {
        self.eps_plus.iter().map(|b| !b).collect()
    }
}

/// Double classes with handle coefficients in `[-bound, bound]`.
///
/// A 2-handlebody has `H_1 = 0` and `H_2` free on the handles, so every
/// boundary assignment is realized and the handle parts range over the whole box.
pub fn enumerate_double_classes(kirby: &Diagram, boundary: &Diagram, bound: i64) -> Vec<DoubleClass> {
    let n = kirby.n_components();
    let l = boundary.n_components();
    let side = (2 * bound + 1) as usize;
    let boxes: Vec<Vec<i64>> = (0..side.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let c = (k % side) as i64 - bound;
                    k /= side;
                    c
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity((boxes.len() * boxes.len()) << l);
    for eps in 0..1u64 << l {
        let eps_plus: Vec<bool> = (0..l).map(|i| eps >> i & 1 == 1).collect();
        for am in &boxes {
            for ap in &boxes {
                out.push(DoubleClass { alpha_minus: am.clone(), alpha_plus: ap.clone(), eps_plus: eps_plus.clone() });
            }
        }
    }
    out
}

/// Tensor product of complexes, generators ordered by left degree, then left index, then right index.
pub fn tensor_complex(a: &GradedComplex, b: &GradedComplex) -> GradedComplex {
    let layout = TensorLayout::new(a, b);
    let mut gens = Vec::new();
    let mut diffs = Vec::new();
    for h in layout.h_min..=layout.h_max {
        let mut g = Vec::new();
        for h1 in a.degrees() {
            let h2 = h - h1;
            for x in a.gens_at(h1) {
                for y in b.gens_at(h2) {
                    g.push(Gen { q: x.q + y.q, state: x.state | y.state << 32, labels: x.labels | y.labels << 32 });
                }
            }
        }
        gens.push(g);
    }
    for h in layout.h_min..=layout.h_max {
        let mut entries = Vec::new();
        for h1 in a.degrees() {
            let h2 = h - h1;
            let (na, nb) = (a.rank_at(h1), b.rank_at(h2));
            if na == 0 || nb == 0 {
                continue;
            }
            let da = a.d(h1);
            let db = b.d(h2);
            for i in 0..na {
                for j in 0..nb {
                    let src = layout.index(h1, h2, i, j);
                    for (k, p) in da.column(i) {
                        entries.push((layout.index(h1 + 1, h2, *k, j), src, p.clone()));
                    }
                    for (k, p) in db.column(j) {
                        entries.push((layout.index(h1, h2 + 1, i, *k), src, p.clone()));
                    }
                }
            }
        }
        let rows = if h < layout.h_max { gens[(h + 1 - layout.h_min) as usize].len() } else { 0 };
        diffs.push(PolyMatrix::from_entries(rows, gens[(h - layout.h_min) as usize].len(), entries));
    }
    GradedComplex::new(a.theory.clone(), layout.h_min, gens, diffs).expect("tensor complex has consistent shapes")
}

struct TensorLayout {
    h_min: i32,
    h_max: i32,
    offsets: HashMap<(i32, i32), usize>,
    right_rank: HashMap<i32, usize>,
}

impl TensorLayout {
    fn new(a: &GradedComplex, b: &GradedComplex) -> Self {
        let h_min = a.h_min + b.h_min;
        let h_max = (a.h_max() + b.h_max()).max(h_min);
        let mut offsets = HashMap::new();
        for h in h_min..=h_max {
            let mut off = 0;
            for h1 in a.degrees() {
                offsets.insert((h1, h - h1), off);
                off += a.rank_at(h1) * b.rank_at(h - h1);
            }
        }
        let right_rank = b.degrees().map(|h| (h, b.rank_at(h))).collect();
        TensorLayout { h_min, h_max, offsets, right_rank }
    }

    fn index(&self, h1: i32, h2: i32, i: usize, j: usize) -> usize {
        self.offsets[&(h1, h2)] + i * self.right_rank.get(&h2).copied().unwrap_or(0) + j
    }
}

/// Per-bidegree comparison of a joint homology with the Künneth prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethReport {
    pub tensor: GradedModule,
    pub tor: GradedModule,
    pub joint: GradedModule,
    /// Joint homology equals tensor plus Tor correction in every bidegree.
    pub balanced: bool,
    /// `μ` is an isomorphism: every pairwise Tor term vanishes.
    pub iso: bool,
    pub mismatches: Vec<(i32, i32)>,
}

pub fn kunneth_mu(m1: &GradedModule, m2: &GradedModule, joint: &GradedModule) -> Result<KunnethReport> {
    let tensor = m1.tensor(m2);
    let tor = m1.tor1(m2);
    let predicted = tensor.direct_sum(&tor);
    let mut keys: Vec<(i32, i32)> = predicted.parts.keys().chain(joint.parts.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let mismatches: Vec<(i32, i32)> = keys.into_iter().filter(|k| predicted.get(k.0, k.1) != joint.get(k.0, k.1)).collect();
    let report = KunnethReport {
        balanced: mismatches.is_empty(),
        iso: tor.parts.is_empty(),
        tensor,
        tor,
        joint: joint.clone(),
        mismatches,
    };
    if !report.balanced {
        return Err(Error::Invariant(format!("Künneth accounting fails at bidegrees {:?}", report.mismatches)));
    }
    Ok(report)
}

/// Two complexes and their tensor product, with homologies, for moving classes across `μ`.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub left: GradedComplex,
    pub right: GradedComplex,
    pub joint: GradedComplex,
    pub left_hom: Homology,
    pub right_hom: Homology,
    pub joint_hom: Homology,
}

impl Gluing {
    pub fn new(left: GradedComplex, right: GradedComplex) -> Self {
        let joint = tensor_complex(&left, &right);
        let left_hom = homology(&left);
        let right_hom = homology(&right);
        let joint_hom = homology(&joint);
        Gluing { left, right, joint, left_hom, right_hom, joint_hom }
    }

    /// Gluing of two diagrams' simplified complexes.
    pub fn of_diagrams(d1: &Diagram, d2: &Diagram, theory: &FrobeniusTheory) -> Result<Self> {
        Ok(Gluing::new(simplify(&build_complex(d1, theory)?), simplify(&build_complex(d2, theory)?)))
    }

    /// Whether all pairwise Tor terms between the two homologies vanish.
    pub fn gate(&self) -> bool {
        self.left_hom.module().tor1(&self.right_hom.module()).parts.is_empty()
    }

    /// `μ(v ⊗ w)`: the class of the product of representatives.
    pub fn mu(&self, v: &HomologyClass, w: &HomologyClass) -> Result<HomologyClass> {
        let layout = TensorLayout::new(&self.left, &self.right);
        let zv = self.left_hom.representative(v);
        let zw = self.right_hom.representative(w);
        let h = v.h + w.h;
        let mut z = vec![Poly::zero(); self.joint.rank_at(h)];
        for (i, a) in zv.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in zw.iter().enumerate() {
                if !b.is_zero() {
                    z[layout.index(v.h, w.h, i, j)] += &(a * b);
                }
            }
        }
        self.joint_hom.class_of(h, &z)
    }
}

/// Torsion order of `v ⊗ w` in the tensor product of the two homologies.
pub fn tensor_order(left: &Homology, v: &HomologyClass, right: &Homology, w: &HomologyClass) -> TorsionOrder {
    let v = left.normalize(v);
    let w = right.normalize(w);
    let (gv, gw) = (left.gens_at(v.h), right.gens_at(w.h));
    let mut k = 0;
    for (c, g) in v.coords.iter().zip(gv) {
        if c.is_zero() {
            continue;
        }
        for (d, f) in w.coords.iter().zip(gw) {
            if d.is_zero() {
                continue;
            }
            let order = match (&g.order, &f.order) {
                (None, None) => None,
                (Some(o), None) | (None, Some(o)) => Some(o.clone()),
                (Some(a), Some(b)) => Some(Poly::gcd(a, b)),
            };
            let e = c * d;
            let Some(o) = order else {
                return TorsionOrder::Infinite;
            };
            let e = e.div_rem(&o).1;
            if e.is_zero() {
                continue;
            }
            let a = o.valuation().unwrap_or(0);
            if !o.shr(a).divides(&e) {
                return TorsionOrder::Infinite;
            }
            k = k.max(a.saturating_sub(e.valuation().unwrap_or(0)));
        }
    }
    TorsionOrder::Finite(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportReport {
    pub transported: TorsionOrder,
    pub predicted: TorsionOrder,
    pub agree: bool,
}

/// Torsion order of `μ(delta ⊗ s)` against the tensor prediction; refuses when Tor is present.
pub fn glue_torsion_transport(g: &Gluing, delta: &HomologyClass, s: &HomologyClass) -> Result<TransportReport> {
    if !g.gate() {
        let tor = g.left_hom.module().tor1(&g.right_hom.module());
        return Err(Error::TorObstruction(format!(
            "Tor_1 of the two homologies is nonzero in {} bidegrees, so μ is not an isomorphism",
            tor.parts.len()
        )));
    }
    let image = g.mu(delta, s)?;
    let transported = crate::torsion::torsion_order(&g.joint_hom, &image).order;
    let predicted = tensor_order(&g.left_hom, delta, &g.right_hom, s);
    Ok(TransportReport { transported, predicted, agree: transported == predicted })
}

/// One stage of a directed system: a homology with a q-shift.
#[derive(Clone, Debug)]
pub struct Stage {
    pub r: usize,
    pub diagram: Option<Diagram>,
    pub complex: GradedComplex,
    pub homology: Homology,
    pub q_shift: i32,
}

impl Stage {
    pub fn module(&self) -> GradedModule {
        self.homology.module().shifted(0, self.q_shift)
    }
}

/// Stages and the maps between consecutive ones.
#[derive(Clone, Debug)]
pub struct DirectedSystem {
    pub alpha: Vec<i64>,
    pub stages: Vec<Stage>,
    /// Map from stage `r` to stage `r + 1`, when one could be built.
    pub maps: Vec<Option<HomologyMap>>,
    pub notes: Vec<String>,
}

impl DirectedSystem {
    /// Net q-degree of map `r` once the stage shifts are applied.
    pub fn net_degree(&self, r: usize) -> Option<i32> {
        let m = self.maps[r].as_ref()?;
        Some(m.q_shift + self.stages[r + 1].q_shift - self.stages[r].q_shift)
    }
}

/// Multiplicities `(r + α⁺, r + α⁻)` per handle.
pub fn stage_mults(alpha: &[i64], r: usize) -> Vec<Mult> {
    alpha.iter().map(|&a| Mult::new(r + a.max(0) as usize, r + (-a).max(0) as usize)).collect()
}

/// The q-shift of stage `r`: `{2r - |α|}` per handle, in the opposite q convention.
pub fn stage_shift(alpha: &[i64], r: usize) -> i32 {
    let a: i64 = alpha.iter().map(|x| x.abs()).sum();
    -(2 * (r * alpha.len()) as i32 - a as i32)
}

/// The cabling system of a framed link with a boundary link drawn beside it.
///
/// Maps add one antiparallel pair of circles per handle (birth, split, dot);
/// this needs every handle to be a crossingless 0-framed circle. For other
/// handles only the stages are computed.
pub fn cable_system(
    kirby: &Diagram,
    boundary: &Diagram,
    alpha: &[i64],
    r_max: usize,
    opts: &BuildOptions,
) -> Result<DirectedSystem> {
    if alpha.len() != kirby.n_components() {
        return Err(Error::Invariant(format!(
            "class vector has {} entries for {} handles",
            alpha.len(),
            kirby.n_components()
        )));
    }
    let theory = FrobeniusTheory::bar_natan();
    let mut stages = Vec::new();
    for r in 0..=r_max {
        let c = cable(kirby, &stage_mults(alpha, r))?;
        let d = disjoint_union(boundary, &c);
        let complex = simplify(&crate::complex::build::build_cube(&d, &theory, opts)?.complex);
        let homology = homology(&complex);
        stages.push(Stage { r, diagram: Some(d), complex, homology, q_shift: stage_shift(alpha, r) });
    }
    let mut notes = Vec::new();
    let flat = kirby.n_crossings() == 0 && kirby.framings.iter().all(|&f| f == 0);
    if !flat {
        notes.push(
            "annulus maps are only built for crossingless 0-framed handles; stages are reported without maps".into(),
        );
    }
    let mut maps = Vec::new();
    for r in 0..r_max {
        if !flat {
            maps.push(None);
            continue;
        }
        let start = stages[r].diagram.clone().unwrap();
        let mut moves = Vec::new();
        let mut top = start.max_label();
        for _ in 0..kirby.n_components() {
            moves.extend([
                Move::Birth,
                Move::Saddle { a: top + 1, b: top + 1 },
                Move::Dot { strand: top + 1 },
            ]);
            top += 2;
        }
        let movie = Movie::new(start, moves);
        let end = movie.end_diagram()?;
        if !same_frame(&end, stages[r + 1].diagram.as_ref().unwrap()) {
            notes.push(format!("annulus movie from stage {r} does not end at stage {}", r + 1));
            maps.push(None);
            continue;
        }
        let mm = movie_map(&movie, &theory, opts)?;
        if mm.source != stages[r].complex || mm.target != stages[r + 1].complex {
            return Err(Error::Invariant(format!("stage complexes at r = {r} are not reproducible")));
        }
        let f = induced_on_homology(&mm.map, &mm.source, &stages[r].homology, &mm.target, &stages[r + 1].homology)?;
        maps.push(Some(f));
    }
    Ok(DirectedSystem { alpha: alpha.to_vec(), stages, maps, notes })
}

/// Ranks of the images of all stages in the last one, per bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub h: i32,
    pub q: i32,
    /// `F2`-dimension of the last stage in this bidegree.
    pub dim: usize,
    /// Rank of the image of stage `r`, for `r` up to the last stage.
    pub image_ranks: Vec<usize>,
    /// The last map is an isomorphism in this bidegree.
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub label: String,
    pub r_max: usize,
    pub rows: Vec<TruncationRow>,
}

impl TruncationReport {
    pub fn all_stable(&self) -> bool {
        self.rows.iter().all(|r| r.stable)
    }
}

/// `F2` basis of one bidegree of a shifted homology: pairs `(generator, k)` for `H^k g`.
fn f2_basis(stage: &Stage, h: i32, q: i32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, g) in stage.homology.gens_at(h).iter().enumerate() {
        let d = q - g.q - stage.q_shift;
        if d < 0 || d % 2 != 0 {
            continue;
        }
        let k = (d / 2) as usize;
        let alive = match &g.order {
            None => true,
            Some(o) => o.h_power().is_none_or(|a| k < a),
        };
        if alive {
            out.push((i, k));
        }
    }
    out
}

/// Bidegrees of a stage whose `F2` part is nonzero, up to q-degree `q_max`.
fn bidegrees(stage: &Stage, q_max: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for (&h, deg) in &stage.homology.degrees {
        for g in &deg.gens {
            let mut q = g.q + stage.q_shift;
            let mut k = 0;
            while q <= q_max {
                if g.order.as_ref().and_then(|o| o.h_power()).is_some_and(|a| k >= a) {
                    break;
                }
                out.push((h, q));
                q += 2;
                k += 1;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Rank at bidegree `(h, q)` of the target of `f: src -> dst` restricted to `src` at `(h, q - δ)`.
fn rank_at_bidegree(f: &HomologyMap, src: &Stage, dst: &Stage, h: i32, q: i32) -> usize {
    let delta = f.q_shift + dst.q_shift - src.q_shift;
    let target = f2_basis(dst, h + f.h_shift, q);
    let pos: HashMap<(usize, usize), usize> = target.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let gens = dst.homology.gens_at(h + f.h_shift);
    let mut e = Echelon::new();
    let Some(block) = f.blocks.get(&h) else { return 0 };
    for (j, k) in f2_basis(src, h, q - delta) {
        let mut v = BitVec::new();
        for (i, p) in block.column(j) {
            let mut c = p.shl(k);
            if let Some(o) = &gens[*i].order {
                c = c.div_rem(o).1;
            }
            for m in c.exponents() {
                if let Some(&t) = pos.get(&(*i, m)) {
                    v.flip(t);
                }
            }
        }
        e.insert(&v);
    }
    e.rank()
}

/// Images of every stage in the last one, by iterated composition.
///
/// This is a truncation of an unsymmetrized system, not its colimit: the
/// stability flag only says that the last map is bijective in that bidegree.
pub fn colimit_truncation(sys: &DirectedSystem) -> Result<TruncationReport> {
    if sys.stages.len() < 2 {
        return Err(Error::Invariant("a truncation needs at least two stages".into()));
    }
    let maps: Vec<&HomologyMap> = sys
        .maps
        .iter()
        .enumerate()
        .map(|(r, m)| m.as_ref().ok_or_else(|| Error::Unsupported(format!("no map from stage {r}"))))
        .collect::<Result<_>>()?;
    let last = sys.stages.len() - 1;
    // Composite from stage r to the last stage.
    let mut composites: Vec<HomologyMap> = vec![HomologyMap::identity(&sys.stages[last].homology); last + 1];
    for r in (0..last).rev() {
        composites[r] = maps[r].then(&composites[r + 1], &sys.stages[last].homology);
    }
    let q_max = sys
        .stages
        .iter()
        .flat_map(|s| s.homology.degrees.values().flat_map(move |d| d.gens.iter().map(move |g| g.q + s.q_shift)))
        .max()
        .unwrap_or(0);
    let top = &sys.stages[last];
    let mut rows = Vec::new();
    for (h, q) in bidegrees(top, q_max) {
        let dim = f2_basis(top, h, q).len();
        let image_ranks = (0..=last).map(|r| rank_at_bidegree(&composites[r], &sys.stages[r], top, h, q)).collect();
        let prev = &sys.stages[last - 1];
        let delta = maps[last - 1].q_shift + top.q_shift - prev.q_shift;
        let prev_dim = f2_basis(prev, h - maps[last - 1].h_shift, q - delta).len();
        let stable = prev_dim == dim && rank_at_bidegree(maps[last - 1], prev, top, h - maps[last - 1].h_shift, q) == dim;
        rows.push(TruncationRow { h, q, dim, image_ranks, stable });
    }
    Ok(TruncationReport { label: "unsymmetrized truncation".into(), r_max: last, rows })
}

/// Stages given directly as complexes, with maps between their homologies.
pub fn system_from_parts(stages: Vec<(GradedComplex, i32)>, maps: Vec<HomologyMap>) -> DirectedSystem {
    let stages = stages
        .into_iter()
        .enumerate()
        .map(|(r, (complex, q_shift))| {
            let homology = homology(&complex);
            Stage { r, diagram: None, complex, homology, q_shift }
        })
        .collect();
    DirectedSystem { alpha: Vec::new(), stages, maps: maps.into_iter().map(Some).collect(), notes: Vec::new() }
}

/// Free rank and torsion summary per stage, as JSON-friendly data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemReport {
    pub label: String,
    pub alpha: Vec<i64>,
    pub stages: Vec<StageReport>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageReport {
    pub r: usize,
    pub q_shift: i32,
    pub crossings: usize,
    pub module: GradedModule,
    /// Map to the next stage, per source degree, with polynomial entries as text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<i32, Vec<Vec<String>>>>,
}

impl DirectedSystem {
    pub fn report(&self) -> SystemReport {
        let stages = self
            .stages
            .iter()
            .enumerate()
            .map(|(r, s)| StageReport {
                r: s.r,
                q_shift: s.q_shift,
                crossings: s.diagram.as_ref().map_or(0, |d| d.n_crossings()),
                module: s.module(),
                map: self.maps.get(r).and_then(|m| m.as_ref()).map(|m| {
                    m.blocks
                        .iter()
                        .map(|(&h, b)| {
                            let rows = (0..b.rows()).map(|i| (0..b.cols()).map(|j| b.get(i, j).to_text()).collect()).collect();
                            (h, rows)
                        })
                        .collect()
                }),
            })
            .collect();
        SystemReport {
            label: "unsymmetrized truncation".into(),
            alpha: self.alpha.clone(),
            stages,
            notes: self.notes.clone(),
            truncation: colimit_truncation(self).ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::torsion::synthetic_complex;

    #[test]
    fn double_class_counts() {
        let knot = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(enumerate_double_classes(&Diagram::empty(), &knot, 2).len(), 2);
        let handle = Diagram::unlink(1).with_framings(vec![0]).unwrap();
        assert_eq!(enumerate_double_classes(&handle, &Diagram::empty(), 2).len(), 25);
        let c = &enumerate_double_classes(&handle, &knot, 1)[0];
        assert_eq!(c.eps_minus(), vec![true]);
    }

    #[test]
    fn tensor_of_synthetic_modules() {
        let a = synthetic_complex(1, &[2]);
        let b = synthetic_complex(0, &[1]);
        let t = tensor_complex(&a, &b);
        t.check_d_squared().unwrap();
        let r = kunneth_mu(&homology(&a).module(), &homology(&b).module(), &homology(&t).module()).unwrap();
        assert!(r.balanced);
        assert!(!r.iso);
    }

    #[test]
    fn transport_through_free_factor() {
        let g = Gluing::new(synthetic_complex(0, &[2]), synthetic_complex(1, &[]));
        assert!(g.gate());
        let r = glue_torsion_transport(&g, &g.left_hom.generator(0, 0), &g.right_hom.generator(0, 0)).unwrap();
        assert_eq!(r.transported, TorsionOrder::Finite(2));
        assert!(r.agree);
        let g = Gluing::new(synthetic_complex(0, &[2]), synthetic_complex(0, &[1]));
        let err = glue_torsion_transport(&g, &g.left_hom.generator(0, 0), &g.right_hom.generator(0, 0));
        assert!(matches!(err, Err(Error::TorObstruction(_))));
    }

    #[test]
    fn constant_system_is_stable() {
        let c = synthetic_complex(1, &[2]);
        let hom = homology(&c);
        let sys = system_from_parts(vec![(c.clone(), 0), (c.clone(), 0), (c, 0)], vec![HomologyMap::identity(&hom); 2]);
        let t = colimit_truncation(&sys).unwrap();
        assert!(t.all_stable());
        assert!(t.rows.iter().all(|r| r.image_ranks.iter().all(|&k| k == r.dim)));
    }

    #[test]
    fn multiplication_by_h_kills_torsion() {
        let c = synthetic_complex(0, &[2]);
        let hom = homology(&c);
        let h = HomologyMap::scalar(&hom, &Poly::h());
        let stages = (0..4).map(|r| (c.clone(), -2 * r)).collect();
        let sys = system_from_parts(stages, vec![h; 3]);
        let t = colimit_truncation(&sys).unwrap();
        for row in &t.rows {
            // Stage r reaches the last stage through H^(3 - r), which kills R/H^2 unless r >= 2.
            assert_eq!(row.image_ranks[0], 0);
            assert_eq!(row.image_ranks[1], 0);
        }
        assert!(t.rows.iter().any(|r| r.image_ranks[2] > 0));
    }
}

#[cfg(test)]
mod system_tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn opts() -> BuildOptions {
        BuildOptions::default()
    }

    #[test]
    fn no_handles_is_the_boundary() {
        let l = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let sys = cable_system(&Diagram::empty(), &l, &[], 2, &opts()).unwrap();
        let bn = homology(&simplify(&build_complex(&l, &FrobeniusTheory::bar_natan()).unwrap())).module();
        for s in &sys.stages {
            assert_eq!(s.module(), bn);
        }
        assert!(colimit_truncation(&sys).unwrap().all_stable());
    }

    #[test]
    fn zero_framed_unknot_stages() {
        let k = Diagram::unlink(1).with_framings(vec![0]).unwrap();
        let sys = cable_system(&k, &Diagram::empty(), &[0], 2, &opts()).unwrap();
        let m0 = sys.stages[0].module();
        assert_eq!(m0.total_free(), 1);
        let m1 = sys.stages[1].module();
        assert_eq!(m1.total_free(), 4);
        assert!(!m1.has_torsion());
        for r in 0..2 {
            let f = sys.maps[r].as_ref().unwrap();
            assert_eq!(sys.net_degree(r), Some(0));
            assert!(f.blocks.values().any(|b| b.entries().next().is_some()));
            // Linear over F2[H]: f(Hv) = H f(v).
            let src = &sys.stages[r].homology;
            let dst = &sys.stages[r + 1].homology;
            for j in 0..src.gens_at(0).len() {
                let v = src.generator(0, j);
                let lhs = f.apply(&src.scale(&Poly::h(), &v), dst);
                let rhs = dst.scale(&Poly::h(), &f.apply(&v, dst));
                assert_eq!(dst.normalize(&lhs), dst.normalize(&rhs));
            }
        }
        let t = colimit_truncation(&sys).unwrap();
        assert_eq!(t.label, "unsymmetrized truncation");
        assert!(!t.rows.is_empty());
    }

    #[test]
    fn twisted_handle_has_stages_only() {
        let k = Diagram::unlink(1).with_framings(vec![-1]).unwrap();
        let sys = cable_system(&k, &Diagram::empty(), &[1], 1, &opts()).unwrap();
        assert_eq!(sys.stages[0].q_shift, 1);
        assert!(sys.maps.iter().all(|m| m.is_none()));
        assert!(!sys.notes.is_empty());
    }
}
