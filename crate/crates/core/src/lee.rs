//! The theory at `H = 1`: canonical generators from orientations and their
//! behaviour under cobordisms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::f2::{apply_at, columns_at, rank_at, BitVec, Echelon};
use crate::algebra::FrobeniusTheory;
use crate::cobordism::{movie_map, Movie};
use crate::complex::{build_complex, simplify, BuildOptions, CubeComplex, GradedComplex};
use crate::diagram::faces::corner;
use crate::diagram::moves::{pinch_reverses, Move};
use crate::diagram::ops::{linking_matrix, sublink_linking_number};
use crate::diagram::resolve::{resolve, State, StateCircles};
use crate::diagram::{Diagram, Label, PlanarFaces, OUTER_FACE};
use crate::error::{Error, Result};
use crate::util::UnionFind;

/// One bit per component: set when the component runs against the reference orientation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Orientation {
    pub flips: Vec<bool>,
}

impl Orientation {
    pub fn reference(n: usize) -> Self {
        Orientation { flips: vec![false; n] }
    }

    /// All `2^n` orientations, the reference one first.
    pub fn all(n: usize) -> Vec<Orientation> {
        (0..1u64 << n).map(|m| Orientation { flips: (0..n).map(|i| m >> i & 1 == 1).collect() }).collect()
    }

    pub fn reversed(&self) -> Self {
        Orientation { flips: self.flips.iter().map(|b| !b).collect() }
    }

    /// The partition of components into those kept and those reversed.
    pub fn partition(&self) -> (Vec<usize>, Vec<usize>) {
        let (a, b): (Vec<_>, Vec<_>) = (0..self.flips.len()).partition(|&i| !self.flips[i]);
        (a, b)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.flips {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let flips = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("orientation must be a bit string, got {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(Orientation { flips })
    }
}

impl Serialize for Orientation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Orientation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Substitutes `H = 1`.
pub fn localize(c: &GradedComplex) -> GradedComplex {
    c.eval_h(true)
}

/// `F2` Betti numbers of a complex at `H = 1`, per homological degree.
pub fn localized_betti(c: &GradedComplex) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for h in c.degrees() {
        let dim = c.rank_at(h) - rank_at(&c.d(h), true) - rank_at(&c.d(h - 1), true);
        if dim > 0 {
            out.insert(h, dim);
        }
    }
    out
}

/// Betti numbers of the link at `H = 1`.
pub fn localized_homology(d: &Diagram) -> Result<BTreeMap<i32, usize>> {
    let c = build_complex(d, &FrobeniusTheory::bar_natan())?;
    Ok(localized_betti(&simplify(&c)))
}

/// Circle label in the canonical generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Idempotent {
    /// `X + 1`.
    A,
    /// `X`.
    B,
}

/// The oriented resolution of an orientation and its a/b labelling.
#[derive(Clone, Debug)]
pub struct Coloring {
    pub state: State,
    pub circles: StateCircles,
    pub labels: Vec<Idempotent>,
}

/// State of the oriented resolution for orientation `o`.
pub fn oriented_state_for(d: &Diagram, o: &Orientation) -> State {
    let mut s = 0;
    for (x, t) in d.crossings.iter().enumerate() {
        let under = d.component_of[d.index_of(t[0]).unwrap()];
        let over = d.component_of[d.index_of(t[1]).unwrap()];
        let flip = o.flips[under] != o.flips[over];
        let positive = (d.signs[x] > 0) != flip;
        if !positive {
            s |= 1 << x;
        }
    }
    s
}

/// Labels each circle of the oriented resolution: a circle gets `a` when the
/// region on its left lies at odd depth, counting circles crossed from the
/// unbounded region. A lone counterclockwise circle gets `a`.
pub fn coloring(d: &Diagram, o: &Orientation) -> Result<Coloring> {
    if o.flips.len() != d.n_components() {
        return Err(Error::Invariant(format!(
            "orientation has {} bits for {} components",
            o.flips.len(),
            d.n_components()
        )));
    }
    let state = oriented_state_for(d, o);
    let circles = resolve(d, state);
    let pf = PlanarFaces::new(d);
    let mut regions = UnionFind::new(pf.n_faces);
    for x in 0..d.n_crossings() {
        let (p, q) = if state >> x & 1 == 0 { (1, 3) } else { (0, 2) };
        regions.union(pf.face_of_corner[corner(x, p)], pf.face_of_corner[corner(x, q)]);
    }
    let sides: Vec<(usize, usize)> = circles
        .circles
        .iter()
        .map(|c| {
            let s = c[0];
            let flipped = o.flips[d.component_of[s]];
            let left = regions.find(pf.side(d, s, !flipped));
            let right = regions.find(pf.side(d, s, flipped));
            (left, right)
        })
        .collect();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(l, r) in &sides {
        adj.entry(l).or_default().push(r);
        adj.entry(r).or_default().push(l);
    }
    let outer = regions.find(OUTER_FACE);
    let mut depth: BTreeMap<usize, usize> = BTreeMap::from([(outer, 0)]);
    let mut queue = VecDeque::from([outer]);
    while let Some(r) = queue.pop_front() {
        let dr = depth[&r];
        for &n in adj.get(&r).map_or(&[][..], |v| v) {
            if let std::collections::btree_map::Entry::Vacant(e) = depth.entry(n) {
                e.insert(dr + 1);
                queue.push_back(n);
            }
        }
    }
    let labels = sides
        .iter()
        .map(|(l, r)| {
            let (dl, dr) = (depth[l], depth[r]);
            if dl.abs_diff(dr) != 1 {
                return Err(Error::Invariant("circle sides are not adjacent regions".into()));
            }
            Ok(if dl % 2 == 1 { Idempotent::A } else { Idempotent::B })
        })
        .collect::<Result<_>>()?;
    Ok(Coloring { state, circles, labels })
}

/// A canonical cycle of the complex at `H = 1`.
#[derive(Clone, Debug)]
pub struct CanonicalClass {
    pub orientation: Orientation,
    pub h: i32,
    pub state: State,
    pub labels: Vec<Idempotent>,
    /// Coefficients over the generators of the full cube in degree `h`.
    pub chain: BitVec,
}

/// The canonical generator of `o`, placed in the full cube complex of `d`.
pub fn canonical_generator(d: &Diagram, cube: &CubeComplex, o: &Orientation) -> Result<CanonicalClass> {
    let col = coloring(d, o)?;
    let h = col.state.count_ones() as i32 - d.n_minus() as i32;
    let mut fixed = 0u64;
    let mut free = Vec::new();
    for (i, l) in col.labels.iter().enumerate() {
        match l {
            Idempotent::B => fixed |= 1 << i,
            Idempotent::A => free.push(i),
        }
    }
    let mut chain = BitVec::new();
    for m in 0..1u64 << free.len() {
        let mut labels = fixed;
        for (k, &i) in free.iter().enumerate() {
            if m >> k & 1 == 1 {
                labels |= 1 << i;
            }
        }
        chain.flip(cube.position(col.state, labels));
    }
    let cls = CanonicalClass { orientation: o.clone(), h, state: col.state, labels: col.labels, chain };
    let dz = apply_at(&cube.complex.d(h), true, &cls.chain);
    if !dz.is_zero() {
        return Err(Error::Invariant(format!("canonical chain of {o} is not a cycle")));
    }
    Ok(cls)
}

/// All canonical classes together with the check that they form a basis.
#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    pub classes: Vec<CanonicalClass>,
    pub betti: BTreeMap<i32, usize>,
    /// Whether the classes are independent in homology and span it.
    pub is_basis: bool,
}

impl CanonicalBasis {
    /// Orientation bit string to homological degree.
    pub fn degrees(&self) -> BTreeMap<String, i32> {
        self.classes.iter().map(|c| (c.orientation.to_string(), c.h)).collect()
    }
}

pub fn canonical_basis(d: &Diagram, opts: &BuildOptions) -> Result<CanonicalBasis> {
    let cube = crate::complex::build::build_cube(d, &FrobeniusTheory::bar_natan(), opts)?;
    let classes = Orientation::all(d.n_components())
        .iter()
        .map(|o| canonical_generator(d, &cube, o))
        .collect::<Result<Vec<_>>>()?;
    let betti = localized_betti(&cube.complex);
    let mut is_basis = true;
    let mut by_h: BTreeMap<i32, Vec<&CanonicalClass>> = BTreeMap::new();
    for c in &classes {
        by_h.entry(c.h).or_default().push(c);
    }
    for (&h, cs) in &by_h {
        let mut e = boundary_echelon(&cube.complex, h);
        for c in cs {
            is_basis &= e.insert(&c.chain);
        }
    }
    let counts: BTreeMap<i32, usize> = by_h.iter().map(|(&h, v)| (h, v.len())).collect();
    is_basis &= counts == betti;
    Ok(CanonicalBasis { classes, betti, is_basis })
}

fn boundary_echelon(c: &GradedComplex, h: i32) -> Echelon {
    let mut e = Echelon::new();
    for col in columns_at(&c.d(h - 1), true) {
        e.insert(&col);
    }
    e
}

/// Image of a canonical generator under a movie, both as computed and as predicted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalImage {
    pub start: Orientation,
    /// End orientations whose canonical classes sum to the image.
    pub computed: BTreeSet<Orientation>,
    /// Orientations of the end compatible with an orientation of the surface, counted mod 2.
    pub compatible: BTreeSet<Orientation>,
}

impl CanonicalImage {
    pub fn agrees(&self) -> bool {
        self.computed == self.compatible
    }
}

/// Pushes the canonical class of `o` through the movie at `H = 1` and expands
/// the result in the canonical basis of the end diagram.
pub fn canonical_image(movie: &Movie, o: &Orientation, opts: &BuildOptions) -> Result<CanonicalImage> {
    let mm = movie_map(movie, &FrobeniusTheory::bar_natan(), opts)?;
    let end = movie.end_diagram()?;
    let src = canonical_generator(&movie.start, &mm.start, o)?;
    let th = src.h + mm.full.h_shift;
    let image = apply_at(&mm.full.block(&mm.start.complex, &mm.end.complex, src.h), true, &src.chain);
    let mut e = boundary_echelon(&mm.end.complex, th);
    let skip = e.inserted();
    let mut targets = Vec::new();
    for eo in Orientation::all(end.n_components()) {
        let c = canonical_generator(&end, &mm.end, &eo)?;
        if c.h == th {
            e.insert(&c.chain);
            targets.push(eo);
        }
    }
    let (residual, tag) = e.reduce(&image);
    if !residual.is_zero() {
        return Err(Error::Invariant("image of a canonical class leaves the canonical span".into()));
    }
    let computed = tag.ones().filter(|&i| i >= skip).map(|i| targets[i - skip].clone()).collect();
    let compatible = compatible_orientations(movie, o)?;
    Ok(CanonicalImage { start: o.clone(), computed, compatible })
}

/// End orientations reached by orientations of the movie's surface that restrict
/// to `o`, with multiplicity mod 2. Dots kill surface components labelled `a`.
pub fn compatible_orientations(movie: &Movie, o: &Orientation) -> Result<BTreeSet<Orientation>> {
    let applied = movie.frames()?;
    let mut frames: Vec<&Diagram> = vec![&movie.start];
    frames.extend(applied.iter().map(|a| &a.diagram));
    let offsets: Vec<usize> = frames
        .iter()
        .scan(0, |acc, f| {
            let o = *acc;
            *acc += f.n_components();
            Some(o)
        })
        .collect();
    let total = offsets.last().unwrap() + frames.last().unwrap().n_components();
    let node = |i: usize, l: Label| -> Option<usize> {
        let f = frames[i];
        f.index_of(l).map(|s| offsets[i] + f.component_of[s])
    };
    // Edges `(u, v, flip)`: frame components on one surface component, with
    // `flip` set when their reference orientations disagree along it.
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    let mut dots = Vec::new();
    for (i, a) in applied.iter().enumerate() {
        for &l in &a.diagram.labels {
            if let (Some(x), Some(y)) = (node(i, l), node(i + 1, l)) {
                edges.push((x, y, false));
            }
        }
        match &movie.moves[i] {
            Move::Saddle { a: x, b: y } if x == y && frames[i].heads[frames[i].index_of(*x).unwrap()].is_some() => {
                let n = node(i + 1, a.touched[1]).unwrap();
                edges.push((node(i, *x).unwrap(), n, pinch_reverses(frames[i], *x)));
            }
            Move::Saddle { .. } => {
                let ends: Vec<usize> =
                    a.touched.iter().flat_map(|&l| [node(i, l), node(i + 1, l)]).flatten().collect();
                for w in ends.windows(2) {
                    edges.push((w[0], w[1], false));
                }
            }
            Move::Dot { strand } => dots.push((i, *strand)),
            _ => {}
        }
    }
    if o.flips.len() != movie.start.n_components() {
        return Err(Error::Invariant("orientation does not match the start diagram".into()));
    }
    let (class_of, rel, k) = parity_classes(total, &edges)?;
    let mut fixed: Vec<Option<bool>> = vec![None; k];
    for (c, &b) in o.flips.iter().enumerate() {
        let n = offsets[0] + c;
        let want = b ^ rel[n];
        match fixed[class_of[n]] {
            Some(prev) if prev != want => return Ok(BTreeSet::new()),
            _ => fixed[class_of[n]] = Some(want),
        }
    }
    let free: Vec<usize> = (0..k).filter(|&s| fixed[s].is_none()).collect();
    if free.len() > 20 {
        return Err(Error::Unsupported("too many surface components to enumerate".into()));
    }
    let last = frames.len() - 1;
    let mut parity: BTreeMap<Orientation, bool> = BTreeMap::new();
    for m in 0..1u64 << free.len() {
        let mut bits: Vec<bool> = fixed.iter().map(|b| b.unwrap_or(false)).collect();
        for (j, &s) in free.iter().enumerate() {
            bits[s] = m >> j & 1 == 1;
        }
        let frame_orientation = |i: usize| Orientation {
            flips: (0..frames[i].n_components()).map(|c| bits[class_of[offsets[i] + c]] ^ rel[offsets[i] + c]).collect(),
        };
        let mut alive = true;
        for &(i, l) in &dots {
            let col = coloring(frames[i], &frame_orientation(i))?;
            let s = frames[i].index_of(l).unwrap();
            if col.labels[col.circles.circle_of[s]] == Idempotent::A {
                alive = false;
                break;
            }
        }
        if alive {
            *parity.entry(frame_orientation(last)).or_default() ^= true;
        }
    }
    Ok(parity.into_iter().filter(|(_, odd)| *odd).map(|(o, _)| o).collect())
}

/// Connected classes of a graph with parity-labelled edges, and each node's
/// parity relative to its class root.
fn parity_classes(n: usize, edges: &[(usize, usize, bool)]) -> Result<(Vec<usize>, Vec<bool>, usize)> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, p) in edges {
        adj[u].push((v, p));
        adj[v].push((u, p));
    }
    let mut class_of = vec![usize::MAX; n];
    let mut rel = vec![false; n];
    let mut k = 0;
    for root in 0..n {
        if class_of[root] != usize::MAX {
            continue;
        }
        class_of[root] = k;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &(v, p) in &adj[u] {
                if class_of[v] == usize::MAX {
                    class_of[v] = k;
                    rel[v] = rel[u] ^ p;
                    stack.push(v);
                } else if rel[v] != rel[u] ^ p {
                    return Err(Error::Invariant("movie surface is not orientable".into()));
                }
            }
        }
        k += 1;
    }
    Ok((class_of, rel, k))
}

/// One term of the coloring decomposition at the link level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringTerm {
    /// Bit per component; the sublinks are the preimages of 1 and 0.
    pub coloring: String,
    pub sublinks: [Vec<usize>; 2],
    /// `(h, q) = (-lk, lk)` of each sublink.
    pub bidegrees: [(i64, i64); 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDecomposition {
    pub terms: Vec<ColoringTerm>,
    pub localized_dimension: usize,
    pub counts_match: bool,
}

pub fn coloring_decomposition(d: &Diagram) -> Result<ColoringDecomposition> {
    let n = d.n_components();
    let lk = linking_matrix(d);
    let terms: Vec<ColoringTerm> = Orientation::all(n)
        .into_iter()
        .map(|c| {
            let (zeros, ones) = c.partition();
            let l1 = sublink_linking_number(&lk, &ones);
            let l0 = sublink_linking_number(&lk, &zeros);
            ColoringTerm { coloring: c.to_string(), sublinks: [ones, zeros], bidegrees: [(-l1, l1), (-l0, l0)] }
        })
        .collect();
    let localized_dimension = localized_homology(d)?.values().sum();
    let counts_match = localized_dimension == terms.len();
    Ok(ColoringDecomposition { terms, localized_dimension, counts_match })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    const HOPF: &str = "X(1,3,2,4) X(3,1,4,2)";
    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn localized_dimensions() {
        assert_eq!(localized_homology(&Diagram::unlink(1)).unwrap().values().sum::<usize>(), 2);
        assert_eq!(localized_homology(&parse_pd(HOPF).unwrap()).unwrap().values().sum::<usize>(), 4);
        assert_eq!(localized_homology(&parse_pd(TREFOIL).unwrap()).unwrap().values().sum::<usize>(), 2);
    }

    #[test]
    fn lone_counterclockwise_circle_is_a() {
        let u = Diagram::unlink(1);
        assert_eq!(coloring(&u, &Orientation::reference(1)).unwrap().labels, vec![Idempotent::A]);
        assert_eq!(coloring(&u, &Orientation { flips: vec![true] }).unwrap().labels, vec![Idempotent::B]);
    }

    #[test]
    fn reversal_swaps_labels() {
        for pd in [HOPF, TREFOIL, "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"] {
            let d = parse_pd(pd).unwrap();
            for o in Orientation::all(d.n_components()) {
                let a = coloring(&d, &o).unwrap();
                let b = coloring(&d, &o.reversed()).unwrap();
                assert_eq!(a.state, b.state);
                for (x, y) in a.labels.iter().zip(&b.labels) {
                    assert_ne!(x, y);
                }
            }
        }
    }

    #[test]
    fn canonical_classes_form_a_basis() {
        for pd in [HOPF, TREFOIL, "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"] {
            let d = parse_pd(pd).unwrap();
            let b = canonical_basis(&d, &BuildOptions::default()).unwrap();
            assert!(b.is_basis, "{pd}");
            assert_eq!(b.betti.values().sum::<usize>(), 1 << d.n_components());
        }
        let b = canonical_basis(&Diagram::unlink(2), &BuildOptions::default()).unwrap();
        assert!(b.is_basis);
    }

    #[test]
    fn saddle_merges_compatible_orientations() {
        let m = Movie::parse("start: components: 1 | 2\nsaddle 1 2\n").unwrap();
        for o in Orientation::all(2) {
            let img = canonical_image(&m, &o, &BuildOptions::default()).unwrap();
            assert!(img.agrees(), "{o}: {img:?}");
            let expected = if o.flips[0] == o.flips[1] { 1 } else { 0 };
            assert_eq!(img.computed.len(), expected);
        }
    }

    #[test]
    fn dotted_sphere_survives() {
        let m = Movie::parse("start:\nbirth\ndot 1\ndeath 1\n").unwrap();
        let img = canonical_image(&m, &Orientation::reference(0), &BuildOptions::default()).unwrap();
        assert!(img.agrees());
        assert_eq!(img.computed.len(), 1);
        let m = Movie::parse("start:\nbirth\ndeath 1\n").unwrap();
        let img = canonical_image(&m, &Orientation::reference(0), &BuildOptions::default()).unwrap();
        assert!(img.agrees());
        assert!(img.computed.is_empty());
    }

    #[test]
    fn hopf_colorings() {
        let dec = coloring_decomposition(&parse_pd(HOPF).unwrap()).unwrap();
        assert_eq!(dec.terms.len(), 4);
        assert!(dec.counts_match);
        let full = dec.terms.iter().find(|t| t.coloring == "00").unwrap();
        assert_eq!(full.bidegrees[1].1.abs(), 1);
    }
}
