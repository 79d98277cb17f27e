//! Chain maps of elementary cobordisms and of whole movies.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{FrobeniusTheory, Poly, PolyMatrix};
use crate::complex::build::{build_cube, edge_image, BuildOptions, CubeComplex};
use crate::complex::reduce::{eliminate, simplify_with_maps};
use crate::complex::{ChainMap, GradedComplex};
use crate::diagram::moves::{Applied, Move};
use crate::diagram::resolve::StateCircles;
use crate::diagram::{Diagram, Label};
use crate::error::{Error, Result};

use super::Movie;

/// The map of one move between the full cube complexes of its two frames.
#[derive(Clone, Debug)]
pub struct ElementaryMap {
    pub source: CubeComplex,
    pub target: CubeComplex,
    pub map: ChainMap,
}

/// Builds the map of `m` applied to `d`.
pub fn elementary_map(d: &Diagram, m: &Move, theory: &FrobeniusTheory, opts: &BuildOptions) -> Result<ElementaryMap> {
    let applied = crate::diagram::apply_move(d, m)?;
    let source = build_cube(d, theory, opts)?;
    let target = build_cube(&applied.diagram, theory, opts)?;
    let map = step_map(d, &source, &applied, &target, m)?;
    Ok(ElementaryMap { source, target, map })
}

pub(crate) fn step_map(
    d: &Diagram,
    source: &CubeComplex,
    applied: &Applied,
    target: &CubeComplex,
    m: &Move,
) -> Result<ChainMap> {
    if m.is_reidemeister() {
        reidemeister_map(d, source, applied, target, m)
    } else {
        Ok(morse_map(d, source, applied, target, m))
    }
}

/// Circles of a vertex that contain one of `labels`.
fn touched_circles(d: &Diagram, sc: &StateCircles, labels: &[Label]) -> Vec<usize> {
    let mut v: Vec<usize> =
        labels.iter().filter_map(|&l| d.index_of(l)).map(|s| sc.circle_of[s]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn local_image(theory: &FrobeniusTheory, m: &Move, bits: &[u8], n_dst: usize) -> Vec<(Vec<u8>, Poly)> {
    match m {
        Move::Birth => vec![(vec![0], Poly::one())],
        Move::Death { .. } => {
            if bits[0] == 1 {
                vec![(vec![], Poly::one())]
            } else {
                vec![]
            }
        }
        Move::Dot { .. } => {
            if bits[0] == 0 {
                vec![(vec![1], Poly::one())]
            } else {
                let xx = theory.mul_basis(1, 1);
                (0..2).filter(|&b| !xx[b].is_zero()).map(|b| (vec![b as u8], xx[b].clone())).collect()
            }
        }
        Move::Saddle { .. } => edge_image(theory, bits, n_dst),
        _ => unreachable!("only Morse moves act locally"),
    }
}

fn morse_q_shift(m: &Move) -> i32 {
    match m {
        Move::Birth | Move::Death { .. } => -1,
        Move::Saddle { .. } => 1,
        Move::Dot { .. } => 2,
        _ => 0,
    }
}

/// Morse moves keep every crossing, so vertices correspond state by state.
fn morse_map(d: &Diagram, source: &CubeComplex, applied: &Applied, target: &CubeComplex, m: &Move) -> ChainMap {
    let e = &applied.diagram;
    let theory = &source.complex.theory;
    let touched: Vec<Label> = match m {
        Move::Dot { strand } => vec![*strand],
        _ => applied.touched.clone(),
    };
    let mut entries: BTreeMap<usize, Vec<(usize, usize, Poly)>> = BTreeMap::new();
    for (k, gens) in source.complex.gens.iter().enumerate() {
        let mut geometry: BTreeMap<u64, (Vec<Option<usize>>, Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (j, g) in gens.iter().enumerate() {
            let (carry, st, dt) = geometry.entry(g.state).or_insert_with(|| {
                let src = source.circles(g.state);
                let dst = target.circles(g.state);
                let st = touched_circles(d, src, &touched);
                let dt = touched_circles(e, dst, &touched);
                let carry = (0..src.len())
                    .map(|c| {
                        (!st.contains(&c)).then(|| {
                            let l = d.labels[src.circles[c][0]];
                            dst.circle_of[e.index_of(l).expect("untouched strands survive")]
                        })
                    })
                    .collect();
                (carry, st, dt)
            });
            let mut base = 0u64;
            for (c, t) in carry.iter().enumerate() {
                if let Some(t) = t {
                    if g.labels >> c & 1 == 1 {
                        base |= 1 << t;
                    }
                }
            }
            let bits: Vec<u8> = st.iter().map(|&c| (g.labels >> c & 1) as u8).collect();
            for (out, coef) in local_image(theory, m, &bits, dt.len()) {
                let mut l = base;
                for (i, &b) in out.iter().enumerate() {
                    if b == 1 {
                        l |= 1 << dt[i];
                    }
                }
                entries.entry(k).or_default().push((target.position(g.state, l), j, coef));
            }
        }
    }
    let h0 = source.complex.h_min;
    let blocks = (0..source.complex.gens.len())
        .map(|k| {
            let h = h0 + k as i32;
            let m = PolyMatrix::from_entries(
                target.complex.rank_at(h),
                source.complex.gens[k].len(),
                entries.remove(&k).unwrap_or_default(),
            );
            (h, m)
        })
        .collect();
    ChainMap { h_shift: 0, q_shift: morse_q_shift(m), blocks }
}

/// Circle signature of a generator, seen through the strands of the smaller diagram.
type Signature = (u64, Vec<(Vec<Label>, bool)>);

fn signature(
    big: &Diagram,
    sc: &StateCircles,
    labels: u64,
    state: u64,
    small_labels: &BTreeSet<Label>,
    small_to_big: &[usize],
) -> Signature {
    let mut s = 0u64;
    for (i, &x) in small_to_big.iter().enumerate() {
        s |= (state >> x & 1) << i;
    }
    let mut circles: Vec<(Vec<Label>, bool)> = sc
        .circles
        .iter()
        .enumerate()
        .filter_map(|(c, strands)| {
            let ls: Vec<Label> =
                strands.iter().map(|&t| big.labels[t]).filter(|l| small_labels.contains(l)).collect();
            (!ls.is_empty()).then(|| (ls, labels >> c & 1 == 1))
        })
        .collect();
    circles.sort();
    (s, circles)
}

/// Homotopy equivalences between the cube of a diagram with an R1 or R2
/// configuration and the cube of the diagram without it.
struct Equivalence {
    /// big -> small.
    to_small: ChainMap,
    /// small -> big.
    to_big: ChainMap,
}

fn equivalence(
    big: &Diagram,
    big_cube: &CubeComplex,
    small: &Diagram,
    small_cube: &CubeComplex,
    small_to_big: &[usize],
    middle: &BTreeSet<Label>,
) -> Result<Equivalence> {
    let new_crossings: BTreeSet<usize> =
        (0..big.n_crossings()).filter(|x| !small_to_big.contains(x)).collect();
    let c = &big_cube.complex;
    let is_local = |sc: &StateCircles, circle: usize| {
        sc.circles[circle].iter().all(|&s| middle.contains(&big.labels[s]))
    };
    let touches = |sc: &StateCircles, circle: usize, x: usize| {
        sc.circles[circle].iter().any(|&s| big.crossings[x].contains(&big.labels[s]))
    };
    let allow = |h: i32, i: usize, j: usize| {
        let k = (h - c.h_min) as usize;
        let (src, tgt) = (&c.gens[k][j], &c.gens[k + 1][i]);
        let flip = src.state ^ tgt.state;
        let x = flip.trailing_zeros() as usize;
        if flip.count_ones() != 1 || !new_crossings.contains(&x) {
            return false;
        }
        let (a, b) = (big_cube.circles(src.state), big_cube.circles(tgt.state));
        if b.len() + 1 == a.len() {
            (0..a.len()).any(|z| is_local(a, z) && touches(a, z, x) && src.labels >> z & 1 == 0)
        } else if a.len() + 1 == b.len() {
            (0..b.len()).any(|z| is_local(b, z) && touches(b, z, x) && tgt.labels >> z & 1 == 1)
        } else {
            false
        }
    };
    let simp = eliminate(c, true, &allow);
    let small_labels: BTreeSet<Label> = small.labels.iter().copied().collect();
    let identity: Vec<usize> = (0..small.n_crossings()).collect();
    let mut lookup: BTreeMap<Signature, (i32, usize)> = BTreeMap::new();
    let sc = &small_cube.complex;
    for (k, gens) in sc.gens.iter().enumerate() {
        for (i, g) in gens.iter().enumerate() {
            let sig = signature(small, small_cube.circles(g.state), g.labels, g.state, &small_labels, &identity);
            lookup.insert(sig, (sc.h_min + k as i32, i));
        }
    }
    let mismatch = |why: String| Error::Invariant(format!("Reidemeister reduction does not match: {why}"));
    if simp.complex.total_rank() != sc.total_rank() {
        return Err(mismatch(format!("{} generators left, {} expected", simp.complex.total_rank(), sc.total_rank())));
    }
    // perm[h][p] = index in the small complex of surviving generator p.
    let mut perm: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (k, gens) in simp.complex.gens.iter().enumerate() {
        let h = c.h_min + k as i32;
        let mut v = Vec::with_capacity(gens.len());
        for g in gens {
            let sig = signature(big, big_cube.circles(g.state), g.labels, g.state, &small_labels, small_to_big);
            let &(hh, i) = lookup.get(&sig).ok_or_else(|| mismatch(format!("no partner for {sig:?}")))?;
            if hh != h || sc.gens_at(h)[i].q != g.q {
                return Err(mismatch(format!("partner of {sig:?} sits in another bidegree")));
            }
            v.push(i);
        }
        perm.insert(h, v);
    }
    for h in c.degrees() {
        let d_big = simp.complex.d(h);
        let p0 = &perm[&h];
        let p1 = perm.get(&(h + 1)).cloned().unwrap_or_default();
        let moved: Vec<(usize, usize, Poly)> = d_big.entries().map(|(i, j, p)| (p1[i], p0[j], p.clone())).collect();
        let moved = PolyMatrix::from_entries(sc.rank_at(h + 1), sc.rank_at(h), moved);
        if moved != sc.d(h) {
            return Err(mismatch(format!("differentials differ at h = {h}")));
        }
    }
    let f = simp.to_small.expect("tracked");
    let g = simp.to_big.expect("tracked");
    let mut to_small = BTreeMap::new();
    let mut to_big = BTreeMap::new();
    for h in c.degrees().chain(sc.degrees()) {
        let p = perm.get(&h).cloned().unwrap_or_default();
        let pm = PolyMatrix::from_entries(sc.rank_at(h), p.len(), p.iter().enumerate().map(|(a, &b)| (b, a, Poly::one())));
        if c.rank_at(h) > 0 || sc.rank_at(h) > 0 {
            to_small.insert(h, pm.mul(&f.block(c, &simp.complex, h)));
            to_big.insert(h, g.block(&simp.complex, c, h).mul(&pm.transpose()));
        }
    }
    Ok(Equivalence {
        to_small: ChainMap { h_shift: 0, q_shift: 0, blocks: to_small },
        to_big: ChainMap { h_shift: 0, q_shift: 0, blocks: to_big },
    })
}

fn reidemeister_map(
    d: &Diagram,
    source: &CubeComplex,
    applied: &Applied,
    target: &CubeComplex,
    m: &Move,
) -> Result<ChainMap> {
    let e = &applied.diagram;
    let m_old = d.max_label();
    match *m {
        Move::R1Add { .. } | Move::R2Add { .. } => {
            let middle: BTreeSet<Label> = match m {
                Move::R1Add { .. } => [m_old + 1].into(),
                _ => [m_old + 1, m_old + 3].into(),
            };
            let small_to_big: Vec<usize> = applied.crossing_map.iter().map(|x| x.unwrap()).collect();
            Ok(equivalence(e, target, d, source, &small_to_big, &middle)?.to_big)
        }
        Move::R1Remove { strand } | Move::R2Remove { over: strand, .. } => {
            let mut middle: BTreeSet<Label> = [strand].into();
            if let Move::R2Remove { under, .. } = m {
                middle.insert(*under);
            }
            let mut small_to_big = vec![0; e.n_crossings()];
            for (old, new) in applied.crossing_map.iter().enumerate() {
                if let Some(n) = new {
                    small_to_big[*n] = old;
                }
            }
            Ok(equivalence(d, source, e, target, &small_to_big, &middle)?.to_small)
        }
        Move::R3 { .. } => Err(Error::Unsupported("chain maps for third Reidemeister moves are not implemented".into())),
        _ => unreachable!(),
    }
}

/// The map of a movie, on full cubes and on simplified complexes.
#[derive(Clone, Debug)]
pub struct MovieMap {
    pub start: CubeComplex,
    pub end: CubeComplex,
    /// Composite of the elementary maps between full cube complexes.
    pub full: ChainMap,
    /// Simplified start and end complexes.
    pub source: GradedComplex,
    pub target: GradedComplex,
    /// `full` conjugated into the simplified complexes.
    pub map: ChainMap,
}

pub fn movie_map(movie: &Movie, theory: &FrobeniusTheory, opts: &BuildOptions) -> Result<MovieMap> {
    let frames = movie.frames()?;
    let start = build_cube(&movie.start, theory, opts)?;
    let mut full = ChainMap::identity(&start.complex);
    let mut cur_d = &movie.start;
    let mut cur = start.clone();
    for (m, applied) in movie.moves.iter().zip(&frames) {
        let next = build_cube(&applied.diagram, theory, opts)?;
        let step = step_map(cur_d, &cur, applied, &next, m)?;
        full = full.then(&step, &start.complex, &cur.complex, &next.complex);
        cur = next;
        cur_d = &applied.diagram;
    }
    let end = cur;
    let s = simplify_with_maps(&start.complex);
    let t = simplify_with_maps(&end.complex);
    let g_start = s.to_big.as_ref().expect("tracked");
    let f_end = t.to_small.as_ref().expect("tracked");
    let map = g_start
        .then(&full, &s.complex, &start.complex, &end.complex)
        .then(f_end, &s.complex, &end.complex, &t.complex);
    Ok(MovieMap { start, end, full, source: s.complex, target: t.complex, map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn check(d: &Diagram, m: &Move) -> ElementaryMap {
        let t = FrobeniusTheory::bar_natan();
        let e = elementary_map(d, m, &t, &BuildOptions::default()).unwrap();
        e.map.check(&e.source.complex, &e.target.complex).unwrap();
        e
    }

    #[test]
    fn morse_maps_are_chain_maps() {
        let hopf = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        for (a, b) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (1, 1)] {
            if crate::diagram::apply_move(&hopf, &Move::Saddle { a, b }).is_ok() {
                check(&hopf, &Move::Saddle { a, b });
            }
        }
        check(&hopf, &Move::Birth);
        check(&hopf, &Move::Dot { strand: 3 });
    }

    #[test]
    fn merge_of_two_circles() {
        let d = Diagram::unlink(2);
        let e = check(&d, &Move::Saddle { a: 1, b: 2 });
        let m = &e.map.blocks[&0];
        // Generators are ordered by labels: 1⊗1, X⊗1, 1⊗X, X⊗X.
        assert_eq!(m.get(1, 1), Poly::one());
        assert_eq!(m.get(1, 2), Poly::one());
        assert_eq!(m.get(1, 3), Poly::h());
    }

    #[test]
    fn reidemeister_maps_are_chain_maps() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        for m in crate::diagram::r_insertions(&d) {
            let e = check(&d, &m);
            let a = crate::diagram::apply_move(&d, &m).unwrap();
            let n = d.max_label();
            let back = match m {
                Move::R1Add { .. } => Move::R1Remove { strand: n + 1 },
                _ => Move::R2Remove { over: n + 1, under: n + 3 },
            };
            let r = check(&a.diagram, &back);
            let id = e.map.then(&r.map, &e.source.complex, &e.target.complex, &r.target.complex);
            assert_eq!(id, ChainMap::identity(&e.source.complex), "{m}");
        }
    }
}
