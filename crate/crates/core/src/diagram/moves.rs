//! Local moves on diagrams: Reidemeister moves and the Morse moves of a movie.
//!
//! Moves never renumber surviving strands. New strands take labels above the
//! current maximum, and new crossings are appended.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::faces::{PlanarFaces, OUTER_FACE};
use super::pd::{Diagram, DiagramSpec, Label};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Adds a kink on `strand`, passing over or under itself, on its left or right.
    R1Add { strand: Label, over: bool, left: bool },
    /// Removes the kink whose loop is `strand`.
    R1Remove { strand: Label },
    /// Pushes `over` across `under` through a face they share.
    R2Add { over: Label, under: Label },
    /// Removes the bigon bounded by the two middle strands.
    R2Remove { over: Label, under: Label },
    /// Slides a strand across the triangle with the given sides.
    R3 { sides: [Label; 3] },
    Saddle { a: Label, b: Label },
    Birth,
    Death { strand: Label },
    Dot { strand: Label },
}

impl Move {
    pub fn is_reidemeister(&self) -> bool {
        matches!(
            self,
            Move::R1Add { .. } | Move::R1Remove { .. } | Move::R2Add { .. } | Move::R2Remove { .. } | Move::R3 { .. }
        )
    }

    /// `(births + deaths) - saddles`.
    pub fn euler(&self) -> i32 {
        match self {
            Move::Birth | Move::Death { .. } => 1,
            Move::Saddle { .. } => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::R1Add { strand, over, left } => write!(
                f,
                "r1+ {strand} {} {}",
                if *over { "over" } else { "under" },
                if *left { "left" } else { "right" }
            ),
            Move::R1Remove { strand } => write!(f, "r1- {strand}"),
            Move::R2Add { over, under } => write!(f, "r2+ {over} {under}"),
            Move::R2Remove { over, under } => write!(f, "r2- {over} {under}"),
            Move::R3 { sides } => write!(f, "r3 {} {} {}", sides[0], sides[1], sides[2]),
            Move::Saddle { a, b } => write!(f, "saddle {a} {b}"),
            Move::Birth => write!(f, "birth"),
            Move::Death { strand } => write!(f, "death {strand}"),
            Move::Dot { strand } => write!(f, "dot {strand}"),
        }
    }
}

fn parse_label(tok: &str) -> Result<Label> {
    let t = tok.trim_start_matches(['s', 'c']);
    t.parse().map_err(|_| Error::Parse(format!("bad strand reference {tok:?}")))
}

impl FromStr for Move {
    type Err = Error;

    /// One move per line: `r1+ 3 over left`, `r1- 7`, `r2+ 3 5`, `r2- 7 9`,
    /// `r3 4 5 6`, `saddle 3 7`, `birth`, `death 2`, `dot 1`. Strand numbers may
    /// carry an `s` or `c` prefix.
    fn from_str(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let Some((&verb, rest)) = toks.split_first() else {
            return Err(Error::Parse("empty move".into()));
        };
        let labels = |n: usize| -> Result<Vec<Label>> {
            if rest.len() < n {
                return Err(Error::Parse(format!("{verb} needs {n} strand(s)")));
            }
            rest[..n].iter().map(|t| parse_label(t)).collect()
        };
        let m = match verb.to_ascii_lowercase().as_str() {
            "r1" | "r1+" => {
                let l = labels(1)?;
                let mut over = true;
                let mut left = true;
                for &t in &rest[1..] {
                    match t {
                        "over" => over = true,
                        "under" => over = false,
                        "left" => left = true,
                        "right" => left = false,
                        _ => return Err(Error::Parse(format!("unknown r1 option {t:?}"))),
                    }
                }
                Move::R1Add { strand: l[0], over, left }
            }
            "r1-" => Move::R1Remove { strand: labels(1)?[0] },
            "r2" | "r2+" => {
                let l = labels(2)?;
                Move::R2Add { over: l[0], under: l[1] }
            }
            "r2-" => {
                let l = labels(2)?;
                Move::R2Remove { over: l[0], under: l[1] }
            }
            "r3" => {
                let l = labels(3)?;
                Move::R3 { sides: [l[0], l[1], l[2]] }
            }
            "saddle" => {
                let l = labels(2)?;
                Move::Saddle { a: l[0], b: l[1] }
            }
            "birth" => Move::Birth,
            "death" => Move::Death { strand: labels(1)?[0] },
            "dot" => Move::Dot { strand: labels(1)?[0] },
            _ => return Err(Error::Parse(format!("unknown move {verb:?}"))),
        };
        Ok(m)
    }
}

/// Result of applying a move.
#[derive(Clone, Debug)]
pub struct Applied {
    pub diagram: Diagram,
    /// New index of each old crossing, `None` when removed.
    pub crossing_map: Vec<Option<usize>>,
    /// Strands touched by a Morse move, present in the old or new diagram.
    pub touched: Vec<Label>,
}

/// Mutable working copy: crossings plus the successor of every strand.
struct Edit<'a> {
    d: &'a Diagram,
    crossings: Vec<Option<[Label; 4]>>,
    succ: BTreeMap<Label, Label>,
    alias: BTreeMap<Label, Label>,
    next: Label,
}

impl<'a> Edit<'a> {
    fn new(d: &'a Diagram) -> Self {
        let mut succ = BTreeMap::new();
        for comp in &d.components {
            for (i, &l) in comp.iter().enumerate() {
                succ.insert(l, comp[(i + 1) % comp.len()]);
            }
        }
        Edit {
            d,
            crossings: d.crossings.iter().map(|&t| Some(t)).collect(),
            succ,
            alias: BTreeMap::new(),
            next: d.max_label() + 1,
        }
    }

    fn fresh(&mut self) -> Label {
        self.next += 1;
        self.next - 1
    }

    fn set_slot(&mut self, slot: super::pd::Slot, l: Label) {
        if let Some(t) = self.crossings[slot.crossing].as_mut() {
            t[slot.pos] = l;
        }
    }

    fn replace_label(&mut self, old: Label, new: Label) {
        for t in self.crossings.iter_mut().flatten() {
            for x in t.iter_mut() {
                if *x == old {
                    *x = new;
                }
            }
        }
    }

    /// Splits strand `a` into `a -> mid -> a2`; returns `a2` (`a` itself for a loop).
    fn subdivide(&mut self, a: Label, mid: Label) -> Label {
        let s = self.d.index_of(a).unwrap();
        let after = self.succ[&a];
        if self.d.heads[s].is_none() {
            self.succ.insert(a, mid);
            self.succ.insert(mid, a);
            return a;
        }
        let a2 = self.fresh();
        self.set_slot(self.d.heads[s].unwrap(), a2);
        self.succ.insert(a, mid);
        self.succ.insert(mid, a2);
        self.succ.insert(a2, after);
        a2
    }

    fn resolve(&self, mut l: Label) -> Label {
        while let Some(&n) = self.alias.get(&l) {
            l = n;
        }
        l
    }

    /// Absorbs the successor of `y` into `y`.
    fn absorb_next(&mut self, y: Label) {
        let y = self.resolve(y);
        let x = self.succ[&y];
        if x == y {
            return;
        }
        let after = self.succ.remove(&x).unwrap();
        self.succ.insert(y, if after == x { y } else { after });
        self.replace_label(x, y);
        self.alias.insert(x, y);
    }

    fn finish(self, touched: Vec<Label>) -> Result<Applied> {
        let d = self.d;
        let mut crossing_map = Vec::with_capacity(d.n_crossings());
        let mut crossings = Vec::new();
        for (i, t) in self.crossings.iter().enumerate() {
            if let Some(t) = t {
                if i < d.n_crossings() {
                    crossing_map.push(Some(crossings.len()));
                }
                crossings.push(*t);
            } else {
                crossing_map.push(None);
            }
        }
        // Cycles of the successor map, in the order of the old components.
        let mut used = BTreeSet::new();
        let mut comps = Vec::new();
        let mut framing = Vec::new();
        let cycle_of = |start: Label, used: &mut BTreeSet<Label>| {
            let mut c = vec![start];
            used.insert(start);
            let mut l = self.succ[&start];
            while l != start {
                used.insert(l);
                c.push(l);
                l = self.succ[&l];
            }
            c
        };
        for (ci, comp) in d.components.iter().enumerate() {
            if let Some(&l) = comp.iter().find(|l| self.succ.contains_key(l)) {
                if !used.contains(&l) {
                    comps.push(cycle_of(l, &mut used));
                    framing.push(d.framings[ci]);
                }
            }
        }
        let rest: Vec<Label> = self.succ.keys().copied().collect();
        for l in rest {
            if !used.contains(&l) {
                comps.push(cycle_of(l, &mut used));
                framing.push(0);
            }
        }
        let basepoint = d.basepoint.map(|b| self.resolve(b)).filter(|b| self.succ.contains_key(b));
        let spec = DiagramSpec { crossings, components: Some(comps), framing: Some(framing), basepoint };
        let diagram = Diagram::from_spec(&spec)?;
        Ok(Applied { diagram, crossing_map, touched })
    }
}

fn strand(d: &Diagram, l: Label) -> Result<usize> {
    d.index_of(l).ok_or_else(|| Error::InvalidMove(format!("no strand {l}")))
}

/// Applies one move.
pub fn apply_move(d: &Diagram, m: &Move) -> Result<Applied> {
    match *m {
        Move::R1Add { strand: a, over, left } => r1_add(d, a, over, left),
        Move::R1Remove { strand: l } => r1_remove(d, l),
        Move::R2Add { over, under } => r2_add(d, over, under),
        Move::R2Remove { over, under } => r2_remove(d, over, under),
        Move::R3 { sides } => r3(d, sides),
        Move::Saddle { a, b } => saddle(d, a, b),
        Move::Birth => {
            let mut e = Edit::new(d);
            let l = e.fresh();
            e.succ.insert(l, l);
            e.finish(vec![l])
        }
        Move::Death { strand: l } => {
            let s = strand(d, l)?;
            if d.heads[s].is_some() {
                return Err(Error::InvalidMove(format!("death needs a crossingless circle; strand {l} is not one")));
            }
            let mut e = Edit::new(d);
            e.succ.remove(&l);
            e.finish(vec![l])
        }
        Move::Dot { strand: l } => {
            strand(d, l)?;
            Edit::new(d).finish(vec![l])
        }
    }
}

fn r1_add(d: &Diagram, a: Label, over: bool, left: bool) -> Result<Applied> {
    strand(d, a)?;
    let mut e = Edit::new(d);
    let l = e.fresh();
    let a2 = e.subdivide(a, l);
    let t = match (over, left) {
        (false, false) => [a, l, l, a2],
        (false, true) => [a, a2, l, l],
        (true, false) => [l, l, a2, a],
        (true, true) => [l, a, a2, l],
    };
    e.crossings.push(Some(t));
    e.finish(vec![])
}

fn r1_remove(d: &Diagram, l: Label) -> Result<Applied> {
    let s = strand(d, l)?;
    let (Some(h), Some(t)) = (d.heads[s], d.tails[s]) else {
        return Err(Error::InvalidMove(format!("strand {l} is not a kink loop")));
    };
    if h.crossing != t.crossing || (h.pos + 4 - t.pos) % 4 == 2 {
        return Err(Error::InvalidMove(format!("strand {l} is not a kink loop")));
    }
    let x = h.crossing;
    let mut e = Edit::new(d);
    let a_in = *e.succ.iter().find(|(_, &n)| n == l).unwrap().0;
    e.crossings[x] = None;
    e.absorb_next(a_in);
    e.absorb_next(a_in);
    e.finish(vec![])
}

/// Face shared by `a` and `b`, preferring `b`'s left; returns `(face on b's left, a travels with b)`.
fn r2_geometry(d: &Diagram, pf: &PlanarFaces, a: usize, b: usize) -> Option<(bool, bool)> {
    for b_left in [true, false] {
        let f = pf.side(d, b, b_left);
        for a_left in [true, false] {
            if pf.side(d, a, a_left) == f {
                // Case on b's left: a runs with b when the face is on a's right.
                let east = if b_left { !a_left } else { a_left };
                return Some((b_left, east));
            }
        }
    }
    None
}

fn r2_add(d: &Diagram, over: Label, under: Label) -> Result<Applied> {
    r2_push(d, over, under, true)
}

/// Pushes `a` across `b`. The tables are drawn with `b` running west to east.
fn r2_push(d: &Diagram, a: Label, b: Label, a_over: bool) -> Result<Applied> {
    let sa = strand(d, a)?;
    let sb = strand(d, b)?;
    if sa == sb {
        return Err(Error::InvalidMove("r2 needs two different strands".into()));
    }
    let pf = PlanarFaces::new(d);
    let (b_left, east) = r2_geometry(d, &pf, sa, sb)
        .ok_or_else(|| Error::InvalidMove(format!("strands {a} and {b} share no face")))?;
    let mut e = Edit::new(d);
    let am = e.fresh();
    let a2 = e.subdivide(a, am);
    let bm = e.fresh();
    let b2 = e.subdivide(b, bm);
    let (xl, xr) = match (b_left, a_over, east) {
        (true, true, true) => ([b, am, bm, a], [bm, am, b2, a2]),
        (true, true, false) => ([b, am, bm, a2], [bm, am, b2, a]),
        (true, false, true) => ([a, b, am, bm], [am, b2, a2, bm]),
        (true, false, false) => ([am, bm, a2, b], [a, bm, am, b2]),
        (false, true, true) => ([b, a, bm, am], [bm, a2, b2, am]),
        (false, true, false) => ([b, a2, bm, am], [bm, a, b2, am]),
        (false, false, true) => ([a, bm, am, b], [am, bm, a2, b2]),
        (false, false, false) => ([am, b, a2, bm], [a, b2, am, bm]),
    };
    e.crossings.push(Some(xl));
    e.crossings.push(Some(xr));
    e.finish(vec![])
}

fn r2_remove(d: &Diagram, over: Label, under: Label) -> Result<Applied> {
    let so = strand(d, over)?;
    let su = strand(d, under)?;
    let bad = || Error::InvalidMove(format!("strands {over} and {under} do not bound a bigon"));
    let (Some(ot), Some(oh), Some(ut), Some(uh)) = (d.tails[so], d.heads[so], d.tails[su], d.heads[su]) else {
        return Err(bad());
    };
    let ends = |x: usize, y: usize| if x < y { (x, y) } else { (y, x) };
    if ot.crossing == oh.crossing || ends(ot.crossing, oh.crossing) != ends(ut.crossing, uh.crossing) {
        return Err(bad());
    }
    if [ot.pos, oh.pos].iter().any(|p| p % 2 == 0) || [ut.pos, uh.pos].iter().any(|p| p % 2 == 1) {
        return Err(bad());
    }
    let pf = PlanarFaces::new(d);
    let shared = [true, false].iter().any(|&x| [true, false].iter().any(|&y| pf.side(d, so, x) == pf.side(d, su, y)));
    if !shared {
        return Err(bad());
    }
    let mut e = Edit::new(d);
    let a = *e.succ.iter().find(|(_, &n)| n == over).unwrap().0;
    let b = *e.succ.iter().find(|(_, &n)| n == under).unwrap().0;
    e.crossings[ot.crossing] = None;
    e.crossings[oh.crossing] = None;
    e.absorb_next(a);
    e.absorb_next(a);
    e.absorb_next(b);
    e.absorb_next(b);
    e.finish(vec![])
}

fn r3(d: &Diagram, sides: [Label; 3]) -> Result<Applied> {
    let bad = |why: &str| Error::InvalidMove(format!("r3 on {sides:?}: {why}"));
    let mut idx = [0usize; 3];
    for (k, &l) in sides.iter().enumerate() {
        idx[k] = strand(d, l)?;
        if d.heads[idx[k]].is_none() {
            return Err(bad("side is a crossingless circle"));
        }
    }
    let xs: Vec<(usize, usize)> = idx
        .iter()
        .map(|&s| {
            let (t, h) = (d.tails[s].unwrap().crossing, d.heads[s].unwrap().crossing);
            if t < h { (t, h) } else { (h, t) }
        })
        .collect();
    let mut all: Vec<usize> = xs.iter().flat_map(|&(a, b)| [a, b]).collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != 3 || xs.iter().any(|&(a, b)| a == b) || xs[0] == xs[1] || xs[1] == xs[2] || xs[0] == xs[2] {
        return Err(bad("sides do not form a triangle"));
    }
    let pf = PlanarFaces::new(d);
    let common = [true, false].iter().any(|&l0| {
        let f = pf.side(d, idx[0], l0);
        (1..3).all(|k| pf.side(d, idx[k], true) == f || pf.side(d, idx[k], false) == f)
    });
    if !common {
        return Err(bad("sides do not bound a common face"));
    }
    let over_count = |s: usize| [d.tails[s].unwrap().pos, d.heads[s].unwrap().pos].iter().filter(|p| *p % 2 == 1).count();
    let mut counts: Vec<usize> = idx.iter().map(|&s| over_count(s)).collect();
    counts.sort_unstable();
    if counts != [0, 1, 2] {
        return Err(bad("no strand passes over both of its crossings"));
    }
    let mut e = Edit::new(d);
    let mut fresh = [0; 3];
    for k in 0..3 {
        fresh[k] = e.fresh();
    }
    // Reverse the order of the two crossings along each line.
    for k in 0..3 {
        let s = idx[k];
        let (t, h) = (d.tails[s].unwrap(), d.heads[s].unwrap());
        let mid = fresh[k];
        let before = *e.succ.iter().find(|(_, &n)| n == sides[k]).unwrap().0;
        let after = e.succ[&sides[k]];
        // Along the line: before -> [t.crossing] -> side -> [h.crossing] -> after.
        // Afterwards: before -> [h.crossing] -> mid -> [t.crossing] -> after.
        let t_in = (t.pos + 2) % 4;
        let h_out = (h.pos + 2) % 4;
        let mut ct = e.crossings[t.crossing].unwrap();
        let mut ch = e.crossings[h.crossing].unwrap();
        ch[h.pos] = before;
        ch[h_out] = mid;
        ct[t_in] = mid;
        ct[t.pos] = after;
        e.crossings[t.crossing] = Some(ct);
        e.crossings[h.crossing] = Some(ch);
        e.succ.remove(&sides[k]);
        e.succ.insert(before, mid);
        e.succ.insert(mid, after);
        e.alias.insert(sides[k], mid);
    }
    e.finish(vec![])
}

fn saddle(d: &Diagram, a: Label, b: Label) -> Result<Applied> {
    let sa = strand(d, a)?;
    let sb = strand(d, b)?;
    let loop_a = d.heads[sa].is_none();
    let loop_b = d.heads[sb].is_none();
    let mut e = Edit::new(d);
    if sa == sb {
        // Pinches off a new circle into the unbounded face.
        if !loop_a {
            let pf = PlanarFaces::new(d);
            if pf.side(d, sa, false) != OUTER_FACE && pf.side(d, sa, true) != OUTER_FACE {
                return Err(Error::InvalidMove(format!("strand {a} does not border the unbounded face")));
            }
        }
        let l = e.fresh();
        e.succ.insert(l, l);
        return e.finish(vec![a, l]);
    }
    let pf = PlanarFaces::new(d);
    match (loop_a, loop_b) {
        (true, true) => {
            e.succ.remove(&b);
            e.alias.insert(b, a);
        }
        (false, true) | (true, false) => {
            let (s, l) = if loop_b { (sa, b) } else { (sb, a) };
            if pf.side(d, s, false) != OUTER_FACE {
                return Err(Error::InvalidMove(format!("circle {l} is not beside strand {}", d.labels[s])));
            }
            e.succ.remove(&l);
            e.alias.insert(l, d.labels[s]);
        }
        (false, false) => {
            let same_side = [true, false].iter().any(|&left| pf.side(d, sa, left) == pf.side(d, sb, left));
            if !same_side {
                return Err(Error::InvalidMove(format!("strands {a} and {b} share no face with matching orientation")));
            }
            let (ha, hb) = (d.heads[sa].unwrap(), d.heads[sb].unwrap());
            e.set_slot(ha, b);
            e.set_slot(hb, a);
            let (na, nb) = (e.succ[&a], e.succ[&b]);
            e.succ.insert(a, nb);
            e.succ.insert(b, na);
        }
    }
    e.finish(vec![a, b])
}

/// Whether the circle pinched off strand `a` by `saddle a a` runs clockwise.
///
/// The band sits in the unbounded face. With that face on the strand's right
/// the new circle is counterclockwise; with it only on the left, clockwise.
pub fn pinch_reverses(d: &Diagram, a: Label) -> bool {
    match d.index_of(a) {
        Some(s) if d.heads[s].is_some() => PlanarFaces::new(d).side(d, s, false) != OUTER_FACE,
        _ => false,
    }
}

/// Every R1 and R2 insertion available on `d`, in a fixed order.
pub fn r_insertions(d: &Diagram) -> Vec<Move> {
    let mut out = Vec::new();
    for &l in &d.labels {
        for over in [true, false] {
            for left in [true, false] {
                out.push(Move::R1Add { strand: l, over, left });
            }
        }
    }
    let pf = PlanarFaces::new(d);
    for (i, &a) in d.labels.iter().enumerate() {
        for (j, &b) in d.labels.iter().enumerate() {
            if i != j && r2_geometry(d, &pf, i, j).is_some() {
                out.push(Move::R2Add { over: a, under: b });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::faces::faces;
    use crate::diagram::parse_pd;

    fn check_planar(d: &Diagram) {
        if d.n_crossings() > 0 && d.free_loops().is_empty() {
            let (_, f) = faces(d);
            // Connected projections satisfy V - E + F = 2.
            let mut uf = crate::util::UnionFind::new(d.n_crossings());
            for s in 0..d.n_strands() {
                uf.union(d.tails[s].unwrap().crossing, d.heads[s].unwrap().crossing);
            }
            let pieces = uf.classes().1;
            assert_eq!(f, d.n_crossings() + 1 + pieces, "{}", d.to_pd_text());
        }
    }

    #[test]
    fn parse_and_print() {
        for s in ["r1+ 3 under right", "r1- 7", "r2+ 3 5", "r2- 7 9", "r3 4 5 6", "saddle 3 7", "birth", "death 2", "dot 1"] {
            let m: Move = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert_eq!("r2 s4 s5".parse::<Move>().unwrap(), Move::R2Add { over: 4, under: 5 });
        assert!("twist 3".parse::<Move>().is_err());
    }

    #[test]
    fn r1_round_trip() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        for m in r_insertions(&d).into_iter().filter(|m| matches!(m, Move::R1Add { .. })) {
            let a = apply_move(&d, &m).unwrap();
            check_planar(&a.diagram);
            assert_eq!(a.diagram.n_crossings(), 4);
            let kink = a.diagram.max_label() - if a.diagram.n_strands() == 8 { 1 } else { 0 };
            let back = apply_move(&a.diagram, &Move::R1Remove { strand: kink }).unwrap();
            assert_eq!(back.diagram.crossings, d.crossings, "{m}");
        }
    }

    #[test]
    fn r1_on_a_loop() {
        let d = parse_pd("components: 1").unwrap();
        let a = apply_move(&d, &Move::R1Add { strand: 1, over: true, left: true }).unwrap();
        assert_eq!(a.diagram.crossings, vec![[2, 1, 1, 2]]);
        let back = apply_move(&a.diagram, &Move::R1Remove { strand: 2 }).unwrap();
        assert_eq!(back.diagram.free_loops(), vec![1]);
    }

    #[test]
    fn r2_insertions_are_planar_and_removable() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let ms: Vec<Move> = r_insertions(&d).into_iter().filter(|m| matches!(m, Move::R2Add { .. })).collect();
        assert!(!ms.is_empty());
        for m in ms {
            let a = apply_move(&d, &m).unwrap();
            check_planar(&a.diagram);
            let n = d.max_label();
            let back = apply_move(&a.diagram, &Move::R2Remove { over: n + 1, under: n + 3 }).unwrap();
            assert_eq!(back.diagram.crossings, d.crossings, "{m}");
        }
    }

    #[test]
    fn two_loops_r2() {
        let d = parse_pd("components: 1 | 2").unwrap();
        let a = apply_move(&d, &Move::R2Add { over: 1, under: 2 }).unwrap();
        assert_eq!(a.diagram.n_crossings(), 2);
        assert_eq!(crate::diagram::linking_number(&a.diagram), 0);
    }

    #[test]
    fn saddle_on_hopf_merges_components() {
        let d = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        let pf = PlanarFaces::new(&d);
        let mut found = false;
        for &a in &d.labels {
            for &b in &d.labels {
                if a < b {
                    if let Ok(r) = apply_move(&d, &Move::Saddle { a, b }) {
                        check_planar(&r.diagram);
                        found = true;
                    }
                }
            }
        }
        assert!(found, "{pf:?}");
    }

    #[test]
    fn birth_death() {
        let d = Diagram::unlink(1);
        let b = apply_move(&d, &Move::Birth).unwrap().diagram;
        assert_eq!(b.n_components(), 2);
        let back = apply_move(&b, &Move::Death { strand: 2 }).unwrap().diagram;
        assert_eq!(back, d);
        assert!(apply_move(&parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap(), &Move::Death { strand: 1 }).is_err());
    }
}
