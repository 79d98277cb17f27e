//! Parallel cables of link components, with framing twists.

use std::collections::BTreeMap;

use super::ops::self_writhe;
use super::pd::{Diagram, DiagramSpec, Label};
use crate::error::{Error, Result};
use crate::util::UnionFind;

/// Copies of one component: `along` copies follow its orientation, `reversed` run against it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Mult {
    pub along: usize,
    pub reversed: usize,
}

impl Mult {
    pub fn new(along: usize, reversed: usize) -> Self {
        Mult { along, reversed }
    }

    pub fn total(self) -> usize {
        self.along + self.reversed
    }

    fn is_reversed(self, j: usize) -> bool {
        j >= self.along
    }
}

struct Builder {
    next: Label,
    crossings: Vec<[Label; 4]>,
    /// Successor of each raw label along its copy's direction of travel.
    succ: BTreeMap<Label, Label>,
    /// Which copy each raw label belongs to: `(component, copy)`.
    owner: BTreeMap<Label, (usize, usize)>,
    alias: Vec<(Label, Label)>,
}

impl Builder {
    fn fresh(&mut self, owner: (usize, usize)) -> Label {
        self.next += 1;
        self.owner.insert(self.next, owner);
        self.next
    }

    /// Records a path of labels traversed in reference order, reversed if needed.
    fn path(&mut self, labels: &[Label], reversed: bool) {
        for w in labels.windows(2) {
            if reversed {
                self.succ.insert(w[1], w[0]);
            } else {
                self.succ.insert(w[0], w[1]);
            }
        }
    }
}

/// Replaces each component by parallel copies, numbered from the left of its
/// reference direction, along copies first. Copies of component `i` are
/// twisted so that they pairwise link `framing[i]` times (with sign flipped
/// for pairs of opposite direction). Components with no copies are deleted.
pub fn cable(d: &Diagram, mults: &[Mult]) -> Result<Diagram> {
    if mults.len() != d.n_components() {
        return Err(Error::Invariant(format!(
            "{} multiplicities for {} components",
            mults.len(),
            d.n_components()
        )));
    }
    let mut b = Builder { next: 0, crossings: Vec::new(), succ: BTreeMap::new(), owner: BTreeMap::new(), alias: Vec::new() };
    // Copy labels of every strand where it leaves its tail and where it enters its head.
    let mut out_lab: BTreeMap<(Label, usize), Label> = BTreeMap::new();
    let mut in_lab: BTreeMap<(Label, usize), Label> = BTreeMap::new();
    for (s, &l) in d.labels.iter().enumerate() {
        let c = d.component_of[s];
        for j in 0..mults[c].total() {
            let x = b.fresh((c, j));
            out_lab.insert((l, j), x);
            in_lab.insert((l, j), x);
        }
    }
    // Framing twists go on the first strand of each component.
    for (c, comp) in d.components.iter().enumerate() {
        let m = mults[c];
        let twists = d.framings.get(c).copied().unwrap_or(0) - self_writhe(d, c);
        if m.total() < 2 || twists == 0 {
            continue;
        }
        let e = comp[0];
        let bottom: Vec<Label> = (0..m.total()).map(|j| out_lab[&(e, j)]).collect();
        let top = full_twists(&mut b, c, m, bottom, twists);
        for (j, t) in top.into_iter().enumerate() {
            in_lab.insert((e, j), t);
        }
    }
    for (x, t) in d.crossings.iter().enumerate() {
        let under = d.component_of[d.index_of(t[0]).unwrap()];
        let over = d.component_of[d.index_of(t[1]).unwrap()];
        let (mu, mo) = (mults[under], mults[over]);
        let positive = d.signs[x] > 0;
        // Over strand enters at d (positive) or b (negative).
        let (o_in, o_out) = if positive { (t[3], t[1]) } else { (t[1], t[3]) };
        if mo.total() == 0 {
            for j in 0..mu.total() {
                let (i, o) = (in_lab[&(t[0], j)], out_lab[&(t[2], j)]);
                b.alias.push((i, o));
                b.path(&[i, o], mu.is_reversed(j));
            }
            continue;
        }
        if mu.total() == 0 {
            for j in 0..mo.total() {
                let (i, o) = (in_lab[&(o_in, j)], out_lab[&(o_out, j)]);
                b.alias.push((i, o));
                b.path(&[i, o], mo.is_reversed(j));
            }
            continue;
        }
        let (nu, no) = (mu.total(), mo.total());
        // Row y counts from the north; the over strand's left is north when it runs east.
        let row_of = |v: usize| if positive { v } else { no - 1 - v };
        // Vertical pieces per column, from south (g = 0) to north (g = no).
        let mut vert = vec![vec![0; no + 1]; nu];
        for (col, v) in vert.iter_mut().enumerate() {
            v[0] = in_lab[&(t[0], col)];
            v[no] = out_lab[&(t[2], col)];
            for g in 1..no {
                v[g] = b.fresh((under, col));
            }
            let chain = v.clone();
            b.path(&chain, mu.is_reversed(col));
        }
        // Horizontal pieces per row, from west (k = 0) to east (k = nu).
        let mut horiz = vec![vec![0; nu + 1]; no];
        for v in 0..no {
            let y = row_of(v);
            let (west, east) = if positive {
                (in_lab[&(o_in, v)], out_lab[&(o_out, v)])
            } else {
                (out_lab[&(o_out, v)], in_lab[&(o_in, v)])
            };
            horiz[y][0] = west;
            horiz[y][nu] = east;
            for k in 1..nu {
                horiz[y][k] = b.fresh((over, v));
            }
            let chain = horiz[y].clone();
            // Runs west to east exactly when reference direction and copy direction agree on east.
            b.path(&chain, positive == mo.is_reversed(v));
        }
        for (col, v) in vert.iter().enumerate() {
            for y in 0..no {
                let south = v[no - 1 - y];
                let north = v[no - y];
                let west = horiz[y][col];
                let east = horiz[y][col + 1];
                let tuple = if mu.is_reversed(col) { [north, west, south, east] } else { [south, east, north, west] };
                b.crossings.push(tuple);
            }
        }
    }
    // Crossingless components: each copy is a circle of its own unless twisted.
    for (c, comp) in d.components.iter().enumerate() {
        for &l in comp {
            let s = d.index_of(l).unwrap();
            if d.heads[s].is_some() {
                continue;
            }
            for j in 0..mults[c].total() {
                let (o, i) = (out_lab[&(l, j)], in_lab[&(l, j)]);
                if o == i {
                    b.succ.insert(o, o);
                } else {
                    b.alias.push((i, o));
                    b.path(&[i, o], mults[c].is_reversed(j));
                }
            }
        }
    }
    assemble(d, mults, b)
}

/// `|twists|` full twists on the copies of one strand, starting from the
/// labels `bottom` (west to east); returns the labels leaving the twist region.
fn full_twists(b: &mut Builder, c: usize, m: Mult, bottom: Vec<Label>, twists: i64) -> Vec<Label> {
    let n = m.total();
    let mut pos = bottom;
    let mut copy: Vec<usize> = (0..n).collect();
    for _ in 0..twists.unsigned_abs() * n as u64 {
        for i in 0..n - 1 {
            let (w, e) = (copy[i], copy[i + 1]);
            let nw = b.fresh((c, e));
            let ne = b.fresh((c, w));
            let (sw, se) = (pos[i], pos[i + 1]);
            // The west strand goes SW -> NE, the east strand SE -> NW.
            b.path(&[sw, ne], m.is_reversed(w));
            b.path(&[se, nw], m.is_reversed(e));
            let west_over = twists > 0;
            let tuple = match (west_over, m.is_reversed(if west_over { e } else { w })) {
                (true, false) => [se, ne, nw, sw],
                (true, true) => [nw, sw, se, ne],
                (false, false) => [sw, se, ne, nw],
                (false, true) => [ne, nw, sw, se],
            };
            b.crossings.push(tuple);
            pos[i] = nw;
            pos[i + 1] = ne;
            copy.swap(i, i + 1);
        }
    }
    debug_assert!(copy.iter().enumerate().all(|(i, &c)| i == c));
    pos
}

fn assemble(d: &Diagram, mults: &[Mult], b: Builder) -> Result<Diagram> {
    let n = b.next as usize + 1;
    let mut uf = UnionFind::new(n);
    for &(x, y) in &b.alias {
        uf.union(x as usize, y as usize);
    }
    let mut rep = |l: Label| uf.find(l as usize) as Label;
    let crossings: Vec<[Label; 4]> = b.crossings.iter().map(|t| t.map(&mut rep)).collect();
    let mut in_tuple = vec![false; n];
    for t in &crossings {
        for &l in t {
            in_tuple[l as usize] = true;
        }
    }
    let mut succ: BTreeMap<Label, Label> = BTreeMap::new();
    for (&x, &y) in &b.succ {
        let (x, y) = (rep(x), rep(y));
        if x != y || !in_tuple[x as usize] {
            succ.insert(x, y);
        }
    }
    // Walk each copy; order components by (component, copy).
    let mut cycles: Vec<((usize, usize), Vec<Label>)> = Vec::new();
    let mut seen = vec![false; n];
    let starts: Vec<Label> = succ.keys().copied().collect();
    for s in starts {
        if seen[s as usize] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut cur = s;
        while !seen[cur as usize] {
            seen[cur as usize] = true;
            cyc.push(cur);
            cur = *succ
                .get(&cur)
                .ok_or_else(|| Error::Invariant(format!("cable strand {cur} has no successor")))?;
        }
        if cur != s {
            return Err(Error::Invariant("cable copies do not close up".into()));
        }
        let owner = b.owner[&s];
        cycles.push((owner, cyc));
    }
    cycles.sort_by_key(|(o, c)| (*o, c.iter().min().copied()));
    // Compact relabeling in traversal order.
    let mut relabel: BTreeMap<Label, Label> = BTreeMap::new();
    for (_, cyc) in &cycles {
        for &l in cyc {
            let k = relabel.len() as Label + 1;
            relabel.insert(l, k);
        }
    }
    let crossings = crossings.iter().map(|t| t.map(|l| relabel[&l])).collect();
    let components: Vec<Vec<Label>> = cycles.iter().map(|(_, c)| c.iter().map(|l| relabel[l]).collect()).collect();
    let framing = cycles
        .iter()
        .map(|((c, _), _)| d.framings.get(*c).copied().unwrap_or(0))
        .collect::<Vec<_>>();
    let _ = mults;
    Diagram::from_spec(&DiagramSpec { crossings, components: Some(components), framing: Some(framing), basepoint: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::ops::linking_matrix;
    use crate::diagram::parse_pd;

    #[test]
    fn single_copy_is_the_diagram() {
        let t = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let w = t.writhe();
        let t = t.with_framings(vec![w]).unwrap();
        let c = cable(&t, &[Mult::new(1, 0)]).unwrap();
        assert_eq!(c.n_crossings(), 3);
        assert_eq!(c.signs, t.signs);
    }

    #[test]
    fn unknot_cables() {
        let u = Diagram::unlink(1);
        let c = cable(&u, &[Mult::new(1, 1)]).unwrap();
        assert_eq!(c.n_crossings(), 0);
        assert_eq!(c.n_components(), 2);
        let u1 = u.clone().with_framings(vec![-1]).unwrap();
        let c = cable(&u1, &[Mult::new(1, 1)]).unwrap();
        assert_eq!(c.n_crossings(), 2);
        assert_eq!(linking_matrix(&c)[0][1], 1);
        let c = cable(&u1, &[Mult::new(2, 0)]).unwrap();
        assert_eq!(linking_matrix(&c)[0][1], -1);
        let c = cable(&u1, &[Mult::new(3, 0)]).unwrap();
        assert_eq!(c.n_crossings(), 6);
        assert!(linking_matrix(&c).iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &v)| i == j || v == -1)));
    }

    #[test]
    fn copies_link_by_the_framing() {
        let t = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        for f in [-4, -3, 0, 2] {
            let tf = t.clone().with_framings(vec![f]).unwrap();
            let c = cable(&tf, &[Mult::new(2, 0)]).unwrap();
            assert_eq!(c.n_components(), 2);
            assert_eq!(linking_matrix(&c)[0][1], f, "framing {f}");
            let c = cable(&tf, &[Mult::new(1, 1)]).unwrap();
            assert_eq!(linking_matrix(&c)[0][1], -f, "framing {f}");
        }
    }

    #[test]
    fn hopf_cable_linking() {
        let h = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        let lk = linking_matrix(&h)[0][1];
        let c = cable(&h, &[Mult::new(2, 0), Mult::new(1, 0)]).unwrap();
        assert_eq!(c.n_crossings(), 4);
        let m = linking_matrix(&c);
        assert_eq!(m[0][2], lk);
        assert_eq!(m[1][2], lk);
        assert_eq!(m[0][1], 0);
        let c = cable(&h, &[Mult::new(0, 0), Mult::new(1, 0)]).unwrap();
        assert_eq!(c.n_crossings(), 0);
        assert_eq!(c.n_components(), 1);
    }
}
