//! Faces of the planar projection, via the corners around each crossing.

use super::pd::Diagram;
use crate::util::UnionFind;

/// Corner `(x, p)` is the sector between positions `p` and `p + 1` at crossing `x`.
pub fn corner(x: usize, p: usize) -> usize {
    4 * x + p % 4
}

/// Corner unions that make up the faces of the projection.
pub fn face_union(d: &Diagram) -> UnionFind {
    let mut uf = UnionFind::new(4 * d.n_crossings());
    for s in 0..d.n_strands() {
        if let (Some(t), Some(h)) = (d.tails[s], d.heads[s]) {
            // Left side of the strand, then the right side.
            uf.union(corner(t.crossing, t.pos), corner(h.crossing, h.pos + 3));
            uf.union(corner(t.crossing, t.pos + 3), corner(h.crossing, h.pos));
        }
    }
    uf
}

/// Face id per corner, and the face count (crossingless loops excluded).
pub fn faces(d: &Diagram) -> (Vec<usize>, usize) {
    face_union(d).classes()
}

/// Corner lying to the left of strand `s` (the sector it leaves from), if any.
pub fn left_corner(d: &Diagram, s: usize) -> Option<usize> {
    d.tails[s].map(|t| corner(t.crossing, t.pos))
}

/// Corner lying to the right of strand `s`.
pub fn right_corner(d: &Diagram, s: usize) -> Option<usize> {
    d.tails[s].map(|t| corner(t.crossing, t.pos + 3))
}

/// Faces of the whole plane picture.
///
/// Split pieces sit side by side in one unbounded face: the outer face of a
/// piece is the one to the right of its smallest strand label. Crossingless
/// loops are drawn counterclockwise, so their inside lies on their left.
#[derive(Clone, Debug)]
pub struct PlanarFaces {
    /// Face per corner; face 0 is the unbounded face.
    pub face_of_corner: Vec<usize>,
    /// Inside face per strand index of a crossingless loop.
    pub loop_inside: Vec<Option<usize>>,
    pub n_faces: usize,
}

pub const OUTER_FACE: usize = 0;

impl PlanarFaces {
    pub fn new(d: &Diagram) -> Self {
        let n = d.n_crossings();
        let outer = 4 * n;
        let mut uf = face_union(d);
        let mut big = UnionFind::new(4 * n + 1);
        for c in 0..4 * n {
            big.union(c, uf.find(c));
        }
        // Pieces: crossings linked by strands.
        let mut pieces = UnionFind::new(n);
        for s in 0..d.n_strands() {
            if let (Some(t), Some(h)) = (d.tails[s], d.heads[s]) {
                pieces.union(t.crossing, h.crossing);
            }
        }
        let mut first_strand = vec![None; n];
        for s in 0..d.n_strands() {
            if let Some(t) = d.tails[s] {
                let p = pieces.find(t.crossing);
                if first_strand[p].is_none() {
                    first_strand[p] = Some(s);
                }
            }
        }
        for s in first_strand.into_iter().flatten() {
            big.union(outer, right_corner(d, s).unwrap());
        }
        // Renumber so that the unbounded face is 0.
        let mut id = vec![usize::MAX; 4 * n + 1];
        let root = big.find(outer);
        id[root] = OUTER_FACE;
        let mut next = 1;
        let mut face_of_corner = vec![0; 4 * n];
        for (c, f) in face_of_corner.iter_mut().enumerate() {
            let r = big.find(c);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            *f = id[r];
        }
        let mut loop_inside = vec![None; d.n_strands()];
        for (s, slot) in loop_inside.iter_mut().enumerate() {
            if d.heads[s].is_none() {
                *slot = Some(next);
                next += 1;
            }
        }
        PlanarFaces { face_of_corner, loop_inside, n_faces: next }
    }

    /// Face on the given side of strand `s`.
    pub fn side(&self, d: &Diagram, s: usize, left: bool) -> usize {
        match self.loop_inside[s] {
            Some(inside) => {
                if left {
                    inside
                } else {
                    OUTER_FACE
                }
            }
            None => {
                let c = if left { left_corner(d, s) } else { right_corner(d, s) };
                self.face_of_corner[c.unwrap()]
            }
        }
    }
}
