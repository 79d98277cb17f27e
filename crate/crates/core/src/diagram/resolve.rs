//! Complete resolutions of a diagram.

use std::collections::BTreeSet;

use super::pd::{Diagram, Label};
use crate::util::UnionFind;

/// Positions joined by the 0-smoothing and the 1-smoothing.
pub const SMOOTHING_PAIRS: [[(usize, usize); 2]; 2] = [[(0, 1), (2, 3)], [(0, 3), (1, 2)]];

/// A state of the cube: bit `x` is the smoothing chosen at crossing `x`.
pub type State = u64;

/// Circles of one resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateCircles {
    pub state: State,
    /// Strand indices of each circle, sorted; circles ordered by smallest strand.
    pub circles: Vec<Vec<usize>>,
    /// Circle index per strand index.
    pub circle_of: Vec<usize>,
    /// Link components touched by each circle.
    pub circle_components: Vec<BTreeSet<usize>>,
}

impl StateCircles {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    /// Circle strands as labels.
    pub fn circle_labels(&self, d: &Diagram) -> Vec<Vec<Label>> {
        self.circles.iter().map(|c| c.iter().map(|&s| d.labels[s]).collect()).collect()
    }
}

pub fn state_bit(state: State, x: usize) -> u8 {
    ((state >> x) & 1) as u8
}

/// Splices every crossing according to `state`.
pub fn resolve(d: &Diagram, state: State) -> StateCircles {
    let mut uf = UnionFind::new(d.n_strands());
    for (x, t) in d.crossings.iter().enumerate() {
        for &(p, q) in &SMOOTHING_PAIRS[state_bit(state, x) as usize] {
            let a = d.index_of(t[p]).unwrap();
            let b = d.index_of(t[q]).unwrap();
            uf.union(a, b);
        }
    }
    let (circle_of, k) = uf.classes();
    let mut circles = vec![Vec::new(); k];
    let mut circle_components = vec![BTreeSet::new(); k];
    for (s, &c) in circle_of.iter().enumerate() {
        circles[c].push(s);
        circle_components[c].insert(d.component_of[s]);
    }
    StateCircles { state, circles, circle_of, circle_components }
}

/// The state whose resolution is the oriented (Seifert) smoothing.
pub fn oriented_state(d: &Diagram) -> State {
    d.signs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < 0)
        .fold(0, |acc, (x, _)| acc | (1 << x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::pd::parse_pd;

    #[test]
    fn small_resolutions() {
        assert_eq!(resolve(&parse_pd("components: 1").unwrap(), 0).len(), 1);
        // This code is the left-handed trefoil; its mirror has two Seifert circles
        // at the all-0 vertex.
        let left = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(left.n_minus(), 3);
        assert_eq!(resolve(&left, 0).len(), 3);
        assert_eq!(resolve(&left, 0b111).len(), 2);
        let right = crate::diagram::mirror(&left);
        assert_eq!(resolve(&right, 0).len(), 2);
        let hopf = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        assert_eq!(resolve(&hopf, 0b10).len(), 1);
    }

    #[test]
    fn flipping_one_bit_changes_count_by_one() {
        let d = parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap();
        for s in 0..16u64 {
            let n = resolve(&d, s).len() as i64;
            for x in 0..4 {
                let m = resolve(&d, s ^ (1 << x)).len() as i64;
                assert_eq!((n - m).abs(), 1);
            }
        }
    }
}
