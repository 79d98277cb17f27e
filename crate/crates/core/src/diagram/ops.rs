//! Diagram constructors and linking data.

use super::pd::{Diagram, DiagramSpec, Label};
use crate::error::Result;

/// Swaps over and under at every crossing, keeping orientations; framings negate.
pub fn mirror(d: &Diagram) -> Diagram {
    let crossings = d
        .crossings
        .iter()
        .zip(&d.signs)
        .map(|(t, &s)| if s > 0 { [t[3], t[0], t[1], t[2]] } else { [t[1], t[2], t[3], t[0]] })
        .collect();
    let spec = DiagramSpec {
        crossings,
        components: Some(d.components.clone()),
        framing: Some(d.framings.iter().map(|f| -f).collect()),
        basepoint: d.basepoint,
    };
    Diagram::from_spec(&spec).expect("mirror of a valid diagram is valid")
}

/// Relabels strands by adding `offset`.
pub fn shift_labels(d: &Diagram, offset: Label) -> Diagram {
    let spec = DiagramSpec {
        crossings: d.crossings.iter().map(|t| t.map(|l| l + offset)).collect(),
        components: Some(d.components.iter().map(|c| c.iter().map(|l| l + offset).collect()).collect()),
        framing: Some(d.framings.clone()),
        basepoint: d.basepoint.map(|b| b + offset),
    };
    Diagram::from_spec(&spec).expect("relabeling preserves validity")
}

/// Places `d2` beside `d1`; the labels of `d2` move past those of `d1`.
pub fn disjoint_union(d1: &Diagram, d2: &Diagram) -> Diagram {
    let d2 = shift_labels(d2, d1.max_label());
    let mut spec = d1.to_spec();
    spec.crossings.extend(d2.crossings.iter().copied());
    spec.components.get_or_insert_with(Vec::new).extend(d2.components.iter().cloned());
    spec.framing.get_or_insert_with(Vec::new).extend(d2.framings.iter().copied());
    spec.basepoint = d1.basepoint.or(d2.basepoint);
    Diagram::from_spec(&spec).expect("disjoint union of valid diagrams is valid")
}

/// Symmetric matrix of pairwise linking numbers (zero diagonal).
pub fn linking_matrix(d: &Diagram) -> Vec<Vec<i64>> {
    let n = d.n_components();
    let mut m = vec![vec![0i64; n]; n];
    for (x, t) in d.crossings.iter().enumerate() {
        let a = d.component_of[d.index_of(t[0]).unwrap()];
        let b = d.component_of[d.index_of(t[1]).unwrap()];
        if a != b {
            m[a][b] += d.signs[x] as i64;
            m[b][a] += d.signs[x] as i64;
        }
    }
    for row in &mut m {
        for v in row.iter_mut() {
            *v /= 2;
        }
    }
    m
}

/// Total linking number: half the signed count of inter-component crossings.
pub fn linking_number(d: &Diagram) -> i64 {
    let m = linking_matrix(d);
    (0..m.len()).flat_map(|i| (i + 1..m.len()).map(move |j| (i, j))).map(|(i, j)| m[i][j]).sum()
}

/// Total linking number of the sublink made of the listed components.
pub fn sublink_linking_number(m: &[Vec<i64>], comps: &[usize]) -> i64 {
    let mut total = 0;
    for (k, &i) in comps.iter().enumerate() {
        for &j in &comps[k + 1..] {
            total += m[i][j];
        }
    }
    total
}

/// Writhe of one component: signed count of its self-crossings.
pub fn self_writhe(d: &Diagram, comp: usize) -> i64 {
    d.crossings
        .iter()
        .zip(&d.signs)
        .filter(|(t, _)| {
            let a = d.component_of[d.index_of(t[0]).unwrap()];
            let b = d.component_of[d.index_of(t[1]).unwrap()];
            a == comp && b == comp
        })
        .map(|(_, &s)| s as i64)
        .sum()
}

pub fn reverse_all(d: &Diagram) -> Result<Diagram> {
    // Reversing every strand moves the incoming under-strand to position 2.
    let spec = DiagramSpec {
        crossings: d.crossings.iter().map(|t| [t[2], t[3], t[0], t[1]]).collect(),
        components: Some(d.components.iter().map(|c| c.iter().rev().copied().collect()).collect()),
        framing: Some(d.framings.clone()),
        basepoint: d.basepoint,
    };
    Diagram::from_spec(&spec)
}
