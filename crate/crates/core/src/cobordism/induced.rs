//! Maps on homology.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{FrobeniusTheory, Poly, PolyMatrix};
use crate::complex::{homology, BuildOptions, ChainMap, GradedComplex, Homology, HomologyClass};
use crate::error::{Error, Result};

use super::maps::movie_map;
use super::{same_frame, Movie};

/// A module map between homologies, as matrices in the generator bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyMap {
    pub h_shift: i32,
    pub q_shift: i32,
    /// Matrix from the generators in degree `h` to those in degree `h + h_shift`.
    pub blocks: BTreeMap<i32, PolyMatrix>,
}

impl HomologyMap {
    pub fn apply(&self, cls: &HomologyClass, target: &Homology) -> HomologyClass {
        let h = cls.h + self.h_shift;
        let n = target.gens_at(h).len();
        let coords = match self.blocks.get(&cls.h) {
            Some(m) => m.apply_dense(&cls.coords),
            None => vec![Poly::zero(); n],
        };
        target.normalize(&HomologyClass { h, coords })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &HomologyMap, target: &Homology) -> HomologyMap {
        let blocks = self
            .blocks
            .iter()
            .map(|(&h, m)| {
                let mid = h + self.h_shift;
                let prod = match other.blocks.get(&mid) {
                    Some(o) => o.mul(m),
                    None => PolyMatrix::zeros(target.gens_at(mid + other.h_shift).len(), m.cols()),
                };
                (h, reduce_rows(&prod, target, mid + other.h_shift))
            })
            .collect();
        HomologyMap { h_shift: self.h_shift + other.h_shift, q_shift: self.q_shift + other.q_shift, blocks }
    }

    pub fn identity(hom: &Homology) -> HomologyMap {
        let blocks = hom.degrees.iter().map(|(&h, d)| (h, PolyMatrix::identity(d.gens.len()))).collect();
        HomologyMap { h_shift: 0, q_shift: 0, blocks }
    }

    /// Scalar multiplication by `c`.
    pub fn scalar(hom: &Homology, c: &Poly) -> HomologyMap {
        let blocks = hom
            .degrees
            .iter()
            .map(|(&h, d)| {
                let n = d.gens.len();
                let m = PolyMatrix::from_entries(n, n, (0..n).map(|i| (i, i, c.clone())));
                (h, reduce_rows(&m, hom, h))
            })
            .collect();
        HomologyMap { h_shift: 0, q_shift: 2 * c.degree().unwrap_or(0) as i32, blocks }
    }
}

fn reduce_rows(m: &PolyMatrix, hom: &Homology, h: i32) -> PolyMatrix {
    let gens = hom.gens_at(h);
    let entries: Vec<(usize, usize, Poly)> = m
        .entries()
        .map(|(i, j, p)| {
            let r = match &gens[i].order {
                Some(o) => p.div_rem(o).1,
                None => p.clone(),
            };
            (i, j, r)
        })
        .collect();
    PolyMatrix::from_entries(m.rows(), m.cols(), entries)
}

/// The map on homology induced by a chain map `f: src -> dst`.
pub fn induced_on_homology(
    f: &ChainMap,
    src: &GradedComplex,
    src_hom: &Homology,
    dst: &GradedComplex,
    dst_hom: &Homology,
) -> Result<HomologyMap> {
    let mut blocks = BTreeMap::new();
    for (&h, deg) in &src_hom.degrees {
        let block = f.block(src, dst, h);
        let th = h + f.h_shift;
        let n_dst = dst_hom.gens_at(th).len();
        let mut entries = Vec::new();
        for (j, g) in deg.gens.iter().enumerate() {
            let image = block.apply_dense(&g.rep);
            if image.iter().all(|p| p.is_zero()) {
                continue;
            }
            let cls = dst_hom.class_of(th, &image)?;
            for (i, c) in cls.coords.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, c));
                }
            }
        }
        blocks.insert(h, PolyMatrix::from_entries(n_dst, deg.gens.len(), entries));
    }
    Ok(HomologyMap { h_shift: f.h_shift, q_shift: f.q_shift, blocks })
}

/// Multiplication by `H`: the effect of tubing a dotted torus into the surface.
pub fn h_action(hom: &Homology, cls: &HomologyClass) -> HomologyClass {
    hom.scale(&Poly::h(), cls)
}

/// `m1(input) + m2(input)` in the homology of the common end diagram.
///
/// The input is a class in the homology of the simplified start complex.
pub fn distinguishing_element(
    m1: &Movie,
    m2: &Movie,
    input: &HomologyClass,
    theory: &FrobeniusTheory,
    opts: &BuildOptions,
) -> Result<(HomologyClass, Homology)> {
    if !same_frame(&m1.start, &m2.start) {
        return Err(Error::FrameMismatch("the two movies start at different diagrams".into()));
    }
    let (e1, e2) = (m1.end_diagram()?, m2.end_diagram()?);
    if !same_frame(&e1, &e2) {
        return Err(Error::FrameMismatch("the two movies end at different diagrams".into()));
    }
    let a = movie_map(m1, theory, opts)?;
    let b = movie_map(m2, theory, opts)?;
    if a.map.h_shift != b.map.h_shift || a.map.q_shift != b.map.q_shift {
        return Err(Error::FrameMismatch("the two movies have different degrees".into()));
    }
    let src_hom = homology(&a.source);
    let dst_hom = homology(&a.target);
    let z = src_hom.representative(input);
    if z.len() != a.source.rank_at(input.h) {
        return Err(Error::Invariant(format!("input class does not fit degree {}", input.h)));
    }
    let za = a.map.block(&a.source, &a.target, input.h).apply_dense(&z);
    let zb = b.map.block(&b.source, &b.target, input.h).apply_dense(&z);
    let sum: Vec<Poly> = za.iter().zip(&zb).map(|(x, y)| x + y).collect();
    let cls = dst_hom.class_of(input.h + a.map.h_shift, &sum)?;
    Ok((cls, dst_hom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Diagram;

    fn induced(text: &str) -> (HomologyMap, Homology) {
        let m = Movie::parse(text).unwrap();
        let mm = movie_map(&m, &FrobeniusTheory::bar_natan(), &BuildOptions::default()).unwrap();
        mm.map.check(&mm.source, &mm.target).unwrap();
        let hs = homology(&mm.source);
        let ht = homology(&mm.target);
        (induced_on_homology(&mm.map, &mm.source, &hs, &mm.target, &ht).unwrap(), ht)
    }

    #[test]
    fn closed_surfaces() {
        let (sphere, _) = induced("start:\nbirth\ndeath 1\n");
        assert_eq!(sphere.blocks[&0].get(0, 0), Poly::zero());
        let (dotted, _) = induced("start:\nbirth\ndot 1\ndeath 1\n");
        assert_eq!(dotted.blocks[&0].get(0, 0), Poly::one());
        let (torus, _) = induced("start:\nbirth\nsaddle 1 1\nsaddle 1 2\ndeath 1\n");
        assert_eq!(torus.blocks[&0].get(0, 0), Poly::zero());
        let (dotted_torus, _) = induced("start:\nbirth\nsaddle 1 1\nsaddle 1 2\ndot 1\ndeath 1\n");
        assert_eq!(dotted_torus.blocks[&0].get(0, 0), Poly::h());
    }

    #[test]
    fn stabilization_is_multiplication_by_h() {
        for movie in [
            "start: components: 1\nsaddle 1 1\nsaddle 1 2\n",
            "start: components: 1\nbirth\nsaddle 2 2\nsaddle 2 3\ndot 2\ndeath 2\n",
        ] {
            let (m, hom) = induced(movie);
            assert_eq!(m, HomologyMap::scalar(&hom, &Poly::h()), "{movie}");
        }
    }

    #[test]
    fn dotted_annulus_is_multiplication_by_x() {
        // Birth of a circle, a dot on it, and a merge into the unknot.
        let (m, hom) = induced("start: components: 1\nbirth\ndot 2\nsaddle 1 2\n");
        // Generators of BN(U) sit at q = -1 (the unit) and q = +1 (X).
        let g = &hom.gens_at(0);
        assert_eq!(g.len(), 2);
        let one = g.iter().position(|x| x.q == -1).unwrap();
        let x = 1 - one;
        assert_eq!(m.blocks[&0].get(x, one), Poly::one());
        assert_eq!(m.blocks[&0].get(one, one), Poly::zero());
        assert_eq!(m.blocks[&0].get(x, x), Poly::h());
    }

    #[test]
    fn canceling_kinks_induce_the_identity() {
        let (m, hom) = induced("start: X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)\nr1+ 2 over left\nr1- 7\n");
        assert_eq!(m, HomologyMap::identity(&hom));
        let d = Diagram::unlink(1);
        let plain = Movie::new(d.clone(), vec![]);
        let kinked = Movie::parse("start: components: 1\nr1+ 1 under right\nr1- 2\n").unwrap();
        let hom = homology(&crate::complex::simplify(&crate::complex::build_complex(&d, &FrobeniusTheory::bar_natan()).unwrap()));
        for k in 0..2 {
            let (delta, target) = distinguishing_element(
                &plain,
                &kinked,
                &hom.generator(0, k),
                &FrobeniusTheory::bar_natan(),
                &BuildOptions::default(),
            )
            .unwrap();
            assert!(target.is_zero(&delta));
        }
    }
}
