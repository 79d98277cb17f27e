//! Reduced complexes at a basepoint and the splitting of knot homology.

use serde::{Deserialize, Serialize};

use crate::algebra::FrobeniusTheory;
use crate::diagram::Diagram;
use crate::error::{Error, Result};

use super::build::{build_cube, BuildOptions};
use super::homology::{homology, GradedModule};
use super::reduce::simplify;
use super::GradedComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Image of multiplication by `X` on the basepoint circle (a subcomplex).
    X,
    /// The quotient by that image.
    #[serde(rename = "1")]
    One,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Flavor::X),
            "1" | "one" => Ok(Flavor::One),
            _ => Err(Error::Parse(format!("unknown flavor {s:?}; expected x or 1"))),
        }
    }
}

/// Reduced complex of a based diagram; both flavors keep inherited gradings.
pub fn reduced_complex(d: &Diagram, flavor: Flavor, theory: &FrobeniusTheory) -> Result<GradedComplex> {
    reduced_complex_with(d, flavor, theory, &BuildOptions::default())
}

pub fn reduced_complex_with(
    d: &Diagram,
    flavor: Flavor,
    theory: &FrobeniusTheory,
    opts: &BuildOptions,
) -> Result<GradedComplex> {
    let b = d.basepoint.ok_or(Error::MissingBasepoint)?;
    let bs = d.index_of(b).ok_or(Error::MissingBasepoint)?;
    if !theory.e2.is_zero() {
        return Err(Error::Unsupported("reduced complexes need e2 = 0 for X·A to be a subcomplex".into()));
    }
    let cube = build_cube(d, theory, opts)?;
    let c = &cube.complex;
    let want = matches!(flavor, Flavor::X);
    let keep: Vec<Vec<usize>> = c
        .gens
        .iter()
        .map(|gs| {
            gs.iter()
                .enumerate()
                .filter(|(_, g)| {
                    let circle = cube.circles(g.state).circle_of[bs];
                    (g.labels >> circle & 1 == 1) == want
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let gens = keep.iter().enumerate().map(|(k, ks)| ks.iter().map(|&i| c.gens[k][i].clone()).collect()).collect();
    let diffs = (0..c.gens.len())
        .map(|k| {
            let rows = keep.get(k + 1).cloned().unwrap_or_default();
            c.diffs[k].submatrix(&rows, &keep[k])
        })
        .collect();
    GradedComplex::new(theory.clone(), c.h_min, gens, diffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub pass: bool,
    /// `BN(K) = red_x ⊕ red_1` per bidegree.
    pub sum_matches: bool,
    /// `red_x` equals `red_1` moved up by two in q.
    pub shift_matches: bool,
    pub unreduced: GradedModule,
    pub reduced_x: GradedModule,
    pub reduced_1: GradedModule,
}

/// Compares unreduced homology with the two reduced homologies.
pub fn verify_splitting(d: &Diagram) -> Result<SplittingReport> {
    if d.n_components() != 1 {
        return Err(Error::Unsupported("splitting is checked for knots only".into()));
    }
    let t = FrobeniusTheory::bar_natan();
    let full = homology(&simplify(&super::build_complex(d, &t)?)).module();
    let rx = homology(&simplify(&reduced_complex(d, Flavor::X, &t)?)).module();
    let r1 = homology(&simplify(&reduced_complex(d, Flavor::One, &t)?)).module();
    let sum_matches = rx.direct_sum(&r1) == full;
    let shift_matches = rx == r1.shifted(0, 2);
    Ok(SplittingReport {
        pass: sum_matches && shift_matches,
        sum_matches,
        shift_matches,
        unreduced: full,
        reduced_x: rx,
        reduced_1: r1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn unknot_flavors_have_rank_one() {
        let d = parse_pd("components: 1\nbasepoint: 1").unwrap();
        let t = FrobeniusTheory::bar_natan();
        let x = reduced_complex(&d, Flavor::X, &t).unwrap();
        let one = reduced_complex(&d, Flavor::One, &t).unwrap();
        assert_eq!((x.total_rank(), one.total_rank()), (1, 1));
        assert_eq!(x.gens[0][0].q, 1);
        assert_eq!(one.gens[0][0].q, -1);
    }

    #[test]
    fn missing_basepoint() {
        let d = parse_pd("components: 1").unwrap();
        assert_eq!(
            reduced_complex(&d, Flavor::X, &FrobeniusTheory::bar_natan()).unwrap_err(),
            Error::MissingBasepoint
        );
    }

    #[test]
    fn trefoil_splits() {
        let d = parse_pd("basepoint: 1\nX(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let r = verify_splitting(&d).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
