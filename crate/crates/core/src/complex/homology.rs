//! Homology over `F2[H]` via Smith normal forms of adjacent differentials.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{smith, DenseMatrix, FrobeniusTheory, ModuleDecomp, Poly};
use crate::error::{Error, Result};

use super::{Gen, GradedComplex};

/// Homology as a bigraded module: `(h, q) -> decomposition`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedModule {
    pub parts: BTreeMap<(i32, i32), ModuleDecomp>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    h: i32,
    q: i32,
    free: usize,
    #[serde(with = "crate::algebra::module::poly_text_list")]
    torsion: Vec<Poly>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

impl Serialize for GradedModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.parts.iter().map(|(&(h, q), m)| Row {
            h,
            q,
            free: m.free,
            torsion: m.torsion.clone(),
            warnings: m.warnings.clone(),
        }))
    }
}

impl<'de> Deserialize<'de> for GradedModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Row>::deserialize(d)?;
        let mut out = GradedModule::default();
        for r in rows {
            let m = ModuleDecomp { free: r.free, torsion: r.torsion, warnings: r.warnings };
            out.add(r.h, r.q, &m);
        }
        Ok(out)
    }
}

impl GradedModule {
    pub fn add(&mut self, h: i32, q: i32, m: &ModuleDecomp) {
        if m.is_zero() && m.warnings.is_empty() {
            return;
        }
        let e = self.parts.entry((h, q)).or_default();
        *e = e.direct_sum(m);
    }

    pub fn get(&self, h: i32, q: i32) -> ModuleDecomp {
        self.parts.get(&(h, q)).cloned().unwrap_or_default()
    }

    pub fn total_free(&self) -> usize {
        self.parts.values().map(|m| m.free).sum()
    }

    pub fn torsion_count(&self) -> usize {
        self.parts.values().map(|m| m.torsion.len()).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion_count() > 0
    }

    pub fn warnings(&self) -> Vec<String> {
        self.parts.values().flat_map(|m| m.warnings.iter().cloned()).collect()
    }

    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        let mut out = self.clone();
        for (&(h, q), m) in &other.parts {
            out.add(h, q, m);
        }
        out
    }

    pub fn shifted(&self, dh: i32, dq: i32) -> GradedModule {
        GradedModule { parts: self.parts.iter().map(|(&(h, q), m)| ((h + dh, q + dq), m.clone())).collect() }
    }

    /// Graded tensor product: degrees add, summands tensor over `R`.
    pub fn tensor(&self, other: &GradedModule) -> GradedModule {
        let mut out = GradedModule::default();
        for (&(h1, q1), a) in &self.parts {
            for (&(h2, q2), b) in &other.parts {
                add_graded_tensor(&mut out, h1 + h2, q1, q2, a, b);
            }
        }
        out
    }

    /// Graded `Tor_1` placed at homological degree `h1 + h2 - 1`.
    ///
    /// `R/H^a{q1} ⊗ R/H^b{q2}` has `Tor_1 = R/H^{min(a,b)}` generated in degree
    /// `q1 + q2 + 2 max(a, b)`, one step down in cohomological degree.
    pub fn tor1(&self, other: &GradedModule) -> GradedModule {
        let mut out = GradedModule::default();
        for (&(h1, q1), a) in &self.parts {
            for (&(h2, q2), b) in &other.parts {
                for f in &a.torsion {
                    for g in &b.torsion {
                        let (Some(x), Some(y)) = (f.h_power(), g.h_power()) else {
                            let mut w = ModuleDecomp::new(0, [Poly::gcd(f, g)]);
                            w.warnings.push("Tor of non-H-power factors placed without grading".into());
                            out.add(h1 + h2 - 1, q1 + q2, &w);
                            continue;
                        };
                        let q = q1 + q2 + 2 * x.max(y) as i32;
                        out.add(h1 + h2 - 1, q, &ModuleDecomp::from_h_powers(0, [x.min(y)]));
                    }
                }
            }
        }
        out
    }

    /// F2-dimension of the graded piece after tensoring with `R/H`.
    pub fn dim_mod_h(&self) -> usize {
        self.parts.values().map(|m| m.dim_mod_h()).sum()
    }

    /// Total rank as F2-vector space in each bidegree, for finite-dimensional modules.
    pub fn f2_dims(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for (&(h, q), m) in &self.parts {
            assert_eq!(m.free, 0, "free summands are infinite dimensional");
            for t in &m.torsion {
                let k = t.h_power().expect("H-power torsion");
                for e in 0..k {
                    *out.entry((h, q + 2 * e as i32)).or_default() += 1;
                }
            }
        }
        out
    }
}

fn add_graded_tensor(out: &mut GradedModule, h: i32, q1: i32, q2: i32, a: &ModuleDecomp, b: &ModuleDecomp) {
    let q = q1 + q2;
    out.add(h, q, &ModuleDecomp::free(a.free * b.free));
    for _ in 0..a.free {
        out.add(h, q, &ModuleDecomp::new(0, b.torsion.iter().cloned()));
    }
    for _ in 0..b.free {
        out.add(h, q, &ModuleDecomp::new(0, a.torsion.iter().cloned()));
    }
    for f in &a.torsion {
        for g in &b.torsion {
            out.add(h, q, &ModuleDecomp::new(0, [Poly::gcd(f, g)]));
        }
    }
}

/// A nonzero homology generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomGen {
    pub q: i32,
    /// `None` for a free summand, else the annihilator `R/(order)`.
    pub order: Option<Poly>,
    /// A representative cycle in chain coordinates.
    pub rep: Vec<Poly>,
}

/// Homology in one degree with everything needed to read off coordinates.
#[derive(Clone, Debug)]
pub struct DegreeHomology {
    pub h: i32,
    pub gens: Vec<HomGen>,
    chain_rank: usize,
    rank_out: usize,
    vb_inv: DenseMatrix,
    u: DenseMatrix,
    skip: usize,
}

/// Homology of a complex with explicit generators and coordinate maps.
#[derive(Clone, Debug)]
pub struct Homology {
    pub theory: FrobeniusTheory,
    pub degrees: BTreeMap<i32, DegreeHomology>,
}

/// A homology class in coordinates relative to [`DegreeHomology::gens`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyClass {
    pub h: i32,
    pub coords: Vec<Poly>,
}

fn q_of(gens: &[Gen], v: &[Poly]) -> Option<i32> {
    v.iter()
        .zip(gens)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, g)| g.q + 2 * c.valuation().unwrap() as i32)
        .min()
}

fn dense_vec_mul(m: &DenseMatrix, v: &[Poly]) -> Vec<Poly> {
    m.data
        .iter()
        .map(|row| {
            let mut acc = Poly::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

/// Computes homology with representatives and coordinate data.
pub fn homology(c: &GradedComplex) -> Homology {
    let mut degrees = BTreeMap::new();
    for h in c.degrees() {
        degrees.insert(h, degree_homology(c, h));
    }
    Homology { theory: c.theory.clone(), degrees }
}

fn degree_homology(c: &GradedComplex, h: i32) -> DegreeHomology {
    let n = c.rank_at(h);
    let sb = smith(&c.d(h), true);
    let tb = sb.transforms.as_ref().unwrap();
    let rank_out = sb.rank();
    // Incoming boundaries in the basis given by the columns of V.
    let a = c.d(h - 1).to_dense();
    let a_v = tb.v_inv.mul(&a);
    let m = n - rank_out;
    let a_k = DenseMatrix::from_rows(a_v.data[rank_out..].to_vec());
    let a_k = if a_k.rows == 0 { DenseMatrix::zeros(0, a.cols) } else { a_k };
    let sa = crate::algebra::smith_dense(&a_k, true);
    let ta = sa.transforms.as_ref().unwrap();
    let skip = sa.diag.iter().take_while(|p| p.is_one()).count();
    let mut gens = Vec::new();
    for t in skip..m {
        let col: Vec<Poly> = (0..m).map(|r| ta.u_inv.data[r][t].clone()).collect();
        let mut rep = vec![Poly::zero(); n];
        for (r, coef) in col.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (i, slot) in rep.iter_mut().enumerate() {
                let v = &tb.v.data[i][rank_out + r];
                if !v.is_zero() {
                    *slot += &(coef * v);
                }
            }
        }
        let q = q_of(c.gens_at(h), &rep).expect("homology generator is nonzero");
        gens.push(HomGen { q, order: sa.diag.get(t).cloned(), rep });
    }
    DegreeHomology { h, gens, chain_rank: n, rank_out, vb_inv: tb.v_inv.clone(), u: ta.u.clone(), skip }
}

impl DegreeHomology {
    /// Coordinates of a cycle; errors if `z` is not a cycle.
    pub fn coords(&self, z: &[Poly]) -> Result<Vec<Poly>> {
        if z.len() != self.chain_rank {
            return Err(Error::Invariant("chain vector has the wrong length".into()));
        }
        let y = dense_vec_mul(&self.vb_inv, z);
        if y[..self.rank_out].iter().any(|p| !p.is_zero()) {
            return Err(Error::NotACycle);
        }
        let c = dense_vec_mul(&self.u, &y[self.rank_out..]);
        let mut out = c[self.skip..].to_vec();
        for (x, g) in out.iter_mut().zip(&self.gens) {
            if let Some(o) = &g.order {
                *x = x.div_rem(o).1;
            }
        }
        Ok(out)
    }

    pub fn module(&self) -> GradedModule {
        let mut m = GradedModule::default();
        for g in &self.gens {
            let d = match &g.order {
                None => ModuleDecomp::free(1),
                Some(o) => ModuleDecomp::new(0, [o.clone()]),
            };
            m.add(self.h, g.q, &d);
        }
        m
    }

    /// Chain representative of a class given by coordinates.
    pub fn representative(&self, coords: &[Poly]) -> Vec<Poly> {
        let mut z = vec![Poly::zero(); self.chain_rank];
        for (c, g) in coords.iter().zip(&self.gens) {
            if c.is_zero() {
                continue;
            }
            for (zi, ri) in z.iter_mut().zip(&g.rep) {
                if !ri.is_zero() {
                    *zi += &(c * ri);
                }
            }
        }
        z
    }

    pub fn reduce(&self, coords: &[Poly]) -> Vec<Poly> {
        coords
            .iter()
            .zip(&self.gens)
            .map(|(x, g)| match &g.order {
                Some(o) => x.div_rem(o).1,
                None => x.clone(),
            })
            .collect()
    }
}

impl Homology {
    pub fn module(&self) -> GradedModule {
        let mut m = GradedModule::default();
        for d in self.degrees.values() {
            m = m.direct_sum(&d.module());
        }
        m
    }

    pub fn at(&self, h: i32) -> Option<&DegreeHomology> {
        self.degrees.get(&h)
    }

    pub fn gens_at(&self, h: i32) -> &[HomGen] {
        self.at(h).map_or(&[], |d| &d.gens)
    }

    /// Class of the `k`-th generator in degree `h`.
    pub fn generator(&self, h: i32, k: usize) -> HomologyClass {
        let n = self.gens_at(h).len();
        let mut coords = vec![Poly::zero(); n];
        coords[k] = Poly::one();
        HomologyClass { h, coords }
    }

    pub fn zero_class(&self, h: i32) -> HomologyClass {
        HomologyClass { h, coords: vec![Poly::zero(); self.gens_at(h).len()] }
    }

    pub fn class_of(&self, h: i32, z: &[Poly]) -> Result<HomologyClass> {
        let d = self
            .at(h)
            .ok_or_else(|| Error::Invariant(format!("no chain group in degree {h}")))?;
        Ok(HomologyClass { h, coords: d.coords(z)? })
    }

    pub fn representative(&self, cls: &HomologyClass) -> Vec<Poly> {
        self.at(cls.h).map_or(Vec::new(), |d| d.representative(&cls.coords))
    }

    pub fn normalize(&self, cls: &HomologyClass) -> HomologyClass {
        match self.at(cls.h) {
            Some(d) => HomologyClass { h: cls.h, coords: d.reduce(&cls.coords) },
            None => cls.clone(),
        }
    }

    pub fn add(&self, a: &HomologyClass, b: &HomologyClass) -> Result<HomologyClass> {
        if a.h != b.h || a.coords.len() != b.coords.len() {
            return Err(Error::Invariant("classes live in different groups".into()));
        }
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        Ok(self.normalize(&HomologyClass { h: a.h, coords }))
    }

    pub fn scale(&self, c: &Poly, a: &HomologyClass) -> HomologyClass {
        self.normalize(&HomologyClass { h: a.h, coords: a.coords.iter().map(|x| c * x).collect() })
    }

    pub fn is_zero(&self, a: &HomologyClass) -> bool {
        self.normalize(a).coords.iter().all(|c| c.is_zero())
    }

    /// q-degree of a homogeneous class (`None` for zero).
    pub fn q_of(&self, a: &HomologyClass) -> Option<i32> {
        let gens = self.gens_at(a.h);
        self.normalize(a)
            .coords
            .iter()
            .zip(gens)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, g)| g.q + 2 * c.valuation().unwrap() as i32)
            .min()
    }
}

/// Homology module from Smith forms alone, without transforms. The grading of
/// kernel and image generators is read from the generators that pivots sit on,
/// which is exact for complexes whose entries are homogeneous monomials.
pub fn homology_oracle(c: &GradedComplex) -> GradedModule {
    let mut out = GradedModule::default();
    for h in c.degrees() {
        let gens = c.gens_at(h);
        let next = smith(&c.d(h), false);
        let prev = smith(&c.d(h - 1), false);
        let mut free: BTreeMap<i32, i64> = BTreeMap::new();
        for &j in &next.col_origin[next.rank()..] {
            *free.entry(gens[j].q).or_default() += 1;
        }
        for (t, p) in prev.diag.iter().enumerate() {
            let q = gens[prev.row_origin[t]].q;
            *free.entry(q).or_default() -= 1;
            if !p.is_one() {
                out.add(h, q, &ModuleDecomp::new(0, [p.clone()]));
            }
        }
        for (q, n) in free {
            assert!(n >= 0, "image larger than kernel at ({h}, {q})");
            out.add(h, q, &ModuleDecomp::free(n as usize));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, simplify};
    use crate::diagram::parse_pd;

    fn bn(pd: &str) -> GradedComplex {
        build_complex(&parse_pd(pd).unwrap(), &FrobeniusTheory::bar_natan()).unwrap()
    }

    #[test]
    fn unknot() {
        let m = homology(&bn("components: 1")).module();
        assert_eq!(m.get(0, -1), ModuleDecomp::free(1));
        assert_eq!(m.get(0, 1), ModuleDecomp::free(1));
        assert_eq!(m.parts.len(), 2);
    }

    #[test]
    fn routes_agree_on_trefoil() {
        let c = bn("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)");
        let tracked = homology(&c).module();
        assert_eq!(tracked, homology_oracle(&c));
        assert_eq!(homology(&simplify(&c)).module(), tracked);
        assert_eq!(tracked.total_free(), 2);
        assert!(tracked.has_torsion());
    }

    #[test]
    fn representatives_have_their_coordinates() {
        let c = simplify(&bn("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"));
        let hom = homology(&c);
        for (&h, d) in &hom.degrees {
            for (k, g) in d.gens.iter().enumerate() {
                let cls = hom.class_of(h, &g.rep).unwrap();
                assert_eq!(cls, hom.generator(h, k));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let m = homology(&bn("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")).module();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<GradedModule>(&s).unwrap(), m);
    }
}
