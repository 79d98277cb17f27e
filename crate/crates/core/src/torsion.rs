//! H-torsion orders of homology classes and the primitivity test.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::f2::{columns_at, BitVec, Echelon};
use crate::algebra::{FrobeniusTheory, Poly, PolyMatrix};
use crate::complex::{Gen, GradedComplex, Homology, HomologyClass};

/// Least `k` with `H^k v = 0`, or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorsionOrder {
    Finite(usize),
    Infinite,
}

impl TorsionOrder {
    /// Order of `H v` given the order of `v`.
    pub fn after_h(self) -> TorsionOrder {
        match self {
            TorsionOrder::Finite(k) => TorsionOrder::Finite(k.saturating_sub(1)),
            TorsionOrder::Infinite => TorsionOrder::Infinite,
        }
    }
}

impl fmt::Display for TorsionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionOrder::Finite(k) => write!(f, "{k}"),
            TorsionOrder::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for TorsionOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TorsionOrder::Finite(k) => s.serialize_u64(*k as u64),
            TorsionOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for TorsionOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|k| TorsionOrder::Finite(k as usize))
                .ok_or_else(|| serde::de::Error::custom("order must be a non-negative integer")),
            serde_json::Value::String(s) if s == "inf" => Ok(TorsionOrder::Infinite),
            other => Err(serde::de::Error::custom(format!("bad torsion order {other}"))),
        }
    }
}

/// Torsion order with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub order: TorsionOrder,
    /// `H^(k-1) v`, a nonzero class killed by `H`, when the order `k` is positive and finite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<HomologyClass>,
}

impl TorsionReport {
    /// Rechecks the certificate against the module.
    pub fn verify(&self, hom: &Homology, cls: &HomologyClass) -> bool {
        match self.order {
            TorsionOrder::Infinite => {
                let mut v = hom.normalize(cls);
                // A free coordinate never dies; probing well past every torsion exponent is enough.
                let bound = hom.gens_at(cls.h).iter().filter_map(|g| g.order.as_ref()?.degree()).max().unwrap_or(0);
                for _ in 0..=bound {
                    v = hom.scale(&Poly::h(), &v);
                }
                !hom.is_zero(&v)
            }
            TorsionOrder::Finite(k) => {
                let killed = hom.is_zero(&hom.scale(&Poly::monomial(k), cls));
                let alive = k == 0 || !hom.is_zero(&hom.scale(&Poly::monomial(k - 1), cls));
                killed && alive
            }
        }
    }
}

/// Torsion order of a class, read off its coordinates in the Smith basis.
pub fn torsion_order(hom: &Homology, cls: &HomologyClass) -> TorsionReport {
    let v = hom.normalize(cls);
    let gens = hom.gens_at(v.h);
    let mut k = 0;
    for (c, g) in v.coords.iter().zip(gens) {
        if c.is_zero() {
            continue;
        }
        let Some(o) = &g.order else {
            return TorsionReport { order: TorsionOrder::Infinite, witness: None };
        };
        let a = o.valuation().unwrap_or(0);
        let unit_part = o.shr(a);
        // On the part of the order prime to H, multiplication by H is invertible.
        if !unit_part.divides(c) {
            return TorsionReport { order: TorsionOrder::Infinite, witness: None };
        }
        k = k.max(a.saturating_sub(c.valuation().unwrap_or(0)));
    }
    let witness = (k > 0).then(|| hom.scale(&Poly::monomial(k - 1), &v));
    TorsionReport { order: TorsionOrder::Finite(k), witness }
}

/// Outcome of the primitivity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primitivity {
    /// The class survives at `H = 0`, so `H` does not divide it.
    Primitive,
    /// The class is `H w` for an explicit `w`.
    Divisible,
    Inconclusive,
}

impl Serialize for Primitivity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Primitivity::Primitive => s.serialize_bool(true),
            Primitivity::Divisible => s.serialize_bool(false),
            Primitivity::Inconclusive => s.serialize_str("inconclusive"),
        }
    }
}

impl<'de> Deserialize<'de> for Primitivity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Bool(true) => Ok(Primitivity::Primitive),
            serde_json::Value::Bool(false) => Ok(Primitivity::Divisible),
            serde_json::Value::String(s) if s == "inconclusive" => Ok(Primitivity::Inconclusive),
            other => Err(serde::de::Error::custom(format!("bad primitivity value {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitivityReport {
    pub primitive: Primitivity,
    /// For a primitive class, the chain representative reduced at `H = 0`
    /// (indices of its nonzero entries); for a divisible one, `w` with `v = H w`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_support: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<HomologyClass>,
}

/// Tests whether a class of `H(c)` has nonzero image in the homology of `c` at `H = 0`.
pub fn primitivity_check(c: &GradedComplex, hom: &Homology, cls: &HomologyClass) -> PrimitivityReport {
    let v = hom.normalize(cls);
    if v.coords.iter().all(|x| x.is_zero() || x.valuation() >= Some(1)) {
        let quotient = HomologyClass { h: v.h, coords: v.coords.iter().map(|x| x.shr(1)).collect() };
        return PrimitivityReport { primitive: Primitivity::Divisible, reduced_support: None, quotient: Some(quotient) };
    }
    let z = BitVec::from_polys(&hom.representative(&v), false);
    let mut boundaries = Echelon::new();
    for col in columns_at(&c.d(v.h - 1), false) {
        boundaries.insert(&col);
    }
    if boundaries.contains(&z) {
        PrimitivityReport { primitive: Primitivity::Inconclusive, reduced_support: None, quotient: None }
    } else {
        PrimitivityReport { primitive: Primitivity::Primitive, reduced_support: Some(z.ones().collect()), quotient: None }
    }
}

/// Combined JSON-facing report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub order: TorsionOrder,
    pub primitive: Primitivity,
}

pub fn class_report(c: &GradedComplex, hom: &Homology, cls: &HomologyClass) -> ClassReport {
    ClassReport { order: torsion_order(hom, cls).order, primitive: primitivity_check(c, hom, cls).primitive }
}

/// A two-term complex whose degree-0 homology is `F2[H]^free ⊕ ⊕ F2[H]/H^k`.
///
/// Generators in degree 0 come first as the free part, then one per torsion
/// summand in the given order.
pub fn synthetic_complex(free: usize, torsion: &[usize]) -> GradedComplex {
    let zero = Gen { q: 0, state: 0, labels: 0 };
    let top: Vec<Gen> = vec![zero.clone(); free + torsion.len()];
    let bottom: Vec<Gen> = torsion.iter().map(|&k| Gen { q: 2 * k as i32, ..zero.clone() }).collect();
    let d = PolyMatrix::from_entries(top.len(), bottom.len(), torsion.iter().enumerate().map(|(j, &k)| (free + j, j, Poly::monomial(k))));
    let n = top.len();
    GradedComplex::new(FrobeniusTheory::bar_natan(), -1, vec![bottom, top], vec![d, PolyMatrix::zeros(0, n)])
        .expect("synthetic complex has consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, homology, simplify};
    use crate::diagram::Diagram;

    fn class(hom: &Homology, coords: Vec<Poly>) -> HomologyClass {
        hom.normalize(&HomologyClass { h: 0, coords })
    }

    #[test]
    fn synthetic_orders() {
        let c = synthetic_complex(1, &[3]);
        let hom = homology(&c);
        let gens = hom.gens_at(0);
        assert_eq!(gens.len(), 2);
        let t = gens.iter().position(|g| g.order.is_some()).unwrap();
        let mut coords = vec![Poly::zero(); 2];
        coords[t] = Poly::one();
        let g = class(&hom, coords);
        assert_eq!(torsion_order(&hom, &g).order, TorsionOrder::Finite(3));
        let hg = hom.scale(&Poly::h(), &g);
        assert_eq!(torsion_order(&hom, &hg).order, TorsionOrder::Finite(2));
        assert!(torsion_order(&hom, &g).verify(&hom, &g));
        let zero = hom.zero_class(0);
        assert_eq!(torsion_order(&hom, &zero).order, TorsionOrder::Finite(0));
        let f = hom.generator(0, 1 - t);
        let r = torsion_order(&hom, &f);
        assert_eq!(r.order, TorsionOrder::Infinite);
        assert!(r.verify(&hom, &f));
    }

    #[test]
    fn json_forms() {
        let r = ClassReport { order: TorsionOrder::Infinite, primitive: Primitivity::Primitive };
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"order":"inf","primitive":true}"#);
        let r = ClassReport { order: TorsionOrder::Finite(2), primitive: Primitivity::Inconclusive };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"order":2,"primitive":"inconclusive"}"#);
        assert_eq!(serde_json::from_str::<ClassReport>(&s).unwrap(), r);
    }

    #[test]
    fn unknot_generators_are_primitive() {
        let c = simplify(&build_complex(&Diagram::unlink(1), &FrobeniusTheory::bar_natan()).unwrap());
        let hom = homology(&c);
        for k in 0..2 {
            let g = hom.generator(0, k);
            assert_eq!(primitivity_check(&c, &hom, &g).primitive, Primitivity::Primitive);
            let hg = hom.scale(&Poly::h(), &g);
            let r = primitivity_check(&c, &hom, &hg);
            assert_eq!(r.primitive, Primitivity::Divisible);
            assert_eq!(hom.scale(&Poly::h(), &r.quotient.unwrap()), hg);
        }
    }

    #[test]
    fn torsion_generator_is_primitive() {
        let c = synthetic_complex(0, &[1]);
        let hom = homology(&c);
        let g = hom.generator(0, 0);
        let r = primitivity_check(&c, &hom, &g);
        assert_eq!(r.primitive, Primitivity::Primitive);
        assert_eq!(r.reduced_support, Some(vec![0]));
    }
}
