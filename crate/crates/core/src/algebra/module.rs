//! Finitely generated modules over F2[H] in invariant-factor form.

use serde::{Deserialize, Serialize};

use super::matrix::PolyMatrix;
use super::poly::Poly;
use super::smith::snf;

/// `R^free ⊕ ⊕ R/(t)` for the listed torsion factors `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDecomp {
    pub free: usize,
    #[serde(with = "poly_text_list")]
    pub torsion: Vec<Poly>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ModuleDecomp {
    pub fn free(n: usize) -> Self {
        ModuleDecomp { free: n, ..Default::default() }
    }

    /// Builds a decomposition from torsion factors, dropping units and sorting.
    pub fn new(free: usize, torsion: impl IntoIterator<Item = Poly>) -> Self {
        let mut m = ModuleDecomp { free, torsion: Vec::new(), warnings: Vec::new() };
        for t in torsion {
            m.push_torsion(t);
        }
        m.normalize();
        m
    }

    /// `R^free ⊕ ⊕ R/H^k`.
    pub fn from_h_powers(free: usize, powers: impl IntoIterator<Item = usize>) -> Self {
        Self::new(free, powers.into_iter().map(Poly::monomial))
    }

    fn push_torsion(&mut self, t: Poly) {
        assert!(!t.is_zero(), "zero torsion factor");
        if t.is_one() {
            return;
        }
        if t.h_power().is_none() {
            self.warnings.push(format!("torsion factor {t} is not a power of H"));
        }
        self.torsion.push(t);
    }

    fn normalize(&mut self) {
        self.torsion.sort();
        self.warnings.sort();
        self.warnings.dedup();
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Exponents `k` of the `R/H^k` summands; `None` if some factor is not an H-power.
    pub fn h_powers(&self) -> Option<Vec<usize>> {
        self.torsion.iter().map(|t| t.h_power()).collect()
    }

    /// Dimension over F2 after tensoring with R/H (the H = 0 specialization).
    pub fn dim_mod_h(&self) -> usize {
        self.free + self.torsion.iter().filter(|t| t.valuation() != Some(0)).count()
    }

    pub fn direct_sum(&self, other: &ModuleDecomp) -> ModuleDecomp {
        let mut out = ModuleDecomp {
            free: self.free + other.free,
            torsion: self.torsion.iter().chain(&other.torsion).cloned().collect(),
            warnings: self.warnings.iter().chain(&other.warnings).cloned().collect(),
        };
        out.normalize();
        out
    }

    /// Tensor product over R.
    pub fn tensor(&self, other: &ModuleDecomp) -> ModuleDecomp {
        let mut torsion = Vec::new();
        for _ in 0..self.free {
            torsion.extend(other.torsion.iter().cloned());
        }
        for _ in 0..other.free {
            torsion.extend(self.torsion.iter().cloned());
        }
        for a in &self.torsion {
            for b in &other.torsion {
                torsion.push(Poly::gcd(a, b));
            }
        }
        ModuleDecomp::new(self.free * other.free, torsion)
    }
}

/// Decomposes the cokernel of `presentation` (relations as rows, one column per generator).
pub fn module_decompose(presentation: &PolyMatrix, generators: usize) -> ModuleDecomp {
    assert_eq!(presentation.cols(), generators, "presentation must have one column per generator");
    let diag = snf(presentation);
    ModuleDecomp::new(generators - diag.len(), diag)
}

/// `Tor_1` over R: only pairs of torsion summands contribute, `R/(gcd(f, g))`.
pub fn tor1(a: &ModuleDecomp, b: &ModuleDecomp) -> ModuleDecomp {
    let mut torsion = Vec::new();
    for f in &a.torsion {
        for g in &b.torsion {
            torsion.push(Poly::gcd(f, g));
        }
    }
    ModuleDecomp::new(0, torsion)
}

pub(crate) mod poly_text_list {
    use super::Poly;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Poly], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|p| p.to_text()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Poly>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| Poly::parse_text(s).ok_or_else(|| D::Error::custom(format!("bad polynomial {s:?}"))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decompose_trivial_cases() {
        let m = module_decompose(&PolyMatrix::zeros(0, 3), 3);
        assert_eq!(m, ModuleDecomp::free(3));
        let m = module_decompose(&PolyMatrix::from_entries(1, 1, [(0, 0, Poly::monomial(2))]), 1);
        assert_eq!(m, ModuleDecomp::from_h_powers(0, [2]));
    }

    #[test]
    fn non_h_power_factor_is_reported() {
        let m = module_decompose(&PolyMatrix::from_entries(1, 1, [(0, 0, Poly::from_exponents([0, 1]))]), 1);
        assert_eq!(m.torsion.len(), 1);
        assert_eq!(m.warnings.len(), 1);
    }

    #[test]
    fn tor_examples() {
        let any = ModuleDecomp::from_h_powers(1, [1, 4]);
        assert!(tor1(&ModuleDecomp::free(2), &any).is_zero());
        let h = ModuleDecomp::from_h_powers(0, [1]);
        assert_eq!(tor1(&h, &h), h);
        let a = ModuleDecomp::from_h_powers(0, [2, 3]);
        assert_eq!(tor1(&a, &h), ModuleDecomp::from_h_powers(0, [1, 1]));
    }

    #[test]
    fn json_shape() {
        let m = ModuleDecomp::from_h_powers(1, [2]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"free":1,"torsion":["H^2"],"warnings":[]}"#);
        assert_eq!(serde_json::from_str::<ModuleDecomp>(&s).unwrap(), m);
    }

    fn arb_decomp() -> impl Strategy<Value = ModuleDecomp> {
        (0usize..3, proptest::collection::vec(1usize..5, 0..4))
            .prop_map(|(f, t)| ModuleDecomp::from_h_powers(f, t))
    }

    proptest! {
        #[test]
        fn tor_is_symmetric(a in arb_decomp(), b in arb_decomp()) {
            prop_assert_eq!(tor1(&a, &b), tor1(&b, &a));
        }

        #[test]
        fn tensor_is_symmetric(a in arb_decomp(), b in arb_decomp()) {
            prop_assert_eq!(a.tensor(&b), b.tensor(&a));
        }
    }
}
