//! The rank-two Frobenius algebra `A = R[X]/(X^2 - e1 X + e2)` over `R = F2[H]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::error::Error;

/// An element `c[0]·1 + c[1]·X` of `A`.
pub type Elem = [Poly; 2];

/// An element of `A ⊗ A`; `t[i][j]` is the coefficient of `b_i ⊗ b_j` with `b_0 = 1`, `b_1 = X`.
pub type Elem2 = [[Poly; 2]; 2];

/// A specialization of the equivariant parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrobeniusTheory {
    pub e1: Poly,
    pub e2: Poly,
}

impl FrobeniusTheory {
    /// `e1 = H`, `e2 = 0`: `X^2 = HX`.
    pub fn bar_natan() -> Self {
        FrobeniusTheory { e1: Poly::h(), e2: Poly::zero() }
    }

    /// `H` set to 1: `X^2 = X`.
    pub fn localized() -> Self {
        FrobeniusTheory { e1: Poly::one(), e2: Poly::zero() }
    }

    /// Roots `λ1, λ2`: `e1 = λ1 + λ2`, `e2 = λ1 λ2`.
    pub fn deformation(l1: &Poly, l2: &Poly) -> Self {
        FrobeniusTheory { e1: l1 + l2, e2: l1 * l2 }
    }

    pub fn is_bar_natan(&self) -> bool {
        *self == Self::bar_natan()
    }

    /// True when `X` and `H` both raise q by 2 and the structure maps respect it,
    /// which holds iff `e1 ∈ {0, H}` and `e2 ∈ {0, H^2}`.
    pub fn is_graded(&self) -> bool {
        (self.e1.is_zero() || self.e1 == Poly::h()) && (self.e2.is_zero() || self.e2 == Poly::monomial(2))
    }

    pub fn unit(&self) -> Elem {
        [Poly::one(), Poly::zero()]
    }

    pub fn counit(&self, a: &Elem) -> Poly {
        a[1].clone()
    }

    /// Product of basis elements `b_i b_j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> Elem {
        match (i, j) {
            (0, 0) => [Poly::one(), Poly::zero()],
            (0, 1) | (1, 0) => [Poly::zero(), Poly::one()],
            // X^2 = e1 X - e2, and signs vanish in characteristic 2.
            _ => [self.e2.clone(), self.e1.clone()],
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = [Poly::zero(), Poly::zero()];
        for i in 0..2 {
            for j in 0..2 {
                let c = &a[i] * &b[j];
                if c.is_zero() {
                    continue;
                }
                let e = self.mul_basis(i, j);
                out[0] += &(&c * &e[0]);
                out[1] += &(&c * &e[1]);
            }
        }
        out
    }

    /// Coproduct of a basis element.
    pub fn comul_basis(&self, i: usize) -> Elem2 {
        let (z, o) = (Poly::zero, Poly::one);
        match i {
            // 1 ⊗ X + X ⊗ 1 + e1 (1 ⊗ 1)
            0 => [[self.e1.clone(), o()], [o(), z()]],
            // X ⊗ X + e2 (1 ⊗ 1)
            _ => [[self.e2.clone(), z()], [z(), o()]],
        }
    }

    pub fn comul(&self, a: &Elem) -> Elem2 {
        let mut out: Elem2 = Default::default();
        for (k, c) in a.iter().enumerate() {
            let d = self.comul_basis(k);
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] += &(c * &d[i][j]);
                }
            }
        }
        out
    }

    /// Multiplication by `X`.
    pub fn dot(&self, a: &Elem) -> Elem {
        self.mul(&[Poly::zero(), Poly::one()], a)
    }

    pub fn scale(&self, c: &Poly, a: &Elem) -> Elem {
        [c * &a[0], c * &a[1]]
    }

    /// Multiplication `A ⊗ A → A`.
    pub fn mul2(&self, t: &Elem2) -> Elem {
        let mut out = [Poly::zero(), Poly::zero()];
        for i in 0..2 {
            for j in 0..2 {
                let e = self.scale(&t[i][j], &self.mul_basis(i, j));
                out[0] += &e[0];
                out[1] += &e[1];
            }
        }
        out
    }

    /// `ε(a b)`.
    pub fn pairing(&self, a: &Elem, b: &Elem) -> Poly {
        self.counit(&self.mul(a, b))
    }

    /// Closed connected surface of genus `g` carrying `d` dots.
    pub fn closed_surface_eval(&self, genus: usize, dots: usize) -> Poly {
        let mut a = self.unit();
        for _ in 0..dots {
            a = self.dot(&a);
        }
        for _ in 0..genus {
            a = self.mul2(&self.comul(&a));
        }
        self.counit(&a)
    }

    pub fn name(&self) -> String {
        if self.is_bar_natan() {
            "bn".into()
        } else if *self == Self::localized() {
            "h1".into()
        } else {
            format!("e1={},e2={}", self.e1, self.e2)
        }
    }
}

impl Default for FrobeniusTheory {
    fn default() -> Self {
        Self::bar_natan()
    }
}

impl fmt::Display for FrobeniusTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Accepts `bn`, `h1` and `sigma:λ1,λ2` with each root written like `H^2 + 1`.
impl FromStr for FrobeniusTheory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s {
            "bn" => return Ok(Self::bar_natan()),
            "h1" => return Ok(Self::localized()),
            _ => {}
        }
        let bad = || Error::Parse(format!("unknown theory {s:?}; expected bn, h1 or sigma:l1,l2"));
        let roots = s.strip_prefix("sigma:").ok_or_else(bad)?;
        let (a, b) = roots.split_once(',').ok_or_else(bad)?;
        let l1 = Poly::parse_text(a).ok_or_else(bad)?;
        let l2 = Poly::parse_text(b).ok_or_else(bad)?;
        Ok(Self::deformation(&l1, &l2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> [Elem; 2] {
        [[Poly::one(), Poly::zero()], [Poly::zero(), Poly::one()]]
    }

    fn theories() -> Vec<FrobeniusTheory> {
        vec![
            FrobeniusTheory::bar_natan(),
            FrobeniusTheory::localized(),
            FrobeniusTheory::deformation(&Poly::one(), &Poly::h()),
            FrobeniusTheory::deformation(&Poly::h(), &Poly::monomial(2)),
        ]
    }

    #[test]
    fn x_squared() {
        let t = FrobeniusTheory::bar_natan();
        assert_eq!(t.mul_basis(1, 1), [Poly::zero(), Poly::h()]);
    }

    #[test]
    fn comultiplication_is_dual_to_multiplication() {
        // Brute force: <Δ(a), b ⊗ c> = <a, b c> on the basis pins Δ uniquely,
        // since the pairing matrix [[0, 1], [1, e1]] is invertible.
        for t in theories() {
            let b = basis();
            for a in 0..2 {
                let d = t.comul_basis(a);
                for i in 0..2 {
                    for j in 0..2 {
                        let mut lhs = Poly::zero();
                        for k in 0..2 {
                            for l in 0..2 {
                                lhs += &(&(&d[k][l] * &t.pairing(&b[k], &b[i])) * &t.pairing(&b[l], &b[j]));
                            }
                        }
                        assert_eq!(lhs, t.pairing(&b[a], &t.mul(&b[i], &b[j])), "{t} a={a} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn neck_cutting_expansion() {
        // a = ε(a·X)·1 + ε(a·(X + e1))·X, the dual-basis expansion under <,>.
        for t in theories() {
            let dual = [[t.e1.clone(), Poly::one()], [Poly::one(), Poly::zero()]];
            for a in basis() {
                let c0 = t.pairing(&a, &dual[0]);
                let c1 = t.pairing(&a, &dual[1]);
                assert_eq!([c0, c1], a);
            }
        }
    }

    #[test]
    fn closed_surfaces() {
        let t = FrobeniusTheory::bar_natan();
        assert_eq!(t.closed_surface_eval(0, 0), Poly::zero());
        assert_eq!(t.closed_surface_eval(0, 1), Poly::one());
        assert_eq!(t.closed_surface_eval(1, 0), Poly::zero());
        assert_eq!(t.closed_surface_eval(1, 1), Poly::h());
        for g in 0..6 {
            assert_eq!(t.closed_surface_eval(g, 1), Poly::monomial(g));
            for d in 2..5 {
                assert_eq!(t.closed_surface_eval(g, d), &Poly::monomial(d - 1) * &t.closed_surface_eval(g, 1));
            }
        }
    }

    #[test]
    fn parse_theories() {
        assert_eq!("bn".parse::<FrobeniusTheory>().unwrap(), FrobeniusTheory::bar_natan());
        assert_eq!("h1".parse::<FrobeniusTheory>().unwrap(), FrobeniusTheory::localized());
        assert_eq!("sigma:0,H".parse::<FrobeniusTheory>().unwrap(), FrobeniusTheory::bar_natan());
        assert!("sigma:H".parse::<FrobeniusTheory>().is_err());
    }
}
