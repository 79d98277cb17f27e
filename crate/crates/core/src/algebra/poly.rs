//! Polynomials over F2 in one variable `H`, stored as dense bit vectors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

const LIMB: usize = 64;

/// An element of F2[H]. Bit `i` of the limb vector is the coefficient of `H^i`.
///
/// The limb vector never carries trailing zero limbs, so the zero polynomial
/// has no limbs at all and equality is plain limb equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    limbs: SmallVec<[u64; 2]>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { limbs: SmallVec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// The variable `H`.
    pub fn h() -> Self {
        Self::monomial(1)
    }

    /// `H^k`.
    pub fn monomial(k: usize) -> Self {
        let mut limbs = SmallVec::from_elem(0u64, k / LIMB + 1);
        limbs[k / LIMB] = 1u64 << (k % LIMB);
        Poly { limbs }
    }

    /// The constant `c` (0 or 1).
    pub fn constant(c: bool) -> Self {
        if c {
            Self::one()
        } else {
            Self::zero()
        }
    }

    /// Builds a polynomial from the exponents carrying a nonzero coefficient.
    /// Repeated exponents cancel in pairs.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Poly::zero();
        for e in exps {
            p.flip(e);
        }
        p
    }

    fn normalize(&mut self) {
        while let Some(&0) = self.limbs.last() {
            self.limbs.pop();
        }
    }

    fn flip(&mut self, e: usize) {
        let i = e / LIMB;
        if self.limbs.len() <= i {
            self.limbs.resize(i + 1, 0);
        }
        self.limbs[i] ^= 1u64 << (e % LIMB);
        self.normalize();
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    /// The only unit of F2[H] is 1.
    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Degree, or `None` for the zero polynomial (degree −∞).
    pub fn degree(&self) -> Option<usize> {
        let last = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * LIMB + (LIMB - 1 - last.leading_zeros() as usize))
    }

    /// H-adic valuation: the lowest exponent with nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.limbs
            .iter()
            .enumerate()
            .find(|(_, &l)| l != 0)
            .map(|(i, l)| i * LIMB + l.trailing_zeros() as usize)
    }

    pub fn coeff(&self, e: usize) -> bool {
        self.limbs
            .get(e / LIMB)
            .map(|l| (l >> (e % LIMB)) & 1 == 1)
            .unwrap_or(false)
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &l) in self.limbs.iter().enumerate() {
            let mut bits = l;
            while bits != 0 {
                let t = bits.trailing_zeros() as usize;
                out.push(i * LIMB + t);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn term_count(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// `Some(k)` iff the polynomial is exactly `H^k`.
    pub fn h_power(&self) -> Option<usize> {
        if self.term_count() == 1 {
            self.valuation()
        } else {
            None
        }
    }

    /// Single-term polynomials are the homogeneous elements for `deg H = 2`.
    pub fn is_monomial(&self) -> bool {
        self.term_count() == 1
    }

    /// Evaluate at `H = value`.
    pub fn eval(&self, value: bool) -> bool {
        if value {
            self.term_count() % 2 == 1
        } else {
            self.coeff(0)
        }
    }

    /// Reduction modulo `H^k` (truncation).
    pub fn truncate(&self, k: usize) -> Poly {
        let mut limbs: SmallVec<[u64; 2]> = self.limbs.iter().take(k.div_ceil(LIMB)).copied().collect();
        if k % LIMB != 0 {
            if let Some(last) = limbs.get_mut(k / LIMB) {
                *last &= (1u64 << (k % LIMB)) - 1;
            }
        }
        let mut p = Poly { limbs };
        p.normalize();
        p
    }

    /// Multiplication by `H^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (whole, bits) = (k / LIMB, k % LIMB);
        let mut limbs: SmallVec<[u64; 2]> = SmallVec::from_elem(0, self.limbs.len() + whole + 1);
        for (i, &l) in self.limbs.iter().enumerate() {
            limbs[i + whole] ^= l << bits;
            if bits != 0 {
                limbs[i + whole + 1] ^= l >> (LIMB - bits);
            }
        }
        let mut p = Poly { limbs };
        p.normalize();
        p
    }

    /// Exact division by `H^k`, dropping lower terms.
    pub fn shr(&self, k: usize) -> Poly {
        let (whole, bits) = (k / LIMB, k % LIMB);
        if whole >= self.limbs.len() {
            return Poly::zero();
        }
        let src = &self.limbs[whole..];
        let mut limbs: SmallVec<[u64; 2]> = SmallVec::from_elem(0, src.len());
        for i in 0..src.len() {
            limbs[i] = src[i] >> bits;
            if bits != 0 && i + 1 < src.len() {
                limbs[i] |= src[i + 1] << (LIMB - bits);
            }
        }
        let mut p = Poly { limbs };
        p.normalize();
        p
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot.flip(shift);
            rem += &divisor.shl(shift);
        }
        (quot, rem)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        x
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Compact text form used in reports: `H^3 + H + 1`, `H`, `1`, `0`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "H".to_string(),
                _ => format!("H^{e}"),
            })
            .collect();
        parts.reverse();
        parts.join(" + ")
    }

    /// Inverse of [`Poly::to_text`]; also accepts `H^1`, `H^0` and extra whitespace.
    pub fn parse_text(s: &str) -> Option<Poly> {
        let s = s.trim();
        if s == "0" {
            return Some(Poly::zero());
        }
        let mut exps = Vec::new();
        for term in s.split('+') {
            let t = term.trim();
            let e = match t {
                "1" => 0,
                "H" => 1,
                _ => t.strip_prefix("H^")?.trim().parse().ok()?,
            };
            exps.push(e);
        }
        Some(Poly::from_exponents(exps))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_text())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// Orders by degree first, then lexicographically on the bit pattern from the top.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.limbs.len() < rhs.limbs.len() {
            self.limbs.resize(rhs.limbs.len(), 0);
        }
        for (a, b) in self.limbs.iter_mut().zip(rhs.limbs.iter()) {
            *a ^= *b;
        }
        self.normalize();
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        *self += &rhs;
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

// Characteristic 2: subtraction is addition.
impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + rhs
    }
}

fn clmul(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut bits = b;
    while bits != 0 {
        let i = bits.trailing_zeros();
        lo ^= a << i;
        if i != 0 {
            hi ^= a >> (64 - i);
        }
        bits &= bits - 1;
    }
    (lo, hi)
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        let mut limbs: SmallVec<[u64; 2]> =
            SmallVec::from_elem(0, self.limbs.len() + rhs.limbs.len());
        for (i, &a) in self.limbs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.limbs.iter().enumerate() {
                let (lo, hi) = clmul(a, b);
                limbs[i + j] ^= lo;
                limbs[i + j + 1] ^= hi;
            }
        }
        let mut p = Poly { limbs };
        p.normalize();
        p
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl MulAssign<&Poly> for Poly {
    fn mul_assign(&mut self, rhs: &Poly) {
        *self = &*self * rhs;
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.exponents().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let exps = Vec::<usize>::deserialize(d)?;
        Ok(Poly::from_exponents(exps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(0usize..150, 0..8).prop_map(Poly::from_exponents)
    }

    #[test]
    fn basic_arithmetic() {
        let h = Poly::h();
        let one = Poly::one();
        assert_eq!(&h + &h, Poly::zero());
        assert_eq!(&(&h + &one) * &(&h + &one), Poly::from_exponents([0, 2]));
        assert_eq!(Poly::monomial(3).degree(), Some(3));
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::from_exponents([2, 5]).valuation(), Some(2));
        assert_eq!(Poly::monomial(4).h_power(), Some(4));
        assert_eq!(Poly::from_exponents([0, 1]).h_power(), None);
    }

    #[test]
    fn crosses_limb_boundaries() {
        let a = Poly::monomial(63);
        let b = Poly::monomial(70);
        assert_eq!((&a * &b).degree(), Some(133));
        assert_eq!(Poly::monomial(130).shr(64), Poly::monomial(66));
        assert_eq!(Poly::from_exponents([3, 64, 65]).truncate(65), Poly::from_exponents([3, 64]));
    }

    #[test]
    fn text_and_json_forms() {
        let p = Poly::from_exponents([0, 2]);
        assert_eq!(p.to_text(), "H^2 + 1");
        assert_eq!(Poly::parse_text("H^2 + 1"), Some(p.clone()));
        assert_eq!(serde_json::to_string(&p).unwrap(), "[0,2]");
        let back: Poly = serde_json::from_str("[0,2]").unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn division_identity(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(), b in arb_poly()) {
            let g = Poly::gcd(&a, &b);
            prop_assert!(g.divides(&a));
            prop_assert!(g.divides(&b));
        }

        #[test]
        fn shifts_match_monomial_products(a in arb_poly(), k in 0usize..100) {
            prop_assert_eq!(a.shl(k), &a * &Poly::monomial(k));
            prop_assert_eq!(a.shl(k).shr(k), a);
        }
    }
}
