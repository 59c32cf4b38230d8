//! The residue field 𝔽_q, q = 2^f, as 𝔽₂[t]/(m(t)).
//!
//! Elements are bit vectors in the polynomial basis: bit `j` is the
//! coefficient of `t^j`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported inertia degree.
pub const MAX_F: usize = 16;

/// Carry-less product of two binary polynomials.
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let mut b = b as u64;
    let mut a = a as u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m).expect("nonzero modulus");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Irreducibility over 𝔽₂ by trial division with every polynomial of degree
/// at most half the degree.
pub fn is_irreducible(m: u64) -> bool {
    let Some(d) = degree(m) else { return false };
    if d == 0 {
        return false;
    }
    for cand in 2u64..(1u64 << (d / 2 + 1)) {
        let dc = degree(cand).unwrap();
        if dc == 0 || dc > d / 2 {
            continue;
        }
        if poly_rem(m, cand) == 0 {
            return false;
        }
    }
    true
}

/// The default modulus for degree `f`: the numerically smallest irreducible
/// polynomial of degree `f` with nonzero constant term.
pub fn default_modulus(f: usize) -> u64 {
    assert!((1..=MAX_F).contains(&f), "inertia degree out of range");
    let lo = (1u64 << f) | 1;
    let hi = 1u64 << (f + 1);
    (lo..hi)
        .step_by(2)
        .find(|&m| is_irreducible(m))
        .expect("an irreducible polynomial exists in every degree")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueField {
    f: usize,
    /// Full modulus including the leading bit `1 << f`.
    modulus: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ResidueElem(pub u32);

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

impl ResidueElem {
    pub const ZERO: ResidueElem = ResidueElem(0);
    pub const ONE: ResidueElem = ResidueElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn bits(self) -> u32 {
        self.0
    }
}

impl ResidueField {
    pub fn new(f: usize) -> Self {
        Self {
            f,
            modulus: default_modulus(f),
        }
    }

    /// Field with a user supplied modulus (bit `f` must be set).
    pub fn with_modulus(f: usize, modulus: u64) -> Result<Self> {
        if !(1..=MAX_F).contains(&f) || degree(modulus) != Some(f as u32) {
            return Err(Error::Config(format!(
                "modulus {modulus:#b} does not have degree {f}"
            )));
        }
        if !is_irreducible(modulus) {
            return Err(Error::Config(format!("modulus {modulus:#b} is reducible")));
        }
        Ok(Self { f, modulus })
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.f
    }

    pub fn elem(&self, bits: u32) -> ResidueElem {
        ResidueElem(poly_rem(bits as u64, self.modulus) as u32)
    }

    /// The class of `t`.
    pub fn generator(&self) -> ResidueElem {
        self.elem(0b10)
    }

    /// All `q` elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> {
        (0..(1u32 << self.f)).map(ResidueElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ResidueElem> {
        (1..(1u32 << self.f)).map(ResidueElem)
    }

    /// Polynomial basis `1, t, ..., t^{f-1}`.
    pub fn basis(&self) -> Vec<ResidueElem> {
        (0..self.f).map(|j| ResidueElem(1 << j)).collect()
    }

    pub fn add(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        ResidueElem(a.0 ^ b.0)
    }

    pub fn mul(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        ResidueElem(poly_rem(clmul(a.0, b.0), self.modulus) as u32)
    }

    pub fn square(&self, a: ResidueElem) -> ResidueElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: ResidueElem, mut n: u64) -> ResidueElem {
        let mut base = a;
        let mut acc = ResidueElem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: ResidueElem) -> Result<ResidueElem> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero residue".into()));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// Unique square root (Frobenius inverse): `a^{q/2}`.
    pub fn sqrt(&self, a: ResidueElem) -> ResidueElem {
        self.pow(a, self.order() / 2)
    }

    /// Absolute trace to 𝔽₂: `a + a² + ... + a^{2^{f-1}}`.
    pub fn trace(&self, a: ResidueElem) -> u8 {
        let mut acc = ResidueElem::ZERO;
        let mut p = a;
        for _ in 0..self.f {
            acc = self.add(acc, p);
            p = self.square(p);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }

    /// Some `z` with `z² + z = a`, when `trace(a) = 0`.
    pub fn artin_schreier_root(&self, a: ResidueElem) -> Option<ResidueElem> {
        if self.trace(a) != 0 {
            return None;
        }
        self.elements()
            .find(|&z| self.add(self.square(z), z) == a)
    }

    /// The fixed trace-one element: smallest bit pattern with trace 1.
    pub fn trace_one(&self) -> ResidueElem {
        self.elements()
            .find(|&a| self.trace(a) == 1)
            .expect("trace is onto 𝔽₂")
    }

    fn check_nontrivial(&self, a: ResidueElem) -> Result<()> {
        if a.0 <= 1 {
            return Err(Error::Domain(format!("residue {a} lies in the prime field")));
        }
        Ok(())
    }

    /// Whether `a² + a + 1 = 0`.
    pub fn is_cube_root_of_unity(&self, a: ResidueElem) -> Result<bool> {
        self.check_nontrivial(a)?;
        let s = self.add(self.add(self.square(a), a), ResidueElem::ONE);
        Ok(s.is_zero())
    }

    /// Canonical representative of `{a, a+1}`: the smaller bit vector.
    pub fn omega_class_canonical(&self, a: ResidueElem) -> Result<ResidueElem> {
        self.check_nontrivial(a)?;
        let b = self.add(a, ResidueElem::ONE);
        Ok(a.min(b))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: ResidueElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::Domain("order of zero".into()));
        }
        let n = self.order() - 1;
        let mut d = 1;
        while d <= n {
            if n.is_multiple_of(d) && self.pow(a, d) == ResidueElem::ONE {
                return Ok(d);
            }
            d += 1;
        }
        unreachable!("a^(q-1) = 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(1), 0b11);
        assert_eq!(default_modulus(2), 0b111);
        assert_eq!(default_modulus(3), 0b1011);
        assert_eq!(default_modulus(4), 0b10011);
        assert_eq!(default_modulus(8), 0x11b);
        for f in 1..=MAX_F {
            assert!(is_irreducible(default_modulus(f)));
        }
        assert!(!is_irreducible(0b101));
    }

    #[test]
    fn trace_examples() {
        let f1 = ResidueField::new(1);
        assert_eq!(f1.trace(ResidueElem::ONE), 1);
        assert_eq!(f1.trace(ResidueElem::ZERO), 0);
        let f2 = ResidueField::new(2);
        let t = f2.generator();
        assert_eq!(f2.trace(t), 1);
        // brute force: z² + z = t has no root in 𝔽₄
        assert!(f2.elements().all(|z| f2.add(f2.square(z), z) != t));
    }

    #[test]
    fn trace_counts_and_additivity() {
        for f in 1..=6 {
            let k = ResidueField::new(f);
            let zeros = k.elements().filter(|&a| k.trace(a) == 0).count() as u64;
            assert_eq!(zeros, k.order() / 2);
            for a in k.elements() {
                for b in k.elements().step_by(3) {
                    assert_eq!(k.trace(k.add(a, b)), k.trace(a) ^ k.trace(b));
                }
            }
        }
    }

    #[test]
    fn group_order_divides() {
        for f in 1..=8 {
            let k = ResidueField::new(f);
            for a in k.nonzero() {
                assert_eq!(k.pow(a, k.order() - 1), ResidueElem::ONE);
                assert_eq!(k.mul(a, k.inv(a).unwrap()), ResidueElem::ONE);
                assert_eq!(k.square(k.sqrt(a)), a);
            }
        }
    }

    #[test]
    fn cube_roots() {
        let f2 = ResidueField::new(2);
        assert!(f2.is_cube_root_of_unity(f2.generator()).unwrap());
        assert!(f2.is_cube_root_of_unity(ResidueElem::ONE).is_err());
        assert!(f2.is_cube_root_of_unity(ResidueElem::ZERO).is_err());
        let f3 = ResidueField::new(3);
        for a in f3.elements().skip(2) {
            assert!(!f3.is_cube_root_of_unity(a).unwrap());
        }
        let f4 = ResidueField::new(4);
        let five: Vec<_> = f4
            .nonzero()
            .filter(|&a| f4.order_of(a).unwrap() == 5)
            .collect();
        assert!(!five.is_empty());
        for a in five {
            assert!(!f4.is_cube_root_of_unity(a).unwrap());
        }
        for f in 2..=6 {
            let k = ResidueField::new(f);
            for a in k.elements().skip(2) {
                let b = k.add(a, ResidueElem::ONE);
                assert_eq!(
                    k.is_cube_root_of_unity(a).unwrap(),
                    k.is_cube_root_of_unity(b).unwrap()
                );
            }
        }
    }

    #[test]
    fn omega_classes() {
        let f2 = ResidueField::new(2);
        let t = f2.generator();
        let t1 = f2.add(t, ResidueElem::ONE);
        assert_eq!(f2.omega_class_canonical(t).unwrap(), t.min(t1));
        assert_eq!(
            f2.omega_class_canonical(t).unwrap(),
            f2.omega_class_canonical(t1).unwrap()
        );
        for f in 2..=6 {
            let k = ResidueField::new(f);
            let mut classes: Vec<_> = k
                .elements()
                .skip(2)
                .map(|a| k.omega_class_canonical(a).unwrap())
                .collect();
            classes.sort();
            classes.dedup();
            // nontrivial additive cosets of 𝔽₂ in 𝔽_q
            assert_eq!(classes.len() as u64, k.order() / 2 - 1);
            for c in &classes {
                assert_eq!(k.omega_class_canonical(*c).unwrap(), *c);
            }
        }
        let f3 = ResidueField::new(3);
        let n = f3
            .elements()
            .skip(2)
            .map(|a| f3.omega_class_canonical(a).unwrap())
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        assert_eq!(n, 3);
    }
}
