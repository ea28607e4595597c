//! Arithmetic in the truncated polynomial ring `T_s = F_p[u]/u^s`.
//!
//! Elements are stored as exactly `s` coefficients, lowest degree first, each
//! reduced into `[0, p)`. Equality is coefficientwise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{BreuilError, Result};

/// u-adic valuation. `Infinity` is reserved for the zero element and orders
/// above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(usize),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TPoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl TPoly {
    pub fn zero(p: u32, s: usize) -> Self {
        TPoly { p, coeffs: vec![0; s] }
    }

    pub fn one(p: u32, s: usize) -> Self {
        Self::constant(p, s, 1)
    }

    pub fn constant(p: u32, s: usize, value: i64) -> Self {
        let mut out = Self::zero(p, s);
        if s > 0 {
            out.coeffs[0] = reduce(value, p);
        }
        out
    }

    /// `coeff * u^k`; zero when `k >= s`.
    pub fn monomial(p: u32, s: usize, k: usize, coeff: i64) -> Self {
        let mut out = Self::zero(p, s);
        if k < s {
            out.coeffs[k] = reduce(coeff, p);
        }
        out
    }

    /// Canonicalizes an arbitrary integer coefficient list: residues mod `p`,
    /// padded with zeros or truncated (u^s = 0) to exactly `s` entries.
    pub fn from_coeffs(p: u32, s: usize, coeffs: &[i64]) -> Self {
        let mut out = Self::zero(p, s);
        for (slot, &c) in out.coeffs.iter_mut().zip(coeffs) {
            *slot = reduce(c, p);
        }
        out
    }

    pub fn from_residues(p: u32, s: usize, coeffs: &[u32]) -> Self {
        let mut out = Self::zero(p, s);
        for (slot, &c) in out.coeffs.iter_mut().zip(coeffs) {
            *slot = c % p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Truncation order `s`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Coefficients with trailing zeros removed.
    pub fn trimmed(&self) -> &[u32] {
        let end = self.coeffs.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        &self.coeffs[..end]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        !self.coeffs.is_empty() && self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|&c| c != 0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().skip(1).all(|&c| c == 0)
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|&c| c != 0) {
            Some(i) => Valuation::Finite(i),
            None => Valuation::Infinity,
        }
    }

    /// Multiplication by `u^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let s = self.len();
        let mut out = Self::zero(self.p, s);
        for i in 0..s.saturating_sub(k) {
            out.coeffs[i + k] = self.coeffs[i];
        }
        out
    }

    /// Drops the lowest `k` coefficients: the representative `b` of minimal
    /// degree with `u^k * b = self`, provided `u^k` divides `self`.
    pub fn shift_down(&self, k: usize) -> Self {
        let s = self.len();
        let mut out = Self::zero(self.p, s);
        for i in k..s {
            out.coeffs[i - k] = self.coeffs[i];
        }
        out
    }

    pub fn scale(&self, k: u32) -> Self {
        let p = self.p as u64;
        let k = k as u64 % p;
        TPoly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| ((c as u64 * k) % p) as u32).collect(),
        }
    }

    /// `phi(sum a_i u^i) = sum a_i u^{p i}`; coefficients are fixed since `k = F_p`.
    pub fn frobenius(&self) -> Self {
        let s = self.len();
        let p = self.p as usize;
        let mut out = Self::zero(self.p, s);
        for (i, &c) in self.coeffs.iter().enumerate() {
            match i.checked_mul(p) {
                Some(j) if j < s => out.coeffs[j] = c,
                _ => break,
            }
        }
        out
    }

    pub fn frobenius_pow(&self, n: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..n {
            if out.is_constant() {
                break;
            }
            out = out.frobenius();
        }
        out
    }

    /// Monodromy derivation `N = -u d/du`, so `N(u^i) = -i u^i`.
    pub fn derivation_n(&self) -> Self {
        let p = self.p as u64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let i = (i as u64) % p;
                ((p - i) % p * c as u64 % p) as u32
            })
            .collect();
        TPoly { p: self.p, coeffs }
    }

    /// Inverse of a unit by Newton iteration `b <- b (2 - a b)`, doubling the
    /// precision each round.
    pub fn invert_unit(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(BreuilError::NotAUnit);
        }
        let s = self.len();
        let inv0 = inv_mod(self.coeffs[0], self.p);
        let mut b = TPoly::constant(self.p, s, inv0 as i64);
        let two = TPoly::constant(self.p, s, 2);
        let mut prec = 1;
        while prec < s {
            b = &b * &(&two - &(self * &b));
            prec *= 2;
        }
        debug_assert!((self * &b).is_one());
        Ok(b)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = TPoly::one(self.p, self.len());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Reduction modulo `u^s` for `s <= len`.
    pub fn truncate(&self, s: usize) -> Self {
        assert!(s <= self.len(), "truncation must lower the precision");
        TPoly { p: self.p, coeffs: self.coeffs[..s].to_vec() }
    }

    /// Minimal-degree lift to precision `t >= len` (new coefficients are zero).
    pub fn lift(&self, t: usize) -> Self {
        assert!(t >= self.len(), "lift must raise the precision");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(t, 0);
        TPoly { p: self.p, coeffs }
    }

    fn check_compatible(&self, other: &TPoly) {
        assert_eq!(self.p, other.p, "mixing elements of different characteristic");
        assert_eq!(self.len(), other.len(), "mixing elements of different precision");
    }
}

fn reduce(value: i64, p: u32) -> u32 {
    value.rem_euclid(p as i64) as u32
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: p is prime.
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "u")?,
                (1, _) => write!(f, "{c}u")?,
                (_, 1) => write!(f, "u^{i}")?,
                _ => write!(f, "{c}u^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        self.check_compatible(rhs);
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| {
                let t = a + b;
                if t >= p { t - p } else { t }
            })
            .collect();
        TPoly { p, coeffs }
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        self.check_compatible(rhs);
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| if a >= b { a - b } else { a + p - b })
            .collect();
        TPoly { p, coeffs }
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        let p = self.p;
        TPoly { p, coeffs: self.coeffs.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect() }
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        self.check_compatible(rhs);
        let s = self.len();
        let p = self.p as u64;
        let mut acc = vec![0u64; s];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..s - i].iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        TPoly { p: self.p, coeffs: acc.into_iter().map(|c| c as u32).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TPoly {
            type Output = TPoly;
            fn $m(self, rhs: TPoly) -> TPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Arithmetic context: prime `p`, ramification index `e`, filtration level
/// `r`, truncation order `s` and the unit `c` giving `phi_r(u^{er}) = c^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingParams {
    p: u32,
    e: u32,
    r: u32,
    s: usize,
    c: TPoly,
}

impl RingParams {
    pub fn new(p: u32, e: u32, r: u32, s: usize, c: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(BreuilError::ParamViolation(format!("p = {p} is not prime")));
        }
        if e == 0 || r == 0 {
            return Err(BreuilError::ParamViolation("e and r must be at least 1".into()));
        }
        let er = e as u64 * r as u64;
        if er > p as u64 - 1 {
            return Err(BreuilError::ParamViolation(format!("er = {er} exceeds p - 1 = {}", p - 1)));
        }
        let ep = e as usize * p as usize;
        if s < p as usize || s > ep {
            return Err(BreuilError::ParamViolation(format!(
                "truncation order s = {s} outside [p, ep] = [{p}, {ep}]"
            )));
        }
        if c.iter().any(|&x| x >= p) {
            return Err(BreuilError::ParamViolation("coefficients of c must lie in [0, p)".into()));
        }
        if c.len() > s && c[s..].iter().any(|&x| x != 0) {
            return Err(BreuilError::ParamViolation("c has nonzero coefficients beyond u^s".into()));
        }
        let c = TPoly::from_residues(p, s, c);
        if !c.is_unit() {
            return Err(BreuilError::ParamViolation("c must be a unit of T_s".into()));
        }
        Ok(RingParams { p, e, r, s, c })
    }

    /// Parameters with `c = 1`, i.e. `E(u) = u^e + p`.
    pub fn with_unit_c(p: u32, e: u32, r: u32, s: usize) -> Result<Self> {
        Self::new(p, e, r, s, &[1])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn c(&self) -> &TPoly {
        &self.c
    }

    pub fn er(&self) -> usize {
        self.e as usize * self.r as usize
    }

    pub fn ep(&self) -> usize {
        self.e as usize * self.p as usize
    }

    /// `er == p - 1`.
    pub fn boundary(&self) -> bool {
        self.er() == self.p as usize - 1
    }

    /// `er < p - 1`.
    pub fn strict(&self) -> bool {
        self.er() < self.p as usize - 1
    }

    /// `c^r`, the value of `phi_r(u^{er})`.
    pub fn c_r(&self) -> TPoly {
        self.c.pow(self.r as u64)
    }

    pub fn zero(&self) -> TPoly {
        TPoly::zero(self.p, self.s)
    }

    pub fn one(&self) -> TPoly {
        TPoly::one(self.p, self.s)
    }

    pub fn u_pow(&self, k: usize) -> TPoly {
        TPoly::monomial(self.p, self.s, k, 1)
    }

    pub fn poly(&self, coeffs: &[i64]) -> TPoly {
        TPoly::from_coeffs(self.p, self.s, coeffs)
    }

    /// Same `p, e, r` at another truncation order; `c` is truncated, or lifted
    /// by its minimal-degree representative.
    pub fn at_level(&self, s: usize) -> Result<Self> {
        let c = self.c.trimmed().to_vec();
        let c = if c.len() > s { c[..s].to_vec() } else { c };
        RingParams::new(self.p, self.e, self.r, s, &c)
    }

    /// Whether two parameter sets describe the same ring and twist.
    pub fn same_ring(&self, other: &RingParams) -> bool {
        self == other
    }
}

/// `dim_{F_p} Fil^a T_s / Fil^b T_s` with `Fil^a T_s = u^{ea} T_s`, which is
/// `min(eb, s) - min(ea, s)`.
pub fn fil_quotient_dim(a: u32, b: u32, e: u32, s: usize) -> Result<usize> {
    if a > b {
        return Err(BreuilError::InvalidLevels { a, b });
    }
    let lo = (e as usize * a as usize).min(s);
    let hi = (e as usize * b as usize).min(s);
    Ok(hi - lo)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn pair() -> impl Strategy<Value = (TPoly, TPoly)> {
        (prop_oneof![Just(2u32), Just(3u32), Just(5u32)], 1usize..=10).prop_flat_map(|(p, s)| {
            let c = proptest::collection::vec(0..p, s);
            (c.clone(), c).prop_map(move |(a, b)| (TPoly::from_residues(p, s, &a), TPoly::from_residues(p, s, &b)))
        })
    }

    proptest! {
        #[test]
        fn frobenius_is_a_ring_map((a, b) in pair()) {
            prop_assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
            prop_assert_eq!((&a * &b).frobenius(), &a.frobenius() * &b.frobenius());
        }

        #[test]
        fn valuation_of_products((a, b) in pair()) {
            let expected = match (a.valuation(), b.valuation()) {
                (Valuation::Finite(x), Valuation::Finite(y)) if x + y < a.len() => Valuation::Finite(x + y),
                _ => Valuation::Infinity,
            };
            prop_assert_eq!((&a * &b).valuation(), expected);
        }

        #[test]
        fn leibniz((a, b) in pair()) {
            let rhs = &(&a.derivation_n() * &b) + &(&a * &b.derivation_n());
            prop_assert_eq!((&a * &b).derivation_n(), rhs);
        }

        #[test]
        fn units_invert((a, _) in pair()) {
            match a.invert_unit() {
                Ok(inv) => prop_assert!((&a * &inv).is_one() && (&inv * &a).is_one()),
                Err(e) => {
                    prop_assert!(!a.is_unit());
                    prop_assert_eq!(e, BreuilError::NotAUnit);
                }
            }
        }

        #[test]
        fn lift_then_truncate((a, _) in pair(), extra in 0usize..5) {
            prop_assert_eq!(a.lift(a.len() + extra).truncate(a.len()), a);
        }

        #[test]
        fn fil_quotient_counts_monomials(a in 0u32..6, gap in 0u32..6, e in 1u32..=3, s in 1usize..=20) {
            let b = a + gap;
            let count = (0..s).filter(|&k| k >= (e * a) as usize && k < (e * b) as usize).count();
            prop_assert_eq!(fil_quotient_dim(a, b, e, s), Ok(count));
        }
    }
}
