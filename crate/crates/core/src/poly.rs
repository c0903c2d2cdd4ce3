//! Sparse univariate polynomials over a prime field `F_p`.
//!
//! Entries of every presentation matrix are polynomials in a single variable
//! `s = t^(1/p^n)`. Almost all of them are monomials with large exponents
//! (`t = s^(p^n)`), so terms are stored sparsely as `(exponent, coefficient)`
//! pairs in ascending exponent order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `a^-1 mod p` for prime `p` and `a != 0 mod p`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0, "inverse of zero");
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let m = p as u64;
    let mut base = a as u64 % m;
    let mut acc = 1u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u32,
    terms: Vec<(u64, u32)>,
}

impl Poly {
    pub fn zero(p: u32) -> Self {
        Poly { p, terms: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u32, c: u32) -> Self {
        Self::monomial(p, c, 0)
    }

    pub fn monomial(p: u32, c: u32, e: u64) -> Self {
        let c = c % p;
        if c == 0 {
            Self::zero(p)
        } else {
            Poly { p, terms: vec![(e, c)] }
        }
    }

    /// `s^e`.
    pub fn s_pow(p: u32, e: u64) -> Self {
        Self::monomial(p, 1, e)
    }

    /// Builds a polynomial from arbitrary (unsorted, possibly repeated) terms.
    pub fn from_terms(p: u32, terms: impl IntoIterator<Item = (u64, u32)>) -> Self {
        let mut v: Vec<(u64, u32)> = terms.into_iter().map(|(e, c)| (e, c % p)).collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(u64, u32)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = ((last.1 as u64 + c as u64) % p as u64) as u32,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly { p, terms: out }
    }

    /// Dense coefficients, lowest degree first.
    pub fn from_dense(p: u32, coeffs: &[u32]) -> Self {
        Self::from_terms(p, coeffs.iter().enumerate().map(|(i, &c)| (i as u64, c)))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn terms(&self) -> &[(u64, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (0, 1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    /// Lowest exponent with a nonzero coefficient (the `s`-adic valuation).
    pub fn valuation(&self) -> Option<u64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> u32 {
        self.terms.last().map(|t| t.1).unwrap_or(0)
    }

    pub fn coeff(&self, e: u64) -> u32 {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p as u64;
        let c = c as u64 % p;
        if c == 0 {
            return Self::zero(self.p);
        }
        Poly {
            p: self.p,
            terms: self.terms.iter().map(|&(e, a)| (e, (a as u64 * c % p) as u32)).collect(),
        }
    }

    /// Multiplication by `s^k`.
    pub fn shift(&self, k: u64) -> Self {
        Poly { p: self.p, terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading_coeff(), self.p))
    }

    /// Drops every term of exponent `>= m` (reduction modulo `s^m`).
    pub fn truncate(&self, m: u64) -> Self {
        Poly { p: self.p, terms: self.terms.iter().copied().filter(|t| t.0 < m).collect() }
    }

    /// Substitutes `s ↦ s^k`.
    pub fn substitute_power(&self, k: u64) -> Self {
        Poly { p: self.p, terms: self.terms.iter().map(|&(e, c)| (e * k, c)).collect() }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.p,
            self.terms
                .iter()
                .filter(|t| t.0 > 0)
                .map(|&(e, c)| (e - 1, ((e % self.p as u64) * c as u64 % self.p as u64) as u32)),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let inv_lc = inv_mod(d.leading_coeff(), self.p);
        let mut q_terms = Vec::new();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = (r.leading_coeff() as u64 * inv_lc as u64 % self.p as u64) as u32;
            let e = rd - dd;
            q_terms.push((e, c));
            let sub = d.shift(e).scale(c);
            r = &r - &sub;
        }
        (Poly::from_terms(self.p, q_terms), r)
    }

    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse modulo `s^m`; requires a nonzero constant term.
    pub fn inverse_mod_s_pow(&self, m: u64) -> Option<Poly> {
        let c0 = self.coeff(0);
        if c0 == 0 {
            return None;
        }
        // Newton iteration on the precision.
        let mut inv = Poly::constant(self.p, inv_mod(c0, self.p));
        let mut prec = 1u64;
        let two = Poly::constant(self.p, 2);
        while prec < m {
            prec = (prec * 2).min(m);
            let t = (&(self.truncate(prec)) * &inv).truncate(prec);
            inv = (&inv * &(&two - &t)).truncate(prec);
        }
        Some(inv.truncate(m))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "s")?,
                (1, c) => write!(f, "{c}s")?,
                (e, 1) => write!(f, "s^{e}")?,
                (e, c) => write!(f, "{c}s^{e}")?,
            }
        }
        Ok(())
    }
}

fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    debug_assert_eq!(a.p, b.p);
    let p = a.p as u64;
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let nb = |c: u32| if negate_b { ((p - c as u64) % p) as u32 } else { c };
    while i < a.terms.len() || j < b.terms.len() {
        let ord = match (a.terms.get(i), b.terms.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(a.terms[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push((b.terms[j].0, nb(b.terms[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = ((a.terms[i].1 as u64 + nb(b.terms[j].1) as u64) % p) as u32;
                if c != 0 {
                    out.push((a.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Poly { p: a.p, terms: out }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        merge(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        merge(self, rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.p - 1)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.p);
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms[0];
            return rhs.shift(e).scale(c);
        }
        if rhs.terms.len() == 1 {
            let (e, c) = rhs.terms[0];
            return self.shift(e).scale(c);
        }
        let p = self.p as u64;
        Poly::from_terms(
            self.p,
            self.terms.iter().flat_map(|&(e1, c1)| {
                rhs.terms.iter().map(move |&(e2, c2)| (e1 + e2, (c1 as u64 * c2 as u64 % p) as u32))
            }),
        )
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}
