//! Base rings: the perfect polynomial ring `V = F_p[t^(1/p^∞)]`, its
//! truncations `V/(t^c)`, and the mixed-characteristic mock
//! `Z[x]/(x^(p^n) − p, p^c)` in which `x` plays the role of `p^(1/p^n)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Poly;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A nonnegative element of `Z[1/p]`, stored as `num / p^k` in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PAdicExponent {
    p: u32,
    num: BigUint,
    k: u32,
}

impl PAdicExponent {
    pub fn new(p: u32, num: impl Into<BigUint>, k: u32) -> Self {
        assert!(p >= 2, "exponent base must be at least 2");
        let mut e = PAdicExponent { p, num: num.into(), k };
        e.canonicalize();
        e
    }

    pub fn zero(p: u32) -> Self {
        Self::new(p, 0u32, 0)
    }

    pub fn integer(p: u32, n: u64) -> Self {
        Self::new(p, n, 0)
    }

    /// `1/p^k`.
    pub fn unit_fraction(p: u32, k: u32) -> Self {
        Self::new(p, 1u32, k)
    }

    /// `units / p^level`: the exponent of `s^units` where `s = t^(1/p^level)`.
    pub fn from_level(p: u32, level: u32, units: u64) -> Self {
        Self::new(p, units, level)
    }

    /// Parses `"a"` or `"a/b"` where `b` must be a power of `p`.
    pub fn parse(p: u32, s: &str) -> Result<Self> {
        let bad = || Error::BadExponent(s.to_string());
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigUint = a.parse().map_err(|_| bad())?;
        let mut den: BigUint = b.parse().map_err(|_| bad())?;
        let mut k = 0;
        let pb = BigUint::from(p);
        while den > BigUint::one() {
            let (q, r) = den.div_rem(&pb);
            if !r.is_zero() {
                return Err(bad());
            }
            den = q;
            k += 1;
        }
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Self::new(p, num, k))
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        let pb = BigUint::from(self.p);
        while self.k > 0 {
            let (q, r) = self.num.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            self.num = q;
            self.k -= 1;
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    /// The exponent `k` of the denominator `p^k`; also the minimal level at
    /// which this exponent is an integer multiple of `1/p^level`.
    pub fn denom_exp(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn p_pow(&self, e: u32) -> BigUint {
        BigUint::from(self.p).pow(e)
    }

    fn aligned(&self, other: &Self) -> (BigUint, BigUint, u32) {
        debug_assert_eq!(self.p, other.p, "exponents over different primes");
        let k = self.k.max(other.k);
        (&self.num * self.p_pow(k - self.k), &other.num * other.p_pow(k - other.k), k)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, k) = self.aligned(other);
        Self::new(self.p, a + b, k)
    }

    /// `self − other`, or `None` when negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let (a, b, k) = self.aligned(other);
        (a >= b).then(|| Self::new(self.p, a - b, k))
    }

    /// `self − other` clamped at zero.
    pub fn saturating_sub(&self, other: &Self) -> Self {
        self.checked_sub(other).unwrap_or_else(|| Self::zero(self.p))
    }

    pub fn mul_int(&self, n: u64) -> Self {
        Self::new(self.p, &self.num * BigUint::from(n), self.k)
    }

    /// `p · self` (Frobenius on exponents).
    pub fn mul_p(&self) -> Self {
        self.mul_int(self.p as u64)
    }

    /// `self / p`.
    pub fn div_p(&self) -> Self {
        Self::new(self.p, self.num.clone(), self.k + 1)
    }

    /// Number of `1/p^level` units in this exponent, if it lies on that
    /// lattice and fits in a `u64`.
    pub fn at_level(&self, level: u32) -> Option<u64> {
        if self.k > level {
            return None;
        }
        (&self.num * self.p_pow(level - self.k)).to_u64()
    }

    /// Floor of the exponent.
    pub fn floor(&self) -> BigUint {
        &self.num / self.p_pow(self.k)
    }

    pub fn is_integer(&self) -> bool {
        self.k == 0
    }

    pub fn to_json(&self) -> Value {
        let num = match self.num.to_u64() {
            Some(n) => json!(n),
            None => json!(self.num.to_string()),
        };
        json!({"num": num, "dexp": self.k})
    }

    pub fn from_json(p: u32, v: &Value) -> Result<Self> {
        let bad = || Error::Input(format!("bad exponent {v}"));
        let num: BigUint = match v.get("num").ok_or_else(bad)? {
            Value::Number(n) => BigUint::from(n.as_u64().ok_or_else(bad)?),
            Value::String(s) => s.parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        let k = v.get("dexp").and_then(Value::as_u64).ok_or_else(bad)? as u32;
        Ok(Self::new(p, num, k))
    }
}

impl PartialOrd for PAdicExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PAdicExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Debug for PAdicExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PAdicExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.p_pow(self.k))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `F_p[t^(1/p^∞)]`.
    CharPPerfect,
    /// `F_p[t^(1/p^∞)]/(t^c)`.
    CharPTruncated(PAdicExponent),
    /// `Z[x]/(x^(p^n) − p, p^c)`, written with exponents `k/p^n` for `x^k`.
    MixedMock { n: u32, c: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingConfig {
    pub p: u32,
    pub mode: Mode,
}

impl RingConfig {
    pub fn perfect(p: u32) -> Result<Self> {
        Self::new(p, Mode::CharPPerfect)
    }

    pub fn truncated(p: u32, c: PAdicExponent) -> Result<Self> {
        Self::new(p, Mode::CharPTruncated(c))
    }

    pub fn mixed(p: u32, n: u32, c: u32) -> Result<Self> {
        Self::new(p, Mode::MixedMock { n, c })
    }

    pub fn new(p: u32, mode: Mode) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        match &mode {
            Mode::CharPTruncated(c) if c.is_zero() => {
                return Err(Error::InvalidConfig("truncation must be positive".into()))
            }
            Mode::CharPTruncated(c) if c.p() != p => {
                return Err(Error::InvalidConfig("truncation exponent over wrong prime".into()))
            }
            Mode::MixedMock { c, .. } if *c == 0 => {
                return Err(Error::InvalidConfig("mixed mock needs c >= 1".into()))
            }
            Mode::MixedMock { n, c } if (p as u64).checked_pow(*c).is_none() || *n > 20 => {
                return Err(Error::InvalidConfig(format!("mixed mock (n={n}, c={c}) too large")))
            }
            _ => {}
        }
        Ok(RingConfig { p, mode })
    }

    pub fn is_char_p(&self) -> bool {
        !matches!(self.mode, Mode::MixedMock { .. })
    }

    pub fn truncation(&self) -> Option<&PAdicExponent> {
        match &self.mode {
            Mode::CharPTruncated(c) => Some(c),
            _ => None,
        }
    }

    /// Modulus of the coefficient ring: `p` in characteristic `p`, `p^c` in the mock.
    pub fn coeff_modulus(&self) -> u64 {
        match self.mode {
            Mode::MixedMock { c, .. } => (self.p as u64).pow(c),
            _ => self.p as u64,
        }
    }

    pub fn mode_name(&self) -> String {
        match &self.mode {
            Mode::CharPPerfect => "char-p-perfect".into(),
            Mode::CharPTruncated(c) => format!("char-p-truncated({c})"),
            Mode::MixedMock { n, c } => format!("mixed-mock(n={n},c={c})"),
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.mode {
            Mode::CharPPerfect => json!({"p": self.p, "mode": "char-p-perfect"}),
            Mode::CharPTruncated(c) => {
                json!({"p": self.p, "mode": "char-p-truncated", "c": c.to_json()})
            }
            Mode::MixedMock { n, c } => json!({"p": self.p, "mode": "mixed-mock", "n": n, "c": c}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Input(format!("ring config: {what}"));
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"))? as u32;
        let mode = v.get("mode").and_then(Value::as_str).unwrap_or("char-p-perfect");
        match mode {
            "char-p-perfect" => Self::perfect(p),
            "char-p-truncated" => {
                let c = PAdicExponent::from_json(p, v.get("c").ok_or_else(|| bad("missing c"))?)?;
                Self::truncated(p, c)
            }
            "mixed-mock" => {
                let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))?;
                let c = v.get("c").and_then(Value::as_u64).ok_or_else(|| bad("missing c"))?;
                Self::mixed(p, n as u32, c as u32)
            }
            other => Err(bad(&format!("unknown mode {other}"))),
        }
    }
}

impl fmt::Display for RingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} {}", self.p, self.mode_name())
    }
}

/// An element `Σ coef·t^e` of a configured base ring (in the mixed mock `t^e`
/// stands for `x^(e·p^n)`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BaseElem {
    ring: RingConfig,
    terms: Vec<(PAdicExponent, u64)>,
}

impl BaseElem {
    pub fn zero(ring: &RingConfig) -> Self {
        BaseElem { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &RingConfig) -> Self {
        Self::from_terms(ring, [(PAdicExponent::zero(ring.p), 1)]).expect("unit is valid")
    }

    pub fn constant(ring: &RingConfig, c: u64) -> Self {
        Self::from_terms(ring, [(PAdicExponent::zero(ring.p), c)]).expect("constant is valid")
    }

    /// `t^e`.
    pub fn t_pow(ring: &RingConfig, e: PAdicExponent) -> Result<Self> {
        Self::from_terms(ring, [(e, 1)])
    }

    pub fn monomial(ring: &RingConfig, coef: u64, e: PAdicExponent) -> Result<Self> {
        Self::from_terms(ring, [(e, coef)])
    }

    pub fn from_terms(
        ring: &RingConfig,
        terms: impl IntoIterator<Item = (PAdicExponent, u64)>,
    ) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        for (e, _) in &terms {
            if e.p() != ring.p {
                return Err(Error::BadExponent(format!("{e} is not over p={}", ring.p)));
            }
            if let Mode::MixedMock { n, .. } = ring.mode {
                if e.denom_exp() > n {
                    return Err(Error::BadExponent(format!(
                        "{e} is finer than the mock level 1/{}^{n}",
                        ring.p
                    )));
                }
            }
        }
        Ok(Self::normalized(ring, terms))
    }

    fn normalized(ring: &RingConfig, raw: Vec<(PAdicExponent, u64)>) -> Self {
        let modulus = ring.coeff_modulus();
        let mut items: Vec<(PAdicExponent, u64)> = Vec::with_capacity(raw.len());
        for (mut e, c) in raw {
            let mut c = c % modulus;
            if let Mode::MixedMock { .. } = ring.mode {
                // x^(p^n) = p: carry the integer part of the exponent into the coefficient.
                let one = PAdicExponent::integer(ring.p, 1);
                while c != 0 && e >= one {
                    e = e.checked_sub(&one).unwrap();
                    c = c * ring.p as u64 % modulus;
                }
            }
            if c != 0 {
                items.push((e, c));
            }
        }
        if let Mode::CharPTruncated(bound) = &ring.mode {
            items.retain(|(e, _)| e < bound);
        }
        items.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(PAdicExponent, u64)> = Vec::with_capacity(items.len());
        for (e, c) in items {
            match terms.last_mut() {
                Some(last) if last.0 == e => last.1 = (last.1 + c) % modulus,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        BaseElem { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn terms(&self) -> &[(PAdicExponent, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Exponent of a monomial.
    pub fn monomial_exponent(&self) -> Result<&PAdicExponent> {
        if self.is_monomial() {
            Ok(&self.terms[0].0)
        } else {
            Err(Error::NotMonomial(self.to_string()))
        }
    }

    /// Smallest exponent present (`None` for zero).
    pub fn valuation(&self) -> Option<&PAdicExponent> {
        self.terms.first().map(|t| &t.0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ConfigMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let raw = self.terms.iter().chain(other.terms.iter()).cloned().collect();
        Ok(Self::normalized(&self.ring, raw))
    }

    pub fn neg(&self) -> Self {
        let m = self.ring.coeff_modulus();
        let raw = self.terms.iter().map(|(e, c)| (e.clone(), (m - c) % m)).collect();
        Self::normalized(&self.ring, raw)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.ring.coeff_modulus() as u128;
        let raw = self
            .terms
            .iter()
            .map(|(e, a)| (e.clone(), ((*a as u128 * c as u128) % m) as u64))
            .collect();
        Self::normalized(&self.ring, raw)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let m = self.ring.coeff_modulus() as u128;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                raw.push((e1.add(e2), ((*c1 as u128 * *c2 as u128) % m) as u64));
            }
        }
        Ok(Self::normalized(&self.ring, raw))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    /// Frobenius `Σ a·t^e ↦ Σ a·t^(pe)`; coefficients are fixed because they lie in `F_p`.
    pub fn frobenius(&self) -> Result<Self> {
        if !self.ring.is_char_p() {
            return Err(Error::UnsupportedMode { op: "frobenius", mode: self.ring.mode_name() });
        }
        let raw = self.terms.iter().map(|(e, c)| (e.mul_p(), *c)).collect();
        Ok(Self::normalized(&self.ring, raw))
    }

    pub fn frobenius_inv(&self) -> Result<Self> {
        if self.ring.mode != Mode::CharPPerfect {
            return Err(Error::UnsupportedMode { op: "frobenius_inv", mode: self.ring.mode_name() });
        }
        let raw = self.terms.iter().map(|(e, c)| (e.div_p(), *c)).collect();
        Ok(Self::normalized(&self.ring, raw))
    }

    /// Same element viewed in another configuration with the same prime
    /// (exponents beyond a truncation are dropped).
    pub fn reinterpret(&self, ring: &RingConfig) -> Result<Self> {
        if ring.p != self.ring.p || ring.is_char_p() != self.ring.is_char_p() {
            return Err(Error::Incompatible(format!("{} -> {}", self.ring, ring)));
        }
        Self::from_terms(ring, self.terms.clone())
    }

    /// Coordinates in `F_p[s]`, `s = t^(1/p^level)`; characteristic `p` only.
    pub fn to_poly(&self, level: u32) -> Result<Poly> {
        if !self.ring.is_char_p() {
            return Err(Error::UnsupportedMode { op: "to_poly", mode: self.ring.mode_name() });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let u = e.at_level(level).ok_or_else(|| {
                Error::BadExponent(format!("{e} does not live at level {level}"))
            })?;
            terms.push((u, *c as u32));
        }
        Ok(Poly::from_terms(self.ring.p, terms))
    }

    pub fn from_poly(ring: &RingConfig, level: u32, f: &Poly) -> Result<Self> {
        Self::from_terms(
            ring,
            f.terms().iter().map(|&(u, c)| (PAdicExponent::from_level(ring.p, level, u), c as u64)),
        )
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = e.to_json();
                v["coef"] = json!(c);
                v
            })
            .collect();
        json!({"terms": terms, "ring": self.ring.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ring = RingConfig::from_json(v.get("ring").ok_or_else(|| Error::Input("missing ring".into()))?)?;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Input("missing terms".into()))?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let e = PAdicExponent::from_json(ring.p, t)?;
            let c = t.get("coef").and_then(Value::as_u64).ok_or_else(|| Error::Input("missing coef".into()))?;
            out.push((e, c));
        }
        Self::from_terms(&ring, out)
    }
}

impl fmt::Debug for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let var = if self.ring.is_char_p() { "t" } else { "p" };
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{var}^({e})")?;
            } else {
                write!(f, "{c}·{var}^({e})")?;
            }
        }
        Ok(())
    }
}

/// Exponent-wise comparison of two monomials: `a | b` iff `exp(a) ≤ exp(b)`.
pub fn divides_monomial(a: &BaseElem, b: &BaseElem) -> Result<bool> {
    Ok(a.monomial_exponent()? <= b.monomial_exponent()?)
}

/// Smallest `n` such that every exponent of every input lies in `(1/p^n)·Z`.
pub fn common_level<'a>(xs: impl IntoIterator<Item = &'a BaseElem>) -> u32 {
    xs.into_iter()
        .flat_map(|x| x.terms.iter().map(|(e, _)| e.denom_exp()))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: u32, n: u64, k: u32) -> PAdicExponent {
        PAdicExponent::new(p, n, k)
    }

    #[test]
    fn exponent_addition() {
        for p in [2, 3, 5] {
            assert_eq!(e(p, 1, 1).add(&e(p, p as u64 - 1, 1)), PAdicExponent::integer(p, 1));
            assert_eq!(PAdicExponent::zero(p).add(&e(p, 7, 3)), e(p, 7, 3));
        }
        let s = e(2, 1, 2).add(&e(2, 1, 2));
        assert_eq!((s.numerator().to_u64().unwrap(), s.denom_exp()), (1, 1));
        let s3 = e(3, 1, 2).add(&e(3, 1, 2));
        assert_eq!((s3.numerator().to_u64().unwrap(), s3.denom_exp()), (2, 2));
    }

    #[test]
    fn exponent_parse_rejects_non_p_power() {
        assert!(PAdicExponent::parse(2, "3/6").is_err());
        assert_eq!(PAdicExponent::parse(3, "6/9").unwrap(), e(3, 2, 1));
    }

    #[test]
    fn elem_mul_examples() {
        let v = RingConfig::perfect(3).unwrap();
        let a = BaseElem::t_pow(&v, e(3, 1, 1)).unwrap();
        let b = BaseElem::t_pow(&v, e(3, 2, 1)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), BaseElem::t_pow(&v, PAdicExponent::integer(3, 1)).unwrap());

        let mock = RingConfig::mixed(2, 1, 4).unwrap();
        let x = BaseElem::t_pow(&mock, e(2, 1, 1)).unwrap();
        assert_eq!(x.mul(&x).unwrap(), BaseElem::constant(&mock, 2));

        let tr = RingConfig::truncated(2, PAdicExponent::integer(2, 1)).unwrap();
        let y = BaseElem::t_pow(&tr, e(2, 1, 1)).unwrap();
        let z = BaseElem::t_pow(&tr, e(2, 3, 2)).unwrap();
        assert!(y.mul(&z).unwrap().is_zero());
    }

    #[test]
    fn config_mismatch_is_an_error() {
        let a = BaseElem::one(&RingConfig::perfect(2).unwrap());
        let b = BaseElem::one(&RingConfig::perfect(3).unwrap());
        assert!(matches!(a.mul(&b), Err(Error::ConfigMismatch(..))));
    }

    #[test]
    fn frobenius_examples() {
        let v = RingConfig::perfect(3).unwrap();
        let x = BaseElem::t_pow(&v, e(3, 1, 2)).unwrap();
        assert_eq!(x.frobenius().unwrap(), BaseElem::t_pow(&v, e(3, 1, 1)).unwrap());
        let one_plus_t = BaseElem::one(&v).add(&BaseElem::t_pow(&v, e(3, 1, 0)).unwrap()).unwrap();
        let expect = BaseElem::one(&v).add(&BaseElem::t_pow(&v, e(3, 3, 0)).unwrap()).unwrap();
        assert_eq!(one_plus_t.frobenius().unwrap(), expect);
        // Frobenius agrees with the p-th power in characteristic p.
        assert_eq!(one_plus_t.pow(3), expect);
        let mock = RingConfig::mixed(2, 1, 2).unwrap();
        assert!(BaseElem::one(&mock).frobenius().is_err());
    }

    #[test]
    fn divides_and_levels() {
        let v = RingConfig::perfect(2).unwrap();
        let t = |n, k| BaseElem::t_pow(&v, e(2, n, k)).unwrap();
        assert!(divides_monomial(&t(1, 1), &t(1, 0)).unwrap());
        assert!(!divides_monomial(&t(1, 0), &t(1, 1)).unwrap());
        assert!(divides_monomial(&BaseElem::one(&v), &t(5, 3)).unwrap());
        let sum = t(1, 0).add(&t(1, 1)).unwrap();
        assert!(divides_monomial(&sum, &t(1, 0)).is_err());
        assert_eq!(common_level([&t(1, 0), &t(2, 0)]), 0);
        assert_eq!(common_level([&t(1, 1), &t(1, 3)]), 3);
        assert_eq!(common_level(std::iter::empty()), 0);
    }

    #[test]
    fn json_round_trip() {
        let v = RingConfig::truncated(3, e(3, 5, 1)).unwrap();
        let x = BaseElem::from_terms(&v, [(e(3, 1, 2), 2), (PAdicExponent::zero(3), 1)]).unwrap();
        assert_eq!(BaseElem::from_json(&x.to_json()).unwrap(), x);
    }
}
