//! Subquotients `L/R` of monomial ideals of `V`, up to isomorphism.
//!
//! Such a module is determined by whether its lower end is open (`m` rather
//! than `V`), whether its upper end is closed (`t^ℓ m` rather than `t^ℓ V`),
//! and the length `ℓ ∈ Z[1/p] ∪ {∞}`:
//!
//! | kind          | module        |
//! |---------------|---------------|
//! | `[0, ℓ)`      | `V/t^ℓ`       |
//! | `(0, ℓ]`      | `m/t^ℓ m`     |
//! | `[0, ℓ]`      | `V/t^ℓ m`     |
//! | `(0, ℓ)`      | `m/t^ℓ V`     |

use std::cmp::Ordering;
use std::fmt;

use crate::base_ring::{PAdicExponent, RingConfig};
use crate::error::{Error, Result};
use crate::module::PresentedModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntervalKind {
    ClosedOpen,
    OpenClosed,
    ClosedClosed,
    OpenOpen,
}

impl IntervalKind {
    pub fn left_open(self) -> bool {
        matches!(self, IntervalKind::OpenClosed | IntervalKind::OpenOpen)
    }

    pub fn right_closed(self) -> bool {
        matches!(self, IntervalKind::OpenClosed | IntervalKind::ClosedClosed)
    }
}

/// `None` stands for `∞`.
pub type Length = Option<PAdicExponent>;

fn cmp_len(a: &Length, b: &Length) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub kind: IntervalKind,
    pub len: Length,
}

impl Interval {
    /// Normal form; `None` for the zero module.
    pub fn new(kind: IntervalKind, len: Length) -> Option<Self> {
        match &len {
            Some(l) if l.is_zero() => match kind {
                IntervalKind::ClosedClosed => Some(Interval { kind, len }),
                _ => None,
            },
            None => {
                let kind = if kind.left_open() { IntervalKind::OpenClosed } else { IntervalKind::ClosedOpen };
                Some(Interval { kind, len: None })
            }
            Some(_) => Some(Interval { kind, len }),
        }
    }

    pub fn v() -> Self {
        Interval { kind: IntervalKind::ClosedOpen, len: None }
    }

    pub fn ideal_m() -> Self {
        Interval { kind: IntervalKind::OpenClosed, len: None }
    }

    pub fn residue(p: u32) -> Self {
        Interval { kind: IntervalKind::ClosedClosed, len: Some(PAdicExponent::zero(p)) }
    }

    /// `V/t^ℓ`.
    pub fn quotient(len: PAdicExponent) -> Option<Self> {
        Self::new(IntervalKind::ClosedOpen, Some(len))
    }

    pub fn is_almost_zero(&self) -> bool {
        self.len.as_ref().is_some_and(PAdicExponent::is_zero)
    }

    /// `m ⊗ I`.
    pub fn firmify(&self) -> Option<Self> {
        Self::new(IntervalKind::OpenClosed, self.len.clone())
    }

    /// `Hom(m, I)`, taken with finitely supported compatible families.
    pub fn closedify(&self) -> Option<Self> {
        Self::new(IntervalKind::ClosedOpen, self.len.clone())
    }

    pub fn is_firm(&self) -> bool {
        self.kind == IntervalKind::OpenClosed
    }

    pub fn is_closed(&self) -> bool {
        self.kind == IntervalKind::ClosedOpen
    }
}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_len(&self.len, &other.len).then(self.kind.cmp(&other.kind))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.len.as_ref().map_or("∞".to_string(), ToString::to_string);
        let (a, b) = (
            if self.kind.left_open() { "(" } else { "[" },
            if self.kind.right_closed() { "]" } else { ")" },
        );
        write!(f, "{a}0,{l}{b}")
    }
}

/// Finite direct sum of intervals, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialModule {
    pub p: u32,
    pub summands: Vec<Interval>,
}

impl MonomialModule {
    pub fn new(p: u32, summands: impl IntoIterator<Item = Option<Interval>>) -> Self {
        let mut summands: Vec<Interval> = summands.into_iter().flatten().collect();
        summands.sort();
        MonomialModule { p, summands }
    }

    pub fn zero(p: u32) -> Self {
        Self::new(p, [])
    }

    pub fn v(p: u32) -> Self {
        Self::new(p, [Some(Interval::v())])
    }

    pub fn ideal_m(p: u32) -> Self {
        Self::new(p, [Some(Interval::ideal_m())])
    }

    pub fn residue(p: u32) -> Self {
        Self::new(p, [Some(Interval::residue(p))])
    }

    /// Reads off the interval form of a presented module with monomial
    /// invariant factors.
    pub fn from_presented(m: &PresentedModule) -> Result<Self> {
        let d = m.decompose();
        let exps = d.monomial_exponents().ok_or_else(|| Error::NonMonomialModule(d.to_string()))?;
        let mut s: Vec<Option<Interval>> = exps.into_iter().map(Interval::quotient).collect();
        s.extend((0..d.free_rank).map(|_| Some(Interval::v())));
        Ok(Self::new(m.p(), s))
    }

    /// The presented module, available when every summand is closed.
    pub fn to_presented(&self, ring: &RingConfig) -> Result<PresentedModule> {
        let mut factors = Vec::new();
        let mut free = 0;
        for i in &self.summands {
            if !i.is_closed() {
                return Err(Error::Precondition(format!("{i} is not finitely presented")));
            }
            match &i.len {
                None => free += 1,
                Some(l) => factors.push(crate::base_ring::BaseElem::t_pow(ring, l.clone())?),
            }
        }
        PresentedModule::from_factors(ring, &factors, free)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(self.p, self.summands.iter().chain(&other.summands).cloned().map(Some))
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn is_almost_zero(&self) -> bool {
        self.summands.iter().all(Interval::is_almost_zero)
    }

    /// Lengths of the summands that are not almost zero.
    pub fn almost_lengths(&self) -> Vec<Length> {
        let mut v: Vec<Length> = self.summands.iter().filter(|i| !i.is_almost_zero()).map(|i| i.len.clone()).collect();
        v.sort_by(cmp_len);
        v
    }

    /// Almost isomorphism class: an interval is almost isomorphic to every
    /// other interval of the same length.
    pub fn almost_iso(&self, other: &Self) -> bool {
        self.almost_lengths() == other.almost_lengths()
    }

    pub fn firmify(&self) -> Self {
        Self::new(self.p, self.summands.iter().map(Interval::firmify))
    }

    pub fn closedify(&self) -> Self {
        Self::new(self.p, self.summands.iter().map(Interval::closedify))
    }

    /// `(−)_! = m ⊗ Hom(m, −)`.
    pub fn shriek(&self) -> Self {
        self.closedify().firmify()
    }

    pub fn is_firm(&self) -> bool {
        self.summands.iter().all(Interval::is_firm)
    }

    pub fn is_closed(&self) -> bool {
        self.summands.iter().all(Interval::is_closed)
    }
}

impl fmt::Display for MonomialModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let p = 3;
        assert_eq!(MonomialModule::v(p).firmify(), MonomialModule::ideal_m(p));
        assert!(MonomialModule::residue(p).firmify().is_zero());
        assert!(MonomialModule::residue(p).closedify().is_zero());
        assert_eq!(MonomialModule::ideal_m(p).closedify(), MonomialModule::v(p));
        assert!(MonomialModule::residue(p).is_almost_zero());
        assert!(!MonomialModule::ideal_m(p).is_almost_zero());
    }

    #[test]
    fn idempotence_and_round_trips() {
        let p = 2;
        let l = PAdicExponent::new(p, 3u32, 2);
        let all = [IntervalKind::ClosedOpen, IntervalKind::OpenClosed, IntervalKind::ClosedClosed, IntervalKind::OpenOpen];
        for k in all {
            let m = MonomialModule::new(p, [Interval::new(k, Some(l.clone())), Some(Interval::v())]);
            assert_eq!(m.firmify().firmify(), m.firmify());
            assert_eq!(m.closedify().closedify(), m.closedify());
            assert_eq!(m.closedify().firmify(), m.firmify());
            assert_eq!(m.firmify().closedify(), m.closedify());
            assert!(m.firmify().almost_iso(&m));
            assert!(m.closedify().almost_iso(&m));
        }
    }
}
