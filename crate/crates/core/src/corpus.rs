//! Seeded random corpora shared by the suites and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::base_ring::{PAdicExponent, RingConfig};
use crate::monomial::{Interval, IntervalKind, MonomialModule};

/// A length `k/p^a` with `a ≤ 2` in `(0, cap]`.
pub fn random_length(rng: &mut impl Rng, p: u32, cap: &PAdicExponent) -> PAdicExponent {
    loop {
        let a = rng.gen_range(0..=2u32);
        let k = rng.gen_range(1..=2 * p.pow(a)) as u64;
        let e = PAdicExponent::new(p, k, a);
        if e <= *cap {
            return e;
        }
    }
}

/// A random interval over `ring`; over a truncation every interval has
/// finite length at most the truncation.
pub fn random_interval(rng: &mut impl Rng, ring: &RingConfig) -> Interval {
    let p = ring.p;
    let cap = ring.truncation().cloned().unwrap_or_else(|| PAdicExponent::integer(p, 2));
    let kind = *[IntervalKind::ClosedOpen, IntervalKind::OpenClosed, IntervalKind::ClosedClosed, IntervalKind::OpenOpen]
        .choose(rng)
        .expect("nonempty");
    let len = match kind {
        IntervalKind::ClosedClosed if rng.gen_bool(0.3) => Some(PAdicExponent::zero(p)),
        IntervalKind::ClosedOpen | IntervalKind::OpenClosed if ring.truncation().is_none() && rng.gen_bool(0.3) => None,
        _ => Some(random_length(rng, p, &cap)),
    };
    Interval::new(kind, len).expect("positive or infinite length")
}

pub fn random_monomial(rng: &mut impl Rng, ring: &RingConfig, max_summands: usize) -> MonomialModule {
    let n = rng.gen_range(1..=max_summands);
    MonomialModule::new(ring.p, (0..n).map(|_| Some(random_interval(rng, ring))))
}

/// Hand-picked members followed by random ones, `size` in total.
pub fn monomial_corpus(rng: &mut impl Rng, ring: &RingConfig, size: usize) -> Vec<MonomialModule> {
    let p = ring.p;
    let one = PAdicExponent::integer(p, 1);
    let half = PAdicExponent::unit_fraction(p, 1);
    let mut out = vec![MonomialModule::residue(p)];
    if ring.truncation().is_none() {
        out.push(MonomialModule::v(p));
        out.push(MonomialModule::ideal_m(p));
    }
    out.push(MonomialModule::new(p, [Interval::quotient(one.clone())]));
    out.push(MonomialModule::new(p, [Interval::new(IntervalKind::OpenClosed, Some(half.clone()))]));
    out.push(MonomialModule::new(p, [Interval::new(IntervalKind::ClosedClosed, Some(half))]));
    out.push(MonomialModule::new(p, [Interval::new(IntervalKind::OpenOpen, Some(one))]));
    out.truncate(size);
    while out.len() < size {
        out.push(random_monomial(rng, ring, 3));
    }
    out
}

/// Almost zero monomial modules: sums of copies of `V/m`.
pub fn almost_zero_corpus(p: u32, max: usize) -> Vec<MonomialModule> {
    (1..=max).map(|k| MonomialModule::new(p, (0..k).map(|_| Some(Interval::residue(p))))).collect()
}

/// Unital carriers `Π V/t^(c_i)`, `V`, `V/t^c m`, `V/m` for the `B_!!`
/// checks.
pub fn unital_corpus(rng: &mut impl Rng, ring: &RingConfig, size: usize) -> Vec<Vec<Interval>> {
    let p = ring.p;
    let cap = PAdicExponent::integer(p, 2);
    let mut out = vec![
        vec![Interval::v()],
        vec![Interval::residue(p)],
        vec![Interval::quotient(PAdicExponent::integer(p, 1)).expect("positive")],
    ];
    while out.len() < size {
        let k = rng.gen_range(1..=2);
        let f = (0..k)
            .map(|_| {
                let kind = if rng.gen_bool(0.7) { IntervalKind::ClosedOpen } else { IntervalKind::ClosedClosed };
                let len = if kind == IntervalKind::ClosedOpen && rng.gen_bool(0.2) { None } else { Some(random_length(rng, p, &cap)) };
                Interval::new(kind, len).expect("positive length")
            })
            .collect();
        out.push(f);
    }
    out.truncate(size);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpora_respect_truncation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = PAdicExponent::integer(3, 1);
        let ring = RingConfig::truncated(3, c.clone()).unwrap();
        for m in monomial_corpus(&mut rng, &ring, 40) {
            assert!(m.summands.iter().all(|i| i.len.as_ref().is_some_and(|l| *l <= c)), "{m}");
        }
        let ring = RingConfig::perfect(2).unwrap();
        let a = monomial_corpus(&mut ChaCha8Rng::seed_from_u64(9), &ring, 20);
        let b = monomial_corpus(&mut ChaCha8Rng::seed_from_u64(9), &ring, 20);
        assert_eq!(a, b);
    }
}
