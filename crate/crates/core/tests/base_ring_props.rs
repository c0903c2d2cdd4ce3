mod common;

use almost::base_ring::{BaseElem, PAdicExponent, RingConfig};
use almost::tower::{frobenius_iso_check, tilt_basis_iso};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rings() -> Vec<RingConfig> {
    let mut out = Vec::new();
    for p in [2, 3] {
        out.push(RingConfig::perfect(p).unwrap());
        out.push(RingConfig::truncated(p, PAdicExponent::integer(p, 1)).unwrap());
        out.push(RingConfig::truncated(p, PAdicExponent::new(p, 3u32, 1)).unwrap());
        out.push(RingConfig::mixed(p, 2, 2).unwrap());
    }
    out
}

/// Value of `num/p^k` as a pair for cross-multiplication.
fn rational(e: &PAdicExponent) -> (u128, u128) {
    (e.numerator().to_string().parse().unwrap(), (e.p() as u128).pow(e.denom_exp()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponent_arithmetic_matches_rationals(a in 0u64..500, ka in 0u32..4, b in 0u64..500, kb in 0u32..4, p in prop::sample::select(vec![2u32, 3, 5])) {
        let (x, y) = (PAdicExponent::new(p, a, ka), PAdicExponent::new(p, b, kb));
        let ((xn, xd), (yn, yd)) = (rational(&x), rational(&y));
        let (sn, sd) = rational(&x.add(&y));
        prop_assert_eq!(sn * xd * yd, (xn * yd + yn * xd) * sd);
        prop_assert_eq!(x.cmp(&y), (xn * yd).cmp(&(yn * xd)));
        prop_assert!(x.numerator().to_string().parse::<u128>().unwrap() % p as u128 != 0 || x.is_zero() || x.denom_exp() == 0);
        if let Some(d) = x.checked_sub(&y) {
            prop_assert_eq!(d.add(&y), x.clone());
        }
        prop_assert_eq!(PAdicExponent::parse(p, &x.to_string()).unwrap(), x);
    }

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings() {
            let one = BaseElem::one(&ring);
            for _ in 0..4 {
                let (x, y, z) = (common::random_elem(&mut rng, &ring, 3), common::random_elem(&mut rng, &ring, 3), common::random_elem(&mut rng, &ring, 3));
                prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
                prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
                prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
                prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
                prop_assert_eq!(one.mul(&x).unwrap(), x.clone());
                prop_assert!(x.sub(&x).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn multiplication_matches_convolution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings().into_iter().filter(RingConfig::is_char_p) {
            let bound = ring.truncation().map(|c| c.at_level(2).unwrap());
            let (x, y) = (common::random_elem(&mut rng, &ring, 4), common::random_elem(&mut rng, &ring, 4));
            prop_assert_eq!(common::scaled(&x.mul(&y).unwrap(), 2), common::convolve(&x, &y, 2, bound));
        }
    }

    #[test]
    fn frobenius_is_a_bijective_ring_map(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in [2, 3] {
            let ring = RingConfig::perfect(p).unwrap();
            let (x, y) = (common::random_elem(&mut rng, &ring, 3), common::random_elem(&mut rng, &ring, 3));
            let f = |z: &BaseElem| z.frobenius().unwrap();
            prop_assert_eq!(f(&x.mul(&y).unwrap()), f(&x).mul(&f(&y)).unwrap());
            prop_assert_eq!(f(&x.add(&y).unwrap()), f(&x).add(&f(&y)).unwrap());
            prop_assert_eq!(f(&x).frobenius_inv().unwrap(), x.clone());
            prop_assert_eq!(x.frobenius_inv().unwrap().frobenius().unwrap(), x);
        }
    }
}

#[test]
fn frobenius_on_quotients_and_the_tower() {
    for p in [2, 3] {
        let v = RingConfig::perfect(p).unwrap();
        for omega in [PAdicExponent::integer(p, 1), PAdicExponent::unit_fraction(p, 1), PAdicExponent::integer(p, 2)] {
            for l in 1..=3 {
                if !frobenius_iso_check(&v, &omega, l).unwrap() {
                    continue;
                }
                for n in 1..=3 {
                    let a_n = RingConfig::truncated(p, omega.mul_int(n)).unwrap();
                    assert!(frobenius_iso_check(&a_n, &omega, l).unwrap(), "p={p} ω={omega} n={n} L={l}");
                }
            }
        }
    }
}

#[test]
fn tilt_is_multiplicative_on_all_basis_pairs() {
    for p in [2, 3] {
        for n in 1..=3 {
            let t = tilt_basis_iso(p, n, 2).unwrap();
            assert!(t.holds(), "p={p} n={n}");
            assert_eq!(t.pairs_checked, (p as usize).pow(2 * n));
        }
    }
}
