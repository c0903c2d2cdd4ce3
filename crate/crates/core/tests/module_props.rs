mod common;

use almost::almost::is_almost_zero_presented;
use almost::base_ring::{BaseElem, PAdicExponent, RingConfig};
use almost::k0::random_matrix;
use almost::linalg::PolyMatrix;
use almost::module::{ModuleMap, PresentedModule};
use almost::poly::Poly;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rings(p: u32) -> Vec<RingConfig> {
    vec![
        RingConfig::perfect(p).unwrap(),
        RingConfig::truncated(p, PAdicExponent::integer(p, 1)).unwrap(),
        RingConfig::truncated(p, PAdicExponent::integer(p, 2)).unwrap(),
    ]
}

fn random_module(rng: &mut ChaCha8Rng, ring: &RingConfig) -> PresentedModule {
    let (g, r) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
    PresentedModule::new(ring, 1, random_matrix(rng, ring.p, g, r, 1, 4)).unwrap()
}

/// A product of elementary matrices, so unimodular by construction.
fn random_unimodular(rng: &mut ChaCha8Rng, p: u32, n: usize) -> PolyMatrix {
    let mut u = PolyMatrix::identity(p, n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let mut e = PolyMatrix::identity(p, n);
        e.set(i, j, Poly::monomial(p, rng.gen_range(1..p), rng.gen_range(0..3)));
        u = e.mul(&u).unwrap();
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn change_of_basis_is_an_isomorphism(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings(p) {
            let m = random_module(&mut rng, &ring);
            let rel = m.relations().clone();
            let u = random_unimodular(&mut rng, p, rel.rows());
            let w = random_unimodular(&mut rng, p, rel.cols());
            let m2 = PresentedModule::new(&ring, m.level(), u.mul(&rel).unwrap().mul(&w).unwrap()).unwrap();
            prop_assert!(m.iso_test(&m2));
            prop_assert_eq!(m.decompose(), m2.decompose());
            prop_assert!(ModuleMap::new(&m, &m2, u).unwrap().is_iso().unwrap());
        }
    }

    #[test]
    fn tensor_is_commutative_and_associative(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings(p) {
            let (a, b, c) = (random_module(&mut rng, &ring), random_module(&mut rng, &ring), random_module(&mut rng, &ring));
            prop_assert!(a.tensor(&b).unwrap().iso_test(&b.tensor(&a).unwrap()));
            let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
            let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
            prop_assert!(left.iso_test(&right));
        }
    }

    #[test]
    fn nonzero_finitely_presented_is_not_almost_zero(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = RingConfig::perfect(p).unwrap();
        let m = random_module(&mut rng, &v);
        prop_assert_eq!(is_almost_zero_presented(&m, 6).unwrap().holds(), m.is_zero());
    }

    #[test]
    fn tor_ignores_redundant_generators(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings(p) {
            let (m, n) = (random_module(&mut rng, &ring), random_module(&mut rng, &ring));
            let padded = PresentedModule::new(&ring, m.level(), m.relations().block_diag(&PolyMatrix::identity(p, 1))).unwrap();
            prop_assert!(m.iso_test(&padded));
            for i in 0..=2 {
                prop_assert!(m.tor(&n, i).unwrap().iso_test(&padded.tor(&n, i).unwrap()), "Tor_{}", i);
            }
        }
    }

    #[test]
    fn tor_of_cyclic_quotients(a in 1u64..8, b in 1u64..8, p in prop::sample::select(vec![2u32, 3])) {
        let v = RingConfig::perfect(p).unwrap();
        let (ea, eb) = (PAdicExponent::new(p, a, 1), PAdicExponent::new(p, b, 1));
        let (ma, mb) = (PresentedModule::monomial_quotient(&v, &ea).unwrap(), PresentedModule::monomial_quotient(&v, &eb).unwrap());
        let min = PresentedModule::monomial_quotient(&v, &PAdicExponent::new(p, a.min(b), 1)).unwrap();
        prop_assert!(ma.tor(&mb, 0).unwrap().iso_test(&min));
        prop_assert!(ma.tor(&mb, 1).unwrap().iso_test(&min));
        prop_assert!(ma.tor(&mb, 2).unwrap().is_zero());
        prop_assert!(ma.ext(&mb, 0).unwrap().iso_test(&min));
    }
}

#[test]
fn quotient_by_unit_is_zero() {
    for p in [2, 3] {
        for ring in rings(p) {
            assert!(PresentedModule::cyclic(&ring, &BaseElem::one(&ring)).unwrap().is_zero());
        }
    }
}
