mod common;

use almost::k0::random_matrix;
use almost::linalg::{snf, PolyMatrix};
use almost::suite::snf_certifies;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snf_factorizes(seed in any::<u64>(), rows in 1usize..=6, cols in 1usize..=6, p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, p, rows, cols, 0, 4);
        let r = snf(&a);
        prop_assert!(snf_certifies(&a, &r).unwrap());
        for m in [&r.u, &r.w] {
            let d = common::det(&common::rows(m), p);
            prop_assert!(d.is_constant() && !d.is_zero(), "det = {}", d);
        }
        let again = snf(&r.d);
        prop_assert_eq!(&again.d, &r.d);
    }

    #[test]
    fn chain_ring_cokernels_match_enumeration(seed in any::<u64>(), k in 1usize..=3, n in 1usize..=2) {
        let p = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, p, n, n, 0, 3).with_modulus(k as u64);
        let r = snf(&a);
        prop_assert_eq!(common::cokernel_torsion_profile(&a, p, k), common::profile_from_factors(&r.invariant_factors, n, k));
    }
}

#[test]
fn identity_and_zero() {
    for p in [2, 3] {
        let i = PolyMatrix::identity(p, 4);
        assert_eq!(snf(&i).rank, 4);
        assert_eq!(snf(&PolyMatrix::zero(p, 3, 2)).rank, 0);
    }
}
