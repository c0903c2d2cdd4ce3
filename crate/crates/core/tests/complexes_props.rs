use almost::almost::is_almost_iso_presented;
use almost::base_ring::{BaseElem, PAdicExponent, RingConfig};
use almost::complexes::{is_almost_qis, ChainComplex, ChainMap, IndChainMap, IndComplex};
use almost::k0::random_strict;
use almost::module::ModuleMap;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rings(p: u32) -> Vec<RingConfig> {
    vec![RingConfig::perfect(p).unwrap(), RingConfig::truncated(p, PAdicExponent::integer(p, 1)).unwrap()]
}

fn assert_dd_zero(c: &ChainComplex) -> Result<(), TestCaseError> {
    for i in c.low() + 2..=c.high() {
        let dd = c.d(i - 1).mul(&c.d(i)).unwrap();
        let f = ModuleMap::at_level(&c.term(i), &c.term(i - 2), c.level(), dd).unwrap();
        prop_assert!(f.is_zero().unwrap(), "d∘d ≠ 0 at {}", i);
    }
    Ok(())
}

/// Multiplication by a random `t^e` on a random strict complex.
fn random_map(rng: &mut ChaCha8Rng, ring: &RingConfig) -> ChainMap {
    let e = random_strict(rng, ring, 3).unwrap();
    let x = BaseElem::t_pow(ring, PAdicExponent::new(ring.p, rng.gen_range(0..4u64), rng.gen_range(0..=2))).unwrap();
    ChainMap::scalar(&e, &x).unwrap()
}

fn same_transitions(a: &IndComplex, b: &IndComplex) -> Result<(), TestCaseError> {
    for j in 1..=3 {
        let (x, y) = (a.component(j).unwrap(), b.component(j).unwrap());
        prop_assert_eq!(x.degrees(), y.degrees());
        let (tx, ty) = (a.transition(j).unwrap(), b.transition(j).unwrap());
        for i in x.degrees() {
            let diff = tx.comp(i).sub(&ty.comp(i)).unwrap();
            let f = ModuleMap::at_level(&x.term(i), &y.term(i), tx.level().max(ty.level()), diff);
            prop_assert!(f.map(|f| f.is_zero().unwrap()).unwrap_or(false), "transition {} differs in degree {}", j, i);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cone_shift_tensor_are_complexes(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings(p) {
            let f = random_map(&mut rng, &ring);
            let cone = f.cone().unwrap();
            assert_dd_zero(&cone.cone)?;
            assert_dd_zero(&cone.cone.shift(1))?;
            assert_dd_zero(&f.source().shift(-3))?;
            let n = almost::module::PresentedModule::monomial_quotient(&ring, &PAdicExponent::new(p, 1u64, 1)).unwrap();
            assert_dd_zero(&cone.cone.tensor_module(&n).unwrap())?;
            let composite = cone.inclusion.then(&cone.projection).unwrap();
            for i in cone.cone.degrees() {
                let m = ModuleMap::at_level(&f.target().term(i), &f.source().term(i - 1), composite.level(), composite.comp(i)).unwrap();
                prop_assert!(m.is_zero().unwrap());
            }
        }
    }

    #[test]
    fn cylinder_certificates_verify(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings(p) {
            let f = random_map(&mut rng, &ring);
            let cyl = f.cylinder().unwrap();
            prop_assert!(cyl.verify(&f).unwrap());
            prop_assert!(cyl.beta.is_qis().unwrap());
        }
    }

    #[test]
    fn almost_qis_iff_homology_almost_iso(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings(p) {
            let f = random_map(&mut rng, &ring);
            let ind = IndChainMap::constant(&f);
            let via_cone = is_almost_qis(&ind, 4).unwrap().holds();
            let degrees = f.source().low() - 1..=f.source().high() + 1;
            let via_homology = degrees.into_iter().all(|i| is_almost_iso_presented(&f.on_homology(i).unwrap(), 4).unwrap().holds());
            prop_assert_eq!(via_cone, via_homology, "{:?}", f);
        }
    }

    #[test]
    fn firmify_commutes_with_cone_and_shift(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3]), k in -2i32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings(p) {
            let f = IndChainMap::constant(&random_map(&mut rng, &ring));
            same_transitions(&f.firmify().cone(), &f.cone().firmify())?;
            let e = f.source().clone();
            same_transitions(&e.firmify().shift(k), &e.shift(k).firmify())?;
        }
    }
}
