use almost::almost::{
    closedify, closedify_presented, firmify, is_almost_iso, is_almost_zero, is_exact_iso, is_firm, is_ind_zero, shriek_map,
    IndMap, IndModule,
};
use almost::base_ring::{BaseElem, PAdicExponent, RingConfig};
use almost::corpus::random_monomial;
use almost::monomial::MonomialModule;
use almost::module::{ModuleMap, PresentedModule};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const J: u32 = 6;

fn rings(p: u32) -> Vec<RingConfig> {
    vec![
        RingConfig::perfect(p).unwrap(),
        RingConfig::truncated(p, PAdicExponent::integer(p, 1)).unwrap(),
        RingConfig::truncated(p, PAdicExponent::integer(p, 2)).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quillen_properties_on_monomial_modules(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in rings(p) {
            let shape = random_monomial(&mut rng, &ring, 3);
            let m = IndModule::from_monomial(&ring, &shape).unwrap();
            prop_assert!(is_almost_iso(&IndMap::mu(&m).unwrap(), J).unwrap().holds(), "μ on {:?}", shape);
            prop_assert_eq!(is_almost_zero(&m, J).unwrap().holds(), shape.is_almost_zero());

            let f = firmify(&m).unwrap();
            prop_assert!(is_firm(&f, J).unwrap().holds());
            prop_assert!(is_exact_iso(&IndMap::mu(&f).unwrap(), J).unwrap().holds());
            let ff = firmify(&f).unwrap();
            prop_assert_eq!(ff.shape(), f.shape());
            prop_assert!(f.shape().unwrap().almost_iso(&shape));

            let c = closedify(&m).unwrap();
            prop_assert!(closedify_presented(&c).unwrap().iso_test(&c));
            let cs = MonomialModule::from_presented(&c).unwrap();
            prop_assert!(cs.is_closed());
            prop_assert!(cs.almost_iso(&shape));
        }
    }

    #[test]
    fn shriek_is_exact(a in 1u64..6, b in 1u64..6, p in prop::sample::select(vec![2u32, 3])) {
        let v = RingConfig::perfect(p).unwrap();
        let e = |k: u64| PAdicExponent::new(p, k, 1);
        let (ma, mab, mb) = (
            PresentedModule::monomial_quotient(&v, &e(a)).unwrap(),
            PresentedModule::monomial_quotient(&v, &e(a + b)).unwrap(),
            PresentedModule::monomial_quotient(&v, &e(b)).unwrap(),
        );
        let tb = BaseElem::t_pow(&v, e(b)).unwrap().to_poly(1).unwrap();
        let inc = ModuleMap::at_level(&ma, &mab, 1, almost::linalg::PolyMatrix::scalar(p, 1, &tb)).unwrap();
        let proj = ModuleMap::at_level(&mab, &mb, 1, almost::linalg::PolyMatrix::identity(p, 1)).unwrap();
        prop_assert!(inc.is_injective().unwrap() && proj.is_surjective().unwrap());

        let (si, sp) = (shriek_map(&inc).unwrap(), shriek_map(&proj).unwrap());
        prop_assert!(is_ind_zero(&si.kernel(), J).unwrap().holds());
        prop_assert!(is_ind_zero(&sp.cokernel(), J).unwrap().holds());
        for j in 1..=3 {
            let (fi, fp) = (si.component(j).unwrap(), sp.component(j).unwrap());
            prop_assert!(fi.then(&fp).unwrap().is_zero().unwrap());
            let (k, _) = fp.kernel().unwrap();
            let (im, _) = fi.image().unwrap();
            prop_assert!(k.iso_test(&im), "middle homology at level {}", j);
        }
    }
}
