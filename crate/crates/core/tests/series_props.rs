mod common;

use common::{class, random_sst_model, torus};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sst_core::lattice::{unimodular_completion, CharacteristicLift, IntersectionLattice};
use sst_core::model::FourManifoldModel;
use sst_core::swseries::{
    involution_and_parity_check, moment_tensor, multiply, relift_sign, sst_check, twisted_series,
    SwSeries,
};
use sst_core::{Lattice, Series};

fn lattice(n: usize, rng: &mut ChaCha8Rng) -> Lattice {
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = BigInt::from(rng.gen_range(-3..=3));
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    IntersectionLattice::new(g).unwrap()
}

fn series(l: &Lattice, rng: &mut ChaCha8Rng) -> Series {
    let n = l.rank();
    let k = rng.gen_range(1..=5);
    SwSeries::from_terms(
        l.clone(),
        (0..k).map(|_| {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            (class(&v), BigInt::from(rng.gen_range(-3..=3)))
        }),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_commutative_and_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let l = lattice(n, &mut rng);
        let (a, b, c) = (series(&l, &mut rng), series(&l, &mut rng), series(&l, &mut rng));
        prop_assert_eq!(multiply(&a, &b).unwrap(), multiply(&b, &a).unwrap());
        let left = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
        let right = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(multiply(&a, &SwSeries::one(l.clone())).unwrap(), a);
    }

    #[test]
    fn order_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let l = lattice(n, &mut rng);
        let (a, b) = (series(&l, &mut rng), series(&l, &mut rng));
        if let (Some(oa), Some(ob)) = (a.order(), b.order()) {
            let p = multiply(&a, &b).unwrap();
            prop_assert_eq!(p.order(), Some(oa + ob));
        }
    }

    #[test]
    fn dense_moments_match_direct_probes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_sst_model(&mut rng, 0);
        let s = twisted_series(&m).unwrap();
        for k in 0..=4usize {
            let t = moment_tensor(&s, k);
            for _ in 0..50 {
                let v: Vec<BigInt> = (0..m.rank()).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
                let direct = s.terms().iter().fold(BigInt::zero(), |acc, (x, c)| {
                    let dot = x.coords().iter().zip(&v).fold(BigInt::zero(), |a, (p, q)| a + p * q);
                    let mut pw = BigInt::one();
                    for _ in 0..k { pw *= &dot; }
                    acc + c * pw
                });
                prop_assert_eq!(t.contract(&v), direct);
            }
        }
    }

    #[test]
    fn sst_is_basis_independent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_sst_model(&mut rng, 0);
        let n = m.rank();
        let v = loop {
            let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
            if unimodular_completion(&v).is_some() { break v; }
        };
        let (u, w) = unimodular_completion(&v).unwrap();
        let lattice = m.lattice.change_basis(&u);
        let map = |x: &sst_core::Class| x.transform(&w);
        let moved = FourManifoldModel {
            lattice: lattice.clone(),
            lift: CharacteristicLift::new(&lattice, map(&m.lift.upsilon)).unwrap(),
            basic_classes: m.basic_classes.iter().map(|(x, c)| (map(x), c.clone())).collect(),
            ..m.clone()
        };
        for x in m.basic_classes.keys() {
            for y in m.basic_classes.keys() {
                prop_assert_eq!(m.lattice.pairing(x, y).unwrap(), lattice.pairing(&map(x), &map(y)).unwrap());
            }
        }
        let a = sst_check(&m).unwrap();
        let b = sst_check(&moved).unwrap();
        prop_assert_eq!(a.is_sst, b.is_sst);
        prop_assert_eq!(a.actual_order, b.actual_order);
    }

    #[test]
    fn involution_and_relift_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_sst_model(&mut rng, 0);
        prop_assert!(involution_and_parity_check(&m).unwrap().is_ok());
        let h: Vec<i64> = (0..m.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        let sign = relift_sign(&m, &class(&h)).unwrap();
        let hh = m.lattice.square(&class(&h)).unwrap();
        prop_assert_eq!(sign, if (hh % 2i32) == BigInt::zero() { 1 } else { -1 });
        let _ = torus(&m);
    }
}
