mod common;

use common::{class, random_sst_model, torus};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sst_core::catalog::catalog;
use sst_core::surgery::{blowup, elliptic_surface, fiber_sum, knot_surgery, log_transform};
use sst_core::swseries::{sst_check, twisted_series};
use sst_core::Model;

fn trefoil() -> Vec<BigInt> {
    [1, -1, 1].map(BigInt::from).to_vec()
}

fn assert_sst(m: &Model, what: &str) {
    let v = sst_check(m).unwrap_or_else(|e| panic!("{what}: {e}"));
    assert!(v.is_sst, "{what}: required {} actual {}", v.required_order, v.actual_order);
}

#[test]
fn random_models_stay_sst_under_every_surgery() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let k3 = catalog::<BigInt>("K3").unwrap();
    for i in 0..60 {
        let m = random_sst_model(&mut rng, i);
        assert_sst(&m, &m.name);
        let t = torus(&m);
        assert_sst(&blowup(&m).unwrap(), "blowup");
        assert_sst(&knot_surgery(&m, &t, &trefoil()).unwrap(), "knot");
        for p in [2, 3] {
            assert_sst(&log_transform(&m, &t, p).unwrap(), "log");
        }
        assert_sst(&fiber_sum(&m, &t, &k3, &class(&[1]), 0).unwrap(), "fiber sum");
    }
}

#[test]
fn blowup_keeps_chi_h_and_drops_c1sq() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..30 {
        let m = random_sst_model(&mut rng, i);
        let b = blowup(&m).unwrap();
        assert_eq!(b.chi_h(), m.chi_h());
        assert_eq!(b.c1sq(), m.c1sq() - 1);
        let before = twisted_series(&m).unwrap().len();
        assert_eq!(twisted_series(&b).unwrap().len(), 2 * before);
    }
}

#[test]
fn fiber_sum_orders_add_plus_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..30 {
        let a = random_sst_model(&mut rng, i);
        let b = random_sst_model(&mut rng, i + 100);
        let s = fiber_sum(&a, &torus(&a), &b, &torus(&b), 0).unwrap();
        let oa = twisted_series(&a).unwrap().order();
        let ob = twisted_series(&b).unwrap().order();
        let os = twisted_series(&s).unwrap().order();
        match (oa, ob) {
            (Some(x), Some(y)) => assert_eq!(os, Some(x + y + 2), "{}", s.name),
            _ => unreachable!(),
        }
    }
}

#[test]
fn elliptic_chain_from_k3_pieces() {
    let k3 = catalog::<BigInt>("K3").unwrap();
    let f = class(&[1]);
    for n in 4..=8u32 {
        let prev = elliptic_surface::<BigInt>(n - 2, 0).unwrap();
        let s = fiber_sum(&prev, &f, &k3, &f, 0).unwrap();
        let want = twisted_series(&elliptic_surface::<BigInt>(n, 0).unwrap()).unwrap();
        let got = twisted_series(&s).unwrap();
        assert_eq!(got.lattice, want.lattice);
        assert!(got.sign_relative_to(&want).is_some(), "E({n}): {got} vs {want}");
        assert_eq!((s.chi_h(), s.c1sq()), (num_rational::Ratio::from_integer(n as i64), 0));
    }
}

#[test]
fn surgery_rejects_bad_tori() {
    let e = catalog::<BigInt>("Y(5)").unwrap();
    let k = class(&[1]);
    assert!(knot_surgery(&e, &k, &trefoil()).is_err());
    assert!(log_transform(&e, &k, 2).is_err());
    let k3 = catalog::<BigInt>("K3").unwrap();
    assert!(fiber_sum(&e, &k, &k3, &class(&[1]), 0).is_err());
    assert!(knot_surgery(&k3, &class(&[1]), &[1, 1].map(BigInt::from)).is_err());
}
