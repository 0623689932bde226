//! Random SST models for property tests.
//!
//! The twisted series is built directly as `prod_i 2 sinh(z v_i) * Q(z)` with
//! `Q` even, so its order at 0 is known from below without using any of the
//! surgery code. All classes are congruent to the lift mod 2. The last lattice coordinate is always a radical torus class
//! `f`, available to fiber sums, knot surgery and log transforms.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sst_core::lattice::{CharacteristicLift, CohClass, IntersectionLattice};
use sst_core::model::FourManifoldModel;
use sst_core::swseries::{multiply, untwist, SwSeries};
use sst_core::{Class, Lattice, Model, Series};

pub fn class(v: &[i64]) -> Class {
    CohClass::from_i64(v)
}

/// Solves `G u = diag(G) (mod 2)` by elimination over GF(2).
pub fn characteristic_vector(gram: &[Vec<i64>]) -> Vec<i64> {
    let n = gram.len();
    let mut a: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut row: Vec<u8> = gram[i].iter().map(|g| g.rem_euclid(2) as u8).collect();
            row.push(gram[i][i].rem_euclid(2) as u8);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| a[i][c] == 1) else { continue };
        a.swap(r, p);
        for i in 0..n {
            if i != r && a[i][c] == 1 {
                for k in 0..=n {
                    a[i][k] ^= a[r][k];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    assert!(a[r..].iter().all(|row| row[n] == 0), "diagonal outside the image");
    let mut u = vec![0i64; n];
    for (i, &c) in pivots.iter().enumerate() {
        u[c] = a[i][n] as i64;
    }
    u
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// A validated SST model of lattice rank <= 4 with at most 6 class pairs.
pub fn random_sst_model(rng: &mut ChaCha8Rng, tag: usize) -> Model {
    loop {
        if let Some(m) = attempt(rng, tag) {
            return m;
        }
    }
}

fn attempt(rng: &mut ChaCha8Rng, tag: usize) -> Option<Model> {
    let core = rng.gen_range(0..=3usize);
    let n = core + 1;
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..core {
        for j in i..core {
            let g = rng.gen_range(-2..=2);
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    let chi0 = characteristic_vector(&gram);
    let lattice: Lattice = IntersectionLattice::new(
        gram.iter().map(|r| r.iter().map(|&g| BigInt::from(g)).collect()).collect(),
    )
    .unwrap();

    // classes are sum(+-v_i) + (+-y or +-3y); all congruent to sum(v_i) + y mod 2,
    // which is forced to be characteristic
    let d = rng.gen_range(0..=3u32);
    let with_q = rng.gen_bool(0.6) && d <= 2;
    let mut vs: Vec<Vec<i64>> = (0..d).map(|_| random_vector(rng, n, -1, 1)).collect();
    let mut y = if with_q { Some(random_vector(rng, n, -1, 1)) } else { None };
    let sum = |vs: &[Vec<i64>], y: &Option<Vec<i64>>| -> Vec<i64> {
        (0..n)
            .map(|i| vs.iter().map(|v| v[i]).sum::<i64>() + y.as_ref().map_or(0, |y| y[i]))
            .collect()
    };
    let fix = |w: &mut Vec<i64>, target: &[i64], cur: &[i64]| {
        for i in 0..n {
            if (target[i] - cur[i]).rem_euclid(2) == 1 {
                w[i] += if w[i] > 0 { -1 } else { 1 };
            }
        }
    };
    let cur = sum(&vs, &y);
    match (&mut y, vs.last_mut()) {
        (Some(yv), _) => fix(yv, &chi0, &cur),
        (None, Some(v)) => fix(v, &chi0, &cur),
        (None, None) => {
            if chi0.iter().any(|c| c.rem_euclid(2) == 1) {
                return None;
            }
        }
    }
    if vs.iter().chain(y.iter()).any(|v| v.iter().all(|&x| x == 0)) {
        return None;
    }
    let w0 = sum(&vs, &y);
    let lift: Vec<i64> = w0.iter().map(|&x| x + 2 * rng.gen_range(-1..=1)).collect();

    let mut series: Series = SwSeries::one(lattice.clone());
    for v in &vs {
        series = multiply(&series, &SwSeries::two_sinh(lattice.clone(), &class(v))).unwrap();
    }
    if let Some(y) = &y {
        let a: i64 = rng.gen_range(-2..=2);
        let b: i64 = [-1, 1, 2][rng.gen_range(0..3)];
        let y3: Vec<i64> = y.iter().map(|x| 3 * x).collect();
        let q = SwSeries::from_terms(
            lattice.clone(),
            [
                (class(y), BigInt::from(b)),
                (class(y).neg(), BigInt::from(b)),
                (class(&y3), BigInt::from(a)),
                (class(&y3).neg(), BigInt::from(a)),
            ],
        );
        series = multiply(&series, &q).unwrap();
    }
    if series.is_empty() || series.len() > 12 {
        return None;
    }
    let order = series.order()? as i64;
    let c1sq = rng.gen_range(-4..=4i64);
    let chi = (2..=8i64)
        .filter(|chi| (chi + c1sq - d as i64).rem_euclid(2) == 0)
        .filter(|chi| chi - c1sq - 3 <= order)
        .collect::<Vec<_>>();
    if chi.is_empty() {
        return None;
    }
    let chi = chi[rng.gen_range(0..chi.len())];
    let (b2p, b2m) =
        FourManifoldModel::<BigInt>::betti_for(num_rational::Ratio::from_integer(chi), c1sq, 0)?;
    let lift = CharacteristicLift::new(&lattice, class(&lift)).ok()?;
    let raw: BTreeMap<Class, BigInt> = untwist(&series, &lift).ok()?;
    let m = FourManifoldModel {
        name: format!("random-{tag}"),
        b1: 0,
        b2plus: b2p,
        b2minus: b2m,
        lattice,
        lift,
        basic_classes: raw,
        provenance: vec!["randomly generated".into()],
    };
    let rep = sst_core::lattice::validate_model(&m, false);
    assert!(rep.is_ok(), "generator produced an invalid model:\n{rep}");
    Some(m)
}

/// Index of the radical torus coordinate.
pub fn torus(m: &Model) -> Class {
    let mut v = vec![0i64; m.rank()];
    *v.last_mut().unwrap() = 1;
    class(&v)
}
