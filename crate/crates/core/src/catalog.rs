//! Named example manifolds.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::lattice::{CharacteristicLift, CohClass, IntersectionLattice};
use crate::model::FourManifoldModel;
use crate::scalar::{int, Int};
use crate::surgery::{blowup, elliptic_surface};

/// Largest `n` accepted in `E(n)`, `Y(n)` and `synthetic-nonSST(n)`.
pub const MAX_INDEX: u32 = 200;

/// Names shown by `catalog list`.
pub fn catalog_names() -> Vec<String> {
    let mut v = vec!["K3".to_string()];
    v.extend((2..=12).map(|n| format!("E({n})")));
    v.extend(["E(2)#1", "E(3)#1", "E(4)#2"].map(String::from));
    v.extend((4..=8).map(|n| format!("Y({n})")));
    v.push("synthetic-nonSST(8)".into());
    v
}

fn index(s: &str, prefix: &str) -> Option<u32> {
    s.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok()
}

pub fn catalog<I: Int>(name: &str) -> Result<FourManifoldModel<I>> {
    let name = name.trim();
    let unknown = || Error::UnknownCatalog(name.to_string());
    if name == "K3" {
        let mut m = elliptic_surface(2, 0)?;
        m.name = "K3".into();
        return Ok(m);
    }
    if let Some((base, k)) = name.rsplit_once('#') {
        let k: u32 = k.parse().map_err(|_| unknown())?;
        if k == 0 || k > 16 {
            return Err(unknown());
        }
        let mut m = catalog::<I>(base)?;
        if base.starts_with("synthetic") {
            return Err(unknown());
        }
        for _ in 0..k {
            m = blowup(&m)?;
        }
        return Ok(m);
    }
    if let Some(n) = index(name, "E(") {
        if !(2..=MAX_INDEX).contains(&n) {
            return Err(unknown());
        }
        return elliptic_surface(n, 0);
    }
    if let Some(n) = index(name, "Y(") {
        if !(4..=MAX_INDEX).contains(&n) {
            return Err(unknown());
        }
        return Ok(one_class_manifold(n));
    }
    if let Some(chi) = index(name, "synthetic-nonSST(") {
        if chi < 4 || chi % 2 != 0 || chi > MAX_INDEX {
            return Err(unknown());
        }
        return Ok(synthetic_non_sst(chi));
    }
    Err(unknown())
}

/// `chi_h = n`, `c1^2 = n - 3`, basic classes `+-K` with `SW(K) = 1`.
fn one_class_manifold<I: Int>(n: u32) -> FourManifoldModel<I> {
    let n = n as i64;
    let c1sq = n - 3;
    let (b2p, b2m) = FourManifoldModel::<I>::betti_for(Ratio::from_integer(n), c1sq, 0)
        .expect("integral chi_h");
    let lattice = IntersectionLattice::new(vec![vec![int::<I>(c1sq)]]).unwrap();
    let k = CohClass::new(vec![int::<I>(1)]);
    let lift = CharacteristicLift::new(&lattice, k.clone()).unwrap();
    let mut classes = BTreeMap::new();
    classes.insert(k.neg(), int::<I>(if n % 2 == 0 { 1 } else { -1 }));
    classes.insert(k, int::<I>(1));
    FourManifoldModel {
        name: format!("Y({n})"),
        b1: 0,
        b2plus: b2p,
        b2minus: b2m,
        lattice,
        lift,
        basic_classes: classes,
        provenance: vec![
            "one basic class pair +-K with K^2 = c1^2 = chi_h - 3".into(),
            "SW(+-K) = +-1 taken from the external construction, not computed here".into(),
        ],
    }
}

/// Even `chi_h`, `c1^2 = 0`, a single basic class `0` with `SW = 1`: the twisted
/// series is the constant 1, so it fails SST as soon as `chi_h >= 4`.
fn synthetic_non_sst<I: Int>(chi: u32) -> FourManifoldModel<I> {
    let (b2p, b2m) =
        FourManifoldModel::<I>::betti_for(Ratio::from_integer(chi as i64), 0, 0).unwrap();
    let lattice = IntersectionLattice::new(vec![vec![I::zero()]]).unwrap();
    let mut classes = BTreeMap::new();
    classes.insert(CohClass::zero(1), int::<I>(1));
    FourManifoldModel {
        name: format!("synthetic-nonSST({chi})"),
        b1: 0,
        b2plus: b2p,
        b2minus: b2m,
        lift: CharacteristicLift::new(&lattice, CohClass::zero(1)).unwrap(),
        lattice,
        basic_classes: classes,
        provenance: vec!["synthetic test input, not a known manifold".into()],
    }
}
