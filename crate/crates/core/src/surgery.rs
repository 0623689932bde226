//! Surgery laws acting on models: each operation transforms the lattice, the
//! lift, the Betti data and the twisted series together, then stores the raw SW
//! values that reproduce the new twisted series under the new lift.

use std::collections::BTreeMap;


use crate::error::{Error, Result};
use crate::lattice::{unimodular_completion, CharacteristicLift, CohClass, IntersectionLattice, Matrix};
use crate::model::FourManifoldModel;
use crate::scalar::{int, Int};
use crate::swseries::{multiply, twisted_series_unchecked, untwist, SwSeries};

fn binomial<I: Int>(n: u32, k: u32) -> I {
    let mut acc = I::one();
    for i in 0..k {
        acc = acc * int::<I>((n - i) as i64) / int::<I>((i + 1) as i64);
    }
    acc
}

/// Minimal elliptic surface without multiple fibers over a genus-`g` base,
/// with twisted series `(2 sinh(z f))^(chi_h + 2g - 2)`.
pub fn elliptic_surface<I: Int>(chi_h: u32, g: u32) -> Result<FourManifoldModel<I>> {
    let e = chi_h as i64 + 2 * g as i64 - 2;
    if chi_h == 0 || e < 0 {
        return Err(Error::Surgery(format!(
            "elliptic surface needs chi_h >= 1 and chi_h + 2g - 2 >= 0 (got chi_h = {chi_h}, g = {g})"
        )));
    }
    let e = e as u32;
    let lattice = IntersectionLattice::diagonal(&[0]);
    let lift = CharacteristicLift::new(&lattice, CohClass::from_i64(&[e as i64]))?;
    let mut basic_classes = BTreeMap::new();
    for j in 0..=e {
        let c: I = binomial(e, j);
        let c = if j % 2 == 1 { -c } else { c };
        basic_classes.insert(CohClass::from_i64(&[e as i64 - 2 * j as i64]), c);
    }
    let name = if g == 0 {
        format!("E({chi_h})")
    } else {
        format!("elliptic(chi_h={chi_h},g={g})")
    };
    Ok(FourManifoldModel {
        name,
        b1: 2 * g,
        b2plus: 2 * chi_h - 1 + 2 * g,
        b2minus: 10 * chi_h - 1 + 2 * g,
        lattice,
        lift,
        basic_classes,
        provenance: vec![format!(
            "elliptic surface chi_h={chi_h} g={g}: series (2 sinh zf)^{e}, lift = canonical class {e}f, sigma = -8 chi_h"
        )],
    })
}

fn blowup_name(name: &str) -> String {
    if let Some((base, k)) = name.rsplit_once('#') {
        if let Ok(k) = k.parse::<u32>() {
            return format!("{base}#{}", k + 1);
        }
    }
    format!("{name}#1")
}

/// Connected sum with a reversed projective plane.
pub fn blowup<I: Int>(m: &FourManifoldModel<I>) -> Result<FourManifoldModel<I>> {
    let n = m.rank();
    let lattice = m.lattice.direct_sum(&IntersectionLattice::diagonal(&[-1]));
    let e = CohClass::basis(n + 1, n);
    let lift = CharacteristicLift::new(&lattice, m.lift.upsilon.extend(1).add(&e))?;
    let old = twisted_series_unchecked(m)?.map_classes(lattice.clone(), |x| x.extend(1));
    let factor = SwSeries::two_sinh(lattice.clone(), &e).negate();
    let series = multiply(&old, &factor)?;
    let mut out = FourManifoldModel {
        name: blowup_name(&m.name),
        b1: m.b1,
        b2plus: m.b2plus,
        b2minus: m.b2minus + 1,
        basic_classes: untwist(&series, &lift)?,
        lattice,
        lift,
        provenance: m.provenance.clone(),
    };
    out.note(format!("blowup of {}: exceptional class e{n}, lift + E", m.name));
    Ok(out)
}

fn require_null<I: Int>(m: &FourManifoldModel<I>, t: &CohClass<I>, what: &str) -> Result<()> {
    let sq = m.lattice.square(t)?;
    if !sq.is_zero() {
        return Err(Error::Surgery(format!(
            "{what} {t} in {} is not a null class: T^2 = {sq}",
            m.name
        )));
    }
    Ok(())
}

/// Basis change putting the primitive class `t` first, or reusing the basis
/// slot when `t` is already a signed basis vector.
/// Returns `(u, w, slot)` with `u` unimodular, `w = u^-1` and `u e_slot = t`.
fn basis_with<I: Int>(t: &CohClass<I>) -> Option<(Matrix<I>, Matrix<I>, usize)> {
    let n = t.rank();
    let nonzero: Vec<usize> = (0..n).filter(|&i| !t.0[i].is_zero()).collect();
    if nonzero.len() == 1 && t.0[nonzero[0]].abs().is_one() {
        let i = nonzero[0];
        let s = t.0[i].clone();
        let mut u = crate::lattice::identity::<I>(n);
        u[i][i] = s.clone();
        // a signed permutation is its own inverse here
        return Some((u.clone(), u, i));
    }
    unimodular_completion(&t.0).map(|(u, w)| (u, w, 0))
}

/// Fiber sum along square-zero torus classes, with twisted series
/// `+4 sinh^2(z T) SW_1 SW_2`. The result lattice is the orthogonal sum with
/// `T1` and `T2` identified.
pub fn fiber_sum<I: Int>(
    m1: &FourManifoldModel<I>,
    t1: &CohClass<I>,
    m2: &FourManifoldModel<I>,
    t2: &CohClass<I>,
    b1_result: u32,
) -> Result<FourManifoldModel<I>> {
    require_null(m1, t1, "torus class")?;
    require_null(m2, t2, "torus class")?;
    if t1.is_zero() || t2.is_zero() {
        return Err(Error::Surgery("torus class must be nonzero".into()));
    }
    if !m1.lattice.is_radical(t1)? || !m2.lattice.is_radical(t2)? {
        return Err(Error::Surgery(
            "lattice identification failure: torus classes must pair trivially with the working lattice"
                .into(),
        ));
    }
    let (u, w, slot) = basis_with(t2).ok_or_else(|| {
        Error::Surgery(format!(
            "lattice identification failure: {t2} is not primitive in {}",
            m2.name
        ))
    })?;
    let r2 = m2.rank();
    let l2 = m2.lattice.change_basis(&u);
    let keep: Vec<usize> = (0..r2).filter(|&i| i != slot).collect();
    let rest = IntersectionLattice::new(
        keep.iter()
            .map(|&i| keep.iter().map(|&j| l2.entry(i, j).clone()).collect())
            .collect(),
    )?;
    let lattice = m1.lattice.direct_sum(&rest);
    let embed1 = |x: &CohClass<I>| x.extend(r2 - 1);
    let t = embed1(t1);
    let embed2 = |y: &CohClass<I>| {
        let yp = y.transform(&w);
        let mut v = t1.scale(&yp.0[slot]).0;
        v.extend(keep.iter().map(|&i| yp.0[i].clone()));
        CohClass(v)
    };

    let s1 = twisted_series_unchecked(m1)?.map_classes(lattice.clone(), embed1);
    let s2 = twisted_series_unchecked(m2)?.map_classes(lattice.clone(), embed2);
    let sinh_sq = SwSeries::from_terms(
        lattice.clone(),
        [
            (t.scale(&int(2)), I::one()),
            (CohClass::zero(lattice.rank()), int(-2)),
            (t.scale(&int(-2)), I::one()),
        ],
    );
    let series = multiply(&multiply(&s1, &s2)?, &sinh_sq)?;
    let lift = CharacteristicLift::new(
        &lattice,
        embed1(&m1.lift.upsilon).add(&embed2(&m2.lift.upsilon)),
    )?;
    let chi_h = m1.chi_h() + m2.chi_h();
    let c1sq = m1.c1sq() + m2.c1sq();
    let (b2plus, b2minus) = FourManifoldModel::<I>::betti_for(chi_h, c1sq, b1_result)
        .ok_or_else(|| {
            Error::Surgery(format!(
                "no Betti numbers realise chi_h = {chi_h}, c1^2 = {c1sq}, b1 = {b1_result}"
            ))
        })?;
    let mut provenance = m1.provenance.clone();
    provenance.extend(m2.provenance.iter().cloned());
    let mut out = FourManifoldModel {
        name: format!("({} #T {})", m1.name, m2.name),
        b1: b1_result,
        b2plus,
        b2minus,
        basic_classes: untwist(&series, &lift)?,
        lattice,
        lift,
        provenance,
    };
    out.note(format!(
        "fiber sum of {} along {t1} and {} along {t2}: sign fixed to +4 sinh^2(zT); lattice is the amalgam with T identified, b1 = {b1_result} supplied by caller",
        m1.name, m2.name
    ));
    Ok(out)
}

/// Knot surgery along `t`: multiplies the twisted series by the symmetrized
/// Alexander polynomial `sum_i a_i e^{2 i z T}`. `alexander` lists
/// `a_{-d}, ..., a_d`.
pub fn knot_surgery<I: Int>(
    m: &FourManifoldModel<I>,
    t: &CohClass<I>,
    alexander: &[I],
) -> Result<FourManifoldModel<I>> {
    require_null(m, t, "torus class")?;
    if alexander.len().is_multiple_of(2) {
        return Err(Error::Surgery(
            "Alexander coefficients must be listed symmetrically as a_{-d}..a_d (odd length)".into(),
        ));
    }
    let d = alexander.len() / 2;
    for i in 0..d {
        if alexander[i] != alexander[alexander.len() - 1 - i] {
            return Err(Error::Surgery(format!(
                "asymmetric Alexander coefficients: a_{} = {} but a_{} = {}",
                i as i64 - d as i64,
                alexander[i],
                d - i,
                alexander[alexander.len() - 1 - i]
            )));
        }
    }
    let total = alexander.iter().fold(I::zero(), |a, b| a + b.clone());
    if !total.abs().is_one() {
        return Err(Error::Surgery(format!(
            "Alexander polynomial must satisfy |Delta(1)| = 1, got Delta(1) = {total}"
        )));
    }
    let multiplier = SwSeries::along(m.lattice.clone(), &t.scale(&int(2)), -(d as i64), alexander);
    let series = multiply(&twisted_series_unchecked(m)?, &multiplier)?;
    let mut out = m.clone();
    out.basic_classes = untwist(&series, &m.lift)?;
    out.name = format!("{}[knot]", m.name);
    let coeffs: Vec<String> = alexander.iter().map(|a| a.to_string()).collect();
    out.note(format!(
        "knot surgery along {t} with Alexander coefficients [{}]: external-formula multiplier Delta_K(e^(2zT)); lift kept unchanged",
        coeffs.join(",")
    ));
    Ok(out)
}

/// Generalized logarithmic transform of multiplicity `p` along `t`. The lattice
/// is refined by `T_p = T/p` and the twisted series multiplied by
/// `sinh(p z T_p)/sinh(z T_p)`.
pub fn log_transform<I: Int>(
    m: &FourManifoldModel<I>,
    t: &CohClass<I>,
    p: u32,
) -> Result<FourManifoldModel<I>> {
    if p == 0 {
        return Err(Error::Surgery("log transform multiplicity must be >= 1".into()));
    }
    require_null(m, t, "torus class")?;
    if t.is_zero() {
        return Err(Error::Surgery("torus class must be nonzero".into()));
    }
    if p == 1 {
        return Ok(m.clone());
    }
    let (u, w, slot) = basis_with(t).ok_or_else(|| {
        Error::Surgery(format!("log transform needs a primitive torus class, got {t}"))
    })?;
    let pi: I = int(p as i64);
    let g = m.lattice.change_basis(&u);
    let n = m.rank();
    let mut gram = g.gram().to_vec();
    for j in 0..n {
        if j == slot {
            continue;
        }
        let v = gram[slot][j].clone();
        if !(v.clone() % pi.clone()).is_zero() {
            return Err(Error::Surgery(format!(
                "refinement by T/{p} is not integral: T pairs to {v} with a basis vector"
            )));
        }
        gram[slot][j] = v.clone() / pi.clone();
        gram[j][slot] = v / pi.clone();
    }
    gram[slot][slot] = I::zero();
    let lattice = IntersectionLattice::new(gram)?;
    let refine = |x: &CohClass<I>| {
        let mut y = x.transform(&w);
        y.0[slot] = y.0[slot].clone() * pi.clone();
        y
    };
    let lift = CharacteristicLift::new(&lattice, refine(&m.lift.upsilon)).map_err(|_| {
        Error::Surgery(format!(
            "lift {} is not characteristic after refining by T/{p}",
            m.lift.upsilon
        ))
    })?;
    let tp = CohClass::basis(n, slot);
    let multiplier = SwSeries::from_terms(
        lattice.clone(),
        (0..p as i64).map(|i| (tp.scale(&int(p as i64 - 1 - 2 * i)), I::one())),
    );
    let series = multiply(
        &twisted_series_unchecked(m)?.map_classes(lattice.clone(), refine),
        &multiplier,
    )?;
    let mut out = FourManifoldModel {
        name: format!("{}[log {p}]", m.name),
        b1: m.b1,
        b2plus: m.b2plus,
        b2minus: m.b2minus,
        basic_classes: untwist(&series, &lift)?,
        lattice,
        lift,
        provenance: m.provenance.clone(),
    };
    out.note(format!(
        "generalized log transform p={p} along {t}: external-formula multiplier sinh(p z T_p)/sinh(z T_p), T_p = basis vector e{slot}, lift rewritten in the refined basis"
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swseries::{sst_check, twisted_series, VanishingOrder};
    use num_bigint::BigInt;

    type M = FourManifoldModel<BigInt>;
    type C = CohClass<BigInt>;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn f() -> C {
        C::from_i64(&[1])
    }

    #[test]
    fn k3_is_constant_series() {
        let k3: M = elliptic_surface(2, 0).unwrap();
        assert_eq!(k3.basic_classes.len(), 1);
        assert_eq!(k3.basic_classes[&C::from_i64(&[0])], b(1));
        assert_eq!((k3.b1, k3.b2plus, k3.b2minus), (0, 3, 19));
        assert_eq!(k3.c1sq(), 0);
    }

    #[test]
    fn e3_and_e4_expansions() {
        let e3: M = elliptic_surface(3, 0).unwrap();
        assert_eq!(e3.basic_classes[&C::from_i64(&[1])], b(1));
        assert_eq!(e3.basic_classes[&C::from_i64(&[-1])], b(-1));
        let e4: M = elliptic_surface(4, 0).unwrap();
        let s = twisted_series(&e4).unwrap();
        assert_eq!(s.coefficient(&C::from_i64(&[2])), b(1));
        assert_eq!(s.coefficient(&C::from_i64(&[0])), b(-2));
        assert_eq!(s.coefficient(&C::from_i64(&[-2])), b(1));
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(elliptic_surface::<BigInt>(1, 0).is_err());
        assert!(elliptic_surface::<BigInt>(0, 3).is_err());
        assert!(elliptic_surface::<BigInt>(1, 1).is_ok());
    }

    #[test]
    fn blowup_of_k3() {
        let k3: M = elliptic_surface(2, 0).unwrap();
        let x = blowup(&k3).unwrap();
        assert_eq!(x.name, "E(2)#1");
        assert_eq!(x.c1sq(), -1);
        assert_eq!(x.chi_h(), k3.chi_h());
        let s = twisted_series(&x).unwrap();
        assert_eq!(s.coefficient(&C::from_i64(&[0, -1])), b(1));
        assert_eq!(s.coefficient(&C::from_i64(&[0, 1])), b(-1));
        // raw values are the classical SW(+-E) = 1
        assert!(x.basic_classes.values().all(|v| *v == b(1)));
        assert_eq!(blowup(&x).unwrap().name, "E(2)#2");
    }

    #[test]
    fn blowup_raises_order_by_one() {
        for n in 2..7 {
            let e: M = elliptic_surface(n, 0).unwrap();
            let o = twisted_series(&e).unwrap().order().unwrap();
            let bl = blowup(&e).unwrap();
            assert_eq!(twisted_series(&bl).unwrap().order().unwrap(), o + 1);
            assert!(sst_check(&bl).unwrap().is_sst);
        }
    }

    #[test]
    fn fiber_sum_of_two_k3_is_e4() {
        let k3: M = elliptic_surface(2, 0).unwrap();
        let x = fiber_sum(&k3, &f(), &k3, &f(), 0).unwrap();
        let e4: M = elliptic_surface(4, 0).unwrap();
        assert_eq!(x.chi_h(), e4.chi_h());
        assert_eq!(x.c1sq(), 0);
        assert_eq!((x.b2plus, x.b2minus), (e4.b2plus, e4.b2minus));
        let s = twisted_series(&x).unwrap();
        assert_eq!(s.sign_relative_to(&twisted_series(&e4).unwrap()), Some(1));
    }

    #[test]
    fn fiber_sum_rejects_non_null_class() {
        let k3: M = elliptic_surface(2, 0).unwrap();
        let bl = blowup(&k3).unwrap();
        let err = fiber_sum(&bl, &C::from_i64(&[0, 1]), &k3, &f(), 0).unwrap_err();
        assert!(err.to_string().contains("not a null class"));
    }

    #[test]
    fn fiber_sum_with_non_primitive_class_fails_identification() {
        let k3: M = elliptic_surface(2, 0).unwrap();
        let err = fiber_sum(&k3, &f(), &k3, &C::from_i64(&[2]), 0).unwrap_err();
        assert!(err.to_string().contains("identification"));
    }

    #[test]
    fn knot_surgery_examples() {
        let k3: M = elliptic_surface(2, 0).unwrap();
        let same = knot_surgery(&k3, &f(), &[b(1)]).unwrap();
        assert_eq!(same.basic_classes, k3.basic_classes);
        let tre = knot_surgery(&k3, &f(), &[b(1), b(-1), b(1)]).unwrap();
        let s = twisted_series(&tre).unwrap();
        assert_eq!(s.coefficient(&C::from_i64(&[-2])), b(1));
        assert_eq!(s.coefficient(&C::from_i64(&[0])), b(-1));
        assert_eq!(s.coefficient(&C::from_i64(&[2])), b(1));
        assert_eq!(s.order(), Some(0));
        assert!(knot_surgery(&k3, &f(), &[b(1), b(0)]).is_err());
        assert!(knot_surgery(&k3, &f(), &[b(1), b(0), b(2)]).is_err());
        assert!(knot_surgery(&k3, &f(), &[b(1), b(1), b(1)]).is_err());
    }

    #[test]
    fn log_transform_examples() {
        let k3: M = elliptic_surface(2, 0).unwrap();
        assert_eq!(log_transform(&k3, &f(), 1).unwrap(), k3);
        let l2 = log_transform(&k3, &f(), 2).unwrap();
        let s = twisted_series(&l2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coefficient(&C::from_i64(&[1])), b(1));
        assert_eq!(s.coefficient(&C::from_i64(&[-1])), b(1));
        assert!(sst_check(&l2).unwrap().is_sst);
        let l3 = log_transform(&k3, &f(), 3).unwrap();
        assert_eq!(twisted_series(&l3).unwrap().len(), 3);
        assert!(log_transform(&k3, &f(), 0).is_err());
    }

    #[test]
    fn log_transform_keeps_order_on_e5() {
        let e5: M = elliptic_surface(5, 0).unwrap();
        for p in 2..5 {
            let x = log_transform(&e5, &f(), p).unwrap();
            let v = sst_check(&x).unwrap();
            assert!(v.is_sst);
            assert_eq!(v.actual_order, VanishingOrder::Exact(3));
        }
    }
}
