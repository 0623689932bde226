//! Twisted Seiberg-Witten series as elements of the integral group ring of the
//! working lattice, their symmetric moment tensors, and the SST verdict.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{parity_sign, validate_model, CharacteristicLift, CohClass, IntersectionLattice};
use crate::model::FourManifoldModel;
use crate::scalar::{int, Int};

/// Lattices above this rank switch from dense moment tensors to random probes.
pub const DENSE_RANK_LIMIT: usize = 8;
pub const PROBE_COUNT: usize = 50;
const PROBE_SEED: u64 = 0x5357_5f50_524f_4245;

/// `sum_x c_x e^{z x}` with integer coefficients, no zero entries stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwSeries<I> {
    pub lattice: IntersectionLattice<I>,
    terms: BTreeMap<CohClass<I>, I>,
}

impl<I: Int> SwSeries<I> {
    pub fn zero(lattice: IntersectionLattice<I>) -> Self {
        SwSeries {
            lattice,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `e^0`.
    pub fn one(lattice: IntersectionLattice<I>) -> Self {
        let n = lattice.rank();
        Self::from_terms(lattice, [(CohClass::zero(n), I::one())])
    }

    pub fn from_terms(
        lattice: IntersectionLattice<I>,
        terms: impl IntoIterator<Item = (CohClass<I>, I)>,
    ) -> Self {
        let mut s = SwSeries::zero(lattice);
        for (x, c) in terms {
            s.add_term(x, c);
        }
        s
    }

    /// `e^{x} - e^{-x}`, i.e. `2 sinh(z x)`.
    pub fn two_sinh(lattice: IntersectionLattice<I>, x: &CohClass<I>) -> Self {
        Self::from_terms(lattice, [(x.clone(), I::one()), (x.neg(), -I::one())])
    }

    /// `sum_i coeffs[i] e^{(offset + i) step}` for a single direction `step`.
    pub fn along(
        lattice: IntersectionLattice<I>,
        step: &CohClass<I>,
        offset: i64,
        coeffs: &[I],
    ) -> Self {
        Self::from_terms(
            lattice,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (step.scale(&int(offset + i as i64)), c.clone())),
        )
    }

    fn add_term(&mut self, x: CohClass<I>, c: I) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<CohClass<I>, I> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x: &CohClass<I>) -> I {
        self.terms.get(x).cloned().unwrap_or_else(I::zero)
    }

    pub fn negate(&self) -> Self {
        SwSeries {
            lattice: self.lattice.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &I) -> Self {
        Self::from_terms(
            self.lattice.clone(),
            self.terms.iter().map(|(x, c)| (x.clone(), c.clone() * k.clone())),
        )
    }

    /// `Some(+1)` or `Some(-1)` when `self = sign * other` term by term.
    pub fn sign_relative_to(&self, other: &Self) -> Option<i32> {
        if self.lattice != other.lattice {
            return None;
        }
        if *self == *other {
            return Some(1);
        }
        if *self == other.negate() {
            return Some(-1);
        }
        None
    }

    /// Re-expresses every class through `map` (e.g. after a basis change or an
    /// embedding into a larger lattice).
    pub fn map_classes(
        &self,
        lattice: IntersectionLattice<I>,
        map: impl Fn(&CohClass<I>) -> CohClass<I>,
    ) -> Self {
        Self::from_terms(lattice, self.terms.iter().map(|(x, c)| (map(x), c.clone())))
    }

    /// `M_k(v) = sum_x c_x (x.v)^k` with the Euclidean coordinate pairing.
    pub fn probe(&self, v: &[I], k: u32) -> I {
        self.terms.iter().fold(I::zero(), |acc, (x, c)| {
            acc + c.clone() * pow(&x.dot(v), k)
        })
    }

    /// Exact order of vanishing at `z = 0`, `None` for the zero series.
    pub fn order(&self) -> Option<u32> {
        if self.is_empty() {
            return None;
        }
        // a nonzero element with t distinct exponents vanishes to order < t
        let bound = self.len() as u32;
        match vanishing_order(self, bound).0 {
            VanishingOrder::Exact(k) => Some(k),
            _ => unreachable!("nonzero series with {} terms has order below {bound}", self.len()),
        }
    }
}

impl<I: Int> fmt::Display for SwSeries<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (x, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*e^{x}")?;
        }
        Ok(())
    }
}

pub(crate) fn pow<I: Int>(b: &I, k: u32) -> I {
    let mut acc = I::one();
    for _ in 0..k {
        acc = acc * b.clone();
    }
    acc
}

/// Group-ring convolution.
pub fn multiply<I: Int>(a: &SwSeries<I>, b: &SwSeries<I>) -> Result<SwSeries<I>> {
    if a.lattice != b.lattice {
        return Err(Error::LatticeMismatch);
    }
    let mut acc: BTreeMap<CohClass<I>, I> = BTreeMap::new();
    for (x, cx) in &a.terms {
        for (y, cy) in &b.terms {
            let slot = acc.entry(x.add(y)).or_insert_with(I::zero);
            *slot = slot.clone() + cx.clone() * cy.clone();
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(SwSeries {
        lattice: a.lattice.clone(),
        terms: acc,
    })
}

/// Twisted series `sum_x (-1)^((lift^2 + lift.x)/2) SW(x) e^{z x}`.
pub fn twisted_series<I: Int>(m: &FourManifoldModel<I>) -> Result<SwSeries<I>> {
    let rep = validate_model(m, false);
    if !rep.is_ok() {
        return Err(Error::Validation(rep));
    }
    twisted_series_unchecked(m)
}

pub(crate) fn twisted_series_unchecked<I: Int>(m: &FourManifoldModel<I>) -> Result<SwSeries<I>> {
    let mut terms = Vec::with_capacity(m.basic_classes.len());
    for (x, sw) in &m.basic_classes {
        terms.push((x.clone(), m.twisted_coefficient(x, sw)?));
    }
    Ok(SwSeries::from_terms(m.lattice.clone(), terms))
}

/// Inverts the twist: raw SW values of a twisted series under `lift`.
pub fn untwist<I: Int>(
    s: &SwSeries<I>,
    lift: &CharacteristicLift<I>,
) -> Result<BTreeMap<CohClass<I>, I>> {
    let mut raw = BTreeMap::new();
    for (x, c) in s.terms() {
        let sign = crate::lattice::sign_factor(&s.lattice, lift, x)?;
        raw.insert(x.clone(), c.clone() * int::<I>(sign as i64));
    }
    Ok(raw)
}

/// `sum_x c_x x^{(x) k}` stored over sorted multi-indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTensor<I> {
    pub order: usize,
    pub rank: usize,
    pub entries: BTreeMap<Vec<usize>, I>,
}

impl<I: Int> MomentTensor<I> {
    pub fn get(&self, idx: &[usize]) -> I {
        let mut key = idx.to_vec();
        key.sort_unstable();
        self.entries.get(&key).cloned().unwrap_or_else(I::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.is_zero())
    }

    /// Full contraction with `v^{(x) k}`: `sum_idx multinomial(idx) T[idx] prod v`.
    pub fn contract(&self, v: &[I]) -> I {
        let mut acc = I::zero();
        for (idx, t) in &self.entries {
            if t.is_zero() {
                continue;
            }
            let mut term = t.clone() * multinomial::<I>(idx);
            for &i in idx {
                term = term * v[i].clone();
            }
            acc = acc + term;
        }
        acc
    }
}

fn multinomial<I: Int>(idx: &[usize]) -> I {
    // k! / prod(m_i!) for the multiplicities of a sorted index
    let mut out = I::one();
    let mut pos = 0u64;
    let mut i = 0;
    while i < idx.len() {
        let mut run = 0u64;
        let mut j = i;
        while j < idx.len() && idx[j] == idx[i] {
            j += 1;
            run += 1;
            pos += 1;
            // out *= pos / run, kept integral by multiplying first
            out = out * int::<I>(pos as i64) / int::<I>(run as i64);
        }
        i = j;
    }
    out
}

/// Sorted multi-indices of length `k` over `0..n`, lexicographic.
pub fn sorted_multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0usize; k];
    loop {
        out.push(cur.clone());
        // advance
        let mut p = k;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if cur[p] + 1 < n {
                let v = cur[p] + 1;
                for q in p..k {
                    cur[q] = v;
                }
                break;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VanishingOrder {
    Exact(u32),
    /// All moments up to the requested `kmax` vanish.
    AtLeast(u32),
    /// Zero series.
    Infinite,
}

impl VanishingOrder {
    /// Whether the order is known to be at least `k`.
    pub fn at_least(&self, k: i64) -> bool {
        match *self {
            VanishingOrder::Exact(o) | VanishingOrder::AtLeast(o) => o as i64 >= k,
            VanishingOrder::Infinite => true,
        }
    }

    pub fn exact(&self) -> Option<u32> {
        match *self {
            VanishingOrder::Exact(o) => Some(o),
            _ => None,
        }
    }
}

impl fmt::Display for VanishingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingOrder::Exact(o) => write!(f, "{o}"),
            VanishingOrder::AtLeast(o) => write!(f, ">={o}"),
            VanishingOrder::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Moments<I> {
    pub kmax: u32,
    /// Dense tensors `M_0..M_kmax`; empty when `probabilistic`.
    pub tensors: Vec<MomentTensor<I>>,
    /// `vanishes[k]` is true when `M_k = 0`.
    pub vanishes: Vec<bool>,
    pub order: VanishingOrder,
    pub probabilistic: bool,
}

fn probes<I: Int>(rank: usize) -> Vec<Vec<I>> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    (0..PROBE_COUNT)
        .map(|_| (0..rank).map(|_| int(rng.gen_range(-1000..=1000))).collect())
        .collect()
}

/// Moment tensors up to `kmax` and the order of vanishing at `z = 0`.
pub fn moments_and_order<I: Int>(s: &SwSeries<I>, kmax: u32) -> Moments<I> {
    let n = s.lattice.rank();
    let probabilistic = n > DENSE_RANK_LIMIT;
    let mut tensors = Vec::new();
    let mut vanishes = Vec::new();
    let probe_vecs = if probabilistic { probes::<I>(n) } else { Vec::new() };
    for k in 0..=kmax {
        if probabilistic {
            vanishes.push(probe_vecs.iter().all(|v| s.probe(v, k).is_zero()));
        } else {
            let t = moment_tensor(s, k as usize);
            vanishes.push(t.is_zero());
            tensors.push(t);
        }
    }
    let order = match vanishes.iter().position(|z| !z) {
        Some(k) => VanishingOrder::Exact(k as u32),
        None => VanishingOrder::AtLeast(kmax + 1),
    };
    Moments {
        kmax,
        tensors,
        vanishes,
        order,
        probabilistic,
    }
}

/// Depth-first walk over sorted multi-indices of length `k`, carrying the
/// per-class partial products `c_x x_{i_1} ... x_{i_d}`; `visit` receives each
/// complete entry and returns `false` to stop.
fn walk_entries<T>(
    coords: &[Vec<T>],
    coeffs: &[T],
    n: usize,
    k: usize,
    visit: &mut dyn FnMut(&[usize], T) -> bool,
) where
    T: Clone + num_traits::Num,
{
    fn rec<T: Clone + num_traits::Num>(
        coords: &[Vec<T>],
        partial: &[T],
        start: usize,
        n: usize,
        k: usize,
        idx: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], T) -> bool,
    ) -> bool {
        if idx.len() == k {
            let sum = partial.iter().cloned().fold(T::zero(), |a, b| a + b);
            return visit(idx, sum);
        }
        for i in start..n {
            let next: Vec<T> = partial
                .iter()
                .zip(coords)
                .map(|(p, x)| if p.is_zero() { T::zero() } else { p.clone() * x[i].clone() })
                .collect();
            idx.push(i);
            let go = rec(coords, &next, i, n, k, idx, visit);
            idx.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if n == 0 && k > 0 {
        return;
    }
    rec(coords, coeffs, 0, n, k, &mut Vec::with_capacity(k), visit);
}

/// Machine-word copy of the series when every moment entry up to order `k`
/// provably fits in `i128`.
fn small_form<I: Int>(s: &SwSeries<I>, k: usize) -> Option<(Vec<Vec<i128>>, Vec<i128>)> {
    let mut coords = Vec::with_capacity(s.len());
    let mut coeffs = Vec::with_capacity(s.len());
    let mut max_x = 1.0f64;
    let mut sum_c = 0.0f64;
    for (x, c) in s.terms() {
        let row = x.0.iter().map(|v| v.to_i64().map(i128::from)).collect::<Option<Vec<_>>>()?;
        max_x = row.iter().fold(max_x, |m, v| m.max(v.unsigned_abs() as f64));
        let c = c.to_i64()? as i128;
        sum_c += c.unsigned_abs() as f64;
        coords.push(row);
        coeffs.push(c);
    }
    // every partial product and the final sum stay below sum|c| * max|x|^k
    if sum_c.log2() + k as f64 * max_x.log2() > 120.0 {
        return None;
    }
    Some((coords, coeffs))
}

fn for_each_entry<I: Int>(s: &SwSeries<I>, k: usize, visit: &mut dyn FnMut(&[usize], I) -> bool) {
    let n = s.lattice.rank();
    match small_form(s, k) {
        Some((coords, coeffs)) => walk_entries(&coords, &coeffs, n, k, &mut |idx, v| {
            visit(idx, I::from_i128(v).expect("i128 fits the integer type"))
        }),
        None => {
            let coords: Vec<Vec<I>> = s.terms().keys().map(|x| x.0.clone()).collect();
            let coeffs: Vec<I> = s.terms().values().cloned().collect();
            walk_entries(&coords, &coeffs, n, k, visit)
        }
    }
}

pub fn moment_tensor<I: Int>(s: &SwSeries<I>, k: usize) -> MomentTensor<I> {
    let mut entries = BTreeMap::new();
    for_each_entry(s, k, &mut |idx, v| {
        entries.insert(idx.to_vec(), v);
        true
    });
    MomentTensor {
        order: k,
        rank: s.lattice.rank(),
        entries,
    }
}

/// `M_k = 0`, stopping at the first nonzero entry.
pub fn moment_vanishes<I: Int>(s: &SwSeries<I>, k: usize) -> bool {
    let mut zero = true;
    for_each_entry(s, k, &mut |_, v| {
        zero = v.is_zero();
        zero
    });
    zero
}

/// Order of vanishing, examining moments only up to the first nonzero one
/// (and at most `kmax`). Rank above the dense limit uses random probes.
pub fn vanishing_order<I: Int>(s: &SwSeries<I>, kmax: u32) -> (VanishingOrder, bool) {
    if s.is_empty() {
        return (VanishingOrder::Infinite, false);
    }
    let probabilistic = s.lattice.rank() > DENSE_RANK_LIMIT;
    let probe_vecs = if probabilistic { probes::<I>(s.lattice.rank()) } else { Vec::new() };
    for k in 0..=kmax {
        let zero = if probabilistic {
            probe_vecs.iter().all(|v| s.probe(v, k).is_zero())
        } else {
            moment_vanishes(s, k as usize)
        };
        if !zero {
            return (VanishingOrder::Exact(k), probabilistic);
        }
    }
    (VanishingOrder::AtLeast(kmax + 1), probabilistic)
}

/// `max(0, chi_h - c1^2 - 4) + 2`.
pub fn default_kmax<I: Int>(m: &FourManifoldModel<I>) -> u32 {
    let gap = (m.chi_h() - m.c1sq()).floor().to_integer() - 4;
    (gap.max(0) + 2) as u32
}

/// `chi_h - c1^2 - 3`, floored when `chi_h` is fractional.
pub fn required_order<I: Int>(m: &FourManifoldModel<I>) -> i64 {
    (m.chi_h() - m.c1sq() - 3).floor().to_integer()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SstVerdict {
    pub is_sst: bool,
    pub required_order: i64,
    pub actual_order: VanishingOrder,
    /// `actual - required` when the actual order is exact.
    pub margin: Option<i64>,
    pub probabilistic: bool,
}

pub fn sst_check<I: Int>(m: &FourManifoldModel<I>) -> Result<SstVerdict> {
    let series = twisted_series(m)?;
    let required = required_order(m);
    let (actual, probabilistic) = vanishing_order(&series, default_kmax(m));
    let is_sst = required <= 0 || actual.at_least(required);
    Ok(SstVerdict {
        is_sst,
        required_order: required,
        actual_order: actual,
        margin: actual.exact().map(|a| a as i64 - required),
        probabilistic,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub chi_h_plus_sigma: i64,
    pub kmax: u32,
    pub class_violations: Vec<String>,
    /// Orders `k` whose moment should vanish by parity but does not.
    pub moment_violations: Vec<u32>,
}

impl InvolutionReport {
    pub fn is_ok(&self) -> bool {
        self.class_violations.is_empty() && self.moment_violations.is_empty()
    }
}

/// Checks `c(-x) = (-1)^(chi_h + sigma) c(x)` and the parity vanishing of moments.
pub fn involution_and_parity_check<I: Int>(m: &FourManifoldModel<I>) -> Result<InvolutionReport> {
    let chi = m.chi_h();
    if !chi.is_integer() {
        return Err(Error::Input(format!(
            "chi_h = {chi} is not an integer; the involution sign is undefined"
        )));
    }
    let parity = chi.to_integer() + m.signature();
    let eps: I = int(parity_sign(&parity) as i64);
    let series = twisted_series_unchecked(m)?;
    let mut class_violations = Vec::new();
    for (x, c) in series.terms() {
        let cm = series.coefficient(&x.neg());
        if cm != c.clone() * eps.clone() {
            class_violations.push(format!(
                "x = {x}: c(x) = {c}, c(-x) = {cm}, expected {}",
                c.clone() * eps.clone()
            ));
        }
    }
    let kmax = default_kmax(m).max(3);
    let mo = moments_and_order(&series, kmax);
    let odd = parity.rem_euclid(2) == 1;
    let moment_violations = (0..=kmax)
        .filter(|&k| (k % 2 == 1) != odd)
        .filter(|&k| !mo.vanishes[k as usize])
        .collect();
    Ok(InvolutionReport {
        chi_h_plus_sigma: parity,
        kmax,
        class_violations,
        moment_violations,
    })
}

/// Sign picked up by the twisted series when the lift moves to `lift + 2h`.
/// Rebuilds the series under the new lift and checks the global sign law.
pub fn relift_sign<I: Int>(m: &FourManifoldModel<I>, h: &CohClass<I>) -> Result<i32> {
    let hh = m.lattice.square(h)?;
    let sign = parity_sign(&hh);
    let moved = CharacteristicLift::new(
        &m.lattice,
        m.lift.upsilon.add(&h.scale(&int(2))),
    )?;
    let before = twisted_series_unchecked(m)?;
    let mut other = m.clone();
    other.lift = moved;
    let after = twisted_series_unchecked(&other)?;
    let expected = if sign == 1 { before } else { before.negate() };
    if after != expected {
        return Err(Error::Consistency(format!(
            "relift by h = {h} does not act as the global sign (-1)^(h^2) = {sign}"
        )));
    }
    Ok(sign)
}
