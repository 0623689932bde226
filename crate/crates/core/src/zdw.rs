//! Donaldson-Witten partition function as a sum over the three singular fibers
//! of the `N_f = 1` curve, and its Laurent expansion around `m = 3/2`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::{Complex, Complex64};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::validate_model;
use crate::model::FourManifoldModel;
use crate::scalar::{c_ratio, cabs, cexp, cpowi, from_c64, int_to_real, Int, Real};
use crate::swcurve::{discriminant_roots_at_z, fiber_sample, track_path, FiberSample};
use crate::swseries::sst_check;

pub const DEFAULT_RADIUS: f64 = 1e-2;
pub const DEFAULT_SAMPLES: usize = 512;
pub const DEFAULT_NMAX: usize = 8;
/// `|c_k| > SIGNIFICANCE * max |c_j|` is needed for a coefficient to count.
pub const SIGNIFICANCE: f64 = 1e-7;
/// Cross-radius relative deviation tolerated for a significant coefficient.
pub const STABILITY: f64 = 1e-4;
/// Relative rounding level used to estimate the per-coefficient noise floor.
pub const NOISE_EPS: f64 = 64.0 * f64::EPSILON;

#[derive(Clone, Debug)]
pub struct ZdwInput<I> {
    pub model: FourManifoldModel<I>,
    /// Coefficient of the degree-4 observable.
    pub p: Complex64,
    /// Degree-2 observable in lattice coordinates.
    pub s: Vec<Complex64>,
    pub normalization_k: Complex64,
}

impl<I: Int> ZdwInput<I> {
    pub fn new(model: FourManifoldModel<I>, p: Complex64, s: Vec<Complex64>) -> Self {
        ZdwInput {
            model,
            p,
            s,
            normalization_k: Complex64::new(1.0, 0.0),
        }
    }

    /// `p = S = 0`.
    pub fn bare(model: FourManifoldModel<I>) -> Self {
        let r = model.rank();
        Self::new(model, Complex64::zero(), vec![Complex64::zero(); r])
    }
}

/// Input reduced to the numbers the fiber sum needs.
#[derive(Clone, Debug)]
pub struct Prepared<R> {
    pub k: Complex<R>,
    pub p: Complex<R>,
    /// `S^2`
    pub s2: Complex<R>,
    /// `(c_x, (S, x))` for every basic class.
    pub terms: Vec<(R, Complex<R>)>,
    pub chi_h: i64,
    pub c1sq: i64,
    /// `7 chi_h - c1^2`
    pub period_power: i64,
}

pub fn prepare<I: Int, R: Real>(input: &ZdwInput<I>) -> Result<Prepared<R>> {
    let m = &input.model;
    let report = validate_model(m, false);
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    if input.s.len() != m.rank() {
        return Err(Error::DimensionMismatch {
            expected: m.rank(),
            got: input.s.len(),
        });
    }
    let chi = m.chi_h();
    if !chi.is_integer() {
        return Err(Error::Consistency(format!("chi_h = {chi} is not an integer")));
    }
    let s: Vec<Complex<R>> = input.s.iter().map(|&v| from_c64(v)).collect();
    let g = m.lattice.gram();
    let r = m.rank();
    let gs: Vec<Complex<R>> = (0..r)
        .map(|i| {
            (0..r).fold(Complex::zero(), |acc, j| {
                acc + s[j] * Complex::new(int_to_real::<I, R>(&g[i][j]), R::zero())
            })
        })
        .collect();
    let s2 = (0..r).fold(Complex::zero(), |acc, i| acc + s[i] * gs[i]);
    let mut terms = Vec::with_capacity(m.basic_classes.len());
    for (x, sw) in &m.basic_classes {
        let cx = m.twisted_coefficient(x, sw)?;
        let sx = x
            .coords()
            .iter()
            .zip(&gs)
            .fold(Complex::zero(), |acc, (xi, gsi)| {
                acc + *gsi * Complex::new(int_to_real::<I, R>(xi), R::zero())
            });
        terms.push((int_to_real::<I, R>(&cx), sx));
    }
    let chi_h = chi.to_integer();
    Ok(Prepared {
        k: from_c64(input.normalization_k),
        p: from_c64(input.p),
        s2,
        terms,
        chi_h,
        c1sq: m.c1sq(),
        period_power: 7 * chi_h - m.c1sq(),
    })
}

/// One fiber's term with an explicit choice of `varpi`.
pub fn fiber_term<R: Real>(
    prep: &Prepared<R>,
    fiber: &FiberSample<R>,
    varpi: Complex<R>,
) -> Result<Complex<R>> {
    let d = &fiber.data;
    let t = d
        .t
        .ok_or_else(|| Error::SingularInput(format!("T undefined at u = {:?}", d.u)))?;
    if d.delta_prime.is_zero() || varpi.is_zero() {
        return Err(Error::SingularInput(format!(
            "degenerate fiber at u = {:?}",
            d.u
        )));
    }
    let measure = cpowi(d.g2 * d.g2 * d.g2 / d.delta_prime, prep.chi_h);
    let period = cpowi(varpi, prep.period_power);
    let two = c_ratio::<R>(2, 1);
    let base = two * prep.p * d.u + prep.s2 * t;
    let i = Complex::new(R::zero(), R::one());
    let inv = -(i / (two * varpi));
    let mut sum = Complex::zero();
    for (cx, sx) in &prep.terms {
        sum = sum + cexp(base + *sx * inv) * Complex::new(*cx, R::zero());
    }
    Ok(prep.k * measure * period * sum)
}

fn fibers_at<R: Real>(m: Complex<R>) -> Result<(Complex<R>, [FiberSample<R>; 3])> {
    let z = m - c_ratio::<R>(3, 2);
    if z.is_zero() {
        return Err(Error::SingularInput(
            "m = 3/2 is the superconformal point".into(),
        ));
    }
    let set = discriminant_roots_at_z(z);
    for i in 0..3 {
        for j in i + 1..3 {
            if set.roots[i].w == set.roots[j].w {
                return Err(Error::SingularInput(format!(
                    "discriminant roots collide at m = {:?}",
                    m
                )));
            }
        }
    }
    Ok((z, set.roots.clone().map(|r| fiber_sample(&z, &r.w))))
}

/// Individual fiber terms at `m`, principal `varpi`, in root order.
pub fn fiber_contributions<I: Int, R: Real>(
    input: &ZdwInput<I>,
    m: Complex<R>,
) -> Result<[Complex<R>; 3]> {
    let prep = prepare::<I, R>(input)?;
    let (_, fibers) = fibers_at(m)?;
    let mut out = [Complex::zero(); 3];
    for (o, f) in out.iter_mut().zip(&fibers) {
        let v = f
            .varpi
            .ok_or_else(|| Error::SingularInput("period undefined".into()))?;
        *o = fiber_term(&prep, f, v)?;
    }
    Ok(out)
}

/// `Z_DW(m)` with principal `varpi` at every fiber.
pub fn zdw_eval<I: Int, R: Real>(input: &ZdwInput<I>, m: Complex<R>) -> Result<Complex<R>> {
    Ok(fiber_contributions(input, m)?
        .into_iter()
        .fold(Complex::zero(), |a, b| a + b))
}

/// Which continuous `varpi` assignment was used on a contour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Principal roots at the starting point, continued.
    Principal,
    /// The negatives of those.
    Flipped,
}

#[derive(Clone, Debug)]
struct ContourSamples {
    values: Vec<Complex64>,
    /// `sum_j |fiber term_j|` per sample, the rounding scale of each value.
    scales: Vec<f64>,
}

/// `Z` along `z = radius * e^{i theta}` for `theta = 2 pi j / samples`,
/// `j = 0..=samples*turns`. The endpoint is included.
fn contour(
    prep: &Prepared<f64>,
    radius: f64,
    samples: usize,
    turns: usize,
    branch: Branch,
    z_of: impl Fn(f64) -> Complex64,
) -> Result<ContourSamples> {
    let n = samples * turns;
    let path: Vec<(f64, Complex64)> = (0..=n)
        .map(|j| {
            let th = TAU * j as f64 / samples as f64;
            (th, z_of(th) * radius)
        })
        .collect();
    let tracked = track_path::<f64>(&path)?;
    let sign = if branch == Branch::Flipped { -1.0 } else { 1.0 };
    let mut values = Vec::with_capacity(tracked.len());
    let mut scales = Vec::with_capacity(tracked.len());
    for pt in &tracked {
        let mut v = Complex64::zero();
        let mut s = 0.0;
        for f in &pt.fibers {
            let w = f.varpi.ok_or_else(|| Error::Contour {
                theta: pt.param,
                reason: "period undefined on contour".into(),
            })?;
            let t = fiber_term(prep, f, w * sign).map_err(|e| Error::Contour {
                theta: pt.param,
                reason: e.to_string(),
            })?;
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Contour {
                    theta: pt.param,
                    reason: "non-finite fiber term".into(),
                });
            }
            v += t;
            s += t.norm();
        }
        values.push(v);
        scales.push(s);
    }
    Ok(ContourSamples { values, scales })
}

/// `c_k = (1/N) sum_j f_j rho^{-k} e^{-i k theta_j}` for `k` in `-kmax..=kmax`.
fn dft(values: &[Complex64], rho: f64, kmax: i64) -> BTreeMap<i64, Complex64> {
    let n = values.len();
    (-kmax..=kmax)
        .map(|k| {
            let mut acc = Complex64::zero();
            for (j, v) in values.iter().enumerate() {
                let th = TAU * j as f64 / n as f64;
                acc += v * Complex64::from_polar(1.0, -(k as f64) * th);
            }
            (k, acc / n as f64 * rho.powi(-(k as i32)))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Coefficient {
    pub k: i64,
    pub value: Complex64,
    /// Same coefficient from the second contour.
    pub second: Complex64,
    /// `|c_k(r) - c_k(r/2)| / |c_k(r)|`.
    pub stability: f64,
    /// Rounding noise estimate at each radius.
    pub noise: (f64, f64),
}

impl Coefficient {
    /// Rounding noise is below the stability tolerance on both contours, so
    /// the coefficient is measurable at all.
    pub fn resolved(&self) -> bool {
        self.noise.0 < STABILITY * self.value.norm() && self.noise.1 < STABILITY * self.second.norm()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LaurentSpectrum {
    pub center: f64,
    pub radius: f64,
    pub second_radius: f64,
    pub samples: usize,
    pub nmax: usize,
    pub branch: Branch,
    pub coefficients: Vec<Coefficient>,
    /// `max_j |Z_j - sum_k c_k z_j^k| / max_j |Z_j|` on the first contour.
    pub inverse_residual: f64,
    /// `|Z(2 pi) - Z(0)| / |Z(0)|` on the first contour.
    pub single_valuedness: f64,
    /// Largest odd coefficient of the `z = w^2` transform relative to the
    /// largest one, both taken among coefficients above their noise floor.
    pub half_integer_ratio: f64,
}

impl LaurentSpectrum {
    /// Largest resolved coefficient; unresolved ones are rounding noise.
    pub fn max_abs(&self) -> f64 {
        self.max_abs_at(false)
    }

    fn max_abs_at(&self, second: bool) -> f64 {
        self.coefficients
            .iter()
            .filter(|c| c.resolved())
            .map(|c| if second { c.second.norm() } else { c.value.norm() })
            .fold(0.0, f64::max)
    }

    pub fn coefficient(&self, k: i64) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.k == k)
    }

    /// Above the relative threshold at both radii.
    pub fn above_threshold(&self, c: &Coefficient) -> bool {
        c.value.norm() > SIGNIFICANCE * self.max_abs_at(false)
            && c.second.norm() > SIGNIFICANCE * self.max_abs_at(true)
    }

    /// Above threshold, clear of rounding noise, and stable across radii.
    pub fn is_significant(&self, c: &Coefficient) -> bool {
        self.above_threshold(c) && c.resolved() && c.stability < STABILITY
    }

    /// Coefficients that pass the threshold and the noise floor but disagree
    /// between the two contours.
    pub fn unstable(&self) -> Vec<i64> {
        self.coefficients
            .iter()
            .filter(|c| self.above_threshold(c) && c.resolved() && c.stability >= STABILITY)
            .map(|c| c.k)
            .collect()
    }

    /// Plain-text table `k, Re, Im, |c|, stability`.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "# branch {:?}, radius {:e} / {:e}, samples {}\n{:>4} {:>24} {:>24} {:>12} {:>10}\n",
            self.branch, self.radius, self.second_radius, self.samples, "k", "re", "im", "abs", "stability"
        );
        for c in &self.coefficients {
            s.push_str(&format!(
                "{:>4} {:>24.15e} {:>24.15e} {:>12.4e} {:>10.2e}{}\n",
                c.k,
                c.value.re,
                c.value.im,
                c.value.norm(),
                c.stability,
                if self.is_significant(c) { " *" } else { "" }
            ));
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("branch,k,re,im,abs,stability,significant\n");
        for c in &self.coefficients {
            s.push_str(&format!(
                "{:?},{},{:e},{:e},{:e},{:e},{}\n",
                self.branch,
                c.k,
                c.value.re,
                c.value.im,
                c.value.norm(),
                c.stability,
                self.is_significant(c)
            ));
        }
        s
    }
}

/// Spectra for every `varpi` assignment that needs checking.
#[derive(Clone, Debug, Serialize)]
pub struct LaurentReport {
    pub branches: Vec<LaurentSpectrum>,
}

/// Laurent coefficients of `Z_DW` in `z = m - 3/2` by discrete contour
/// integration at `radius` and `radius/2`. Both `varpi` assignments are run
/// when `7 chi_h - c1^2` is odd.
pub fn laurent_spectrum<I: Int>(
    input: &ZdwInput<I>,
    radius: f64,
    samples: usize,
    nmax: usize,
) -> Result<LaurentReport> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Input(format!("radius {radius} outside (0, 1)")));
    }
    if nmax == 0 || !samples.is_power_of_two() || samples < 8 * nmax {
        return Err(Error::Input(format!(
            "samples must be a power of two >= 8*nmax (samples = {samples}, nmax = {nmax})"
        )));
    }
    let prep = prepare::<I, f64>(input)?;
    let mut branches = vec![Branch::Principal];
    if prep.period_power.rem_euclid(2) == 1 {
        branches.push(Branch::Flipped);
    }
    let out = branches
        .into_iter()
        .map(|b| spectrum_for(&prep, radius, samples, nmax, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentReport { branches: out })
}

fn circle(th: f64) -> Complex64 {
    Complex64::from_polar(1.0, th)
}

fn spectrum_for(
    prep: &Prepared<f64>,
    radius: f64,
    samples: usize,
    nmax: usize,
    branch: Branch,
) -> Result<LaurentSpectrum> {
    let kmax = nmax as i64;
    let second_radius = radius / 2.0;
    let a = contour(prep, radius, samples, 1, branch, circle)?;
    let b = contour(prep, second_radius, samples, 1, branch, circle)?;
    let ca = dft(&a.values[..samples], radius, kmax);
    let cb = dft(&b.values[..samples], second_radius, kmax);
    let scale_a = a.scales.iter().cloned().fold(0.0, f64::max);
    let scale_b = b.scales.iter().cloned().fold(0.0, f64::max);
    let coefficients: Vec<Coefficient> = ca
        .iter()
        .map(|(&k, &v)| {
            let w = cb[&k];
            let stability = if v.norm() > 0.0 {
                (v - w).norm() / v.norm()
            } else if w.norm() > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            Coefficient {
                k,
                value: v,
                second: w,
                stability,
                noise: (
                    NOISE_EPS * scale_a * radius.powi(-(k as i32)),
                    NOISE_EPS * scale_b * second_radius.powi(-(k as i32)),
                ),
            }
        })
        .collect();

    let zmax = a.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut resid: f64 = 0.0;
    for (j, v) in a.values[..samples].iter().enumerate() {
        let th = TAU * j as f64 / samples as f64;
        let rec: Complex64 = coefficients
            .iter()
            .map(|c| c.value * Complex64::from_polar(radius.powi(c.k as i32), c.k as f64 * th))
            .sum();
        resid = resid.max((v - rec).norm());
    }
    let inverse_residual = if zmax > 0.0 { resid / zmax } else { 0.0 };
    let z0 = a.values[0];
    let z1 = a.values[samples];
    let single_valuedness = if z0.norm() > 0.0 {
        (z1 - z0).norm() / z0.norm()
    } else {
        z1.norm()
    };

    // z = w^2 with |w| = sqrt(radius): one turn in w is two turns in z
    let rho = radius.sqrt();
    let refined = contour(prep, 1.0, samples, 1, branch, |phi| {
        Complex64::from_polar(rho * rho, 2.0 * phi)
    })?;
    let scale_r = refined.scales.iter().cloned().fold(0.0, f64::max);
    let half_integer_ratio = odd_power_ratio(&refined.values[..samples], rho, 2 * kmax, scale_r);

    Ok(LaurentSpectrum {
        center: 1.5,
        radius,
        second_radius,
        samples,
        nmax,
        branch,
        coefficients,
        inverse_residual,
        single_valuedness,
        half_integer_ratio,
    })
}

/// For samples of `f(w)` on `|w| = rho`, the largest odd-power coefficient
/// over the largest coefficient, ignoring those below the rounding floor
/// `NOISE_EPS * scale * rho^-j`.
pub fn odd_power_ratio(values: &[Complex64], rho: f64, jmax: i64, scale: f64) -> f64 {
    let d = dft(values, rho, jmax);
    let above_noise = |j: i64, v: &Complex64| v.norm() > NOISE_EPS * scale * rho.powi(-(j as i32));
    let dmax = d
        .iter()
        .filter(|(j, v)| above_noise(**j, v))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let odd = d
        .iter()
        .filter(|(j, v)| j.rem_euclid(2) == 1 && above_noise(**j, v))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    if dmax > 0.0 {
        odd / dmax
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    Conclusive,
    /// Some negative-power coefficient is above threshold but unstable.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityVerdict {
    pub branch: Branch,
    pub status: VerdictStatus,
    /// Lowest significant power of `z`; `None` when nothing is significant.
    pub leading_power: Option<i64>,
    /// `max(0, -leading_power)`.
    pub pole_order_detected: u32,
    /// `max(0, floor((chi_h - c1^2)/4))`.
    pub pole_bound: u32,
    /// `pole_order_detected = 0`; `None` when the model is not SST.
    pub consistent_with_sst: Option<bool>,
    /// `-leading_power <= (chi_h - c1^2)/4`.
    pub consistent_with_bound: bool,
}

pub fn regularity_verdict<I: Int>(
    spec: &LaurentSpectrum,
    model: &FourManifoldModel<I>,
) -> Result<RegularityVerdict> {
    let status = if spec.unstable().iter().any(|&k| k < 0) {
        VerdictStatus::Inconclusive
    } else {
        VerdictStatus::Conclusive
    };
    let leading_power = spec
        .coefficients
        .iter()
        .filter(|c| spec.is_significant(c))
        .map(|c| c.k)
        .min();
    let pole_order_detected = leading_power.map_or(0, |k| (-k).max(0) as u32);
    let gap = (model.chi_h() - model.c1sq()).to_integer_floor_div4();
    let room = model.chi_h() - model.c1sq();
    let consistent_with_bound = match leading_power {
        None => true,
        Some(k) => num_rational::Ratio::from_integer(-k) * 4 <= room,
    };
    let consistent_with_sst = if sst_check(model)?.is_sst {
        Some(pole_order_detected == 0)
    } else {
        None
    };
    Ok(RegularityVerdict {
        branch: spec.branch,
        status,
        leading_power,
        pole_order_detected,
        pole_bound: gap.max(0) as u32,
        consistent_with_sst,
        consistent_with_bound,
    })
}

trait FloorDiv4 {
    fn to_integer_floor_div4(&self) -> i64;
}

impl FloorDiv4 for num_rational::Ratio<i64> {
    fn to_integer_floor_div4(&self) -> i64 {
        (*self / 4).floor().to_integer()
    }
}

/// `|zdw_eval::<f64> - zdw_eval::<DoubleF64>| / |zdw_eval::<DoubleF64>|`.
pub fn oracle_deviation<I: Int>(input: &ZdwInput<I>, m: Complex64) -> Result<f64> {
    use crate::scalar::{to_c64, DoubleF64};
    let a = zdw_eval::<I, f64>(input, m)?;
    let hi = zdw_eval::<I, DoubleF64>(input, from_c64(m))?;
    let diff = Complex::new(
        DoubleF64::from_f64(a.re) - hi.re,
        DoubleF64::from_f64(a.im) - hi.im,
    );
    let den = cabs(hi);
    if den.is_zero() {
        return Ok(to_c64(diff).norm());
    }
    Ok((cabs(diff) / den).to_f64_lossy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::lattice::{CharacteristicLift, CohClass, IntersectionLattice};
    use crate::scalar::DoubleF64;
    use num_bigint::BigInt;

    fn input(name: &str, p: f64, s: f64) -> ZdwInput<BigInt> {
        let m = catalog::<BigInt>(name).unwrap();
        let r = m.rank();
        let mut sv = vec![Complex64::zero(); r];
        sv[0] = Complex64::new(s, 0.0);
        ZdwInput::new(m, Complex64::new(p, 0.0), sv)
    }

    fn spectrum(inp: &ZdwInput<BigInt>) -> LaurentReport {
        laurent_spectrum(inp, DEFAULT_RADIUS, DEFAULT_SAMPLES, DEFAULT_NMAX).unwrap()
    }

    #[test]
    fn linear_in_normalization() {
        let mut inp = input("K3", 0.1, 0.3);
        let m = Complex64::new(1.52, 0.01);
        let a = zdw_eval::<BigInt, f64>(&inp, m).unwrap();
        inp.normalization_k = Complex64::new(2.0, 0.0);
        let b = zdw_eval::<BigInt, f64>(&inp, m).unwrap();
        assert_eq!(b, a * 2.0);
    }

    #[test]
    fn cusp_is_rejected() {
        let inp = input("K3", 0.0, 0.0);
        let r = zdw_eval::<BigInt, f64>(&inp, Complex64::new(1.5, 0.0));
        assert!(matches!(r, Err(Error::SingularInput(_))));
    }

    #[test]
    fn wrong_observable_length() {
        let mut inp = input("K3", 0.0, 0.0);
        inp.s.push(Complex64::zero());
        assert!(matches!(
            zdw_eval::<BigInt, f64>(&inp, Complex64::new(1.6, 0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matches_double_double() {
        let inp = input("K3", 0.0, 0.0);
        assert!(oracle_deviation(&inp, Complex64::new(1.51, 0.0)).unwrap() < 1e-10);
        let inp = input("Y(5)", 0.1, 0.3);
        assert!(oracle_deviation(&inp, Complex64::new(1.5, 0.03)).unwrap() < 1e-10);
        let hi = zdw_eval::<BigInt, DoubleF64>(&inp, from_c64(Complex64::new(1.5, 0.03))).unwrap();
        assert!(hi.re.is_finite_value());
    }

    #[test]
    fn spectator_term_tends_to_exact_limit() {
        // spectator: (g2^3/D')^chi varpi^(7 chi - c1^2) with g2 = 27/4, D' = -2916, varpi^2 = 1/18
        let inp = input("K3", 0.0, 0.0);
        let m = Complex64::new(1.5 + 1e-7, 0.0);
        let terms = fiber_contributions::<BigInt, f64>(&inp, m).unwrap();
        let set = discriminant_roots_at_z(m - 1.5);
        let PairingTagCusp(sp) = spectator_index(&set);
        let g2c: f64 = 27.0 / 4.0;
        let want = (g2c.powi(3) / -2916.0).powi(2) * (1.0f64 / 18.0).powi(7);
        assert!((terms[sp].re - want).abs() < 1e-5 * want.abs(), "{} vs {want}", terms[sp]);
    }

    struct PairingTagCusp(usize);

    fn spectator_index(set: &crate::swcurve::FiberSet<f64>) -> PairingTagCusp {
        match set.pairing_tag {
            crate::swcurve::PairingTag::Cusp { spectator, .. } => PairingTagCusp(spectator),
            t => panic!("{t:?}"),
        }
    }

    #[test]
    fn k3_is_regular() {
        for (p, s) in [(0.0, 0.0), (0.1, 0.3)] {
            let inp = input("K3", p, s);
            let rep = spectrum(&inp);
            assert_eq!(rep.branches.len(), 1);
            let sp = &rep.branches[0];
            let v = regularity_verdict(sp, &inp.model).unwrap();
            assert_eq!(v.status, VerdictStatus::Conclusive);
            assert_eq!((v.pole_order_detected, v.pole_bound), (0, 0));
            assert_eq!(v.consistent_with_sst, Some(true));
            assert!(v.consistent_with_bound);
            assert!(sp.single_valuedness < 1e-9);
            assert!(sp.inverse_residual < 1e-10);
        }
    }

    #[test]
    fn non_sst_pole_matches_leading_order() {
        let inp = input("synthetic-nonSST(8)", 0.0, 0.0);
        let rep = spectrum(&inp);
        let sp = &rep.branches[0];
        let v = regularity_verdict(sp, &inp.model).unwrap();
        assert_eq!(v.pole_order_detected, 2);
        assert_eq!(v.pole_bound, 2);
        assert!(v.consistent_with_bound);
        assert_eq!(v.consistent_with_sst, None);
        // both colliding fibers give 2^-1 * (16/27)^8 / (18^28 (32/27)^18) z^-2
        let want = 2.0 * (16.0f64 / 27.0).powi(8) / (18f64.powi(28) * (32.0f64 / 27.0).powi(18));
        let got = sp.coefficient(-2).unwrap().value;
        assert!((got.re - want).abs() < 1e-10 * want, "{got} vs {want:e}");
        assert!(got.im.abs() < 1e-10 * want);
    }

    #[test]
    fn cancelling_classes_lower_the_pole() {
        // chi_h = 8, c1^2 = 0 on a hyperbolic plane with classes x, 0, -x
        let base = catalog::<BigInt>("synthetic-nonSST(8)").unwrap();
        let lattice = IntersectionLattice::<BigInt>::new(vec![
            vec![0.into(), 1.into()],
            vec![1.into(), 0.into()],
        ])
        .unwrap();
        let x = CohClass::<BigInt>::from_i64(&[1, 0]);
        let mut classes = std::collections::BTreeMap::new();
        classes.insert(x.clone(), BigInt::from(1));
        classes.insert(CohClass::zero(2), BigInt::from(-2));
        classes.insert(x.neg(), BigInt::from(1));
        let paired = FourManifoldModel {
            name: "cancelling".into(),
            lift: CharacteristicLift::new(&lattice, CohClass::zero(2)).unwrap(),
            lattice,
            basic_classes: classes,
            ..base.clone()
        };
        let s = vec![Complex64::zero(), Complex64::new(0.3, 0.0)];
        let single = FourManifoldModel {
            lattice: paired.lattice.clone(),
            lift: paired.lift.clone(),
            basic_classes: [(CohClass::zero(2), BigInt::from(1))].into_iter().collect(),
            ..base
        };
        let a = spectrum(&ZdwInput::new(paired.clone(), Complex64::zero(), s.clone()));
        let b = spectrum(&ZdwInput::new(single.clone(), Complex64::zero(), s));
        let va = regularity_verdict(&a.branches[0], &paired).unwrap();
        let vb = regularity_verdict(&b.branches[0], &single).unwrap();
        assert_eq!(vb.pole_order_detected, 2);
        assert!(va.pole_order_detected < vb.pole_order_detected, "{va:?}");
    }

    #[test]
    fn odd_power_check_sees_square_roots() {
        let rho = 0.1;
        let n = 256;
        let sample = |f: &dyn Fn(Complex64) -> Complex64| -> Vec<Complex64> {
            (0..n)
                .map(|j| f(Complex64::from_polar(rho, TAU * j as f64 / n as f64)))
                .collect()
        };
        // z^-1/2 + 1 in z = w^2 is w^-1 + 1
        let bad = sample(&|w| 1.0 / w + 1.0);
        assert!(odd_power_ratio(&bad, rho, 8, 10.0) > 0.5);
        let good = sample(&|w| 1.0 / (w * w) + 1.0 + w * w);
        assert!(odd_power_ratio(&good, rho, 8, 100.0) < 1e-12);
    }

    #[test]
    fn dual_branches_when_period_power_is_odd() {
        let inp = input("Y(5)", 0.1, 0.3);
        let rep = spectrum(&inp);
        assert_eq!(rep.branches.len(), 2);
        for sp in &rep.branches {
            let v = regularity_verdict(sp, &inp.model).unwrap();
            assert!(v.consistent_with_bound);
        }
    }

    #[test]
    fn rejects_bad_sampling() {
        let inp = input("K3", 0.0, 0.0);
        assert!(laurent_spectrum(&inp, 1e-2, 500, 8).is_err());
        assert!(laurent_spectrum(&inp, 1e-2, 32, 8).is_err());
        assert!(laurent_spectrum(&inp, 0.0, 512, 8).is_err());
    }
}
