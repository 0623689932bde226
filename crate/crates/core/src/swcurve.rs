//! The `SU(2)`, `N_f = 1` Seiberg-Witten family `y^2 = x^2 (x - u) + 2 m x - 1`
//! in Weierstrass form, its discriminant roots in `u`, the finite period at
//! each singular fiber and the scaling of these data at the cusp
//! `(u, m) = (3, 3/2)`.
//!
//! Numerics are carried out in the cusp chart `m = 3/2 + z`, `u = 3 + 2z + w`.
//! The polynomials below are the exact re-expansions of `g2`, `g3`, `Delta` and
//! `dDelta/du` in `(z, w)`; evaluating them there keeps full relative precision
//! for the colliding pair `w ~ z^{3/2}` where the `u`-form cancels
//! catastrophically.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{FromPrimitive, Num, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c_ratio, cabs, csqrt, Real};

/// Any exact or floating field the Weierstrass data can be evaluated in
/// (`BigRational`, `Complex<f64>`, `Complex<DoubleF64>`, ...).
pub trait Field: Clone + Debug + Num + FromPrimitive {}
impl<T: Clone + Debug + Num + FromPrimitive> Field for T {}

fn q<F: Field>(n: i64, d: i64) -> F {
    F::from_i64(n).unwrap() / F::from_i64(d).unwrap()
}

fn k<F: Field>(n: i64) -> F {
    F::from_i64(n).unwrap()
}

/// `g2 = (4/3)(u^2 - 6m)`.
pub fn g2<F: Field>(u: &F, m: &F) -> F {
    q::<F>(4, 3) * (u.clone() * u.clone() - k::<F>(6) * m.clone())
}

/// `g3 = (1/27)(8u^3 - 72mu + 108)`.
pub fn g3<F: Field>(u: &F, m: &F) -> F {
    let u2 = u.clone() * u.clone();
    (k::<F>(8) * u2 * u.clone() - k::<F>(72) * m.clone() * u.clone() + k(108)) / k(27)
}

/// `g2^3 - 27 g3^2`.
pub fn discriminant_from_invariants<F: Field>(g2: &F, g3: &F) -> F {
    g2.clone() * g2.clone() * g2.clone() - k::<F>(27) * g3.clone() * g3.clone()
}

/// Closed cubic `-64u^3 + 64m^2u^2 + 576mu - 512m^3 - 432`.
pub fn discriminant<F: Field>(u: &F, m: &F) -> F {
    let u2 = u.clone() * u.clone();
    let m2 = m.clone() * m.clone();
    k::<F>(-64) * u2.clone() * u.clone() + k::<F>(64) * m2.clone() * u2
        + k::<F>(576) * m.clone() * u.clone()
        - k::<F>(512) * m2 * m.clone()
        - k(432)
}

/// `dDelta/du = -192u^2 + 128m^2u + 576m`.
pub fn discriminant_du<F: Field>(u: &F, m: &F) -> F {
    k::<F>(-192) * u.clone() * u.clone() + k::<F>(128) * m.clone() * m.clone() * u.clone()
        + k::<F>(576) * m.clone()
}

/// Chart coordinates of `(u, m)`: `z = m - 3/2`, `w = u - 3 - 2z`.
pub fn to_chart<F: Field>(u: &F, m: &F) -> (F, F) {
    let z = m.clone() - q(3, 2);
    let w = u.clone() - k(3) - k::<F>(2) * z.clone();
    (z, w)
}

pub fn from_chart<F: Field>(z: &F, w: &F) -> (F, F) {
    (k::<F>(3) + k::<F>(2) * z.clone() + w.clone(), q::<F>(3, 2) + z.clone())
}

/// `g2` in the cusp chart: `8z + 16/3 z^2 + w (8 + 16/3 z + 4/3 w)`.
pub fn chart_g2<F: Field>(z: &F, w: &F) -> F {
    let zz = z.clone();
    k::<F>(8) * zz.clone() + q::<F>(16, 3) * zz.clone() * zz.clone()
        + w.clone() * (k::<F>(8) + q::<F>(16, 3) * zz + q::<F>(4, 3) * w.clone())
}

/// `g3` in the cusp chart.
pub fn chart_g3<F: Field>(z: &F, w: &F) -> F {
    let z = z.clone();
    let z2 = z.clone() * z.clone();
    let c0 = q::<F>(16, 3) * z2.clone() + q::<F>(64, 27) * z2.clone() * z.clone();
    let c1 = k::<F>(4) + k::<F>(8) * z.clone() + q::<F>(32, 9) * z2;
    let c2 = q::<F>(8, 3) + q::<F>(16, 9) * z;
    let c3 = q::<F>(8, 27);
    c0 + w.clone() * (c1 + w.clone() * (c2 + w.clone() * c3))
}

/// Coefficients `[c3, c2, c1, c0]` of `Delta` as a cubic in `w` at fixed `z`.
pub fn chart_cubic<F: Field>(z: &F) -> [F; 4] {
    let z = z.clone();
    let z2 = z.clone() * z.clone();
    let z3 = z2.clone() * z.clone();
    [
        k(-64),
        k::<F>(64) * z2.clone() - k::<F>(192) * z.clone() - k(432),
        k::<F>(256) * z3.clone() + k::<F>(384) * z2,
        k::<F>(256) * z3.clone() * z + k::<F>(512) * z3,
    ]
}

pub fn chart_discriminant<F: Field>(z: &F, w: &F) -> F {
    let [c3, c2, c1, c0] = chart_cubic(z);
    c0 + w.clone() * (c1 + w.clone() * (c2 + w.clone() * c3))
}

/// `dDelta/du` in the chart (`du = dw` at fixed `m`).
pub fn chart_discriminant_du<F: Field>(z: &F, w: &F) -> F {
    let [c3, c2, c1, _] = chart_cubic(z);
    c1 + w.clone() * (k::<F>(2) * c2 + k::<F>(3) * c3 * w.clone())
}

/// Weierstrass data of one fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassFiberData<F> {
    pub u: F,
    pub m: F,
    pub g2: F,
    pub g3: F,
    pub delta: F,
    pub delta_prime: F,
    /// `varpi^2 = g2/(36 g3)`; `None` when `g3 = 0`.
    pub period_sq: Option<F>,
    /// `T = -(1/24)(varpi^-2 - 8u)`; `None` when `varpi^2` is 0 or undefined.
    pub t: Option<F>,
}

impl<F: Field> WeierstrassFiberData<F> {
    /// True at a cusp of the family (`g2 = g3 = 0`).
    pub fn is_cusp(&self) -> bool {
        self.g2.is_zero() && self.g3.is_zero()
    }

    fn assemble(u: F, m: F, g2: F, g3: F, delta: F, delta_prime: F) -> Self {
        let period_sq = if g3.is_zero() {
            None
        } else {
            Some(g2.clone() / (k::<F>(36) * g3.clone()))
        };
        let t = if g2.is_zero() || g3.is_zero() {
            None
        } else {
            let inv = k::<F>(36) * g3.clone() / g2.clone();
            Some((k::<F>(8) * u.clone() - inv) / k(24))
        };
        WeierstrassFiberData {
            u,
            m,
            g2,
            g3,
            delta,
            delta_prime,
            period_sq,
            t,
        }
    }
}

/// Weierstrass data at `(u, m)`, evaluated from the `u`-form polynomials.
pub fn weierstrass_data<F: Field>(u: F, m: F) -> WeierstrassFiberData<F> {
    let g2v = g2(&u, &m);
    let g3v = g3(&u, &m);
    let delta = discriminant(&u, &m);
    let dp = discriminant_du(&u, &m);
    WeierstrassFiberData::assemble(u, m, g2v, g3v, delta, dp)
}

/// Weierstrass data at chart point `(z, w)`.
pub fn chart_fiber_data<F: Field>(z: &F, w: &F) -> WeierstrassFiberData<F> {
    let (u, m) = from_chart(z, w);
    WeierstrassFiberData::assemble(
        u,
        m,
        chart_g2(z, w),
        chart_g3(z, w),
        chart_discriminant(z, w),
        chart_discriminant_du(z, w),
    )
}

fn horner<R: Real>(c: &[Complex<R>; 4], x: Complex<R>) -> (Complex<R>, Complex<R>) {
    let mut p = c[0];
    let mut dp = Complex::zero();
    for ci in &c[1..] {
        dp = dp * x + p;
        p = p * x + *ci;
    }
    (p, dp)
}

/// All three roots of a cubic `c[0] w^3 + c[1] w^2 + c[2] w + c[3]`.
///
/// Aberth iteration locates the roots, the most isolated one is Newton-refined
/// and deflated (backward when it is the largest, forward otherwise), the
/// remaining pair comes from a cancellation-free quadratic formula, and every
/// root gets one guarded Newton step.
pub fn solve_cubic<R: Real>(c: &[Complex<R>; 4]) -> [Complex<R>; 3] {
    let zero = Complex::<R>::zero();
    let lead = c[0];
    let scale = (1..4)
        .map(|i| {
            let r = cabs(c[i] / lead).to_f64_lossy();
            r.powf(1.0 / i as f64)
        })
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let center = -(c[1] / (lead * c_ratio::<R>(3, 1)));
    let mut w: Vec<Complex<R>> = (0..3)
        .map(|i| {
            let a = 0.4 + i as f64 * 2.0 * std::f64::consts::PI / 3.0;
            center + crate::scalar::c::<R>(scale * a.cos(), scale * a.sin())
        })
        .collect();
    let tol = R::epsilon().to_f64_lossy() * 4.0;
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..3 {
            let (p, dp) = horner(c, w[i]);
            if p == zero {
                continue;
            }
            let ratio = p / dp;
            let mut s = zero;
            for j in 0..3 {
                if j != i && w[i] != w[j] {
                    s = s + Complex::new(R::one(), R::zero()) / (w[i] - w[j]);
                }
            }
            let step = ratio / (Complex::new(R::one(), R::zero()) - ratio * s);
            w[i] = w[i] - step;
            let rel = cabs(step).to_f64_lossy() / cabs(w[i]).to_f64_lossy().max(scale * 1e-3);
            moved = moved.max(rel);
        }
        if moved < tol {
            break;
        }
    }

    // isolated root: largest distance to its nearest neighbour
    let sep = |i: usize| {
        (0..3)
            .filter(|&j| j != i)
            .map(|j| cabs(w[i] - w[j]).to_f64_lossy())
            .fold(f64::INFINITY, f64::min)
    };
    let s = (0..3)
        .max_by(|&a, &b| sep(a).partial_cmp(&sep(b)).unwrap())
        .unwrap();
    let mut ws = w[s];
    for _ in 0..3 {
        let (p, dp) = horner(c, ws);
        if dp == zero {
            break;
        }
        let next = ws - p / dp;
        if cabs(horner(c, next).0) <= cabs(p) {
            ws = next;
        } else {
            break;
        }
    }
    let others: Vec<usize> = (0..3).filter(|&j| j != s).collect();
    let largest = others
        .iter()
        .all(|&j| cabs(ws).to_f64_lossy() >= cabs(w[j]).to_f64_lossy());
    let (q2, q1, q0) = if largest && ws != zero {
        let q0 = -(c[3] / ws);
        let q1 = (q0 - c[2]) / ws;
        (c[0], q1, q0)
    } else {
        let q1 = c[1] + ws * c[0];
        let q0 = c[2] + ws * q1;
        (c[0], q1, q0)
    };
    let four = c_ratio::<R>(4, 1);
    let two = c_ratio::<R>(2, 1);
    let sq = csqrt(q1 * q1 - four * q2 * q0);
    let t_plus = q1 + sq;
    let t_minus = q1 - sq;
    let t = if cabs(t_plus) >= cabs(t_minus) { t_plus } else { t_minus };
    let (r1, r2) = if t == zero {
        let r = -(q1 / (two * q2));
        (r, r)
    } else {
        let t = -(t / two);
        (t / q2, q0 / t)
    };
    let mut roots = [zero; 3];
    roots[s] = ws;
    roots[others[0]] = r1;
    roots[others[1]] = r2;
    for r in roots.iter_mut() {
        let (p, dp) = horner(c, *r);
        if dp != zero && p != zero {
            let next = *r - p / dp;
            if cabs(horner(c, next).0) < cabs(p) {
                *r = next;
            }
        }
    }
    roots
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingTag {
    /// Near the superconformal point: indices of `u_+`, `u_-` and the spectator.
    Cusp {
        plus: usize,
        minus: usize,
        spectator: usize,
    },
    /// Away from the cusp no pair is singled out.
    Unlabeled,
    /// All three roots coincide to working precision.
    TripleDegenerate,
}

/// `|m - 3/2|` below which the colliding pair is labelled.
pub const CUSP_LABEL_RADIUS: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct FiberRoot<R> {
    pub u: Complex<R>,
    /// Chart offset `u - 3 - 2z`.
    pub w: Complex<R>,
}

#[derive(Clone, Debug)]
pub struct FiberSet<R> {
    pub m: Complex<R>,
    pub z: Complex<R>,
    pub roots: [FiberRoot<R>; 3],
    pub pairing_tag: PairingTag,
}

impl<R: Real> FiberSet<R> {
    pub fn plus(&self) -> Option<&FiberRoot<R>> {
        match self.pairing_tag {
            PairingTag::Cusp { plus, .. } => Some(&self.roots[plus]),
            _ => None,
        }
    }

    pub fn minus(&self) -> Option<&FiberRoot<R>> {
        match self.pairing_tag {
            PairingTag::Cusp { minus, .. } => Some(&self.roots[minus]),
            _ => None,
        }
    }

    pub fn spectator(&self) -> Option<&FiberRoot<R>> {
        match self.pairing_tag {
            PairingTag::Cusp { spectator, .. } => Some(&self.roots[spectator]),
            _ => None,
        }
    }
}

/// Roots of `Delta(u; m)` in the chart around `z = m - 3/2`.
pub fn discriminant_roots_at_z<R: Real>(z: Complex<R>) -> FiberSet<R> {
    let coeffs = chart_cubic(&z);
    let ws = solve_cubic(&coeffs);
    let roots = ws.map(|w| FiberRoot {
        u: from_chart(&z, &w).0,
        w,
    });
    let (_, m) = from_chart(&z, &Complex::zero());
    let spread = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| cabs(roots[i].u - roots[j].u).to_f64_lossy())
        .fold(0.0f64, f64::max);
    let umax = roots
        .iter()
        .map(|r| cabs(r.u).to_f64_lossy())
        .fold(1.0f64, f64::max);
    let pairing_tag = if spread <= 1e3 * R::epsilon().to_f64_lossy() * umax {
        PairingTag::TripleDegenerate
    } else if cabs(z).to_f64_lossy() < CUSP_LABEL_RADIUS {
        // distance to u = 3 is |2z + w|
        let two = c_ratio::<R>(2, 1);
        let d = |i: usize| cabs(two * z + roots[i].w).to_f64_lossy();
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| d(a).partial_cmp(&d(b)).unwrap());
        let (a, b) = (idx[0], idx[1]);
        let a_first = (roots[a].w.re, roots[a].w.im) >= (roots[b].w.re, roots[b].w.im);
        let (plus, minus) = if a_first { (a, b) } else { (b, a) };
        PairingTag::Cusp {
            plus,
            minus,
            spectator: idx[2],
        }
    } else {
        PairingTag::Unlabeled
    };
    FiberSet {
        m,
        z,
        roots,
        pairing_tag,
    }
}

/// Roots of the discriminant cubic at mass `m`.
pub fn discriminant_roots<R: Real>(m: Complex<R>) -> FiberSet<R> {
    discriminant_roots_at_z(m - c_ratio::<R>(3, 2))
}

/// Fiber data at one root, with the principal square root as `varpi`.
#[derive(Clone, Debug)]
pub struct FiberSample<R> {
    pub w: Complex<R>,
    pub data: WeierstrassFiberData<Complex<R>>,
    pub varpi: Option<Complex<R>>,
}

pub fn fiber_sample<R: Real>(z: &Complex<R>, w: &Complex<R>) -> FiberSample<R> {
    let data = chart_fiber_data(z, w);
    let varpi = data.period_sq.map(csqrt);
    FiberSample {
        w: *w,
        data,
        varpi,
    }
}

/// Three fibers tracked along a path in `z`, consistently ordered.
#[derive(Clone, Debug)]
pub struct TrackedPoint<R> {
    pub param: f64,
    pub z: Complex<R>,
    pub fibers: [FiberSample<R>; 3],
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Nearest-neighbour continuation of the roots and of the `varpi` branches
/// along sampled path points `(param, z)`. Each root must move less than half
/// its distance to the nearest other root between samples, and `varpi` must
/// not jump.
pub fn track_path<R: Real>(path: &[(f64, Complex<R>)]) -> Result<Vec<TrackedPoint<R>>> {
    let mut out: Vec<TrackedPoint<R>> = Vec::with_capacity(path.len());
    for &(param, z) in path {
        let set = discriminant_roots_at_z(z);
        let ws: Vec<Complex<R>> = set.roots.iter().map(|r| r.w).collect();
        let order: [usize; 3] = match out.last() {
            None => match set.pairing_tag {
                PairingTag::Cusp {
                    plus,
                    minus,
                    spectator,
                } => [plus, minus, spectator],
                _ => [0, 1, 2],
            },
            Some(prev) => {
                let pw: Vec<Complex<R>> = prev.fibers.iter().map(|f| f.w).collect();
                let best = PERMUTATIONS
                    .iter()
                    .min_by(|a, b| {
                        let da: f64 = (0..3).map(|i| cabs(ws[a[i]] - pw[i]).to_f64_lossy()).sum();
                        let db: f64 = (0..3).map(|i| cabs(ws[b[i]] - pw[i]).to_f64_lossy()).sum();
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                for i in 0..3 {
                    let nearest = (0..3)
                        .filter(|&j| j != i)
                        .map(|j| cabs(pw[i] - pw[j]).to_f64_lossy())
                        .fold(f64::INFINITY, f64::min);
                    let step = cabs(ws[best[i]] - pw[i]).to_f64_lossy();
                    if step > 0.5 * nearest {
                        return Err(Error::Contour {
                            theta: param,
                            reason: format!(
                                "root {i} moved {step:.3e}, more than half its separation {nearest:.3e}"
                            ),
                        });
                    }
                }
                *best
            }
        };
        let mut fibers = order.map(|i| fiber_sample(&z, &ws[i]));
        if let Some(prev) = out.last() {
            for (f, pf) in fibers.iter_mut().zip(prev.fibers.iter()) {
                if let (Some(v), Some(pv)) = (f.varpi, pf.varpi) {
                    let keep = cabs(v - pv);
                    let flip = cabs(v + pv);
                    let chosen = if flip < keep { -v } else { v };
                    let jump = keep.to_f64_lossy().min(flip.to_f64_lossy());
                    if jump > 0.5 * cabs(pv).to_f64_lossy() {
                        return Err(Error::Contour {
                            theta: param,
                            reason: format!("period branch jumped by {jump:.3e}"),
                        });
                    }
                    f.varpi = Some(chosen);
                }
            }
        }
        out.push(TrackedPoint { param, z, fibers });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CuspQuantity {
    /// `|varpi_+|`
    Period,
    /// `|g2(u_+; m)|`
    G2AtCuspRoots,
    /// `|dDelta/du (u_+; m)|`
    DeltaPrime,
    /// `|delta u_+| = |u_+ - 3 - 2z|`
    DeltaU,
}

impl std::str::FromStr for CuspQuantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "period" => Ok(CuspQuantity::Period),
            "g2_at_cusp_roots" | "g2" => Ok(CuspQuantity::G2AtCuspRoots),
            "delta_prime" => Ok(CuspQuantity::DeltaPrime),
            "delta_u" => Ok(CuspQuantity::DeltaU),
            other => Err(Error::Input(format!(
                "unknown quantity `{other}` (period, g2_at_cusp_roots, delta_prime, delta_u)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub quantity: CuspQuantity,
    /// Least-squares slope of `log|q|` against `log z`.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// `(z, |q|)` samples used.
    pub samples: Vec<(f64, f64)>,
}

/// Cusp value of one quantity at real `z > 0`, evaluated on `u_+`.
pub fn cusp_quantity<R: Real>(quantity: CuspQuantity, z: f64) -> Option<f64> {
    let zc = Complex::new(R::from_f64_lossy(z), R::zero());
    let set = discriminant_roots_at_z(zc);
    let plus = set.plus()?;
    let s = fiber_sample(&zc, &plus.w);
    let v = match quantity {
        CuspQuantity::Period => cabs(s.data.period_sq?).sqrt(),
        CuspQuantity::G2AtCuspRoots => cabs(s.data.g2),
        CuspQuantity::DeltaPrime => cabs(s.data.delta_prime),
        CuspQuantity::DeltaU => cabs(plus.w),
    };
    Some(v.to_f64_lossy())
}

/// Log-log slope of a cusp quantity along real `z = radii[i]`.
pub fn cusp_scaling_fit<R: Real>(quantity: CuspQuantity, radii: &[f64]) -> Result<ScalingFit> {
    if radii.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 radii, got {}",
            radii.len()
        )));
    }
    if radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Input("radii must be positive".into()));
    }
    if radii.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::Input("radii must be strictly decreasing".into()));
    }
    let samples: Vec<(f64, f64)> = radii
        .iter()
        .filter_map(|&r| cusp_quantity::<R>(quantity, r).map(|v| (r, v)))
        .filter(|&(_, v)| v.is_finite() && v > 0.0)
        .collect();
    if samples.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "only {} valid samples",
            samples.len()
        )));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(z, v)| (z.ln(), v.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ScalingFit {
        quantity,
        slope,
        intercept,
        residual,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DoubleF64;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cusp_point_is_exactly_singular() {
        let d = weierstrass_data(rat(3, 1), rat(3, 2));
        assert!(d.g2.is_zero() && d.g3.is_zero() && d.delta.is_zero());
        assert!(d.is_cusp());
        assert!(d.period_sq.is_none());
    }

    #[test]
    fn spectator_limit_exact() {
        let d = weierstrass_data(rat(-15, 4), rat(3, 2));
        assert_eq!(d.g2, rat(27, 4));
        assert_eq!(d.g3, rat(27, 8));
        assert!(d.delta.is_zero());
        assert_eq!(d.period_sq, Some(rat(1, 18)));
        assert_eq!(d.t, Some(rat(-2, 1)));
    }

    #[test]
    fn origin_values() {
        let d = weierstrass_data(rat(0, 1), rat(0, 1));
        assert_eq!(d.g2, rat(0, 1));
        assert_eq!(d.g3, rat(4, 1));
        assert_eq!(d.delta, rat(-432, 1));
        assert_eq!(d.t, None);
    }

    #[test]
    fn closed_cubic_matches_invariants_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let u = rat(rng.gen_range(-500..500), rng.gen_range(1..50));
            let m = rat(rng.gen_range(-500..500), rng.gen_range(1..50));
            let d = weierstrass_data(u.clone(), m.clone());
            assert_eq!(d.delta, discriminant_from_invariants(&d.g2, &d.g3));
            // chart expansions are the same polynomials
            let (z, w) = to_chart(&u, &m);
            let c = chart_fiber_data(&z, &w);
            assert_eq!(c.g2, d.g2);
            assert_eq!(c.g3, d.g3);
            assert_eq!(c.delta, d.delta);
            assert_eq!(c.delta_prime, d.delta_prime);
        }
    }

    #[test]
    fn closed_cubic_matches_invariants_in_floating_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let u = Complex::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let m = Complex::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let a: Complex<f64> = discriminant(&u, &m);
            let b = discriminant_from_invariants(&g2(&u, &m), &g3(&u, &m));
            let scale = 64.0 * (u.norm().powi(3) + m.norm().powi(2) * u.norm().powi(2)) + 576.0 * m.norm() * u.norm() + 512.0 * m.norm().powi(3) + 432.0;
            assert!((a - b).norm() <= 1e-12 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn roots_at_cusp_mass() {
        let set = discriminant_roots(Complex::new(1.5f64, 0.0));
        let mut us: Vec<Complex<f64>> = set.roots.iter().map(|r| r.u).collect();
        us.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((us[0] - Complex::new(-3.75, 0.0)).norm() < 1e-12);
        assert!((us[1] - Complex::new(3.0, 0.0)).norm() < 1e-7);
        assert!((us[2] - Complex::new(3.0, 0.0)).norm() < 1e-7);
        let s = set.spectator().unwrap();
        assert!((s.u - Complex::new(-3.75, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn colliding_pair_near_cusp() {
        let z: f64 = 1e-4;
        let set = discriminant_roots(Complex::new(1.5 + z, 0.0));
        let p = set.plus().unwrap();
        let m = set.minus().unwrap();
        // u_pm = 3 + 2z +- c z^{3/2}, c = sqrt(512/432) at leading order
        let c = (512.0f64 / 432.0).sqrt();
        assert!((p.w.re / z.powf(1.5) - c).abs() < 0.05, "{}", p.w);
        assert!((m.w.re / z.powf(1.5) + c).abs() < 0.05, "{}", m.w);
        assert!((set.spectator().unwrap().u.re + 3.75).abs() < 1e-2);
    }

    #[test]
    fn residuals_and_vieta_on_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let m = Complex::new(1.5 + 0.1 * th.cos(), 0.1 * th.sin());
            let set = discriminant_roots(m);
            for r in &set.roots {
                let res: Complex<f64> = discriminant(&r.u, &m);
                assert!(res.norm() < 1e-10 * 7776.0, "residual {res}");
            }
            // Vieta in u: sum = m^2, product = (-512 m^3 - 432)/64 * (-1)... via c0/c3
            let sum: Complex<f64> = set.roots.iter().map(|r| r.u).sum();
            let prod: Complex<f64> = set.roots.iter().map(|r| r.u).product();
            let want_sum = m * m;
            let want_prod = (Complex::new(-512.0, 0.0) * m * m * m - 432.0) / 64.0;
            assert!((sum - want_sum).norm() <= 1e-10 * want_sum.norm());
            assert!((prod - want_prod).norm() <= 1e-10 * want_prod.norm());
        }
    }

    #[test]
    fn spectator_stays_analytic() {
        for i in 0..40 {
            let th = i as f64 * 0.157;
            for &r in &[1e-2, 1e-4, 1e-6] {
                let z = Complex::new(r * th.cos(), r * th.sin());
                let set = discriminant_roots_at_z(z);
                let s = set.spectator().unwrap();
                let f = fiber_sample(&z, &s.w);
                let ps = f.data.period_sq.unwrap();
                assert!((ps - Complex::new(1.0 / 18.0, 0.0)).norm() < 0.01);
                assert!((f.data.g2 - Complex::new(6.75, 0.0)).norm() < 0.2);
                assert!(f.data.delta_prime.norm() > 100.0);
            }
        }
    }

    #[test]
    fn double_double_roots_agree_with_f64() {
        let z = Complex::new(3e-3, 1e-3);
        let a = discriminant_roots_at_z(z);
        let zd = Complex::new(DoubleF64::from_f64(3e-3), DoubleF64::from_f64(1e-3));
        let b = discriminant_roots_at_z(zd);
        for i in 0..3 {
            let wb = crate::scalar::to_c64(b.roots[i].w);
            let wa = a.roots[i].w;
            assert!((wa - wb).norm() <= 1e-13 * wb.norm().max(1e-3), "{wa} vs {wb}");
        }
    }

    #[test]
    fn scaling_fit_rejects_bad_radii() {
        assert!(cusp_scaling_fit::<f64>(CuspQuantity::Period, &[1e-3, 1e-4]).is_err());
        assert!(cusp_scaling_fit::<f64>(CuspQuantity::Period, &[1e-4, 1e-3, 1e-5]).is_err());
        assert!(cusp_scaling_fit::<f64>(CuspQuantity::Period, &[1e-3, -1e-4, -1e-5]).is_err());
    }

    #[test]
    fn tracking_detects_a_teleporting_root() {
        // coarse path that jumps from near the cusp to far away
        let path = vec![
            (0.0, Complex::new(1e-3, 0.0)),
            (1.0, Complex::new(-2.0, 1.0)),
        ];
        assert!(matches!(track_path::<f64>(&path), Err(Error::Contour { .. })));
    }
}
