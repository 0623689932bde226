//! Exact integer intersection-lattice algebra.
//!
//! The stored lattice is a working sublattice of `H^2(X; Z)/torsion`: it only
//! has to contain the basic classes, the characteristic lift and whatever
//! surgery classes are in play. Checks that need the full unimodular lattice
//! are out of reach here; the mod-2 congruence `x = lift (mod 2)` is replaced by
//! the evenness of `lift^2 + lift.x`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::FourManifoldModel;
use crate::scalar::{int, Int};

/// Row-major integer matrix.
pub type Matrix<I> = Vec<Vec<I>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionLattice<I> {
    gram: Vec<Vec<I>>,
}

/// Coordinates of a class in the working lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohClass<I>(pub Vec<I>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacteristicLift<I> {
    pub upsilon: CohClass<I>,
}

impl<I: Int> IntersectionLattice<I> {
    /// Builds a lattice from a square symmetric Gram matrix.
    pub fn new(gram: Vec<Vec<I>>) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "gram row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Input(format!(
                        "gram is not symmetric: gram[{i}][{j}] = {} but gram[{j}][{i}] = {}",
                        gram[i][j], gram[j][i]
                    )));
                }
            }
        }
        Ok(IntersectionLattice { gram })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { int(entries[i]) } else { I::zero() })
                    .collect()
            })
            .collect();
        IntersectionLattice { gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<I>] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &I {
        &self.gram[i][j]
    }

    fn check_dim(&self, x: &CohClass<I>) -> Result<()> {
        if x.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: x.rank(),
            });
        }
        Ok(())
    }

    /// `x^T G y`.
    pub fn pairing(&self, x: &CohClass<I>, y: &CohClass<I>) -> Result<I> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut acc = I::zero();
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row = I::zero();
            for (j, yj) in y.0.iter().enumerate() {
                if !yj.is_zero() {
                    row = row + self.gram[i][j].clone() * yj.clone();
                }
            }
            acc = acc + xi.clone() * row;
        }
        Ok(acc)
    }

    pub fn square(&self, x: &CohClass<I>) -> Result<I> {
        self.pairing(x, x)
    }

    /// True when `x` pairs to zero with every basis vector.
    pub fn is_radical(&self, x: &CohClass<I>) -> Result<bool> {
        self.check_dim(x)?;
        Ok((0..self.rank()).all(|i| {
            let e = CohClass::basis(self.rank(), i);
            self.pairing(x, &e).map(|v| v.is_zero()).unwrap_or(false)
        }))
    }

    /// Orthogonal direct sum `self (+) other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let mut gram = vec![vec![I::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                gram[a + i][a + j] = other.gram[i][j].clone();
            }
        }
        IntersectionLattice { gram }
    }

    /// Gram matrix in the basis given by the columns of `u`: `U^T G U`.
    pub fn change_basis(&self, u: &[Vec<I>]) -> Self {
        let n = self.rank();
        let mut gu = vec![vec![I::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = I::zero();
                for k in 0..n {
                    s = s + self.gram[i][k].clone() * u[k][j].clone();
                }
                gu[i][j] = s;
            }
        }
        let mut gram = vec![vec![I::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = I::zero();
                for k in 0..n {
                    s = s + u[k][i].clone() * gu[k][j].clone();
                }
                gram[i][j] = s;
            }
        }
        IntersectionLattice { gram }
    }
}

impl<I: Int> CohClass<I> {
    pub fn new(coords: Vec<I>) -> Self {
        CohClass(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        CohClass(coords.iter().map(|&v| int(v)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        CohClass(vec![I::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![I::zero(); rank];
        v[i] = I::one();
        CohClass(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[I] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        CohClass(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CohClass(self.0.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale(&self, k: &I) -> Self {
        CohClass(self.0.iter().map(|a| a.clone() * k.clone()).collect())
    }

    /// Appends `extra` zero coordinates.
    pub fn extend(&self, extra: usize) -> Self {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat_n(I::zero(), extra));
        CohClass(v)
    }

    /// Coordinates `M x` for an integer matrix `M`.
    pub fn transform(&self, m: &[Vec<I>]) -> Self {
        CohClass(
            m.iter()
                .map(|row| {
                    row.iter()
                        .zip(&self.0)
                        .fold(I::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
                })
                .collect(),
        )
    }

    /// gcd of all coordinates (zero for the zero class).
    pub fn content(&self) -> I {
        self.0.iter().fold(I::zero(), |g, v| g.gcd(v))
    }

    /// Euclidean dot product of coordinates.
    pub fn dot(&self, v: &[I]) -> I {
        self.0
            .iter()
            .zip(v)
            .fold(I::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

impl<I: fmt::Display> fmt::Display for CohClass<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl<I: Int> CharacteristicLift<I> {
    /// Checked constructor.
    pub fn new(lattice: &IntersectionLattice<I>, upsilon: CohClass<I>) -> Result<Self> {
        let lift = CharacteristicLift { upsilon };
        if let Some(i) = lift.first_violation(lattice)? {
            return Err(Error::Consistency(format!(
                "lift {} is not characteristic: fails on basis vector e{i}",
                lift.upsilon
            )));
        }
        Ok(lift)
    }

    /// Wraps a class without checking the Wu condition; [`validate_model`]
    /// reports a non-characteristic lift.
    pub fn unchecked(upsilon: CohClass<I>) -> Self {
        CharacteristicLift { upsilon }
    }

    /// First basis index `i` with `lift.e_i != e_i.e_i (mod 2)`.
    pub fn first_violation(&self, lattice: &IntersectionLattice<I>) -> Result<Option<usize>> {
        let n = lattice.rank();
        for i in 0..n {
            let e = CohClass::basis(n, i);
            let lhs = lattice.pairing(&self.upsilon, &e)?;
            if (lhs - lattice.entry(i, i).clone()).is_odd() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_characteristic(&self, lattice: &IntersectionLattice<I>) -> bool {
        matches!(self.first_violation(lattice), Ok(None))
    }
}

pub fn pairing<I: Int>(l: &IntersectionLattice<I>, x: &CohClass<I>, y: &CohClass<I>) -> Result<I> {
    l.pairing(x, y)
}

/// `(-1)^((lift^2 + lift.x)/2)` as `+1` or `-1`.
pub fn sign_factor<I: Int>(
    l: &IntersectionLattice<I>,
    lift: &CharacteristicLift<I>,
    x: &CohClass<I>,
) -> Result<i32> {
    let num = l.square(&lift.upsilon)? + l.pairing(&lift.upsilon, x)?;
    let two: I = int(2);
    if num.is_odd() {
        return Err(Error::Consistency(format!(
            "class {x} not compatible with lift {}: lift^2 + lift.x = {num} is odd",
            lift.upsilon
        )));
    }
    Ok(parity_sign(&(num / two)))
}

/// `(-1)^n`.
pub fn parity_sign<I: Int>(n: &I) -> i32 {
    if n.is_even() {
        1
    } else {
        -1
    }
}

/// Unimodular matrix whose first column is the primitive vector `v`, together
/// with its inverse. Returns `None` when `v` is not primitive.
pub fn unimodular_completion<I: Int>(v: &[I]) -> Option<(Matrix<I>, Matrix<I>)> {
    let n = v.len();
    if n == 0 {
        return None;
    }
    let mut w = identity::<I>(n); // w v = e_0 at the end
    let mut u = identity::<I>(n); // u = w^{-1}
    let mut cur: Vec<I> = v.to_vec();
    for j in 1..n {
        if cur[j].is_zero() {
            continue;
        }
        let (a, b) = (cur[0].clone(), cur[j].clone());
        let eg = a.extended_gcd(&b);
        let (g, s, t) = (eg.gcd, eg.x, eg.y);
        let (ag, bg) = (a / g.clone(), b / g.clone());
        // rows (0, j) <- [[s, t], [-b/g, a/g]] applied to (row0, rowj)
        let r0: Vec<I> = (0..n)
            .map(|k| s.clone() * w[0][k].clone() + t.clone() * w[j][k].clone())
            .collect();
        let rj: Vec<I> = (0..n)
            .map(|k| -bg.clone() * w[0][k].clone() + ag.clone() * w[j][k].clone())
            .collect();
        w[0] = r0;
        w[j] = rj;
        // columns (0, j) of u <- u * [[a/g, -t], [b/g, s]]
        for row in u.iter_mut() {
            let c0 = row[0].clone() * ag.clone() + row[j].clone() * bg.clone();
            let cj = -row[0].clone() * t.clone() + row[j].clone() * s.clone();
            row[0] = c0;
            row[j] = cj;
        }
        cur[0] = g;
        cur[j] = I::zero();
    }
    if cur[0] == -I::one() {
        for row in u.iter_mut() {
            row[0] = -row[0].clone();
        }
        for k in 0..n {
            w[0][k] = -w[0][k].clone();
        }
        cur[0] = I::one();
    }
    if !cur[0].is_one() {
        return None;
    }
    Some((u, w))
}

pub fn identity<I: Int>(n: usize) -> Vec<Vec<I>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { I::one() } else { I::zero() }).collect())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    Dimensions,
    StandingHypothesis,
    Characteristic,
    SignIntegrality,
    Involution,
    Noether,
    SimpleType,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub check: Check,
    pub severity: Severity,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub strict: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.iter().all(|i| i.severity == Severity::Warning)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }

    fn push(&mut self, check: Check, severity: Severity, message: String) {
        self.issues.push(Issue {
            check,
            severity,
            message,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "{}: all checks pass", self.model);
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let tag = match issue.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            write!(f, "{}: {tag} [{:?}] {}", self.model, issue.check, issue.message)?;
        }
        Ok(())
    }
}

/// Runs the model checks. Simple-type failures are errors only when `strict`.
pub fn validate_model<I: Int>(m: &FourManifoldModel<I>, strict: bool) -> ValidationReport {
    let mut rep = ValidationReport {
        model: m.name.clone(),
        strict,
        issues: Vec::new(),
    };
    let l = &m.lattice;
    let n = l.rank();

    if m.lift.upsilon.rank() != n {
        rep.push(
            Check::Dimensions,
            Severity::Error,
            format!("lift has {} coordinates, lattice rank is {n}", m.lift.upsilon.rank()),
        );
        return rep;
    }
    let mut dims_ok = true;
    for (x, sw) in &m.basic_classes {
        if x.rank() != n {
            rep.push(
                Check::Dimensions,
                Severity::Error,
                format!("class {x} has {} coordinates, lattice rank is {n}", x.rank()),
            );
            dims_ok = false;
        }
        if sw.is_zero() {
            rep.push(
                Check::Dimensions,
                Severity::Error,
                format!("class {x} stored with SW value 0"),
            );
        }
    }
    if !dims_ok {
        return rep;
    }

    if m.b2plus <= 1 {
        rep.push(
            Check::StandingHypothesis,
            Severity::Error,
            format!("b2+ = {} but b2+ > 1 is required", m.b2plus),
        );
    }

    // (a)
    if let Ok(Some(i)) = m.lift.first_violation(l) {
        rep.push(
            Check::Characteristic,
            Severity::Error,
            format!("lift {} is not characteristic on basis vector e{i}", m.lift.upsilon),
        );
    }

    // (b)
    let mut sign_ok = true;
    for x in m.basic_classes.keys() {
        if let Err(e) = sign_factor(l, &m.lift, x) {
            rep.push(Check::SignIntegrality, Severity::Error, e.to_string());
            sign_ok = false;
        }
    }

    // (d)
    let chi_h = m.chi_h();
    let chi_integral = chi_h.is_integer();
    if !m.basic_classes.is_empty() && !chi_integral {
        rep.push(
            Check::Noether,
            Severity::Error,
            format!("chi_h = {chi_h} is not an integer but the model has basic classes"),
        );
    }

    // (c)
    if sign_ok && chi_integral {
        let eps = parity_sign(&(chi_h.to_integer() + m.signature()));
        for (x, sw) in &m.basic_classes {
            let cx = m.twisted_coefficient(x, sw).expect("sign checked above");
            let mx = x.neg();
            match m.basic_classes.get(&mx) {
                None => rep.push(
                    Check::Involution,
                    Severity::Error,
                    format!("basic class {x} present but -x = {mx} is not"),
                ),
                Some(swm) => {
                    let cm = m.twisted_coefficient(&mx, swm).expect("sign checked above");
                    if cm != cx.clone() * int::<I>(eps as i64) {
                        rep.push(
                            Check::Involution,
                            Severity::Error,
                            format!(
                                "twisted coefficients violate c(-x) = (-1)^(chi_h+sigma) c(x) at x = {x}: c(x) = {cx}, c(-x) = {cm}"
                            ),
                        );
                    }
                }
            }
        }
    }

    // (e)
    let c1sq: I = int(m.c1sq());
    for x in m.basic_classes.keys() {
        if let Ok(sq) = l.square(x) {
            if sq != c1sq {
                rep.push(
                    Check::SimpleType,
                    if strict { Severity::Error } else { Severity::Warning },
                    format!("basic class {x} has x^2 = {sq} but c1^2 = {c1sq}"),
                );
            }
        }
    }
    rep
}
