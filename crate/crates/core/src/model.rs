use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::Result;
use crate::lattice::{sign_factor, CharacteristicLift, CohClass, IntersectionLattice};
use crate::scalar::{int, Int};

/// A smooth closed oriented 4-manifold as seen by the Seiberg-Witten calculus:
/// Betti data, a working intersection lattice, a characteristic lift and the
/// raw (untwisted) SW values of its basic classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourManifoldModel<I> {
    pub name: String,
    pub b1: u32,
    pub b2plus: u32,
    pub b2minus: u32,
    pub lattice: IntersectionLattice<I>,
    pub lift: CharacteristicLift<I>,
    pub basic_classes: BTreeMap<CohClass<I>, I>,
    /// Construction history and external-formula flags.
    pub provenance: Vec<String>,
}

impl<I: Int> FourManifoldModel<I> {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn euler(&self) -> i64 {
        2 - 2 * self.b1 as i64 + self.b2plus as i64 + self.b2minus as i64
    }

    pub fn signature(&self) -> i64 {
        self.b2plus as i64 - self.b2minus as i64
    }

    /// `(chi + sigma)/4`.
    pub fn chi_h(&self) -> Ratio<i64> {
        Ratio::new(self.euler() + self.signature(), 4)
    }

    /// `2 chi + 3 sigma`.
    pub fn c1sq(&self) -> i64 {
        2 * self.euler() + 3 * self.signature()
    }

    /// `(-1)^((lift^2 + lift.x)/2) SW(x)`.
    pub fn twisted_coefficient(&self, x: &CohClass<I>, sw: &I) -> Result<I> {
        let s = sign_factor(&self.lattice, &self.lift, x)?;
        Ok(sw.clone() * int::<I>(s as i64))
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.provenance.push(line.into());
    }

    /// Betti numbers realising given `chi_h`, `c1^2` and `b1`.
    pub fn betti_for(chi_h: Ratio<i64>, c1sq: i64, b1: u32) -> Option<(u32, u32)> {
        // chi_h = (1 - b1 + b2+)/2, sigma = c1^2 - 8 chi_h
        let b2p = chi_h * 2 - 1 + b1 as i64;
        if !b2p.is_integer() || b2p.to_integer() < 0 {
            return None;
        }
        let b2p = b2p.to_integer();
        let sigma = Ratio::from_integer(c1sq) - chi_h * 8;
        if !sigma.is_integer() {
            return None;
        }
        let b2m = b2p - sigma.to_integer();
        if b2m < 0 {
            return None;
        }
        Some((b2p as u32, b2m as u32))
    }
}
