//! Seiberg-Witten calculus for smooth closed 4-manifolds with `b2+ > 1`:
//! twisted SW series and their vanishing order at `z = 0` (the superconformal
//! simple type condition), surgery laws, geography bounds, and a numerical
//! Donaldson-Witten engine at the `N_f = 1` superconformal cusp.
//!
//! Exact parts are generic over the integer type ([`scalar::Int`]: `i64`,
//! `BigInt`, ...); numerical parts over the real type ([`scalar::Real`]: `f32`,
//! `f64`, [`scalar::DoubleF64`]). The aliases below fix the usual choices.

pub mod catalog;
pub mod cli;
pub mod ddouble;
pub mod error;
pub mod geography;
pub mod io;
pub mod lattice;
pub mod model;
pub mod scalar;
pub mod surgery;
pub mod swcurve;
pub mod swseries;
pub mod zdw;

pub use error::{Error, Result};

use num_bigint::BigInt;

pub type Lattice = lattice::IntersectionLattice<BigInt>;
pub type Class = lattice::CohClass<BigInt>;
pub type Lift = lattice::CharacteristicLift<BigInt>;
pub type Model = model::FourManifoldModel<BigInt>;
pub type Series = swseries::SwSeries<BigInt>;
pub type Moments = swseries::Moments<BigInt>;

/// Machine-word variants, for small inputs.
pub type Model64 = model::FourManifoldModel<i64>;
pub type Series64 = swseries::SwSeries<i64>;

pub type FiberData = swcurve::WeierstrassFiberData<num_complex::Complex64>;
pub type ExactFiberData = swcurve::WeierstrassFiberData<num_rational::BigRational>;
pub type FiberSet = swcurve::FiberSet<f64>;
pub type FiberSetDD = swcurve::FiberSet<scalar::DoubleF64>;
pub type ZdwInput = zdw::ZdwInput<BigInt>;
