//! Verification toolkit for nonsmooth multiobjective fractional bilevel
//! programs: single-level reformulation, directional convexificators,
//! constraint qualifications, stationarity certificates, generalized
//! convexity and Mond-Weir type duality, each cross-checked by grid oracles.
//!
//! Numerical code is generic over [`Scalar`]; `f64` and `f32` give float
//! mode and [`Rational`] gives exact mode.

pub mod certfile;
pub mod certify;
pub mod cone;
pub mod corpus;
pub mod duality;
pub mod error;
pub mod expr;
pub mod lp;
pub mod nonsmooth;
pub mod scalar;
pub mod single_level;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;

pub use cone::ExactCone;
pub type ConeF64 = cone::Cone<f64>;
pub type ConeF32 = cone::Cone<f32>;

pub type ExactCertificate = certify::Certificate<Rational>;
pub type CertificateF64 = certify::Certificate<f64>;
pub type ExactStationaryData = certify::StationaryData<Rational>;
pub type StationaryDataF64 = certify::StationaryData<f64>;
