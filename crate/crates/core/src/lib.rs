//! Edit distances, Besicovitch and Feldman pseudo-metrics, and dill maps on
//! one-sided infinite words.
//!
//! Normalized quantities are generic over [`Scalar`]; the aliases below fix
//! the common choices.

pub mod analysis;
pub mod builtins;
pub mod dillmap;
pub mod editdist;
pub mod error;
pub mod metrics;
pub mod scalar;
pub mod words;

pub use analysis::{classify, ClassificationReport};
pub use dillmap::{DillMap, LocalRule};
pub use editdist::HalfInt;
pub use error::{Error, Result};
pub use metrics::{DistanceCurve, DistanceKind};
pub use scalar::Scalar;
pub use words::{Alphabet, InfiniteWordSpec, Letter, Word};

/// Exact rational used for periodic densities and Lipschitz constants.
pub type Rational = num_rational::BigRational;

/// Distance curve with exact normalized values.
pub type Curve = metrics::DistanceCurve<Rational>;

pub type CurveF64 = metrics::DistanceCurve<f64>;

pub type Spectral = analysis::SpectralEstimate<f64>;
