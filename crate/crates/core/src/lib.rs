//! Contextuality toolkit: orthogonality hypergraphs, two-valued measures,
//! correlation polytopes, a Born-rule engine, a context-translation random
//! number simulator and counterfactual outcome tables.

pub mod error;
pub mod exact;
pub mod linalg;
pub mod orthospace;
pub mod polytope;
pub mod qrng;
pub mod quantum;
pub mod scalar;
pub mod scenario;
pub mod states;

pub use error::{Error, Result};
pub use exact::Ray;
pub use orthospace::OrthoHypergraph;
pub use polytope::{CorrelationPolytope, EventScheme, Inequality, Polytope};
pub use states::TwoValuedMeasure;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
pub type DensityState = quantum::DensityState<f64>;
pub type Observable = quantum::Observable<f64>;
