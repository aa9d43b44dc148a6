//! Classification from one-bit (sign of random projection) measurements.
//!
//! The pipeline is: draw a Gaussian [`measure::MeasurementMatrix`], center
//! the data with the training mean, binarize to `Q = sign(AX)`, then
//! [`model::train`] a layered table of sign patterns and
//! [`classify::classify_point`] new points. The [`theory`] module evaluates
//! the two-cone analysis of the single-layer classifier.

pub mod classify;
pub mod datasets;
pub mod error;
pub mod experiment;
pub mod measure;
pub mod model;
pub mod persist;
pub mod plot;
pub mod rng;
pub mod synthgen;
pub mod theory;

pub use error::{Error, Result};
