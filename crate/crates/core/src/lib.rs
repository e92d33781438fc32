//! Parsing, validation and canonical emission of Common Data Format (CDF)
//! football match data: match sheets, match meta, video meta, event
//! streams, center-of-mass tracking and skeletal tracking.
//!
//! The usual flow is [`codec`] to read documents and JSON Lines streams into
//! the typed [`model`], [`rules`] to validate single documents, and
//! [`bundle`] to validate a whole match across files. Every checker returns
//! a [`report::Report`] of findings with stable rule ids.

pub mod bundle;
pub mod codec;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod model;
pub mod positions;
pub mod report;
pub mod representation;
pub mod rules;
pub mod scalar;
pub mod skeleton;

pub use error::{CdfError, Result};
pub use report::{Component, Finding, Report, Rule, Severity};
pub use scalar::{round_half_even, Scalar, CDF_DECIMALS};

/// Pitch point in meters, double precision.
pub type Point3 = geometry::Vec3<f64>;
/// Pitch point in meters, single precision.
pub type Point3f32 = geometry::Vec3<f32>;
pub type Quaternion = geometry::Quat<f64>;
/// Coordinate range along one pitch axis.
pub type Domain = geometry::Interval<f64>;
pub type Pitch = model::PitchGeometry<f64>;
