//! Quantum resource measures with the tensorization property.
//!
//! This crate computes nonclassicality depth, metrological power, and
//! maximal coherence for bosonic states on truncated Fock spaces, their
//! closed forms for Gaussian states, and their channel-output versions
//! for finite-dimensional channels in Choi form. On top of the measures
//! it ships reproduction harnesses for the no-go theorems these measures
//! obey: resource concentration bounds, success-probability bounds, and
//! tensorization of channel-output resources.
//!
//! Layout:
//! - [`fock`] — truncated Fock-space states, free operations, noise
//!   channels, and s-parametrized quasiprobability evaluation;
//! - [`gaussian`] — covariance-matrix level states and measures;
//! - [`measures`] — QFI matrix / metrological power, numerical
//!   nonclassicality depth, maximal coherence;
//! - [`channels`] — Choi matrices, random channel sampling, and
//!   channel-output measure optimization;
//! - [`experiments`] — seeded reproduction runs and property suites.

pub mod channels;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod measures;

pub use error::{Error, Result};
pub use fock::{DensityOperator, FockVector, KrausChannel};
pub use gaussian::GaussianState;
pub use measures::{DepthEstimate, GridSpec, QfiMatrix};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Complex dense matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Complex dense vector.
pub type CVector = nalgebra::DVector<C64>;

/// Real dense matrix.
pub type RMatrix = nalgebra::DMatrix<f64>;

/// Real dense vector.
pub type RVector = nalgebra::DVector<f64>;
