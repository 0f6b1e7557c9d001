//! Statistical significance of entanglement tests.
//!
//! The crate evaluates Bell inequalities and entanglement witnesses on dense
//! multi-qubit states, propagates Poissonian count errors into a significance
//! `S = V / E`, locates the noise level at which the Mermin and Ardehali
//! inequalities swap places, and improves a witness by adding a positive
//! operator so that a detected pure state becomes an eigenstate.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the type
//! aliases below fix the scalar to `f64`, with `*32` variants for `f32`.

// `!(x > 0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod improve;
pub mod inequality;
pub mod noise;
pub mod quantum;
pub mod scalar;
pub mod significance;

pub use error::{Error, Result};
pub use scalar::{Real, Tolerances};

pub type Matrix = quantum::DenseMatrix<f64>;
pub type State = quantum::PureState<f64>;
pub type Density = quantum::DensityMatrix<f64>;
pub type Observable = quantum::SingleQubitObservable<f64>;
pub type Inequality = inequality::BellInequality<f64>;
pub type Witness = inequality::Witness<f64>;
pub type Counts = significance::CountTable<f64>;
pub type Report = significance::SignificanceReport<f64>;

pub type Matrix32 = quantum::DenseMatrix<f32>;
pub type State32 = quantum::PureState<f32>;
pub type Density32 = quantum::DensityMatrix<f32>;
pub type Inequality32 = inequality::BellInequality<f32>;
