//! Primal-dual approximation of minimum-weight vertex cover, together with a
//! desk-scale simulator of its phase-based execution in the massively
//! parallel computation (MPC) model.
//!
//! The crate is organized around four subsystems:
//!
//! * [`graph`] — vertex-weighted undirected graphs, deterministic generators,
//!   and a line-oriented text format.
//! * [`central`] — the centralized primal-dual solver: grow a fractional
//!   matching, freeze vertices whose dual constraint becomes near-tight, and
//!   return the frozen vertices as a cover.
//! * [`mpc`] — the phase-based simulation: random vertex partitioning across
//!   machines, locally simulated iterations with a biased incident-weight
//!   estimator, edge-weight finalization, and per-phase progress checks.
//! * [`oracle`] — ground truth and certification: exact branch-and-bound
//!   cover, cover/matching validators, and ratio reports.
//!
//! All numeric code is generic over the scalar type via [`Scalar`]; the
//! `*64` aliases below pin the common `f64` instantiations.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, NumAssign};

pub mod central;
pub mod graph;
pub mod mpc;
pub mod oracle;
pub mod stream;

/// Scalar type the solvers operate on. Implemented by `f32` and `f64`.
pub trait Scalar:
    Float + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + NumAssign + Sum<T> + Debug + Display + Send + Sync + 'static
{
}

/// Convert from `f64`, panicking on values unrepresentable in `T`.
pub(crate) fn scalar_from_f64<T: Scalar>(x: f64) -> T {
    T::from(x).expect("value not representable in scalar type")
}

pub use central::{run_centralized, CentralResult, ThresholdPolicy};
pub use graph::{GenSpec, WeightedGraph};
pub use mpc::{run_mpc, MpcConfig, MpcResult};
pub use oracle::{exact_mwvc, ExactResult};

pub type Graph64 = graph::WeightedGraph<f64>;
pub type Graph32 = graph::WeightedGraph<f32>;
pub type CentralResult64 = central::CentralResult<f64>;
pub type MpcConfig64 = mpc::MpcConfig<f64>;
pub type MpcResult64 = mpc::MpcResult<f64>;
pub type ExactResult64 = oracle::ExactResult<f64>;
