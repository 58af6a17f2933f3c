//! Centralized primal-dual solver for minimum-weight vertex cover.
//!
//! The dual variables `x[e]` form a fractional matching: `Σ_{e∋v} x[e] ≤
//! w(v)` at every vertex. Starting from the min-ratio initialization
//! `x[(u,v)] = min(w(u)/d(u), w(v)/d(v))`, every iteration freezes the
//! vertices whose incident weight reached a threshold in
//! `[1-4ε, 1-2ε] · w(v)`, then divides the weight of every still-active
//! edge by `1-ε`. The frozen vertices form the cover; the final `x` is a
//! dual certificate for its weight.

use thiserror::Error;

use crate::graph::{VertexId, WeightedGraph};
use crate::stream::{keyed_unit, tag};
use crate::{scalar_from_f64, Scalar};

/// Relative tolerance for floating-point feasibility checks: the growth
/// factor `(1/(1-ε))^t` accumulates rounding over up to a few hundred
/// iterations.
pub const FEASIBILITY_REL_TOL: f64 = 1e-9;

/// How the per-vertex, per-iteration freeze thresholds in
/// `[1-4ε, 1-2ε] · w(v)` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdPolicy {
    /// Deterministic midpoint `1 - 3ε`.
    FixedMidpoint,
    /// Independent uniform draws from a keyed stream; deterministic given
    /// the seed.
    UniformRandom { seed: u64 },
}

impl ThresholdPolicy {
    /// Threshold for vertex `v` at iteration `t`, as a fraction of `w(v)`.
    pub fn threshold<T: Scalar>(&self, epsilon: T, v: VertexId, t: u32) -> T {
        let four = scalar_from_f64::<T>(4.0);
        let two = scalar_from_f64::<T>(2.0);
        match *self {
            ThresholdPolicy::FixedMidpoint => {
                T::one() - scalar_from_f64::<T>(3.0) * epsilon
            }
            ThresholdPolicy::UniformRandom { seed } => {
                let u = keyed_unit(seed, &[tag::THRESHOLD, v as u64, t as u64]);
                let lo = T::one() - four * epsilon;
                lo + two * epsilon * scalar_from_f64::<T>(u)
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum CentralError {
    #[error("epsilon {0} outside (0, 0.5)")]
    BadEpsilon(f64),
    #[error("non-positive weight at vertex {0}")]
    NonPositiveWeight(VertexId),
    #[error("zero degree passed for non-isolated vertex {0}")]
    ZeroDegree(VertexId),
    #[error("dual constraint violated at vertex {vertex} in iteration {iteration}: incident {incident} > weight {weight}")]
    DualInfeasible {
        vertex: VertexId,
        iteration: u32,
        incident: f64,
        weight: f64,
    },
    #[error("did not terminate within {0} iterations; freeze or growth logic is broken")]
    MaxItersExceeded(u32),
}

/// Result of a centralized run.
#[derive(Debug, Clone)]
pub struct CentralResult<T> {
    /// Frozen vertices, ascending.
    pub cover: Vec<VertexId>,
    pub cover_weight: T,
    /// Value of the final fractional matching, `Σ_e x[e]`.
    pub matching_value: T,
    /// Number of executed iterations.
    pub iterations: u32,
    /// Iteration at which each vertex froze, if it did.
    pub freeze_iteration: Vec<Option<u32>>,
    /// Incident weight `Σ_{e∋v} x[e]` observed when `v` froze.
    pub y_at_freeze: Vec<Option<T>>,
    /// Final per-edge dual values.
    pub x: Vec<T>,
}

/// Iteration cap that the min-ratio initialization provably respects:
/// an edge surviving `log_{1/(1-ε)} Δ` growth steps would exceed the dual
/// constraint at its smaller-ratio endpoint.
pub fn iteration_bound(max_degree: usize, epsilon: f64) -> u32 {
    if max_degree <= 1 {
        return 1;
    }
    let steps = (max_degree as f64).ln() / (1.0 / (1.0 - epsilon)).ln();
    steps.ceil() as u32 + 1
}

/// Min-ratio initial fractional matching:
/// `x[(u,v)] = min(weights[u]/degrees[u], weights[v]/degrees[v])`.
///
/// The degrees are a parameter because callers may initialize a subset of a
/// larger graph, where the relevant degree is not the degree within the
/// subset.
pub fn init_edge_weights<T: Scalar>(
    graph: &WeightedGraph<T>,
    weights: &[T],
    degrees: &[usize],
) -> Result<Vec<T>, CentralError> {
    for (v, &w) in weights.iter().enumerate() {
        if !(w > T::zero()) {
            return Err(CentralError::NonPositiveWeight(v));
        }
    }
    for v in 0..graph.num_vertices() {
        if degrees[v] == 0 && graph.degree(v) > 0 {
            return Err(CentralError::ZeroDegree(v));
        }
    }
    Ok(graph
        .edges()
        .iter()
        .map(|&(u, v)| min_ratio(weights[u], degrees[u], weights[v], degrees[v]))
        .collect())
}

/// `min(wu/du, wv/dv)` — the shared initialization formula.
pub(crate) fn min_ratio<T: Scalar>(wu: T, du: usize, wv: T, dv: usize) -> T {
    let ru = wu / scalar_from_f64::<T>(du as f64);
    let rv = wv / scalar_from_f64::<T>(dv as f64);
    ru.min(rv)
}

pub fn run_centralized<T: Scalar>(
    graph: &WeightedGraph<T>,
    weights: &[T],
    epsilon: T,
    policy: &ThresholdPolicy,
    max_iters: u32,
) -> Result<CentralResult<T>, CentralError> {
    let eps = epsilon.to_f64().expect("epsilon fits in f64");
    if !(eps > 0.0 && eps < 0.5) {
        return Err(CentralError::BadEpsilon(eps));
    }
    let n = graph.num_vertices();
    let m = graph.num_edges();
    let degrees = graph.degrees();
    let mut x = init_edge_weights(graph, weights, &degrees)?;

    let mut vertex_frozen = vec![false; n];
    let mut edge_frozen = vec![false; m];
    let mut freeze_iteration = vec![None; n];
    let mut y_at_freeze = vec![None; n];
    let mut active_edges = m;
    let mut y = vec![T::zero(); n];
    let one_minus_eps = T::one() - epsilon;

    check_feasible(graph, weights, &x, 0)?;

    let mut t: u32 = 0;
    while active_edges > 0 {
        if t >= max_iters {
            return Err(CentralError::MaxItersExceeded(max_iters));
        }
        // All freeze tests of this iteration read the same x snapshot.
        for yv in y.iter_mut() {
            *yv = T::zero();
        }
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            y[u] += x[e];
            y[v] += x[e];
        }
        for v in 0..n {
            // Isolated vertices cover nothing and are never frozen.
            if vertex_frozen[v] || degrees[v] == 0 {
                continue;
            }
            if y[v] >= policy.threshold(epsilon, v, t) * weights[v] {
                vertex_frozen[v] = true;
                freeze_iteration[v] = Some(t);
                y_at_freeze[v] = Some(y[v]);
                for &(_, e) in graph.neighbors(v) {
                    if !edge_frozen[e] {
                        edge_frozen[e] = true;
                        active_edges -= 1;
                    }
                }
            }
        }
        for (e, frozen) in edge_frozen.iter().enumerate() {
            if !frozen {
                x[e] = x[e] / one_minus_eps;
            }
        }
        t += 1;
        check_feasible(graph, weights, &x, t)?;
    }

    let cover: Vec<VertexId> = (0..n).filter(|&v| vertex_frozen[v]).collect();
    let cover_weight = cover.iter().map(|&v| weights[v]).sum();
    let matching_value = x.iter().copied().sum();
    Ok(CentralResult {
        cover,
        cover_weight,
        matching_value,
        iterations: t,
        freeze_iteration,
        y_at_freeze,
        x,
    })
}

/// Verify `Σ_{e∋v} x[e] ≤ w(v)` for all `v`, up to [`FEASIBILITY_REL_TOL`].
fn check_feasible<T: Scalar>(
    graph: &WeightedGraph<T>,
    weights: &[T],
    x: &[T],
    iteration: u32,
) -> Result<(), CentralError> {
    let tol = scalar_from_f64::<T>(1.0 + FEASIBILITY_REL_TOL);
    let mut incident = vec![T::zero(); graph.num_vertices()];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        incident[u] += x[e];
        incident[v] += x[e];
    }
    for (v, &inc) in incident.iter().enumerate() {
        if inc > weights[v] * tol {
            return Err(CentralError::DualInfeasible {
                vertex: v,
                iteration,
                incident: inc.to_f64().unwrap_or(f64::NAN),
                weight: weights[v].to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(())
}
