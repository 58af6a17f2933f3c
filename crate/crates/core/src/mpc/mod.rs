//! Phase-based simulation of the primal-dual cover algorithm in the MPC
//! model.
//!
//! While the residual average degree is above a stop threshold, each phase:
//!
//! 1. splits the nonfrozen vertices into high-degree and inactive classes,
//! 2. partitions the high-degree vertices uniformly at random across
//!    `max(1, ⌊√d⌋)` machines,
//! 3. lets every machine simulate `I` freeze/grow iterations on its induced
//!    subgraph, judging freezes with a biased incident-weight estimator,
//! 4. finalizes edge weights from the earliest endpoint freeze, applies the
//!    post-phase saturation freezes, zeroes cross edges to newly frozen
//!    vertices, and recomputes residual degrees.
//!
//! Once the loop exits, the centralized solver finishes the residual
//! instance on one machine. Frozen vertices across all phases form the
//! cover; the finalized edge weights form its dual certificate.
//!
//! All randomness is drawn from counter-based streams keyed by
//! `(seed, phase, vertex[, iteration])`, so a run is a deterministic
//! function of `(graph, config)` regardless of scheduling.

mod check;
mod phase;

pub use check::{check_sparsification, OutDegreeSample, SparsificationCheck};
pub use phase::{
    build_machines, compute_residual_weights, finalize_edge_weights, local_simulate,
    partition_vertices, post_phase_freeze, prepare_phase, residual_avg_degree, select_high,
    MachineSubgraph, PhaseOutcome, PhaseSetup, ThresholdStream,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::central::{iteration_bound, run_centralized, CentralError, ThresholdPolicy};
use crate::graph::{VertexId, WeightedGraph};
use crate::{scalar_from_f64, Scalar};

/// Constant preset bundles. The schedule constants themselves live in
/// [`MpcConfig`]; the preset only records which bundle was requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// The analyzed constants: high-degree exponent 0.95, iteration
    /// coefficient `1/(10 ln 15)`, stop threshold `(ln n)^30`. At desk
    /// scale the stop threshold exceeds any feasible degree, so the phase
    /// loop is a no-op and the centralized solver does all the work.
    Paper,
    /// Desk-scale constants: exponent 0.75, iteration coefficient
    /// `1/(2 ln(1/(1-ε)))` (so one phase shrinks weights by about `√m`),
    /// stop threshold 32.
    Practical,
}

/// When the phase loop hands off to the centralized solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StopRule {
    /// Stop once the residual average degree is at most this value.
    Fixed(f64),
    /// Stop below `max(1, (ln n)^30)`.
    LogPow30,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpcConfig<T> {
    pub epsilon: T,
    pub preset: Preset,
    /// High-degree exponent α: a nonfrozen vertex is high when
    /// `d(v) ≥ d^α`.
    pub high_exponent: f64,
    /// Iteration coefficient θ: each phase runs `I = max(1, ⌊θ ln m⌋)`
    /// local iterations.
    pub iter_coeff: f64,
    /// Estimator bias `β · m^{-bias_exponent} · bias_growth^t · w'(v)`.
    pub bias_base: f64,
    pub bias_growth: f64,
    pub bias_exponent: f64,
    pub stop_degree: StopRule,
    /// Per-machine memory cap in words; `None` means `16·n`.
    pub mem_cap_words: Option<usize>,
    /// When false the cap is measured and reported but not enforced.
    pub enforce_mem: bool,
    pub phase_cap: u32,
    pub seed: u64,
}

impl<T: Scalar> MpcConfig<T> {
    pub fn practical(epsilon: T, seed: u64) -> Self {
        let eps = epsilon.to_f64().expect("epsilon fits in f64");
        Self {
            epsilon,
            preset: Preset::Practical,
            high_exponent: 0.75,
            iter_coeff: 1.0 / (2.0 * (1.0 / (1.0 - eps)).ln()),
            bias_base: 2.0,
            bias_growth: 15.0,
            bias_exponent: 0.2,
            stop_degree: StopRule::Fixed(32.0),
            mem_cap_words: None,
            enforce_mem: false,
            phase_cap: 200,
            seed,
        }
    }

    pub fn paper(epsilon: T, seed: u64) -> Self {
        Self {
            epsilon,
            preset: Preset::Paper,
            high_exponent: 0.95,
            iter_coeff: 1.0 / (10.0 * 15f64.ln()),
            bias_base: 2.0,
            bias_growth: 15.0,
            bias_exponent: 0.2,
            stop_degree: StopRule::LogPow30,
            mem_cap_words: None,
            enforce_mem: false,
            phase_cap: 200,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), MpcError> {
        let eps = self.epsilon.to_f64().expect("epsilon fits in f64");
        let bad = |what: &str| Err(MpcError::BadConfig(what.to_string()));
        if !(eps > 0.0 && eps < 0.5) {
            return bad("epsilon must lie in (0, 0.5)");
        }
        if !(self.high_exponent > 0.0 && self.high_exponent <= 1.0) {
            return bad("high_exponent must lie in (0, 1]");
        }
        if !(self.iter_coeff > 0.0 && self.iter_coeff.is_finite()) {
            return bad("iter_coeff must be positive");
        }
        if !(self.bias_base >= 0.0 && self.bias_base.is_finite()) {
            return bad("bias_base must be nonnegative");
        }
        if !(self.bias_growth >= 1.0 && self.bias_growth.is_finite()) {
            return bad("bias_growth must be at least 1");
        }
        if !(self.bias_exponent >= 0.0 && self.bias_exponent.is_finite()) {
            return bad("bias_exponent must be nonnegative");
        }
        if let StopRule::Fixed(t) = self.stop_degree {
            if !(t >= 1.0) {
                return bad("stop_degree must be at least 1");
            }
        }
        if self.phase_cap == 0 {
            return bad("phase_cap must be at least 1");
        }
        Ok(())
    }

    pub fn stop_threshold(&self, num_vertices: usize) -> f64 {
        match self.stop_degree {
            StopRule::Fixed(t) => t,
            StopRule::LogPow30 => (num_vertices.max(1) as f64).ln().powi(30).max(1.0),
        }
    }

    /// Machines per phase: `max(1, ⌊√d⌋)`.
    pub fn machine_count(avg_degree: f64) -> usize {
        (avg_degree.max(0.0).sqrt().floor() as usize).max(1)
    }

    /// Local iterations per phase: `max(1, ⌊θ ln m⌋)`.
    pub fn iteration_count(&self, machines: usize) -> u32 {
        ((self.iter_coeff * (machines as f64).ln()).floor() as u32).max(1)
    }

    /// Estimator bias as a multiple of `w'(v)`.
    pub fn bias_factor(&self, machines: usize, t: u32) -> f64 {
        self.bias_base
            * (machines as f64).powf(-self.bias_exponent)
            * self.bias_growth.powi(t as i32)
    }

    pub fn mem_cap(&self, num_vertices: usize) -> usize {
        self.mem_cap_words.unwrap_or(16 * num_vertices)
    }
}

#[derive(Debug, Error)]
pub enum MpcError {
    #[error("invalid config: {0}")]
    BadConfig(String),
    #[error("non-positive residual weight {residual} at nonfrozen vertex {vertex}; freezing logic is broken")]
    NonPositiveResidual { vertex: VertexId, residual: f64 },
    #[error("no progress after {cap} phases (residual average degree {avg_degree})")]
    PhaseCapExceeded { cap: u32, avg_degree: f64 },
    #[error("machine {machine} needs {words} words in phase {phase} (cap {cap})")]
    MemoryCapExceeded {
        phase: u32,
        machine: usize,
        words: usize,
        cap: usize,
    },
    #[error("final centralized phase failed: {0}")]
    Central(#[from] CentralError),
}

/// Per-phase vertex classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    High,
    Inactive,
    Frozen,
}

/// Mutable state threaded through the phases.
#[derive(Debug, Clone)]
pub struct MpcState<T> {
    pub vertex_frozen: Vec<bool>,
    pub class: Vec<VertexClass>,
    pub edge_frozen: Vec<bool>,
    /// Finalized edge weights; meaningful once the edge is frozen, and
    /// never changed afterwards.
    pub x: Vec<T>,
    /// `Σ x[e]` over frozen edges incident to each vertex.
    pub frozen_incident: Vec<T>,
    /// Number of nonfrozen neighbors of each nonfrozen vertex.
    pub residual_degree: Vec<usize>,
    pub phase: u32,
}

impl<T: Scalar> MpcState<T> {
    pub fn new(graph: &WeightedGraph<T>) -> Self {
        Self {
            vertex_frozen: vec![false; graph.num_vertices()],
            class: vec![VertexClass::Inactive; graph.num_vertices()],
            edge_frozen: vec![false; graph.num_edges()],
            x: vec![T::zero(); graph.num_edges()],
            frozen_incident: vec![T::zero(); graph.num_vertices()],
            residual_degree: graph.degrees(),
            phase: 0,
        }
    }
}

/// Telemetry for one phase.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub phase: u32,
    /// Residual average degree `d` at phase start (summed over nonfrozen
    /// vertices, divided by the total vertex count).
    pub avg_residual_degree: f64,
    pub machines: usize,
    pub iterations: u32,
    pub high_count: usize,
    pub inactive_count: usize,
    pub per_machine_edges: Vec<usize>,
    pub per_machine_words: Vec<usize>,
    pub frozen_by_estimator: usize,
    pub frozen_by_saturation: usize,
    pub zeroed_cross_edges: usize,
    pub nonfrozen_edges_after: usize,
    /// Deterministic sparsification bound `n·d·(1-ε)^I + n·d^α`.
    pub sparsification_bound: f64,
    pub out_degree_check: bool,
    pub edge_bound_check: bool,
}

/// Validity and near-tightness certificate for a finished run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunCertificate {
    pub cover_valid: bool,
    pub uncovered_edge: Option<(usize, usize)>,
    /// Expected lower bound on `Σ_{e∋v} x[e] / w(v)` over cover vertices.
    pub saturation_factor: f64,
    pub saturation_violations: usize,
    pub min_saturation_ratio: Option<f64>,
    /// Expected upper bound on `Σ_{e∋v} x[e] / w(v)` over all vertices.
    pub feasibility_factor: f64,
    pub feasibility_violations: usize,
    pub max_incident_ratio: Option<f64>,
    /// `(1-16ε) · cover_weight ≤ 2 · matching_value`.
    pub ratio_certificate_ok: bool,
}

#[derive(Debug, Clone)]
pub struct MpcResult<T> {
    /// Frozen vertices, ascending.
    pub cover: Vec<VertexId>,
    pub cover_weight: T,
    /// `Σ_e x[e]` over all finalized edge weights, including the final
    /// centralized phase.
    pub matching_value: T,
    pub phases: u32,
    /// Communication rounds charged: 4 per phase plus 1 for the final
    /// centralized phase.
    pub mpc_rounds: u32,
    pub phase_records: Vec<PhaseRecord>,
    pub certificate: RunCertificate,
    /// Finalized per-edge dual values.
    pub x: Vec<T>,
    /// Iterations used by the final centralized phase.
    pub central_iterations: u32,
}

pub fn run_mpc<T: Scalar>(
    graph: &WeightedGraph<T>,
    config: &MpcConfig<T>,
) -> Result<MpcResult<T>, MpcError> {
    config.validate()?;
    let n = graph.num_vertices();
    let stop = config.stop_threshold(n);
    let mut state = MpcState::new(graph);
    let mut records: Vec<PhaseRecord> = Vec::new();

    loop {
        let d = residual_avg_degree(&state);
        if d <= stop {
            break;
        }
        if records.len() as u32 >= config.phase_cap {
            return Err(MpcError::PhaseCapExceeded {
                cap: config.phase_cap,
                avg_degree: d,
            });
        }
        let record = run_phase(graph, &mut state, config, d)?;
        records.push(record);
        state.phase += 1;
    }

    // Final phase: the residual instance fits one machine; solve it with
    // the centralized algorithm on residual weights.
    let keep: Vec<bool> = state.vertex_frozen.iter().map(|&f| !f).collect();
    let (sub, old_ids) = graph.induced_subgraph(&keep);
    let residual_weights: Vec<T> = old_ids
        .iter()
        .map(|&v| graph.weight(v) - state.frozen_incident[v])
        .collect();
    for (i, &w) in residual_weights.iter().enumerate() {
        if !(w > T::zero()) {
            return Err(MpcError::NonPositiveResidual {
                vertex: old_ids[i],
                residual: w.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let eps = config.epsilon.to_f64().expect("epsilon fits in f64");
    let central = run_centralized(
        &sub,
        &residual_weights,
        config.epsilon,
        &ThresholdPolicy::FixedMidpoint,
        iteration_bound(sub.max_degree(), eps),
    )?;
    for &v in &central.cover {
        state.vertex_frozen[old_ids[v]] = true;
        state.class[old_ids[v]] = VertexClass::Frozen;
    }
    // The kept edges of the global edge list appear in the same canonical
    // order as the subgraph's own edge list.
    let mut sub_edge = 0usize;
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if keep[u] && keep[v] {
            debug_assert!(!state.edge_frozen[e]);
            state.edge_frozen[e] = true;
            state.x[e] = central.x[sub_edge];
            sub_edge += 1;
        }
    }
    debug_assert_eq!(sub_edge, sub.num_edges());
    debug_assert!(state.edge_frozen.iter().all(|&f| f));

    let cover: Vec<VertexId> = (0..n).filter(|&v| state.vertex_frozen[v]).collect();
    let cover_weight = cover.iter().map(|&v| graph.weight(v)).sum();
    let matching_value = state.x.iter().copied().sum();
    let phases = records.len() as u32;
    let certificate = build_certificate(graph, &cover, &state.x, cover_weight, matching_value, eps);
    Ok(MpcResult {
        cover,
        cover_weight,
        matching_value,
        phases,
        mpc_rounds: 4 * phases + 1,
        phase_records: records,
        certificate,
        x: state.x,
        central_iterations: central.iterations,
    })
}

/// One pass of the phase loop; mutates `state` and returns its telemetry.
fn run_phase<T: Scalar>(
    graph: &WeightedGraph<T>,
    state: &mut MpcState<T>,
    config: &MpcConfig<T>,
    d: f64,
) -> Result<PhaseRecord, MpcError> {
    let setup = prepare_phase(graph, state, config, d)?;
    let assignment = partition_vertices(&setup.high, setup.machines, config.seed, state.phase);
    let machines = build_machines(graph, &setup, &assignment);

    let per_machine_edges: Vec<usize> = machines.iter().map(|m| m.edges.len()).collect();
    let per_machine_words: Vec<usize> = machines
        .iter()
        .map(|m| 2 * m.edges.len() + 2 * m.vertices.len())
        .collect();
    if config.enforce_mem {
        let cap = config.mem_cap(graph.num_vertices());
        if let Some((machine, &words)) = per_machine_words
            .iter()
            .enumerate()
            .find(|&(_, &w)| w > cap)
        {
            return Err(MpcError::MemoryCapExceeded {
                phase: state.phase,
                machine,
                words,
                cap,
            });
        }
    }

    let thresholds = ThresholdStream {
        seed: config.seed,
        phase: state.phase,
    };
    let local: Vec<Vec<Option<u32>>> = machines
        .par_iter()
        .map(|sub| {
            local_simulate(
                sub,
                setup.iterations,
                config.epsilon,
                setup.machines,
                config,
                &thresholds,
            )
        })
        .collect();
    let mut freeze_iter: Vec<Option<u32>> = vec![None; graph.num_vertices()];
    for (sub, result) in machines.iter().zip(&local) {
        for (i, &it) in result.iter().enumerate() {
            freeze_iter[sub.vertices[i]] = it;
        }
    }

    let x_phase = finalize_edge_weights(graph, &setup, &freeze_iter, config.epsilon);
    let outcome = post_phase_freeze(graph, state, &setup, &x_phase, &freeze_iter)?;
    let check = check_sparsification(graph, state, &setup, config.high_exponent);

    Ok(PhaseRecord {
        phase: setup.phase,
        avg_residual_degree: d,
        machines: setup.machines,
        iterations: setup.iterations,
        high_count: setup.high.len(),
        inactive_count: setup.inactive.len(),
        per_machine_edges,
        per_machine_words,
        frozen_by_estimator: outcome.frozen_by_estimator,
        frozen_by_saturation: outcome.frozen_by_saturation,
        zeroed_cross_edges: outcome.zeroed_cross_edges,
        nonfrozen_edges_after: check.nonfrozen_edges,
        sparsification_bound: check.edge_bound,
        out_degree_check: check.out_degree_ok,
        edge_bound_check: check.edge_bound_ok,
    })
}

fn build_certificate<T: Scalar>(
    graph: &WeightedGraph<T>,
    cover: &[VertexId],
    x: &[T],
    cover_weight: T,
    matching_value: T,
    epsilon: f64,
) -> RunCertificate {
    let n = graph.num_vertices();
    let mut in_cover = vec![false; n];
    for &v in cover {
        in_cover[v] = true;
    }
    let uncovered_edge = graph
        .edges()
        .iter()
        .find(|&&(u, v)| !in_cover[u] && !in_cover[v])
        .copied();

    let mut incident = vec![T::zero(); n];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        incident[u] += x[e];
        incident[v] += x[e];
    }
    let saturation_factor = 1.0 - 16.0 * epsilon;
    let feasibility_factor = 1.0 + 6.0 * epsilon;
    let rel = 1e-9;

    let mut saturation_violations = 0;
    let mut min_saturation_ratio: Option<f64> = None;
    for &v in cover {
        let ratio = (incident[v] / graph.weight(v))
            .to_f64()
            .expect("ratio fits in f64");
        if ratio < saturation_factor * (1.0 - rel) - rel {
            saturation_violations += 1;
        }
        min_saturation_ratio = Some(min_saturation_ratio.map_or(ratio, |r: f64| r.min(ratio)));
    }
    let mut feasibility_violations = 0;
    let mut max_incident_ratio: Option<f64> = None;
    for v in 0..n {
        let ratio = (incident[v] / graph.weight(v))
            .to_f64()
            .expect("ratio fits in f64");
        if ratio > feasibility_factor * (1.0 + rel) {
            feasibility_violations += 1;
        }
        max_incident_ratio = Some(max_incident_ratio.map_or(ratio, |r: f64| r.max(ratio)));
    }
    let cover_w = cover_weight.to_f64().expect("cover weight fits in f64");
    let matching = matching_value.to_f64().expect("matching value fits in f64");
    let ratio_certificate_ok =
        saturation_factor * cover_w <= 2.0 * matching + crate::oracle::RATIO_ABS_SLACK;

    RunCertificate {
        cover_valid: uncovered_edge.is_none(),
        uncovered_edge,
        saturation_factor,
        saturation_violations,
        min_saturation_ratio,
        feasibility_factor,
        feasibility_violations,
        max_incident_ratio,
        ratio_certificate_ok,
    }
}
