//! Ground truth and certification: exact minimum-weight vertex cover on
//! small instances, cover and fractional-matching validators, and ratio
//! reports against the solver guarantees.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{VertexId, WeightedGraph};
use crate::Scalar;

/// Default relative tolerance for feasibility slack.
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-9;
/// Absolute slack added to ratio pass/fail comparisons so exactly-tight
/// instances do not fail on rounding.
pub const RATIO_ABS_SLACK: f64 = 1e-9;
/// Default cap on branch-and-bound nodes.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance too large for oracle: explored {explored} nodes (cap {cap})")]
    NodeCapExceeded { explored: u64, cap: u64 },
    #[error("negative edge value x[{edge}] = {value}")]
    NegativeEdgeValue { edge: usize, value: f64 },
}

/// Provably minimum-weight vertex cover.
#[derive(Debug, Clone)]
pub struct ExactResult<T> {
    pub opt_cover: Vec<VertexId>,
    pub opt_weight: T,
    pub nodes_explored: u64,
}

/// Exact minimum-weight vertex cover by branch and bound over edges.
///
/// At each node an uncovered edge `(u, v)` is picked and the search
/// branches on `u ∈ C` and `v ∈ C`; any cover contains one of the two.
/// Subtrees are pruned against the incumbent using a greedy-matching lower
/// bound: vertex-disjoint uncovered edges each force at least the lighter
/// endpoint's weight into any cover.
pub fn exact_mwvc<T: Scalar>(
    graph: &WeightedGraph<T>,
    node_cap: u64,
) -> Result<ExactResult<T>, OracleError> {
    let n = graph.num_vertices();
    let mut search = Search {
        graph,
        in_cover: vec![false; n],
        best_cover: vec![true; n],
        best_weight: graph.weights().iter().copied().sum(),
        nodes: 0,
        cap: node_cap,
    };
    if graph.num_edges() == 0 {
        return Ok(ExactResult {
            opt_cover: Vec::new(),
            opt_weight: T::zero(),
            nodes_explored: 0,
        });
    }
    search.recurse(T::zero())?;
    let opt_cover: Vec<VertexId> = (0..n).filter(|&v| search.best_cover[v]).collect();
    let opt_weight = opt_cover.iter().map(|&v| graph.weight(v)).sum();
    Ok(ExactResult {
        opt_cover,
        opt_weight,
        nodes_explored: search.nodes,
    })
}

struct Search<'g, T> {
    graph: &'g WeightedGraph<T>,
    in_cover: Vec<bool>,
    best_cover: Vec<bool>,
    best_weight: T,
    nodes: u64,
    cap: u64,
}

impl<T: Scalar> Search<'_, T> {
    fn recurse(&mut self, current: T) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(OracleError::NodeCapExceeded {
                explored: self.nodes,
                cap: self.cap,
            });
        }
        if current + self.matching_lower_bound() >= self.best_weight {
            return Ok(());
        }
        let Some((u, v)) = self.first_uncovered_edge() else {
            // complete cover, and the bound above ensures it improves
            self.best_weight = current;
            self.best_cover.copy_from_slice(&self.in_cover);
            return Ok(());
        };
        for pick in [u, v] {
            self.in_cover[pick] = true;
            self.recurse(current + self.graph.weight(pick))?;
            self.in_cover[pick] = false;
        }
        Ok(())
    }

    fn first_uncovered_edge(&self) -> Option<(VertexId, VertexId)> {
        self.graph
            .edges()
            .iter()
            .copied()
            .find(|&(u, v)| !self.in_cover[u] && !self.in_cover[v])
    }

    /// Greedy matching over uncovered edges; each matched edge contributes
    /// the lighter endpoint's weight.
    fn matching_lower_bound(&self) -> T {
        let mut used = vec![false; self.graph.num_vertices()];
        let mut bound = T::zero();
        for &(u, v) in self.graph.edges() {
            if self.in_cover[u] || self.in_cover[v] || used[u] || used[v] {
                continue;
            }
            used[u] = true;
            used[v] = true;
            bound += self.graph.weight(u).min(self.graph.weight(v));
        }
        bound
    }
}

/// `Ok(())` if `cover` touches every edge, otherwise the first uncovered
/// edge as a witness.
pub fn validate_cover<T: Scalar>(
    graph: &WeightedGraph<T>,
    cover: &[VertexId],
) -> Result<(), (VertexId, VertexId)> {
    let mut in_cover = vec![false; graph.num_vertices()];
    for &v in cover {
        in_cover[v] = true;
    }
    match graph
        .edges()
        .iter()
        .find(|&&(u, v)| !in_cover[u] && !in_cover[v])
    {
        None => Ok(()),
        Some(&witness) => Err(witness),
    }
}

/// Feasibility of per-edge values against the vertex weight budgets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Vertex with the smallest relative margin `(f·w(v) - Σx) / w(v)`.
    pub worst_vertex: Option<VertexId>,
    /// `w(v) - Σ_{e∋v} x[e]` at the worst vertex; negative means the plain
    /// budget is exceeded there.
    pub worst_slack: Option<f64>,
    pub slack_factor: f64,
    pub slack_tolerance_used: f64,
}

/// Check `Σ_{e∋v} x[e] ≤ slack_factor · w(v) · (1 + tolerance)` for all `v`.
///
/// `slack_factor = 1` is plain dual feasibility; larger factors support
/// relaxed certificates. Negative `x` entries are an error, not a report.
pub fn validate_fractional_matching<T: Scalar>(
    graph: &WeightedGraph<T>,
    weights: &[T],
    x: &[T],
    slack_factor: f64,
    tolerance: f64,
) -> Result<FeasibilityReport, OracleError> {
    for (e, &v) in x.iter().enumerate() {
        if v < T::zero() {
            return Err(OracleError::NegativeEdgeValue {
                edge: e,
                value: v.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let mut incident = vec![T::zero(); graph.num_vertices()];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        incident[u] += x[e];
        incident[v] += x[e];
    }
    let mut feasible = true;
    let mut worst: Option<(VertexId, f64)> = None;
    for v in 0..graph.num_vertices() {
        let w = weights[v].to_f64().expect("weight fits in f64");
        let inc = incident[v].to_f64().expect("incident sum fits in f64");
        if inc > slack_factor * w * (1.0 + tolerance) {
            feasible = false;
        }
        let margin = (slack_factor * w - inc) / w;
        if worst.map_or(true, |(_, m)| margin < m) {
            worst = Some((v, margin));
        }
    }
    let worst_vertex = worst.map(|(v, _)| v);
    let worst_slack = worst_vertex.map(|v| {
        weights[v].to_f64().unwrap() - incident[v].to_f64().unwrap()
    });
    Ok(FeasibilityReport {
        feasible,
        worst_vertex,
        worst_slack,
        slack_factor,
        slack_tolerance_used: tolerance,
    })
}

/// Which solver produced a result, selecting the applicable guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoKind {
    /// Centralized solver: bound `2 + 10ε`, certificate factor `1 - 4ε`.
    Central,
    /// Phase-based simulation: bound `2 + 30ε`, certificate factor `1 - 16ε`.
    Mpc,
}

impl AlgoKind {
    pub fn ratio_bound(self, epsilon: f64) -> f64 {
        match self {
            AlgoKind::Central => 2.0 + 10.0 * epsilon,
            AlgoKind::Mpc => 2.0 + 30.0 * epsilon,
        }
    }

    pub fn certificate_factor(self, epsilon: f64) -> f64 {
        match self {
            AlgoKind::Central => 1.0 - 4.0 * epsilon,
            AlgoKind::Mpc => 1.0 - 16.0 * epsilon,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioReport {
    pub ratio_vs_matching: Option<f64>,
    pub ratio_vs_opt: Option<f64>,
    /// Applicable approximation bound, `2 + 10ε` or `2 + 30ε`.
    pub bound: f64,
    /// `factor · cover_weight ≤ 2 · matching_value`, checkable without OPT.
    pub certificate_ok: bool,
    /// `cover_weight ≤ bound · opt_weight` when OPT is available.
    pub opt_bound_ok: Option<bool>,
    pub anomaly: Option<String>,
}

/// Compare a solver result against its guarantee.
///
/// Ratios are `None` (a vacuous pass) when their denominator is zero and
/// the cover is empty; a zero matching value with a nonempty cover is
/// flagged as an anomaly instead of dividing.
pub fn ratio_report<T: Scalar>(
    kind: AlgoKind,
    cover_weight: T,
    matching_value: T,
    opt_weight: Option<T>,
    epsilon: f64,
) -> RatioReport {
    let cover = cover_weight.to_f64().expect("cover weight fits in f64");
    let matching = matching_value.to_f64().expect("matching value fits in f64");
    let opt = opt_weight.map(|w| w.to_f64().expect("opt weight fits in f64"));
    let bound = kind.ratio_bound(epsilon);
    let factor = kind.certificate_factor(epsilon);

    let mut anomaly = None;
    let ratio_vs_matching = if matching > 0.0 {
        Some(cover / matching)
    } else {
        if cover > 0.0 {
            anomaly = Some(format!(
                "zero matching value with nonempty cover (weight {cover})"
            ));
        }
        None
    };
    let ratio_vs_opt = match opt {
        Some(o) if o > 0.0 => Some(cover / o),
        _ => None,
    };
    let certificate_ok = anomaly.is_none() && factor * cover <= 2.0 * matching + RATIO_ABS_SLACK;
    let opt_bound_ok = opt.map(|o| cover <= bound * o + RATIO_ABS_SLACK);
    RatioReport {
        ratio_vs_matching,
        ratio_vs_opt,
        bound,
        certificate_ok,
        opt_bound_ok,
        anomaly,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central::{init_edge_weights, iteration_bound, run_centralized, ThresholdPolicy};
    use crate::graph::{generate, GenSpec, GraphModel, WeightDist};

    fn graph(weights: Vec<f64>, edges: Vec<(usize, usize)>) -> WeightedGraph<f64> {
        WeightedGraph::new(weights, edges).unwrap()
    }

    /// Exhaustive 2^n reference solver, independent of the search tree.
    fn brute_force_mwvc(g: &WeightedGraph<f64>) -> f64 {
        let n = g.num_vertices();
        assert!(n <= 20);
        let mut best = f64::INFINITY;
        'subsets: for mask in 0u32..(1 << n) {
            for &(u, v) in g.edges() {
                if mask & (1 << u) == 0 && mask & (1 << v) == 0 {
                    continue 'subsets;
                }
            }
            let weight: f64 = (0..n).filter(|&v| mask & (1 << v) != 0).map(|v| g.weight(v)).sum();
            best = best.min(weight);
        }
        best
    }

    #[test]
    fn single_edge_picks_lighter_endpoint() {
        let g = graph(vec![2.0, 3.0], vec![(0, 1)]);
        let r = exact_mwvc(&g, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(r.opt_cover, vec![0]);
        assert_eq!(r.opt_weight, 2.0);
    }

    #[test]
    fn unit_triangle_needs_two_vertices() {
        let g = graph(vec![1.0; 3], vec![(0, 1), (0, 2), (1, 2)]);
        let r = exact_mwvc(&g, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(r.opt_weight, 2.0);
        assert_eq!(r.opt_cover.len(), 2);
    }

    #[test]
    fn heavy_center_still_beats_four_leaves() {
        let g = graph(
            vec![3.0, 1.0, 1.0, 1.0, 1.0],
            vec![(0, 1), (0, 2), (0, 3), (0, 4)],
        );
        let r = exact_mwvc(&g, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(r.opt_cover, vec![0]);
        assert_eq!(r.opt_weight, 3.0);
    }

    #[test]
    fn node_cap_errors_instead_of_answering_wrong() {
        let spec = GenSpec {
            model: GraphModel::Gnp {
                target_avg_degree: 5.0,
            },
            num_vertices: 30,
            weight_dist: WeightDist::Uniform { lo: 1.0, hi: 2.0 },
            seed: 5,
        };
        let g: WeightedGraph<f64> = generate(&spec).unwrap();
        let err = exact_mwvc(&g, 3).unwrap_err();
        assert!(matches!(err, OracleError::NodeCapExceeded { .. }));
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        for seed in 0..40u64 {
            let n = 4 + (seed as usize % 13); // up to 16
            let spec = GenSpec {
                model: GraphModel::Gnp {
                    target_avg_degree: (n as f64 / 2.0).max(1.0),
                },
                num_vertices: n,
                weight_dist: WeightDist::Uniform { lo: 0.2, hi: 3.0 },
                seed,
            };
            let g: WeightedGraph<f64> = generate(&spec).unwrap();
            let exact = exact_mwvc(&g, DEFAULT_NODE_CAP).unwrap();
            let brute = brute_force_mwvc(&g);
            assert!(
                (exact.opt_weight - brute).abs() <= 1e-9 * brute.max(1.0),
                "seed {seed}: bnb {} vs brute {brute}",
                exact.opt_weight
            );
            assert!(validate_cover(&g, &exact.opt_cover).is_ok());
        }
    }

    #[test]
    fn validate_cover_reports_witness() {
        let g = graph(vec![1.0, 1.0], vec![(0, 1)]);
        assert_eq!(validate_cover(&g, &[]), Err((0, 1)));
        assert!(validate_cover(&g, &[1]).is_ok());
        let empty = graph(vec![1.0], vec![]);
        assert!(validate_cover(&empty, &[]).is_ok());
        let tri = graph(vec![1.0; 3], vec![(0, 1), (0, 2), (1, 2)]);
        assert!(validate_cover(&tri, &[0, 1]).is_ok());
    }

    #[test]
    fn zero_matching_is_feasible_with_full_slack() {
        let g = graph(vec![2.0, 5.0], vec![(0, 1)]);
        let rep = validate_fractional_matching(&g, g.weights(), &[0.0], 1.0, 1e-9).unwrap();
        assert!(rep.feasible);
        assert_eq!(rep.worst_vertex, Some(0)); // smaller budget
        assert_eq!(rep.worst_slack, Some(2.0));
    }

    #[test]
    fn min_ratio_init_is_tight_but_feasible_on_triangle() {
        let g = graph(vec![3.0, 6.0, 9.0], vec![(0, 1), (0, 2), (1, 2)]);
        let x = init_edge_weights(&g, g.weights(), &g.degrees()).unwrap();
        let rep = validate_fractional_matching(&g, g.weights(), &x, 1.0, 1e-9).unwrap();
        assert!(rep.feasible);
        assert_eq!(rep.worst_vertex, Some(0));
        assert!(rep.worst_slack.unwrap().abs() < 1e-12);
    }

    #[test]
    fn overloaded_vertex_is_infeasible() {
        let g = graph(vec![1.0, 1.0], vec![(0, 1)]);
        let rep = validate_fractional_matching(&g, g.weights(), &[1.5], 1.0, 1e-9).unwrap();
        assert!(!rep.feasible);
        assert_eq!(rep.worst_slack, Some(-0.5));
    }

    #[test]
    fn negative_edge_value_is_an_error() {
        let g = graph(vec![1.0, 1.0], vec![(0, 1)]);
        let err =
            validate_fractional_matching(&g, g.weights(), &[-0.1], 1.0, 1e-9).unwrap_err();
        assert!(matches!(err, OracleError::NegativeEdgeValue { edge: 0, .. }));
    }

    #[test]
    fn ratio_report_single_edge_passes_central_bound() {
        // cover weight 2 with OPT 1: ratio 2 within 2 + 10·0.1 = 3.
        let rep = ratio_report(AlgoKind::Central, 2.0, 1.0, Some(1.0), 0.1);
        assert_eq!(rep.ratio_vs_opt, Some(2.0));
        assert_eq!(rep.bound, 3.0);
        assert_eq!(rep.opt_bound_ok, Some(true));
        assert!(rep.certificate_ok);
    }

    #[test]
    fn ratio_report_empty_run_is_vacuous_pass() {
        let rep = ratio_report::<f64>(AlgoKind::Mpc, 0.0, 0.0, None, 0.1);
        assert!(rep.certificate_ok);
        assert!(rep.ratio_vs_matching.is_none());
        assert!(rep.anomaly.is_none());
    }

    #[test]
    fn ratio_report_flags_zero_matching_anomaly() {
        let rep = ratio_report::<f64>(AlgoKind::Central, 3.0, 0.0, None, 0.1);
        assert!(rep.anomaly.is_some());
        assert!(!rep.certificate_ok);
    }

    #[test]
    fn feasible_matchings_never_exceed_opt() {
        // weak duality on a batch of solver-produced matchings
        for seed in 100..130u64 {
            let n = 6 + (seed as usize % 9);
            let spec = GenSpec {
                model: GraphModel::Gnp {
                    target_avg_degree: 3.0,
                },
                num_vertices: n,
                weight_dist: WeightDist::Exponential { mean: 2.0 },
                seed,
            };
            let g: WeightedGraph<f64> = generate(&spec).unwrap();
            let eps = 0.1;
            let r = run_centralized(
                &g,
                g.weights(),
                eps,
                &ThresholdPolicy::FixedMidpoint,
                iteration_bound(g.max_degree(), eps),
            )
            .unwrap();
            let opt = exact_mwvc(&g, DEFAULT_NODE_CAP).unwrap().opt_weight;
            assert!(
                r.matching_value <= opt * (1.0 + 1e-9),
                "seed {seed}: matching {} > opt {opt}",
                r.matching_value
            );
        }
    }
}
