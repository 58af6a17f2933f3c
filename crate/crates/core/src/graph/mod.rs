//! Vertex-weighted undirected graphs: representation, deterministic
//! generators, and text-format I/O.

mod format;
mod gen;

pub use format::{load_graph, load_graph_from_path, save_graph, save_graph_to_path, LoadedGraph, ParseError};
pub use gen::{generate, GenError, GenSpec, GraphModel, WeightDist};

use thiserror::Error;

use crate::Scalar;

/// Dense vertex identifier in `0..num_vertices`.
pub type VertexId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex id {id} out of range (graph has {num_vertices} vertices)")]
    VertexOutOfRange { id: VertexId, num_vertices: usize },
    #[error("non-positive weight at vertex {0}")]
    NonPositiveWeight(VertexId),
}

/// Immutable vertex-weighted undirected graph.
///
/// Vertices are dense ids `0..n`. Edges are stored canonically: each pair is
/// normalized to `u < v` and the edge list is sorted, so two graphs with the
/// same edge set compare equal and serialize identically. Adjacency is CSR:
/// `neighbors(v)` yields `(neighbor, edge index)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T> {
    weights: Vec<T>,
    edges: Vec<(VertexId, VertexId)>,
    adj_offsets: Vec<usize>,
    adj: Vec<(VertexId, usize)>,
}

impl<T: Scalar> WeightedGraph<T> {
    /// Build a graph from per-vertex weights and an edge list.
    ///
    /// Edges may arrive in any order and orientation; they are normalized to
    /// `u < v` and sorted. Self-loops, duplicate edges (in either
    /// orientation), out-of-range endpoints, and non-positive weights are
    /// rejected.
    pub fn new(
        weights: Vec<T>,
        mut edges: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let n = weights.len();
        for (v, &w) in weights.iter().enumerate() {
            if !(w > T::zero()) {
                return Err(GraphError::NonPositiveWeight(v));
            }
        }
        for e in edges.iter_mut() {
            if e.0 == e.1 {
                return Err(GraphError::SelfLoop(e.0));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.1 >= n {
                return Err(GraphError::VertexOutOfRange {
                    id: e.1,
                    num_vertices: n,
                });
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut adj_offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        adj_offsets.push(0);
        for d in &degree {
            acc += d;
            adj_offsets.push(acc);
        }
        let mut cursor = adj_offsets.clone();
        let mut adj = vec![(0, 0); 2 * edges.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[cursor[u]] = (v, e);
            cursor[u] += 1;
            adj[cursor[v]] = (u, e);
            cursor[v] += 1;
        }

        Ok(Self {
            weights,
            edges,
            adj_offsets,
            adj,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, v: VertexId) -> T {
        self.weights[v]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Canonical edge list: `u < v` within each pair, sorted ascending.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj_offsets[v + 1] - self.adj_offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_vertices()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Neighbors of `v` as `(neighbor, edge index)` pairs.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, usize)] {
        &self.adj[self.adj_offsets[v]..self.adj_offsets[v + 1]]
    }

    /// Sum of all incident values `x[e]` at `v`.
    pub fn incident_sum(&self, v: VertexId, x: &[T]) -> T {
        self.neighbors(v).iter().map(|&(_, e)| x[e]).sum()
    }

    /// Subgraph induced by `keep[v] == true`, with vertices renumbered
    /// densely. Returns the subgraph and the map from new to old ids.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (WeightedGraph<T>, Vec<VertexId>) {
        let old_ids: Vec<VertexId> = (0..self.num_vertices()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.num_vertices()];
        for (new, &old) in old_ids.iter().enumerate() {
            new_id[old] = new;
        }
        let weights = old_ids.iter().map(|&v| self.weights[v]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        let sub = WeightedGraph::new(weights, edges)
            .expect("induced subgraph of a valid graph is valid");
        (sub, old_ids)
    }
}
