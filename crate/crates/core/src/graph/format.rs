//! Line-oriented text format for weighted graphs.
//!
//! ```text
//! # comment lines start with '#', blank lines are ignored
//! p <n> <m>          header: vertex count, edge count
//! v <id> <weight>    one per vertex, weight a positive decimal
//! e <u> <v>          one per edge
//! ```
//!
//! Exactly `n` vertex lines and `m` edge lines must follow the header.
//! Vertex ids in a file may be arbitrary 64-bit integers; loading remaps
//! them to dense `0..n` in order of appearance and records the mapping.
//! Saving always writes dense ids and the canonical sorted edge list, so
//! save → load → save is byte-identical.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use super::{VertexId, WeightedGraph};
use crate::Scalar;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("missing 'p <n> <m>' header")]
    MissingHeader,
    #[error("malformed header at line {line}")]
    MalformedHeader { line: usize },
    #[error("malformed vertex line at line {line}")]
    BadVertexLine { line: usize },
    #[error("malformed edge line at line {line}")]
    BadEdgeLine { line: usize },
    #[error("unknown line type at line {line}")]
    UnknownLine { line: usize },
    #[error("non-positive weight at line {line}")]
    NonPositiveWeight { line: usize },
    #[error("duplicate vertex id {id} at line {line}")]
    DuplicateVertex { line: usize, id: u64 },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("duplicate edge at line {line}")]
    DuplicateEdge { line: usize },
    #[error("edge references undeclared vertex id {id} at line {line}")]
    DanglingVertex { line: usize, id: u64 },
    #[error("more vertex lines than declared at line {line}")]
    ExtraVertex { line: usize },
    #[error("more edge lines than declared at line {line}")]
    ExtraEdge { line: usize },
    #[error("header declared {expected_v} vertices and {expected_e} edges, found {got_v} and {got_e}")]
    CountMismatch {
        expected_v: usize,
        got_v: usize,
        expected_e: usize,
        got_e: usize,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A parsed graph plus the original file ids, indexed by dense id.
#[derive(Debug, Clone)]
pub struct LoadedGraph<T> {
    pub graph: WeightedGraph<T>,
    pub original_ids: Vec<u64>,
}

/// Parse a graph from a reader. See the module docs for the format.
pub fn load_graph<T: Scalar, R: BufRead>(reader: R) -> Result<LoadedGraph<T>, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut original_ids: Vec<u64> = Vec::new();
    let mut dense: HashMap<u64, VertexId> = HashMap::new();
    let mut weights: Vec<T> = Vec::new();
    // Raw edges with their line numbers; resolved after all lines are read
    // so vertex and edge lines may interleave.
    let mut raw_edges: Vec<(u64, u64, usize)> = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut tok = text.split_whitespace();
        let kind = tok.next().expect("non-empty line has a first token");
        match kind {
            "p" => {
                let (Some(n), Some(m), None) = (tok.next(), tok.next(), tok.next()) else {
                    return Err(ParseError::MalformedHeader { line: line_no });
                };
                if header.is_some() {
                    return Err(ParseError::MalformedHeader { line: line_no });
                }
                let n = n
                    .parse()
                    .map_err(|_| ParseError::MalformedHeader { line: line_no })?;
                let m = m
                    .parse()
                    .map_err(|_| ParseError::MalformedHeader { line: line_no })?;
                header = Some((n, m));
            }
            "v" => {
                let Some((n, _)) = header else {
                    return Err(ParseError::MissingHeader);
                };
                let (Some(id), Some(w), None) = (tok.next(), tok.next(), tok.next()) else {
                    return Err(ParseError::BadVertexLine { line: line_no });
                };
                let id: u64 = id
                    .parse()
                    .map_err(|_| ParseError::BadVertexLine { line: line_no })?;
                let w: f64 = w
                    .parse()
                    .map_err(|_| ParseError::BadVertexLine { line: line_no })?;
                if weights.len() == n {
                    return Err(ParseError::ExtraVertex { line: line_no });
                }
                let w = T::from(w).filter(|w| w.is_finite());
                let Some(w) = w.filter(|&w| w > T::zero()) else {
                    return Err(ParseError::NonPositiveWeight { line: line_no });
                };
                if dense.insert(id, weights.len()).is_some() {
                    return Err(ParseError::DuplicateVertex { line: line_no, id });
                }
                original_ids.push(id);
                weights.push(w);
            }
            "e" => {
                let Some((_, m)) = header else {
                    return Err(ParseError::MissingHeader);
                };
                let (Some(u), Some(v), None) = (tok.next(), tok.next(), tok.next()) else {
                    return Err(ParseError::BadEdgeLine { line: line_no });
                };
                let u: u64 = u
                    .parse()
                    .map_err(|_| ParseError::BadEdgeLine { line: line_no })?;
                let v: u64 = v
                    .parse()
                    .map_err(|_| ParseError::BadEdgeLine { line: line_no })?;
                if u == v {
                    return Err(ParseError::SelfLoop { line: line_no });
                }
                if raw_edges.len() == m {
                    return Err(ParseError::ExtraEdge { line: line_no });
                }
                raw_edges.push((u, v, line_no));
            }
            _ => return Err(ParseError::UnknownLine { line: line_no }),
        }
    }

    let Some((n, m)) = header else {
        return Err(ParseError::MissingHeader);
    };
    if weights.len() != n || raw_edges.len() != m {
        return Err(ParseError::CountMismatch {
            expected_v: n,
            got_v: weights.len(),
            expected_e: m,
            got_e: raw_edges.len(),
        });
    }

    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::with_capacity(m);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(m);
    for (u, v, line) in raw_edges {
        let &du = dense
            .get(&u)
            .ok_or(ParseError::DanglingVertex { line, id: u })?;
        let &dv = dense
            .get(&v)
            .ok_or(ParseError::DanglingVertex { line, id: v })?;
        let key = (du.min(dv), du.max(dv));
        if !seen.insert(key) {
            return Err(ParseError::DuplicateEdge { line });
        }
        edges.push(key);
    }

    let graph = WeightedGraph::new(weights, edges)
        .expect("all graph invariants checked during parsing");
    Ok(LoadedGraph {
        graph,
        original_ids,
    })
}

/// Write a graph in canonical form: dense ids, edges `u < v` sorted.
pub fn save_graph<T: Scalar, W: Write>(graph: &WeightedGraph<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "p {} {}", graph.num_vertices(), graph.num_edges())?;
    for v in 0..graph.num_vertices() {
        writeln!(
            out,
            "v {} {}",
            v,
            graph.weight(v).to_f64().expect("scalar fits in f64")
        )?;
    }
    for &(u, v) in graph.edges() {
        writeln!(out, "e {u} {v}")?;
    }
    Ok(())
}

pub fn load_graph_from_path<T: Scalar>(path: &Path) -> Result<LoadedGraph<T>, ParseError> {
    load_graph(BufReader::new(File::open(path)?))
}

pub fn save_graph_to_path<T: Scalar>(graph: &WeightedGraph<T>, path: &Path) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    save_graph(graph, &mut out)?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GenSpec, GraphModel, WeightDist};

    fn parse(text: &str) -> Result<LoadedGraph<f64>, ParseError> {
        load_graph(text.as_bytes())
    }

    #[test]
    fn parses_single_edge_file() {
        let g = parse("p 2 1\nv 0 1.0\nv 1 1.0\ne 0 1\n").unwrap();
        assert_eq!(g.graph.num_vertices(), 2);
        assert_eq!(g.graph.edges(), &[(0, 1)]);
        assert_eq!(g.graph.weights(), &[1.0, 1.0]);
        assert_eq!(g.original_ids, vec![0, 1]);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let g = parse("# a graph\n\np 2 1\n# vertices\nv 0 2.5\nv 1 1.0\ne 0 1\n").unwrap();
        assert_eq!(g.graph.weight(0), 2.5);
    }

    #[test]
    fn arbitrary_ids_are_remapped_densely() {
        let g = parse("p 3 2\nv 10 1.0\nv 7 2.0\nv 99 3.0\ne 10 99\ne 99 7\n").unwrap();
        assert_eq!(g.original_ids, vec![10, 7, 99]);
        // 10 -> 0, 7 -> 1, 99 -> 2
        assert_eq!(g.graph.edges(), &[(0, 2), (1, 2)]);
    }

    #[test]
    fn self_loop_is_rejected_with_line_number() {
        let err = parse("p 4 1\nv 0 1\nv 1 1\nv 2 1\nv 3 1\ne 3 3\n").unwrap_err();
        assert!(matches!(err, ParseError::SelfLoop { line: 6 }), "{err}");
    }

    #[test]
    fn nonpositive_weight_is_rejected() {
        let err = parse("p 2 1\nv 0 0.0\nv 1 1\ne 0 1\n").unwrap_err();
        assert!(matches!(err, ParseError::NonPositiveWeight { line: 2 }));
    }

    #[test]
    fn duplicate_edge_is_rejected() {
        let err = parse("p 2 2\nv 0 1\nv 1 1\ne 0 1\ne 1 0\n").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateEdge { line: 5 }));
    }

    #[test]
    fn dangling_vertex_id_is_rejected() {
        let err = parse("p 2 1\nv 0 1\nv 1 1\ne 0 5\n").unwrap_err();
        assert!(matches!(err, ParseError::DanglingVertex { line: 4, id: 5 }));
    }

    #[test]
    fn count_mismatch_is_rejected() {
        let err = parse("p 3 1\nv 0 1\nv 1 1\ne 0 1\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::CountMismatch {
                expected_v: 3,
                got_v: 2,
                ..
            }
        ));
    }

    #[test]
    fn malformed_header_is_rejected() {
        assert!(matches!(
            parse("p 2\n").unwrap_err(),
            ParseError::MalformedHeader { line: 1 }
        ));
        assert!(matches!(
            parse("v 0 1\n").unwrap_err(),
            ParseError::MissingHeader
        ));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let spec = GenSpec {
            model: GraphModel::Gnp {
                target_avg_degree: 6.0,
            },
            num_vertices: 64,
            weight_dist: WeightDist::Uniform { lo: 0.5, hi: 2.0 },
            seed: 11,
        };
        let g: WeightedGraph<f64> = generate_for_test(&spec);
        let mut first = Vec::new();
        save_graph(&g, &mut first).unwrap();
        let reloaded = load_graph::<f64, _>(first.as_slice()).unwrap().graph;
        assert_eq!(reloaded, g);
        let mut second = Vec::new();
        save_graph(&reloaded, &mut second).unwrap();
        assert_eq!(first, second);
    }

    fn generate_for_test(spec: &GenSpec) -> WeightedGraph<f64> {
        crate::graph::generate(spec).unwrap()
    }
}
