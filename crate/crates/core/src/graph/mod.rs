//! Graphs with directed-edge indexing.
//!
//! Undirected edge `k`, stored as the pair `(u, v)`, owns the directed edges
//! `2k` (u -> v) and `2k + 1` (v -> u), so reversal is `e ^ 1`. A loop
//! contributes two directed edges that are reversals of each other.

mod decoration;
pub mod families;
pub mod io;

use std::collections::{HashSet, VecDeque};
use std::hash::{DefaultHasher, Hash, Hasher};
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use decoration::{MagneticDecoration, WeightDecoration};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphMode {
    Simple,
    Multigraph,
}

impl std::fmt::Display for GraphMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GraphMode::Simple => "simple",
            GraphMode::Multigraph => "multigraph",
        })
    }
}

impl std::str::FromStr for GraphMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(GraphMode::Simple),
            "multigraph" | "multi" => Ok(GraphMode::Multigraph),
            other => Err(Error::InvalidParameter(format!("unknown graph mode {other:?}"))),
        }
    }
}

/// Reversal of a directed edge index.
#[inline]
pub fn reverse(e: usize) -> usize {
    e ^ 1
}

/// A finite graph, possibly irregular. Irregular graphs are only needed by
/// the general determinant identity checks; everything else works with
/// [`RegularGraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    mode: GraphMode,
    degrees: Vec<usize>,
    outgoing: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, mode: GraphMode) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        for &(u, v) in &edges {
            for index in [u, v] {
                if index >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        index,
                        vertex_count,
                    });
                }
            }
        }
        if mode == GraphMode::Simple {
            let mut seen = HashSet::with_capacity(edges.len());
            for &(u, v) in &edges {
                if u == v || !seen.insert((u.min(v), u.max(v))) {
                    return Err(Error::IllegalSimple(u, v));
                }
            }
        }

        let mut degrees = vec![0; vertex_count];
        let mut outgoing = vec![Vec::new(); vertex_count];
        for (k, &(u, v)) in edges.iter().enumerate() {
            degrees[u] += 1;
            degrees[v] += 1;
            outgoing[u].push(2 * k);
            outgoing[v].push(2 * k + 1);
        }
        Ok(Graph {
            vertex_count,
            edges,
            mode,
            degrees,
            outgoing,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of undirected edges `E`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of directed edges `2E`.
    pub fn directed_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    #[inline]
    pub fn origin(&self, e: usize) -> usize {
        let (u, v) = self.edges[e >> 1];
        if e & 1 == 0 {
            u
        } else {
            v
        }
    }

    #[inline]
    pub fn terminus(&self, e: usize) -> usize {
        self.origin(reverse(e))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Directed edges leaving `v`, in edge-index order.
    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    /// Directed edges that may follow `e` in a walk (origin equals `t(e)`).
    pub fn successors(&self, e: usize) -> &[usize] {
        &self.outgoing[self.terminus(e)]
    }

    pub fn is_connected(&self) -> bool {
        self.component_sizes().len() == 1
    }

    fn component_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count];
        let mut sizes = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut size = 0;
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &e in &self.outgoing[v] {
                    let w = self.terminus(e);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }

    /// True iff the vertices admit a proper 2-colouring. Loops make a graph
    /// non-bipartite.
    pub fn is_bipartite(&self) -> bool {
        let mut colour: Vec<Option<bool>> = vec![None; self.vertex_count];
        for start in 0..self.vertex_count {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].expect("queued vertices are coloured");
                for &e in &self.outgoing[v] {
                    let w = self.terminus(e);
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// The common degree, if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees[0];
        self.degrees.iter().all(|&x| x == d).then_some(d)
    }

    /// Identifies the edge list; decorations remember it so they cannot be
    /// applied to a different graph by accident.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.vertex_count.hash(&mut h);
        self.edges.hash(&mut h);
        h.finish()
    }
}

/// A validated d-regular graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularGraph {
    graph: Graph,
    degree: usize,
}

impl RegularGraph {
    pub fn new(
        vertex_count: usize,
        degree: usize,
        edges: Vec<(usize, usize)>,
        mode: GraphMode,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        if (degree * vertex_count) % 2 == 1 {
            return Err(Error::OddProduct {
                vertex_count,
                degree,
            });
        }
        let min_degree = match mode {
            GraphMode::Simple => 3,
            GraphMode::Multigraph => 1,
        };
        if degree < min_degree {
            return Err(Error::DegreeTooSmall(degree));
        }
        let graph = Graph::new(vertex_count, edges, mode)?;
        if let Some((vertex, &found)) = graph
            .degrees
            .iter()
            .enumerate()
            .find(|(_, &x)| x != degree)
        {
            return Err(Error::NonRegular {
                vertex,
                found,
                expected: degree,
            });
        }
        Ok(RegularGraph { graph, degree })
    }

    /// Infers `V` from the largest index and `d` from vertex 0.
    pub fn from_edges(edges: Vec<(usize, usize)>, mode: GraphMode) -> Result<Self> {
        let vertex_count = edges.iter().map(|&(u, v)| u.max(v) + 1).max().ok_or(Error::EmptyGraph)?;
        let degree = edges
            .iter()
            .map(|&(u, v)| usize::from(u == 0) + usize::from(v == 0))
            .sum();
        Self::new(vertex_count, degree, edges, mode)
    }

    pub fn from_graph(graph: Graph) -> Result<Self> {
        let degree = graph.degrees[0];
        Self::new(graph.vertex_count, degree, graph.edges, graph.mode)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn as_graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }
}

impl Deref for RegularGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn k4_counts() {
        let g = complete(4);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.degree(), 3);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.directed_edge_count(), 12);
    }

    #[test]
    fn directed_edge_layout() {
        let g = complete(4);
        for e in 0..g.directed_edge_count() {
            let r = reverse(e);
            assert_ne!(r, e);
            assert_eq!(reverse(r), e);
            assert_eq!(g.origin(r), g.terminus(e));
            assert_eq!(g.terminus(r), g.origin(e));
        }
        let (u, v) = g.edges()[2];
        assert_eq!((g.origin(4), g.terminus(4)), (u, v));
        assert_eq!((g.origin(5), g.terminus(5)), (v, u));
    }

    #[test]
    fn validation_errors() {
        // path 0-1-2-3 closed by 0-2: vertex 1 has degree 2
        let bad = vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (0, 3)];
        assert!(matches!(
            RegularGraph::new(4, 3, bad[..5].to_vec(), GraphMode::Simple),
            Err(Error::NonRegular { .. })
        ));
        let dup = vec![(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (0, 2)];
        assert!(matches!(
            RegularGraph::new(4, 3, dup, GraphMode::Simple),
            Err(Error::IllegalSimple(0, 1))
        ));
        assert!(matches!(
            RegularGraph::new(5, 3, vec![], GraphMode::Simple),
            Err(Error::OddProduct { .. })
        ));
        assert!(matches!(
            RegularGraph::new(4, 3, vec![(0, 9)], GraphMode::Simple),
            Err(Error::VertexOutOfRange { index: 9, .. })
        ));
        assert!(matches!(
            RegularGraph::new(1, 2, vec![(0, 0)], GraphMode::Simple),
            Err(Error::DegreeTooSmall(2))
        ));
    }

    #[test]
    fn single_loop_multigraph() {
        let g = single_loop();
        assert_eq!(g.degree(), 2);
        assert_eq!(g.directed_edge_count(), 2);
        assert_eq!(g.origin(0), 0);
        assert_eq!(g.terminus(1), 0);
        assert!(!g.is_bipartite());
    }

    #[test]
    fn connectivity_and_bipartiteness() {
        let k4 = complete(4);
        assert!(k4.is_connected());
        assert!(!k4.is_bipartite());
        let two = disjoint_union(&k4, &k4);
        assert!(!two.is_connected());
        assert!(complete_bipartite(3).is_bipartite());
        assert!(!petersen().is_bipartite());
        assert!(petersen().is_connected());
    }

    #[test]
    fn from_edges_infers_shape() {
        let g = RegularGraph::from_edges(complete(4).edges().to_vec(), GraphMode::Simple).unwrap();
        assert_eq!((g.vertex_count(), g.degree()), (4, 3));
    }
}
