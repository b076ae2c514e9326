//! Small named graphs used as fixtures and in examples.

use super::{Graph, GraphMode, RegularGraph};

/// Complete graph K_n, degree n - 1.
pub fn complete(n: usize) -> RegularGraph {
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    RegularGraph::new(n, n - 1, edges, GraphMode::Simple).expect("K_n is regular")
}

/// Complete bipartite graph K_{n,n}, degree n.
pub fn complete_bipartite(n: usize) -> RegularGraph {
    let edges = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, n + j)))
        .collect();
    RegularGraph::new(2 * n, n, edges, GraphMode::Simple).expect("K_n,n is regular")
}

pub fn petersen() -> RegularGraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    RegularGraph::new(10, 3, edges, GraphMode::Simple).expect("Petersen graph is 3-regular")
}

/// One vertex carrying one loop (degree 2).
pub fn single_loop() -> RegularGraph {
    RegularGraph::new(1, 2, vec![(0, 0)], GraphMode::Multigraph).expect("loop is 2-regular")
}

/// Two vertices joined by `d` parallel edges.
pub fn dipole(d: usize) -> RegularGraph {
    RegularGraph::new(2, d, vec![(0, 1); d], GraphMode::Multigraph).expect("dipole is regular")
}

/// Disjoint union; the second graph's vertices are shifted by `a.vertex_count()`.
pub fn disjoint_union(a: &RegularGraph, b: &RegularGraph) -> Graph {
    let shift = a.vertex_count();
    let edges = a
        .edges()
        .iter()
        .copied()
        .chain(b.edges().iter().map(|&(u, v)| (u + shift, v + shift)))
        .collect();
    let mode = if a.mode() == GraphMode::Simple && b.mode() == GraphMode::Simple {
        GraphMode::Simple
    } else {
        GraphMode::Multigraph
    };
    Graph::new(shift + b.vertex_count(), edges, mode).expect("union of valid graphs")
}
