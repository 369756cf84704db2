//! Support-graph helpers shared by the Markov, spectral and capacity code.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

fn support_graph(matrix: &[Vec<f64>]) -> DiGraph<(), ()> {
    let n = matrix.len();
    let mut g = DiGraph::with_capacity(n, n * n);
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0.0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    g
}

/// Strongly connected components of the digraph with an edge `i -> j`
/// wherever `matrix[i][j] > 0`.
pub(crate) fn strong_components(matrix: &[Vec<f64>]) -> Vec<Vec<usize>> {
    tarjan_scc(&support_graph(matrix))
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

pub(crate) fn is_strongly_connected(matrix: &[Vec<f64>]) -> bool {
    !matrix.is_empty() && strong_components(matrix).len() == 1
}

/// Nodes reachable from `starts` (inclusive) along positive entries.
pub(crate) fn reachable(matrix: &[Vec<f64>], starts: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; matrix.len()];
    let mut stack: Vec<usize> = starts.into_iter().collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(i) = stack.pop() {
        for (j, &v) in matrix[i].iter().enumerate() {
            if v > 0.0 && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen
}
