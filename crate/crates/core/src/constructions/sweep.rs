use super::build_emn;
use crate::graphs::{BipartiteSeparatedGraph, DirectedGraph, WeightedGraph};

/// Every weighted graph on vertices `u, v` (or just `v`) with `1..=max_edges`
/// edges `e1, e2, …` of weight at most `max_weight` and no isolated vertex.
/// Edges are listed as nondecreasing `(source, range, weight)` triples, so
/// graphs differing only by edge names appear once; isomorphic graphs under
/// swapping `u` and `v` are kept.
pub fn small_weighted_graphs(max_vertices: usize, max_edges: usize, max_weight: u32) -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    for nv in 1..=max_vertices.min(2) {
        let vertices: Vec<&str> = if nv == 1 { vec!["v"] } else { vec!["u", "v"] };
        let mut kinds = Vec::new();
        for s in 0..nv {
            for r in 0..nv {
                for w in 1..=max_weight {
                    kinds.push((s, r, w));
                }
            }
        }
        for k in 1..=max_edges {
            for combo in multisets(kinds.len(), k) {
                let edges: Vec<(usize, usize, u32)> = combo.iter().map(|&c| kinds[c]).collect();
                let touched = |v: usize| edges.iter().any(|&(s, r, _)| s == v || r == v);
                if !(0..nv).all(touched) {
                    continue;
                }
                let named: Vec<(String, String, String)> = edges
                    .iter()
                    .enumerate()
                    .map(|(i, &(s, r, _))| (format!("e{}", i + 1), vertices[s].to_string(), vertices[r].to_string()))
                    .collect();
                let weights: Vec<(String, u64)> =
                    edges.iter().enumerate().map(|(i, &(_, _, w))| (format!("e{}", i + 1), u64::from(w))).collect();
                let g = DirectedGraph::new(vertices.iter().copied(), named).expect("sweep names are distinct");
                out.push(WeightedGraph::new(g, &weights).expect("sweep weights are positive"));
            }
        }
    }
    out
}

/// The sweep used throughout the test suites: at most 2 vertices, 3 edges
/// and weight 2.
pub fn standard_sweep() -> Vec<WeightedGraph> {
    small_weighted_graphs(2, 3, 2)
}

/// `E(m,n)` for `1 ≤ m ≤ n ≤ max`.
pub fn emn_sweep(max: usize) -> Vec<BipartiteSeparatedGraph> {
    let mut out = Vec::new();
    for n in 1..=max {
        for m in 1..=n {
            out.push(build_emn(m, n).expect("1 ≤ m ≤ n"));
        }
    }
    out
}

/// Nondecreasing index sequences of length `k` below `n`.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_sizes() {
        // One vertex: 2 kinds of loop, multisets of size 1..3 give 2 + 3 + 4.
        let one = small_weighted_graphs(1, 3, 2);
        assert_eq!(one.len(), 9);
        let all = standard_sweep();
        assert!(all.len() > 100);
        assert!(all.iter().all(|g| g.graph().vertex_ids().all(|v| !g.graph().is_isolated(v))));
        assert_eq!(emn_sweep(3).len(), 6);
    }
}
