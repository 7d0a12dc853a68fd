//! Dense subsets: the derandomised extraction step and the densest
//! k-subgraph pipeline through ℓ-edge coverage.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::intersection::sci_two_layer;
use crate::reductions::mlec::{bipartite_mlec_to_intersection, graph_to_bipartite_double, MlecTarget, SimpleGraph};
use crate::report::sci_envelope;
use crate::solution::Payload;

/// Shrinks `x` to `x0` nodes by repeatedly deleting a vertex of minimum
/// degree inside the current set, lowest index first. Removing the minimum
/// degree vertex maximises the expected edge count of a uniform
/// `x0`-subset of what remains.
pub fn extract_dense_subset(g: &SimpleGraph, x: &BTreeSet<usize>, x0: usize) -> Result<BTreeSet<usize>> {
    if x0 < 2 || x0 > x.len() {
        return Err(Error::BadSize(format!("x0 = {x0} with |X| = {}", x.len())));
    }
    if let Some(&v) = x.iter().find(|&&v| v >= g.n) {
        return Err(Error::BadSize(format!("node {v} outside the graph")));
    }
    let adj = g.adjacency();
    let mut cur = x.clone();
    let mut deg: Vec<usize> = (0..g.n).map(|v| if cur.contains(&v) { adj[v].intersection(&cur).count() } else { 0 }).collect();
    while cur.len() > x0 {
        let v = *cur.iter().min_by_key(|&&v| (deg[v], v)).expect("nonempty");
        cur.remove(&v);
        for &u in &adj[v] {
            if cur.contains(&u) {
                deg[u] -= 1;
            }
        }
    }
    Ok(cur)
}

/// Largest induced edge count over all `k`-subsets.
pub fn densest_brute(g: &SimpleGraph, k: usize) -> usize {
    assert!(g.n <= 24, "brute force over {} nodes", g.n);
    (0u32..(1u32 << g.n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| g.edges.iter().filter(|&&(u, v)| m >> u & 1 == 1 && m >> v & 1 == 1).count())
        .max()
        .unwrap_or(0)
}

/// The stopping factor used by [`densest_k_subgraph_approx`] for `g`.
pub fn densest_factor(g: &SimpleGraph) -> f64 {
    sci_envelope(2 * g.edges.len())
}

/// Doubles `g`, solves ℓ-edge coverage with the two-layer greedy for
/// ℓ = 1, 2, … while the answer stays within `f·2k` vertices, folds the
/// last such answer back onto `g` and trims or pads it to `k` nodes.
pub fn densest_k_subgraph_approx(g: &SimpleGraph, k: usize) -> Result<BTreeSet<usize>> {
    if k > g.n {
        return Err(Error::BadSize(format!("k = {k} exceeds {} nodes", g.n)));
    }
    if k == 0 {
        return Ok(BTreeSet::new());
    }
    let bip = graph_to_bipartite_double(g);
    let limit = densest_factor(g) * (2 * k) as f64;
    let mut best: BTreeSet<usize> = BTreeSet::new();
    for l in 1..=bip.edges.len() {
        let Instance::CoverIntersection(c) = bipartite_mlec_to_intersection(&bip, l, MlecTarget::Ksc)? else {
            unreachable!("ksc target yields a cover instance")
        };
        let sol = sci_two_layer(&c)?;
        let Payload::Covers(covers) = &sol.payload else { unreachable!("cover solution") };
        if (covers[0].open.len() + covers[1].open.len()) as f64 > limit {
            break;
        }
        best = covers[0].open.union(&covers[1].open).copied().collect();
    }
    if best.len() > k {
        best = if k >= 2 { extract_dense_subset(g, &best, k)? } else { best.into_iter().take(1).collect() };
    }
    let mut v = 0;
    while best.len() < k {
        best.insert(v);
        v += 1;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique(n: usize) -> SimpleGraph {
        SimpleGraph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn extraction() {
        let k4 = clique(4);
        let all: BTreeSet<usize> = (0..4).collect();
        assert_eq!(extract_dense_subset(&k4, &all, 4).unwrap(), all);
        assert_eq!(k4.induced_edges(&extract_dense_subset(&k4, &all, 2).unwrap()), 1);
        assert!(extract_dense_subset(&k4, &all, 1).is_err());
        assert!(extract_dense_subset(&k4, &all, 5).is_err());
    }

    #[test]
    fn densest_small() {
        let k5 = clique(5);
        assert_eq!(k5.induced_edges(&densest_k_subgraph_approx(&k5, 3).unwrap()), 3);
        assert_eq!(densest_brute(&k5, 3), 3);
        let empty = SimpleGraph::new(4, []).unwrap();
        assert_eq!(densest_k_subgraph_approx(&empty, 2).unwrap().len(), 2);
        assert!(densest_k_subgraph_approx(&empty, 0).unwrap().is_empty());
    }
}
