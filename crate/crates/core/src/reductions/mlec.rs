//! Minimum ℓ-edge coverage on bipartite graphs and its intersection encodings.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, CoverLayer, GraphInstance, GraphLayer, Instance, ServingSet};
use crate::rational::{Cost, Rational};
use crate::weights::Weights;

/// Simple undirected graph; edges are stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::BadParams(format!("edge ({u}, {v}) outside {n} nodes")));
            }
            if u != v {
                set.insert((u.min(v), u.max(v)));
            }
        }
        Ok(SimpleGraph { n, edges: set.into_iter().collect() })
    }

    pub fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        adj
    }

    /// Edges with both ends in `nodes`.
    pub fn induced_edges(&self, nodes: &BTreeSet<usize>) -> usize {
        self.edges.iter().filter(|(u, v)| nodes.contains(u) && nodes.contains(v)).count()
    }
}

/// Whitespace separated `u v` pairs, one per line; `#` starts a comment. An
/// optional leading `n <count>` line fixes the node count.
pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let mut n = None;
    let mut edges = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad node {s:?}")));
        match parts.as_slice() {
            ["n", c] => n = Some(num(c)?),
            [u, v] => edges.push((num(u)?, num(v)?)),
            _ => return Err(Error::Parse(format!("bad edge line {line:?}"))),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    SimpleGraph::new(n, edges).map_err(|e| Error::Parse(e.to_string()))
}

/// Bipartite graph with parts `0..left` and `0..right`; edges are
/// `(left index, right index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let set: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if set.iter().any(|&(a, b)| a >= left || b >= right) {
            return Err(Error::BadParams("edge outside its part".into()));
        }
        Ok(BipartiteGraph { left, right, edges: set.into_iter().collect() })
    }

    /// Fewest vertices whose induced subgraph has at least `l` edges.
    pub fn min_edge_coverage(&self, l: usize) -> Option<usize> {
        let total = self.left + self.right;
        if l > self.edges.len() || total > 24 {
            return None;
        }
        (0u32..(1u32 << total))
            .filter(|m| {
                self.edges.iter().filter(|&&(a, b)| m >> a & 1 == 1 && m >> (self.left + b) & 1 == 1).count() >= l
            })
            .map(u32::count_ones)
            .min()
            .map(|c| c as usize)
    }

    /// Every bipartite graph with the given part sizes.
    pub fn all(left: usize, right: usize) -> Vec<BipartiteGraph> {
        let slots: Vec<(usize, usize)> = (0..left).flat_map(|a| (0..right).map(move |b| (a, b))).collect();
        (0u64..(1u64 << slots.len()))
            .map(|m| BipartiteGraph {
                left,
                right,
                edges: (0..slots.len()).filter(|i| m >> i & 1 == 1).map(|i| slots[i]).collect(),
            })
            .collect()
    }
}

/// Two copies of the nodes; `{u, v}` becomes `(u, v')` and `(v, u')`.
pub fn graph_to_bipartite_double(g: &SimpleGraph) -> BipartiteGraph {
    let edges = g.edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]);
    BipartiteGraph::new(g.n, g.n, edges).expect("indices come from the graph")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlecTarget {
    Ksc,
    Kmfl,
    Kmst,
}

impl MlecTarget {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "ksc" => MlecTarget::Ksc,
            "kmfl" => MlecTarget::Kmfl,
            "kmst" => MlecTarget::Kmst,
            other => return Err(Error::BadTarget(other.into())),
        })
    }
}

/// Encodes ℓ-edge coverage as a two-layer intersection problem with target
/// `l`. Covering elements are the edges. In the covering targets layer 1 has
/// one unit-cost set per left vertex holding its edges and layer 2 the same
/// for right vertices. In the k-MST target node 0 is a shared root, left
/// vertices are `1..=L`, right vertices follow, then one node per edge;
/// layer 1 joins the root to left vertices at cost 1 and each left vertex
/// to its edges at cost zero, layer 2 likewise on the right.
pub fn bipartite_mlec_to_intersection(bip: &BipartiteGraph, l: usize, target: MlecTarget) -> Result<Instance> {
    let m = bip.edges.len();
    if l > m {
        return Err(Error::BadTarget(format!("ℓ = {l} exceeds {m} edges")));
    }
    match target {
        MlecTarget::Ksc | MlecTarget::Kmfl => {
            let side = |count: usize, pick: fn(&(usize, usize)) -> usize| {
                let sets = (0..count)
                    .map(|v| {
                        let members = bip.edges.iter().enumerate().filter(|(_, e)| pick(e) == v).map(|(i, _)| i);
                        ServingSet::set(Rational::one(), members)
                    })
                    .collect();
                CoverLayer::new(sets, false)
            };
            let layers = vec![side(bip.left, |e| e.0), side(bip.right, |e| e.1)];
            Ok(Instance::CoverIntersection(CoverInstance::plain(m, l, layers)?))
        }
        MlecTarget::Kmst => {
            let n = 1 + bip.left + bip.right + m;
            let mut w1 = Weights::new(n);
            let mut w2 = Weights::new(n);
            for a in 0..bip.left {
                w1.set(0, 1 + a, Cost::Finite(Rational::one()));
            }
            for b in 0..bip.right {
                w2.set(0, 1 + bip.left + b, Cost::Finite(Rational::one()));
            }
            for (i, &(a, b)) in bip.edges.iter().enumerate() {
                let e = 1 + bip.left + bip.right + i;
                w1.set(1 + a, e, Cost::Finite(Rational::zero()));
                w2.set(1 + bip.left + b, e, Cost::Finite(Rational::zero()));
            }
            let layers = vec![GraphLayer::new(w1.metric_closure(), Some(0)), GraphLayer::new(w2.metric_closure(), Some(0))];
            Ok(Instance::IntersectionKmst(GraphInstance::new(n, l, true, layers)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_cycle_double() {
        let g = SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let b = graph_to_bipartite_double(&g);
        assert_eq!((b.left + b.right, b.edges.len()), (8, 8));
    }

    #[test]
    fn edge_list() {
        let g = parse_edge_list("# c4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!((g.n, g.edges.len()), (4, 4));
        assert_eq!(parse_edge_list("n 6\n0 1\n").unwrap().n, 6);
        assert!(parse_edge_list("0 x\n").is_err());
    }

    #[test]
    fn coverage_brute() {
        let b = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(b.min_edge_coverage(1), Some(2));
        assert_eq!(b.min_edge_coverage(2), Some(3));
        assert_eq!(b.min_edge_coverage(3), Some(4));
        assert!(bipartite_mlec_to_intersection(&b, 4, MlecTarget::Ksc).is_err());
        assert!(MlecTarget::parse("tsp").is_err());
    }
}
