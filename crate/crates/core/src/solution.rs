//! Solutions, cost accounting and feasibility checks.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph;
use crate::instance::{CoverInstance, GraphInstance, Instance};
use crate::rational::Rational;
use crate::weights::Weights;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolutionKind {
    UnionTree,
    IntersectionTree,
    Cover,
}

impl SolutionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolutionKind::UnionTree => "union-tree",
            SolutionKind::IntersectionTree => "intersection-tree",
            SolutionKind::Cover => "cover",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "union-tree" => SolutionKind::UnionTree,
            "intersection-tree" => SolutionKind::IntersectionTree,
            "cover" => SolutionKind::Cover,
            other => return Err(Error::Parse(format!("unknown solution kind {other:?}"))),
        })
    }
}

/// A tree in one layer. Edges are priced with the layer's metric closure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayerTree {
    pub nodes: BTreeSet<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl LayerTree {
    pub fn single(v: usize) -> Self {
        LayerTree { nodes: BTreeSet::from([v]), edges: Vec::new() }
    }

    /// MST of `nodes` under `w`, or `None` if they are not connected.
    pub fn spanning(w: &Weights, nodes: impl IntoIterator<Item = usize>) -> Option<Self> {
        let nodes: BTreeSet<usize> = nodes.into_iter().collect();
        let list: Vec<usize> = nodes.iter().copied().collect();
        let (_, edges) = graph::mst(w, &list)?;
        Some(LayerTree { nodes, edges })
    }

    pub fn cost(&self, closure: &Weights) -> Option<Rational> {
        let mut total = Rational::zero();
        for &(u, v) in &self.edges {
            total += closure.finite(u, v)?;
        }
        Some(total)
    }
}

/// Open sets of one layer and the set serving each assigned client.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayerCover {
    pub open: BTreeSet<usize>,
    pub assign: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Trees(Vec<LayerTree>),
    Covers(Vec<LayerCover>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub kind: SolutionKind,
    pub payload: Payload,
    pub covered: BTreeSet<usize>,
    pub cost: Rational,
}

impl Solution {
    pub fn trees(&self) -> &[LayerTree] {
        match &self.payload {
            Payload::Trees(t) => t,
            Payload::Covers(_) => &[],
        }
    }

    pub fn covers(&self) -> &[LayerCover] {
        match &self.payload {
            Payload::Covers(c) => c,
            Payload::Trees(_) => &[],
        }
    }

    /// Builds a tree solution and prices it against `inst`.
    pub fn from_trees(inst: &GraphInstance, kind: SolutionKind, trees: Vec<LayerTree>, covered: BTreeSet<usize>) -> Result<Self> {
        let mut sol = Solution { kind, payload: Payload::Trees(trees), covered, cost: Rational::zero() };
        sol.cost = graph_cost(inst, &sol)?;
        Ok(sol)
    }

    pub fn from_covers(inst: &CoverInstance, covers: Vec<LayerCover>, covered: BTreeSet<usize>) -> Result<Self> {
        let mut sol = Solution { kind: SolutionKind::Cover, payload: Payload::Covers(covers), covered, cost: Rational::zero() };
        sol.cost = cover_cost(inst, &sol)?;
        Ok(sol)
    }
}

fn malformed<T>(m: String) -> Result<T> {
    Err(Error::MalformedSolution(m))
}

fn graph_cost(inst: &GraphInstance, sol: &Solution) -> Result<Rational> {
    let Payload::Trees(trees) = &sol.payload else {
        return malformed("expected tree payload".into());
    };
    if trees.len() != inst.h() {
        return malformed(format!("{} trees for {} layers", trees.len(), inst.h()));
    }
    let mut total = Rational::zero();
    for (i, (tree, layer)) in trees.iter().zip(&inst.layers).enumerate() {
        if let Some(&v) = tree.nodes.iter().find(|&&v| v >= inst.n) {
            return malformed(format!("layer {} uses unknown node {v}", i + 1));
        }
        if tree.edges.is_empty() {
            continue;
        }
        let closure = layer.weights.metric_closure();
        for &(u, v) in &tree.edges {
            if u >= inst.n || v >= inst.n {
                return malformed(format!("layer {} edge ({u}, {v}) uses an unknown node", i + 1));
            }
            match closure.finite(u, v) {
                Some(w) => total += w,
                None => return malformed(format!("layer {} edge ({u}, {v}) is absent", i + 1)),
            }
        }
    }
    Ok(total)
}

fn cover_cost(inst: &CoverInstance, sol: &Solution) -> Result<Rational> {
    let Payload::Covers(covers) = &sol.payload else {
        return malformed("expected cover payload".into());
    };
    if covers.len() != inst.h() {
        return malformed(format!("{} layer covers for {} layers", covers.len(), inst.h()));
    }
    let mut total = Rational::zero();
    for (i, (cov, layer)) in covers.iter().zip(&inst.layers).enumerate() {
        for &s in &cov.open {
            match layer.sets.get(s) {
                Some(set) => total += &set.open_cost,
                None => return malformed(format!("layer {} opens unknown set {s}", i + 1)),
            }
        }
        for (&c, &s) in &cov.assign {
            let Some(set) = layer.sets.get(s) else {
                return malformed(format!("layer {} assigns to unknown set {s}", i + 1));
            };
            match set.conn.get(&c) {
                Some(w) => total += w,
                None => return malformed(format!("layer {} set {s} cannot serve client {c}", i + 1)),
            }
        }
    }
    for &c in &sol.covered {
        match inst.extra_cost.get(c) {
            Some(o) => total += o,
            None => return malformed(format!("unknown client {c}")),
        }
    }
    Ok(total)
}

/// Exact cost recomputed from the payload.
pub fn solution_cost(inst: &Instance, sol: &Solution) -> Result<Rational> {
    match inst {
        Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => graph_cost(g, sol),
        Instance::CoverUnion(c) | Instance::CoverIntersection(c) => cover_cost(c, sol),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub feasible: bool,
    pub reasons: Vec<String>,
}

impl Verdict {
    fn from_reasons(reasons: Vec<String>) -> Self {
        Verdict { feasible: reasons.is_empty(), reasons }
    }
}

pub fn validate_solution(inst: &Instance, sol: &Solution) -> Verdict {
    let mut reasons = Vec::new();
    let expected = match inst {
        Instance::UnionKmst(_) => SolutionKind::UnionTree,
        Instance::IntersectionKmst(_) => SolutionKind::IntersectionTree,
        _ => SolutionKind::Cover,
    };
    if sol.kind != expected {
        reasons.push(format!("solution kind {} does not match instance", sol.kind.as_str()));
        return Verdict::from_reasons(reasons);
    }
    match solution_cost(inst, sol) {
        Ok(c) if c != sol.cost => reasons.push(format!("cost mismatch: stated {} recomputed {c}", sol.cost)),
        Ok(_) => {}
        Err(e) => {
            reasons.push(e.to_string());
            return Verdict::from_reasons(reasons);
        }
    }
    let k = inst.k();
    if sol.covered.len() < k {
        reasons.push(format!("coverage deficit {}", k - sol.covered.len()));
    }
    match inst {
        Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => {
            check_trees(g, sol, expected == SolutionKind::IntersectionTree, &mut reasons)
        }
        Instance::CoverUnion(c) => check_covers(c, sol, false, &mut reasons),
        Instance::CoverIntersection(c) => check_covers(c, sol, true, &mut reasons),
    }
    Verdict::from_reasons(reasons)
}

fn check_trees(g: &GraphInstance, sol: &Solution, intersection: bool, reasons: &mut Vec<String>) {
    let trees = sol.trees();
    let roots = g.roots();
    for (i, (tree, layer)) in trees.iter().zip(&g.layers).enumerate() {
        let nodes: Vec<usize> = tree.nodes.iter().copied().collect();
        if !nodes.is_empty() && !graph::is_tree(&nodes, &tree.edges) {
            reasons.push(format!("layer {} payload is not a tree on its nodes", i + 1));
        }
        if g.rooted {
            if let Some(r) = layer.root {
                if !tree.nodes.contains(&r) {
                    reasons.push(format!("layer {} tree misses root {r}", i + 1));
                }
            }
        }
    }
    for &v in &sol.covered {
        if g.rooted && roots.contains(&v) {
            reasons.push(format!("root {v} counted as covered"));
            continue;
        }
        if intersection {
            for (i, tree) in trees.iter().enumerate() {
                if !tree.nodes.contains(&v) {
                    reasons.push(format!("node {v} missing from layer {}", i + 1));
                }
            }
        } else if !trees.iter().any(|t| t.nodes.contains(&v)) {
            reasons.push(format!("node {v} is in no layer"));
        }
    }
}

fn check_covers(c: &CoverInstance, sol: &Solution, intersection: bool, reasons: &mut Vec<String>) {
    let covers = sol.covers();
    for (i, cov) in covers.iter().enumerate() {
        for (&client, &s) in &cov.assign {
            if !cov.open.contains(&s) {
                reasons.push(format!("layer {} assigns client {client} to closed set {s}", i + 1));
            }
        }
    }
    for &client in &sol.covered {
        if client >= c.num_clients {
            reasons.push(format!("unknown client {client}"));
            continue;
        }
        if intersection {
            for (i, cov) in covers.iter().enumerate() {
                if !cov.assign.contains_key(&client) {
                    reasons.push(format!("client {client} missing from layer {}", i + 1));
                }
            }
        } else if !covers.iter().any(|cov| cov.assign.contains_key(&client)) {
            reasons.push(format!("client {client} is served in no layer"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{CoverLayer, GraphLayer, ServingSet};
    use crate::rational::q;

    fn star() -> GraphInstance {
        let w = Weights::from_edges(3, [(0, 1, q(3, 1)), (1, 2, q(2, 1))]);
        GraphInstance::new(3, 2, true, vec![GraphLayer::new(w, Some(0))]).unwrap()
    }

    #[test]
    fn tree_cost_and_validation() {
        let g = star();
        let tree = LayerTree { nodes: BTreeSet::from([0, 1, 2]), edges: vec![(0, 1), (1, 2)] };
        let sol = Solution::from_trees(&g, SolutionKind::UnionTree, vec![tree.clone()], BTreeSet::from([1, 2])).unwrap();
        assert_eq!(sol.cost, q(5, 1));
        let inst = Instance::UnionKmst(g.clone());
        assert!(validate_solution(&inst, &sol).feasible);

        let short = Solution::from_trees(&g, SolutionKind::UnionTree, vec![tree], BTreeSet::from([1])).unwrap();
        let v = validate_solution(&inst, &short);
        assert!(!v.feasible);
        assert_eq!(v.reasons, vec!["coverage deficit 1".to_string()]);

        let empty = Solution::from_trees(&g, SolutionKind::UnionTree, vec![LayerTree::single(0)], BTreeSet::new()).unwrap();
        assert_eq!(empty.cost, Rational::zero());
    }

    #[test]
    fn intersection_requires_every_layer() {
        let w = Weights::complete(3, q(1, 1));
        let g = GraphInstance::new(3, 2, false, vec![GraphLayer::new(w.clone(), None), GraphLayer::new(w, None)]).unwrap();
        let full = LayerTree { nodes: BTreeSet::from([0, 1]), edges: vec![(0, 1)] };
        let part = LayerTree::single(0);
        let sol = Solution::from_trees(&g, SolutionKind::IntersectionTree, vec![full, part], BTreeSet::from([0, 1])).unwrap();
        let v = validate_solution(&Instance::IntersectionKmst(g), &sol);
        assert!(!v.feasible);
        assert!(v.reasons.iter().any(|r| r == "node 1 missing from layer 2"));
    }

    #[test]
    fn cover_cost_counts_open_conn_and_extra() {
        let mut conn = BTreeMap::new();
        conn.insert(0, q(2, 1));
        let layer = CoverLayer::new(vec![ServingSet::new(q(1, 1), conn)], true);
        let c = CoverInstance::new(1, vec![q(1, 1)], 1, vec![layer]).unwrap();
        let cov = LayerCover { open: BTreeSet::from([0]), assign: BTreeMap::from([(0, 0)]) };
        let sol = Solution::from_covers(&c, vec![cov], BTreeSet::from([0])).unwrap();
        assert_eq!(sol.cost, q(4, 1));
        assert!(validate_solution(&Instance::CoverUnion(c), &sol).feasible);
    }
}
