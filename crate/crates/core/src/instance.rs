//! Multi-layer instances: graph layers for the k-MST family and serving-set
//! layers for set cover and facility location.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::rational::{Cost, Rational};
use crate::weights::Weights;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphLayer {
    pub weights: Weights,
    pub root: Option<usize>,
}

impl GraphLayer {
    pub fn new(weights: Weights, root: Option<usize>) -> Self {
        GraphLayer { weights, root }
    }

    pub fn is_metric(&self) -> bool {
        self.weights.is_metric()
    }
}

/// `n` nodes shared by `h` weighted layers, with coverage target `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    pub n: usize,
    pub k: usize,
    pub rooted: bool,
    pub layers: Vec<GraphLayer>,
}

impl GraphInstance {
    pub fn new(n: usize, k: usize, rooted: bool, layers: Vec<GraphLayer>) -> Result<Self> {
        let inst = GraphInstance { n, k, rooted, layers };
        inst.check()?;
        Ok(inst)
    }

    pub fn h(&self) -> usize {
        self.layers.len()
    }

    /// Distinct roots over all layers.
    pub fn roots(&self) -> BTreeSet<usize> {
        self.layers.iter().filter_map(|l| l.root).collect()
    }

    /// Nodes that count toward the target.
    pub fn countable(&self) -> Vec<usize> {
        let roots = self.roots();
        (0..self.n).filter(|v| !roots.contains(v)).collect()
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedInstance(m));
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.weights.size() != self.n {
                return bad(format!("layer {} has {} nodes, expected {}", i + 1, layer.weights.size(), self.n));
            }
            match layer.root {
                Some(r) if r >= self.n => return bad(format!("layer {} root {r} out of range", i + 1)),
                None if self.rooted => return bad(format!("layer {} has no root", i + 1)),
                _ => {}
            }
        }
        let limit = self.n - self.roots().len();
        if self.k > limit {
            return bad(format!("target {} exceeds {limit} countable nodes", self.k));
        }
        Ok(())
    }

    /// Copy with every layer replaced by its metric closure.
    pub fn closed(&self) -> GraphInstance {
        let mut out = self.clone();
        for layer in &mut out.layers {
            layer.weights = layer.weights.metric_closure();
        }
        out
    }

    pub fn with_k(&self, k: usize) -> GraphInstance {
        GraphInstance { k, ..self.clone() }
    }
}

/// One facility (or set) of a layer: clients with a finite connection cost
/// are exactly the ones it may serve.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ServingSet {
    pub open_cost: Rational,
    pub conn: BTreeMap<usize, Rational>,
}

impl ServingSet {
    pub fn new(open_cost: Rational, conn: BTreeMap<usize, Rational>) -> Self {
        ServingSet { open_cost, conn }
    }

    /// A plain set: zero connection cost on every member.
    pub fn set(open_cost: Rational, members: impl IntoIterator<Item = usize>) -> Self {
        ServingSet {
            open_cost,
            conn: members.into_iter().map(|c| (c, Rational::zero())).collect(),
        }
    }

    pub fn conn_cost(&self, client: usize) -> Cost {
        match self.conn.get(&client) {
            Some(r) => Cost::Finite(r.clone()),
            None => Cost::Infinite,
        }
    }

    pub fn allows(&self, client: usize) -> bool {
        self.conn.contains_key(&client)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CoverLayer {
    pub sets: Vec<ServingSet>,
    pub metric: bool,
}

impl CoverLayer {
    pub fn new(sets: Vec<ServingSet>, metric: bool) -> Self {
        CoverLayer { sets, metric }
    }
}

/// Clients `0..num_clients` served through per-layer serving sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInstance {
    pub num_clients: usize,
    pub extra_cost: Vec<Rational>,
    pub k: usize,
    pub layers: Vec<CoverLayer>,
}

impl CoverInstance {
    pub fn new(num_clients: usize, extra_cost: Vec<Rational>, k: usize, layers: Vec<CoverLayer>) -> Result<Self> {
        let inst = CoverInstance { num_clients, extra_cost, k, layers };
        inst.check()?;
        Ok(inst)
    }

    /// Zero extra cost everywhere.
    pub fn plain(num_clients: usize, k: usize, layers: Vec<CoverLayer>) -> Result<Self> {
        Self::new(num_clients, vec![Rational::zero(); num_clients], k, layers)
    }

    pub fn h(&self) -> usize {
        self.layers.len()
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedInstance(m));
        if self.extra_cost.len() != self.num_clients {
            return bad("extra_cost length differs from client count".into());
        }
        if self.extra_cost.iter().any(Rational::is_negative) {
            return bad("negative extra cost".into());
        }
        if self.k > self.num_clients {
            return bad(format!("target {} exceeds {} clients", self.k, self.num_clients));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            for (j, s) in layer.sets.iter().enumerate() {
                if s.open_cost.is_negative() || s.conn.values().any(Rational::is_negative) {
                    return bad(format!("negative cost in layer {} set {j}", i + 1));
                }
                if let Some(&c) = s.conn.keys().find(|&&c| c >= self.num_clients) {
                    return bad(format!("layer {} set {j} references client {c}", i + 1));
                }
            }
        }
        Ok(())
    }

    pub fn with_k(&self, k: usize) -> CoverInstance {
        CoverInstance { k, ..self.clone() }
    }

    /// Clients served by at least one set of `layer`.
    pub fn servable(&self, layer: usize) -> BTreeSet<usize> {
        self.layers[layer].sets.iter().flat_map(|s| s.conn.keys().copied()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InstanceKind {
    UnionKmst,
    IntersectionKmst,
    CoverUnion,
    CoverIntersection,
}

impl InstanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::UnionKmst => "union-kmst",
            InstanceKind::IntersectionKmst => "intersection-kmst",
            InstanceKind::CoverUnion => "cover-union",
            InstanceKind::CoverIntersection => "cover-intersection",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "union-kmst" => InstanceKind::UnionKmst,
            "intersection-kmst" => InstanceKind::IntersectionKmst,
            "cover-union" => InstanceKind::CoverUnion,
            "cover-intersection" => InstanceKind::CoverIntersection,
            other => return Err(Error::Parse(format!("unknown kind {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    UnionKmst(GraphInstance),
    IntersectionKmst(GraphInstance),
    CoverUnion(CoverInstance),
    CoverIntersection(CoverInstance),
}

impl Instance {
    pub fn kind(&self) -> InstanceKind {
        match self {
            Instance::UnionKmst(_) => InstanceKind::UnionKmst,
            Instance::IntersectionKmst(_) => InstanceKind::IntersectionKmst,
            Instance::CoverUnion(_) => InstanceKind::CoverUnion,
            Instance::CoverIntersection(_) => InstanceKind::CoverIntersection,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => g.k,
            Instance::CoverUnion(c) | Instance::CoverIntersection(c) => c.k,
        }
    }

    pub fn h(&self) -> usize {
        match self {
            Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => g.h(),
            Instance::CoverUnion(c) | Instance::CoverIntersection(c) => c.h(),
        }
    }

    /// Node count for graphs, client count for covers.
    pub fn size(&self) -> usize {
        match self {
            Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => g.n,
            Instance::CoverUnion(c) | Instance::CoverIntersection(c) => c.num_clients,
        }
    }

    pub fn graph(&self) -> Option<&GraphInstance> {
        match self {
            Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => Some(g),
            _ => None,
        }
    }

    pub fn cover(&self) -> Option<&CoverInstance> {
        match self {
            Instance::CoverUnion(c) | Instance::CoverIntersection(c) => Some(c),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn target_excludes_roots() {
        let w = Weights::complete(3, q(1, 1));
        let layers = vec![GraphLayer::new(w.clone(), Some(0)), GraphLayer::new(w, Some(1))];
        assert!(GraphInstance::new(3, 1, true, layers.clone()).is_ok());
        assert!(GraphInstance::new(3, 2, true, layers).is_err());
    }

    #[test]
    fn cover_rejects_unknown_client() {
        let layer = CoverLayer::new(vec![ServingSet::set(q(1, 1), [0, 3])], false);
        assert!(CoverInstance::plain(3, 1, vec![layer]).is_err());
    }
}
