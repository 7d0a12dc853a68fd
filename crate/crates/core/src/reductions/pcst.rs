//! Prize-collecting Steiner tree as a two-layer union k-MST.

use crate::error::{Error, Result};
use crate::graph::mst;
use crate::instance::{GraphInstance, GraphLayer};
use crate::rational::{Cost, Rational};
use crate::weights::Weights;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcstInstance {
    pub weights: Weights,
    pub root: usize,
    /// Penalty paid for each node left out; the root's entry is ignored.
    pub prizes: Vec<Rational>,
}

impl PcstInstance {
    pub fn new(weights: Weights, root: usize, prizes: Vec<Rational>) -> Result<Self> {
        let n = weights.size();
        if root >= n || prizes.len() != n || prizes.iter().any(Rational::is_negative) {
            return Err(Error::BadParams("root or prizes do not fit the graph".into()));
        }
        Ok(PcstInstance { weights, root, prizes })
    }

    /// Brute force over node sets containing the root: MST of the closure
    /// plus the prizes of everything outside.
    pub fn optimum(&self) -> Option<Rational> {
        let n = self.weights.size();
        if n > 20 {
            return None;
        }
        let cl = self.weights.metric_closure();
        let others: Vec<usize> = (0..n).filter(|&v| v != self.root).collect();
        let mut best: Option<Rational> = None;
        for m in 0u64..(1u64 << others.len()) {
            let mut nodes = vec![self.root];
            let mut penalty = Rational::zero();
            for (i, &v) in others.iter().enumerate() {
                if m >> i & 1 == 1 {
                    nodes.push(v);
                } else {
                    penalty += &self.prizes[v];
                }
            }
            if let Some((c, _)) = mst(&cl, &nodes) {
                let total = c + penalty;
                if best.as_ref().is_none_or(|b| &total < b) {
                    best = Some(total);
                }
            }
        }
        best
    }
}

/// Layer one is the graph itself, layer two a star at the root whose spoke
/// to `v` costs the prize of `v`. Every non-root node must be covered.
pub fn reduce_pcst_to_union_mst(p: &PcstInstance) -> Result<GraphInstance> {
    let n = p.weights.size();
    let mut star = Weights::new(n);
    for v in (0..n).filter(|&v| v != p.root) {
        star.set(p.root, v, Cost::Finite(p.prizes[v].clone()));
    }
    let layers = vec![GraphLayer::new(p.weights.clone(), Some(p.root)), GraphLayer::new(star, Some(p.root))];
    GraphInstance::new(n, n - 1, true, layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn single_edge() {
        let p = PcstInstance::new(Weights::from_edges(2, [(0, 1, q(1, 1))]), 0, vec![q(0, 1), q(3, 1)]).unwrap();
        assert_eq!(p.optimum(), Some(q(1, 1)));
        let g = reduce_pcst_to_union_mst(&p).unwrap();
        assert_eq!((g.h(), g.k), (2, 1));
    }
}
