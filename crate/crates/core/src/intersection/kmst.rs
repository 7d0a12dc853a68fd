//! Intersection k-MST through the summed metric.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::GraphInstance;
use crate::rational::Rational;
use crate::single::{exact_ksteiner, KSteinerQuery};
use crate::solution::{LayerTree, Solution, SolutionKind};
use crate::weights::Weights;

/// Both readings of the summed-metric algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummedKmst {
    /// One tree of the summed metric reused in every layer.
    pub shared: Solution,
    /// Same node set, each layer re-spanned by its own MST.
    pub reoptimised: Solution,
}

/// Rootless exact k-MST under `w`: the best rooted tree over all roots,
/// lowest root on ties.
fn rootless_kmst(w: &Weights, n: usize, k: usize) -> Result<LayerTree> {
    let mut best: Option<(Rational, LayerTree)> = None;
    for r in 0..n {
        let others: Vec<usize> = (0..n).filter(|&v| v != r).collect();
        let q = KSteinerQuery { weights: w, terminals: others, allowed: (0..n).collect(), root: r, k: k - 1 };
        match exact_ksteiner(&q) {
            Ok((c, t)) => {
                if best.as_ref().is_none_or(|(b, _)| &c < b) {
                    best = Some((c, t));
                }
            }
            Err(Error::Unreachable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    best.map(|(_, t)| t).ok_or_else(|| Error::Infeasible(format!("no connected {k} nodes in the summed metric")))
}

pub fn intersection_kmst_both(g: &GraphInstance) -> Result<SummedKmst> {
    let closures: Vec<Weights> = g.layers.iter().map(|l| l.weights.metric_closure()).collect();
    let refs: Vec<&Weights> = closures.iter().collect();
    let summed = Weights::sum(&refs);
    let roots: BTreeSet<usize> = if g.rooted { g.roots() } else { BTreeSet::new() };
    let tree = if g.k == 0 {
        LayerTree::default()
    } else if roots.is_empty() {
        rootless_kmst(&summed, g.n, g.k)?
    } else if roots.len() == 1 {
        let r = *roots.iter().next().unwrap();
        let q = KSteinerQuery { weights: &summed, terminals: g.countable(), allowed: (0..g.n).collect(), root: r, k: g.k };
        exact_ksteiner(&q).map_err(|e| Error::Infeasible(e.to_string()))?.1
    } else {
        return Err(Error::BadParams("summed metric needs a shared root".into()));
    };
    let covered: BTreeSet<usize> = tree.nodes.iter().copied().filter(|v| !roots.contains(v)).collect();
    let shared = Solution::from_trees(g, SolutionKind::IntersectionTree, vec![tree.clone(); g.h()], covered.clone())?;
    let trees = closures
        .iter()
        .map(|cl| if tree.nodes.is_empty() { Some(LayerTree::default()) } else { LayerTree::spanning(cl, tree.nodes.iter().copied()) })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Infeasible("chosen nodes disconnected in a layer".into()))?;
    let reoptimised = Solution::from_trees(g, SolutionKind::IntersectionTree, trees, covered)?;
    Ok(SummedKmst { shared, reoptimised })
}

/// Summed-metric solution with per-layer MSTs over the chosen nodes.
pub fn intersection_kmst(g: &GraphInstance) -> Result<Solution> {
    Ok(intersection_kmst_both(g)?.reoptimised)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::GraphLayer;
    use crate::rational::q;

    #[test]
    fn identical_layers() {
        let w = Weights::from_edges(4, [(0, 1, q(1, 1)), (1, 2, q(1, 1)), (2, 3, q(5, 1)), (0, 3, q(2, 1))]);
        let g = GraphInstance::new(4, 3, false, vec![GraphLayer::new(w.clone(), None), GraphLayer::new(w, None)]).unwrap();
        let both = intersection_kmst_both(&g).unwrap();
        assert_eq!(both.shared.cost, q(4, 1));
        assert_eq!(both.reoptimised.cost, q(4, 1));
        let g1 = g.with_k(1);
        assert_eq!(intersection_kmst(&g1).unwrap().cost, q(0, 1));
    }
}
