//! Unrooted union k-MST by guessing one node per layer, and the reverse
//! padding that turns a rooted instance into an unrooted one.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{GraphInstance, GraphLayer};
use crate::rational::{Cost, Rational};
use crate::solution::{Solution, SolutionKind};
use crate::union::lp::lp_union_kmst;
use crate::weights::Weights;

/// Default cap on the number of root tuples `n^h`.
pub const DEFAULT_ROOT_CAP: u64 = 4096;

/// Minimum over all root tuples of the rooted LP-rounding solution. A guessed
/// root lies in its layer's tree, so it counts as covered here.
pub fn unrooted_union_kmst(g: &GraphInstance, cap: u64) -> Result<Solution> {
    let tuples = (g.n as u64).checked_pow(g.h() as u32).unwrap_or(u64::MAX);
    if tuples > cap {
        return Err(Error::BudgetExceeded(format!("{tuples} root tuples above cap {cap}")));
    }
    if g.h() == 0 || g.n == 0 {
        return Err(Error::Infeasible("no layers or nodes".into()));
    }
    let mut roots = vec![0usize; g.h()];
    let mut best: Option<Solution> = None;
    loop {
        let distinct: BTreeSet<usize> = roots.iter().copied().collect();
        let layers = g.layers.iter().zip(&roots).map(|(l, &r)| GraphLayer::new(l.weights.clone(), Some(r))).collect();
        let rooted = GraphInstance::new(g.n, g.k.saturating_sub(distinct.len()), true, layers)?;
        match lp_union_kmst(&rooted) {
            Ok((sol, _)) => {
                let mut covered = sol.covered.clone();
                covered.extend(distinct.iter().copied());
                let sol = Solution::from_trees(g, SolutionKind::UnionTree, sol.trees().to_vec(), covered)?;
                if best.as_ref().is_none_or(|b| sol.cost < b.cost) {
                    best = Some(sol);
                }
            }
            Err(Error::Infeasible(_)) => {}
            Err(e) => return Err(e),
        }
        // Next tuple in lexicographic order.
        let mut i = g.h();
        loop {
            if i == 0 {
                return best.ok_or_else(|| Error::Infeasible(format!("no root tuple covers {} nodes", g.k)));
            }
            i -= 1;
            roots[i] += 1;
            if roots[i] < g.n {
                break;
            }
            roots[i] = 0;
        }
    }
}

/// Appends `n` dummy nodes per layer, tied to that layer's root at cost
/// zero. Roots become ordinary nodes, so the target grows by the number of
/// distinct roots as well as the `hn` dummies.
pub fn dummy_pad_rooted_to_unrooted(g: &GraphInstance) -> Result<GraphInstance> {
    if !g.rooted {
        return Err(Error::BadParams("padding needs a rooted instance".into()));
    }
    let n2 = g.n + g.h() * g.n;
    let mut layers = Vec::with_capacity(g.h());
    for (i, layer) in g.layers.iter().enumerate() {
        let r = layer.root.expect("rooted");
        let mut w = Weights::new(n2);
        for (u, v, c) in layer.weights.edges() {
            w.set(u, v, Cost::Finite(c));
        }
        for d in 0..g.n {
            w.set(r, g.n + i * g.n + d, Cost::Finite(Rational::zero()));
        }
        layers.push(GraphLayer::new(w, None));
    }
    GraphInstance::new(n2, g.k + g.roots().len() + g.h() * g.n, false, layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn pad_shape() {
        let w = Weights::complete(3, q(1, 1));
        let g = GraphInstance::new(3, 1, true, vec![GraphLayer::new(w, Some(0))]).unwrap();
        let p = dummy_pad_rooted_to_unrooted(&g).unwrap();
        assert_eq!(p.n, 6);
        assert_eq!(p.k, 5);
        assert!(!p.rooted);
    }

    #[test]
    fn single_layer_unrooted() {
        let w = Weights::from_edges(3, [(0, 1, q(1, 1)), (1, 2, q(2, 1))]);
        let g = GraphInstance::new(3, 2, false, vec![GraphLayer::new(w, None)]).unwrap();
        assert_eq!(unrooted_union_kmst(&g, DEFAULT_ROOT_CAP).unwrap().cost, q(1, 1));
        let g1 = g.with_k(1);
        assert_eq!(unrooted_union_kmst(&g1, DEFAULT_ROOT_CAP).unwrap().cost, q(0, 1));
    }
}
