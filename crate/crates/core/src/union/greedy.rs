//! Greedy density framework for union covering: repeatedly buy the
//! single-layer partial solution with the best cost per newly served request.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, GraphInstance, ServingSet};
use crate::rational::Rational;
use crate::single::{exact_kmfl_all, exact_ksteiner_all, FlQuery, KSteinerQuery};
use crate::solution::{LayerCover, LayerTree, Solution, SolutionKind};
use crate::weights::Weights;

fn better(ratio: &Rational, best: Option<&Rational>) -> bool {
    best.is_none_or(|b| ratio < b)
}

pub fn greedy_union_kmst(g: &GraphInstance) -> Result<Solution> {
    if !g.rooted {
        return Err(Error::BadParams("greedy union k-MST needs a rooted instance".into()));
    }
    let closures: Vec<Weights> = g.layers.iter().map(|l| l.weights.metric_closure()).collect();
    let roots: Vec<usize> = g.layers.iter().map(|l| l.root.expect("rooted")).collect();
    let countable: BTreeSet<usize> = g.countable().into_iter().collect();
    let mut nodes: Vec<BTreeSet<usize>> = roots.iter().map(|&r| BTreeSet::from([r])).collect();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    while covered.len() < g.k {
        let need = g.k - covered.len();
        let mut best: Option<(Rational, usize, LayerTree)> = None;
        for (i, cl) in closures.iter().enumerate() {
            let reach: Vec<usize> = (0..g.n).filter(|&v| cl.finite(roots[i], v).is_some()).collect();
            let terminals: Vec<usize> = reach.iter().copied().filter(|v| countable.contains(v) && !covered.contains(v)).collect();
            if terminals.is_empty() {
                continue;
            }
            let q = KSteinerQuery { weights: cl, terminals, allowed: reach, root: roots[i], k: 0 };
            let all = exact_ksteiner_all(&q);
            for (j, entry) in all.iter().enumerate().skip(1).take(need) {
                let Some((cost, tree)) = entry else { continue };
                let ratio = cost / &Rational::from(j);
                if better(&ratio, best.as_ref().map(|b| &b.0)) {
                    best = Some((ratio, i, tree.clone()));
                }
            }
        }
        let Some((_, i, tree)) = best else {
            return Err(Error::Infeasible(format!("only {} of {} nodes reachable", covered.len(), g.k)));
        };
        covered.extend(tree.nodes.iter().copied().filter(|v| countable.contains(v)));
        nodes[i].extend(tree.nodes);
    }
    let trees = nodes
        .into_iter()
        .zip(&closures)
        .map(|(set, cl)| LayerTree::spanning(cl, set).expect("merged trees stay connected"))
        .collect();
    Solution::from_trees(g, SolutionKind::UnionTree, trees, covered)
}

pub fn greedy_union_kmfl(c: &CoverInstance) -> Result<Solution> {
    let extra: BTreeMap<usize, Rational> = c.extra_cost.iter().cloned().enumerate().collect();
    let mut covers: Vec<LayerCover> = vec![LayerCover::default(); c.h()];
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    while covered.len() < c.k {
        let need = c.k - covered.len();
        let mut best: Option<(Rational, usize, LayerCover)> = None;
        for (i, layer) in c.layers.iter().enumerate() {
            // Facilities already paid for are offered for free.
            let sets: Vec<ServingSet> = layer
                .sets
                .iter()
                .enumerate()
                .map(|(s, set)| {
                    let mut set = set.clone();
                    if covers[i].open.contains(&s) {
                        set.open_cost = Rational::zero();
                    }
                    set
                })
                .collect();
            let clients: BTreeSet<usize> = (0..c.num_clients).filter(|x| !covered.contains(x)).collect();
            let q = FlQuery { sets: &sets, facilities: (0..sets.len()).collect(), clients, extra: extra.clone(), k: 0 };
            let all = exact_kmfl_all(&q)?;
            for (j, entry) in all.iter().enumerate().skip(1).take(need) {
                let Some(pc) = entry else { continue };
                let ratio = &pc.cost / &Rational::from(j);
                if better(&ratio, best.as_ref().map(|b| &b.0)) {
                    best = Some((ratio, i, pc.layer()));
                }
            }
        }
        let Some((_, i, pick)) = best else {
            return Err(Error::Infeasible(format!("only {} of {} clients servable", covered.len(), c.k)));
        };
        covered.extend(pick.assign.keys().copied());
        covers[i].open.extend(pick.open);
        covers[i].assign.extend(pick.assign);
    }
    Solution::from_covers(c, covers, covered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{CoverLayer, GraphLayer};
    use crate::rational::q;

    #[test]
    fn free_layer_wins() {
        let w1 = Weights::complete(4, q(5, 1));
        let w2 = Weights::complete(4, q(0, 1));
        let g = GraphInstance::new(4, 3, true, vec![GraphLayer::new(w1, Some(0)), GraphLayer::new(w2, Some(0))]).unwrap();
        assert_eq!(greedy_union_kmst(&g).unwrap().cost, q(0, 1));
    }

    #[test]
    fn single_layer_star() {
        let w = Weights::from_edges(4, [(0, 1, q(1, 1)), (0, 2, q(2, 1)), (0, 3, q(3, 1))]);
        let g = GraphInstance::new(4, 2, true, vec![GraphLayer::new(w, Some(0))]).unwrap();
        assert_eq!(greedy_union_kmst(&g).unwrap().cost, q(3, 1));
    }

    #[test]
    fn kmfl_density_order() {
        // Ratio 1 for the singleton ties the big set and is found first.
        let sets = vec![ServingSet::set(q(4, 1), 0..4), ServingSet::set(q(1, 1), [0])];
        let c = CoverInstance::plain(4, 4, vec![CoverLayer::new(sets, true)]).unwrap();
        let sol = greedy_union_kmfl(&c).unwrap();
        assert_eq!(sol.cost, q(5, 1));
        assert_eq!(sol.covers()[0].open, BTreeSet::from([0, 1]));
    }
}
