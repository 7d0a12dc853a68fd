//! LP-rounding for rooted union k-MST and union k-metric facility location:
//! guess the largest distance (or opening cost), filter, solve the
//! relaxation, split requests by their dominant layer, solve one exact
//! single-layer problem per layer and augment cheaply.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, GraphInstance};
use crate::lp::{build_ukmfl, build_ukmst, solve, UnionLp};
use crate::rational::Rational;
use crate::single::{exact_kmfl, exact_ksteiner, FlQuery, KSteinerQuery};
use crate::solution::{LayerCover, LayerTree, Solution, SolutionKind};

/// What the winning guess did. Layers are 0-based here and 1-based in JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnionTrace {
    /// Largest root distance `L` or largest opening cost `o*`.
    pub guess: Rational,
    /// Filtered nodes `V^i` or facilities `F^i`.
    pub filtered: Vec<Vec<usize>>,
    /// Requests assigned to each layer by their largest `z^i`.
    pub parts: Vec<Vec<usize>>,
    /// `k^i = ⌊Σ_{v∈W^i} z_v⌋`.
    pub targets: Vec<usize>,
    pub lp_bound: Rational,
    /// Coverage before augmentation.
    pub before_augment: usize,
    /// (layer, request) pairs added by augmentation.
    pub augmented: Vec<(usize, usize)>,
}

impl UnionTrace {
    pub fn to_value(&self) -> Value {
        json!({
            "guess": self.guess.to_string(),
            "filtered": self.filtered,
            "parts": self.parts,
            "targets": self.targets,
            "lp_bound": self.lp_bound.to_string(),
            "before_augment": self.before_augment,
            "augmented": self.augmented.iter().map(|&(i, v)| json!([i + 1, v])).collect::<Vec<_>>(),
        })
    }
}

/// Splits every request with positive `z` to its dominant layer (lowest
/// layer on ties) and returns the parts with their targets.
fn partition(lp: &UnionLp, values: &[Rational], h: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut parts = vec![Vec::new(); h];
    let mut mass = vec![Rational::zero(); h];
    for (&v, &zv) in &lp.z {
        let z = &values[zv];
        if !z.is_positive() {
            continue;
        }
        let mut best: Option<(usize, &Rational)> = None;
        for (i, m) in lp.layer_z.iter().enumerate() {
            if let Some(&var) = m.get(&v) {
                if best.is_none_or(|(_, b)| &values[var] > b) {
                    best = Some((i, &values[var]));
                }
            }
        }
        let (i, _) = best.expect("covered request has a layer variable");
        parts[i].push(v);
        mass[i] += z;
    }
    let targets = mass.iter().map(|m| m.floor_i64().max(0) as usize).collect();
    (parts, targets)
}

fn distinct(values: impl IntoIterator<Item = Rational>) -> Vec<Rational> {
    values.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

pub fn lp_union_kmst(g: &GraphInstance) -> Result<(Solution, UnionTrace)> {
    if !g.rooted {
        return Err(Error::BadParams("LP union k-MST needs a rooted instance".into()));
    }
    let closed = g.closed();
    let roots: Vec<usize> = g.layers.iter().map(|l| l.root.expect("rooted")).collect();
    let countable: BTreeSet<usize> = g.countable().into_iter().collect();
    if g.k == 0 {
        let trees = roots.iter().map(|&r| LayerTree::single(r)).collect();
        return Ok((Solution::from_trees(g, SolutionKind::UnionTree, trees, BTreeSet::new())?, UnionTrace::default()));
    }
    let dist = |i: usize, v: usize| closed.layers[i].weights.finite(roots[i], v).cloned();
    let guesses = distinct((0..g.h()).flat_map(|i| countable.iter().filter_map(move |&v| dist(i, v))));
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut best: Option<(Solution, UnionTrace)> = None;
    for l in guesses {
        let filtered: Vec<Vec<usize>> = (0..g.h())
            .map(|i| (0..g.n).filter(|&v| v == roots[i] || dist(i, v).is_some_and(|d| d <= l)).collect())
            .collect();
        if !seen.insert(filtered.clone()) {
            continue;
        }
        let reach: BTreeSet<usize> = filtered.iter().flatten().copied().filter(|v| countable.contains(v)).collect();
        if reach.len() < g.k {
            continue;
        }
        let lp = build_ukmst(&closed, Some(&filtered))?;
        let frac = match solve(&lp.model) {
            Ok(f) => f,
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        };
        let (parts, targets) = partition(&lp, &frac.values, g.h());
        let mut nodes: Vec<BTreeSet<usize>> = Vec::with_capacity(g.h());
        for i in 0..g.h() {
            let q = KSteinerQuery {
                weights: &closed.layers[i].weights,
                terminals: parts[i].clone(),
                allowed: filtered[i].clone(),
                root: roots[i],
                k: targets[i],
            };
            nodes.push(exact_ksteiner(&q)?.1.nodes);
        }
        let mut covered: BTreeSet<usize> = nodes.iter().flatten().copied().filter(|v| countable.contains(v)).collect();
        let before = covered.len();
        let mut augmented = Vec::new();
        if covered.len() < g.k {
            let mut pairs: Vec<(Rational, usize, usize)> = Vec::new();
            for i in 0..g.h() {
                for &v in &filtered[i] {
                    if countable.contains(&v) && !covered.contains(&v) {
                        pairs.push((dist(i, v).expect("filtered"), i, v));
                    }
                }
            }
            pairs.sort();
            for (_, i, v) in pairs {
                if covered.len() >= g.k {
                    break;
                }
                if covered.insert(v) {
                    nodes[i].insert(v);
                    augmented.push((i, v));
                }
            }
        }
        let trees = nodes
            .into_iter()
            .zip(&closed.layers)
            .map(|(set, layer)| LayerTree::spanning(&layer.weights, set).expect("filtered nodes reach the root"))
            .collect();
        let sol = Solution::from_trees(g, SolutionKind::UnionTree, trees, covered)?;
        let trace = UnionTrace { guess: l, filtered, parts, targets, lp_bound: frac.objective, before_augment: before, augmented };
        if best.as_ref().is_none_or(|(b, _)| sol.cost < b.cost) {
            best = Some((sol, trace));
        }
    }
    best.ok_or_else(|| Error::Infeasible(format!("no guess covers {} nodes", g.k)))
}

pub fn lp_union_kmfl(c: &CoverInstance) -> Result<(Solution, UnionTrace)> {
    if c.k == 0 {
        let covers = vec![LayerCover::default(); c.h()];
        return Ok((Solution::from_covers(c, covers, BTreeSet::new())?, UnionTrace::default()));
    }
    let extra: BTreeMap<usize, Rational> = c.extra_cost.iter().cloned().enumerate().collect();
    let guesses = distinct(c.layers.iter().flat_map(|l| l.sets.iter().map(|s| s.open_cost.clone())));
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut best: Option<(Solution, UnionTrace)> = None;
    for o in guesses {
        let filtered: Vec<Vec<usize>> =
            c.layers.iter().map(|l| (0..l.sets.len()).filter(|&f| l.sets[f].open_cost <= o).collect()).collect();
        if !seen.insert(filtered.clone()) {
            continue;
        }
        let servable: BTreeSet<usize> = c
            .layers
            .iter()
            .zip(&filtered)
            .flat_map(|(l, fs)| fs.iter().flat_map(|&f| l.sets[f].conn.keys().copied()))
            .collect();
        if servable.len() < c.k {
            continue;
        }
        let lp = build_ukmfl(c, Some(&filtered))?;
        let frac = match solve(&lp.model) {
            Ok(f) => f,
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        };
        let (parts, targets) = partition(&lp, &frac.values, c.h());
        let mut covers = Vec::with_capacity(c.h());
        for i in 0..c.h() {
            let q = FlQuery {
                sets: &c.layers[i].sets,
                facilities: filtered[i].clone(),
                clients: parts[i].iter().copied().collect(),
                extra: extra.clone(),
                k: targets[i],
            };
            covers.push(exact_kmfl(&q)?.layer());
        }
        let mut covered: BTreeSet<usize> = covers.iter().flat_map(|cv| cv.assign.keys().copied()).collect();
        let before = covered.len();
        let mut augmented = Vec::new();
        if covered.len() < c.k {
            let mut pairs: Vec<(Rational, usize, usize, usize)> = Vec::new();
            for (i, layer) in c.layers.iter().enumerate() {
                for &f in &filtered[i] {
                    for (&x, w) in &layer.sets[f].conn {
                        if !covered.contains(&x) {
                            pairs.push((&layer.sets[f].open_cost + w, i, x, f));
                        }
                    }
                }
            }
            pairs.sort();
            for (_, i, x, f) in pairs {
                if covered.len() >= c.k {
                    break;
                }
                if covered.insert(x) {
                    covers[i].open.insert(f);
                    covers[i].assign.insert(x, f);
                    augmented.push((i, x));
                }
            }
        }
        let sol = Solution::from_covers(c, covers, covered)?;
        let trace = UnionTrace { guess: o, filtered, parts, targets, lp_bound: frac.objective, before_augment: before, augmented };
        if best.as_ref().is_none_or(|(b, _)| sol.cost < b.cost) {
            best = Some((sol, trace));
        }
    }
    best.ok_or_else(|| Error::Infeasible(format!("no guess serves {} clients", c.k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{CoverLayer, GraphLayer, ServingSet};
    use crate::rational::q;
    use crate::weights::Weights;

    #[test]
    fn single_layer_is_exact() {
        let w = Weights::from_edges(4, [(0, 1, q(1, 1)), (0, 2, q(2, 1)), (0, 3, q(3, 1)), (1, 2, q(1, 2))]);
        for k in 0..=3 {
            let g = GraphInstance::new(4, k, true, vec![GraphLayer::new(w.clone(), Some(0))]).unwrap();
            let (sol, trace) = lp_union_kmst(&g).unwrap();
            let expect = [q(0, 1), q(1, 1), q(3, 2), q(9, 2)][k].clone();
            assert_eq!(sol.cost, expect, "k = {k}");
            assert!(trace.targets.iter().sum::<usize>() + g.h() >= k);
        }
    }

    #[test]
    fn kmfl_free_openings() {
        let sets = vec![
            ServingSet::new(q(0, 1), BTreeMap::from([(0, q(1, 1)), (1, q(3, 1))])),
            ServingSet::new(q(0, 1), BTreeMap::from([(1, q(1, 1)), (2, q(2, 1))])),
        ];
        let c = CoverInstance::plain(3, 2, vec![CoverLayer::new(sets, true)]).unwrap();
        assert_eq!(lp_union_kmfl(&c).unwrap().0.cost, q(2, 1));
    }
}
