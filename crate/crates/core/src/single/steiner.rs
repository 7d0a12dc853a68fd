//! Dreyfus-Wagner Steiner trees and exact k-Steiner / k-MST.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph;
use crate::rational::Rational;
use crate::solution::LayerTree;
use crate::weights::Weights;

#[derive(Clone, Copy)]
enum Merge {
    None,
    Leaf,
    Split(u64),
}

/// Steiner costs for every subset of a terminal list, with Steiner nodes
/// drawn from an allowed node list. Distances come from the metric closure of
/// the subgraph induced by the allowed nodes.
pub struct SteinerTable {
    nodes: Vec<usize>,
    terms: Vec<usize>,
    dist: Vec<Vec<Option<Rational>>>,
    dp: Vec<Vec<Option<Rational>>>,
    relax: Vec<Vec<usize>>,
    merge: Vec<Vec<Merge>>,
}

fn add(a: &Option<Rational>, b: &Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

fn less(a: &Option<Rational>, b: &Option<Rational>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Closure of the subgraph of `w` induced by `nodes`, indexed by position.
pub(crate) fn induced_closure(w: &Weights, nodes: &[usize]) -> Weights {
    let mut sub = Weights::new(nodes.len());
    for (a, &u) in nodes.iter().enumerate() {
        for (b, &v) in nodes.iter().enumerate().skip(a + 1) {
            sub.set(a, b, w.get(u, v).clone());
        }
    }
    sub.metric_closure()
}

impl SteinerTable {
    /// Panics if a terminal is not among `allowed` or there are more than 24 terminals.
    pub fn new(w: &Weights, terminals: &[usize], allowed: &[usize]) -> Self {
        let nodes: Vec<usize> = allowed.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let terms: Vec<usize> = terminals.to_vec();
        assert!(terms.len() <= 24, "too many terminals for Dreyfus-Wagner");
        let sub = induced_closure(w, &nodes);
        let n = nodes.len();
        let dist: Vec<Vec<Option<Rational>>> =
            (0..n).map(|a| (0..n).map(|b| sub.finite(a, b).cloned()).collect()).collect();
        let tpos: Vec<usize> = terms
            .iter()
            .map(|t| nodes.iter().position(|x| x == t).expect("terminal among allowed nodes"))
            .collect();
        let size = 1usize << terms.len();
        let mut dp = vec![Vec::new(); size];
        let mut relax = vec![Vec::new(); size];
        let mut merge = vec![Vec::new(); size];
        dp[0] = vec![Some(Rational::zero()); n];
        relax[0] = (0..n).collect();
        merge[0] = vec![Merge::Leaf; n];
        for mask in 1..size {
            let mut merged: Vec<Option<Rational>> = vec![None; n];
            let mut how = vec![Merge::None; n];
            if mask.count_ones() == 1 {
                let t = mask.trailing_zeros() as usize;
                merged[tpos[t]] = Some(Rational::zero());
                how[tpos[t]] = Merge::Leaf;
            } else {
                let low = mask & mask.wrapping_neg();
                let rest = mask ^ low;
                // Submasks containing the lowest bit, excluding the full mask.
                let mut sub = rest;
                loop {
                    let a = sub | low;
                    if a != mask {
                        let b = mask ^ a;
                        for v in 0..n {
                            let c = add(&dp[a][v], &dp[b][v]);
                            if less(&c, &merged[v]) {
                                merged[v] = c;
                                how[v] = Merge::Split(a as u64);
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            }
            let mut best: Vec<Option<Rational>> = vec![None; n];
            let mut from = vec![usize::MAX; n];
            for u in 0..n {
                if merged[u].is_none() {
                    continue;
                }
                for v in 0..n {
                    let c = add(&merged[u], &dist[u][v]);
                    if less(&c, &best[v]) {
                        best[v] = c;
                        from[v] = u;
                    }
                }
            }
            dp[mask] = best;
            relax[mask] = from;
            merge[mask] = how;
        }
        SteinerTable { nodes, terms, dist, dp, relax, merge }
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terms
    }

    /// Cost of a Steiner tree on the terminals in `mask` (zero for the empty mask).
    pub fn cost(&self, mask: u64) -> Option<&Rational> {
        if mask == 0 {
            return self.dp[0].first().and_then(Option::as_ref);
        }
        let t = mask.trailing_zeros() as usize;
        let pos = self.nodes.iter().position(|&x| x == self.terms[t]).unwrap();
        self.dp[mask as usize][pos].as_ref()
    }

    fn collect_relaxed(&self, mask: usize, v: usize, out: &mut BTreeSet<usize>) {
        out.insert(v);
        let u = self.relax[mask][v];
        out.insert(u);
        self.collect_merged(mask, u, out);
    }

    fn collect_merged(&self, mask: usize, u: usize, out: &mut BTreeSet<usize>) {
        out.insert(u);
        match self.merge[mask][u] {
            Merge::Split(a) => {
                let a = a as usize;
                self.collect_relaxed(a, u, out);
                self.collect_relaxed(mask ^ a, u, out);
            }
            Merge::Leaf | Merge::None => {}
        }
    }

    /// An optimal tree for `mask`, as an MST over its node set in `closure`.
    pub fn tree(&self, mask: u64, closure: &Weights) -> Option<LayerTree> {
        if mask == 0 {
            return Some(LayerTree::default());
        }
        self.cost(mask)?;
        let t = mask.trailing_zeros() as usize;
        let pos = self.nodes.iter().position(|&x| x == self.terms[t]).unwrap();
        let mut idx = BTreeSet::new();
        self.collect_relaxed(mask as usize, pos, &mut idx);
        let nodes: Vec<usize> = idx.into_iter().map(|i| self.nodes[i]).collect();
        let tree = LayerTree::spanning(closure, nodes)?;
        Some(tree)
    }

    /// Distance between two allowed nodes in the induced closure.
    pub fn distance(&self, u: usize, v: usize) -> Option<&Rational> {
        let a = self.nodes.iter().position(|&x| x == u)?;
        let b = self.nodes.iter().position(|&x| x == v)?;
        self.dist[a][b].as_ref()
    }
}

/// Minimum Steiner tree spanning `required` inside the closure of the
/// subgraph induced by `allowed` (which must contain `required`).
pub fn steiner_tree_exact(w: &Weights, required: &[usize], allowed: &[usize]) -> Result<(Rational, LayerTree)> {
    let required: Vec<usize> = required.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if required.is_empty() {
        return Err(Error::BadParams("empty required set".into()));
    }
    let mut allowed: BTreeSet<usize> = allowed.iter().copied().collect();
    allowed.extend(required.iter().copied());
    let allowed: Vec<usize> = allowed.into_iter().collect();
    let closure = tree_closure(w, &allowed);
    for (a, &u) in required.iter().enumerate() {
        for &v in &required[a + 1..] {
            if closure.finite(u, v).is_none() {
                return Err(Error::Disconnected(u, v));
            }
        }
    }
    let table = SteinerTable::new(w, &required, &allowed);
    let full = (1u64 << required.len()) - 1;
    let cost = table.cost(full).cloned().expect("connected terminals have a tree");
    let tree = table.tree(full, &closure).expect("tree reconstructs");
    debug_assert_eq!(tree.cost(&closure).as_ref(), Some(&cost));
    Ok((cost, tree))
}

/// Closure of the induced subgraph on `allowed`, embedded back into the full
/// node range (other pairs stay absent).
pub(crate) fn tree_closure(w: &Weights, allowed: &[usize]) -> Weights {
    let sub = induced_closure(w, allowed);
    let mut out = Weights::new(w.size());
    for (a, &u) in allowed.iter().enumerate() {
        for (b, &v) in allowed.iter().enumerate().skip(a + 1) {
            out.set(u, v, sub.get(a, b).clone());
        }
    }
    out
}

/// Query for a tree through `root` covering at least `k` of `terminals`,
/// using Steiner nodes from `allowed`.
#[derive(Clone, Debug)]
pub struct KSteinerQuery<'a> {
    pub weights: &'a Weights,
    pub terminals: Vec<usize>,
    pub allowed: Vec<usize>,
    pub root: usize,
    pub k: usize,
}

impl KSteinerQuery<'_> {
    fn normalised(&self) -> (Vec<usize>, Vec<usize>) {
        let terms: Vec<usize> = self
            .terminals
            .iter()
            .copied()
            .filter(|&t| t != self.root)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut allowed: BTreeSet<usize> = self.allowed.iter().copied().collect();
        allowed.extend(terms.iter().copied());
        allowed.insert(self.root);
        (terms, allowed.into_iter().collect())
    }
}

/// Cheapest tree through the root covering at least `j` terminals, for every
/// `j = 0..=|W|` (`None` where unreachable). Terminals appearing as Steiner
/// nodes are covered too; `LayerTree::nodes` lists everything touched.
pub fn exact_ksteiner_all(q: &KSteinerQuery) -> Vec<Option<(Rational, LayerTree)>> {
    let (terms, allowed) = q.normalised();
    let closure = tree_closure(q.weights, &allowed);
    let mut out: Vec<Option<(Rational, LayerTree)>> = vec![None; terms.len() + 1];
    out[0] = Some((Rational::zero(), LayerTree::single(q.root)));
    if terms.is_empty() {
        return out;
    }
    let mut all = terms.clone();
    all.push(q.root);
    let table = SteinerTable::new(q.weights, &all, &allowed);
    let root_bit = 1u64 << terms.len();
    let mut best: Vec<Option<(Rational, u64)>> = vec![None; terms.len() + 1];
    for mask in 1u64..root_bit {
        let j = mask.count_ones() as usize;
        if let Some(c) = table.cost(mask | root_bit) {
            if best[j].as_ref().is_none_or(|(b, _)| c < b) {
                best[j] = Some((c.clone(), mask));
            }
        }
    }
    for j in 1..=terms.len() {
        if let Some((c, mask)) = &best[j] {
            let tree = table.tree(mask | root_bit, &closure).expect("tree reconstructs");
            out[j] = Some((c.clone(), tree));
        }
    }
    // A tree covering more terminals also covers fewer.
    for j in (1..terms.len()).rev() {
        if let (Some((c_more, _)), cur) = (&out[j + 1].clone(), &out[j]) {
            if cur.as_ref().is_none_or(|(c, _)| c_more < c) {
                out[j] = out[j + 1].clone();
            }
        }
    }
    out
}

/// Minimum-cost tree through the root covering at least `k` terminals.
pub fn exact_ksteiner(q: &KSteinerQuery) -> Result<(Rational, LayerTree)> {
    let (terms, allowed) = q.normalised();
    if q.k == 0 {
        return Ok((Rational::zero(), LayerTree::single(q.root)));
    }
    let closure = tree_closure(q.weights, &allowed);
    let reachable = terms.iter().filter(|&&t| closure.finite(q.root, t).is_some()).count();
    if reachable < q.k {
        return Err(Error::Unreachable { found: reachable, needed: q.k });
    }
    let no_steiner = allowed.len() == terms.len() + 1;
    if no_steiner || terms.len() > 16 {
        return ksteiner_by_mst(&closure, &terms, q.root, q.k, !no_steiner);
    }
    let all = exact_ksteiner_all(q);
    all[q.k].clone().ok_or(Error::Unreachable { found: reachable, needed: q.k })
}

/// k-MST by enumerating node sets of size at least `k` and taking MSTs. Exact
/// when no Steiner nodes exist beyond the terminals.
fn ksteiner_by_mst(closure: &Weights, terms: &[usize], root: usize, k: usize, steiner: bool) -> Result<(Rational, LayerTree)> {
    if steiner {
        return Err(Error::BudgetExceeded(format!("{} terminals with Steiner nodes", terms.len())));
    }
    if terms.len() > 24 {
        return Err(Error::BudgetExceeded(format!("{} terminals", terms.len())));
    }
    let mut best: Option<(Rational, u64)> = None;
    for mask in 0u64..(1u64 << terms.len()) {
        if (mask.count_ones() as usize) < k {
            continue;
        }
        let mut nodes: Vec<usize> = (0..terms.len()).filter(|i| mask >> i & 1 == 1).map(|i| terms[i]).collect();
        nodes.push(root);
        if let Some((c, _)) = graph::mst(closure, &nodes) {
            if best.as_ref().is_none_or(|(b, _)| &c < b) {
                best = Some((c, mask));
            }
        }
    }
    let (c, mask) = best.ok_or(Error::Unreachable { found: 0, needed: k })?;
    let mut nodes: Vec<usize> = (0..terms.len()).filter(|i| mask >> i & 1 == 1).map(|i| terms[i]).collect();
    nodes.push(root);
    let tree = LayerTree::spanning(closure, nodes).expect("connected");
    Ok((c, tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn trivial_required_sets() {
        let w = Weights::from_edges(3, [(0, 1, q(1, 1)), (1, 2, q(2, 1))]);
        let (c, t) = steiner_tree_exact(&w, &[1], &[0, 1, 2]).unwrap();
        assert_eq!(c, q(0, 1));
        assert_eq!(t.nodes, BTreeSet::from([1]));
        let (c, _) = steiner_tree_exact(&w, &[0, 2], &[0, 1, 2]).unwrap();
        assert_eq!(c, q(3, 1));
        let cut = Weights::from_edges(3, [(0, 1, q(1, 1))]);
        assert_eq!(steiner_tree_exact(&cut, &[0, 2], &[0, 1, 2]).unwrap_err(), Error::Disconnected(0, 2));
    }

    #[test]
    fn steiner_hub_is_used() {
        // Star with centre 0 at distance 1 from 1, 2, 3; leaves pairwise 2.
        let mut w = Weights::new(4);
        for v in 1..4 {
            w.set(0, v, q(1, 1).into());
        }
        let (c, t) = steiner_tree_exact(&w, &[1, 2, 3], &[0, 1, 2, 3]).unwrap();
        assert_eq!(c, q(3, 1));
        assert!(t.nodes.contains(&0));
        let (c, _) = steiner_tree_exact(&w.metric_closure(), &[1, 2, 3], &[1, 2, 3]).unwrap();
        assert_eq!(c, q(4, 1));
    }

    #[test]
    fn ksteiner_star() {
        let w = Weights::from_edges(4, [(0, 1, q(1, 1)), (0, 2, q(2, 1)), (0, 3, q(3, 1))]).metric_closure();
        let mk = |k| KSteinerQuery { weights: &w, terminals: vec![1, 2, 3], allowed: vec![0, 1, 2, 3], root: 0, k };
        assert_eq!(exact_ksteiner(&mk(0)).unwrap().0, q(0, 1));
        assert_eq!(exact_ksteiner(&mk(2)).unwrap().0, q(3, 1));
        let all = exact_ksteiner_all(&mk(0));
        let costs: Vec<Rational> = all.iter().map(|o| o.as_ref().unwrap().0.clone()).collect();
        assert_eq!(costs, vec![q(0, 1), q(1, 1), q(3, 1), q(6, 1)]);
    }
}
