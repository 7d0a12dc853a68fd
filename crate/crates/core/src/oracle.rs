//! Brute-force exact optima for tiny instances.
//!
//! Graph layers are compressed into clusters of nodes at closure distance
//! zero before running Dreyfus-Wagner, so instances with many free edges
//! (reductions, padded roots) stay cheap.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, CoverLayer, GraphInstance, Instance};
use crate::rational::Rational;
use crate::single::SteinerTable;
use crate::solution::{LayerCover, LayerTree, Solution, SolutionKind};
use crate::weights::Weights;

/// Limits checked before any exponential search starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_n: usize,
    pub max_h: usize,
    /// Dreyfus-Wagner terminals per layer after zero-distance compression.
    pub max_terminals: usize,
    pub max_clients: usize,
    pub max_sets: usize,
    /// Cap on enumerated (state, entry) pairs and subsets.
    pub max_steps: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_n: 24, max_h: 12, max_terminals: 12, max_clients: 16, max_sets: 14, max_steps: 200_000_000 }
    }
}

fn over(what: String) -> Error {
    Error::BudgetExceeded(what)
}

/// Exact optimum and witness for either semantics.
pub fn exact(inst: &Instance) -> Result<(Rational, Solution)> {
    match inst {
        Instance::UnionKmst(_) | Instance::CoverUnion(_) => exact_union(inst),
        _ => exact_intersection(inst),
    }
}

pub fn exact_union(inst: &Instance) -> Result<(Rational, Solution)> {
    exact_union_with(inst, &OracleBudget::default())
}

pub fn exact_intersection(inst: &Instance) -> Result<(Rational, Solution)> {
    exact_intersection_with(inst, &OracleBudget::default())
}

pub fn exact_union_with(inst: &Instance, budget: &OracleBudget) -> Result<(Rational, Solution)> {
    match inst {
        Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => union_graph(g, budget),
        Instance::CoverUnion(c) | Instance::CoverIntersection(c) => union_cover(c, budget),
    }
}

pub fn exact_intersection_with(inst: &Instance, budget: &OracleBudget) -> Result<(Rational, Solution)> {
    match inst {
        Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => intersection_graph(g, budget),
        Instance::CoverUnion(c) | Instance::CoverIntersection(c) => intersection_cover(c, budget),
    }
}

fn check_graph(g: &GraphInstance, b: &OracleBudget) -> Result<()> {
    if g.n > b.max_n || g.n > 63 {
        return Err(over(format!("n = {} above oracle limit {}", g.n, b.max_n)));
    }
    if g.h() > b.max_h {
        return Err(over(format!("h = {} above oracle limit {}", g.h(), b.max_h)));
    }
    Ok(())
}

fn check_cover(c: &CoverInstance, b: &OracleBudget) -> Result<()> {
    if c.num_clients > b.max_clients || c.num_clients > 30 {
        return Err(over(format!("{} clients above oracle limit {}", c.num_clients, b.max_clients)));
    }
    if c.h() > b.max_h {
        return Err(over(format!("h = {} above oracle limit {}", c.h(), b.max_h)));
    }
    if let Some(l) = c.layers.iter().find(|l| l.sets.len() > b.max_sets) {
        return Err(over(format!("{} sets in a layer above oracle limit {}", l.sets.len(), b.max_sets)));
    }
    Ok(())
}

/// Groups of nodes at mutual closure distance zero, each sorted, ordered by
/// smallest member.
fn zero_clusters(closure: &Weights, nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &v in nodes {
        match out.iter_mut().find(|c| closure.finite(c[0], v).is_some_and(Rational::is_zero)) {
            Some(c) => c.push(v),
            None => out.push(vec![v]),
        }
    }
    out
}

/// Per-layer Steiner costs over cluster subsets.
struct LayerSteiner {
    closure: Weights,
    clusters: Vec<Vec<usize>>,
    /// Index of the cluster forced into every tree (the root's), if any.
    forced: Option<usize>,
    table: SteinerTable,
    /// Terminal position of each cluster in `table`.
    term: Vec<usize>,
}

impl LayerSteiner {
    fn new(closure: Weights, nodes: &[usize], root: Option<usize>, b: &OracleBudget) -> Result<Self> {
        let clusters = zero_clusters(&closure, nodes);
        if clusters.len() > b.max_terminals {
            return Err(over(format!("{} terminal clusters above oracle limit {}", clusters.len(), b.max_terminals)));
        }
        let forced = root.map(|r| clusters.iter().position(|c| c.contains(&r)).expect("root among nodes"));
        let reps: Vec<usize> = clusters.iter().map(|c| c[0]).collect();
        let table = SteinerTable::new(&closure, &reps, &reps);
        let term = (0..clusters.len()).collect();
        Ok(LayerSteiner { closure, clusters, forced, table, term })
    }

    fn cluster_bits(&self, clusters: u64) -> u64 {
        let mut bits = 0u64;
        for c in 0..self.clusters.len() {
            if clusters >> c & 1 == 1 {
                bits |= 1 << self.term[c];
            }
        }
        if let Some(f) = self.forced {
            bits |= 1 << self.term[f];
        }
        bits
    }

    fn cost(&self, clusters: u64) -> Option<Rational> {
        let bits = self.cluster_bits(clusters);
        if bits == 0 {
            return Some(Rational::zero());
        }
        self.table.cost(bits).cloned()
    }

    fn tree(&self, clusters: u64) -> LayerTree {
        let bits = self.cluster_bits(clusters);
        if bits == 0 {
            return LayerTree::default();
        }
        let base = self.table.tree(bits, &self.closure).expect("finite tree");
        let mut nodes = base.nodes.clone();
        for c in &self.clusters {
            if nodes.contains(&c[0]) {
                nodes.extend(c.iter().copied());
            }
        }
        LayerTree::spanning(&self.closure, nodes).expect("connected")
    }
}

struct Entry {
    covers: u64,
    cost: Rational,
    // cluster mask for graph layers, facility mask for cover layers
    pick: u64,
}

/// Min-cost combination of one entry per layer with `|∪ covers| ≥ k`,
/// adding `extra(state)` at the end. Returns (cost, final state, picks).
fn combine(frontiers: &[Vec<Entry>], k: usize, extra: impl Fn(u64) -> Rational, b: &OracleBudget) -> Result<Option<(Rational, u64, Vec<usize>)>> {
    let mut steps = 0u64;
    let mut layers: Vec<BTreeMap<u64, (Rational, u64, usize)>> = Vec::new();
    let mut cur: BTreeMap<u64, Rational> = BTreeMap::from([(0, Rational::zero())]);
    for front in frontiers {
        let mut next: BTreeMap<u64, (Rational, u64, usize)> = BTreeMap::new();
        steps += (cur.len() * front.len()) as u64;
        if steps > b.max_steps {
            return Err(over(format!("more than {} combination steps", b.max_steps)));
        }
        for (&state, c) in &cur {
            for (ei, e) in front.iter().enumerate() {
                let s = state | e.covers;
                let total = c + &e.cost;
                if next.get(&s).is_none_or(|(best, ..)| &total < best) {
                    next.insert(s, (total, state, ei));
                }
            }
        }
        cur = next.iter().map(|(&s, (c, ..))| (s, c.clone())).collect();
        layers.push(next);
    }
    let mut best: Option<(Rational, u64)> = None;
    for (&s, c) in &cur {
        if (s.count_ones() as usize) < k {
            continue;
        }
        let total = c + &extra(s);
        if best.as_ref().is_none_or(|(b, _)| &total < b) {
            best = Some((total, s));
        }
    }
    let Some((cost, last)) = best else { return Ok(None) };
    let mut picks = vec![0; frontiers.len()];
    let mut s = last;
    for i in (0..frontiers.len()).rev() {
        let (_, prev, ei) = &layers[i][&s];
        picks[i] = *ei;
        s = *prev;
    }
    Ok(Some((cost, last, picks)))
}

fn union_graph(g: &GraphInstance, b: &OracleBudget) -> Result<(Rational, Solution)> {
    check_graph(g, b)?;
    let countable = g.countable();
    let index: BTreeMap<usize, usize> = countable.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut steiners = Vec::new();
    let mut frontiers = Vec::new();
    for layer in &g.layers {
        let closure = layer.weights.metric_closure();
        let root = if g.rooted { layer.root } else { None };
        let nodes: Vec<usize> = match root {
            Some(r) => (0..g.n).filter(|&v| closure.finite(r, v).is_some()).collect(),
            None => (0..g.n).collect(),
        };
        let st = LayerSteiner::new(closure, &nodes, root, b)?;
        let member_bits = |c: &Vec<usize>| c.iter().filter_map(|v| index.get(v)).fold(0u64, |m, &i| m | 1 << i);
        let forced_bits = st.forced.map_or(0, |f| member_bits(&st.clusters[f]));
        let free: Vec<usize> = (0..st.clusters.len()).filter(|&c| Some(c) != st.forced).collect();
        let mut front = Vec::new();
        for m in 0u64..(1u64 << free.len()) {
            let mut clusters = 0u64;
            let mut covers = forced_bits;
            for (j, &c) in free.iter().enumerate() {
                if m >> j & 1 == 1 {
                    clusters |= 1 << c;
                    covers |= member_bits(&st.clusters[c]);
                }
            }
            if let Some(cost) = st.cost(clusters) {
                front.push(Entry { covers, cost, pick: clusters });
            }
        }
        frontiers.push(front);
        steiners.push(st);
    }
    let Some((cost, state, picks)) = combine(&frontiers, g.k, |_| Rational::zero(), b)? else {
        return Err(Error::Infeasible(format!("fewer than {} nodes reachable", g.k)));
    };
    let trees: Vec<LayerTree> = steiners.iter().zip(&frontiers).zip(&picks).map(|((st, f), &p)| st.tree(f[p].pick)).collect();
    let covered: BTreeSet<usize> = (0..countable.len()).filter(|i| state >> i & 1 == 1).map(|i| countable[i]).collect();
    let sol = Solution::from_trees(g, SolutionKind::UnionTree, trees, covered)?;
    debug_assert_eq!(sol.cost, cost);
    Ok((cost, sol))
}

/// Minimum cost of serving exactly each client subset in one layer, with
/// the facility subset achieving it.
struct CoverTable {
    best: Vec<Option<(Rational, u64)>>,
}

impl CoverTable {
    fn new(layer: &CoverLayer, clients: usize, b: &OracleBudget) -> Result<Self> {
        let m = layer.sets.len();
        let size = 1usize << clients;
        if (size as u64) << m > b.max_steps {
            return Err(over(format!("{m} sets over {clients} clients")));
        }
        let mut best: Vec<Option<(Rational, u64)>> = vec![None; size];
        best[0] = Some((Rational::zero(), 0));
        let mut sums: Vec<Option<Rational>> = vec![None; size];
        for f in 1u64..(1u64 << m) {
            let open: Rational = (0..m).filter(|&s| f >> s & 1 == 1).map(|s| &layer.sets[s].open_cost).sum();
            let conn: Vec<Option<Rational>> = (0..clients)
                .map(|c| (0..m).filter(|&s| f >> s & 1 == 1).filter_map(|s| layer.sets[s].conn.get(&c)).min().cloned())
                .collect();
            sums[0] = Some(open);
            for a in 1..size {
                let low = a.trailing_zeros() as usize;
                sums[a] = match (&sums[a & (a - 1)], &conn[low]) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                };
                if let Some(c) = &sums[a] {
                    if best[a].as_ref().is_none_or(|(b, _)| c < b) {
                        best[a] = Some((c.clone(), f));
                    }
                }
            }
        }
        Ok(CoverTable { best })
    }

    fn layer(&self, inst: &CoverLayer, clients: u64) -> LayerCover {
        let Some((_, f)) = &self.best[clients as usize] else { return LayerCover::default() };
        let mut out = LayerCover::default();
        for c in (0..64).filter(|c| clients >> c & 1 == 1) {
            let mut pick: Option<(&Rational, usize)> = None;
            for s in (0..inst.sets.len()).filter(|s| f >> s & 1 == 1) {
                if let Some(w) = inst.sets[s].conn.get(&c) {
                    if pick.is_none_or(|(b, _)| w < b) {
                        pick = Some((w, s));
                    }
                }
            }
            let (_, s) = pick.expect("served client");
            out.assign.insert(c, s);
            out.open.insert(s);
        }
        // Keep zero-use facilities closed unless the table needed them.
        for s in (0..inst.sets.len()).filter(|s| f >> s & 1 == 1) {
            if !inst.sets[s].open_cost.is_zero() {
                out.open.insert(s);
            }
        }
        out
    }
}

fn extra_of(c: &CoverInstance, mask: u64) -> Rational {
    (0..c.num_clients).filter(|i| mask >> i & 1 == 1).map(|i| &c.extra_cost[i]).sum()
}

fn union_cover(c: &CoverInstance, b: &OracleBudget) -> Result<(Rational, Solution)> {
    check_cover(c, b)?;
    let tables: Vec<CoverTable> = c.layers.iter().map(|l| CoverTable::new(l, c.num_clients, b)).collect::<Result<_>>()?;
    let frontiers: Vec<Vec<Entry>> = tables
        .iter()
        .map(|t| {
            t.best
                .iter()
                .enumerate()
                .filter_map(|(a, e)| e.as_ref().map(|(cost, _)| Entry { covers: a as u64, cost: cost.clone(), pick: a as u64 }))
                .collect()
        })
        .collect();
    let Some((cost, state, picks)) = combine(&frontiers, c.k, |s| extra_of(c, s), b)? else {
        return Err(Error::Infeasible(format!("fewer than {} clients servable", c.k)));
    };
    let covers: Vec<LayerCover> = (0..c.h()).map(|i| tables[i].layer(&c.layers[i], frontiers[i][picks[i]].pick)).collect();
    let covered: BTreeSet<usize> = (0..c.num_clients).filter(|i| state >> i & 1 == 1).collect();
    let sol = Solution::from_covers(c, covers, covered)?;
    debug_assert_eq!(sol.cost, cost);
    Ok((cost, sol))
}

fn intersection_cover(c: &CoverInstance, b: &OracleBudget) -> Result<(Rational, Solution)> {
    check_cover(c, b)?;
    let tables: Vec<CoverTable> = c.layers.iter().map(|l| CoverTable::new(l, c.num_clients, b)).collect::<Result<_>>()?;
    let mut best: Option<(Rational, u64)> = None;
    for mask in 0u64..(1u64 << c.num_clients) {
        if mask.count_ones() as usize != c.k {
            continue;
        }
        let mut total = extra_of(c, mask);
        let mut ok = true;
        for t in &tables {
            match &t.best[mask as usize] {
                Some((x, _)) => total += x,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && best.as_ref().is_none_or(|(b, _)| &total < b) {
            best = Some((total, mask));
        }
    }
    let Some((cost, mask)) = best else {
        return Err(Error::Infeasible(format!("no {} clients servable in every layer", c.k)));
    };
    let covers: Vec<LayerCover> = (0..c.h()).map(|i| tables[i].layer(&c.layers[i], mask)).collect();
    let covered: BTreeSet<usize> = (0..c.num_clients).filter(|i| mask >> i & 1 == 1).collect();
    let sol = Solution::from_covers(c, covers, covered)?;
    debug_assert_eq!(sol.cost, cost);
    Ok((cost, sol))
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k as u64).fold(1u64, |acc, i| acc.saturating_mul(n as u64 - i) / (i + 1))
}

fn intersection_graph(g: &GraphInstance, b: &OracleBudget) -> Result<(Rational, Solution)> {
    check_graph(g, b)?;
    let countable = g.countable();
    let closures: Vec<Weights> = g.layers.iter().map(|l| l.weights.metric_closure()).collect();
    let roots: Vec<Option<usize>> = g.layers.iter().map(|l| if g.rooted { l.root } else { None }).collect();
    if g.k == 0 {
        let trees = roots.iter().map(|r| r.map_or_else(LayerTree::default, LayerTree::single)).collect();
        let sol = Solution::from_trees(g, SolutionKind::IntersectionTree, trees, BTreeSet::new())?;
        return Ok((Rational::zero(), sol));
    }
    if g.k == countable.len() {
        // Only one candidate set: everything.
        let mut trees = Vec::new();
        for (cl, r) in closures.iter().zip(&roots) {
            let mut nodes = countable.clone();
            nodes.extend(r.iter().copied());
            let tree = LayerTree::spanning(cl, nodes).ok_or_else(|| Error::Infeasible("layer is disconnected".into()))?;
            trees.push(tree);
        }
        let sol = Solution::from_trees(g, SolutionKind::IntersectionTree, trees, countable.iter().copied().collect())?;
        return Ok((sol.cost.clone(), sol));
    }
    if binomial(countable.len(), g.k).saturating_mul(g.h() as u64) > b.max_steps {
        return Err(over(format!("too many {}-subsets of {} nodes", g.k, countable.len())));
    }
    let all: Vec<usize> = (0..g.n).collect();
    let steiners: Vec<LayerSteiner> =
        closures.iter().zip(&roots).map(|(cl, r)| LayerSteiner::new(cl.clone(), &all, *r, b)).collect::<Result<_>>()?;
    let cluster_of: Vec<Vec<usize>> = steiners
        .iter()
        .map(|st| {
            let mut of = vec![0; g.n];
            for (ci, c) in st.clusters.iter().enumerate() {
                for &v in c {
                    of[v] = ci;
                }
            }
            of
        })
        .collect();
    let mut best: Option<(Rational, u64, Vec<u64>)> = None;
    for mask in 0u64..(1u64 << countable.len()) {
        if mask.count_ones() as usize != g.k {
            continue;
        }
        let mut total = Rational::zero();
        let mut picks = Vec::new();
        let mut ok = true;
        for (st, of) in steiners.iter().zip(&cluster_of) {
            let cl = (0..countable.len()).filter(|i| mask >> i & 1 == 1).fold(0u64, |m, i| m | 1 << of[countable[i]]);
            match st.cost(cl) {
                Some(c) => total += &c,
                None => {
                    ok = false;
                    break;
                }
            }
            picks.push(cl);
        }
        if ok && best.as_ref().is_none_or(|(b, ..)| &total < b) {
            best = Some((total, mask, picks));
        }
    }
    let Some((cost, mask, picks)) = best else {
        return Err(Error::Infeasible(format!("no {} nodes connected in every layer", g.k)));
    };
    let trees: Vec<LayerTree> = steiners.iter().zip(&picks).map(|(st, &p)| st.tree(p)).collect();
    let covered: BTreeSet<usize> = (0..countable.len()).filter(|i| mask >> i & 1 == 1).map(|i| countable[i]).collect();
    let sol = Solution::from_trees(g, SolutionKind::IntersectionTree, trees, covered)?;
    debug_assert_eq!(sol.cost, cost);
    Ok((cost, sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{GraphLayer, ServingSet};
    use crate::rational::q;
    use crate::single::{exact_kmfl, exact_ksteiner, FlQuery, KSteinerQuery};
    use crate::solution::validate_solution;

    fn star(k: usize) -> GraphInstance {
        let w = Weights::from_edges(4, [(0, 1, q(1, 1)), (0, 2, q(2, 1)), (0, 3, q(3, 1))]);
        GraphInstance::new(4, k, true, vec![GraphLayer::new(w, Some(0))]).unwrap()
    }

    #[test]
    fn union_single_layer_matches_ksteiner() {
        for k in 0..=3 {
            let g = star(k);
            let (c, sol) = exact_union(&Instance::UnionKmst(g.clone())).unwrap();
            let cl = g.layers[0].weights.metric_closure();
            let q = KSteinerQuery { weights: &cl, terminals: vec![1, 2, 3], allowed: vec![0, 1, 2, 3], root: 0, k };
            assert_eq!(c, exact_ksteiner(&q).unwrap().0);
            assert!(validate_solution(&Instance::UnionKmst(g), &sol).feasible);
        }
    }

    #[test]
    fn union_picks_free_layer() {
        let w1 = Weights::complete(4, q(5, 1));
        let w2 = Weights::complete(4, q(0, 1));
        let g = GraphInstance::new(4, 3, true, vec![GraphLayer::new(w1, Some(0)), GraphLayer::new(w2, Some(0))]).unwrap();
        assert_eq!(exact_union(&Instance::UnionKmst(g)).unwrap().0, q(0, 1));
    }

    #[test]
    fn intersection_graph_basics() {
        let w = Weights::from_edges(3, [(0, 1, q(1, 1)), (1, 2, q(2, 1))]);
        let layers = vec![GraphLayer::new(w.clone(), None), GraphLayer::new(w, None)];
        let g = GraphInstance::new(3, 1, false, layers).unwrap();
        assert_eq!(exact_intersection(&Instance::IntersectionKmst(g.clone())).unwrap().0, q(0, 1));
        let (c, sol) = exact_intersection(&Instance::IntersectionKmst(g.with_k(2))).unwrap();
        assert_eq!(c, q(2, 1));
        assert!(validate_solution(&Instance::IntersectionKmst(g.with_k(2)), &sol).feasible);
        assert_eq!(exact_intersection(&Instance::IntersectionKmst(g.with_k(3))).unwrap().0, q(6, 1));
    }

    #[test]
    fn cover_union_matches_kmfl() {
        let sets = vec![
            ServingSet::new(q(2, 1), BTreeMap::from([(0, q(1, 1)), (1, q(2, 1))])),
            ServingSet::new(q(1, 1), BTreeMap::from([(1, q(0, 1)), (2, q(3, 1))])),
        ];
        for k in 0..=3 {
            let c = CoverInstance::plain(3, k, vec![CoverLayer::new(sets.clone(), false)]).unwrap();
            let (cost, sol) = exact_union(&Instance::CoverUnion(c.clone())).unwrap();
            let fq = FlQuery { sets: &sets, facilities: vec![0, 1], clients: (0..3).collect(), extra: BTreeMap::new(), k };
            assert_eq!(cost, exact_kmfl(&fq).unwrap().cost);
            assert!(validate_solution(&Instance::CoverUnion(c), &sol).feasible);
        }
    }

    #[test]
    fn cover_intersection_needs_all_layers() {
        let a = CoverLayer::new(vec![ServingSet::set(q(1, 1), [0, 1])], false);
        let b = CoverLayer::new(vec![ServingSet::set(q(1, 1), [0]), ServingSet::set(q(1, 1), [1])], false);
        let c = CoverInstance::plain(2, 2, vec![a, b]).unwrap();
        let inst = Instance::CoverIntersection(c);
        let (cost, sol) = exact_intersection(&inst).unwrap();
        assert_eq!(cost, q(3, 1));
        assert!(validate_solution(&inst, &sol).feasible);
    }

    #[test]
    fn budget_is_enforced() {
        let w = Weights::complete(30, q(1, 1));
        let g = GraphInstance::new(30, 3, false, vec![GraphLayer::new(w, None)]).unwrap();
        assert!(matches!(exact_union(&Instance::UnionKmst(g)), Err(Error::BudgetExceeded(_))));
    }
}
