//! Single-layer partial covering: the density greedy and an exact k-facility
//! location solver.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::instance::ServingSet;
use crate::rational::Rational;
use crate::solution::LayerCover;

/// Cover at least `k` elements of `universe` using `sets`. Connecting element
/// `x` additionally costs `extra[x]` (missing entries are zero).
#[derive(Clone, Debug)]
pub struct PartialCoverQuery<'a> {
    pub sets: &'a [ServingSet],
    pub universe: BTreeSet<usize>,
    pub extra: BTreeMap<usize, Rational>,
    pub k: usize,
}

/// Open sets, assignment and covered elements of one layer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialCover {
    pub open: BTreeSet<usize>,
    pub assign: BTreeMap<usize, usize>,
    pub covered: BTreeSet<usize>,
    pub cost: Rational,
}

impl PartialCover {
    pub fn layer(&self) -> LayerCover {
        LayerCover { open: self.open.clone(), assign: self.assign.clone() }
    }
}

impl PartialCoverQuery<'_> {
    fn extra(&self, x: usize) -> Rational {
        self.extra.get(&x).cloned().unwrap_or_default()
    }

    /// Elements of the universe served by some set.
    pub fn coverable(&self) -> BTreeSet<usize> {
        self.universe
            .iter()
            .copied()
            .filter(|x| self.sets.iter().any(|s| s.allows(*x)))
            .collect()
    }

    /// Candidate elements of set `s` outside `covered`, by increasing
    /// `conn + extra` then index.
    fn ranked(&self, s: usize, covered: &BTreeSet<usize>) -> Vec<(Rational, usize)> {
        let mut out: Vec<(Rational, usize)> = self.sets[s]
            .conn
            .iter()
            .filter(|(x, _)| self.universe.contains(x) && !covered.contains(x))
            .map(|(&x, c)| (c + &self.extra(x), x))
            .collect();
        out.sort();
        out
    }
}

/// Density greedy over (set, count) pairs. A set that is already open is
/// offered again with zero opening cost.
pub fn greedy_partial_cover(q: &PartialCoverQuery) -> Result<PartialCover> {
    let reachable = q.coverable().len();
    if reachable < q.k {
        return Err(Error::Uncoverable { found: reachable, needed: q.k });
    }
    let mut out = PartialCover::default();
    while out.covered.len() < q.k {
        let need = q.k - out.covered.len();
        // (ratio, set, count, cost, picked)
        let mut best: Option<(Rational, usize, Rational, Vec<usize>)> = None;
        for s in 0..q.sets.len() {
            let ranked = q.ranked(s, &out.covered);
            let open = if out.open.contains(&s) { Rational::zero() } else { q.sets[s].open_cost.clone() };
            let mut total = open;
            for (j, (c, _)) in ranked.iter().take(need).enumerate() {
                total += c;
                let ratio = &total / &Rational::from(j + 1);
                if best.as_ref().is_none_or(|(b, ..)| &ratio < b) {
                    let picked = ranked[..=j].iter().map(|&(_, x)| x).collect();
                    best = Some((ratio, s, total.clone(), picked));
                }
            }
        }
        let (_, s, cost, picked) = best.expect("coverable elements remain");
        out.open.insert(s);
        out.cost += &cost;
        for x in picked {
            out.assign.insert(x, s);
            out.covered.insert(x);
        }
    }
    Ok(out)
}

/// Exact k-facility location over `facilities` (indices into `sets`).
#[derive(Clone, Debug)]
pub struct FlQuery<'a> {
    pub sets: &'a [ServingSet],
    pub facilities: Vec<usize>,
    pub clients: BTreeSet<usize>,
    pub extra: BTreeMap<usize, Rational>,
    pub k: usize,
}

const MAX_FACILITIES: usize = 20;

struct FlTable {
    fac: Vec<usize>,
    clients: Vec<usize>,
    // cost[c][f] = conn + extra
    cost: Vec<Vec<Option<Rational>>>,
}

impl FlTable {
    fn new(q: &FlQuery) -> Result<Self> {
        let fac: Vec<usize> = q.facilities.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if fac.len() > MAX_FACILITIES {
            return Err(Error::BudgetExceeded(format!("{} facilities", fac.len())));
        }
        if let Some(&f) = fac.iter().find(|&&f| f >= q.sets.len()) {
            return Err(Error::BadParams(format!("unknown facility {f}")));
        }
        let clients: Vec<usize> = q.clients.iter().copied().collect();
        let cost = clients
            .iter()
            .map(|&c| {
                let extra = q.extra.get(&c).cloned().unwrap_or_default();
                fac.iter().map(|&f| q.sets[f].conn.get(&c).map(|w| w + &extra)).collect()
            })
            .collect();
        Ok(FlTable { fac, clients, cost })
    }

    /// Cheapest facility of `mask` for each client, sorted by cost then client.
    fn serve(&self, mask: u64) -> Vec<(Rational, usize, usize)> {
        let mut out = Vec::new();
        for (ci, row) in self.cost.iter().enumerate() {
            let mut best: Option<(&Rational, usize)> = None;
            for (fi, c) in row.iter().enumerate() {
                if mask >> fi & 1 == 0 {
                    continue;
                }
                if let Some(c) = c {
                    if best.is_none_or(|(b, _)| c < b) {
                        best = Some((c, fi));
                    }
                }
            }
            if let Some((c, fi)) = best {
                out.push((c.clone(), self.clients[ci], self.fac[fi]));
            }
        }
        out.sort();
        out
    }

    fn open_cost(&self, sets: &[ServingSet], mask: u64) -> Rational {
        (0..self.fac.len()).filter(|fi| mask >> fi & 1 == 1).map(|fi| &sets[self.fac[fi]].open_cost).sum()
    }

    fn build(&self, sets: &[ServingSet], served: &[(Rational, usize, usize)]) -> PartialCover {
        let mut out = PartialCover::default();
        for (c, x, f) in served {
            out.cost += c;
            out.assign.insert(*x, *f);
            out.covered.insert(*x);
            out.open.insert(*f);
        }
        for f in &out.open {
            out.cost += &sets[*f].open_cost;
        }
        out
    }

    fn coverable(&self) -> usize {
        self.cost.iter().filter(|row| row.iter().any(Option::is_some)).count()
    }
}

/// Exact optimum: enumerate open facility subsets (pruned by opening cost),
/// assign each client to its cheapest open facility and keep the `k`
/// cheapest. Unused facilities are closed.
pub fn exact_kmfl(q: &FlQuery) -> Result<PartialCover> {
    let t = FlTable::new(q)?;
    let found = t.coverable();
    if found < q.k {
        return Err(Error::Uncoverable { found, needed: q.k });
    }
    if q.k == 0 {
        return Ok(PartialCover::default());
    }
    let mut best: Option<(Rational, Vec<(Rational, usize, usize)>)> = None;
    for mask in 1u64..(1u64 << t.fac.len()) {
        let open = t.open_cost(q.sets, mask);
        if best.as_ref().is_some_and(|(b, _)| &open >= b) {
            continue;
        }
        let served = t.serve(mask);
        if served.len() < q.k {
            continue;
        }
        let total = open + served[..q.k].iter().map(|(c, ..)| c).sum::<Rational>();
        if best.as_ref().is_none_or(|(b, _)| &total < b) {
            best = Some((total, served[..q.k].to_vec()));
        }
    }
    let (_, served) = best.expect("coverable");
    Ok(t.build(q.sets, &served))
}

/// Exact optimum for every target `j = 0..=|clients|` (`None` where
/// uncoverable). `q.k` is ignored.
pub fn exact_kmfl_all(q: &FlQuery) -> Result<Vec<Option<PartialCover>>> {
    let t = FlTable::new(q)?;
    let m = t.clients.len();
    let mut best: Vec<Option<(Rational, Vec<(Rational, usize, usize)>)>> = vec![None; m + 1];
    best[0] = Some((Rational::zero(), Vec::new()));
    for mask in 1u64..(1u64 << t.fac.len()) {
        let open = t.open_cost(q.sets, mask);
        let served = t.serve(mask);
        let mut total = open;
        for j in 1..=served.len() {
            total += &served[j - 1].0;
            if best[j].as_ref().is_none_or(|(b, _)| &total < b) {
                best[j] = Some((total.clone(), served[..j].to_vec()));
            }
        }
    }
    Ok(best.into_iter().map(|b| b.map(|(_, s)| t.build(q.sets, &s))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn query(sets: &[ServingSet], n: usize, k: usize) -> PartialCoverQuery<'_> {
        PartialCoverQuery { sets, universe: (0..n).collect(), extra: BTreeMap::new(), k }
    }

    #[test]
    fn greedy_basic_cases() {
        let one = [ServingSet::set(q(1, 1), 0..4)];
        assert_eq!(greedy_partial_cover(&query(&one, 4, 4)).unwrap().cost, q(1, 1));
        let two = [ServingSet::set(q(1, 1), [0, 1]), ServingSet::set(q(1, 1), [2, 3])];
        let out = greedy_partial_cover(&query(&two, 4, 3)).unwrap();
        assert_eq!(out.cost, q(2, 1));
        assert_eq!(out.open, BTreeSet::from([0, 1]));
        assert_eq!(greedy_partial_cover(&query(&two, 4, 5)).unwrap_err(), Error::Uncoverable { found: 4, needed: 5 });
    }

    #[test]
    fn greedy_extra_cost() {
        let sets = [ServingSet::set(q(0, 1), [0, 1])];
        let mut qu = query(&sets, 2, 1);
        qu.extra = BTreeMap::from([(0, q(3, 1)), (1, q(1, 1))]);
        let out = greedy_partial_cover(&qu).unwrap();
        assert_eq!(out.covered, BTreeSet::from([1]));
        assert_eq!(out.cost, q(1, 1));
    }

    fn fl(sets: &[ServingSet], clients: usize, k: usize) -> FlQuery<'_> {
        FlQuery { sets, facilities: (0..sets.len()).collect(), clients: (0..clients).collect(), extra: BTreeMap::new(), k }
    }

    #[test]
    fn kmfl_cases() {
        let free = [ServingSet::set(q(0, 1), 0..5)];
        assert_eq!(exact_kmfl(&fl(&free, 5, 3)).unwrap().cost, q(0, 1));
        let mut sets = vec![ServingSet::set(q(5, 1), 0..3)];
        sets.extend((0..3).map(|c| ServingSet::set(q(1, 1), [c])));
        let out = exact_kmfl(&fl(&sets, 3, 3)).unwrap();
        assert_eq!(out.cost, q(3, 1));
        let one = [ServingSet::new(q(2, 1), BTreeMap::from([(0, q(1, 1))]))];
        assert_eq!(exact_kmfl(&fl(&one, 1, 1)).unwrap().cost, q(3, 1));
        let all = exact_kmfl_all(&fl(&sets, 3, 0)).unwrap();
        let costs: Vec<Rational> = all.iter().map(|c| c.as_ref().unwrap().cost.clone()).collect();
        assert_eq!(costs, vec![q(0, 1), q(1, 1), q(2, 1), q(3, 1)]);
    }
}
