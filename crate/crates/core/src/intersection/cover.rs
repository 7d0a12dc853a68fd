//! Intersection set cover and nonmetric facility location: the two-layer
//! greedy and the recursive h-layer procedure.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, CoverLayer, ServingSet};
use crate::rational::Rational;
use crate::single::{greedy_partial_cover, PartialCover, PartialCoverQuery};
use crate::solution::{LayerCover, Solution};

/// A partial solution over some of the layers, with the cost the procedure
/// charged for it (opening a set twice is charged twice).
#[derive(Clone, Debug, Default)]
struct Part {
    covers: BTreeMap<usize, LayerCover>,
    covered: BTreeSet<usize>,
    cost: Rational,
}

impl Part {
    fn absorb(&mut self, other: Part) {
        for (i, cov) in other.covers {
            let mine = self.covers.entry(i).or_default();
            mine.open.extend(cov.open);
            mine.assign.extend(cov.assign);
        }
        self.covered.extend(other.covered);
        self.cost += &other.cost;
    }

    fn from_single(layer: usize, pc: PartialCover) -> Part {
        let covers = BTreeMap::from([(layer, pc.layer())]);
        Part { covers, covered: pc.covered, cost: pc.cost }
    }

    fn into_solution(mut self, c: &CoverInstance) -> Result<Solution> {
        let covers = (0..c.h()).map(|i| self.covers.remove(&i).unwrap_or_default()).collect();
        Solution::from_covers(c, covers, self.covered)
    }
}

fn extra_map(c: &CoverInstance) -> BTreeMap<usize, Rational> {
    c.extra_cost.iter().cloned().enumerate().collect()
}

fn servable_everywhere(layers: &[&CoverLayer], universe: &BTreeSet<usize>) -> BTreeSet<usize> {
    universe.iter().copied().filter(|&x| layers.iter().all(|l| l.sets.iter().any(|s| s.allows(x)))).collect()
}

/// Elements of `universe ∖ covered` that set `s` can serve, with the folded
/// extra cost `ō(x) + w(x, s)`.
fn folded(set: &ServingSet, universe: &BTreeSet<usize>, covered: &BTreeSet<usize>, extra: &BTreeMap<usize, Rational>) -> (BTreeSet<usize>, BTreeMap<usize, Rational>) {
    let mut uni = BTreeSet::new();
    let mut ex = BTreeMap::new();
    for (&x, w) in &set.conn {
        if universe.contains(&x) && !covered.contains(&x) {
            uni.insert(x);
            ex.insert(x, extra.get(&x).cloned().unwrap_or_default() + w);
        }
    }
    (uni, ex)
}

/// Two-layer greedy: each step buys one set `X` of one layer plus a partial
/// cover of `X`'s new elements in the other layer, minimising cost per
/// element.
pub fn sci_two_layer(c: &CoverInstance) -> Result<Solution> {
    if c.h() != 2 {
        return Err(Error::BadParams(format!("two-layer greedy needs h = 2, got {}", c.h())));
    }
    let extra = extra_map(c);
    let all: BTreeSet<usize> = (0..c.num_clients).collect();
    let layers: Vec<&CoverLayer> = c.layers.iter().collect();
    let universe = servable_everywhere(&layers, &all);
    if universe.len() < c.k {
        return Err(Error::Infeasible(format!("only {} clients servable in both layers", universe.len())));
    }
    let mut sol = Part::default();
    while sol.covered.len() < c.k {
        let need = c.k - sol.covered.len();
        let mut best: Option<(Rational, usize, usize, Part)> = None;
        for a in 0..2 {
            let other = 1 - a;
            for (x, set) in c.layers[a].sets.iter().enumerate() {
                let (uni, ex) = folded(set, &universe, &sol.covered, &extra);
                for b in 1..=need.min(uni.len()) {
                    let q = PartialCoverQuery { sets: &c.layers[other].sets, universe: uni.clone(), extra: ex.clone(), k: b };
                    let inner = greedy_partial_cover(&q)?;
                    let cost = &set.open_cost + &inner.cost;
                    let ratio = &cost / &Rational::from(b);
                    if best.as_ref().is_none_or(|(r, ..)| &ratio < r) {
                        let mut part = Part::from_single(other, inner);
                        part.cost = cost;
                        best = Some((ratio, a, x, part));
                    }
                }
            }
        }
        let Some((_, a, x, part)) = best else {
            return Err(Error::Infeasible("no candidate extends the coverage".into()));
        };
        let mut here = LayerCover::default();
        here.open.insert(x);
        for &e in &part.covered {
            here.assign.insert(e, x);
        }
        let mut step = part;
        step.covers.insert(a, here);
        sol.absorb(step);
    }
    sol.into_solution(c)
}

struct Fli<'a> {
    inst: &'a CoverInstance,
    calls: u64,
    cap: u64,
}

impl Fli<'_> {
    fn run(&mut self, layers: &[usize], universe: &BTreeSet<usize>, extra: &BTreeMap<usize, Rational>, k: usize) -> Result<Part> {
        self.calls += 1;
        if self.calls > self.cap {
            return Err(Error::BudgetExceeded(format!("more than {} recursive calls", self.cap)));
        }
        if k == 0 {
            return Ok(Part::default());
        }
        if layers.len() == 1 {
            let l = layers[0];
            let q = PartialCoverQuery { sets: &self.inst.layers[l].sets, universe: universe.clone(), extra: extra.clone(), k };
            return Ok(Part::from_single(l, greedy_partial_cover(&q)?));
        }
        if k == 1 {
            return self.single(layers, universe, extra);
        }
        let mut sol = Part::default();
        while sol.covered.len() < k {
            let need = k - sol.covered.len();
            let mut best: Option<(Rational, usize, usize, Part)> = None;
            for (pos, &r) in layers.iter().enumerate() {
                let rest: Vec<usize> = layers.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &l)| l).collect();
                let rest_layers: Vec<&CoverLayer> = rest.iter().map(|&l| &self.inst.layers[l]).collect();
                for (x, set) in self.inst.layers[r].sets.iter().enumerate() {
                    let (uni, ex) = folded(set, universe, &sol.covered, extra);
                    let uni = servable_everywhere(&rest_layers, &uni);
                    for j in 1..=need.min(uni.len()) {
                        let inner = self.run(&rest, &uni, &ex, j)?;
                        let cost = &set.open_cost + &inner.cost;
                        let ratio = &cost / &Rational::from(j);
                        if best.as_ref().is_none_or(|(b, ..)| &ratio < b) {
                            let mut part = inner;
                            part.cost = cost;
                            best = Some((ratio, r, x, part));
                        }
                    }
                }
            }
            let Some((_, r, x, part)) = best else {
                return Err(Error::Infeasible("no candidate extends the coverage".into()));
            };
            let mut here = LayerCover::default();
            here.open.insert(x);
            for &e in &part.covered {
                here.assign.insert(e, x);
            }
            let mut step = part;
            step.covers.insert(r, here);
            sol.absorb(step);
        }
        Ok(sol)
    }

    /// Exact single-element optimum.
    fn single(&self, layers: &[usize], universe: &BTreeSet<usize>, extra: &BTreeMap<usize, Rational>) -> Result<Part> {
        let mut best: Option<(Rational, usize, Vec<usize>)> = None;
        'elements: for &e in universe {
            let mut total = extra.get(&e).cloned().unwrap_or_default();
            let mut picks = Vec::new();
            for &l in layers {
                let mut cheapest: Option<(Rational, usize)> = None;
                for (x, set) in self.inst.layers[l].sets.iter().enumerate() {
                    if let Some(w) = set.conn.get(&e) {
                        let c = &set.open_cost + w;
                        if cheapest.as_ref().is_none_or(|(b, _)| &c < b) {
                            cheapest = Some((c, x));
                        }
                    }
                }
                let Some((c, x)) = cheapest else { continue 'elements };
                total += &c;
                picks.push(x);
            }
            if best.as_ref().is_none_or(|(b, ..)| &total < b) {
                best = Some((total, e, picks));
            }
        }
        let (cost, e, picks) = best.ok_or_else(|| Error::Infeasible("no element servable in every layer".into()))?;
        let mut part = Part { cost, covered: BTreeSet::from([e]), ..Part::default() };
        for (&l, x) in layers.iter().zip(picks) {
            let mut cov = LayerCover::default();
            cov.open.insert(x);
            cov.assign.insert(e, x);
            part.covers.insert(l, cov);
        }
        Ok(part)
    }
}

/// Recursive-call budget `(N·k²)^h` with `N` the total number of sets.
pub fn fli_call_cap(c: &CoverInstance) -> u64 {
    let n: u64 = c.layers.iter().map(|l| l.sets.len() as u64).sum::<u64>().max(1);
    let k = (c.k as u64).max(1);
    n.saturating_mul(k * k).saturating_pow(c.h() as u32).max(1)
}

/// The h-layer procedure; returns the solution and the number of recursive calls.
pub fn fli_with_calls(c: &CoverInstance) -> Result<(Solution, u64)> {
    if c.h() == 0 {
        return Err(Error::BadParams("no layers".into()));
    }
    let layers: Vec<usize> = (0..c.h()).collect();
    let refs: Vec<&CoverLayer> = c.layers.iter().collect();
    let universe = servable_everywhere(&refs, &(0..c.num_clients).collect());
    if universe.len() < c.k {
        return Err(Error::Infeasible(format!("only {} clients servable in every layer", universe.len())));
    }
    let mut run = Fli { inst: c, calls: 0, cap: fli_call_cap(c) };
    let part = run.run(&layers, &universe, &extra_map(c), c.k)?;
    Ok((part.into_solution(c)?, run.calls))
}

pub fn fli(c: &CoverInstance) -> Result<Solution> {
    Ok(fli_with_calls(c)?.0)
}

/// Intersection k-set cover: per layer a list of `(cost, members)` sets.
pub fn intersection_ksc_via_fli(num_elements: usize, layers: &[Vec<(Rational, Vec<usize>)>], k: usize) -> Result<Solution> {
    let layers = layers
        .iter()
        .map(|sets| CoverLayer::new(sets.iter().map(|(c, m)| ServingSet::set(c.clone(), m.iter().copied())).collect(), false))
        .collect();
    let inst = CoverInstance::plain(num_elements, k, layers)?;
    fli(&inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn two(k: usize) -> CoverInstance {
        let a = CoverLayer::new(vec![ServingSet::set(q(1, 1), [0, 1]), ServingSet::set(q(3, 1), [2, 3])], false);
        let b = CoverLayer::new(vec![ServingSet::set(q(1, 1), [0]), ServingSet::set(q(1, 1), [1, 2, 3])], false);
        CoverInstance::plain(4, k, vec![a, b]).unwrap()
    }

    #[test]
    fn free_universal_sets() {
        let l = CoverLayer::new(vec![ServingSet::set(q(0, 1), 0..5)], false);
        let c = CoverInstance::plain(5, 5, vec![l.clone(), l]).unwrap();
        assert_eq!(sci_two_layer(&c).unwrap().cost, q(0, 1));
        assert_eq!(fli(&c).unwrap().cost, q(0, 1));
    }

    #[test]
    fn k1_is_exact() {
        let c = two(1);
        assert_eq!(fli(&c).unwrap().cost, q(2, 1));
        assert_eq!(sci_two_layer(&c).unwrap().cost, q(2, 1));
    }

    #[test]
    fn feasible_in_every_layer() {
        for k in 1..=4 {
            let c = two(k);
            for sol in [fli(&c).unwrap(), sci_two_layer(&c).unwrap()] {
                let v = crate::validate_solution(&crate::Instance::CoverIntersection(c.clone()), &sol);
                assert!(v.feasible, "{:?}", v.reasons);
            }
        }
    }

    #[test]
    fn singleton_sets() {
        let layer = vec![(q(3, 1), vec![0]), (q(1, 1), vec![1]), (q(2, 1), vec![2])];
        let sol = intersection_ksc_via_fli(3, &[layer.clone(), layer], 2).unwrap();
        assert_eq!(sol.cost, q(6, 1));
        assert_eq!(sol.covered, BTreeSet::from([1, 2]));
    }
}
