//! Splitting-off: removes Steiner nodes from a fractional k-Steiner solution
//! while keeping every terminal's demand routable to the root.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::FlowNetwork;
use crate::rational::Rational;
use crate::weights::Weights;

pub type EdgeValues = BTreeMap<(usize, usize), Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    /// Undirected capacities on pairs of `W ∪ {r}`.
    pub x: EdgeValues,
    pub steps: usize,
}

struct Arcs {
    n: usize,
    cap: Vec<Rational>,
}

impl Arcs {
    fn get(&self, u: usize, v: usize) -> &Rational {
        &self.cap[u * self.n + v]
    }

    fn network(&self) -> FlowNetwork {
        let mut g = FlowNetwork::new(self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                if self.get(u, v).is_positive() {
                    g.add_arc(u, v, self.get(u, v));
                }
            }
        }
        g
    }

    fn shifted(&self, u: usize, v: usize, t: usize, d: &Rational) -> Arcs {
        let mut cap = self.cap.clone();
        cap[u * self.n + v] -= d;
        cap[v * self.n + t] -= d;
        if u != t {
            cap[u * self.n + t] += d;
        }
        Arcs { n: self.n, cap }
    }
}

/// Largest `δ ≤ start` such that shifting `δ` from `(u,v),(v,t)` onto
/// `(u,t)` keeps every demand routable.
fn admissible(arcs: &Arcs, u: usize, v: usize, t: usize, start: Rational, demands: &[(usize, Rational)], root: usize) -> Rational {
    let mut d = start;
    'outer: loop {
        if d.is_zero() {
            return d;
        }
        let trial = arcs.shifted(u, v, t, &d).network();
        for (w, z) in demands {
            let (flow, side) = trial.max_flow(*w, root);
            if &flow >= z {
                continue;
            }
            let base = arcs.network().cut_capacity(&side);
            let mut coef = 0i64;
            if side[u] && !side[v] {
                coef -= 1;
            }
            if side[v] && !side[t] {
                coef -= 1;
            }
            if u != t && side[u] && !side[t] {
                coef += 1;
            }
            debug_assert!(coef < 0);
            let limit = (&base - z) / Rational::from(-coef);
            d = if limit.is_negative() { Rational::zero() } else { limit };
            continue 'outer;
        }
        return d;
    }
}

/// Splits off every non-terminal node other than `root`.
///
/// `x` holds undirected capacities over the nodes of `w`, `z` the demand of
/// each terminal. Opposite arcs left after splitting are merged by maximum.
pub fn splitting_off(w: &Weights, x: &EdgeValues, z: &BTreeMap<usize, Rational>, root: usize) -> Result<SplitResult> {
    let n = w.size();
    if let Some((a, b, c)) = w.triangle_violation() {
        return Err(Error::NotMetric(a, b, c));
    }
    let mut cap = vec![Rational::zero(); n * n];
    for (&(u, v), c) in x {
        if u >= n || v >= n || u == v {
            return Err(Error::BadParams(format!("bad edge ({u}, {v})")));
        }
        if c.is_negative() {
            return Err(Error::BadParams(format!("negative capacity on ({u}, {v})")));
        }
        cap[u * n + v] += c;
        cap[v * n + u] += c;
    }
    let mut arcs = Arcs { n, cap };
    let demands: Vec<(usize, Rational)> = z.iter().filter(|(_, d)| d.is_positive()).map(|(&v, d)| (v, d.clone())).collect();
    {
        let g = arcs.network();
        for (t, d) in &demands {
            let flow = g.max_flow(*t, root).0;
            if &flow < d {
                return Err(Error::InfeasibleInput(format!("terminal {t} demands {d} but routes {flow}")));
            }
        }
    }
    let is_terminal = |v: usize| v == root || z.contains_key(&v);
    let budget = 4 * n * n * n * n + 64;
    let mut steps = 0usize;
    while let Some(v) = (0..n).find(|&v| !is_terminal(v) && (0..n).any(|u| arcs.get(u, v).is_positive())) {
        let ins: Vec<usize> = (0..n).filter(|&u| arcs.get(u, v).is_positive()).collect();
        let outs: Vec<usize> = (0..n).filter(|&t| arcs.get(v, t).is_positive()).collect();
        let mut partial: Option<(usize, usize, Rational)> = None;
        let mut full: Option<(usize, usize, Rational)> = None;
        'scan: for &u in &ins {
            for &t in &outs {
                let most = arcs.get(u, v).clone().min(arcs.get(v, t).clone());
                let d = admissible(&arcs, u, v, t, most.clone(), &demands, root);
                if d == most {
                    full = Some((u, t, d));
                    break 'scan;
                }
                if partial.is_none() && d.is_positive() {
                    partial = Some((u, t, d));
                }
            }
        }
        let Some((u, t, d)) = full.or(partial) else {
            return Err(Error::InfeasibleInput(format!("no admissible split at node {v}")));
        };
        arcs = arcs.shifted(u, v, t, &d);
        steps += 1;
        if steps > budget {
            return Err(Error::BudgetExceeded(format!("splitting-off exceeded {budget} steps")));
        }
    }
    let mut out = EdgeValues::new();
    for a in (0..n).filter(|&a| is_terminal(a)) {
        for b in (a + 1..n).filter(|&b| is_terminal(b)) {
            let c = arcs.get(a, b).clone().max(arcs.get(b, a).clone());
            if c.is_positive() {
                out.insert((a, b), c);
            }
        }
    }
    Ok(SplitResult { x: out, steps })
}

/// `Σ w(e)·x_e`.
pub fn capacity_cost(w: &Weights, x: &EdgeValues) -> Rational {
    x.iter().map(|(&(u, v), c)| w.finite(u, v).expect("finite weight on used edge") * c).sum()
}

/// Max-flow from `t` to `root` under undirected capacities `x` on `n` nodes.
pub fn undirected_flow(n: usize, x: &EdgeValues, t: usize, root: usize) -> Rational {
    let mut g = FlowNetwork::new(n);
    for (&(u, v), c) in x {
        g.add_edge(u, v, c);
    }
    g.max_flow(t, root).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn identity_without_steiner_nodes() {
        let w = Weights::complete(3, q(1, 1));
        let x = EdgeValues::from([((0, 1), q(1, 2)), ((1, 2), q(1, 2))]);
        let z = BTreeMap::from([(1, q(1, 2)), (2, q(1, 2))]);
        let out = splitting_off(&w, &x, &z, 0).unwrap();
        assert_eq!(out.x, x);
        assert_eq!(out.steps, 0);
    }

    #[test]
    fn path_through_steiner_node() {
        // r = 0, s = 1 (Steiner), t = 2.
        let w = Weights::from_edges(3, [(0, 1, q(1, 1)), (1, 2, q(2, 1)), (0, 2, q(3, 1))]);
        let x = EdgeValues::from([((0, 1), q(1, 1)), ((1, 2), q(1, 1))]);
        let z = BTreeMap::from([(2, q(1, 1))]);
        let out = splitting_off(&w, &x, &z, 0).unwrap();
        assert_eq!(out.x, EdgeValues::from([((0, 2), q(1, 1))]));
        assert!(capacity_cost(&w, &out.x) <= capacity_cost(&w, &x) * q(2, 1));
    }

    #[test]
    fn fractional_star() {
        // Steiner hub 1, root 0, terminals 2..=4 with demand 1/2.
        let mut w = Weights::new(5);
        for v in [0, 2, 3, 4] {
            w.set(1, v, q(1, 1).into());
        }
        let w = w.metric_closure();
        let mut x = EdgeValues::new();
        for v in [0, 2, 3, 4] {
            x.insert((1.min(v), 1.max(v)), q(1, 2));
        }
        let z: BTreeMap<usize, Rational> = [2, 3, 4].into_iter().map(|t| (t, q(1, 2))).collect();
        let out = splitting_off(&w, &x, &z, 0).unwrap();
        for t in [2, 3, 4] {
            assert!(undirected_flow(5, &out.x, t, 0) >= q(1, 2));
        }
        assert!(capacity_cost(&w, &out.x) <= capacity_cost(&w, &x) * q(2, 1));
        assert!(out.x.keys().all(|&(a, b)| a != 1 && b != 1));
    }

    #[test]
    fn rejects_non_metric_and_infeasible() {
        let w = Weights::from_edges(3, [(0, 1, q(1, 1)), (1, 2, q(1, 1)), (0, 2, q(5, 1))]);
        let z = BTreeMap::from([(2, q(1, 1))]);
        assert!(matches!(splitting_off(&w, &EdgeValues::new(), &z, 0), Err(Error::NotMetric(..))));
        let w = w.metric_closure();
        assert!(matches!(splitting_off(&w, &EdgeValues::new(), &z, 0), Err(Error::InfeasibleInput(_))));
    }
}
