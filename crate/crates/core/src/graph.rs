//! Spanning trees and exact max-flow on small dense graphs.

use std::collections::VecDeque;

use crate::rational::Rational;
use crate::weights::Weights;

/// Normalised undirected edge.
pub fn edge(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Minimum spanning tree of `nodes` under `w` (Prim, lowest-index ties).
///
/// Returns `None` when some node is at `+∞` from the rest. Edges come back
/// normalised and sorted.
pub fn mst(w: &Weights, nodes: &[usize]) -> Option<(Rational, Vec<(usize, usize)>)> {
    let mut nodes: Vec<usize> = nodes.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    let m = nodes.len();
    if m <= 1 {
        return Some((Rational::zero(), Vec::new()));
    }
    let mut in_tree = vec![false; m];
    let mut best: Vec<Option<(Rational, usize)>> = vec![None; m];
    in_tree[0] = true;
    for j in 1..m {
        best[j] = w.finite(nodes[0], nodes[j]).map(|c| (c.clone(), 0));
    }
    let mut total = Rational::zero();
    let mut edges = Vec::with_capacity(m - 1);
    for _ in 1..m {
        let mut pick: Option<usize> = None;
        for j in 0..m {
            if in_tree[j] {
                continue;
            }
            if let Some((c, _)) = &best[j] {
                let better = match pick {
                    None => true,
                    Some(p) => c < &best[p].as_ref().unwrap().0,
                };
                if better {
                    pick = Some(j);
                }
            }
        }
        let j = pick?;
        let (c, from) = best[j].clone().unwrap();
        in_tree[j] = true;
        total += &c;
        edges.push(edge(nodes[from], nodes[j]));
        for t in 0..m {
            if in_tree[t] {
                continue;
            }
            if let Some(c) = w.finite(nodes[j], nodes[t]) {
                let better = match &best[t] {
                    None => true,
                    Some((cur, _)) => c < cur,
                };
                if better {
                    best[t] = Some((c.clone(), j));
                }
            }
        }
    }
    edges.sort_unstable();
    Some((total, edges))
}

/// Whether `edges` form a single tree spanning exactly `nodes`.
pub fn is_tree(nodes: &[usize], edges: &[(usize, usize)]) -> bool {
    if nodes.is_empty() {
        return edges.is_empty();
    }
    if edges.len() + 1 != nodes.len() {
        return false;
    }
    let index = |x: usize| nodes.iter().position(|&y| y == x);
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for &(u, v) in edges {
        let (Some(a), Some(b)) = (index(u), index(v)) else {
            return false;
        };
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Directed capacity network on nodes `0..n`, stored densely.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    n: usize,
    cap: Vec<Rational>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork { n, cap: vec![Rational::zero(); n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn add_arc(&mut self, u: usize, v: usize, c: &Rational) {
        if u != v {
            self.cap[u * self.n + v] += c;
        }
    }

    /// Adds capacity `c` in both directions.
    pub fn add_edge(&mut self, u: usize, v: usize, c: &Rational) {
        self.add_arc(u, v, c);
        self.add_arc(v, u, c);
    }

    pub fn capacity(&self, u: usize, v: usize) -> &Rational {
        &self.cap[u * self.n + v]
    }

    /// Maximum `s`-`t` flow (Edmonds-Karp) and the source side of a minimum cut.
    pub fn max_flow(&self, s: usize, t: usize) -> (Rational, Vec<bool>) {
        let n = self.n;
        let mut res = self.cap.clone();
        let mut value = Rational::zero();
        loop {
            let mut pred = vec![usize::MAX; n];
            pred[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for v in 0..n {
                    if pred[v] == usize::MAX && res[u * n + v].is_positive() {
                        pred[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if pred[t] == usize::MAX {
                let side = pred.iter().map(|&p| p != usize::MAX).collect();
                return (value, side);
            }
            let mut bottleneck: Option<Rational> = None;
            let mut v = t;
            while v != s {
                let u = pred[v];
                let c = &res[u * n + v];
                if bottleneck.as_ref().is_none_or(|b| c < b) {
                    bottleneck = Some(c.clone());
                }
                v = u;
            }
            let b = bottleneck.unwrap();
            let mut v = t;
            while v != s {
                let u = pred[v];
                res[u * n + v] -= &b;
                res[v * n + u] += &b;
                v = u;
            }
            value += &b;
        }
    }

    /// Total capacity of arcs leaving `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> Rational {
        let n = self.n;
        let mut total = Rational::zero();
        for u in 0..n {
            if !side[u] {
                continue;
            }
            for v in 0..n {
                if !side[v] {
                    total += &self.cap[u * n + v];
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn mst_path() {
        let w = Weights::from_edges(3, [(0, 1, q(1, 1)), (1, 2, q(2, 1)), (0, 2, q(5, 1))]);
        let (c, e) = mst(&w, &[0, 1, 2]).unwrap();
        assert_eq!(c, q(3, 1));
        assert_eq!(e, vec![(0, 1), (1, 2)]);
        assert!(is_tree(&[0, 1, 2], &e));
        assert!(!is_tree(&[0, 1, 2], &[(0, 1)]));
        assert!(mst(&Weights::new(2), &[0, 1]).is_none());
    }

    #[test]
    fn flow_two_paths() {
        let mut g = FlowNetwork::new(4);
        g.add_edge(0, 1, &q(1, 2));
        g.add_edge(1, 3, &q(1, 2));
        g.add_edge(0, 2, &q(1, 2));
        g.add_edge(2, 3, &q(1, 4));
        let (f, side) = g.max_flow(3, 0);
        assert_eq!(f, q(3, 4));
        assert_eq!(g.cut_capacity(&side), q(3, 4));
        assert!(side[3] && !side[0]);
    }
}
