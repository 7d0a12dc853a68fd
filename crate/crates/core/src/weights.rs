//! Symmetric edge-weight matrices with an explicit `+∞` for absent edges.

use crate::rational::{Cost, Rational};

/// Dense symmetric weight matrix over nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights {
    n: usize,
    entries: Vec<Cost>,
}

impl Weights {
    /// All pairs absent, zero diagonal.
    pub fn new(n: usize) -> Self {
        let mut entries = vec![Cost::Infinite; n * n];
        for v in 0..n {
            entries[v * n + v] = Cost::zero();
        }
        Weights { n, entries }
    }

    /// Every pair at the same finite weight.
    pub fn complete(n: usize, w: Rational) -> Self {
        let mut out = Weights::new(n);
        for u in 0..n {
            for v in u + 1..n {
                out.set(u, v, Cost::Finite(w.clone()));
            }
        }
        out
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut out = Weights::new(n);
        for (u, v, w) in edges {
            out.set(u, v, Cost::Finite(w));
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> &Cost {
        &self.entries[u * self.n + v]
    }

    /// Finite weight or `None`.
    pub fn finite(&self, u: usize, v: usize) -> Option<&Rational> {
        self.get(u, v).finite()
    }

    /// Sets both `(u,v)` and `(v,u)`; diagonal writes are ignored.
    pub fn set(&mut self, u: usize, v: usize, c: Cost) {
        if u == v {
            return;
        }
        if let Cost::Finite(r) = &c {
            assert!(!r.is_negative(), "negative weight on ({u}, {v})");
        }
        self.entries[u * self.n + v] = c.clone();
        self.entries[v * self.n + u] = c;
    }

    /// Finite off-diagonal pairs `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if let Some(w) = self.finite(u, v) {
                    out.push((u, v, w.clone()));
                }
            }
        }
        out
    }

    /// All-pairs shortest paths (Floyd-Warshall).
    pub fn metric_closure(&self) -> Weights {
        let n = self.n;
        let mut d = self.entries.clone();
        for m in 0..n {
            for u in 0..n {
                let Cost::Finite(um) = d[u * n + m].clone() else {
                    continue;
                };
                for v in 0..n {
                    if let Cost::Finite(mv) = &d[m * n + v] {
                        let via = &um + mv;
                        let better = match &d[u * n + v] {
                            Cost::Finite(cur) => via < *cur,
                            Cost::Infinite => true,
                        };
                        if better {
                            d[u * n + v] = Cost::Finite(via);
                        }
                    }
                }
            }
        }
        Weights { n, entries: d }
    }

    /// First triple `(u, m, v)` with `w(u,v) > w(u,m) + w(m,v)`, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for u in 0..n {
            for m in 0..n {
                let Some(um) = self.finite(u, m) else { continue };
                for v in 0..n {
                    let Some(mv) = self.finite(m, v) else { continue };
                    let via = um + mv;
                    if *self.get(u, v) > Cost::Finite(via) {
                        return Some((u, m, v));
                    }
                }
            }
        }
        None
    }

    pub fn is_metric(&self) -> bool {
        self.triangle_violation().is_none()
    }

    /// Entrywise sum; `+∞` absorbs.
    pub fn sum(layers: &[&Weights]) -> Weights {
        let n = layers.first().map_or(0, |w| w.n);
        let mut out = Weights::new(n);
        for u in 0..n {
            for v in u + 1..n {
                let mut c = Cost::zero();
                for w in layers {
                    c = c.add(w.get(u, v));
                }
                out.set(u, v, c);
            }
        }
        out
    }

    /// Largest finite entry (zero when none).
    pub fn max_finite(&self) -> Rational {
        self.entries
            .iter()
            .filter_map(|c| c.finite())
            .cloned()
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn closure_examples() {
        let tri = Weights::complete(3, q(1, 1));
        assert_eq!(tri.metric_closure(), tri);

        let path = Weights::from_edges(3, [(0, 1, q(1, 1)), (1, 2, q(1, 1))]);
        assert_eq!(path.metric_closure().get(0, 2), &Cost::Finite(q(2, 1)));
        assert!(!path.is_metric());
        assert!(path.metric_closure().is_metric());

        let split = Weights::from_edges(3, [(0, 1, q(1, 1))]);
        assert_eq!(split.metric_closure().get(0, 2), &Cost::Infinite);
    }

    #[test]
    fn closure_is_idempotent_and_dominated() {
        let w = Weights::from_edges(
            5,
            [(0, 1, q(5, 1)), (1, 2, q(1, 2)), (0, 2, q(1, 1)), (3, 4, q(2, 3)), (2, 3, q(7, 1))],
        );
        let c = w.metric_closure();
        assert_eq!(c.metric_closure(), c);
        for (u, v, x) in w.edges() {
            assert!(c.finite(u, v).unwrap() <= &x);
        }
    }
}
