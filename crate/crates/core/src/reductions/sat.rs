//! CNF formulas and the SAT encoding into unrooted union k-MST.

use crate::error::{Error, Result};
use crate::instance::{GraphInstance, GraphLayer};
use crate::rational::{Cost, Rational};
use crate::weights::Weights;

/// Clauses over variables `1..=vars`; literal `-i` negates variable `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for c in &clauses {
            if c.is_empty() {
                return Err(Error::BadParams("empty clause".into()));
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(Error::BadParams(format!("literal {l} outside 1..={vars}")));
                }
                if c.contains(&-l) {
                    return Err(Error::BadParams(format!("clause holds {l} and its negation")));
                }
            }
        }
        Ok(Cnf { vars, clauses })
    }

    /// Exhaustive check, fine for a handful of variables.
    pub fn satisfiable(&self) -> bool {
        (0u64..(1u64 << self.vars)).any(|a| {
            self.clauses.iter().all(|c| c.iter().any(|&l| (a >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
        })
    }
}

/// Reads DIMACS CNF (`c` comments, `p cnf V C` header, zero-terminated clauses).
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut vars = None;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::Parse(format!("bad header: {line}")));
            }
            vars = Some(parts[1].parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?);
            continue;
        }
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| Error::Parse(format!("bad literal {tok}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else {
                cur.push(l);
            }
        }
    }
    if !cur.is_empty() {
        clauses.push(cur);
    }
    let vars = vars.ok_or_else(|| Error::Parse("missing p cnf header".into()))?;
    Cnf::new(vars, clauses).map_err(|e| Error::Parse(e.to_string()))
}

/// Nodes `t_i = 2(i-1)`, `f_i = 2(i-1)+1`, then one node per clause. Layer
/// `i` joins `t_i` (`f_i`) at cost zero to the clauses it satisfies; every
/// other pair is absent. Target `n' + m'`.
pub fn reduce_sat_to_unrooted(cnf: &Cnf) -> Result<GraphInstance> {
    let n = 2 * cnf.vars + cnf.clauses.len();
    let mut layers = Vec::with_capacity(cnf.vars);
    for i in 1..=cnf.vars {
        let mut w = Weights::new(n);
        for (j, c) in cnf.clauses.iter().enumerate() {
            let node = 2 * cnf.vars + j;
            if c.contains(&(i as i32)) {
                w.set(2 * (i - 1), node, Cost::Finite(Rational::zero()));
            }
            if c.contains(&-(i as i32)) {
                w.set(2 * (i - 1) + 1, node, Cost::Finite(Rational::zero()));
            }
        }
        layers.push(GraphLayer::new(w, None));
    }
    GraphInstance::new(n, cnf.vars + cnf.clauses.len(), false, layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round() {
        let cnf = parse_dimacs("c demo\np cnf 2 2\n1 -2 0\n2 0\n").unwrap();
        assert_eq!(cnf.clauses, vec![vec![1, -2], vec![2]]);
        assert!(cnf.satisfiable());
        assert!(!Cnf::new(1, vec![vec![1], vec![-1]]).unwrap().satisfiable());
        assert!(parse_dimacs("1 0\n").is_err());
    }

    #[test]
    fn sat_shape() {
        let g = reduce_sat_to_unrooted(&Cnf::new(1, vec![vec![1]]).unwrap()).unwrap();
        assert_eq!((g.n, g.h(), g.k), (3, 1, 2));
        assert!(g.layers[0].weights.finite(0, 2).is_some());
        assert!(g.layers[0].weights.finite(1, 2).is_none());
    }
}
