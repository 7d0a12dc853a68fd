//! Min-cut separation and the cutting-plane loop for cut-family models.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::FlowNetwork;
use crate::lp::model::{CutFamily, FractionalSolution, LpModel, Row};
use crate::lp::simplex::solve_with_rows;
use crate::rational::Rational;

/// Capacity network of a family under `values`, indexed by position in `fam.nodes`.
fn network(fam: &CutFamily, values: &[Rational]) -> FlowNetwork {
    let pos = |x: usize| fam.nodes.iter().position(|&y| y == x).expect("edge endpoint in family");
    let mut g = FlowNetwork::new(fam.nodes.len());
    for &(u, v, var) in &fam.edges {
        if values[var].is_positive() {
            g.add_edge(pos(u), pos(v), &values[var]);
        }
    }
    g
}

/// Most violated cut for demand node `v` with value `z`: a node set `S`
/// containing `v` but not the root whose crossing capacity is below `z`.
pub fn separation_mincut(fam: &CutFamily, values: &[Rational], v: usize, z: &Rational) -> Option<BTreeSet<usize>> {
    if !z.is_positive() {
        return None;
    }
    let g = network(fam, values);
    let pos = |x: usize| fam.nodes.iter().position(|&y| y == x).expect("node in family");
    let (flow, side) = g.max_flow(pos(v), pos(fam.root));
    if &flow >= z {
        return None;
    }
    Some(fam.nodes.iter().zip(&side).filter(|(_, &s)| s).map(|(&x, _)| x).collect())
}

/// Maximum flow from `v` to the family root under `values`.
pub fn max_flow_to_root(fam: &CutFamily, values: &[Rational], v: usize) -> Rational {
    let g = network(fam, values);
    let pos = |x: usize| fam.nodes.iter().position(|&y| y == x).expect("node in family");
    g.max_flow(pos(v), pos(fam.root)).0
}

/// Default cut budget: `10·2^n` with `n` the largest family node count.
pub fn default_cut_limit(model: &LpModel) -> usize {
    let n = model.families.iter().map(|f| f.nodes.len()).max().unwrap_or(0);
    10usize.saturating_mul(1usize.checked_shl(n as u32).unwrap_or(usize::MAX))
}

/// Solves the explicit rows plus every family, separating violated cuts by
/// max-flow until none remain.
pub fn solve_cutting_plane(model: &LpModel, limit: Option<usize>) -> Result<FractionalSolution> {
    let limit = limit.unwrap_or_else(|| default_cut_limit(model));
    let mut seen: BTreeSet<(usize, usize, Vec<usize>)> = BTreeSet::new();
    let mut cuts: Vec<Row> = Vec::new();
    for (f, fam) in model.families.iter().enumerate() {
        for &(v, z) in &fam.demands {
            seen.insert((f, v, vec![v]));
            cuts.push(fam.row(&[v], z));
        }
    }
    loop {
        let mut sol = solve_with_rows(model, &cuts)?;
        let mut added = 0;
        for (f, fam) in model.families.iter().enumerate() {
            for &(v, z) in &fam.demands {
                if let Some(side) = separation_mincut(fam, &sol.values, v, &sol.values[z]) {
                    let side: Vec<usize> = side.into_iter().collect();
                    if seen.insert((f, v, side.clone())) {
                        cuts.push(fam.row(&side, z));
                        added += 1;
                    }
                }
            }
        }
        if added == 0 {
            sol.cuts = cuts.len();
            return Ok(sol);
        }
        if cuts.len() > limit {
            return Err(Error::IterationLimit(limit));
        }
    }
}

/// The same LP with every family constraint written out explicitly.
pub fn expand_cuts(model: &LpModel) -> LpModel {
    let mut out = model.clone();
    out.families.clear();
    for fam in &model.families {
        let others: Vec<usize> = fam.nodes.iter().copied().filter(|&x| x != fam.root).collect();
        for mask in 1u64..(1u64 << others.len()) {
            let side: Vec<usize> = others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
            for &(v, z) in &fam.demands {
                if side.contains(&v) {
                    out.rows.push(fam.row(&side, z));
                }
            }
        }
    }
    out
}

/// Solves a model with families: cutting plane when families exist, plain simplex otherwise.
pub fn solve(model: &LpModel) -> Result<FractionalSolution> {
    if model.families.is_empty() {
        solve_with_rows(model, &[])
    } else {
        solve_cutting_plane(model, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// Root 0, demand node 3 reached through 1 or 2.
    fn diamond() -> CutFamily {
        CutFamily {
            nodes: vec![0, 1, 2, 3],
            root: 0,
            edges: vec![(0, 1, 0), (1, 3, 1), (0, 2, 2), (2, 3, 3)],
            demands: vec![(3, 4)],
        }
    }

    #[test]
    fn empty_capacity_cuts_singleton() {
        let fam = diamond();
        let vals = vec![q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1)];
        assert_eq!(separation_mincut(&fam, &vals, 3, &q(1, 1)), Some(BTreeSet::from([3])));
    }

    #[test]
    fn saturated_path_has_no_cut() {
        let fam = diamond();
        let vals = vec![q(1, 1), q(1, 1), q(0, 1), q(0, 1), q(1, 1)];
        assert_eq!(separation_mincut(&fam, &vals, 3, &q(1, 1)), None);
    }

    #[test]
    fn fractional_paths() {
        let fam = diamond();
        let half = q(1, 2);
        let mut vals = vec![half.clone(), half.clone(), half.clone(), half.clone(), q(1, 1)];
        assert_eq!(separation_mincut(&fam, &vals, 3, &q(1, 1)), None);
        vals[3] = q(1, 4);
        let side = separation_mincut(&fam, &vals, 3, &q(1, 1)).unwrap();
        let row = fam.row(&side.iter().copied().collect::<Vec<_>>(), 4);
        let cap: Rational = row.coefs.iter().filter(|(j, _)| *j != 4).map(|(j, _)| vals[*j].clone()).sum();
        assert_eq!(cap, q(3, 4));
    }
}
