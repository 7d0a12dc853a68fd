//! Two-phase primal simplex over exact rationals with Bland's rule.

use crate::error::{Error, Result};
use crate::lp::model::{FractionalSolution, LpModel, Row};
use crate::rational::Rational;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    cost_rhs: Rational,
    /// Columns allowed to enter the basis.
    allowed: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if p != Rational::one() {
            let inv = p.recip();
            for x in self.rows[r].iter_mut().filter(|x| !x.is_zero()) {
                *x *= &inv;
            }
            self.rhs[r] *= &inv;
        }
        let support: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let prow: Vec<Rational> = support.iter().map(|&j| self.rows[r][j].clone()).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (&j, a) in support.iter().zip(&prow) {
                self.rows[i][j] -= &f * a;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (&j, a) in support.iter().zip(&prow) {
                self.cost[j] -= &f * a;
            }
            self.cost_rhs -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Runs Bland pivots until optimal. `Err(Unbounded)` on an unbounded ray.
    fn optimise(&mut self) -> Result<()> {
        loop {
            let Some(c) = (0..self.cost.len()).find(|&j| self.allowed[j] && self.cost[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(r, c);
        }
    }
}

/// Exact optimum of the explicit rows of `model`; cut families are ignored.
pub fn solve_simplex(model: &LpModel) -> Result<FractionalSolution> {
    solve_with_rows(model, &[])
}

pub(crate) fn solve_with_rows(model: &LpModel, extra: &[Row]) -> Result<FractionalSolution> {
    let ny = model.vars.len();
    // Shifted rows `Σ a·y ≥ b'` with `y = x − lo`, plus upper bounds.
    let mut rows: Vec<(Vec<(usize, Rational)>, Rational)> = Vec::new();
    for row in model.rows.iter().chain(extra) {
        let mut b = row.rhs.clone();
        for (j, a) in &row.coefs {
            if !model.vars[*j].lo.is_zero() {
                b -= a * &model.vars[*j].lo;
            }
        }
        rows.push((row.coefs.clone(), b));
    }
    for (j, v) in model.vars.iter().enumerate() {
        if let Some(hi) = &v.hi {
            if hi < &v.lo {
                return Err(Error::Infeasible(format!("bounds of {} are empty", v.name)));
            }
            rows.push((vec![(j, -Rational::one())], -(hi - &v.lo)));
        }
    }
    let m = rows.len();
    let needs_art: Vec<bool> = rows.iter().map(|(_, b)| b.is_positive()).collect();
    let na = needs_art.iter().filter(|&&x| x).count();
    let ncols = ny + m + na;
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cost: vec![Rational::zero(); ncols],
        cost_rhs: Rational::zero(),
        allowed: vec![true; ncols],
    };
    let mut art = ny + m;
    for (i, (coefs, b)) in rows.into_iter().enumerate() {
        let mut line = vec![Rational::zero(); ncols];
        if needs_art[i] {
            for (j, a) in coefs {
                line[j] += a;
            }
            line[ny + i] = -Rational::one();
            line[art] = Rational::one();
            t.basis.push(art);
            art += 1;
            t.rhs.push(b);
        } else {
            for (j, a) in coefs {
                line[j] -= a;
            }
            line[ny + i] = Rational::one();
            t.basis.push(ny + i);
            t.rhs.push(-b);
        }
        t.rows.push(line);
    }

    if na > 0 {
        // Phase 1: minimise the sum of artificials.
        for j in ny + m..ncols {
            t.cost[j] = Rational::one();
        }
        for i in 0..m {
            if t.basis[i] >= ny + m {
                for j in 0..ncols {
                    if !t.rows[i][j].is_zero() {
                        let a = t.rows[i][j].clone();
                        t.cost[j] -= a;
                    }
                }
                t.cost_rhs -= &t.rhs[i];
            }
        }
        t.optimise().map_err(|_| Error::Infeasible("phase 1 unbounded".into()))?;
        if !t.cost_rhs.is_zero() {
            return Err(Error::Infeasible("no point satisfies the constraints".into()));
        }
        // Drive zero-level artificials out; drop rows that are redundant.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= ny + m {
                match (0..ny + m).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(c) => {
                        t.pivot(i, c);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for j in ny + m..ncols {
            t.allowed[j] = false;
        }
    }

    // Phase 2.
    t.cost = vec![Rational::zero(); ncols];
    t.cost_rhs = Rational::zero();
    for (j, c) in &model.objective {
        t.cost[*j] += c;
    }
    for i in 0..t.rows.len() {
        let b = t.basis[i];
        if t.cost[b].is_zero() {
            continue;
        }
        let f = t.cost[b].clone();
        for j in 0..ncols {
            if !t.rows[i][j].is_zero() {
                let d = &f * &t.rows[i][j];
                t.cost[j] -= d;
            }
        }
        t.cost_rhs -= &f * &t.rhs[i];
    }
    t.optimise()?;

    let mut values: Vec<Rational> = model.vars.iter().map(|v| v.lo.clone()).collect();
    for (i, &b) in t.basis.iter().enumerate() {
        if b < ny {
            values[b] += &t.rhs[i];
        }
    }
    let objective = model.objective_value(&values);
    Ok(FractionalSolution { values, objective, cuts: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn single_bound() {
        let mut m = LpModel::new();
        let x = m.add_var("x", q(0, 1), None);
        m.add_row(vec![(x, q(1, 1))], q(1, 1));
        m.set_cost(x, q(1, 1));
        let s = solve_simplex(&m).unwrap();
        assert_eq!(s.objective, q(1, 1));
        assert_eq!(s.values, vec![q(1, 1)]);
    }

    #[test]
    fn forced_objective() {
        let mut m = LpModel::new();
        let x = m.add_var("x", q(0, 1), Some(q(1, 1)));
        let y = m.add_var("y", q(0, 1), None);
        m.add_row(vec![(x, q(1, 1)), (y, q(1, 1))], q(3, 1));
        m.set_cost(x, q(1, 1));
        m.set_cost(y, q(1, 1));
        let s = solve_simplex(&m).unwrap();
        assert_eq!(s.objective, q(3, 1));
        assert_eq!(&s.values[x] + &s.values[y], q(3, 1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut m = LpModel::new();
        let x = m.add_var("x", q(0, 1), Some(q(1, 1)));
        m.add_row(vec![(x, q(1, 1))], q(2, 1));
        assert!(matches!(solve_simplex(&m), Err(Error::Infeasible(_))));

        let mut m = LpModel::new();
        let x = m.add_var("x", q(0, 1), None);
        m.set_cost(x, q(-1, 1));
        assert_eq!(solve_simplex(&m), Err(Error::Unbounded));
    }

    #[test]
    fn shifted_lower_bounds_and_redundant_rows() {
        let mut m = LpModel::new();
        let x = m.add_var("x", q(1, 2), None);
        let y = m.add_var("y", q(0, 1), None);
        m.add_row(vec![(x, q(1, 1)), (y, q(1, 1))], q(2, 1));
        m.add_row(vec![(x, q(2, 1)), (y, q(2, 1))], q(4, 1));
        m.set_cost(x, q(2, 1));
        m.set_cost(y, q(3, 1));
        let s = solve_simplex(&m).unwrap();
        assert_eq!(s.objective, q(4, 1));
        assert_eq!(s.values, vec![q(2, 1), q(0, 1)]);
    }
}
