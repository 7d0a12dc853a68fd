use std::fmt::Write as _;

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub lo: Rational,
    pub hi: Option<Rational>,
}

/// `Σ coef·x ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coefs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// Implicit family `Σ_{e∈δ(S)} x_e ≥ z_v` for every `S ⊆ nodes − {root}` and
/// demand node `v ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutFamily {
    pub nodes: Vec<usize>,
    pub root: usize,
    /// `(u, v, x variable)` for each undirected edge.
    pub edges: Vec<(usize, usize, usize)>,
    /// `(node, z variable)`.
    pub demands: Vec<(usize, usize)>,
}

impl CutFamily {
    /// The explicit row for cut `S` and demand variable `z`.
    pub fn row(&self, side: &[usize], z: usize) -> Row {
        let inside = |x: usize| side.contains(&x);
        let mut coefs: Vec<(usize, Rational)> = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| inside(u) != inside(v))
            .map(|&(_, _, var)| (var, Rational::one()))
            .collect();
        coefs.push((z, -Rational::one()));
        Row { coefs, rhs: Rational::zero() }
    }
}

/// Minimisation LP with `≥` rows and optional cut families.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LpModel {
    pub vars: Vec<Var>,
    pub rows: Vec<Row>,
    pub objective: Vec<(usize, Rational)>,
    pub families: Vec<CutFamily>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lo: Rational, hi: Option<Rational>) -> usize {
        self.vars.push(Var { name: name.into(), lo, hi });
        self.vars.len() - 1
    }

    pub fn add_row(&mut self, coefs: Vec<(usize, Rational)>, rhs: Rational) {
        debug_assert!(coefs.iter().all(|(j, _)| *j < self.vars.len()));
        self.rows.push(Row { coefs, rhs });
    }

    pub fn set_cost(&mut self, var: usize, c: Rational) {
        if !c.is_zero() {
            self.objective.push((var, c));
        }
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &values[*j]).sum()
    }

    /// Plain-text LP dump with exact `p/q` literals.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::from("Minimize\n obj:");
        let term = |out: &mut String, c: &Rational, name: &str| {
            if c.is_negative() {
                let _ = write!(out, " - {} {}", c.abs(), name);
            } else {
                let _ = write!(out, " + {} {}", c, name);
            }
        };
        if self.objective.is_empty() {
            out.push_str(" 0");
        }
        for (j, c) in &self.objective {
            term(&mut out, c, &self.vars[*j].name);
        }
        out.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, " c{i}:");
            for (j, c) in &row.coefs {
                term(&mut out, c, &self.vars[*j].name);
            }
            let _ = writeln!(out, " >= {}", row.rhs);
        }
        out.push_str("Bounds\n");
        for v in &self.vars {
            match &v.hi {
                Some(hi) => {
                    let _ = writeln!(out, " {} <= {} <= {}", v.lo, v.name, hi);
                }
                None => {
                    let _ = writeln!(out, " {} >= {}", v.name, v.lo);
                }
            }
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalSolution {
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// Cuts added by the separation loop (zero for explicit models).
    pub cuts: usize,
}
