//! Algorithm dispatch, proven ratio envelopes and solve reports.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::intersection::{fli, intersection_kmst, sci_two_layer};
use crate::lp::{default_relaxation, solve};
use crate::oracle;
use crate::rational::Rational;
use crate::solution::Solution;
use crate::union::{greedy_union_kmfl, greedy_union_kmst, lp_union_kmfl, lp_union_kmst, unrooted_union_kmst, DEFAULT_ROOT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Greedy,
    Lp,
    Sci,
    Fli,
    SumMetric,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] =
        [Algorithm::Greedy, Algorithm::Lp, Algorithm::Sci, Algorithm::Fli, Algorithm::SumMetric, Algorithm::Exact];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Lp => "lp",
            Algorithm::Sci => "sci",
            Algorithm::Fli => "fli",
            Algorithm::SumMetric => "sum-metric",
            Algorithm::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown algorithm {s:?}")))
    }

    /// Whether the algorithm accepts this instance.
    pub fn applies(self, inst: &Instance) -> bool {
        match (self, inst) {
            (Algorithm::Exact, _) => true,
            (Algorithm::Greedy, Instance::UnionKmst(g)) => g.rooted,
            (Algorithm::Lp, Instance::UnionKmst(_)) => true,
            (Algorithm::Greedy | Algorithm::Lp, Instance::CoverUnion(_)) => true,
            (Algorithm::Sci, Instance::CoverIntersection(c)) => c.h() == 2,
            (Algorithm::Fli, Instance::CoverIntersection(_)) => true,
            (Algorithm::SumMetric, Instance::IntersectionKmst(_)) => true,
            _ => false,
        }
    }
}

/// Natural log, clamped so `k = 0` behaves like `k = 1`.
fn ln(k: usize) -> f64 {
    (k.max(1) as f64).ln()
}

pub fn greedy_envelope(k: usize) -> f64 {
    1.0 + ln(k)
}

pub fn sci_envelope(k: usize) -> f64 {
    2.0 * (1.0 + ln(k)) * (k.max(1) as f64).sqrt()
}

pub fn sum_metric_envelope(k: usize, h: usize) -> f64 {
    16.0 * (k.max(1) as f64).powf(1.0 - 1.0 / h.max(1) as f64)
}

pub fn fli_envelope(k: usize, h: usize) -> f64 {
    if k <= 1 {
        return 1.0;
    }
    let h = h.max(1) as f64;
    4.0 * (k as f64).powf(1.0 - 1.0 / h) * ln(k).powf(1.0 / h)
}

/// Proven approximation factor of `algo` on an instance of this shape.
pub fn envelope(algo: Algorithm, inst: &Instance) -> f64 {
    let (k, h) = (inst.k(), inst.h());
    match algo {
        Algorithm::Greedy => greedy_envelope(k),
        Algorithm::Lp => 6.0 * h as f64,
        Algorithm::Sci => sci_envelope(k),
        Algorithm::Fli => fli_envelope(k, h),
        Algorithm::SumMetric => sum_metric_envelope(k, h),
        Algorithm::Exact => 1.0,
    }
}

/// A rational strictly below `x` (by at most 2e-9), so that
/// `cost <= lower(x) * opt` implies the real inequality.
pub fn certified_lower(x: f64) -> Rational {
    Rational::floor_of_f64(x * 1e9 - 1.0, 1) / Rational::from(1_000_000_000i64)
}

/// `cost <= factor * opt`, decided without rounding in the pass direction.
/// Exact factors of 1 compare exactly.
pub fn within(cost: &Rational, opt: &Rational, factor: f64) -> bool {
    if cost <= opt {
        return true;
    }
    cost <= &(certified_lower(factor) * opt)
}

/// Output of one solver run.
#[derive(Clone, Debug)]
pub struct Run {
    pub solution: Solution,
    pub trace: Option<Value>,
}

pub fn run(algo: Algorithm, inst: &Instance) -> Result<Run> {
    let plain = |solution| Ok(Run { solution, trace: None });
    match (algo, inst) {
        (Algorithm::Exact, _) => plain(oracle::exact(inst)?.1),
        (Algorithm::Greedy, Instance::UnionKmst(g)) if g.rooted => plain(greedy_union_kmst(g)?),
        (Algorithm::Greedy, Instance::CoverUnion(c)) => plain(greedy_union_kmfl(c)?),
        (Algorithm::Lp, Instance::UnionKmst(g)) if g.rooted => {
            let (solution, trace) = lp_union_kmst(g)?;
            Ok(Run { solution, trace: Some(trace.to_value()) })
        }
        (Algorithm::Lp, Instance::UnionKmst(g)) => plain(unrooted_union_kmst(g, DEFAULT_ROOT_CAP)?),
        (Algorithm::Lp, Instance::CoverUnion(c)) => {
            let (solution, trace) = lp_union_kmfl(c)?;
            Ok(Run { solution, trace: Some(trace.to_value()) })
        }
        (Algorithm::Sci, Instance::CoverIntersection(c)) => plain(sci_two_layer(c)?),
        (Algorithm::Fli, Instance::CoverIntersection(c)) => plain(fli(c)?),
        (Algorithm::SumMetric, Instance::IntersectionKmst(g)) => plain(intersection_kmst(g)?),
        (algo, inst) => Err(Error::BadParams(format!("{} does not solve {}", algo.as_str(), inst.kind().as_str()))),
    }
}

/// Optimum of the instance's natural relaxation, if it has one and the LP
/// solves.
pub fn lp_bound(inst: &Instance) -> Result<Rational> {
    Ok(solve(&default_relaxation(inst)?)?.objective)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub cost: Rational,
    pub oracle_cost: Option<Rational>,
    pub lp_bound: Option<Rational>,
    pub envelope: f64,
    /// Wall time in milliseconds; left out unless requested so that reports
    /// stay byte-stable.
    pub elapsed_ms: Option<u128>,
    pub seed: Option<u64>,
    pub trace: Option<Value>,
}

impl SolveReport {
    pub fn ratio(&self) -> Option<Rational> {
        let opt = self.oracle_cost.as_ref()?;
        if opt.is_zero() {
            return Some(if self.cost.is_zero() { Rational::one() } else { Rational::from(i64::MAX) });
        }
        Some(&self.cost / opt)
    }

    /// Envelope check against the oracle; `None` without an oracle value.
    pub fn passes(&self) -> Option<bool> {
        self.oracle_cost.as_ref().map(|opt| within(&self.cost, opt, self.envelope))
    }

    pub fn to_value(&self) -> Value {
        let r = |x: &Option<Rational>| x.as_ref().map_or(Value::Null, |v| json!(v.to_string()));
        let mut v = json!({
            "algorithm": self.algorithm.as_str(),
            "cost": self.cost.to_string(),
            "oracle_cost": r(&self.oracle_cost),
            "lp_bound": r(&self.lp_bound),
            "ratio": r(&self.ratio()),
            "envelope": self.envelope,
            "pass": self.passes(),
            "seed": self.seed,
        });
        if let Some(ms) = self.elapsed_ms {
            v["elapsed_ms"] = json!(ms as u64);
        }
        if let Some(t) = &self.trace {
            v["trace"] = t.clone();
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn envelopes() {
        assert_eq!(greedy_envelope(1), 1.0);
        assert_eq!(fli_envelope(1, 3), 1.0);
        assert!((sum_metric_envelope(4, 2) - 32.0).abs() < 1e-9);
        assert!(certified_lower(2.0) < q(2, 1));
        assert!(certified_lower(2.0) > q(1999, 1000));
        assert!(within(&q(3, 1), &q(3, 1), 1.0));
        assert!(!within(&q(4, 1), &q(2, 1), 2.0));
        assert!(within(&q(3, 1), &q(2, 1), 1.5 + 1e-6));
        assert_eq!(Algorithm::parse("sum-metric").unwrap(), Algorithm::SumMetric);
    }
}
