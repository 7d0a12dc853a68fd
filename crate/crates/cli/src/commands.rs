use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::Args;
use mlcover::json::{instance_to_value, solution_from_value, solution_to_value};
use mlcover::lp::{default_relaxation, solve as solve_lp};
use mlcover::oracle::exact;
use mlcover::reductions::{gen_integrality_gap, gen_random, gen_tight_intersection_kmst, RandomSpec};
use mlcover::report::{envelope, lp_bound as relaxation_bound};
use mlcover::{run, solution_cost, validate_solution, Algorithm, Error, Instance, InstanceKind, Rational, SolveReport};
use serde_json::{json, Value};

use crate::io::{emit_json, read_instance, read_text};
use crate::{Common, Failure};

#[derive(Args, Debug)]
pub struct GenArgs {
    /// union-kmst, intersection-kmst, cover-union, cover-intersection, tight or gap.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    h: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Edge or membership probability.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 1)]
    wmin: i64,
    #[arg(long, default_value_t = 9)]
    wmax: i64,
    /// Serving sets per layer for cover kinds.
    #[arg(long)]
    sets: Option<usize>,
    #[arg(long)]
    unrooted: bool,
    #[arg(long)]
    nonmetric: bool,
    /// Block length N of the tight family.
    #[arg(long, default_value_t = 2)]
    block: usize,
    /// Node count m' of the gap family.
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[command(flatten)]
    common: Common,
}

pub fn gen(a: GenArgs) -> Result<(), Failure> {
    let inst = match a.kind.as_str() {
        "tight" => Instance::IntersectionKmst(gen_tight_intersection_kmst(a.h, a.block)?),
        "gap" => gen_integrality_gap(a.m)?.instance,
        kind => {
            let mut spec = RandomSpec::new(InstanceKind::parse(kind)?, a.n, a.h, a.k, a.seed);
            spec.density = a.density;
            spec.weights = (a.wmin, a.wmax);
            spec.rooted = !a.unrooted;
            spec.metric = !a.nonmetric;
            if let Some(s) = a.sets {
                spec.sets = s;
            }
            gen_random(&spec)?
        }
    };
    emit_json(a.common.out.as_deref(), &instance_to_value(&inst))?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct InArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// greedy, lp, sci, fli, sum-metric or exact.
    #[arg(long)]
    algo: String,
    #[arg(long = "in")]
    input: PathBuf,
    /// Recorded in the report; the solvers themselves are deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: Common,
}

fn within_budget(inst: &Instance, c: &Common) -> bool {
    inst.size() <= c.budget_n && inst.h() <= c.budget_h
}

/// Oracle optimum when the instance is small enough.
pub fn oracle_cost(inst: &Instance, c: &Common) -> anyhow::Result<Option<Rational>> {
    if !within_budget(inst, c) {
        return Ok(None);
    }
    match exact(inst) {
        Ok((v, _)) => Ok(Some(v)),
        Err(Error::BudgetExceeded(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn lp_bound_for(inst: &Instance, c: &Common) -> Option<Rational> {
    let rooted_union = match inst {
        Instance::UnionKmst(g) => g.rooted,
        Instance::CoverUnion(_) => true,
        _ => false,
    };
    if rooted_union && within_budget(inst, c) {
        relaxation_bound(inst).ok()
    } else {
        None
    }
}

/// Runs `algo` and fills in the report fields the budget allows.
pub fn evaluate(inst: &Instance, algo: Algorithm, c: &Common, seed: Option<u64>) -> anyhow::Result<(mlcover::Solution, SolveReport)> {
    let start = Instant::now();
    let out = run(algo, inst)?;
    let elapsed = start.elapsed().as_millis();
    let oracle = if algo == Algorithm::Exact { Some(out.solution.cost.clone()) } else { oracle_cost(inst, c)? };
    let report = SolveReport {
        algorithm: algo,
        cost: out.solution.cost.clone(),
        oracle_cost: oracle,
        lp_bound: lp_bound_for(inst, c),
        envelope: envelope(algo, inst),
        elapsed_ms: c.timings.then_some(elapsed),
        seed,
        trace: out.trace,
    };
    Ok((out.solution, report))
}

pub fn solve(a: SolveArgs) -> Result<(), Failure> {
    let inst = read_instance(&a.input)?;
    let algo = Algorithm::parse(&a.algo)?;
    let (sol, report) = evaluate(&inst, algo, &a.common, a.seed)?;
    emit_json(a.common.out.as_deref(), &json!({ "solution": solution_to_value(&sol), "report": report.to_value() }))?;
    if report.passes() == Some(false) {
        return Err(Failure::Envelope(format!("{} cost {} against optimum {}", algo.as_str(), report.cost, report.oracle_cost.unwrap())));
    }
    Ok(())
}

pub fn lp_bound(a: InArgs) -> Result<(), Failure> {
    let inst = read_instance(&a.input)?;
    let model = default_relaxation(&inst)?;
    let sol = solve_lp(&model)?;
    let values: serde_json::Map<String, Value> = model
        .vars
        .iter()
        .zip(&sol.values)
        .filter(|(_, v)| !v.is_zero())
        .map(|(var, v)| (var.name.clone(), json!(v.to_string())))
        .collect();
    emit_json(a.common.out.as_deref(), &json!({ "objective": sol.objective.to_string(), "cuts": sol.cuts, "values": values }))?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output of `solve`, or a bare solution.
    #[arg(long)]
    solution: PathBuf,
    /// Overrides the algorithm named in the solve report.
    #[arg(long)]
    algo: Option<String>,
    #[command(flatten)]
    common: Common,
}

pub fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let inst = read_instance(&a.input)?;
    let text = read_text(&a.solution)?;
    let doc: Value = serde_json::from_str(&text).context("solution is not JSON")?;
    let (sol_value, recorded_algo) = match doc.get("solution") {
        Some(s) => (s.clone(), doc.pointer("/report/algorithm").and_then(Value::as_str).map(str::to_string)),
        None => (doc, None),
    };
    let sol = solution_from_value(sol_value)?;
    let algo = match a.algo.or(recorded_algo) {
        Some(name) => Algorithm::parse(&name)?,
        None => return Err(anyhow!("no algorithm recorded; pass --algo").into()),
    };
    let verdict = validate_solution(&inst, &sol);
    let cost = solution_cost(&inst, &sol)?;
    let oracle = oracle_cost(&inst, &a.common)?;
    let lp = lp_bound_for(&inst, &a.common);
    let report = SolveReport {
        algorithm: algo,
        cost: cost.clone(),
        oracle_cost: oracle.clone(),
        lp_bound: lp.clone(),
        envelope: envelope(algo, &inst),
        elapsed_ms: None,
        seed: None,
        trace: None,
    };
    let gap = match (&oracle, &lp) {
        (Some(o), Some(l)) if !l.is_zero() => json!((o / l).to_string()),
        _ => Value::Null,
    };
    let mut v = report.to_value();
    v["feasible"] = json!(verdict.feasible);
    v["reasons"] = json!(verdict.reasons);
    v["recorded_cost"] = json!(sol.cost.to_string());
    v["cost_match"] = json!(sol.cost == cost);
    v["gap"] = gap;
    emit_json(a.common.out.as_deref(), &v)?;
    if !verdict.feasible {
        return Err(Failure::Error(anyhow!("infeasible: {}", verdict.reasons.join("; "))));
    }
    if sol.cost != cost {
        return Err(Failure::Error(anyhow!("recorded cost {} but recomputed {cost}", sol.cost)));
    }
    if report.passes() == Some(false) {
        return Err(Failure::Envelope(format!("cost {cost} against optimum {}", oracle.unwrap())));
    }
    Ok(())
}
