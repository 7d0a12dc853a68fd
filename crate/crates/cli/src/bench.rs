//! `bench`: every applicable algorithm on every instance of a suite, as a
//! CSV table and an SVG ratio plot.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use mlcover::report::{envelope, within};
use mlcover::{validate_solution, Algorithm, Instance, Rational};

use crate::commands::oracle_cost;
use crate::io::{emit, read_instance};
use crate::{Common, Failure};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Directory of instance JSON files.
    #[arg(long)]
    suite: PathBuf,
    /// Where to write the SVG plot.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub kind: &'static str,
    pub n: usize,
    pub h: usize,
    pub k: usize,
    pub algorithm: Algorithm,
    pub cost: Rational,
    pub oracle: Option<Rational>,
    pub lp_bound: Option<Rational>,
    pub ratio: Option<Rational>,
    pub envelope: f64,
    pub pass: bool,
    pub millis: u128,
    pub seed: Option<u64>,
}

const HEADER: [&str; 14] =
    ["instance", "kind", "n", "h", "k", "algorithm", "cost", "oracle", "lp_bound", "ratio", "envelope", "pass", "millis", "seed"];

impl BenchRow {
    fn record(&self) -> Vec<String> {
        let opt = |r: &Option<Rational>| r.as_ref().map(ToString::to_string).unwrap_or_default();
        vec![
            self.instance.clone(),
            self.kind.to_string(),
            self.n.to_string(),
            self.h.to_string(),
            self.k.to_string(),
            self.algorithm.as_str().to_string(),
            self.cost.to_string(),
            opt(&self.oracle),
            opt(&self.lp_bound),
            opt(&self.ratio),
            format!("{:.6}", self.envelope),
            self.pass.to_string(),
            self.millis.to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}

fn suite_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading suite {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Seed encoded in a file stem such as `union-s17`.
fn stem_seed(stem: &str) -> Option<u64> {
    stem.rsplit_once("-s").and_then(|(_, s)| s.parse().ok())
}

fn bench_instance(id: String, inst: &Instance, c: &Common) -> Result<Vec<BenchRow>> {
    let oracle = oracle_cost(inst, c)?;
    let lp_bound = match inst {
        Instance::UnionKmst(g) if g.rooted => mlcover::report::lp_bound(inst).ok(),
        Instance::CoverUnion(_) => mlcover::report::lp_bound(inst).ok(),
        _ => None,
    };
    let mut rows = Vec::new();
    for algo in Algorithm::ALL.into_iter().filter(|a| *a != Algorithm::Exact && a.applies(inst)) {
        let start = Instant::now();
        let sol = mlcover::run(algo, inst).with_context(|| format!("{id}: {}", algo.as_str()))?.solution;
        let millis = if c.timings { start.elapsed().as_millis() } else { 0 };
        let env = envelope(algo, inst);
        let feasible = validate_solution(inst, &sol).feasible;
        let ratio = oracle.as_ref().map(|o| if o.is_zero() { Rational::one() } else { &sol.cost / o });
        let pass = feasible && oracle.as_ref().is_none_or(|o| within(&sol.cost, o, env));
        rows.push(BenchRow {
            instance: id.clone(),
            kind: inst.kind().as_str(),
            n: inst.size(),
            h: inst.h(),
            k: inst.k(),
            algorithm: algo,
            cost: sol.cost,
            oracle: oracle.clone(),
            lp_bound: lp_bound.clone(),
            ratio,
            envelope: env,
            pass,
            millis,
            seed: stem_seed(&id),
        });
    }
    Ok(rows)
}

pub fn run_suite(dir: &Path, c: &Common) -> Result<Vec<BenchRow>> {
    let files = suite_files(dir)?;
    let results: Vec<Result<Vec<BenchRow>>> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| {
                s.spawn(move || {
                    let id = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    bench_instance(id, &read_instance(f)?, c)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
    });
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    rows.sort_by(|a, b| (&a.instance, a.algorithm).cmp(&(&b.instance, b.algorithm)));
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    Ok(w.into_inner()?)
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#555555"];

/// Ratio against `k` on a log scale, one colour per algorithm, with each
/// algorithm's envelope drawn as a dashed line through its rows.
pub fn to_svg(rows: &[BenchRow]) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let kmax = rows.iter().map(|r| r.k).max().unwrap_or(1).max(1) as f64;
    let ymax = rows.iter().map(|r| r.envelope).fold(2.0f64, f64::max).log10();
    let x = |k: f64| pad + (w - 2.0 * pad) * k / kmax;
    let y = |v: f64| h - pad - (h - 2.0 * pad) * v.max(1.0).log10() / ymax;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{pad} {pad} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = h - pad,
        r = w - pad
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">k</text>"#, w / 2.0, h - 15.0);
    let _ = writeln!(s, r#"<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">cost / optimum (log)</text>"#, h / 2.0, h / 2.0);
    let mut by_algo: BTreeMap<Algorithm, Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        by_algo.entry(r.algorithm).or_default().push(r);
    }
    for (i, (algo, rs)) in by_algo.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut env: BTreeMap<usize, f64> = BTreeMap::new();
        for r in rs {
            let e = env.entry(r.k).or_insert(r.envelope);
            *e = e.max(r.envelope);
        }
        let pts: Vec<String> = env.iter().map(|(&k, &e)| format!("{:.1},{:.1}", x(k as f64), y(e))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-dasharray="4 3"/>"#, pts.join(" "));
        for r in rs {
            if let Some(ratio) = &r.ratio {
                let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, x(r.k as f64), y(ratio.to_f64()));
            }
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{color}">{}</text>"#, w - pad - 70.0, pad + 14.0 * i as f64, algo.as_str());
    }
    s.push_str("</svg>\n");
    s
}

pub fn run(a: BenchArgs) -> Result<(), Failure> {
    let rows = run_suite(&a.suite, &a.common)?;
    emit(a.common.out.as_deref(), &to_csv(&rows)?)?;
    if let Some(p) = &a.plot {
        emit(Some(p), to_svg(&rows).as_bytes())?;
    }
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| format!("{}/{}", r.instance, r.algorithm.as_str())).collect();
    if !failed.is_empty() {
        return Err(Failure::Envelope(failed.join(", ")));
    }
    Ok(())
}
