//! `reduce`: text encodings of the source problems and their multi-layer
//! images.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use mlcover::json::instance_to_value;
use mlcover::reductions::{
    bipartite_mlec_to_intersection, parse_dimacs, reduce_pcst_to_union_mst, reduce_sat_to_unrooted, reduce_setcover_to_rooted,
    BipartiteGraph, MlecTarget, PcstInstance, SetCoverTarget, SetSystem,
};
use mlcover::union::dummy_pad_rooted_to_unrooted;
use mlcover::{Instance, Rational, Weights};

use crate::io::{emit_json, read_instance, read_text};
use crate::{Common, Failure};

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// sat (DIMACS), setcover, pcst, bipartite, or rooted (instance JSON).
    #[arg(long)]
    from: String,
    /// Target encoding: kmst or kmfl for setcover, ksc, kmfl or kmst for
    /// bipartite; ignored otherwise.
    #[arg(long, default_value = "kmst")]
    to: String,
    #[arg(long = "in")]
    input: PathBuf,
    /// Edge-coverage target for bipartite inputs.
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[command(flatten)]
    common: Common,
}

/// Non-empty lines with `#` comments removed, split into words.
fn lines(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()).filter(|w| !w.is_empty())
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().ok().with_context(|| format!("bad number {s:?}"))
}

/// `universe N`, then one set per line as element ids.
fn parse_setcover(text: &str) -> Result<SetSystem> {
    let mut universe = None;
    let mut sets = Vec::new();
    for w in lines(text) {
        if w[0] == "universe" && w.len() == 2 {
            universe = Some(num(w[1])?);
        } else {
            sets.push(w.iter().map(|s| num(s)).collect::<Result<Vec<usize>>>()?);
        }
    }
    Ok(SetSystem::new(universe.context("missing universe line")?, sets)?)
}

/// `n N`, `root r`, `edge u v w` and `prize v p` lines.
fn parse_pcst(text: &str) -> Result<PcstInstance> {
    let all: Vec<Vec<&str>> = lines(text).collect();
    let n: usize = all.iter().find(|w| w[0] == "n" && w.len() == 2).map(|w| num(w[1])).context("missing n line")??;
    let mut w = Weights::new(n);
    let mut root = 0;
    let mut prizes = vec![Rational::zero(); n];
    for l in &all {
        match l.as_slice() {
            ["n", _] => {}
            ["root", r] => root = num(r)?,
            ["edge", u, v, c] => w.set(num(u)?, num(v)?, num::<Rational>(c)?.into()),
            ["prize", v, p] => prizes[num::<usize>(v)?] = num(p)?,
            other => bail!("bad line {other:?}"),
        }
    }
    Ok(PcstInstance::new(w, root, prizes)?)
}

/// `left L`, `right R`, then `a b` edges.
fn parse_bipartite(text: &str) -> Result<BipartiteGraph> {
    let (mut left, mut right, mut edges) = (None, None, Vec::new());
    for l in lines(text) {
        match l.as_slice() {
            ["left", x] => left = Some(num(x)?),
            ["right", x] => right = Some(num(x)?),
            [a, b] => edges.push((num(a)?, num(b)?)),
            other => bail!("bad line {other:?}"),
        }
    }
    Ok(BipartiteGraph::new(left.context("missing left")?, right.context("missing right")?, edges)?)
}

pub fn run(a: ReduceArgs) -> Result<(), Failure> {
    let inst = match a.from.as_str() {
        "sat" => Instance::UnionKmst(reduce_sat_to_unrooted(&parse_dimacs(&read_text(&a.input)?)?)?),
        "setcover" => {
            let target = match a.to.as_str() {
                "kmst" => SetCoverTarget::Kmst,
                "kmfl" => SetCoverTarget::Kmfl,
                other => return Err(anyhow::anyhow!("setcover reduces to kmst or kmfl, not {other}").into()),
            };
            reduce_setcover_to_rooted(&parse_setcover(&read_text(&a.input)?)?, target)?
        }
        "pcst" => Instance::UnionKmst(reduce_pcst_to_union_mst(&parse_pcst(&read_text(&a.input)?)?)?),
        "bipartite" => bipartite_mlec_to_intersection(&parse_bipartite(&read_text(&a.input)?)?, a.l, MlecTarget::parse(&a.to)?)?,
        "rooted" => match read_instance(&a.input)? {
            Instance::UnionKmst(g) if g.rooted => Instance::UnionKmst(dummy_pad_rooted_to_unrooted(&g)?),
            _ => return Err(anyhow::anyhow!("expected a rooted union-kmst instance").into()),
        },
        other => return Err(anyhow::anyhow!("unknown source {other:?}").into()),
    };
    emit_json(a.common.out.as_deref(), &instance_to_value(&inst))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_formats() {
        let s = parse_setcover("universe 3\n0 1\n2 # last\n").unwrap();
        assert_eq!(s.sets, vec![vec![0, 1], vec![2]]);
        let p = parse_pcst("n 2\nroot 0\nedge 0 1 1\nprize 1 3\n").unwrap();
        assert_eq!(p.optimum(), Some(Rational::one()));
        let b = parse_bipartite("left 1\nright 2\n0 0\n0 1\n").unwrap();
        assert_eq!(b.edges.len(), 2);
        assert!(parse_bipartite("left 1\n0 0 0\n").is_err());
    }
}
