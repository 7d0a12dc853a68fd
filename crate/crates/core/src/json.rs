//! Canonical JSON for instances and solutions.
//!
//! Output has recursively sorted keys and no insignificant whitespace, so
//! equal values always serialise to identical bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, CoverLayer, GraphInstance, GraphLayer, Instance, InstanceKind, ServingSet};
use crate::rational::Rational;
use crate::solution::{LayerCover, LayerTree, Payload, Solution, SolutionKind};
use crate::weights::Weights;

/// Compact JSON text with object keys sorted at every level.
pub fn canonical(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, &mut out);
    out
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("string serialises"));
                out.push(':');
                write_canonical(&map[key], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other).expect("scalar serialises")),
    }
}

/// Canonical text of any serialisable value.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    canonical(&serde_json::to_value(value).expect("value serialises"))
}

#[derive(Serialize, Deserialize)]
struct RawGraphLayer {
    root: Option<usize>,
    edges: Vec<(usize, usize, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    kind: String,
    n: usize,
    h: usize,
    k: usize,
    rooted: bool,
    layers: Vec<RawGraphLayer>,
}

#[derive(Serialize, Deserialize)]
struct RawSet {
    open: Rational,
    conn: BTreeMap<String, Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawCoverLayer {
    #[serde(default)]
    metric: bool,
    sets: Vec<RawSet>,
}

#[derive(Serialize, Deserialize)]
struct RawCover {
    kind: String,
    h: usize,
    k: usize,
    clients: Vec<usize>,
    extra_cost: BTreeMap<String, Rational>,
    layers: Vec<RawCoverLayer>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn client_key(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("bad client id {s:?}")))
}

pub fn instance_to_value(inst: &Instance) -> Value {
    let kind = inst.kind().as_str().to_string();
    match inst {
        Instance::UnionKmst(g) | Instance::IntersectionKmst(g) => {
            let raw = RawGraph {
                kind,
                n: g.n,
                h: g.h(),
                k: g.k,
                rooted: g.rooted,
                layers: g
                    .layers
                    .iter()
                    .map(|l| RawGraphLayer { root: l.root, edges: l.weights.edges() })
                    .collect(),
            };
            serde_json::to_value(raw).expect("instance serialises")
        }
        Instance::CoverUnion(c) | Instance::CoverIntersection(c) => {
            let raw = RawCover {
                kind,
                h: c.h(),
                k: c.k,
                clients: (0..c.num_clients).collect(),
                extra_cost: c.extra_cost.iter().enumerate().map(|(i, o)| (i.to_string(), o.clone())).collect(),
                layers: c
                    .layers
                    .iter()
                    .map(|l| RawCoverLayer {
                        metric: l.metric,
                        sets: l
                            .sets
                            .iter()
                            .map(|s| RawSet {
                                open: s.open_cost.clone(),
                                conn: s.conn.iter().map(|(c, w)| (c.to_string(), w.clone())).collect(),
                            })
                            .collect(),
                    })
                    .collect(),
            };
            serde_json::to_value(raw).expect("instance serialises")
        }
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    canonical(&instance_to_value(inst))
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let v: Value = serde_json::from_str(text).map_err(parse_err)?;
    instance_from_value(v)
}

pub fn instance_from_value(v: Value) -> Result<Instance> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing kind".into()))?;
    let kind = InstanceKind::parse(kind)?;
    match kind {
        InstanceKind::UnionKmst | InstanceKind::IntersectionKmst => {
            let raw: RawGraph = serde_json::from_value(v).map_err(parse_err)?;
            if raw.layers.len() != raw.h {
                return Err(Error::Parse(format!("h = {} but {} layers given", raw.h, raw.layers.len())));
            }
            let mut layers = Vec::with_capacity(raw.h);
            for l in raw.layers {
                if let Some(&(u, v, _)) = l.edges.iter().find(|(u, v, _)| *u >= raw.n || *v >= raw.n) {
                    return Err(Error::Parse(format!("edge ({u}, {v}) out of range")));
                }
                if l.edges.iter().any(|(_, _, w)| w.is_negative()) {
                    return Err(Error::Parse("negative edge weight".into()));
                }
                layers.push(GraphLayer::new(Weights::from_edges(raw.n, l.edges), l.root));
            }
            let g = GraphInstance::new(raw.n, raw.k, raw.rooted, layers)?;
            Ok(if kind == InstanceKind::UnionKmst { Instance::UnionKmst(g) } else { Instance::IntersectionKmst(g) })
        }
        InstanceKind::CoverUnion | InstanceKind::CoverIntersection => {
            let raw: RawCover = serde_json::from_value(v).map_err(parse_err)?;
            let n = raw.clients.len();
            if raw.clients.iter().enumerate().any(|(i, &c)| i != c) {
                return Err(Error::Parse("client ids must be 0..n in order".into()));
            }
            if raw.layers.len() != raw.h {
                return Err(Error::Parse(format!("h = {} but {} layers given", raw.h, raw.layers.len())));
            }
            let mut extra = vec![Rational::zero(); n];
            for (key, o) in raw.extra_cost {
                let c = client_key(&key)?;
                *extra.get_mut(c).ok_or_else(|| Error::Parse(format!("unknown client {c}")))? = o;
            }
            let mut layers = Vec::with_capacity(raw.h);
            for l in raw.layers {
                let mut sets = Vec::with_capacity(l.sets.len());
                for s in l.sets {
                    let mut conn = BTreeMap::new();
                    for (key, w) in s.conn {
                        conn.insert(client_key(&key)?, w);
                    }
                    sets.push(ServingSet::new(s.open, conn));
                }
                layers.push(CoverLayer::new(sets, l.metric));
            }
            let c = CoverInstance::new(n, extra, raw.k, layers)?;
            Ok(if kind == InstanceKind::CoverUnion { Instance::CoverUnion(c) } else { Instance::CoverIntersection(c) })
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawTree {
    nodes: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawLayerCover {
    open: Vec<usize>,
    assign: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawPayload {
    Trees(Vec<RawTree>),
    Covers(Vec<RawLayerCover>),
}

#[derive(Serialize, Deserialize)]
struct RawSolution {
    kind: String,
    cost: Rational,
    covered: Vec<usize>,
    layers: RawPayload,
}

pub fn solution_to_value(sol: &Solution) -> Value {
    let layers = match &sol.payload {
        Payload::Trees(ts) => RawPayload::Trees(
            ts.iter()
                .map(|t| {
                    let mut edges = t.edges.clone();
                    edges.sort_unstable();
                    RawTree { nodes: t.nodes.iter().copied().collect(), edges }
                })
                .collect(),
        ),
        Payload::Covers(cs) => RawPayload::Covers(
            cs.iter()
                .map(|c| RawLayerCover {
                    open: c.open.iter().copied().collect(),
                    assign: c.assign.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                })
                .collect(),
        ),
    };
    let raw = RawSolution {
        kind: sol.kind.as_str().to_string(),
        cost: sol.cost.clone(),
        covered: sol.covered.iter().copied().collect(),
        layers,
    };
    serde_json::to_value(raw).expect("solution serialises")
}

pub fn solution_to_json(sol: &Solution) -> String {
    canonical(&solution_to_value(sol))
}

pub fn solution_from_value(v: Value) -> Result<Solution> {
    let raw: RawSolution = serde_json::from_value(v).map_err(parse_err)?;
    let kind = SolutionKind::parse(&raw.kind)?;
    let payload = match (kind, raw.layers) {
        (SolutionKind::Cover, RawPayload::Covers(cs)) => {
            let mut out = Vec::with_capacity(cs.len());
            for c in cs {
                let mut assign = BTreeMap::new();
                for (key, s) in c.assign {
                    assign.insert(client_key(&key)?, s);
                }
                out.push(LayerCover { open: c.open.into_iter().collect(), assign });
            }
            Payload::Covers(out)
        }
        // An empty layer list parses as trees; accept it for covers too.
        (SolutionKind::Cover, RawPayload::Trees(ts)) if ts.is_empty() => Payload::Covers(Vec::new()),
        (SolutionKind::Cover, _) => return Err(Error::Parse("cover solution with tree layers".into())),
        (_, RawPayload::Trees(ts)) => Payload::Trees(
            ts.into_iter()
                .map(|t| LayerTree { nodes: t.nodes.into_iter().collect::<BTreeSet<_>>(), edges: t.edges })
                .collect(),
        ),
        (_, RawPayload::Covers(_)) => return Err(Error::Parse("tree solution with cover layers".into())),
    };
    Ok(Solution { kind, payload, covered: raw.covered.into_iter().collect(), cost: raw.cost })
}

pub fn solution_from_json(text: &str) -> Result<Solution> {
    let v: Value = serde_json::from_str(text).map_err(parse_err)?;
    solution_from_value(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn graph_round_trip() {
        let w = Weights::from_edges(3, [(0, 1, q(1, 2)), (1, 2, q(3, 1))]);
        let g = GraphInstance::new(3, 1, true, vec![GraphLayer::new(w, Some(0))]).unwrap();
        let inst = Instance::UnionKmst(g);
        let text = instance_to_json(&inst);
        assert_eq!(
            text,
            r#"{"h":1,"k":1,"kind":"union-kmst","layers":[{"edges":[[0,1,"1/2"],[1,2,"3/1"]],"root":0}],"n":3,"rooted":true}"#
        );
        assert_eq!(instance_from_json(&text).unwrap(), inst);
    }

    #[test]
    fn cover_round_trip() {
        let layer = CoverLayer::new(vec![ServingSet::set(q(1, 1), [0, 1]), ServingSet::set(q(2, 3), [1])], false);
        let c = CoverInstance::new(2, vec![q(0, 1), q(1, 4)], 2, vec![layer]).unwrap();
        let inst = Instance::CoverIntersection(c);
        let text = instance_to_json(&inst);
        assert_eq!(instance_from_json(&text).unwrap(), inst);
        assert_eq!(instance_to_json(&instance_from_json(&text).unwrap()), text);
    }

    #[test]
    fn canonical_sorts_nested_keys() {
        let v: Value = serde_json::from_str(r#"{"b":{"d":1,"c":[{"z":0,"y":1}]},"a":"x"}"#).unwrap();
        assert_eq!(canonical(&v), r#"{"a":"x","b":{"c":[{"y":1,"z":0}],"d":1}}"#);
    }
}
