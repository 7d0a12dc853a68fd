//! Builders for the k-Steiner, k-MST, union k-MST, k-facility-location and
//! union k-facility-location relaxations.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, CoverLayer, GraphInstance, Instance};
use crate::lp::model::{CutFamily, LpModel};
use crate::rational::Rational;
use crate::weights::Weights;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpKind {
    KSt,
    KMst,
    UkMst,
    KMfl,
    UkMfl,
}

/// A union relaxation with handles on its coverage variables.
#[derive(Clone, Debug)]
pub struct UnionLp {
    pub model: LpModel,
    /// Per layer: request → `z^i` variable.
    pub layer_z: Vec<BTreeMap<usize, usize>>,
    /// Request → global `z` variable.
    pub z: BTreeMap<usize, usize>,
}

fn zero() -> Rational {
    Rational::zero()
}

fn one() -> Rational {
    Rational::one()
}

/// Adds `x` variables for the finite edges among `nodes` and returns the family skeleton.
fn edge_family(model: &mut LpModel, w: &Weights, nodes: &[usize], root: usize, prefix: &str) -> CutFamily {
    let mut edges = Vec::new();
    for (a, &u) in nodes.iter().enumerate() {
        for &v in &nodes[a + 1..] {
            if let Some(c) = w.finite(u, v) {
                let var = model.add_var(format!("x{prefix}_{u}_{v}"), zero(), None);
                model.set_cost(var, c.clone());
                edges.push((u.min(v), u.max(v), var));
            }
        }
    }
    CutFamily { nodes: nodes.to_vec(), root, edges, demands: Vec::new() }
}

fn sorted(nodes: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = nodes.iter().copied().collect();
    set.into_iter().collect()
}

/// k-Steiner relaxation: terminals `w_set` (root excluded), Steiner nodes `nodes`.
pub fn build_kst(w: &Weights, terminals: &[usize], nodes: &[usize], root: usize, k: usize) -> Result<LpModel> {
    let mut nodes = sorted(nodes);
    if !nodes.contains(&root) {
        nodes.push(root);
        nodes.sort_unstable();
    }
    let terminals = sorted(terminals);
    if terminals.contains(&root) {
        return Err(Error::BadParams("root listed as a terminal".into()));
    }
    if let Some(t) = terminals.iter().find(|t| !nodes.contains(t)) {
        return Err(Error::BadParams(format!("terminal {t} outside the node set")));
    }
    if k > terminals.len() {
        return Err(Error::BadParams(format!("k = {k} exceeds {} terminals", terminals.len())));
    }
    let mut model = LpModel::new();
    let mut fam = edge_family(&mut model, w, &nodes, root, "");
    let mut sum = Vec::new();
    for &t in &terminals {
        let z = model.add_var(format!("z_{t}"), zero(), Some(one()));
        fam.demands.push((t, z));
        sum.push((z, one()));
    }
    model.add_row(sum, Rational::from(k));
    model.families.push(fam);
    Ok(model)
}

/// k-MST relaxation: every non-root node is a terminal.
pub fn build_kmst(w: &Weights, nodes: &[usize], root: usize, k: usize) -> Result<LpModel> {
    let terminals: Vec<usize> = nodes.iter().copied().filter(|&v| v != root).collect();
    build_kst(w, &terminals, nodes, root, k)
}

/// Union k-MST relaxation over the layers' given weights. `allowed[i]`
/// restricts layer `i` to a node subset (its root is always kept).
pub fn build_ukmst(inst: &GraphInstance, allowed: Option<&[Vec<usize>]>) -> Result<UnionLp> {
    if !inst.rooted {
        return Err(Error::BadParams("union k-MST relaxation needs a rooted instance".into()));
    }
    let roots = inst.roots();
    let countable = inst.countable();
    if inst.k > countable.len() {
        return Err(Error::BadParams(format!("k = {} exceeds {} countable nodes", inst.k, countable.len())));
    }
    let mut model = LpModel::new();
    let mut layer_z = Vec::with_capacity(inst.h());
    for (i, layer) in inst.layers.iter().enumerate() {
        let root = layer.root.ok_or_else(|| Error::BadParams(format!("layer {} has no root", i + 1)))?;
        let mut nodes: Vec<usize> = match allowed {
            Some(a) => a[i].clone(),
            None => (0..inst.n).collect(),
        };
        nodes.push(root);
        let nodes = sorted(&nodes);
        let mut fam = edge_family(&mut model, &layer.weights, &nodes, root, &format!("{}", i + 1));
        let mut zs = BTreeMap::new();
        for &v in nodes.iter().filter(|v| !roots.contains(v)) {
            let z = model.add_var(format!("z{}_{v}", i + 1), zero(), None);
            fam.demands.push((v, z));
            zs.insert(v, z);
        }
        model.families.push(fam);
        layer_z.push(zs);
    }
    let z = link_global(&mut model, &countable, &layer_z, inst.k, None);
    Ok(UnionLp { model, layer_z, z })
}

/// Adds `z_v ∈ [0,1]`, `Σ_i z^i_v ≥ z_v` and `Σ z_v ≥ k`.
fn link_global(
    model: &mut LpModel,
    requests: &[usize],
    layer_z: &[BTreeMap<usize, usize>],
    k: usize,
    extra: Option<&[Rational]>,
) -> BTreeMap<usize, usize> {
    let mut z = BTreeMap::new();
    let mut sum = Vec::new();
    for &v in requests {
        let zv = model.add_var(format!("z_{v}"), zero(), Some(one()));
        if let Some(o) = extra {
            model.set_cost(zv, o[v].clone());
        }
        let mut row: Vec<(usize, Rational)> = layer_z.iter().filter_map(|m| m.get(&v)).map(|&j| (j, one())).collect();
        row.push((zv, -one()));
        model.add_row(row, zero());
        sum.push((zv, one()));
        z.insert(v, zv);
    }
    model.add_row(sum, Rational::from(k));
    z
}

/// Adds the facility-location block of one layer; returns client → `z^i` variable.
fn fl_block(
    model: &mut LpModel,
    layer: &CoverLayer,
    clients: &[usize],
    facilities: &[usize],
    tag: &str,
    bounded_z: bool,
) -> BTreeMap<usize, usize> {
    let mut ys = BTreeMap::new();
    for &f in facilities {
        let y = model.add_var(format!("y{tag}_{f}"), zero(), None);
        model.set_cost(y, layer.sets[f].open_cost.clone());
        ys.insert(f, y);
    }
    let mut zs = BTreeMap::new();
    for &c in clients {
        let z = model.add_var(format!("z{tag}_{c}"), zero(), if bounded_z { Some(one()) } else { None });
        let mut assign = Vec::new();
        for &f in facilities {
            if let Some(w) = layer.sets[f].conn.get(&c) {
                let x = model.add_var(format!("x{tag}_{c}_{f}"), zero(), None);
                model.set_cost(x, w.clone());
                model.add_row(vec![(ys[&f], one()), (x, -one())], zero());
                assign.push((x, one()));
            }
        }
        assign.push((z, -one()));
        model.add_row(assign, zero());
        zs.insert(c, z);
    }
    zs
}

/// Single-layer k-facility-location relaxation, with optional per-client extra cost.
pub fn build_kmfl(
    layer: &CoverLayer,
    clients: &[usize],
    facilities: &[usize],
    k: usize,
    extra: Option<&[Rational]>,
) -> Result<LpModel> {
    let clients = sorted(clients);
    let facilities = sorted(facilities);
    if k > clients.len() {
        return Err(Error::BadParams(format!("k = {k} exceeds {} clients", clients.len())));
    }
    if let Some(f) = facilities.iter().find(|&&f| f >= layer.sets.len()) {
        return Err(Error::BadParams(format!("unknown facility {f}")));
    }
    let mut model = LpModel::new();
    let zs = fl_block(&mut model, layer, &clients, &facilities, "", true);
    if let Some(o) = extra {
        for (&c, &z) in &zs {
            model.set_cost(z, o[c].clone());
        }
    }
    model.add_row(zs.values().map(|&z| (z, one())).collect(), Rational::from(k));
    Ok(model)
}

/// Union k-facility-location relaxation. `allowed[i]` restricts layer `i`'s facilities.
pub fn build_ukmfl(inst: &CoverInstance, allowed: Option<&[Vec<usize>]>) -> Result<UnionLp> {
    let clients: Vec<usize> = (0..inst.num_clients).collect();
    let mut model = LpModel::new();
    let mut layer_z = Vec::with_capacity(inst.h());
    for (i, layer) in inst.layers.iter().enumerate() {
        let facilities: Vec<usize> = match allowed {
            Some(a) => sorted(&a[i]),
            None => (0..layer.sets.len()).collect(),
        };
        layer_z.push(fl_block(&mut model, layer, &clients, &facilities, &format!("{}", i + 1), false));
    }
    let z = link_global(&mut model, &clients, &layer_z, inst.k, Some(&inst.extra_cost));
    Ok(UnionLp { model, layer_z, z })
}

/// Relaxation of a whole instance: union k-MST for rooted union graphs,
/// union facility location for union covers.
pub fn build_lp(kind: LpKind, inst: &Instance) -> Result<LpModel> {
    match (kind, inst) {
        (LpKind::UkMst, Instance::UnionKmst(g)) => Ok(build_ukmst(g, None)?.model),
        (LpKind::UkMfl, Instance::CoverUnion(c)) => Ok(build_ukmfl(c, None)?.model),
        (LpKind::KMst, Instance::UnionKmst(g)) if g.h() == 1 => {
            let root = g.layers[0].root.ok_or_else(|| Error::BadParams("root missing".into()))?;
            build_kmst(&g.layers[0].weights, &(0..g.n).collect::<Vec<_>>(), root, g.k)
        }
        (LpKind::KMfl, Instance::CoverUnion(c)) if c.h() == 1 => {
            let clients: Vec<usize> = (0..c.num_clients).collect();
            let facilities: Vec<usize> = (0..c.layers[0].sets.len()).collect();
            build_kmfl(&c.layers[0], &clients, &facilities, c.k, Some(&c.extra_cost))
        }
        (kind, inst) => Err(Error::BadParams(format!("{kind:?} relaxation does not apply to {}", inst.kind().as_str()))),
    }
}

/// The natural relaxation for the instance kind, if it has one.
pub fn default_relaxation(inst: &Instance) -> Result<LpModel> {
    match inst {
        Instance::UnionKmst(_) => build_lp(LpKind::UkMst, inst),
        Instance::CoverUnion(_) => build_lp(LpKind::UkMfl, inst),
        _ => Err(Error::BadParams(format!("no relaxation for {}", inst.kind().as_str()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{GraphLayer, ServingSet};
    use crate::lp::cut::{expand_cuts, solve};
    use crate::lp::simplex::solve_simplex;
    use crate::rational::q;

    #[test]
    fn kmst_two_nodes() {
        let w = Weights::from_edges(2, [(0, 1, q(7, 2))]);
        let m = build_kmst(&w, &[0, 1], 0, 1).unwrap();
        assert_eq!(m.vars.len(), 2);
        assert_eq!(solve(&m).unwrap().objective, q(7, 2));
    }

    #[test]
    fn kmfl_single_facility() {
        let mut conn = BTreeMap::new();
        conn.insert(0, q(1, 1));
        let layer = CoverLayer::new(vec![ServingSet::new(q(2, 1), conn)], true);
        let m = build_kmfl(&layer, &[0], &[0], 1, None).unwrap();
        assert_eq!(solve_simplex(&m).unwrap().objective, q(3, 1));
    }

    #[test]
    fn ukmst_identical_layers_matches_enumeration() {
        let w = Weights::from_edges(3, [(0, 1, q(2, 1)), (0, 2, q(3, 1)), (1, 2, q(2, 1))]);
        let layers = vec![GraphLayer::new(w.clone(), Some(0)), GraphLayer::new(w, Some(0))];
        let g = GraphInstance::new(3, 1, true, layers).unwrap();
        let lp = build_ukmst(&g, None).unwrap();
        let a = solve(&lp.model).unwrap().objective;
        let b = solve_simplex(&expand_cuts(&lp.model)).unwrap().objective;
        assert_eq!(a, b);
        assert_eq!(a, q(7, 4));
    }

    #[test]
    fn bad_params() {
        let w = Weights::complete(3, q(1, 1));
        assert!(build_kst(&w, &[1], &[0, 1, 2], 0, 2).is_err());
        assert!(build_kst(&w, &[0, 1], &[0, 1, 2], 0, 1).is_err());
    }
}
