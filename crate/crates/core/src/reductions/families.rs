//! Instance generators: the cyclic tight family for the summed metric and
//! seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, CoverLayer, GraphInstance, GraphLayer, Instance, InstanceKind, ServingSet};
use crate::rational::{Cost, Rational};
use crate::weights::Weights;

pub const MAX_TIGHT_NODES: usize = 1 << 12;

/// Node `v` carries the `hN`-bit string of `v`, split into `h` blocks of `N`
/// bits with the most significant block first. Layer `i` orders the nodes
/// by the string rotated to start at block `i`, closes the order into a
/// cycle of unit edges and uses the cycle distance. Target is every node.
pub fn gen_tight_intersection_kmst(h: usize, block: usize) -> Result<GraphInstance> {
    if h < 2 || block < 2 {
        return Err(Error::BadParams(format!("need h >= 2 and N >= 2, got {h}, {block}")));
    }
    let bits = h * block;
    if bits >= 63 || (1usize << bits) - 1 > MAX_TIGHT_NODES {
        return Err(Error::BudgetExceeded(format!("2^{bits} - 1 nodes")));
    }
    let n = (1usize << bits) - 1;
    let mask = (1usize << bits) - 1;
    let layers = (0..h)
        .map(|i| {
            let shift = i * block;
            let rot = |x: usize| if shift == 0 { x } else { ((x << shift) | (x >> (bits - shift))) & mask };
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| rot(v));
            let mut pos = vec![0; n];
            for (p, &v) in order.iter().enumerate() {
                pos[v] = p;
            }
            let mut w = Weights::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    let d = pos[u].abs_diff(pos[v]);
                    w.set(u, v, Cost::Finite(Rational::from(d.min(n - d))));
                }
            }
            GraphLayer::new(w, None)
        })
        .collect();
    GraphInstance::new(n, n, false, layers)
}

/// Parameters for [`gen_random`]. Graph kinds draw each pair with
/// probability `density` and an integer weight from `weights`, on top of a
/// random spanning tree so every layer is connected. Cover kinds draw
/// `sets` serving sets per layer with opening cost from `weights`; in
/// metric layers clients and sets sit on a line at positions drawn from
/// `conn` and connect at their distance, otherwise each client joins a set
/// with probability `density` at a cost drawn from `conn`.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomSpec {
    pub kind: InstanceKind,
    pub n: usize,
    pub h: usize,
    pub k: usize,
    pub weights: (i64, i64),
    pub density: f64,
    pub seed: u64,
    pub rooted: bool,
    pub metric: bool,
    pub sets: usize,
    pub conn: (i64, i64),
    pub extra: (i64, i64),
}

impl RandomSpec {
    pub fn new(kind: InstanceKind, n: usize, h: usize, k: usize, seed: u64) -> Self {
        RandomSpec {
            kind,
            n,
            h,
            k,
            weights: (1, 9),
            density: 0.5,
            seed,
            rooted: true,
            metric: true,
            sets: n.div_ceil(2).max(1),
            conn: (0, 4),
            extra: (0, 0),
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (i64, i64)) -> Rational {
    Rational::from(rng.random_range(lo..=hi))
}

pub fn gen_random(spec: &RandomSpec) -> Result<Instance> {
    let bad = |m: &str| Err(Error::BadParams(m.into()));
    if spec.n == 0 || spec.h == 0 {
        return bad("n and h must be positive");
    }
    if !(0.0..=1.0).contains(&spec.density) {
        return bad("density outside [0, 1]");
    }
    for (lo, hi) in [spec.weights, spec.conn, spec.extra] {
        if lo < 0 || lo > hi {
            return bad("ranges must satisfy 0 <= lo <= hi");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        InstanceKind::UnionKmst | InstanceKind::IntersectionKmst => {
            let shared = rng.random_range(0..spec.n);
            let mut layers = Vec::with_capacity(spec.h);
            for _ in 0..spec.h {
                let mut w = Weights::new(spec.n);
                let mut perm: Vec<usize> = (0..spec.n).collect();
                perm.shuffle(&mut rng);
                for i in 1..spec.n {
                    let j = rng.random_range(0..i);
                    w.set(perm[i], perm[j], Cost::Finite(draw(&mut rng, spec.weights)));
                }
                for u in 0..spec.n {
                    for v in u + 1..spec.n {
                        let c = draw(&mut rng, spec.weights);
                        if w.finite(u, v).is_none() && rng.random_bool(spec.density) {
                            w.set(u, v, Cost::Finite(c));
                        }
                    }
                }
                if spec.metric {
                    w = w.metric_closure();
                }
                let root = match (spec.rooted, spec.kind) {
                    (false, _) => None,
                    (true, InstanceKind::UnionKmst) => Some(rng.random_range(0..spec.n)),
                    (true, _) => Some(shared),
                };
                layers.push(GraphLayer::new(w, root));
            }
            let roots = layers.iter().filter_map(|l| l.root).collect::<std::collections::BTreeSet<_>>().len();
            let g = GraphInstance::new(spec.n, spec.k.min(spec.n - roots), spec.rooted, layers)?;
            Ok(if spec.kind == InstanceKind::UnionKmst { Instance::UnionKmst(g) } else { Instance::IntersectionKmst(g) })
        }
        InstanceKind::CoverUnion | InstanceKind::CoverIntersection => {
            let sets = spec.sets.max(1);
            let mut layers = Vec::with_capacity(spec.h);
            for _ in 0..spec.h {
                let mut serving = Vec::with_capacity(sets);
                if spec.metric {
                    let clients: Vec<i64> = (0..spec.n).map(|_| rng.random_range(spec.conn.0..=spec.conn.1)).collect();
                    for _ in 0..sets {
                        let open = draw(&mut rng, spec.weights);
                        let at = rng.random_range(spec.conn.0..=spec.conn.1);
                        let conn = clients.iter().enumerate().map(|(c, &p)| (c, Rational::from((p - at).abs()))).collect();
                        serving.push(ServingSet::new(open, conn));
                    }
                } else {
                    for _ in 0..sets {
                        let open = draw(&mut rng, spec.weights);
                        let forced = rng.random_range(0..spec.n);
                        let mut conn = std::collections::BTreeMap::new();
                        for c in 0..spec.n {
                            let w = draw(&mut rng, spec.conn);
                            if c == forced || rng.random_bool(spec.density) {
                                conn.insert(c, w);
                            }
                        }
                        serving.push(ServingSet::new(open, conn));
                    }
                }
                layers.push(CoverLayer::new(serving, spec.metric));
            }
            let extra = (0..spec.n).map(|_| draw(&mut rng, spec.extra)).collect();
            let c = CoverInstance::new(spec.n, extra, spec.k.min(spec.n), layers)?;
            Ok(if spec.kind == InstanceKind::CoverUnion { Instance::CoverUnion(c) } else { Instance::CoverIntersection(c) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::mst;

    #[test]
    fn tight_shape() {
        let g = gen_tight_intersection_kmst(2, 2).unwrap();
        assert_eq!(g.n, 15);
        let all: Vec<usize> = (0..15).collect();
        for l in &g.layers {
            assert_eq!(mst(&l.weights, &all).unwrap().0, Rational::from(14i64));
        }
        assert_eq!(g.layers[0].weights.finite(0, 1), Some(&Rational::one()));
        assert!(gen_tight_intersection_kmst(1, 2).is_err());
        assert!(matches!(gen_tight_intersection_kmst(4, 4), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn random_is_seeded() {
        let mut s = RandomSpec::new(InstanceKind::UnionKmst, 6, 2, 3, 7);
        assert_eq!(gen_random(&s).unwrap(), gen_random(&s).unwrap());
        s.density = 1.0;
        let Instance::UnionKmst(g) = gen_random(&s).unwrap() else { panic!() };
        assert!(g.layers.iter().all(|l| l.weights.edges().len() == 15 && l.is_metric()));
        let c = gen_random(&RandomSpec::new(InstanceKind::CoverIntersection, 6, 3, 4, 1)).unwrap();
        assert_eq!(c.h(), 3);
    }
}
