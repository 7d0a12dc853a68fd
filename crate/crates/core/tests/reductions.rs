use std::collections::BTreeSet;

use mlcover::oracle::{exact_intersection, exact_union};
use mlcover::reductions::*;
use mlcover::{q, Error, Instance, Payload, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn union_opt(inst: &Instance) -> Option<Rational> {
    match exact_union(inst) {
        Ok((c, _)) => Some(c),
        Err(Error::Infeasible(_)) => None,
        Err(e) => panic!("oracle: {e}"),
    }
}

#[test]
fn sat_examples() {
    let one = Instance::UnionKmst(reduce_sat_to_unrooted(&Cnf::new(1, vec![vec![1]]).unwrap()).unwrap());
    assert_eq!(union_opt(&one), Some(q(0, 1)));
    let contra = Instance::UnionKmst(reduce_sat_to_unrooted(&Cnf::new(1, vec![vec![1], vec![-1]]).unwrap()).unwrap());
    // No finite tree reaches both clauses, so the optimum is +inf.
    assert!(union_opt(&contra).is_none_or(|c| c.is_positive()));
    let three = parse_dimacs("p cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n").unwrap();
    let inst = Instance::UnionKmst(reduce_sat_to_unrooted(&three).unwrap());
    assert!(three.satisfiable());
    assert_eq!(union_opt(&inst), Some(q(0, 1)));
}

#[test]
fn setcover_examples() {
    let a = SetSystem::new(1, vec![vec![0]]).unwrap();
    let ab = SetSystem::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
    for sys in [&a, &ab] {
        let kmst = union_opt(&reduce_setcover_to_rooted(sys, SetCoverTarget::Kmst).unwrap());
        let kmfl = union_opt(&reduce_setcover_to_rooted(sys, SetCoverTarget::Kmfl).unwrap());
        assert_eq!(kmst, Some(q(1, 1)));
        assert_eq!(kmst, kmfl);
    }
    let uncoverable = SetSystem::new(2, vec![vec![0]]).unwrap();
    assert_eq!(union_opt(&reduce_setcover_to_rooted(&uncoverable, SetCoverTarget::Kmst).unwrap()), None);
}

#[test]
fn collapsed_cover_keeps_every_set() {
    let sys = SetSystem::new(2, vec![vec![0], vec![1]]).unwrap();
    let Instance::CoverUnion(c) = reduce_setcover_to_rooted(&sys, SetCoverTarget::Kmfl).unwrap() else { panic!() };
    let flat = collapse_union_cover(&c);
    assert_eq!((flat.h(), flat.layers[0].sets.len()), (1, 2));
    assert_eq!(union_opt(&Instance::CoverUnion(flat)), union_opt(&Instance::CoverUnion(c)));
}

#[test]
fn pcst_random_five_nodes() {
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = mlcover::Weights::new(5);
        for u in 0..5 {
            for v in u + 1..5 {
                w.set(u, v, Rational::from(rng.random_range(1..=5i64)).into());
            }
        }
        let prizes = (0..5).map(|_| Rational::from(rng.random_range(0..=5i64))).collect();
        let p = PcstInstance::new(w, 0, prizes).unwrap();
        let inst = Instance::UnionKmst(reduce_pcst_to_union_mst(&p).unwrap());
        assert_eq!(union_opt(&inst), p.optimum(), "seed {seed}");
    }
}

fn four_cycle() -> SimpleGraph {
    SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
}

#[test]
fn edge_coverage_examples() {
    // The 4-cycle is bipartite with parts {0, 2} and {1, 3}.
    let c4 = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
    let inst = bipartite_mlec_to_intersection(&c4, 4, MlecTarget::Ksc).unwrap();
    assert_eq!(exact_intersection(&inst).unwrap().0, q(4, 1));

    let edge = BipartiteGraph::new(1, 1, [(0, 0)]).unwrap();
    let kmfl = bipartite_mlec_to_intersection(&edge, 1, MlecTarget::Kmfl).unwrap();
    assert_eq!(exact_intersection(&kmfl).unwrap().0, q(2, 1));
    let kmst = bipartite_mlec_to_intersection(&edge, 1, MlecTarget::Kmst).unwrap();
    let (cost, sol) = exact_intersection(&kmst).unwrap();
    assert_eq!(cost, q(2, 1));
    let Instance::IntersectionKmst(g) = &kmst else { panic!() };
    let Payload::Trees(trees) = &sol.payload else { panic!() };
    for (t, l) in trees.iter().zip(&g.layers) {
        assert!(t.edges.iter().all(|&(u, v)| l.weights.finite(u, v).is_some_and(|w| *w <= q(1, 1))));
    }

    let doubled = graph_to_bipartite_double(&four_cycle());
    assert_eq!((doubled.left + doubled.right, doubled.edges.len()), (8, 8));
    let tri = SimpleGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let d = graph_to_bipartite_double(&tri);
    assert_eq!((d.left + d.right, d.edges.len()), (6, 6));
}

#[test]
fn dense_extraction_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let edges: Vec<(usize, usize)> = (0..10).flat_map(|u| (u + 1..10).map(move |v| (u, v))).filter(|_| rng.random_bool(0.5)).collect();
        let g = SimpleGraph::new(10, edges).unwrap();
        let all: BTreeSet<usize> = (0..10).collect();
        let y = extract_dense_subset(&g, &all, 5).unwrap();
        assert!(g.induced_edges(&y) * 90 >= g.edges.len() * 20);
    }
}

#[test]
fn densest_pipeline_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let edges: Vec<(usize, usize)> = (0..10).flat_map(|u| (u + 1..10).map(move |v| (u, v))).filter(|_| rng.random_bool(0.4)).collect();
    let g = SimpleGraph::new(10, edges).unwrap();
    let got = g.induced_edges(&densest_k_subgraph_approx(&g, 4).unwrap());
    let best = densest_brute(&g, 4);
    let f = densest_factor(&g);
    assert!(got as f64 >= best as f64 / (16.0 * f * f));
    assert!(got <= best);
}

#[test]
fn tight_family_cases() {
    let g = gen_tight_intersection_kmst(2, 2).unwrap();
    // Summed distance between distinct nodes is at least 2: no pair is
    // adjacent on both cycles.
    let (a, b) = (&g.layers[0].weights, &g.layers[1].weights);
    let mut pairs_at_two = 0;
    for u in 0..g.n {
        for v in u + 1..g.n {
            let s = a.finite(u, v).unwrap() + b.finite(u, v).unwrap();
            assert!(s >= q(2, 1));
            if s == q(2, 1) {
                pairs_at_two += 1;
            }
        }
    }
    assert!(pairs_at_two < g.n - 1, "a summed tree needs some long edges");
}

#[test]
fn gap_lp_value() {
    let gap = gen_integrality_gap(4).unwrap();
    assert_eq!(mlcover::report::lp_bound(&gap.instance).unwrap(), q(2, 1));
    assert_eq!(union_opt(&gap.instance), Some(q(3, 1)));
    assert!(gen_integrality_gap(3).is_err());
}

#[test]
fn random_generator_contracts() {
    for kind in [mlcover::InstanceKind::UnionKmst, mlcover::InstanceKind::IntersectionKmst, mlcover::InstanceKind::CoverUnion] {
        let spec = RandomSpec::new(kind, 6, 2, 3, 42);
        let a = mlcover::json::instance_to_json(&gen_random(&spec).unwrap());
        assert_eq!(a, mlcover::json::instance_to_json(&gen_random(&spec).unwrap()));
    }
    let mut bad = RandomSpec::new(mlcover::InstanceKind::UnionKmst, 6, 2, 3, 1);
    bad.density = 2.0;
    assert!(matches!(gen_random(&bad), Err(Error::BadParams(_))));
}
