use mlcover::intersection::{fli, sci_two_layer};
use mlcover::oracle::{exact_intersection, exact_union};
use mlcover::reductions::{bipartite_mlec_to_intersection, gen_random, reduce_sat_to_unrooted, BipartiteGraph, Cnf, MlecTarget, RandomSpec};
use mlcover::report::{fli_envelope, sci_envelope, within};
use mlcover::union::{dummy_pad_rooted_to_unrooted, lp_union_kmfl, lp_union_kmst, unrooted_union_kmst, DEFAULT_ROOT_CAP};
use mlcover::{q, validate_solution, CoverInstance, CoverLayer, GraphInstance, GraphLayer, Instance, InstanceKind, ServingSet, Weights};

#[test]
fn lp_rounding_uses_the_cheap_layer() {
    // Layer 1 is a cheap star, layer 2 the same star at ten times the cost.
    let star = |c: i64| Weights::from_edges(4, (1..4).map(|v| (0, v, q(c, 1))));
    let g = GraphInstance::new(4, 3, true, vec![GraphLayer::new(star(1), Some(0)), GraphLayer::new(star(10), Some(0))]).unwrap();
    let (sol, trace) = lp_union_kmst(&g).unwrap();
    let opt = exact_union(&Instance::UnionKmst(g.clone())).unwrap().0;
    assert_eq!(opt, q(3, 1));
    assert_eq!(sol.cost, opt);
    assert!(trace.lp_bound <= opt);
}

#[test]
fn free_openings_pick_cheapest_connections() {
    let layer = |conn: [i64; 3]| {
        CoverLayer::new(vec![ServingSet::new(q(0, 1), conn.iter().enumerate().map(|(c, &w)| (c, q(w, 1))).collect())], true)
    };
    let c = CoverInstance::plain(3, 3, vec![layer([1, 5, 1]), layer([5, 1, 5])]).unwrap();
    let (sol, _) = lp_union_kmfl(&c).unwrap();
    let opt = exact_union(&Instance::CoverUnion(c)).unwrap().0;
    assert_eq!(opt, q(3, 1));
    assert!(within(&sol.cost, &opt, 12.0));
}

#[test]
fn satisfiable_formula_costs_nothing_unrooted() {
    let g = reduce_sat_to_unrooted(&Cnf::new(2, vec![vec![1, 2], vec![-1]]).unwrap()).unwrap();
    let sol = unrooted_union_kmst(&g, DEFAULT_ROOT_CAP).unwrap();
    assert_eq!(sol.cost, q(0, 1));
    assert!(validate_solution(&Instance::UnionKmst(g), &sol).feasible);
}

#[test]
fn padding_keeps_the_optimum() {
    for seed in 0..8 {
        let mut spec = RandomSpec::new(InstanceKind::UnionKmst, 3 + (seed as usize % 2), 1 + (seed as usize % 2), 2, seed);
        spec.density = 0.6;
        let Instance::UnionKmst(g) = gen_random(&spec).unwrap() else { panic!() };
        let padded = dummy_pad_rooted_to_unrooted(&g).unwrap();
        let a = exact_union(&Instance::UnionKmst(g)).unwrap().0;
        let b = exact_union(&Instance::UnionKmst(padded)).unwrap().0;
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn two_layer_cover_on_four_cycle() {
    let c4 = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
    let Instance::CoverIntersection(c) = bipartite_mlec_to_intersection(&c4, 4, MlecTarget::Ksc).unwrap() else { panic!() };
    assert_eq!(sci_two_layer(&c).unwrap().cost, q(4, 1));
    assert_eq!(fli(&c).unwrap().cost, q(4, 1));
}

#[test]
fn fli_and_sci_share_instances() {
    for seed in 0..30 {
        let mut spec = RandomSpec::new(InstanceKind::CoverIntersection, 6, 2, 3, 100 + seed);
        spec.metric = false;
        spec.density = 0.8;
        spec.sets = 3;
        let inst = gen_random(&spec).unwrap();
        let Instance::CoverIntersection(c) = &inst else { panic!() };
        let Ok((opt, _)) = exact_intersection(&inst) else { continue };
        let a = sci_two_layer(c).unwrap();
        let b = fli(c).unwrap();
        assert!(within(&a.cost, &opt, sci_envelope(c.k)));
        assert!(within(&b.cost, &opt, fli_envelope(c.k, 2)));
    }
}
