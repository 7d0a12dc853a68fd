//! Hardness constructions, the densest-subgraph pipeline and instance
//! generators.

pub mod dense;
pub mod families;
pub mod mlec;
pub mod pcst;
pub mod sat;
pub mod setcover;

pub use dense::{densest_brute, densest_factor, densest_k_subgraph_approx, extract_dense_subset};
pub use families::{gen_random, gen_tight_intersection_kmst, RandomSpec};
pub use mlec::{bipartite_mlec_to_intersection, graph_to_bipartite_double, parse_edge_list, BipartiteGraph, MlecTarget, SimpleGraph};
pub use pcst::{reduce_pcst_to_union_mst, PcstInstance};
pub use sat::{parse_dimacs, reduce_sat_to_unrooted, Cnf};
pub use setcover::{all_set_systems, collapse_union_cover, gen_integrality_gap, reduce_setcover_to_rooted, GapInstance, SetCoverTarget, SetSystem};
