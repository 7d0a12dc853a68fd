//! Union covering solvers: the greedy framework, LP rounding and the
//! unrooted reduction.

pub mod greedy;
pub mod lp;
pub mod unrooted;

pub use greedy::{greedy_union_kmfl, greedy_union_kmst};
pub use lp::{lp_union_kmfl, lp_union_kmst, UnionTrace};
pub use unrooted::{dummy_pad_rooted_to_unrooted, unrooted_union_kmst, DEFAULT_ROOT_CAP};
