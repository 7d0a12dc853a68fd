//! Single-layer subsolvers: exact Steiner and k-Steiner trees, the partial
//! cover greedy and exact k-facility location.

pub mod cover;
pub mod steiner;

pub use cover::{exact_kmfl, exact_kmfl_all, greedy_partial_cover, FlQuery, PartialCover, PartialCoverQuery};
pub use steiner::{exact_ksteiner, exact_ksteiner_all, steiner_tree_exact, KSteinerQuery, SteinerTable};
