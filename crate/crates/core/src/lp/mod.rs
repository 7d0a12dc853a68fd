//! Exact linear programming: simplex, cut separation, relaxation builders and
//! splitting-off.

pub mod build;
pub mod cut;
pub mod model;
pub mod simplex;
pub mod split;

pub use build::{build_kmfl, build_kmst, build_kst, build_lp, build_ukmfl, build_ukmst, default_relaxation, LpKind, UnionLp};
pub use cut::{expand_cuts, separation_mincut, solve, solve_cutting_plane};
pub use model::{CutFamily, FractionalSolution, LpModel, Row, Var};
pub use simplex::solve_simplex;
pub use split::{splitting_off, SplitResult};
