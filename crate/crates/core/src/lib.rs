//! Union and intersection multi-layer covering: k-MST, set cover and
//! facility location over several layers that share their requests.

pub mod error;
pub mod graph;
pub mod instance;
pub mod intersection;
pub mod json;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod reductions;
pub mod report;
pub mod single;
pub mod solution;
pub mod union;
pub mod weights;

pub use error::{Error, Result};
pub use instance::{CoverInstance, CoverLayer, GraphInstance, GraphLayer, Instance, InstanceKind, ServingSet};
pub use report::{run, Algorithm, Run, SolveReport};
pub use rational::{q, Cost, Rational};
pub use solution::{solution_cost, validate_solution, LayerCover, LayerTree, Payload, Solution, SolutionKind, Verdict};
pub use weights::Weights;
