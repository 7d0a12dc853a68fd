//! Fixed-seed instances shared by the criterion benches.

use mlcover::reductions::{gen_random, RandomSpec};
use mlcover::{Instance, InstanceKind};

/// A generated instance; cover kinds use nonmetric layers when
/// `intersection` is set, since that is what the intersection solvers
/// accept in general.
pub fn fixture(kind: InstanceKind, n: usize, h: usize, k: usize, seed: u64) -> Instance {
    let mut spec = RandomSpec::new(kind, n, h, k, seed);
    if kind == InstanceKind::CoverIntersection {
        spec.metric = false;
        spec.density = 0.8;
    }
    spec.sets = 4;
    gen_random(&spec).expect("fixture parameters are valid")
}
