//! Set systems, their union encodings and the integrality-gap family.

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, CoverLayer, GraphInstance, GraphLayer, Instance, ServingSet};
use crate::rational::{Cost, Rational};
use crate::weights::Weights;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(x) = sets.iter().flatten().find(|&&x| x >= universe) {
            return Err(Error::BadParams(format!("element {x} outside universe of {universe}")));
        }
        Ok(SetSystem { universe, sets })
    }

    /// Fewest sets covering the universe, or `None`.
    pub fn min_cover(&self) -> Option<usize> {
        let masks: Vec<u64> = self.sets.iter().map(|s| s.iter().fold(0u64, |m, &x| m | 1 << x)).collect();
        let full = if self.universe == 64 { u64::MAX } else { (1u64 << self.universe) - 1 };
        (0u64..(1u64 << masks.len()))
            .filter(|pick| (0..masks.len()).filter(|i| pick >> i & 1 == 1).fold(0, |m, i| m | masks[i]) == full)
            .map(|pick| pick.count_ones() as usize)
            .min()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetCoverTarget {
    Kmst,
    Kmfl,
}

/// One layer per set. For k-MST: root `r = 0`, hub `s = 1`, element `x` at
/// node `x + 2`; `w(r,s) = 1` and `w(s,x) = 0` on members. The hub counts
/// toward the target, so `k = n' + 1`. For k-MFL: one facility of opening
/// cost 1 per layer serving its members at cost zero, `k = n'`.
pub fn reduce_setcover_to_rooted(sys: &SetSystem, target: SetCoverTarget) -> Result<Instance> {
    match target {
        SetCoverTarget::Kmst => {
            let n = sys.universe + 2;
            let layers = sys
                .sets
                .iter()
                .map(|s| {
                    let mut w = Weights::new(n);
                    w.set(0, 1, Cost::Finite(Rational::one()));
                    for &x in s {
                        w.set(1, x + 2, Cost::Finite(Rational::zero()));
                    }
                    GraphLayer::new(w, Some(0))
                })
                .collect();
            Ok(Instance::UnionKmst(GraphInstance::new(n, sys.universe + 1, true, layers)?))
        }
        SetCoverTarget::Kmfl => {
            let layers = sys
                .sets
                .iter()
                .map(|s| CoverLayer::new(vec![ServingSet::set(Rational::one(), s.iter().copied())], true))
                .collect();
            Ok(Instance::CoverUnion(CoverInstance::plain(sys.universe, sys.universe, layers)?))
        }
    }
}

/// Union covering with set-cover layers is a single layer holding every set.
pub fn collapse_union_cover(c: &CoverInstance) -> CoverInstance {
    let sets = c.layers.iter().flat_map(|l| l.sets.iter().cloned()).collect();
    CoverInstance { layers: vec![CoverLayer::new(sets, false)], ..c.clone() }
}

/// Gap family: `m'` sets (one per node), one element per `m'/2`-subset of the
/// nodes, pushed through the k-MST encoding.
#[derive(Clone, Debug)]
pub struct GapInstance {
    pub system: SetSystem,
    pub instance: Instance,
    pub fractional: Rational,
    pub integral: Rational,
}

pub const MAX_GAP_ELEMENTS: usize = 62;

pub fn gen_integrality_gap(m: usize) -> Result<GapInstance> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::BadParams(format!("m' = {m} must be even and at least 2")));
    }
    let half = m / 2;
    let subsets: Vec<u64> = (0u64..(1u64 << m)).filter(|s| s.count_ones() as usize == half).collect();
    if subsets.len() > MAX_GAP_ELEMENTS {
        return Err(Error::BudgetExceeded(format!("{} elements", subsets.len())));
    }
    let sets: Vec<Vec<usize>> =
        (0..m).map(|j| subsets.iter().enumerate().filter(|(_, s)| *s >> j & 1 == 1).map(|(e, _)| e).collect()).collect();
    let system = SetSystem::new(subsets.len(), sets)?;
    let instance = reduce_setcover_to_rooted(&system, SetCoverTarget::Kmst)?;
    Ok(GapInstance { system, instance, fractional: Rational::from(2i64), integral: Rational::from((half + 1) as i64) })
}

/// Every set system over `universe` elements whose sets are distinct and
/// nonempty.
pub fn all_set_systems(universe: usize) -> Vec<SetSystem> {
    let subsets: Vec<Vec<usize>> =
        (1u64..(1u64 << universe)).map(|m| (0..universe).filter(|x| m >> x & 1 == 1).collect()).collect();
    (0u64..(1u64 << subsets.len()))
        .map(|pick| {
            let sets = (0..subsets.len()).filter(|i| pick >> i & 1 == 1).map(|i| subsets[i].clone()).collect();
            SetSystem { universe, sets }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_shapes() {
        let g = gen_integrality_gap(4).unwrap();
        assert_eq!(g.system.universe, 6);
        assert_eq!(g.integral, Rational::from(3i64));
        assert_eq!(gen_integrality_gap(6).unwrap().system.universe, 20);
        assert_eq!(g.system.min_cover(), Some(3));
    }

    #[test]
    fn systems_enumerated() {
        assert_eq!(all_set_systems(2).len(), 8);
        let sys = SetSystem::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        assert_eq!(sys.min_cover(), Some(1));
    }
}
