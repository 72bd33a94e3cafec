//! Baseline approximation algorithms.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{min_st_cut, CutInstance, Element};
use crate::lp::check_short_cover;
use crate::scalar::{self, Scalar};
use crate::solution::CutSolution;

/// Union of a minimum `s_i`-`t_i` cut for every pair; at most `k` times optimal.
pub fn trivial_multicut<T: Scalar>(inst: &CutInstance<T>) -> Result<CutSolution<T>> {
    let mut set = BTreeSet::new();
    for &(s, t) in inst.pairs()? {
        let (_, cut) = min_st_cut(&inst.graph, s, t, inst.mode)?;
        set.extend(cut);
    }
    CutSolution::priced(&inst.graph, set)?.verify(inst)
}

/// Union of the `s -> t` and `t -> s` minimum cuts; at most twice optimal.
pub fn bicut_2approx<T: Scalar>(inst: &CutInstance<T>) -> Result<CutSolution<T>> {
    let pairs = inst.pairs()?;
    let ok = pairs.len() == 2 && pairs[0] == (pairs[1].1, pairs[1].0);
    if !ok {
        return Err(Error::InvalidInstance("bicut needs exactly the pairs (s, t) and (t, s)".into()));
    }
    trivial_multicut(inst)
}

/// Keep every element with `x >= 1/(bound - 1)`.
///
/// A path shorter than `bound` has at most `bound - 1` cuttable elements, so
/// one of them reaches the threshold whenever the path carries mass 1.
pub fn threshold_round_lbc<T: Scalar>(inst: &CutInstance<T>, bound: u64, x: &[T]) -> Result<CutSolution<T>> {
    let space = inst.space();
    if x.len() != space.len() {
        return Err(Error::InfeasibleLpInput(format!("expected {} values, got {}", space.len(), x.len())));
    }
    check_short_cover(inst, bound, x)?;
    let set: BTreeSet<Element> = if bound <= 1 {
        BTreeSet::new()
    } else {
        let threshold = T::from_ratio(1, bound as i64 - 1);
        (0..space.len()).filter(|&i| scalar::le(&threshold, &x[i])).map(|i| space.element(i)).collect()
    };
    CutSolution::priced(&inst.graph, set)?.verify(&inst.with_bound(bound)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CutMode, Problem, Weight, WeightedGraph};
    use crate::scalar::ratio;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn bicut_on_a_two_cycle() {
        let mut g = WeightedGraph::<Q>::new();
        let s = g.add_node("s", Weight::Uncuttable).unwrap();
        let t = g.add_node("t", Weight::Uncuttable).unwrap();
        g.add_edge(s, t, true, 1, Weight::Finite(ratio(2, 1))).unwrap();
        g.add_edge(t, s, true, 1, Weight::Finite(ratio(3, 1))).unwrap();
        let inst = CutInstance::new(g, CutMode::Edge, Problem::Multicut { pairs: vec![(s, t), (t, s)] }).unwrap();
        let sol = bicut_2approx(&inst).unwrap();
        assert!(sol.verified);
        assert_eq!(sol.cost, ratio(5, 1));
    }

    #[test]
    fn rounding_rejects_a_non_cover() {
        let mut g = WeightedGraph::<Q>::new();
        let s = g.add_node("s", Weight::Uncuttable).unwrap();
        let t = g.add_node("t", Weight::Uncuttable).unwrap();
        g.add_edge(s, t, false, 1, Weight::Finite(ratio(1, 1))).unwrap();
        let inst = CutInstance::new(g, CutMode::Edge, Problem::LengthBound { s, t, bound: 2 }).unwrap();
        assert!(matches!(threshold_round_lbc(&inst, 2, &[ratio(1, 2)]), Err(Error::InfeasibleLpInput(_))));
        let sol = threshold_round_lbc(&inst, 2, &[ratio(1, 1)]).unwrap();
        assert!(sol.verified);
    }
}
