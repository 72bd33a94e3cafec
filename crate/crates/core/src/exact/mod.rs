//! Exact optima at desk scale.
//!
//! Cut problems are solved as lazy hitting-set problems: find a violated path
//! in the current residual graph and branch on which of its cuttable elements
//! to remove. Branches are made disjoint (branch `j` removes the `j`-th element
//! and forbids the earlier ones) and bounded by a packing of element-disjoint
//! violated paths.

mod rmfc;

use std::collections::BTreeSet;

use crate::error::{guard, Error, Result};
use crate::graph::{min_hop_short_path, CutInstance, CutSpace, Distance, Element, PathWitness, Problem, Removal};
use crate::scalar::{self, Scalar};
use crate::solution::{distance_after, is_feasible_cut, CutSolution};

pub use rmfc::{exact_rmfc_decision, rmfc_simulate, BurnTrace};

/// Default cap on cuttable elements for branch and bound.
pub const BRANCH_LIMIT: usize = 40;
/// Cap on cuttable elements for subset enumeration.
pub const BRUTE_FORCE_LIMIT: usize = 22;

/// Which paths must be destroyed.
#[derive(Clone, Copy, Debug)]
enum Target<'a> {
    Pairs(&'a [(usize, usize)]),
    Short { s: usize, t: usize, bound: u64 },
}

impl<'a> Target<'a> {
    fn of<T: Scalar>(inst: &'a CutInstance<T>, bound: Option<u64>) -> Result<Self> {
        match (&inst.problem, bound) {
            (Problem::Multicut { pairs }, None) => Ok(Target::Pairs(pairs)),
            (Problem::LengthBound { s, t, bound: own }, over) => Ok(Target::Short { s: *s, t: *t, bound: over.unwrap_or(*own) }),
            (Problem::Multicut { .. }, Some(_)) => Err(Error::WrongProblem("length_bound")),
            (Problem::Rmfc { .. }, _) => Err(Error::WrongProblem("multicut or length_bound")),
        }
    }

    /// Minimum-hop violated path in `g - removal`.
    fn violated<T: Scalar>(&self, inst: &CutInstance<T>, removal: &Removal) -> Option<PathWitness> {
        match *self {
            Target::Pairs(pairs) => pairs
                .iter()
                .filter_map(|&(s, t)| min_hop_short_path(&inst.graph, s, t, None, Some(removal)))
                .min_by_key(|p| p.hops()),
            Target::Short { s, t, bound } => min_hop_short_path(&inst.graph, s, t, Some(bound), Some(removal)),
        }
    }
}

struct Search<'a, T> {
    inst: &'a CutInstance<T>,
    space: CutSpace,
    weights: Vec<T>,
    target: Target<'a>,
    best: Option<(T, Vec<bool>)>,
}

impl<T: Scalar> Search<'_, T> {
    fn removal(&self, chosen: &[bool]) -> Removal {
        self.space.removal_of(&self.inst.graph, chosen)
    }

    /// Branch order on a path: increasing weight, ties by variable index.
    fn ordered(&self, path: &PathWitness, forbidden: &[bool]) -> Vec<usize> {
        let mut vars: Vec<usize> = self.space.vars_on(path).into_iter().filter(|&v| !forbidden[v]).collect();
        vars.sort_by(|&a, &b| scalar::cmp(&self.weights[a], &self.weights[b]).then(a.cmp(&b)));
        vars
    }

    /// Lower bound from element-disjoint violated paths; `None` if some
    /// violated path cannot be hit any more.
    fn packing_bound(&self, chosen: &[bool], forbidden: &[bool]) -> Option<T> {
        let mut removal = self.removal(chosen);
        let mut bound = T::zero();
        while let Some(path) = self.target.violated(self.inst, &removal) {
            let free = self.ordered(&path, forbidden);
            let cheapest = free.first()?;
            bound = bound + self.weights[*cheapest].clone();
            for v in free {
                removal.set(self.space.element(v), true);
            }
        }
        Some(bound)
    }

    fn run(&mut self, chosen: &mut Vec<bool>, forbidden: &mut Vec<bool>, cost: T) {
        let removal = self.removal(chosen);
        let Some(path) = self.target.violated(self.inst, &removal) else {
            if self.best.as_ref().is_none_or(|(b, _)| scalar::lt(&cost, b)) {
                self.best = Some((cost, chosen.clone()));
            }
            return;
        };
        let Some(extra) = self.packing_bound(chosen, forbidden) else {
            return;
        };
        if let Some((b, _)) = &self.best {
            if scalar::le(b, &(cost.clone() + extra)) {
                return;
            }
        }
        let order = self.ordered(&path, forbidden);
        let mut newly_forbidden = Vec::new();
        for v in order {
            chosen[v] = true;
            self.run(chosen, forbidden, cost.clone() + self.weights[v].clone());
            chosen[v] = false;
            forbidden[v] = true;
            newly_forbidden.push(v);
        }
        for v in newly_forbidden {
            forbidden[v] = false;
        }
    }
}

fn solve<T: Scalar>(inst: &CutInstance<T>, target: Target<'_>, limit: usize) -> Result<CutSolution<T>> {
    let space = inst.space();
    guard("cuttable elements for branch and bound", space.len() as u128, limit as u128)?;
    let weights = space.weights(&inst.graph);
    let all = vec![true; space.len()];
    if let Some(path) = target.violated(inst, &space.removal_of(&inst.graph, &all)) {
        return Err(Error::Infeasible(format!(
            "path {} uses only uncuttable elements",
            path.nodes.iter().map(|&v| inst.graph.node(v).name.as_str()).collect::<Vec<_>>().join(" ")
        )));
    }
    let mut search = Search { inst, space, weights, target, best: None };
    let mut chosen = vec![false; search.space.len()];
    let mut forbidden = vec![false; search.space.len()];
    search.run(&mut chosen, &mut forbidden, T::zero());
    let (_, chosen) = search.best.expect("removing every cuttable element is feasible");
    finish(inst, search.space.element_set(&chosen), target)
}

fn finish<T: Scalar>(inst: &CutInstance<T>, elements: BTreeSet<Element>, target: Target<'_>) -> Result<CutSolution<T>> {
    let mut sol = CutSolution::priced(&inst.graph, elements)?;
    sol.verified = match target {
        Target::Pairs(_) => is_feasible_cut(inst, &sol.elements)?,
        Target::Short { s, t, bound } => distance_after(&inst.graph, s, t, &sol.elements)?.at_least(bound),
    };
    Ok(sol)
}

/// Minimum-cost set disconnecting every terminal pair.
pub fn exact_min_multicut<T: Scalar>(inst: &CutInstance<T>) -> Result<CutSolution<T>> {
    exact_min_multicut_with(inst, BRANCH_LIMIT)
}

pub fn exact_min_multicut_with<T: Scalar>(inst: &CutInstance<T>, limit: usize) -> Result<CutSolution<T>> {
    solve(inst, Target::of(inst, None)?, limit)
}

/// Minimum-cost set after which every `s`-`t` path has length at least `bound`.
pub fn exact_min_length_bounded_cut<T: Scalar>(inst: &CutInstance<T>, bound: u64) -> Result<CutSolution<T>> {
    exact_min_length_bounded_cut_with(inst, bound, BRANCH_LIMIT)
}

pub fn exact_min_length_bounded_cut_with<T: Scalar>(inst: &CutInstance<T>, bound: u64, limit: usize) -> Result<CutSolution<T>> {
    if bound == 0 {
        return Err(Error::InvalidInstance("length bound must be positive".into()));
    }
    solve(inst, Target::of(inst, Some(bound))?, limit)
}

/// Largest `s`-`t` distance reachable by removing elements of total weight at most `budget`.
pub fn exact_interdiction<T: Scalar>(inst: &CutInstance<T>, budget: &T) -> Result<(Distance, CutSolution<T>)> {
    let (s, t, _) = inst.length_bound()?;
    let mut best_cut = CutSolution::priced(&inst.graph, BTreeSet::new())?;
    let mut best = distance_after(&inst.graph, s, t, &best_cut.elements)?;
    while let Distance::Finite(d) = best {
        let cut = match exact_min_length_bounded_cut(inst, d + 1) {
            Ok(cut) => cut,
            Err(Error::Infeasible(_)) => break,
            Err(e) => return Err(e),
        };
        if !scalar::le(&cut.cost, budget) {
            break;
        }
        best = distance_after(&inst.graph, s, t, &cut.elements)?;
        best_cut = cut;
    }
    best_cut.verified = distance_after(&inst.graph, s, t, &best_cut.elements)? == best && scalar::le(&best_cut.cost, budget);
    Ok((best, best_cut))
}

fn subsets<T: Scalar>(inst: &CutInstance<T>) -> Result<(CutSpace, Vec<T>)> {
    let space = inst.space();
    guard("cuttable elements for subset enumeration", space.len() as u128, BRUTE_FORCE_LIMIT as u128)?;
    let weights = space.weights(&inst.graph);
    Ok((space, weights))
}

fn mask_set(space: &CutSpace, mask: u32) -> BTreeSet<Element> {
    (0..space.len()).filter(|i| mask >> i & 1 == 1).map(|i| space.element(i)).collect()
}

fn mask_cost<T: Scalar>(weights: &[T], mask: u32) -> T {
    (0..weights.len()).filter(|i| mask >> i & 1 == 1).map(|i| weights[i].clone()).sum()
}

/// Subset enumeration oracle for multicut (`bound = None`) or length-bounded cut.
pub fn brute_force_cut<T: Scalar>(inst: &CutInstance<T>, bound: Option<u64>) -> Result<CutSolution<T>> {
    let target = Target::of(inst, bound)?;
    let (space, weights) = subsets(inst)?;
    let mut best: Option<(T, u32)> = None;
    for mask in 0..1u32 << space.len() {
        let cost = mask_cost(&weights, mask);
        if best.as_ref().is_some_and(|(b, _)| !scalar::lt(&cost, b)) {
            continue;
        }
        let set = mask_set(&space, mask);
        let ok = match target {
            Target::Pairs(pairs) => crate::solution::disconnects(&inst.graph, pairs, &set)?,
            Target::Short { s, t, bound } => distance_after(&inst.graph, s, t, &set)?.at_least(bound),
        };
        if ok {
            best = Some((cost, mask));
        }
    }
    let (_, mask) = best.ok_or_else(|| Error::Infeasible("no subset of cuttable elements is feasible".into()))?;
    finish(inst, mask_set(&space, mask), target)
}

/// Subset enumeration oracle for interdiction.
pub fn brute_force_interdiction<T: Scalar>(inst: &CutInstance<T>, budget: &T) -> Result<Distance> {
    let (s, t, _) = inst.length_bound()?;
    let (space, weights) = subsets(inst)?;
    let mut best = Distance::Finite(0);
    for mask in 0..1u32 << space.len() {
        if scalar::le(&mask_cost(&weights, mask), budget) {
            best = best.max(distance_after(&inst.graph, s, t, &mask_set(&space, mask))?);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CutMode, Weight, WeightedGraph};
    use crate::scalar::ratio;
    use num_rational::BigRational;

    type Q = BigRational;

    fn two_paths() -> CutInstance<Q> {
        // s - a - t (length 2) and s - b - c - d - t (length 5 after a long edge)
        let mut g = WeightedGraph::new();
        let s = g.add_node("s", Weight::Uncuttable).unwrap();
        let t = g.add_node("t", Weight::Uncuttable).unwrap();
        let a = g.add_node("a", Weight::Finite(ratio(1, 1))).unwrap();
        let b = g.add_node("b", Weight::Finite(ratio(1, 1))).unwrap();
        g.add_edge(s, a, false, 1, Weight::Uncuttable).unwrap();
        g.add_edge(a, t, false, 1, Weight::Uncuttable).unwrap();
        g.add_edge(s, b, false, 1, Weight::Uncuttable).unwrap();
        g.add_edge(b, t, false, 4, Weight::Uncuttable).unwrap();
        CutInstance::new(g, CutMode::Vertex, Problem::LengthBound { s, t, bound: 3 }).unwrap()
    }

    #[test]
    fn interdiction_on_two_paths() {
        let inst = two_paths();
        let (d, _) = exact_interdiction(&inst, &ratio(0, 1)).unwrap();
        assert_eq!(d, Distance::Finite(2));
        let (d, cut) = exact_interdiction(&inst, &ratio(1, 1)).unwrap();
        assert_eq!(d, Distance::Finite(5));
        assert!(cut.verified);
        let (d, _) = exact_interdiction(&inst, &ratio(2, 1)).unwrap();
        assert_eq!(d, Distance::Unreachable);
        assert_eq!(brute_force_interdiction(&inst, &ratio(1, 1)).unwrap(), Distance::Finite(5));
    }

    #[test]
    fn length_bounded_cut_matches_brute_force() {
        let inst = two_paths();
        for bound in 1..8 {
            let bb = exact_min_length_bounded_cut(&inst, bound).unwrap();
            let bf = brute_force_cut(&inst, Some(bound)).unwrap();
            assert_eq!(bb.cost, bf.cost, "bound {bound}");
            assert!(bb.verified);
        }
    }

    #[test]
    fn uncuttable_path_is_infeasible() {
        let mut g = WeightedGraph::<Q>::new();
        let s = g.add_node("s", Weight::Uncuttable).unwrap();
        let t = g.add_node("t", Weight::Uncuttable).unwrap();
        g.add_edge(s, t, true, 1, Weight::Uncuttable).unwrap();
        let inst = CutInstance::new(g, CutMode::Edge, Problem::Multicut { pairs: vec![(s, t)] }).unwrap();
        assert!(matches!(exact_min_multicut(&inst), Err(Error::Infeasible(_))));
    }
}
