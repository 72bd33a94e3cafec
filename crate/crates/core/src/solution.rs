//! Cut sets, firefighter schedules and the independent checkers that verify them.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{reachable_from, shortest_distances, CutInstance, Distance, Element, NodeId, PathWitness, Problem, WeightedGraph};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct CutSolution<T> {
    pub elements: BTreeSet<Element>,
    pub cost: T,
    /// Set once an independent checker confirmed feasibility.
    pub verified: bool,
    /// A surviving violated path, for solutions reported as infeasible.
    pub certificate: Option<PathWitness>,
}

impl<T: Scalar> CutSolution<T> {
    /// Price `elements` on `g`; rejects uncuttable members.
    pub fn priced(g: &WeightedGraph<T>, elements: BTreeSet<Element>) -> Result<Self> {
        let cost = g.cost_of(&elements)?;
        Ok(CutSolution { elements, cost, verified: false, certificate: None })
    }

    /// Check feasibility against `inst` and record the outcome.
    pub fn verify(mut self, inst: &CutInstance<T>) -> Result<Self> {
        self.verified = is_feasible_cut(inst, &self.elements)?;
        Ok(self)
    }
}

/// Save sets per day (day `i` is `days[i - 1]`) with their costs.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule<T> {
    pub days: Vec<BTreeSet<NodeId>>,
    pub per_day_cost: Vec<T>,
}

impl<T: Scalar> Schedule<T> {
    pub fn priced(g: &WeightedGraph<T>, days: Vec<BTreeSet<NodeId>>) -> Result<Self> {
        let per_day_cost = days
            .iter()
            .map(|set| g.cost_of(&set.iter().map(|&v| Element::Node(v)).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        Ok(Schedule { days, per_day_cost })
    }

    pub fn max_day_cost(&self) -> T {
        self.per_day_cost
            .iter()
            .cloned()
            .reduce(|a, b| if b > a { b } else { a })
            .unwrap_or_else(T::zero)
    }
}

/// `true` if no pair keeps a path after removing `removed`.
pub fn disconnects<T: Scalar>(
    g: &WeightedGraph<T>,
    pairs: &[(NodeId, NodeId)],
    removed: &BTreeSet<Element>,
) -> Result<bool> {
    let removal = g.removal(removed)?;
    for &(s, t) in pairs {
        if reachable_from(g, &[s], Some(&removal))[t] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `s`-`t` distance after removing `removed`.
pub fn distance_after<T: Scalar>(g: &WeightedGraph<T>, s: NodeId, t: NodeId, removed: &BTreeSet<Element>) -> Result<Distance> {
    let removal = g.removal(removed)?;
    Ok(shortest_distances(g, s, Some(&removal))[t])
}

/// Feasibility of a cut for multicut and length-bounded instances.
pub fn is_feasible_cut<T: Scalar>(inst: &CutInstance<T>, removed: &BTreeSet<Element>) -> Result<bool> {
    let space = inst.space();
    if let Some(el) = removed.iter().find(|el| space.var_of(**el).is_none()) {
        return Err(Error::RemovingUncuttable(format!("{} (not cuttable in {} mode)", inst.graph.describe(*el), inst.mode)));
    }
    match &inst.problem {
        Problem::Multicut { pairs } => disconnects(&inst.graph, pairs, removed),
        Problem::LengthBound { s, t, bound } => Ok(distance_after(&inst.graph, *s, *t, removed)?.at_least(*bound)),
        Problem::Rmfc { .. } => Err(Error::WrongProblem("multicut or length_bound")),
    }
}
