use std::collections::{BTreeSet, HashMap};

use crate::error::{guard, Error, Result};
use crate::graph::{CutInstance, NodeId, Problem, Weight};
use crate::scalar::{self, Scalar};
use crate::solution::Schedule;

/// What happened when a schedule was played out.
#[derive(Clone, Debug, PartialEq)]
pub struct BurnTrace {
    /// `burning[i]` is the set burning at the end of day `i` (day 0: just the source).
    pub burning: Vec<BTreeSet<NodeId>>,
    /// `saved[i]` is the set saved on day `i + 1`.
    pub saved: Vec<BTreeSet<NodeId>>,
    pub target_burnt: bool,
    /// First day a target caught fire.
    pub first_target_day: Option<usize>,
}

fn rmfc_parts<T: Scalar>(inst: &CutInstance<T>) -> Result<(NodeId, &BTreeSet<NodeId>)> {
    match &inst.problem {
        Problem::Rmfc { s, targets } => Ok((*s, targets)),
        _ => Err(Error::WrongProblem("rmfc")),
    }
}

/// Play `schedule` day by day: on day `i` the day's set is saved, then the
/// fire spreads one step to unsaved neighbours. Runs until the fire stops.
pub fn rmfc_simulate<T: Scalar>(inst: &CutInstance<T>, schedule: &[BTreeSet<NodeId>], budget: Option<&T>) -> Result<BurnTrace> {
    let (s, targets) = rmfc_parts(inst)?;
    let g = &inst.graph;
    let n = g.node_count();
    let mut burning = vec![false; n];
    let mut saved = vec![false; n];
    burning[s] = true;
    let mut trace = BurnTrace {
        burning: vec![[s].into_iter().collect()],
        saved: Vec::new(),
        target_burnt: false,
        first_target_day: None,
    };
    let mut day = 0;
    loop {
        day += 1;
        let today = schedule.get(day - 1).cloned().unwrap_or_default();
        let mut spent = T::zero();
        for &v in &today {
            g.check_node(v)?;
            if burning[v] {
                return Err(Error::SaveBurntVertex { vertex: g.node(v).name.clone(), day });
            }
            match &g.node(v).weight {
                Weight::Finite(w) => spent = spent + w.clone(),
                Weight::Uncuttable => return Err(Error::RemovingUncuttable(g.node(v).name.clone())),
            }
            saved[v] = true;
        }
        if let Some(budget) = budget {
            if !scalar::le(&spent, budget) {
                return Err(Error::BudgetExceeded { day, spent: spent.to_wire(), budget: budget.to_wire() });
            }
        }
        trace.saved.push(today);
        let fresh: Vec<NodeId> = (0..n)
            .filter(|&v| burning[v])
            .flat_map(|v| g.neighbours(v).iter().map(|&(_, w)| w))
            .filter(|&w| !burning[w] && !saved[w])
            .collect();
        for &w in &fresh {
            burning[w] = true;
        }
        if !trace.target_burnt && targets.iter().any(|&t| burning[t]) {
            trace.target_burnt = true;
            trace.first_target_day = Some(day);
        }
        trace.burning.push((0..n).filter(|&v| burning[v]).collect());
        if fresh.is_empty() && day >= schedule.len() {
            break;
        }
    }
    Ok(trace)
}

struct Decider<'a, T> {
    budget: &'a T,
    weight: Vec<Option<T>>,
    targets: u64,
    neighbours: Vec<u64>,
    memo: HashMap<(u64, u64), Option<Vec<u64>>>,
}

impl<T: Scalar> Decider<'_, T> {
    fn spread(&self, burning: u64, saved: u64) -> u64 {
        let mut next = burning;
        for v in bits(burning) {
            next |= self.neighbours[v];
        }
        next & !saved
    }

    /// Vertices the fire can still reach.
    fn threatened(&self, burning: u64, saved: u64) -> u64 {
        let mut reach = burning;
        loop {
            let next = self.spread(reach, saved) | reach;
            if next == reach {
                return reach & !burning;
            }
            reach = next;
        }
    }

    /// Maximal affordable subsets of `pool`, in a fixed order.
    fn maximal_saves(&self, pool: &[usize]) -> Vec<u64> {
        let mut out = Vec::new();
        let mut pick = Vec::new();
        self.enumerate(pool, 0, T::zero(), &mut pick, &mut out);
        out
    }

    fn enumerate(&self, pool: &[usize], i: usize, spent: T, pick: &mut Vec<usize>, out: &mut Vec<u64>) {
        if i == pool.len() {
            let mask = pick.iter().fold(0u64, |m, &v| m | 1 << v);
            let maximal = pool.iter().all(|&v| {
                mask >> v & 1 == 1
                    || !scalar::le(&(spent.clone() + self.weight[v].clone().expect("pool is cuttable")), self.budget)
            });
            if maximal {
                out.push(mask);
            }
            return;
        }
        let v = pool[i];
        let with = spent.clone() + self.weight[v].clone().expect("pool is cuttable");
        if scalar::le(&with, self.budget) {
            pick.push(v);
            self.enumerate(pool, i + 1, with, pick, out);
            pick.pop();
        }
        self.enumerate(pool, i + 1, spent, pick, out);
    }

    /// Save sets for the remaining days, or `None` if a target must burn.
    fn decide(&mut self, burning: u64, saved: u64) -> Option<Vec<u64>> {
        if let Some(hit) = self.memo.get(&(burning, saved)) {
            return hit.clone();
        }
        let threatened = self.threatened(burning, saved);
        let answer = if threatened & self.targets == 0 {
            Some(Vec::new())
        } else {
            let pool: Vec<usize> = bits(threatened).filter(|&v| self.weight[v].is_some()).collect();
            let mut found = None;
            for save in self.maximal_saves(&pool) {
                let now_saved = saved | save;
                let next = self.spread(burning, now_saved);
                if next & self.targets != 0 {
                    continue;
                }
                if let Some(mut rest) = self.decide(next, now_saved) {
                    rest.insert(0, save);
                    found = Some(rest);
                    break;
                }
            }
            found
        };
        self.memo.insert((burning, saved), answer.clone());
        answer
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Decide whether the targets can be protected while saving weight at most
/// `budget` per day; returns a witnessing schedule when they can.
///
/// Exhaustive over maximal affordable save sets among threatened vertices,
/// memoised on the `(burning, saved)` state.
pub fn exact_rmfc_decision<T: Scalar>(inst: &CutInstance<T>, budget: &T) -> Result<(bool, Option<Schedule<T>>)> {
    let (s, targets) = rmfc_parts(inst)?;
    let g = &inst.graph;
    guard("rmfc decision nodes", g.node_count() as u128, 64)?;
    let cuttable = g.nodes().iter().filter(|n| n.weight.is_cuttable()).count();
    guard("rmfc decision cuttable vertices", cuttable as u128, 24)?;
    let mut decider = Decider {
        budget,
        weight: g.nodes().iter().map(|n| n.weight.finite().cloned()).collect(),
        targets: targets.iter().fold(0, |m, &t| m | 1 << t),
        neighbours: (0..g.node_count())
            .map(|v| g.neighbours(v).iter().fold(0u64, |m, &(_, w)| m | 1 << w))
            .collect(),
        memo: HashMap::new(),
    };
    let plan = decider.decide(1 << s, 0);
    match plan {
        None => Ok((false, None)),
        Some(days) => {
            let days: Vec<BTreeSet<NodeId>> = days.into_iter().map(|m| bits(m).collect()).collect();
            Ok((true, Some(Schedule::priced(g, days)?)))
        }
    }
}
