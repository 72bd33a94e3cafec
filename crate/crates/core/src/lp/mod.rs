//! Path-covering relaxations solved by cutting planes over an exact simplex.

mod simplex;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{constrained_min_weight_path, min_weight_path, CutInstance, CutMode, CutSpace, NodeId, PathWitness, WeightedGraph};
use crate::scalar::{self, Scalar};
use crate::solution::CutSolution;

pub use simplex::{simplex_solve, LpProblem, LpSolution, Row};

/// Default cap on generated path rows.
pub const ROW_CAP: usize = 10_000;

/// Optimal fractional cover together with how it was reached.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverLp<T> {
    pub value: T,
    /// One entry per variable of the instance's cut space.
    pub x: Vec<T>,
    pub rows: usize,
    pub rounds: usize,
}

impl<T: Scalar> CoverLp<T> {
    pub fn space_values(&self) -> &[T] {
        &self.x
    }
}

enum Cover {
    Pairs(Vec<(NodeId, NodeId)>),
    Short { s: NodeId, t: NodeId, bound: u64 },
}

fn separate<T: Scalar>(g: &WeightedGraph<T>, space: &CutSpace, x: &[T], cover: &Cover) -> Result<Vec<PathWitness>> {
    let mut out = Vec::new();
    let mut push = |found: Option<(PathWitness, T)>| {
        if let Some((path, mass)) = found {
            if scalar::lt(&mass, &T::one()) {
                out.push(path);
            }
        }
    };
    match cover {
        Cover::Pairs(pairs) => {
            for &(s, t) in pairs {
                push(min_weight_path(g, space, x, s, t)?);
            }
        }
        Cover::Short { s, t, bound } => push(constrained_min_weight_path(g, space, x, *s, *t, *bound)?),
    }
    Ok(out)
}

/// Minimum x-mass over walks of length `< bound`, by a pull-style table over
/// `(length, node)` that shares no code with the separation routines.
fn min_short_mass<T: Scalar>(g: &WeightedGraph<T>, space: &CutSpace, x: &[T], s: NodeId, t: NodeId, bound: u64) -> Option<T> {
    let n = g.node_count();
    let node_x = |v: NodeId| match (space.mode, space.node_var(v)) {
        (CutMode::Vertex, Some(i)) => x[i].clone(),
        _ => T::zero(),
    };
    let mut incoming: Vec<Vec<(NodeId, T, u64)>> = vec![Vec::new(); n];
    for (e, edge) in g.edges().iter().enumerate() {
        let ex = match (space.mode, space.edge_var(e)) {
            (CutMode::Edge, Some(i)) => x[i].clone(),
            _ => T::zero(),
        };
        incoming[edge.head].push((edge.tail, ex.clone(), edge.length));
        if !edge.directed {
            incoming[edge.tail].push((edge.head, ex, edge.length));
        }
    }
    let mut table: Vec<Vec<Option<T>>> = Vec::with_capacity(bound as usize);
    let mut best: Option<T> = None;
    for len in 0..bound {
        let mut layer = vec![None; n];
        for v in 0..n {
            let mut cell: Option<T> = if len == 0 && v == s { Some(node_x(s)) } else { None };
            for (u, ex, l) in &incoming[v] {
                if *l > len {
                    continue;
                }
                if let Some(prev) = &table[(len - l) as usize][*u] {
                    let cand = prev.clone() + ex.clone() + node_x(v);
                    if cell.as_ref().is_none_or(|c| scalar::lt(&cand, c)) {
                        cell = Some(cand);
                    }
                }
            }
            layer[v] = cell;
        }
        if let Some(m) = &layer[t] {
            if best.as_ref().is_none_or(|b| scalar::lt(m, b)) {
                best = Some(m.clone());
            }
        }
        table.push(layer);
    }
    best
}

fn solve_cover<T: Scalar>(inst: &CutInstance<T>, cover: Cover, row_cap: usize) -> Result<CoverLp<T>> {
    let g = &inst.graph;
    let space = inst.space();
    let mut lp = LpProblem::new(space.weights(g));
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut x = vec![T::zero(); space.len()];
    let mut value = T::zero();
    let mut rounds = 0;
    loop {
        let violated = separate(g, &space, &x, &cover)?;
        if violated.is_empty() {
            break;
        }
        rounds += 1;
        let mut added = false;
        for path in violated {
            let vars = space.vars_on(&path);
            if vars.is_empty() {
                return Err(Error::Infeasible(format!(
                    "path {} has no cuttable element",
                    path.nodes.iter().map(|&v| g.node(v).name.as_str()).collect::<Vec<_>>().join(" ")
                )));
            }
            let mut key = vars.clone();
            key.sort_unstable();
            if seen.insert(key) {
                lp.add_row(vars.into_iter().map(|v| (v, T::one())).collect(), T::one())?;
                added = true;
            }
        }
        if lp.rows.len() > row_cap {
            return Err(Error::RowPoolExhausted(row_cap));
        }
        assert!(added, "separation returned only rows already in the pool");
        let sol = simplex_solve(&lp)?;
        assert!(scalar::le(&value, &sol.value), "LP value decreased from {value} to {}", sol.value);
        value = sol.value;
        x = sol.x;
    }
    // independent final pass
    let check = |s: NodeId, t: NodeId, bound: u64| match min_short_mass(g, &space, &x, s, t, bound) {
        Some(m) if scalar::lt(&m, &T::one()) => Err(Error::InfeasibleLpInput(m.to_wire())),
        _ => Ok(()),
    };
    match &cover {
        Cover::Pairs(pairs) => {
            let all = g.total_length() + 1;
            for &(s, t) in pairs {
                check(s, t, all)?;
            }
        }
        Cover::Short { s, t, bound } => check(*s, *t, *bound)?,
    }
    Ok(CoverLp { value, x, rows: lp.rows.len(), rounds })
}

/// Fractional multicut: cover every `s_i -> t_i` path.
pub fn multicut_lp<T: Scalar>(inst: &CutInstance<T>) -> Result<CoverLp<T>> {
    multicut_lp_with(inst, ROW_CAP)
}

pub fn multicut_lp_with<T: Scalar>(inst: &CutInstance<T>, row_cap: usize) -> Result<CoverLp<T>> {
    solve_cover(inst, Cover::Pairs(inst.pairs()?.to_vec()), row_cap)
}

/// Fractional length-bounded cut: cover every `s`-`t` path of length `< bound`.
pub fn short_path_cover_lp<T: Scalar>(inst: &CutInstance<T>, bound: u64) -> Result<CoverLp<T>> {
    short_path_cover_lp_with(inst, bound, ROW_CAP)
}

pub fn short_path_cover_lp_with<T: Scalar>(inst: &CutInstance<T>, bound: u64, row_cap: usize) -> Result<CoverLp<T>> {
    let (s, t, _) = inst.length_bound()?;
    if bound == 0 {
        return Err(Error::InvalidInstance("length bound must be positive".into()));
    }
    solve_cover(inst, Cover::Short { s, t, bound }, row_cap)
}

/// Check that `x` covers every `s`-`t` path of length `< bound`.
pub fn check_short_cover<T: Scalar>(inst: &CutInstance<T>, bound: u64, x: &[T]) -> Result<()> {
    let (s, t, _) = inst.length_bound()?;
    match min_short_mass(&inst.graph, &inst.space(), x, s, t, bound) {
        Some(m) if scalar::lt(&m, &T::one()) => Err(Error::InfeasibleLpInput(m.to_wire())),
        _ => Ok(()),
    }
}

/// Integral optimum against fractional optimum.
#[derive(Clone, Debug, PartialEq)]
pub struct GapReport<T> {
    pub lp_value: T,
    pub integral_value: T,
    pub gap: T,
    pub params: Vec<(String, String)>,
}

impl<T: Scalar> GapReport<T> {
    pub fn new(lp_value: T, integral_value: T, params: Vec<(String, String)>) -> Result<Self> {
        if scalar::lt(&integral_value, &lp_value) {
            return Err(Error::Infeasible(format!(
                "integral value {integral_value} is below the LP value {lp_value}"
            )));
        }
        let gap = if lp_value.is_negligible() {
            if integral_value.is_negligible() {
                T::one()
            } else {
                return Err(Error::Infeasible("LP value is zero but the integral value is not".into()));
            }
        } else {
            integral_value.clone() / lp_value.clone()
        };
        Ok(GapReport { lp_value, integral_value, gap, params })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> =
            self.params.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
        serde_json::json!({
            "params": params,
            "lp_value": self.lp_value.to_wire(),
            "integral_value": self.integral_value.to_wire(),
            "gap": self.gap.to_wire(),
        })
    }
}

/// Run both solvers and compare.
pub fn gap_report<T: Scalar>(
    params: Vec<(String, String)>,
    exact: impl FnOnce() -> Result<CutSolution<T>>,
    lp: impl FnOnce() -> Result<CoverLp<T>>,
) -> Result<GapReport<T>> {
    let lp = lp()?;
    let exact = exact()?;
    GapReport::new(lp.value, exact.cost, params)
}
