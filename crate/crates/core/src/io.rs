//! JSON formats for instances, solutions, schedules and Unique Games instances.
//!
//! Numbers that may be fractional travel as strings (`"3/2"`); uncuttable
//! weights are `null`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::{Gadget, GadgetParams};
use crate::graph::{CutInstance, CutMode, Element, NodeId, Problem, Weight, WeightedGraph};
use crate::scalar::Scalar;
use crate::solution::{CutSolution, Schedule};
use crate::ug::{UgEdge, UniqueGamesInstance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: String,
    pub weight: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub tail: String,
    pub head: String,
    pub directed: bool,
    pub length: u64,
    pub weight: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemJson {
    Multicut { mode: String, pairs: Vec<(String, String)> },
    LengthBound { mode: String, s: String, t: String, ell: u64 },
    Rmfc { mode: String, s: String, targets: Vec<String> },
}

/// Where a generated instance came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
    pub problem: ProblemJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

fn weight_to_wire<T: Scalar>(w: &Weight<T>) -> Option<String> {
    w.finite().map(Scalar::to_wire)
}

fn weight_from_wire<T: Scalar>(w: &Option<String>) -> Result<Weight<T>> {
    match w {
        Some(text) => Ok(Weight::Finite(T::from_wire(text)?)),
        None => Ok(Weight::Uncuttable),
    }
}

pub fn instance_to_json<T: Scalar>(inst: &CutInstance<T>, provenance: Option<Provenance>) -> InstanceJson {
    let g = &inst.graph;
    let name = |v: NodeId| g.node(v).name.clone();
    let mode = inst.mode.to_string();
    let problem = match &inst.problem {
        Problem::Multicut { pairs } => ProblemJson::Multicut { mode, pairs: pairs.iter().map(|&(s, t)| (name(s), name(t))).collect() },
        Problem::LengthBound { s, t, bound } => ProblemJson::LengthBound { mode, s: name(*s), t: name(*t), ell: *bound },
        Problem::Rmfc { s, targets } => ProblemJson::Rmfc { mode, s: name(*s), targets: targets.iter().map(|&v| name(v)).collect() },
    };
    InstanceJson {
        nodes: g.nodes().iter().map(|n| NodeJson { id: n.name.clone(), weight: weight_to_wire(&n.weight) }).collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeJson {
                tail: name(e.tail),
                head: name(e.head),
                directed: e.directed,
                length: e.length,
                weight: weight_to_wire(&e.weight),
            })
            .collect(),
        problem,
        provenance,
    }
}

pub fn instance_from_json<T: Scalar>(doc: &InstanceJson) -> Result<CutInstance<T>> {
    let mut g = WeightedGraph::new();
    for n in &doc.nodes {
        g.add_node(n.id.clone(), weight_from_wire(&n.weight)?)?;
    }
    for e in &doc.edges {
        let (tail, head) = (g.find(&e.tail)?, g.find(&e.head)?);
        g.add_edge(tail, head, e.directed, e.length, weight_from_wire(&e.weight)?)?;
    }
    let (mode, problem) = match &doc.problem {
        ProblemJson::Multicut { mode, pairs } => {
            let pairs = pairs.iter().map(|(s, t)| Ok((g.find(s)?, g.find(t)?))).collect::<Result<_>>()?;
            (mode, Problem::Multicut { pairs })
        }
        ProblemJson::LengthBound { mode, s, t, ell } => (mode, Problem::LengthBound { s: g.find(s)?, t: g.find(t)?, bound: *ell }),
        ProblemJson::Rmfc { mode, s, targets } => {
            let targets = targets.iter().map(|v| g.find(v)).collect::<Result<BTreeSet<_>>>()?;
            (mode, Problem::Rmfc { s: g.find(s)?, targets })
        }
    };
    let mode: CutMode = mode.parse()?;
    CutInstance::new(g, mode, problem)
}

pub fn gadget_to_json<T: Scalar>(gadget: &Gadget<T>) -> InstanceJson {
    let provenance = Provenance {
        generator: gadget.family().to_string(),
        params: gadget.params.to_pairs().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    };
    instance_to_json(&gadget.instance, Some(provenance))
}

impl Provenance {
    pub fn params<T: Scalar>(&self) -> Result<GadgetParams<T>> {
        GadgetParams::from_pairs(&self.generator, &self.params)
    }
}

pub fn parse_instance<T: Scalar>(text: &str) -> Result<(CutInstance<T>, Option<Provenance>)> {
    let doc: InstanceJson = serde_json::from_str(text)?;
    Ok((instance_from_json(&doc)?, doc.provenance))
}

/// A removable element named as in the instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementJson {
    Node(String),
    Edge(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub elements: Vec<ElementJson>,
    pub cost: String,
    pub verified: bool,
}

pub fn solution_to_json<T: Scalar>(g: &WeightedGraph<T>, sol: &CutSolution<T>) -> SolutionJson {
    SolutionJson {
        elements: sol
            .elements
            .iter()
            .map(|el| match *el {
                Element::Node(v) => ElementJson::Node(g.node(v).name.clone()),
                Element::Edge(e) => ElementJson::Edge(e),
            })
            .collect(),
        cost: sol.cost.to_wire(),
        verified: sol.verified,
    }
}

/// Re-prices the elements on `g`; the stored cost and flag are not trusted.
pub fn solution_from_json<T: Scalar>(g: &WeightedGraph<T>, doc: &SolutionJson) -> Result<CutSolution<T>> {
    let elements = doc
        .elements
        .iter()
        .map(|el| match el {
            ElementJson::Node(name) => Ok(Element::Node(g.find(name)?)),
            ElementJson::Edge(e) if *e < g.edge_count() => Ok(Element::Edge(*e)),
            ElementJson::Edge(e) => Err(Error::Parse(format!("edge index {e} out of range"))),
        })
        .collect::<Result<BTreeSet<_>>>()?;
    CutSolution::priced(g, elements)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleJson {
    pub days: Vec<Vec<String>>,
    #[serde(default)]
    pub per_day_cost: Vec<String>,
}

pub fn schedule_to_json<T: Scalar>(g: &WeightedGraph<T>, sched: &Schedule<T>) -> ScheduleJson {
    ScheduleJson {
        days: sched.days.iter().map(|d| d.iter().map(|&v| g.node(v).name.clone()).collect()).collect(),
        per_day_cost: sched.per_day_cost.iter().map(Scalar::to_wire).collect(),
    }
}

pub fn schedule_from_json<T: Scalar>(g: &WeightedGraph<T>, doc: &ScheduleJson) -> Result<Schedule<T>> {
    let days = doc
        .days
        .iter()
        .map(|d| d.iter().map(|v| g.find(v)).collect::<Result<BTreeSet<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Schedule::priced(g, days)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UgEdgeJson {
    pub u: String,
    pub w: String,
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UgJson {
    #[serde(rename = "U")]
    pub u: Vec<String>,
    #[serde(rename = "W")]
    pub w: Vec<String>,
    #[serde(rename = "R")]
    pub r: usize,
    pub edges: Vec<UgEdgeJson>,
}

pub fn ug_to_json(ug: &UniqueGamesInstance) -> UgJson {
    UgJson {
        u: ug.u.clone(),
        w: ug.w.clone(),
        r: ug.labels,
        edges: ug
            .edges
            .iter()
            .map(|e| UgEdgeJson { u: ug.u[e.u].clone(), w: ug.w[e.w].clone(), perm: e.perm.clone() })
            .collect(),
    }
}

pub fn ug_from_json(doc: &UgJson) -> Result<UniqueGamesInstance> {
    let find = |names: &[String], name: &str| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidUniqueGames(format!("unknown vertex {name:?}")))
    };
    let edges = doc
        .edges
        .iter()
        .map(|e| Ok(UgEdge { u: find(&doc.u, &e.u)?, w: find(&doc.w, &e.w)?, perm: e.perm.clone() }))
        .collect::<Result<Vec<_>>>()?;
    UniqueGamesInstance::new(doc.u.clone(), doc.w.clone(), doc.r, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{build_saks_gap, Limits};
    use num_rational::BigRational;

    #[test]
    fn instance_round_trip() {
        let gadget = build_saks_gap::<BigRational>(2, 2, &Limits::default()).unwrap();
        let text = serde_json::to_string(&gadget_to_json(&gadget)).unwrap();
        let (back, prov) = parse_instance::<BigRational>(&text).unwrap();
        assert_eq!(back, gadget.instance);
        assert_eq!(prov.unwrap().params::<BigRational>().unwrap(), gadget.params);
    }

    #[test]
    fn ug_round_trip() {
        let ug = crate::ug::identity_ug(3);
        let back = ug_from_json(&serde_json::from_str(&serde_json::to_string(&ug_to_json(&ug)).unwrap()).unwrap()).unwrap();
        assert_eq!(back, ug);
    }
}
