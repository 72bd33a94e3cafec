//! Weighted graphs with integer edge lengths, cut instances and the path and
//! flow primitives the solvers are built from.

mod flow;
mod paths;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use flow::min_st_cut;
pub use paths::{
    constrained_min_weight_path, min_hop_short_path, min_weight_path, reachable_from,
    shortest_distances, shortest_path_length, Distance, PathWitness,
};

pub type NodeId = usize;
pub type EdgeId = usize;

/// Weight of a node or edge. Uncuttable elements carry no number at all.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight<T> {
    Finite(T),
    Uncuttable,
}

impl<T: Scalar> Weight<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Weight::Finite(w) => Some(w),
            Weight::Uncuttable => None,
        }
    }

    pub fn is_cuttable(&self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    pub fn map<U>(&self, f: impl FnOnce(&T) -> U) -> Weight<U> {
        match self {
            Weight::Finite(w) => Weight::Finite(f(w)),
            Weight::Uncuttable => Weight::Uncuttable,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node<T> {
    pub name: String,
    pub weight: Weight<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T> {
    pub tail: NodeId,
    pub head: NodeId,
    pub directed: bool,
    pub length: u64,
    pub weight: Weight<T>,
}

impl<T> Edge<T> {
    /// The endpoint reached when leaving `from` along this edge, if allowed.
    pub fn traverse(&self, from: NodeId) -> Option<NodeId> {
        if from == self.tail {
            Some(self.head)
        } else if !self.directed && from == self.head {
            Some(self.tail)
        } else {
            None
        }
    }
}

/// Something that can be removed from a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Node(NodeId),
    Edge(EdgeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutMode {
    Vertex,
    Edge,
}

impl fmt::Display for CutMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutMode::Vertex => "vertex",
            CutMode::Edge => "edge",
        })
    }
}

impl std::str::FromStr for CutMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(CutMode::Vertex),
            "edge" => Ok(CutMode::Edge),
            other => Err(Error::Parse(format!("unknown cut mode {other:?}"))),
        }
    }
}

/// Directed or undirected multigraph. Parallel edges are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph<T> {
    nodes: Vec<Node<T>>,
    edges: Vec<Edge<T>>,
    index: HashMap<String, NodeId>,
    /// `adjacency[v]` lists `(edge, neighbour)` pairs traversable from `v`.
    adjacency: Vec<Vec<(EdgeId, NodeId)>>,
}

impl<T: Scalar> Default for WeightedGraph<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn new() -> Self {
        WeightedGraph {
            nodes: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
            adjacency: Vec::new(),
        }
    }

    pub fn add_node(&mut self, name: impl Into<String>, weight: Weight<T>) -> Result<NodeId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::InvalidGraph(format!("duplicate node {name:?}")));
        }
        check_weight(&weight, &name)?;
        let id = self.nodes.len();
        self.index.insert(name.clone(), id);
        self.nodes.push(Node { name, weight });
        self.adjacency.push(Vec::new());
        Ok(id)
    }

    pub fn add_edge(
        &mut self,
        tail: NodeId,
        head: NodeId,
        directed: bool,
        length: u64,
        weight: Weight<T>,
    ) -> Result<EdgeId> {
        for v in [tail, head] {
            if v >= self.nodes.len() {
                return Err(Error::UnknownNode(format!("#{v}")));
            }
        }
        if length == 0 {
            return Err(Error::InvalidGraph(format!(
                "edge {} - {} has length 0",
                self.nodes[tail].name, self.nodes[head].name
            )));
        }
        check_weight(&weight, "edge")?;
        let id = self.edges.len();
        self.adjacency[tail].push((id, head));
        if !directed && tail != head {
            self.adjacency[head].push((id, tail));
        }
        self.edges.push(Edge {
            tail,
            head,
            directed,
            length,
            weight,
        });
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &Node<T> {
        &self.nodes[id]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge<T> {
        &self.edges[id]
    }

    pub fn find(&self, name: &str) -> Result<NodeId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn neighbours(&self, v: NodeId) -> &[(EdgeId, NodeId)] {
        &self.adjacency[v]
    }

    pub fn weight_of(&self, element: Element) -> &Weight<T> {
        match element {
            Element::Node(v) => &self.nodes[v].weight,
            Element::Edge(e) => &self.edges[e].weight,
        }
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(format!("#{v}")))
        }
    }

    pub fn describe(&self, element: Element) -> String {
        match element {
            Element::Node(v) => self.nodes[v].name.clone(),
            Element::Edge(e) => {
                let edge = &self.edges[e];
                let arrow = if edge.directed { "->" } else { "--" };
                format!(
                    "#{e} {}{arrow}{}",
                    self.nodes[edge.tail].name, self.nodes[edge.head].name
                )
            }
        }
    }

    /// Total of all finite weights of the given kind.
    pub fn total_weight(&self, mode: CutMode) -> T {
        match mode {
            CutMode::Vertex => self.nodes.iter().filter_map(|n| n.weight.finite()).cloned().sum(),
            CutMode::Edge => self.edges.iter().filter_map(|e| e.weight.finite()).cloned().sum(),
        }
    }

    pub fn total_length(&self) -> u64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Sum of weights of `elements`; fails on uncuttable members.
    pub fn cost_of<'a>(&self, elements: impl IntoIterator<Item = &'a Element>) -> Result<T> {
        let mut total = T::zero();
        for &el in elements {
            match self.weight_of(el) {
                Weight::Finite(w) => total = total + w.clone(),
                Weight::Uncuttable => return Err(Error::RemovingUncuttable(self.describe(el))),
            }
        }
        Ok(total)
    }

    /// Removal masks for an element set, rejecting unknown or uncuttable members.
    pub fn removal(&self, removed: &BTreeSet<Element>) -> Result<Removal> {
        let mut mask = Removal::none(self);
        for &el in removed {
            match el {
                Element::Node(v) => {
                    self.check_node(v)?;
                    mask.nodes[v] = true;
                }
                Element::Edge(e) => {
                    if e >= self.edges.len() {
                        return Err(Error::InvalidGraph(format!("unknown edge #{e}")));
                    }
                    mask.edges[e] = true;
                }
            }
            if !self.weight_of(el).is_cuttable() {
                return Err(Error::RemovingUncuttable(self.describe(el)));
            }
        }
        Ok(mask)
    }

    /// Replace every weight through `f`, keeping structure.
    pub fn map_weights<U: Scalar>(&self, f: impl Fn(&T) -> U) -> WeightedGraph<U> {
        WeightedGraph {
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    name: n.name.clone(),
                    weight: n.weight.map(&f),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    tail: e.tail,
                    head: e.head,
                    directed: e.directed,
                    length: e.length,
                    weight: e.weight.map(&f),
                })
                .collect(),
            index: self.index.clone(),
            adjacency: self.adjacency.clone(),
        }
    }
}

fn check_weight<T: Scalar>(weight: &Weight<T>, what: &str) -> Result<()> {
    if let Weight::Finite(w) = weight {
        if *w < T::zero() && !w.is_negligible() {
            return Err(Error::InvalidGraph(format!("negative weight {w} on {what}")));
        }
    }
    Ok(())
}

/// Dense removal masks, the internal form of an element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Removal {
    pub nodes: Vec<bool>,
    pub edges: Vec<bool>,
}

impl Removal {
    pub fn none<T>(g: &WeightedGraph<T>) -> Self {
        Removal {
            nodes: vec![false; g.nodes.len()],
            edges: vec![false; g.edges.len()],
        }
    }

    pub fn set(&mut self, element: Element, value: bool) {
        match element {
            Element::Node(v) => self.nodes[v] = value,
            Element::Edge(e) => self.edges[e] = value,
        }
    }

    pub fn contains(&self, element: Element) -> bool {
        match element {
            Element::Node(v) => self.nodes[v],
            Element::Edge(e) => self.edges[e],
        }
    }
}

/// Which problem a [`CutInstance`] poses on its graph.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Multicut { pairs: Vec<(NodeId, NodeId)> },
    LengthBound { s: NodeId, t: NodeId, bound: u64 },
    Rmfc { s: NodeId, targets: BTreeSet<NodeId> },
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Multicut { .. } => "multicut",
            Problem::LengthBound { .. } => "length_bound",
            Problem::Rmfc { .. } => "rmfc",
        }
    }

    pub fn terminals(&self) -> BTreeSet<NodeId> {
        match self {
            Problem::Multicut { pairs } => pairs.iter().flat_map(|&(s, t)| [s, t]).collect(),
            Problem::LengthBound { s, t, .. } => [*s, *t].into_iter().collect(),
            Problem::Rmfc { s, targets } => std::iter::once(*s).chain(targets.iter().copied()).collect(),
        }
    }
}

/// A graph, a cut mode and the problem to solve on it.
#[derive(Clone, Debug, PartialEq)]
pub struct CutInstance<T> {
    pub graph: WeightedGraph<T>,
    pub mode: CutMode,
    pub problem: Problem,
}

impl<T: Scalar> CutInstance<T> {
    pub fn new(graph: WeightedGraph<T>, mode: CutMode, problem: Problem) -> Result<Self> {
        for v in problem.terminals() {
            graph.check_node(v)?;
        }
        match &problem {
            Problem::Multicut { pairs } => {
                let mut seen = BTreeSet::new();
                for &(s, t) in pairs {
                    if s == t {
                        return Err(Error::InvalidInstance(format!(
                            "pair ({0}, {0}) is degenerate",
                            graph.node(s).name
                        )));
                    }
                    if !seen.insert((s, t)) {
                        return Err(Error::InvalidInstance("duplicate terminal pair".into()));
                    }
                }
            }
            Problem::LengthBound { s, t, bound } => {
                if s == t || *bound == 0 {
                    return Err(Error::InvalidInstance("need s != t and a positive bound".into()));
                }
            }
            Problem::Rmfc { s, targets } => {
                if targets.contains(s) {
                    return Err(Error::InvalidInstance("fire source is a target".into()));
                }
            }
        }
        if mode == CutMode::Vertex {
            // firefighter targets may be saved directly; the fire source may not
            let fixed = match &problem {
                Problem::Rmfc { s, .. } => [*s].into_iter().collect(),
                _ => problem.terminals(),
            };
            for v in fixed {
                if graph.node(v).weight.is_cuttable() {
                    return Err(Error::InvalidInstance(format!(
                        "terminal {} must be uncuttable in vertex mode",
                        graph.node(v).name
                    )));
                }
            }
        }
        Ok(CutInstance {
            graph,
            mode,
            problem,
        })
    }

    pub fn space(&self) -> CutSpace {
        CutSpace::new(&self.graph, self.mode)
    }

    pub fn length_bound(&self) -> Result<(NodeId, NodeId, u64)> {
        match self.problem {
            Problem::LengthBound { s, t, bound } => Ok((s, t, bound)),
            _ => Err(Error::WrongProblem("length_bound")),
        }
    }

    pub fn pairs(&self) -> Result<&[(NodeId, NodeId)]> {
        match &self.problem {
            Problem::Multicut { pairs } => Ok(pairs),
            _ => Err(Error::WrongProblem("multicut")),
        }
    }

    /// Same instance with a different length bound.
    pub fn with_bound(&self, bound: u64) -> Result<Self> {
        let (s, t, _) = self.length_bound()?;
        CutInstance::new(self.graph.clone(), self.mode, Problem::LengthBound { s, t, bound })
    }
}

/// The cuttable elements of a graph under a cut mode, numbered `0..len()`.
///
/// This numbering is the variable order of every LP and search routine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSpace {
    pub mode: CutMode,
    elements: Vec<Element>,
    node_var: Vec<Option<usize>>,
    edge_var: Vec<Option<usize>>,
}

impl CutSpace {
    pub fn new<T: Scalar>(g: &WeightedGraph<T>, mode: CutMode) -> Self {
        let mut elements = Vec::new();
        let mut node_var = vec![None; g.node_count()];
        let mut edge_var = vec![None; g.edge_count()];
        match mode {
            CutMode::Vertex => {
                for (v, node) in g.nodes().iter().enumerate() {
                    if node.weight.is_cuttable() {
                        node_var[v] = Some(elements.len());
                        elements.push(Element::Node(v));
                    }
                }
            }
            CutMode::Edge => {
                for (e, edge) in g.edges().iter().enumerate() {
                    if edge.weight.is_cuttable() {
                        edge_var[e] = Some(elements.len());
                        elements.push(Element::Edge(e));
                    }
                }
            }
        }
        CutSpace {
            mode,
            elements,
            node_var,
            edge_var,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, var: usize) -> Element {
        self.elements[var]
    }

    pub fn var_of(&self, element: Element) -> Option<usize> {
        match element {
            Element::Node(v) => self.node_var.get(v).copied().flatten(),
            Element::Edge(e) => self.edge_var.get(e).copied().flatten(),
        }
    }

    pub fn node_var(&self, v: NodeId) -> Option<usize> {
        self.node_var[v]
    }

    pub fn edge_var(&self, e: EdgeId) -> Option<usize> {
        self.edge_var[e]
    }

    pub fn weights<T: Scalar>(&self, g: &WeightedGraph<T>) -> Vec<T> {
        self.elements
            .iter()
            .map(|&el| g.weight_of(el).finite().cloned().expect("cut space holds cuttable elements"))
            .collect()
    }

    /// Cuttable elements met along a path, each once, in path order.
    pub fn vars_on(&self, path: &PathWitness) -> Vec<usize> {
        let mut out = Vec::new();
        let mut push = |var: Option<usize>| {
            if let Some(var) = var {
                if !out.contains(&var) {
                    out.push(var);
                }
            }
        };
        match self.mode {
            CutMode::Vertex => path.nodes.iter().for_each(|&v| push(self.node_var[v])),
            CutMode::Edge => path.edges.iter().for_each(|&e| push(self.edge_var[e])),
        }
        out
    }

    pub fn removal_of<T>(&self, g: &WeightedGraph<T>, chosen: &[bool]) -> Removal {
        let mut mask = Removal::none(g);
        for (var, &on) in chosen.iter().enumerate() {
            if on {
                mask.set(self.elements[var], true);
            }
        }
        mask
    }

    pub fn element_set(&self, chosen: &[bool]) -> BTreeSet<Element> {
        chosen
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(var, _)| self.elements[var])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn path_graph() -> WeightedGraph<BigRational> {
        let mut g = WeightedGraph::new();
        let s = g.add_node("s", Weight::Uncuttable).unwrap();
        let a = g.add_node("a", Weight::Finite(ratio(1, 1))).unwrap();
        let t = g.add_node("t", Weight::Uncuttable).unwrap();
        g.add_edge(s, a, false, 1, Weight::Finite(ratio(2, 1))).unwrap();
        g.add_edge(a, t, false, 1, Weight::Uncuttable).unwrap();
        g
    }

    #[test]
    fn rejects_bad_structure() {
        let mut g = path_graph();
        assert!(matches!(g.add_node("s", Weight::Uncuttable), Err(Error::InvalidGraph(_))));
        assert!(matches!(g.add_edge(0, 9, true, 1, Weight::Uncuttable), Err(Error::UnknownNode(_))));
        assert!(matches!(g.add_edge(0, 1, true, 0, Weight::Uncuttable), Err(Error::InvalidGraph(_))));
        assert!(g.add_node("neg", Weight::Finite(ratio(-1, 2))).is_err());
    }

    #[test]
    fn undirected_adjacency_is_symmetric() {
        let g = path_graph();
        assert_eq!(g.neighbours(1), &[(0, 0), (1, 2)]);
        assert_eq!(g.edge(0).traverse(1), Some(0));
    }

    #[test]
    fn cut_space_follows_mode() {
        let g = path_graph();
        let v = CutSpace::new(&g, CutMode::Vertex);
        assert_eq!(v.elements(), &[Element::Node(1)]);
        let e = CutSpace::new(&g, CutMode::Edge);
        assert_eq!(e.elements(), &[Element::Edge(0)]);
        assert_eq!(e.weights(&g), vec![ratio(2, 1)]);
    }

    #[test]
    fn terminals_must_be_uncuttable_in_vertex_mode() {
        let g = path_graph();
        let bad = CutInstance::new(g.clone(), CutMode::Vertex, Problem::Multicut { pairs: vec![(1, 2)] });
        assert!(matches!(bad, Err(Error::InvalidInstance(_))));
        let ok = CutInstance::new(g, CutMode::Vertex, Problem::Multicut { pairs: vec![(0, 2)] });
        assert!(ok.is_ok());
    }

    #[test]
    fn removal_rejects_uncuttable() {
        let g = path_graph();
        let set: BTreeSet<_> = [Element::Edge(1)].into_iter().collect();
        assert!(matches!(g.removal(&set), Err(Error::RemovingUncuttable(_))));
    }
}
