use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::fmt;

use crate::error::Result;
use crate::graph::{CutMode, CutSpace, EdgeId, Element, NodeId, Removal, WeightedGraph};
use crate::scalar::{self, Scalar};

/// Length of a shortest path, or the absence of one.
///
/// `Unreachable` orders above every finite distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u64),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    /// `true` if every surviving path has length at least `bound`.
    pub fn at_least(self, bound: u64) -> bool {
        match self {
            Distance::Finite(d) => d >= bound,
            Distance::Unreachable => true,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("unreachable"),
        }
    }
}

/// A concrete path through the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWitness {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub length: u64,
}

impl PathWitness {
    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    /// Drop cycles so no node repeats. Length and element sets only shrink.
    pub fn shortcut<T: Scalar>(mut self, g: &WeightedGraph<T>) -> Self {
        let mut nodes: Vec<NodeId> = Vec::with_capacity(self.nodes.len());
        let mut edges: Vec<EdgeId> = Vec::with_capacity(self.edges.len());
        for (i, &v) in self.nodes.iter().enumerate() {
            if let Some(pos) = nodes.iter().position(|&u| u == v) {
                nodes.truncate(pos + 1);
                edges.truncate(pos);
            } else {
                if i > 0 {
                    edges.push(self.edges[i - 1]);
                }
                nodes.push(v);
            }
        }
        self.length = edges.iter().map(|&e| g.edge(e).length).sum();
        self.nodes = nodes;
        self.edges = edges;
        self
    }

    fn weight<T: Scalar>(&self, space: &CutSpace, x: &[T]) -> T {
        space.vars_on(self).into_iter().map(|var| x[var].clone()).sum()
    }
}

fn usable(removal: Option<&Removal>, element: Element) -> bool {
    removal.is_none_or(|r| !r.contains(element))
}

/// Dijkstra distances (by edge length) from `s` in `g` minus `removal`.
pub fn shortest_distances<T: Scalar>(
    g: &WeightedGraph<T>,
    s: NodeId,
    removal: Option<&Removal>,
) -> Vec<Distance> {
    let mut dist = vec![Distance::Unreachable; g.node_count()];
    if !usable(removal, Element::Node(s)) {
        return dist;
    }
    let mut heap = BinaryHeap::new();
    dist[s] = Distance::Finite(0);
    heap.push(std::cmp::Reverse((0u64, s)));
    while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
        if Distance::Finite(d) > dist[v] {
            continue;
        }
        for &(e, w) in g.neighbours(v) {
            if !usable(removal, Element::Edge(e)) || !usable(removal, Element::Node(w)) {
                continue;
            }
            let nd = d + g.edge(e).length;
            if Distance::Finite(nd) < dist[w] {
                dist[w] = Distance::Finite(nd);
                heap.push(std::cmp::Reverse((nd, w)));
            }
        }
    }
    dist
}

/// Length of the shortest `s`-`t` path after deleting `removed`.
pub fn shortest_path_length<T: Scalar>(
    g: &WeightedGraph<T>,
    s: NodeId,
    t: NodeId,
    removed: &BTreeSet<Element>,
) -> Result<Distance> {
    g.check_node(s)?;
    g.check_node(t)?;
    let removal = g.removal(removed)?;
    Ok(shortest_distances(g, s, Some(&removal))[t])
}

/// Nodes reachable from any of `sources` while avoiding `removal`.
pub fn reachable_from<T: Scalar>(
    g: &WeightedGraph<T>,
    sources: &[NodeId],
    removal: Option<&Removal>,
) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if usable(removal, Element::Node(s)) && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(e, w) in g.neighbours(v) {
            if !seen[w] && usable(removal, Element::Edge(e)) && usable(removal, Element::Node(w)) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

struct HeapEntry<T> {
    cost: T,
    node: NodeId,
}

impl<T: Scalar> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for HeapEntry<T> {}

impl<T: Scalar> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for HeapEntry<T> {
    // min-heap on (cost, node)
    fn cmp(&self, other: &Self) -> Ordering {
        scalar::cmp(&other.cost, &self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

fn node_cost<T: Scalar>(space: &CutSpace, x: &[T], v: NodeId) -> T {
    match (space.mode, space.node_var(v)) {
        (CutMode::Vertex, Some(var)) => x[var].clone(),
        _ => T::zero(),
    }
}

fn edge_cost<T: Scalar>(space: &CutSpace, x: &[T], e: EdgeId) -> T {
    match (space.mode, space.edge_var(e)) {
        (CutMode::Edge, Some(var)) => x[var].clone(),
        _ => T::zero(),
    }
}

/// Minimum x-weight `s`-`t` path with no length restriction (Dijkstra on `x`).
///
/// `x` is indexed by the variables of `space`; uncuttable elements cost 0.
pub fn min_weight_path<T: Scalar>(
    g: &WeightedGraph<T>,
    space: &CutSpace,
    x: &[T],
    s: NodeId,
    t: NodeId,
) -> Result<Option<(PathWitness, T)>> {
    g.check_node(s)?;
    g.check_node(t)?;
    let n = g.node_count();
    let mut best: Vec<Option<T>> = vec![None; n];
    let mut pred: Vec<Option<(EdgeId, NodeId)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let start = node_cost(space, x, s);
    best[s] = Some(start.clone());
    heap.push(HeapEntry { cost: start, node: s });
    while let Some(HeapEntry { cost, node: v }) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        if v == t {
            break;
        }
        for &(e, w) in g.neighbours(v) {
            if done[w] {
                continue;
            }
            let cand = cost.clone() + edge_cost(space, x, e) + node_cost(space, x, w);
            let improves = match &best[w] {
                None => true,
                Some(cur) => scalar::lt(&cand, cur),
            };
            if improves {
                best[w] = Some(cand.clone());
                pred[w] = Some((e, v));
                heap.push(HeapEntry { cost: cand, node: w });
            }
        }
    }
    let Some(total) = best[t].clone() else {
        return Ok(None);
    };
    let mut nodes = vec![t];
    let mut edges = Vec::new();
    let mut v = t;
    while let Some((e, u)) = pred[v] {
        edges.push(e);
        nodes.push(u);
        v = u;
    }
    nodes.reverse();
    edges.reverse();
    let length = edges.iter().map(|&e| g.edge(e).length).sum();
    Ok(Some((PathWitness { nodes, edges, length }, total)))
}

type Layer<V> = Vec<Option<(V, Option<(usize, NodeId, EdgeId)>)>>;

/// Dynamic program over `(node, accumulated length)` for walks of length `< bound`.
///
/// `better(a, b)` decides strict improvement; returns the best walk ending in
/// `t` (ties broken towards shorter length) with its value.
#[allow(clippy::too_many_arguments)]
fn short_walk_dp<T: Scalar, V: Clone>(
    g: &WeightedGraph<T>,
    s: NodeId,
    t: NodeId,
    bound: u64,
    removal: Option<&Removal>,
    start: V,
    step: impl Fn(&V, EdgeId, NodeId) -> V,
    better: impl Fn(&V, &V) -> bool,
) -> Option<(PathWitness, V)> {
    if bound == 0 || !usable(removal, Element::Node(s)) {
        return None;
    }
    let n = g.node_count();
    let bound = bound as usize;
    // layer[len][v] = best value of a walk s -> v with total length exactly len
    let mut layers: Vec<Layer<V>> = Vec::with_capacity(bound);
    layers.push(vec![None; n]);
    layers[0][s] = Some((start, None));
    for len in 0..bound {
        if layers.len() <= len {
            layers.push(vec![None; n]);
        }
        for v in 0..n {
            let Some((value, _)) = layers[len][v].clone() else {
                continue;
            };
            for &(e, w) in g.neighbours(v) {
                if !usable(removal, Element::Edge(e)) || !usable(removal, Element::Node(w)) {
                    continue;
                }
                let next = len + g.edge(e).length as usize;
                if next >= bound {
                    continue;
                }
                while layers.len() <= next {
                    layers.push(vec![None; n]);
                }
                let cand = step(&value, e, w);
                let slot = &mut layers[next][w];
                let improves = match slot {
                    None => true,
                    Some((cur, _)) => better(&cand, cur),
                };
                if improves {
                    *slot = Some((cand, Some((len, v, e))));
                }
            }
        }
    }
    let mut best: Option<(usize, V)> = None;
    for (len, layer) in layers.iter().enumerate() {
        if let Some((value, _)) = &layer[t] {
            if best.as_ref().is_none_or(|(_, b)| better(value, b)) {
                best = Some((len, value.clone()));
            }
        }
    }
    let (mut len, value) = best?;
    let mut nodes = vec![t];
    let mut edges = Vec::new();
    let mut v = t;
    while let Some((_, Some((plen, pv, e)))) = &layers[len][v] {
        edges.push(*e);
        nodes.push(*pv);
        v = *pv;
        len = *plen;
    }
    nodes.reverse();
    edges.reverse();
    let length = edges.iter().map(|&e| g.edge(e).length).sum();
    Some((PathWitness { nodes, edges, length }, value))
}

/// Path of total length `< bound` minimising the x-mass of its cuttable elements.
///
/// The walk found by the dynamic program is shortcut to a simple path, which
/// cannot increase its mass because `x >= 0`.
pub fn constrained_min_weight_path<T: Scalar>(
    g: &WeightedGraph<T>,
    space: &CutSpace,
    x: &[T],
    s: NodeId,
    t: NodeId,
    bound: u64,
) -> Result<Option<(PathWitness, T)>> {
    g.check_node(s)?;
    g.check_node(t)?;
    let found = short_walk_dp(
        g,
        s,
        t,
        bound,
        None,
        node_cost(space, x, s),
        |acc, e, w| acc.clone() + edge_cost(space, x, e) + node_cost(space, x, w),
        |a, b| scalar::lt(a, b),
    );
    Ok(found.map(|(walk, _)| {
        let path = walk.shortcut(g);
        let weight = path.weight(space, x);
        (path, weight)
    }))
}

/// Fewest-hop `s`-`t` path avoiding `removal`, optionally of length `< bound`.
pub fn min_hop_short_path<T: Scalar>(
    g: &WeightedGraph<T>,
    s: NodeId,
    t: NodeId,
    bound: Option<u64>,
    removal: Option<&Removal>,
) -> Option<PathWitness> {
    match bound {
        Some(bound) => short_walk_dp(
            g,
            s,
            t,
            bound,
            removal,
            0usize,
            |hops, _, _| hops + 1,
            |a, b| a < b,
        )
        .map(|(walk, _)| walk.shortcut(g)),
        None => bfs_path(g, s, t, removal),
    }
}

fn bfs_path<T: Scalar>(
    g: &WeightedGraph<T>,
    s: NodeId,
    t: NodeId,
    removal: Option<&Removal>,
) -> Option<PathWitness> {
    if !usable(removal, Element::Node(s)) {
        return None;
    }
    let mut pred: Vec<Option<(EdgeId, NodeId)>> = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == t {
            break;
        }
        for &(e, w) in g.neighbours(v) {
            if !seen[w] && usable(removal, Element::Edge(e)) && usable(removal, Element::Node(w)) {
                seen[w] = true;
                pred[w] = Some((e, v));
                queue.push_back(w);
            }
        }
    }
    if !seen[t] {
        return None;
    }
    let mut nodes = vec![t];
    let mut edges = Vec::new();
    let mut v = t;
    while let Some((e, u)) = pred[v] {
        edges.push(e);
        nodes.push(u);
        v = u;
    }
    nodes.reverse();
    edges.reverse();
    let length = edges.iter().map(|&e| g.edge(e).length).sum();
    Some(PathWitness { nodes, edges, length })
}
