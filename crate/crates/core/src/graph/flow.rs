use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{CutMode, Element, NodeId, Weight, WeightedGraph};
use crate::scalar::Scalar;

/// Residual capacity. `None` stands for an uncuttable (infinite) arc.
type Cap<T> = Option<T>;

struct Arc<T> {
    to: usize,
    residual: Cap<T>,
    origin: Option<Element>,
}

struct Network<T> {
    arcs: Vec<Arc<T>>,
    out: Vec<Vec<usize>>,
}

impl<T: Scalar> Network<T> {
    fn add(&mut self, from: usize, to: usize, cap: Cap<T>, origin: Option<Element>) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, residual: cap, origin });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, residual: Some(T::zero()), origin: None });
    }

    fn open(&self, arc: usize) -> bool {
        match &self.arcs[arc].residual {
            None => true,
            Some(c) => *c > T::zero() && !c.is_negligible(),
        }
    }

    fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut via = vec![None; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.out[v] {
                let w = self.arcs[a].to;
                if !seen[w] && self.open(a) {
                    seen[w] = true;
                    via[w] = Some(a);
                    queue.push_back(w);
                }
            }
        }
        via[source] = None;
        via.into_iter()
            .zip(seen)
            .map(|(a, s)| if s { Some(a.unwrap_or(usize::MAX)) } else { None })
            .collect()
    }
}

fn capacity<T: Scalar>(w: &Weight<T>, counts: bool) -> Cap<T> {
    match (counts, w) {
        (true, Weight::Finite(x)) => Some(x.clone()),
        _ => None,
    }
}

/// Minimum-weight set of cuttable elements separating `s` from `t`.
///
/// In vertex mode every node is split into an in/out pair joined by an arc of
/// the node's weight; edges then have infinite capacity. In edge mode node
/// arcs are infinite. Returns [`Error::NoFiniteCut`] when some `s`-`t` path is
/// made only of uncuttable elements.
pub fn min_st_cut<T: Scalar>(
    g: &WeightedGraph<T>,
    s: NodeId,
    t: NodeId,
    mode: CutMode,
) -> Result<(T, BTreeSet<Element>)> {
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(Error::InvalidInstance("source equals sink".into()));
    }
    let n = g.node_count();
    let mut net = Network { arcs: Vec::new(), out: vec![Vec::new(); 2 * n] };
    for (v, node) in g.nodes().iter().enumerate() {
        let cap = if v == s || v == t {
            None
        } else {
            capacity(&node.weight, mode == CutMode::Vertex)
        };
        net.add(2 * v, 2 * v + 1, cap, Some(Element::Node(v)));
    }
    for (e, edge) in g.edges().iter().enumerate() {
        let cap = capacity(&edge.weight, mode == CutMode::Edge);
        net.add(2 * edge.tail + 1, 2 * edge.head, cap.clone(), Some(Element::Edge(e)));
        if !edge.directed {
            net.add(2 * edge.head + 1, 2 * edge.tail, cap, Some(Element::Edge(e)));
        }
    }
    let (source, sink) = (2 * s + 1, 2 * t);

    let mut flow = T::zero();
    loop {
        let via = net.bfs(source);
        if via[sink].is_none() {
            break;
        }
        let mut path = Vec::new();
        let mut v = sink;
        while v != source {
            let a = via[v].expect("reached node has a parent arc");
            path.push(a);
            v = net.arcs[a ^ 1].to;
        }
        let bottleneck = path
            .iter()
            .filter_map(|&a| net.arcs[a].residual.clone())
            .reduce(|x, y| if y < x { y } else { x });
        let Some(delta) = bottleneck else {
            return Err(Error::NoFiniteCut(format!(
                "{} -> {}",
                g.node(s).name,
                g.node(t).name
            )));
        };
        for &a in &path {
            if let Some(r) = net.arcs[a].residual.as_mut() {
                *r = r.clone() - delta.clone();
            }
            if let Some(r) = net.arcs[a ^ 1].residual.as_mut() {
                *r = r.clone() + delta.clone();
            }
        }
        flow = flow + delta;
    }

    let reach = net.bfs(source);
    let mut cut = BTreeSet::new();
    for (v, arcs) in net.out.iter().enumerate() {
        if reach[v].is_none() {
            continue;
        }
        for &a in arcs {
            let arc = &net.arcs[a];
            if a % 2 == 0 && reach[arc.to].is_none() {
                if let Some(el) = arc.origin {
                    cut.insert(el);
                }
            }
        }
    }
    let value = g.cost_of(&cut)?;
    debug_assert!(crate::scalar::approx_eq(&value, &flow), "cut {value} != flow {flow}");
    Ok((value, cut))
}
