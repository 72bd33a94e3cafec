use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::exact::rmfc_simulate;
use crate::gadgets::{harmonic_number, DictatorCut, Gadget, GadgetParams, Layout, Limits};
use crate::gadgets::dictator::{dictator_edge, dictator_vertex};
use crate::graph::{CutInstance, Element, NodeId, Weight, WeightedGraph};
use crate::prob::FiniteProbSpace;
use crate::scalar::{self, Scalar};
use crate::solution::{distance_after, disconnects, CutSolution, Schedule};
use crate::ug::{Labeling, UniqueGamesInstance};

/// A Unique Games instance composed with a dictatorship test.
///
/// Copy `w` of gadget block `i` is block `w * gadget_blocks + i` of `layout`,
/// so node ids follow the same arithmetic as in the gadget itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Composed<T> {
    pub params: GadgetParams<T>,
    pub instance: CutInstance<T>,
    pub layout: Layout,
    pub space: FiniteProbSpace<T>,
    pub gadget_blocks: usize,
}

impl<T: Scalar> Composed<T> {
    /// `(w, gadget block, point)` of a non-terminal node.
    pub fn locate(&self, v: NodeId) -> Option<(usize, usize, usize)> {
        self.layout.locate(v).map(|(b, p)| (b / self.gadget_blocks, b % self.gadget_blocks, p))
    }

    pub fn node(&self, w: usize, block: usize, point: usize) -> NodeId {
        self.layout.node(w * self.gadget_blocks + block, point)
    }

    pub fn copies(&self) -> usize {
        self.layout.blocks / self.gadget_blocks
    }

    /// Atom at coordinate `q` of the point at flat index `point`.
    pub fn coord(&self, point: usize, q: usize) -> usize {
        point / self.layout.alphabet.pow((self.layout.arity - 1 - q) as u32) % self.layout.alphabet
    }
}

type EdgeKey = (NodeId, NodeId, bool, u64, bool);

struct EdgePool<T> {
    index: HashMap<EdgeKey, usize>,
    edges: Vec<(EdgeKey, Weight<T>)>,
}

impl<T: Scalar> EdgePool<T> {
    fn add(&mut self, tail: NodeId, head: NodeId, directed: bool, length: u64, weight: Weight<T>) {
        let (a, b) = if directed || tail <= head { (tail, head) } else { (head, tail) };
        let key = (a, b, directed, length, weight.is_cuttable());
        match self.index.get(&key) {
            Some(&i) => {
                if let (Weight::Finite(old), Weight::Finite(add)) = (&mut self.edges[i].1, weight) {
                    *old = old.clone() + add;
                }
            }
            None => {
                self.index.insert(key, self.edges.len());
                self.edges.push((key, weight));
            }
        }
    }
}

/// Replace every `w` by a copy of the test, joined through the constraints
/// of `ug`: a test edge `(x, y)` becomes `((w1, x o pi(u,w1)), (w2, y o pi(u,w2)))`
/// for every `u` and ordered pair of its neighbours. Parallel edges are merged
/// by adding their weights.
pub fn compose<T: Scalar>(ug: &UniqueGamesInstance, gadget: &Gadget<T>, limits: &Limits) -> Result<Composed<T>> {
    if matches!(gadget.params, GadgetParams::Saks(_)) {
        return Err(Error::InvalidInstance("the Saks instance is not a dictatorship test".into()));
    }
    let arity = gadget.params.arity();
    if ug.labels != arity {
        return Err(Error::LabelMismatch { ug: ug.labels, test: arity });
    }
    let g = &gadget.instance.graph;
    let lay = &gadget.layout;
    let c = lay.cube_size();
    let n_w = ug.w.len();
    let nodes = lay.terminals as u128 + (n_w * lay.blocks) as u128 * c as u128;
    crate::error::guard("composed nodes", nodes, limits.max_nodes)?;
    let hoods = ug.neighbourhoods();
    let inner = g.edges().iter().filter(|e| lay.locate(e.tail).is_some() && lay.locate(e.head).is_some()).count();
    let triples: u128 = hoods.iter().map(|h| (h.len() * h.len()) as u128).sum();
    let edges = triples.saturating_mul(inner as u128) + (n_w * (g.edge_count() - inner)) as u128;
    crate::error::guard("composed edges", edges, limits.max_edges)?;

    let layout = Layout {
        terminals: lay.terminals,
        blocks: n_w * lay.blocks,
        alphabet: lay.alphabet,
        arity,
        block_labels: ug.w.iter().flat_map(|w| lay.block_labels.iter().map(move |b| format!("{w}|{b}"))).collect(),
    };
    let mut out = WeightedGraph::new();
    for v in 0..lay.terminals {
        let node = g.node(v);
        out.add_node(node.name.clone(), node.weight.clone())?;
    }
    let share = T::from_ratio(1, n_w as i64);
    for w in &ug.w {
        for v in lay.terminals..lay.terminals + lay.blocks * c {
            let node = g.node(v);
            out.add_node(format!("{w}|{}", node.name), node.weight.map(|x| x.clone() * share.clone()))?;
        }
    }
    let at = |w: usize, v: NodeId, point: usize| -> NodeId {
        let (block, _) = lay.locate(v).expect("cube node");
        layout.node(w * lay.blocks + block, point)
    };

    // point index of x o sigma for every x, per constraint
    let n = lay.alphabet;
    let coords: Vec<Vec<usize>> = (0..c).map(|p| gadget.point_coords(p)).collect();
    let moved: Vec<Vec<usize>> = ug
        .edges
        .iter()
        .map(|e| coords.iter().map(|x| e.perm.iter().fold(0, |acc, &s| acc * n + x[s])).collect())
        .collect();

    let mut pool = EdgePool { index: HashMap::new(), edges: Vec::new() };
    for edge in g.edges() {
        match (lay.locate(edge.tail), lay.locate(edge.head)) {
            (Some(_), Some(_)) => {}
            (None, Some((_, p))) => {
                for w in 0..n_w {
                    pool.add(edge.tail, at(w, edge.head, p), edge.directed, edge.length, edge.weight.clone());
                }
            }
            (Some((_, p)), None) => {
                for w in 0..n_w {
                    pool.add(at(w, edge.tail, p), edge.head, edge.directed, edge.length, edge.weight.clone());
                }
            }
            (None, None) => pool.add(edge.tail, edge.head, edge.directed, edge.length, edge.weight.clone()),
        }
    }
    for hood in &hoods {
        let prob = T::from_ratio(1, (ug.u.len() * hood.len() * hood.len()) as i64);
        for &e1 in hood {
            for &e2 in hood {
                let (w1, w2) = (ug.edges[e1].w, ug.edges[e2].w);
                for edge in g.edges() {
                    let (Some((_, p)), Some((_, q))) = (lay.locate(edge.tail), lay.locate(edge.head)) else {
                        continue;
                    };
                    pool.add(
                        at(w1, edge.tail, moved[e1][p]),
                        at(w2, edge.head, moved[e2][q]),
                        edge.directed,
                        edge.length,
                        edge.weight.map(|x| x.clone() * prob.clone()),
                    );
                }
            }
        }
    }
    for ((tail, head, directed, length, _), weight) in pool.edges {
        out.add_edge(tail, head, directed, length, weight)?;
    }
    let instance = CutInstance::new(out, gadget.instance.mode, gadget.instance.problem.clone())?;
    Ok(Composed {
        params: gadget.params.clone(),
        instance,
        layout,
        space: gadget.space.clone(),
        gadget_blocks: lay.blocks,
    })
}

/// The completeness cut of a composition together with its checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Completeness<T> {
    pub cut: DictatorCut<T>,
    /// Total cost, or the largest per-day cost for a schedule.
    pub cost: T,
    /// The cost the cut is allowed.
    pub bound: T,
    /// `1 - |W'| / |W|`.
    pub eta: T,
    /// The post-cut property that was checked, in words.
    pub property: String,
    pub property_holds: bool,
}

impl<T: Scalar> Completeness<T> {
    pub fn passed(&self) -> bool {
        self.property_holds && scalar::le(&self.cost, &self.bound)
    }
}

/// Per-copy dictator cut at coordinate `l(w)` for `w` in `W'`, the whole copy otherwise.
pub fn completeness_cut<T: Scalar>(
    composed: &Composed<T>,
    ug: &UniqueGamesInstance,
    labeling: &Labeling,
    w_prime: &BTreeSet<usize>,
) -> Result<Completeness<T>> {
    labeling.check(ug)?;
    if composed.copies() != ug.w.len() {
        return Err(Error::InvalidInstance("composition and unique games instance disagree on |W|".into()));
    }
    for e in &ug.edges {
        if w_prime.contains(&e.w) && !labeling.satisfies(e) {
            return Err(Error::LabelingNotPerfectOnWPrime { u: ug.u[e.u].clone(), w: ug.w[e.w].clone() });
        }
    }
    let n_w = ug.w.len();
    let good = w_prime.iter().filter(|&&w| w < n_w).count();
    let eta = T::from_ratio((n_w - good) as i64, n_w as i64);
    let inst = &composed.instance;
    let g = &inst.graph;
    let c = composed.layout.cube_size();
    let count = |x: usize| T::from_count(x);

    let vertex_cut = |keep_day: Option<usize>| -> BTreeSet<NodeId> {
        let mut set = BTreeSet::new();
        for w in 0..n_w {
            for block in 0..composed.gadget_blocks {
                if keep_day.is_some_and(|d| d != block) {
                    continue;
                }
                for point in 0..c {
                    let hit = !w_prime.contains(&w)
                        || dictator_vertex(&composed.params, block, composed.coord(point, labeling.w[w]));
                    if hit {
                        set.insert(composed.node(w, block, point));
                    }
                }
            }
        }
        set
    };

    match &composed.params {
        GadgetParams::Saks(_) => Err(Error::InvalidInstance("the Saks instance is not a dictatorship test".into())),
        GadgetParams::Multicut(p) => {
            let set: BTreeSet<Element> = vertex_cut(None).into_iter().map(Element::Node).collect();
            let sol = CutSolution::priced(g, set)?;
            let ok = disconnects(g, inst.pairs()?, &sol.elements)?;
            let r = count(p.r);
            let bound = scalar::pow(&r, p.k - 1) * (T::one() + r.clone() * p.eps.clone() + r * eta.clone());
            Ok(Completeness {
                cost: sol.cost.clone(),
                cut: DictatorCut::Cut(CutSolution { verified: ok, ..sol }),
                bound,
                eta,
                property: "every pair disconnected".into(),
                property_holds: ok,
            })
        }
        GadgetParams::Vertex(p) => {
            let set: BTreeSet<Element> = vertex_cut(None).into_iter().map(Element::Node).collect();
            let sol = CutSolution::priced(g, set)?;
            let (s, t, _) = inst.length_bound()?;
            let need = p.a * (p.b as u64 + 2).saturating_sub(p.r as u64);
            let dist = distance_after(g, s, t, &sol.elements)?;
            let b1 = count(p.b + 1);
            let bound = b1.clone() * (p.eps.clone() + (T::one() - p.eps.clone()) / count(p.r)) + eta.clone() * b1;
            Ok(Completeness {
                cost: sol.cost.clone(),
                cut: DictatorCut::Cut(CutSolution { verified: dist.at_least(need), ..sol }),
                bound,
                eta,
                property: format!("dist >= {need} (found {dist})"),
                property_holds: dist.at_least(need),
            })
        }
        GadgetParams::Edge(p) => {
            let mut set = BTreeSet::new();
            for (e, edge) in g.edges().iter().enumerate() {
                if !edge.weight.is_cuttable() {
                    continue;
                }
                let (Some(a), Some(b)) = (composed.locate(edge.tail), composed.locate(edge.head)) else {
                    continue;
                };
                let ((w1, _, x), (w2, _, y)) = if a.1 <= b.1 { (a, b) } else { (b, a) };
                let hit = !w_prime.contains(&w1)
                    || !w_prime.contains(&w2)
                    || dictator_edge(p.r, composed.coord(x, labeling.w[w1]), composed.coord(y, labeling.w[w2]));
                if hit {
                    set.insert(Element::Edge(e));
                }
            }
            let sol = CutSolution::priced(g, set)?;
            let (s, t, _) = inst.length_bound()?;
            let need = p.a * (p.b as u64 + 1).saturating_sub(p.r as u64);
            let dist = distance_after(g, s, t, &sol.elements)?;
            let b = count(p.b);
            let bound = count(2 * p.b) / count(p.r) + count(2) * eta.clone() * b;
            Ok(Completeness {
                cost: sol.cost.clone(),
                cut: DictatorCut::Cut(CutSolution { verified: dist.at_least(need), ..sol }),
                bound,
                eta,
                property: format!("dist >= {need} (found {dist})"),
                property_holds: dist.at_least(need),
            })
        }
        GadgetParams::Rmfc(p) => {
            let days: Vec<BTreeSet<NodeId>> = (0..p.b).map(|day| vertex_cut(Some(day))).collect();
            let sched = Schedule::priced(g, days)?;
            let trace = rmfc_simulate(inst, &sched.days, None)?;
            let b = count(p.b);
            let inv_h = T::from_rational(&(num_rational::BigRational::from_integer(1.into()) / harmonic_number(p.b)));
            let bound = b.clone() * p.eps.clone() + inv_h + b * eta.clone();
            Ok(Completeness {
                cost: sched.max_day_cost(),
                cut: DictatorCut::Schedule(sched),
                bound,
                eta,
                property: "no target burns".into(),
                property_holds: !trace.target_burnt,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{build_gadget, dictator_cut, VertexParams};
    use crate::scalar::ratio;
    use crate::ug::{identity_ug, synth_ug, SynthMode};
    use num_rational::BigRational;

    type Q = BigRational;

    fn small_vertex() -> Gadget<Q> {
        let p = GadgetParams::Vertex(VertexParams { a: 2, b: 2, r: 2, big_r: 2, eps: ratio(1, 20) });
        build_gadget(&p, &Limits::default()).unwrap()
    }

    #[test]
    fn identity_composition_keeps_the_gadget() {
        let gadget = small_vertex();
        let comp = compose(&identity_ug(2), &gadget, &Limits::default()).unwrap();
        assert_eq!(comp.instance.graph.node_count(), gadget.instance.graph.node_count());
        assert_eq!(comp.instance.graph.total_weight(comp.instance.mode), gadget.total_weight());
        let lab = Labeling { u: vec![0], w: vec![0] };
        let cert = completeness_cut(&comp, &identity_ug(2), &lab, &[0].into_iter().collect()).unwrap();
        let DictatorCut::Cut(raw) = dictator_cut(&gadget, 0).unwrap() else { panic!() };
        assert_eq!(cert.cost, raw.cost);
        assert!(cert.passed());
    }

    #[test]
    fn planted_composition_passes() {
        let gadget = small_vertex();
        let syn = synth_ug(2, 2, 2, 2, SynthMode::Planted { eta: 0.0 }, 1).unwrap();
        let comp = compose(&syn.instance, &gadget, &Limits::default()).unwrap();
        assert_eq!(comp.instance.graph.total_weight(comp.instance.mode), ratio(3, 1));
        let cert = completeness_cut(&comp, &syn.instance, syn.labeling.as_ref().unwrap(), &syn.w_prime).unwrap();
        assert!(cert.passed(), "{cert:?}");
    }

    #[test]
    fn wrong_label_count() {
        let gadget = small_vertex();
        assert!(matches!(compose(&identity_ug(3), &gadget, &Limits::default()), Err(Error::LabelMismatch { .. })));
    }
}
