use std::collections::BTreeSet;

use crate::error::{guard, Result};
use crate::gadgets::Layout;
use crate::graph::{reachable_from, CutInstance, Element, NodeId, Problem};
use crate::prob::{efron_stein_parts, FiniteProbSpace, ProductFunction};
use crate::scalar::{self, Scalar};
use crate::ug::{Composed, Labeling, UniqueGamesInstance};

/// Influence profile of the set reached from one source inside one block.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerInfluence<T> {
    pub source: String,
    pub block: usize,
    pub label: String,
    /// Measure of the reached part of the block.
    pub mean: T,
    /// `(Inf_i, Inf_i^{<=d})` per coordinate.
    pub influences: Vec<(T, T)>,
    /// Coordinates with `Inf_i^{<=d} >= tau`.
    pub flagged: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceReport<T> {
    pub degree: usize,
    pub threshold: T,
    pub layers: Vec<LayerInfluence<T>>,
}

impl<T: Scalar> InfluenceReport<T> {
    /// Coordinates flagged by any layer.
    pub fn flagged(&self) -> BTreeSet<usize> {
        self.layers.iter().flat_map(|l| l.flagged.iter().copied()).collect()
    }
}

/// After removing `cut`, take the indicator of the nodes of each block that
/// are still reachable from a source and report its influences under `space`.
pub fn reachable_set_influences<T: Scalar>(
    inst: &CutInstance<T>,
    layout: &Layout,
    space: &FiniteProbSpace<T>,
    cut: &BTreeSet<Element>,
    d: usize,
    tau: &T,
) -> Result<InfluenceReport<T>> {
    let g = &inst.graph;
    let removal = g.removal(cut)?;
    let sources: Vec<NodeId> = match &inst.problem {
        Problem::Multicut { pairs } => pairs.iter().map(|p| p.0).collect(),
        Problem::LengthBound { s, .. } | Problem::Rmfc { s, .. } => vec![*s],
    };
    let c = layout.cube_size();
    guard(
        "influence table entries",
        (sources.len() * layout.blocks) as u128 * ((c as u128) << layout.arity),
        1 << 26,
    )?;
    let mut layers = Vec::new();
    for &s in &sources {
        let seen = reachable_from(g, &[s], Some(&removal));
        for block in 0..layout.blocks {
            let values = (0..c)
                .map(|p| if seen[layout.node(block, p)] { T::one() } else { T::zero() })
                .collect();
            let f = ProductFunction::new(space.clone(), layout.arity, values)?;
            let influences = efron_stein_parts(&f)?.influences(d);
            let flagged = influences
                .iter()
                .enumerate()
                .filter(|(_, (_, low))| scalar::le(tau, low))
                .map(|(i, _)| i)
                .collect();
            layers.push(LayerInfluence {
                source: g.node(s).name.clone(),
                block,
                label: layout.block_labels[block].clone(),
                mean: f.expectation(),
                influences,
                flagged,
            });
        }
    }
    Ok(InfluenceReport { degree: d, threshold: tau.clone(), layers })
}

/// Labeling heuristic: each `w` takes the coordinate of largest summed
/// low-degree influence over its copy, each `u` the label most of its
/// constraints point to. Ties go to the smaller label.
pub fn decode_labeling<T: Scalar>(ug: &UniqueGamesInstance, composed: &Composed<T>, report: &InfluenceReport<T>) -> Labeling {
    let mut score = vec![vec![T::zero(); ug.labels]; ug.w.len()];
    for layer in &report.layers {
        let w = layer.block / composed.gadget_blocks;
        for (q, (_, low)) in layer.influences.iter().enumerate() {
            score[w][q] = score[w][q].clone() + low.clone();
        }
    }
    let argmax = |row: &[T]| {
        (0..row.len()).fold(0, |best, q| if scalar::lt(&row[best], &row[q]) { q } else { best })
    };
    let lw: Vec<usize> = score.iter().map(|row| argmax(row)).collect();
    let mut votes = vec![vec![0usize; ug.labels]; ug.u.len()];
    for e in &ug.edges {
        votes[e.u][e.perm[lw[e.w]]] += 1;
    }
    let lu = votes
        .iter()
        .map(|v| (0..v.len()).fold(0, |best, l| if v[l] > v[best] { l } else { best }))
        .collect();
    Labeling { u: lu, w: lw }
}
