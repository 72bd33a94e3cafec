use std::collections::BTreeSet;

use crate::error::{guard, Error, Result};
use crate::gadgets::{
    rmfc_alphabet_size, EdgeParams, Gadget, GadgetParams, Layout, Limits, MulticutParams, RmfcParams, SaksParams,
    VertexParams,
};
use crate::graph::{CutInstance, CutMode, NodeId, Problem, Weight, WeightedGraph};
use crate::prob::{points, shift_noise_space, FiniteProbSpace};
use crate::scalar::Scalar;

/// Build any gadget from its parameters.
pub fn build_gadget<T: Scalar>(params: &GadgetParams<T>, limits: &Limits) -> Result<Gadget<T>> {
    match params {
        GadgetParams::Saks(p) => build_saks_gap(p.r, p.k, limits),
        GadgetParams::Multicut(p) => build_dict_multicut(p, limits),
        GadgetParams::Edge(p) => build_dict_edge(p, limits),
        GadgetParams::Vertex(p) => build_dict_vertex(p, limits),
        GadgetParams::Rmfc(p) => build_dict_rmfc(p, limits),
    }
}

fn bracket(items: impl IntoIterator<Item = String>) -> String {
    format!("[{}]", items.into_iter().collect::<Vec<_>>().join(","))
}

/// Grid points of `[r]^k` (entries `1..=r`), lexicographic.
fn grid(r: usize, k: usize) -> Vec<Vec<usize>> {
    points(r, k).map(|p| p.into_iter().map(|a| a + 1).collect()).collect()
}

fn grid_adjacent(alpha: &[usize], beta: &[usize]) -> bool {
    alpha != beta && alpha.iter().zip(beta).all(|(&a, &b)| a.abs_diff(b) <= 1)
}

/// Add one node per `(block, point)` with names `v{label}/[x]`.
fn add_cubes<T: Scalar>(
    g: &mut WeightedGraph<T>,
    layout: &Layout,
    space: &FiniteProbSpace<T>,
    weight: impl Fn(usize, &T) -> Weight<T>,
) -> Result<()> {
    let masses = space.product_table(layout.arity);
    let labels: Vec<String> = points(layout.alphabet, layout.arity)
        .map(|p| bracket(p.into_iter().map(|a| space.atoms()[a].clone())))
        .collect();
    for (block, block_label) in layout.block_labels.iter().enumerate() {
        for (point, mass) in masses.iter().enumerate() {
            let name = if layout.arity == 0 {
                format!("v{block_label}")
            } else {
                format!("v{block_label}/{}", labels[point])
            };
            let id = g.add_node(name, weight(block, mass))?;
            debug_assert_eq!(id, layout.node(block, point));
        }
    }
    Ok(())
}

/// For each atom, the atoms allowed in the next hypercube under a compatibility rule.
fn successors(alphabet: usize, rule: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    (0..alphabet).map(|a| {
        let mut next = rule(a);
        next.sort_unstable();
        next.dedup();
        next
    })
    .collect()
}

/// Flat indices of every `y` compatible with the point `x`, in lexicographic order.
fn compatible_points(x: &[usize], allowed: &[Vec<usize>], alphabet: usize) -> Vec<usize> {
    let mut out = vec![0usize];
    for &xj in x {
        out = out
            .iter()
            .flat_map(|&prefix| allowed[xj].iter().map(move |&y| prefix * alphabet + y))
            .collect();
    }
    out
}

/// Star alphabet `(*, 0, .., r-1)` with the shift rule: `y = x + 1 mod r`, or either side is `*`.
fn shift_rule(r: usize) -> Vec<Vec<usize>> {
    successors(r + 1, |a| if a == 0 { (0..=r).collect() } else { vec![0, 1 + a % r] })
}

pub fn build_saks_gap<T: Scalar>(r: usize, k: usize, limits: &Limits) -> Result<Gadget<T>> {
    let params = GadgetParams::Saks(SaksParams { r, k });
    params.validate()?;
    let blocks = (r as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    guard("saks nodes", blocks.saturating_add(2 * k as u128), limits.max_nodes)?;
    guard("saks edges", blocks.saturating_mul(blocks), limits.max_edges)?;
    let cells = grid(r, k);
    let layout = Layout {
        terminals: 2 * k,
        blocks: cells.len(),
        alphabet: 1,
        arity: 0,
        block_labels: cells.iter().map(|a| bracket(a.iter().map(|x| x.to_string()))).collect(),
    };
    let space = FiniteProbSpace::new(vec![String::new()], vec![T::one()])?;
    let mut g = WeightedGraph::new();
    let mut pairs = Vec::new();
    for i in 1..=k {
        let s = g.add_node(format!("s{i}"), Weight::Uncuttable)?;
        let t = g.add_node(format!("t{i}"), Weight::Uncuttable)?;
        pairs.push((s, t));
    }
    add_cubes(&mut g, &layout, &space, |_, _| Weight::Finite(T::one()))?;
    add_grid_edges(&mut g, &layout, &cells, r, &pairs, |_| vec![0])?;
    let instance = CutInstance::new(g, CutMode::Vertex, Problem::Multicut { pairs })?;
    Ok(Gadget { params, instance, layout, space })
}

/// Terminal and grid edges shared by the Saks instance and the multicut test.
/// `next(x)` lists the points compatible with point `x`.
fn add_grid_edges<T: Scalar>(
    g: &mut WeightedGraph<T>,
    layout: &Layout,
    cells: &[Vec<usize>],
    r: usize,
    pairs: &[(NodeId, NodeId)],
    next: impl Fn(usize) -> Vec<usize>,
) -> Result<()> {
    let c = layout.cube_size();
    for (i, &(s, t)) in pairs.iter().enumerate() {
        for (block, alpha) in cells.iter().enumerate() {
            if alpha[i] == 1 {
                for x in 0..c {
                    g.add_edge(s, layout.node(block, x), true, 1, Weight::Uncuttable)?;
                }
            }
        }
        for (block, alpha) in cells.iter().enumerate() {
            if alpha[i] == r {
                for x in 0..c {
                    g.add_edge(layout.node(block, x), t, true, 1, Weight::Uncuttable)?;
                }
            }
        }
    }
    let nexts: Vec<Vec<usize>> = (0..c).map(&next).collect();
    for (ba, alpha) in cells.iter().enumerate() {
        for (bb, beta) in cells.iter().enumerate() {
            if !grid_adjacent(alpha, beta) {
                continue;
            }
            for (x, ys) in nexts.iter().enumerate() {
                for &y in ys {
                    g.add_edge(layout.node(ba, x), layout.node(bb, y), true, 1, Weight::Uncuttable)?;
                }
            }
        }
    }
    Ok(())
}

pub fn build_dict_multicut<T: Scalar>(p: &MulticutParams<T>, limits: &Limits) -> Result<Gadget<T>> {
    let params = GadgetParams::Multicut(p.clone());
    params.validate()?;
    let cube = ((p.r + 1) as u128).checked_pow(p.big_r as u32).unwrap_or(u128::MAX);
    let blocks = (p.r as u128).checked_pow(p.k as u32).unwrap_or(u128::MAX);
    guard("dict-m nodes", cube.saturating_mul(blocks).saturating_add(2 * p.k as u128), limits.max_nodes)?;
    let per_pair = ((3 * p.r + 1) as u128).checked_pow(p.big_r as u32).unwrap_or(u128::MAX);
    let grid_pairs = blocks.saturating_mul(3u128.saturating_pow(p.k as u32));
    guard("dict-m edges", per_pair.saturating_mul(grid_pairs), limits.max_edges)?;

    let space = FiniteProbSpace::star(p.r, 0, &p.eps)?;
    let cells = grid(p.r, p.k);
    let layout = Layout {
        terminals: 2 * p.k,
        blocks: cells.len(),
        alphabet: p.r + 1,
        arity: p.big_r,
        block_labels: cells.iter().map(|a| bracket(a.iter().map(|x| x.to_string()))).collect(),
    };
    let mut g = WeightedGraph::new();
    let mut pairs = Vec::new();
    for i in 1..=p.k {
        let s = g.add_node(format!("s{i}"), Weight::Uncuttable)?;
        let t = g.add_node(format!("t{i}"), Weight::Uncuttable)?;
        pairs.push((s, t));
    }
    add_cubes(&mut g, &layout, &space, |_, m| Weight::Finite(m.clone()))?;
    let rule = shift_rule(p.r);
    let coords: Vec<Vec<usize>> = points(layout.alphabet, layout.arity).collect();
    add_grid_edges(&mut g, &layout, &cells, p.r, &pairs, |x| {
        compatible_points(&coords[x], &rule, layout.alphabet)
    })?;
    let instance = CutInstance::new(g, CutMode::Vertex, Problem::Multicut { pairs })?;
    Ok(Gadget { params, instance, layout, space })
}

pub fn build_dict_edge<T: Scalar>(p: &EdgeParams, limits: &Limits) -> Result<Gadget<T>> {
    let params = GadgetParams::<T>::Edge(p.clone());
    params.validate()?;
    let cube = (p.r as u128).checked_pow(p.big_r as u32).unwrap_or(u128::MAX);
    let layers = p.b as u128 + 1;
    guard("dict-e nodes", cube.saturating_mul(layers).saturating_add(2), limits.max_nodes)?;
    guard("dict-e edges", cube.saturating_mul(cube).saturating_add(cube).saturating_mul(layers), limits.max_edges)?;

    let nu = shift_noise_space::<T>(p.r)?;
    let space = nu.left().clone();
    let layout = Layout {
        terminals: 2,
        blocks: p.b + 1,
        alphabet: p.r,
        arity: p.big_r,
        block_labels: (0..=p.b).map(|i| format!("[{i}]")).collect(),
    };
    let c = layout.cube_size();
    let coords: Vec<Vec<usize>> = points(p.r, p.big_r).collect();
    let mut g = WeightedGraph::new();
    let s = g.add_node("s", Weight::Uncuttable)?;
    let t = g.add_node("t", Weight::Uncuttable)?;
    add_cubes(&mut g, &layout, &space, |_, _| Weight::Uncuttable)?;
    for x in 0..c {
        g.add_edge(s, layout.node(0, x), false, 1, Weight::Uncuttable)?;
    }
    for x in 0..c {
        g.add_edge(layout.node(p.b, x), t, false, 1, Weight::Uncuttable)?;
    }
    for i in 0..p.b {
        for x in 0..c {
            g.add_edge(layout.node(i, x), layout.node(i + 1, x), false, p.a, Weight::Uncuttable)?;
        }
        for x in 0..c {
            for y in 0..c {
                let w = nu.product_joint(&coords[x], &coords[y]);
                g.add_edge(layout.node(i, x), layout.node(i + 1, y), false, 1, Weight::Finite(w))?;
            }
        }
    }
    let instance = CutInstance::new(g, CutMode::Edge, Problem::LengthBound { s, t, bound: (p.a * (p.b as u64 + 1 - p.r as u64)).max(1) })?;
    Ok(Gadget { params, instance, layout, space })
}

pub fn build_dict_vertex<T: Scalar>(p: &VertexParams<T>, limits: &Limits) -> Result<Gadget<T>> {
    let params = GadgetParams::Vertex(p.clone());
    params.validate()?;
    let cube = ((p.r + 1) as u128).checked_pow(p.big_r as u32).unwrap_or(u128::MAX);
    let layers = p.b as u128 + 1;
    guard("dict-v nodes", cube.saturating_mul(layers).saturating_add(2), limits.max_nodes)?;
    let per_pair = ((3 * p.r + 1) as u128).checked_pow(p.big_r as u32).unwrap_or(u128::MAX);
    guard("dict-v edges", per_pair.saturating_mul(layers * layers), limits.max_edges)?;

    let space = FiniteProbSpace::star(p.r, 0, &p.eps)?;
    let layout = Layout {
        terminals: 2,
        blocks: p.b + 1,
        alphabet: p.r + 1,
        arity: p.big_r,
        block_labels: (0..=p.b).map(|i| format!("[{i}]")).collect(),
    };
    let c = layout.cube_size();
    let rule = shift_rule(p.r);
    let coords: Vec<Vec<usize>> = points(layout.alphabet, layout.arity).collect();
    let nexts: Vec<Vec<usize>> = coords.iter().map(|x| compatible_points(x, &rule, layout.alphabet)).collect();
    let mut g = WeightedGraph::new();
    let s = g.add_node("s", Weight::Uncuttable)?;
    let t = g.add_node("t", Weight::Uncuttable)?;
    add_cubes(&mut g, &layout, &space, |_, m| Weight::Finite(m.clone()))?;
    let a = p.a;
    let b = p.b as u64;
    for i in 0..=p.b {
        for x in 0..c {
            g.add_edge(s, layout.node(i, x), false, a * i as u64 + 1, Weight::Uncuttable)?;
        }
    }
    for i in 0..=p.b {
        for x in 0..c {
            g.add_edge(layout.node(i, x), t, false, (b - i as u64) * a + 1, Weight::Uncuttable)?;
        }
    }
    for i in 0..p.b {
        for (x, ys) in nexts.iter().enumerate() {
            for &y in ys {
                g.add_edge(layout.node(i, x), layout.node(i + 1, y), false, 1, Weight::Uncuttable)?;
            }
        }
    }
    for i in 0..=p.b {
        for j in i + 2..=p.b {
            for (x, ys) in nexts.iter().enumerate() {
                for &y in ys {
                    g.add_edge(layout.node(i, x), layout.node(j, y), false, (j - i) as u64 * a, Weight::Uncuttable)?;
                }
            }
        }
    }
    let bound = a * (b + 2).saturating_sub(p.r as u64);
    let instance = CutInstance::new(g, CutMode::Vertex, Problem::LengthBound { s, t, bound: bound.max(1) })?;
    Ok(Gadget { params, instance, layout, space })
}

pub fn build_dict_rmfc<T: Scalar>(p: &RmfcParams<T>, limits: &Limits) -> Result<Gadget<T>> {
    let params = GadgetParams::Rmfc(p.clone());
    params.validate()?;
    if p.b > limits.max_rmfc_b {
        return Err(Error::SizeGuard { what: "dict-f b", count: p.b as u128, limit: limits.max_rmfc_b as u128 });
    }
    let big_b = rmfc_alphabet_size(p.b);
    let cube = (big_b + 1).checked_pow(p.big_r as u32).unwrap_or(u128::MAX);
    guard("dict-f nodes", cube.saturating_mul(p.b as u128).saturating_add(2), limits.max_nodes)?;
    let per_pair = (3 * big_b + 1).checked_pow(p.big_r as u32).unwrap_or(u128::MAX);
    guard("dict-f edges", per_pair.saturating_mul(p.b as u128), limits.max_edges)?;
    let big_b = big_b as usize;

    let space = FiniteProbSpace::star(big_b, 1, &p.eps)?;
    let layout = Layout {
        terminals: 2,
        blocks: p.b,
        alphabet: big_b + 1,
        arity: p.big_r,
        block_labels: (1..=p.b).map(|i| format!("[{i}]")).collect(),
    };
    let c = layout.cube_size();
    let rule = successors(layout.alphabet, |a| if a == 0 { (0..=big_b).collect() } else { vec![0, a] });
    let coords: Vec<Vec<usize>> = points(layout.alphabet, layout.arity).collect();
    let mut g = WeightedGraph::new();
    let s = g.add_node("s", Weight::Uncuttable)?;
    let t = g.add_node("t", Weight::Uncuttable)?;
    add_cubes(&mut g, &layout, &space, |block, m| Weight::Finite(T::from_count(block + 1) * m.clone()))?;
    for x in 0..c {
        g.add_edge(s, layout.node(0, x), false, 1, Weight::Uncuttable)?;
    }
    for x in 0..c {
        g.add_edge(layout.node(p.b - 1, x), t, false, 1, Weight::Uncuttable)?;
    }
    for i in 0..p.b - 1 {
        for (x, cx) in coords.iter().enumerate() {
            for y in compatible_points(cx, &rule, layout.alphabet) {
                g.add_edge(layout.node(i, x), layout.node(i + 1, y), false, 1, Weight::Uncuttable)?;
            }
        }
    }
    let targets: BTreeSet<NodeId> = [t].into_iter().collect();
    let instance = CutInstance::new(g, CutMode::Vertex, Problem::Rmfc { s, targets })?;
    Ok(Gadget { params, instance, layout, space })
}
