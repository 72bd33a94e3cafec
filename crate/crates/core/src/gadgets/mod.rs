//! The Saks et al. gap instance and the four dictatorship tests.
//!
//! Every non-terminal node lives in a *block* (a grid point `alpha` or a layer
//! `i`) and carries a point `x` of the hypercube `Omega^R`. Node ids are laid
//! out as terminals first, then `block * |Omega|^R + index(x)`, so the block
//! and point of a node are recovered arithmetically.

mod build;
pub(crate) mod dictator;
mod completeness;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{CutInstance, NodeId};
use crate::prob::FiniteProbSpace;
use crate::scalar::Scalar;

pub use build::{build_dict_edge, build_dict_multicut, build_dict_rmfc, build_dict_vertex, build_saks_gap, build_gadget};
pub use dictator::{dictator_cut, harmonic_number, harmonic_thresholds, rmfc_alphabet_size, DictatorCut};
pub use completeness::{check_completeness, verify_completeness, CompletenessCheck};

/// Safety rails for generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: u128,
    pub max_edges: u128,
    /// Largest `b` accepted by the firefighter test (`B` grows like `(b!)^2`).
    pub max_rmfc_b: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_nodes: 200_000, max_edges: 20_000_000, max_rmfc_b: 4 }
    }
}

impl Limits {
    pub fn with_max_nodes(max_nodes: u128) -> Self {
        Limits { max_nodes, ..Limits::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaksParams {
    pub r: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MulticutParams<T> {
    pub r: usize,
    pub k: usize,
    pub big_r: usize,
    pub eps: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeParams {
    pub a: u64,
    pub b: usize,
    pub r: usize,
    pub big_r: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexParams<T> {
    pub a: u64,
    pub b: usize,
    pub r: usize,
    pub big_r: usize,
    pub eps: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RmfcParams<T> {
    pub b: usize,
    pub big_r: usize,
    pub eps: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GadgetParams<T> {
    Saks(SaksParams),
    Multicut(MulticutParams<T>),
    Edge(EdgeParams),
    Vertex(VertexParams<T>),
    Rmfc(RmfcParams<T>),
}

fn out_of_range(msg: impl Into<String>) -> Error {
    Error::ParamOutOfRange(msg.into())
}

fn check_eps<T: Scalar>(eps: &T, limit_den: u128) -> Result<()> {
    // eps in (0, 1/limit_den)
    let limit = T::one() / T::from_rational(&num_rational::BigRational::from_integer(limit_den.into()));
    if *eps <= T::zero() || *eps >= limit {
        return Err(out_of_range(format!("eps = {eps} must lie in (0, 1/{limit_den})")));
    }
    Ok(())
}

impl<T: Scalar> GadgetParams<T> {
    pub fn family(&self) -> &'static str {
        match self {
            GadgetParams::Saks(_) => "saks",
            GadgetParams::Multicut(_) => "dict-m",
            GadgetParams::Edge(_) => "dict-e",
            GadgetParams::Vertex(_) => "dict-v",
            GadgetParams::Rmfc(_) => "dict-f",
        }
    }

    /// Number of hypercube coordinates (`0` for the Saks instance).
    pub fn arity(&self) -> usize {
        match self {
            GadgetParams::Saks(_) => 0,
            GadgetParams::Multicut(p) => p.big_r,
            GadgetParams::Edge(p) => p.big_r,
            GadgetParams::Vertex(p) => p.big_r,
            GadgetParams::Rmfc(p) => p.big_r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GadgetParams::Saks(p) => {
                if p.r < 2 || p.k < 1 {
                    return Err(out_of_range(format!("saks needs r >= 2 and k >= 1, got r={} k={}", p.r, p.k)));
                }
            }
            GadgetParams::Multicut(p) => {
                if p.r < 2 || p.k < 2 || p.big_r < 1 {
                    return Err(out_of_range("dict-m needs r >= 2, k >= 2, R >= 1"));
                }
                check_eps(&p.eps, 2 * p.r as u128)?;
            }
            GadgetParams::Edge(p) => {
                if p.a < 1 || p.b < 1 || p.r < 2 || p.big_r < 1 {
                    return Err(out_of_range("dict-e needs a, b, R >= 1 and r >= 2"));
                }
                if p.b + 1 < p.r {
                    return Err(out_of_range(format!("dict-e needs b >= r - 1, got b={} r={}", p.b, p.r)));
                }
            }
            GadgetParams::Vertex(p) => {
                if p.a < 1 || p.b < 1 || p.r < 2 || p.big_r < 1 {
                    return Err(out_of_range("dict-v needs a, b, R >= 1 and r >= 2"));
                }
                if p.b + 2 < p.r {
                    return Err(out_of_range(format!("dict-v needs b >= r - 2, got b={} r={}", p.b, p.r)));
                }
                check_eps(&p.eps, 2 * p.r as u128)?;
            }
            GadgetParams::Rmfc(p) => {
                if p.b < 1 || p.big_r < 1 {
                    return Err(out_of_range("dict-f needs b >= 1 and R >= 1"));
                }
                if p.b > 20 {
                    return Err(out_of_range(format!("dict-f b = {} is far beyond reach", p.b)));
                }
                check_eps(&p.eps, 2 * rmfc_alphabet_size(p.b))?;
            }
        }
        Ok(())
    }

    /// Parameters as ordered `(name, value)` pairs; rationals in wire form.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        match self {
            GadgetParams::Saks(p) => vec![("r", p.r.to_string()), ("k", p.k.to_string())],
            GadgetParams::Multicut(p) => vec![
                ("r", p.r.to_string()),
                ("k", p.k.to_string()),
                ("R", p.big_r.to_string()),
                ("eps", p.eps.to_wire()),
            ],
            GadgetParams::Edge(p) => vec![
                ("a", p.a.to_string()),
                ("b", p.b.to_string()),
                ("r", p.r.to_string()),
                ("R", p.big_r.to_string()),
            ],
            GadgetParams::Vertex(p) => vec![
                ("a", p.a.to_string()),
                ("b", p.b.to_string()),
                ("r", p.r.to_string()),
                ("R", p.big_r.to_string()),
                ("eps", p.eps.to_wire()),
            ],
            GadgetParams::Rmfc(p) => vec![
                ("b", p.b.to_string()),
                ("R", p.big_r.to_string()),
                ("eps", p.eps.to_wire()),
            ],
        }
    }

    /// Parse a family name and a `name -> value` map.
    pub fn from_pairs(family: &str, pairs: &BTreeMap<String, String>) -> Result<Self> {
        let get = |key: &str| {
            pairs
                .get(key)
                .ok_or_else(|| Error::Parse(format!("{family}: missing parameter {key}")))
        };
        let int = |key: &str| -> Result<usize> {
            get(key)?
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{family}: {key} is not a nonnegative integer")))
        };
        let eps = || -> Result<T> { T::from_wire(get("eps")?) };
        let allowed: &[&str] = match family {
            "saks" => &["r", "k"],
            "dict-m" => &["r", "k", "R", "eps"],
            "dict-e" => &["a", "b", "r", "R"],
            "dict-v" => &["a", "b", "r", "R", "eps"],
            "dict-f" => &["b", "R", "eps"],
            other => return Err(Error::UnknownGenerator(other.to_string())),
        };
        if let Some(extra) = pairs.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("{family}: unknown parameter {extra}")));
        }
        let params = match family {
            "saks" => GadgetParams::Saks(SaksParams { r: int("r")?, k: int("k")? }),
            "dict-m" => GadgetParams::Multicut(MulticutParams { r: int("r")?, k: int("k")?, big_r: int("R")?, eps: eps()? }),
            "dict-e" => GadgetParams::Edge(EdgeParams { a: int("a")? as u64, b: int("b")?, r: int("r")?, big_r: int("R")? }),
            "dict-v" => GadgetParams::Vertex(VertexParams {
                a: int("a")? as u64,
                b: int("b")?,
                r: int("r")?,
                big_r: int("R")?,
                eps: eps()?,
            }),
            _ => GadgetParams::Rmfc(RmfcParams { b: int("b")?, big_r: int("R")?, eps: eps()? }),
        };
        params.validate()?;
        Ok(params)
    }
}

impl<T: Scalar> fmt::Display for GadgetParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.to_pairs().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.family(), body.join(","))
    }
}

/// Where the nodes of a gadget live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub terminals: usize,
    pub blocks: usize,
    pub alphabet: usize,
    pub arity: usize,
    pub block_labels: Vec<String>,
}

impl Layout {
    pub fn cube_size(&self) -> usize {
        self.alphabet.pow(self.arity as u32)
    }

    pub fn node(&self, block: usize, point: usize) -> NodeId {
        self.terminals + block * self.cube_size() + point
    }

    /// `(block, point index)` of a cube node; `None` for terminals.
    pub fn locate(&self, v: NodeId) -> Option<(usize, usize)> {
        let c = self.cube_size();
        (v >= self.terminals && v < self.terminals + self.blocks * c)
            .then(|| ((v - self.terminals) / c, (v - self.terminals) % c))
    }

    pub fn block_nodes(&self, block: usize) -> std::ops::Range<NodeId> {
        let start = self.node(block, 0);
        start..start + self.cube_size()
    }
}

/// A generated gadget: the instance plus the structure needed by cuts and compositions.
#[derive(Clone, Debug, PartialEq)]
pub struct Gadget<T> {
    pub params: GadgetParams<T>,
    pub instance: CutInstance<T>,
    pub layout: Layout,
    /// `mu` on a single coordinate; atom 0 is `*` for the star alphabets.
    pub space: FiniteProbSpace<T>,
}

impl<T: Scalar> Gadget<T> {
    pub fn family(&self) -> &'static str {
        self.params.family()
    }

    /// Atom indices of the point at flat index `point`.
    pub fn point_coords(&self, point: usize) -> Vec<usize> {
        let n = self.layout.alphabet;
        let mut out = vec![0; self.layout.arity];
        let mut code = point;
        for slot in out.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        out
    }

    /// Sum of the finite weights the instance is cut on.
    pub fn total_weight(&self) -> T {
        self.instance.graph.total_weight(self.instance.mode)
    }
}
