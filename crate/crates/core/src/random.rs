//! Seeded random instances small enough for subset enumeration.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{shortest_distances, CutInstance, CutMode, Distance, NodeId, Problem, Weight, WeightedGraph};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    Multicut,
    Bicut,
    LengthBound,
}

impl fmt::Display for RandomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomKind::Multicut => "multicut",
            RandomKind::Bicut => "bicut",
            RandomKind::LengthBound => "lbc",
        })
    }
}

impl FromStr for RandomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multicut" => Ok(RandomKind::Multicut),
            "bicut" => Ok(RandomKind::Bicut),
            "lbc" => Ok(RandomKind::LengthBound),
            other => Err(Error::Parse(format!("unknown random kind {other:?}"))),
        }
    }
}

/// Shape of the random suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub kind: RandomKind,
    pub mode: CutMode,
    /// Upper bound on the number of cuttable elements.
    pub max_cuttable: usize,
}

fn weight<T: Scalar>(rng: &mut ChaCha8Rng) -> T {
    T::from_ratio(rng.random_range(1..=6), rng.random_range(1..=3))
}

/// A random instance drawn from `seed`. Node `0` is `s`, node `1` is `t`.
pub fn random_instance<T: Scalar>(spec: RandomSpec, seed: u64) -> Result<CutInstance<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let directed = match spec.kind {
        RandomKind::Bicut => true,
        RandomKind::Multicut => rng.random_bool(0.5),
        RandomKind::LengthBound => rng.random_bool(0.3),
    };
    let terminals = match spec.kind {
        RandomKind::Multicut => 2 + 2 * rng.random_range(0..2),
        _ => 2,
    };
    let mut g = WeightedGraph::new();
    let (inner, edges) = match spec.mode {
        CutMode::Vertex => {
            let inner = rng.random_range(2..=spec.max_cuttable.max(2));
            (inner, rng.random_range(inner + 1..=2 * inner + 4))
        }
        CutMode::Edge => {
            let inner = rng.random_range(1..=4);
            (inner, rng.random_range(3..=spec.max_cuttable.max(3)))
        }
    };
    for i in 0..terminals {
        g.add_node(format!("x{i}"), Weight::Uncuttable)?;
    }
    let n = terminals + inner;
    for i in 0..inner {
        // vertex mode: `inner <= max_cuttable`, and a few nodes stay uncuttable
        let w = if spec.mode == CutMode::Edge || rng.random_bool(0.9) {
            Weight::Finite(weight(&mut rng))
        } else {
            Weight::Uncuttable
        };
        g.add_node(format!("v{i}"), w)?;
    }
    let mut edge_cuttable = 0;
    for _ in 0..edges {
        let tail: NodeId = rng.random_range(0..n);
        let mut head: NodeId = rng.random_range(0..n);
        if head == tail {
            head = (head + 1) % n;
        }
        let length = rng.random_range(1..=3);
        let w = if spec.mode == CutMode::Edge && edge_cuttable < spec.max_cuttable && rng.random_bool(0.9) {
            edge_cuttable += 1;
            Weight::Finite(weight(&mut rng))
        } else if spec.mode == CutMode::Edge {
            Weight::Uncuttable
        } else {
            Weight::Finite(weight(&mut rng))
        };
        g.add_edge(tail, head, directed, length, w)?;
    }
    let problem = match spec.kind {
        RandomKind::Multicut => Problem::Multicut { pairs: (0..terminals / 2).map(|i| (2 * i, 2 * i + 1)).collect() },
        RandomKind::Bicut => Problem::Multicut { pairs: vec![(0, 1), (1, 0)] },
        RandomKind::LengthBound => {
            let bound = match shortest_distances(&g, 0, None)[1] {
                Distance::Finite(d) => d + rng.random_range(1..=3),
                Distance::Unreachable => rng.random_range(1..=4),
            };
            Problem::LengthBound { s: 0, t: 1, bound }
        }
    };
    CutInstance::new(g, spec.mode, problem)
}

const SUITE: [(RandomKind, CutMode); 6] = [
    (RandomKind::Multicut, CutMode::Vertex),
    (RandomKind::Multicut, CutMode::Edge),
    (RandomKind::Bicut, CutMode::Vertex),
    (RandomKind::Bicut, CutMode::Edge),
    (RandomKind::LengthBound, CutMode::Vertex),
    (RandomKind::LengthBound, CutMode::Edge),
];

/// Spec and seed of member `i` of the suite drawn from `seed`.
pub fn suite_member(i: usize, seed: u64) -> (RandomSpec, u64) {
    let (kind, mode) = SUITE[i % SUITE.len()];
    let sub = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64);
    (RandomSpec { kind, mode, max_cuttable: 10 }, sub)
}

/// The standard cross-check suite: `count` instances cycling through every kind and mode.
pub fn random_suite<T: Scalar>(count: usize, seed: u64) -> Result<Vec<(RandomSpec, CutInstance<T>)>> {
    (0..count)
        .map(|i| {
            let (spec, sub) = suite_member(i, seed);
            random_instance(spec, sub).map(|inst| (spec, inst))
        })
        .collect()
}
