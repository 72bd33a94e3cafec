//! Unique Games instances, their composition with a dictatorship test, and
//! the completeness and decoding routines built on top.

mod compose;
mod decode;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::{IteratorRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use compose::{completeness_cut, compose, Completeness, Composed};
pub use decode::{decode_labeling, reachable_set_influences, InfluenceReport, LayerInfluence};

/// One constraint `l(u) = perm[l(w)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UgEdge {
    pub u: usize,
    pub w: usize,
    /// Forward array over the labels `0..R`.
    pub perm: Vec<usize>,
}

/// A bipartite Unique Games instance on `U x W` with labels `0..labels`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniqueGamesInstance {
    pub u: Vec<String>,
    pub w: Vec<String>,
    pub labels: usize,
    pub edges: Vec<UgEdge>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidUniqueGames(msg.into())
}

pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

impl UniqueGamesInstance {
    /// Checks biregularity, simple edges and that every constraint is a bijection.
    pub fn new(u: Vec<String>, w: Vec<String>, labels: usize, edges: Vec<UgEdge>) -> Result<Self> {
        if u.is_empty() || w.is_empty() || labels == 0 {
            return Err(invalid("U, W and the label set must be non-empty"));
        }
        let mut seen = BTreeSet::new();
        let mut deg_u = vec![0usize; u.len()];
        let mut deg_w = vec![0usize; w.len()];
        for e in &edges {
            if e.u >= u.len() || e.w >= w.len() {
                return Err(invalid(format!("edge ({}, {}) leaves the vertex lists", e.u, e.w)));
            }
            if !seen.insert((e.u, e.w)) {
                return Err(invalid(format!("duplicate edge ({}, {})", u[e.u], w[e.w])));
            }
            let mut hit = vec![false; labels];
            if e.perm.len() != labels || e.perm.iter().any(|&p| p >= labels || std::mem::replace(&mut hit[p], true)) {
                return Err(invalid(format!("permutation on ({}, {}) is not a bijection of 0..{labels}", u[e.u], w[e.w])));
            }
            deg_u[e.u] += 1;
            deg_w[e.w] += 1;
        }
        for (name, degs) in [("U", &deg_u), ("W", &deg_w)] {
            if degs[0] == 0 || degs.iter().any(|&d| d != degs[0]) {
                return Err(invalid(format!("{name} side is not regular with positive degree")));
            }
        }
        Ok(UniqueGamesInstance { u, w, labels, edges })
    }

    pub fn degree_u(&self) -> usize {
        self.edges.len() / self.u.len()
    }

    pub fn degree_w(&self) -> usize {
        self.edges.len() / self.w.len()
    }

    /// Edge indices incident on each `u`, in edge order.
    pub fn neighbourhoods(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.u.len()];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.u].push(i);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub u: Vec<usize>,
    pub w: Vec<usize>,
}

impl Labeling {
    pub fn satisfies(&self, e: &UgEdge) -> bool {
        self.u[e.u] == e.perm[self.w[e.w]]
    }

    pub fn satisfied_fraction(&self, ug: &UniqueGamesInstance) -> BigRational {
        let good = ug.edges.iter().filter(|e| self.satisfies(e)).count();
        BigRational::new(BigInt::from(good), BigInt::from(ug.edges.len()))
    }

    pub fn check(&self, ug: &UniqueGamesInstance) -> Result<()> {
        if self.u.len() != ug.u.len() || self.w.len() != ug.w.len() {
            return Err(invalid("labeling does not cover every vertex"));
        }
        if self.u.iter().chain(&self.w).any(|&l| l >= ug.labels) {
            return Err(invalid("label out of range"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SynthMode {
    /// Plant a labeling that satisfies every edge on a `(1 - eta)` share of `W`.
    Planted { eta: f64 },
    Random,
}

/// A generated instance with its planted labeling and `W'`, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct Synthetic {
    pub instance: UniqueGamesInstance,
    pub labeling: Option<Labeling>,
    pub w_prime: BTreeSet<usize>,
}

/// Seeded biregular instance: every `u` has `degree` neighbours.
pub fn synth_ug(n_u: usize, n_w: usize, degree: usize, labels: usize, mode: SynthMode, seed: u64) -> Result<Synthetic> {
    if n_u == 0 || n_w == 0 || degree == 0 || labels == 0 {
        return Err(Error::InfeasibleDegrees("sizes, degree and label count must be positive".into()));
    }
    if degree > n_w || !(n_u * degree).is_multiple_of(n_w) {
        return Err(Error::InfeasibleDegrees(format!(
            "no simple biregular graph with |U| = {n_u}, |W| = {n_w} and U-degree {degree}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relabel: Vec<usize> = (0..n_w).collect();
    relabel.shuffle(&mut rng);

    let (labeling, w_prime) = match mode {
        SynthMode::Planted { eta } => {
            if !(0.0..1.0).contains(&eta) {
                return Err(Error::ParamOutOfRange(format!("eta = {eta} must lie in [0, 1)")));
            }
            let bad = (eta * n_w as f64 + 1e-9).floor() as usize;
            let lu = (0..n_u).map(|_| (0..labels).choose(&mut rng).expect("labels > 0")).collect();
            let lw = (0..n_w).map(|_| (0..labels).choose(&mut rng).expect("labels > 0")).collect();
            let outside: BTreeSet<usize> = (0..n_w).choose_multiple(&mut rng, bad).into_iter().collect();
            (Some(Labeling { u: lu, w: lw }), (0..n_w).filter(|w| !outside.contains(w)).collect())
        }
        SynthMode::Random => (None, BTreeSet::new()),
    };

    let mut edges = Vec::with_capacity(n_u * degree);
    for u in 0..n_u {
        for j in 0..degree {
            let w = relabel[(u * degree + j) % n_w];
            let mut perm: Vec<usize> = (0..labels).collect();
            perm.shuffle(&mut rng);
            if let Some(l) = &labeling {
                if w_prime.contains(&w) {
                    // move l(u) to position l(w)
                    let at = perm.iter().position(|&p| p == l.u[u]).expect("perm is a bijection");
                    perm.swap(at, l.w[w]);
                }
            }
            edges.push(UgEdge { u, w, perm });
        }
    }
    let instance = UniqueGamesInstance::new(
        (0..n_u).map(|i| format!("u{i}")).collect(),
        (0..n_w).map(|i| format!("w{i}")).collect(),
        labels,
        edges,
    )?;
    Ok(Synthetic { instance, labeling, w_prime })
}

/// `|U| = |W| = 1`, one identity constraint.
pub fn identity_ug(labels: usize) -> UniqueGamesInstance {
    UniqueGamesInstance::new(
        vec!["u0".into()],
        vec!["w0".into()],
        labels,
        vec![UgEdge { u: 0, w: 0, perm: (0..labels).collect() }],
    )
    .expect("identity instance is valid")
}
