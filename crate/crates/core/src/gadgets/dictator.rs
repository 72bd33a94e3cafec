use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gadgets::{Gadget, GadgetParams};
use crate::graph::{Element, Weight};
use crate::solution::{CutSolution, Schedule};
use crate::scalar::Scalar;

/// The completeness solution attached to a coordinate.
#[derive(Clone, Debug, PartialEq)]
pub enum DictatorCut<T> {
    Cut(CutSolution<T>),
    Schedule(Schedule<T>),
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `B = b! * sum_{i=1}^b b!/i`, the alphabet size of the firefighter test.
pub fn rmfc_alphabet_size(b: usize) -> u128 {
    let f = factorial(b);
    f * (1..=b as u128).map(|i| f / i).sum::<u128>()
}

/// `H_i = 1 + 1/2 + .. + 1/i`.
pub fn harmonic_number(i: usize) -> BigRational {
    (1..=i).fold(BigRational::zero(), |acc, j| acc + BigRational::new(BigInt::one(), BigInt::from(j)))
}

/// `[B_0, B_1, .., B_b]` with `B_i = (H_i / H_b) B`; every entry is an integer.
pub fn harmonic_thresholds(b: usize) -> Vec<u128> {
    let big_b = BigRational::from_integer(BigInt::from(rmfc_alphabet_size(b)));
    let hb = harmonic_number(b);
    (0..=b)
        .map(|i| {
            let v = harmonic_number(i) / hb.clone() * big_b.clone();
            debug_assert!(v.is_integer());
            v.to_integer().to_u128().expect("threshold fits in u128")
        })
        .collect()
}

/// Whether a cube node with atom `atom` at the dictator coordinate is cut
/// (saved on day `block + 1` for the firefighter test).
pub(crate) fn dictator_vertex<T: Scalar>(params: &GadgetParams<T>, block: usize, atom: usize) -> bool {
    match params {
        // atom 0 is `*`, atom 1 is the symbol 0
        GadgetParams::Multicut(_) | GadgetParams::Vertex(_) => atom <= 1,
        GadgetParams::Rmfc(p) => {
            let th = harmonic_thresholds(p.b);
            let sym = atom as u128;
            atom == 0 || (th[block] < sym && sym <= th[block + 1])
        }
        GadgetParams::Saks(_) | GadgetParams::Edge(_) => false,
    }
}

/// Whether a short edge with dictator symbols `x_q -> y_q` is cut.
pub(crate) fn dictator_edge(r: usize, xq: usize, yq: usize) -> bool {
    yq != (xq + 1) % r || (xq, yq) == (0, 1)
}

/// The dictator cut (or firefighter schedule) for coordinate `q` (0-based).
pub fn dictator_cut<T: Scalar>(gadget: &Gadget<T>, q: usize) -> Result<DictatorCut<T>> {
    let arity = gadget.params.arity();
    if q >= arity {
        return Err(Error::CoordinateOutOfRange(q));
    }
    let g = &gadget.instance.graph;
    let layout = &gadget.layout;
    match &gadget.params {
        GadgetParams::Saks(_) => Err(Error::CoordinateOutOfRange(q)),
        GadgetParams::Multicut(_) | GadgetParams::Vertex(_) => {
            let mut set = BTreeSet::new();
            for block in 0..layout.blocks {
                for point in 0..layout.cube_size() {
                    if dictator_vertex(&gadget.params, block, gadget.point_coords(point)[q]) {
                        set.insert(Element::Node(layout.node(block, point)));
                    }
                }
            }
            Ok(DictatorCut::Cut(CutSolution::priced(g, set)?))
        }
        GadgetParams::Edge(p) => {
            let mut set = BTreeSet::new();
            for (e, edge) in g.edges().iter().enumerate() {
                if !matches!(edge.weight, Weight::Finite(_)) {
                    continue;
                }
                let (Some((_, x)), Some((_, y))) = (layout.locate(edge.tail), layout.locate(edge.head)) else {
                    continue;
                };
                if dictator_edge(p.r, gadget.point_coords(x)[q], gadget.point_coords(y)[q]) {
                    set.insert(Element::Edge(e));
                }
            }
            Ok(DictatorCut::Cut(CutSolution::priced(g, set)?))
        }
        GadgetParams::Rmfc(_) => {
            let days = (0..layout.blocks)
                .map(|block| {
                    layout
                        .block_nodes(block)
                        .filter(|&v| dictator_vertex(&gadget.params, block, gadget.point_coords(v - layout.node(block, 0))[q]))
                        .collect()
                })
                .collect();
            Ok(DictatorCut::Schedule(Schedule::priced(g, days)?))
        }
    }
}
