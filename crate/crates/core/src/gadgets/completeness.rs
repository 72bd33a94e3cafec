use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::rmfc_simulate;
use crate::gadgets::{dictator_cut, harmonic_number, DictatorCut, Gadget, GadgetParams};
use crate::graph::CutInstance;
use crate::scalar::{self, Scalar};
use crate::solution::{disconnects, distance_after};

/// Outcome of checking a completeness cut against its claimed bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletenessCheck<T> {
    pub conclusion: String,
    pub conclusion_holds: bool,
    /// Total cost, or the largest per-day cost.
    pub cost: T,
    pub bound: T,
    /// The cost must equal `bound` rather than stay below it.
    pub exact: bool,
}

impl<T: Scalar> CompletenessCheck<T> {
    pub fn cost_holds(&self) -> bool {
        if self.exact {
            scalar::approx_eq(&self.cost, &self.bound)
        } else {
            scalar::le(&self.cost, &self.bound)
        }
    }

    pub fn passed(&self) -> bool {
        self.conclusion_holds && self.cost_holds()
    }
}

/// Check `cut` on `inst` (normally the gadget's own instance) against the
/// conclusion and cost formula attached to the gadget's family.
pub fn check_completeness<T: Scalar>(gadget: &Gadget<T>, inst: &CutInstance<T>, cut: &DictatorCut<T>) -> Result<CompletenessCheck<T>> {
    let g = &inst.graph;
    let count = |n: usize| T::from_count(n);
    let star_mass = |r: usize, eps: &T| eps.clone() + (T::one() - eps.clone()) / count(r);
    match (&gadget.params, cut) {
        (GadgetParams::Multicut(p), DictatorCut::Cut(sol)) => {
            let ok = disconnects(g, inst.pairs()?, &sol.elements)?;
            Ok(CompletenessCheck {
                conclusion: "every s_i-t_i pair disconnected".into(),
                conclusion_holds: ok,
                cost: sol.cost.clone(),
                bound: scalar::pow(&count(p.r), p.k) * star_mass(p.r, &p.eps),
                exact: true,
            })
        }
        (GadgetParams::Edge(p), DictatorCut::Cut(sol)) => {
            let (s, t, _) = inst.length_bound()?;
            let need = p.a * (p.b as u64 + 1).saturating_sub(p.r as u64);
            let dist = distance_after(g, s, t, &sol.elements)?;
            Ok(CompletenessCheck {
                conclusion: format!("dist >= {need} (found {dist})"),
                conclusion_holds: dist.at_least(need),
                cost: sol.cost.clone(),
                bound: count(2 * p.b) / count(p.r),
                exact: false,
            })
        }
        (GadgetParams::Vertex(p), DictatorCut::Cut(sol)) => {
            let (s, t, _) = inst.length_bound()?;
            let need = p.a * (p.b as u64 + 2).saturating_sub(p.r as u64);
            let dist = distance_after(g, s, t, &sol.elements)?;
            Ok(CompletenessCheck {
                conclusion: format!("dist >= {need} (found {dist})"),
                conclusion_holds: dist.at_least(need),
                cost: sol.cost.clone(),
                bound: count(p.b + 1) * star_mass(p.r, &p.eps),
                exact: true,
            })
        }
        (GadgetParams::Rmfc(p), DictatorCut::Schedule(sched)) => {
            let trace = rmfc_simulate(inst, &sched.days, None)?;
            let inv_h = BigRational::from_integer(1.into()) / harmonic_number(p.b);
            Ok(CompletenessCheck {
                conclusion: "t never burns".into(),
                conclusion_holds: !trace.target_burnt,
                cost: sched.max_day_cost(),
                bound: count(p.b) * p.eps.clone() + T::from_rational(&inv_h),
                exact: false,
            })
        }
        (GadgetParams::Saks(_), _) => Err(Error::InvalidInstance("the Saks instance has no dictator cut".into())),
        _ => Err(Error::InvalidInstance("cut kind does not match the gadget".into())),
    }
}

/// Build the dictator cut for coordinate `q` (0-based) and check it.
pub fn verify_completeness<T: Scalar>(gadget: &Gadget<T>, q: usize) -> Result<(DictatorCut<T>, CompletenessCheck<T>)> {
    let cut = dictator_cut(gadget, q)?;
    let check = check_completeness(gadget, &gadget.instance, &cut)?;
    Ok((cut, check))
}
