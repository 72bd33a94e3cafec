//! Completeness checks for generated instances.

use std::path::Path;

use anyhow::{bail, Result};
use gapkit::exact::exact_min_multicut;
use gapkit::gadgets::{check_completeness, dictator_cut, DictatorCut, Gadget, GadgetParams};
use gapkit::io::{schedule_from_json, schedule_to_json, solution_from_json, solution_to_json, ScheduleJson, SolutionJson};
use gapkit::lp::multicut_lp;
use gapkit::scalar::pow;
use gapkit::ug::completeness_cut;
use gapkit::{Instance, Rational, Scalar};

use crate::build::Built;
use crate::{read_json, write_text};

pub struct Report {
    pub lines: Vec<String>,
    pub passed: bool,
}

impl Report {
    fn check(&mut self, ok: bool, what: String) {
        self.lines.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
        self.passed &= ok;
    }
}

/// Check `inst` (as read, possibly tampered with) against the completeness claim of the
/// generator that `built` was regenerated from.
pub fn verify(built: &Built, inst: &Instance, q: usize, cut_file: Option<&Path>, emit: Option<&Path>) -> Result<Report> {
    let mut rep = Report { lines: Vec::new(), passed: true };
    rep.check(built.instance() == inst, "instance matches its regenerated generator output".into());
    match built {
        Built::Random(_) => bail!("random instances carry no completeness claim"),
        Built::Gadget(gadget) if matches!(gadget.params, GadgetParams::Saks(_)) => saks(gadget, inst, &mut rep)?,
        Built::Gadget(gadget) => {
            let cut = match cut_file {
                Some(path) => read_cut(gadget, inst, path)?,
                None => {
                    if q == 0 {
                        bail!("--q is 1-based");
                    }
                    dictator_cut(gadget, q - 1)?
                }
            };
            if let Some(path) = emit {
                write_cut(inst, &cut, path)?;
            }
            let check = check_completeness(gadget, inst, &cut)?;
            rep.check(check.conclusion_holds, check.conclusion.clone());
            let rel = if check.exact { "=" } else { "<=" };
            rep.check(check.cost_holds(), format!("cost {} {rel} {}", check.cost, check.bound));
        }
        Built::Composed { composed, synth, .. } => {
            if cut_file.is_some() {
                bail!("--cut is only supported for plain gadgets");
            }
            let labeling = synth.labeling.as_ref().expect("compositions use planted labelings");
            let mut checked = composed.clone();
            checked.instance = inst.clone();
            let c = completeness_cut(&checked, &synth.instance, labeling, &synth.w_prime)?;
            if let Some(path) = emit {
                write_cut(inst, &c.cut, path)?;
            }
            rep.lines.push(format!("     eta = {}", c.eta));
            rep.check(c.property_holds, c.property.clone());
            rep.check(c.cost <= c.bound, format!("cost {} <= {}", c.cost, c.bound));
        }
    }
    Ok(rep)
}

fn saks(gadget: &Gadget<Rational>, inst: &Instance, rep: &mut Report) -> Result<()> {
    let GadgetParams::Saks(p) = &gadget.params else { unreachable!() };
    let r = Rational::from_count(p.r);
    let lower = Rational::from_count(p.k) * pow(&Rational::from_count(p.r - 1), p.k - 1);
    let exact = exact_min_multicut(inst)?;
    rep.check(exact.verified && exact.cost >= lower, format!("integral optimum {} >= {lower}", exact.cost));
    let lp = multicut_lp(inst)?;
    let upper = pow(&r, p.k - 1);
    rep.check(lp.value <= upper, format!("LP optimum {} <= {upper}", lp.value));
    Ok(())
}

fn read_cut(gadget: &Gadget<Rational>, inst: &Instance, path: &Path) -> Result<DictatorCut<Rational>> {
    let g = &inst.graph;
    Ok(match gadget.params {
        GadgetParams::Rmfc(_) => DictatorCut::Schedule(schedule_from_json(g, &read_json::<ScheduleJson>(path)?)?),
        _ => DictatorCut::Cut(solution_from_json(g, &read_json::<SolutionJson>(path)?)?),
    })
}

fn write_cut(inst: &Instance, cut: &DictatorCut<Rational>, path: &Path) -> Result<()> {
    let text = match cut {
        DictatorCut::Cut(sol) => serde_json::to_string_pretty(&solution_to_json(&inst.graph, sol))?,
        DictatorCut::Schedule(s) => serde_json::to_string_pretty(&schedule_to_json(&inst.graph, s))?,
    };
    write_text(Some(path), &text)
}
