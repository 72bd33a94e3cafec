//! Gap tables: one exact-versus-LP comparison per parameter point.

use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use gapkit::exact::{exact_min_length_bounded_cut, exact_min_multicut};
use gapkit::gadgets::Limits;
use gapkit::lp::{gap_report, multicut_lp, short_path_cover_lp, GapReport};
use gapkit::{CutMode, Problem, Rational, Scalar};
use rayon::prelude::*;

use crate::build::{family_keys, generate, Params};

/// `name=lo..hi` (inclusive) or `name=v1,v2,...`.
pub fn parse_sweep(text: &str) -> Result<(String, Vec<String>)> {
    let (name, spec) = text.split_once('=').ok_or_else(|| anyhow!("sweep {text:?} is not name=values"))?;
    let values = match spec.split_once("..") {
        Some((lo, hi)) => {
            let lo: i64 = lo.trim().parse().map_err(|_| anyhow!("sweep {text:?}: bad lower end"))?;
            let hi: i64 = hi.trim().parse().map_err(|_| anyhow!("sweep {text:?}: bad upper end"))?;
            (lo..=hi).map(|v| v.to_string()).collect()
        }
        None => spec.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect(),
    };
    Ok((name.trim().to_string(), values))
}

/// Cartesian product of the sweeps over `base`, first sweep outermost.
pub fn points(base: &Params, sweeps: &[(String, Vec<String>)]) -> Vec<Params> {
    let mut out = vec![base.clone()];
    for (name, values) in sweeps {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.insert(name.clone(), v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

pub struct TableSpec<'a> {
    pub family: &'a str,
    pub base: Params,
    pub sweeps: Vec<(String, Vec<String>)>,
    pub seed: u64,
    pub mode: Option<CutMode>,
    pub limits: Limits,
    pub timing: bool,
}

struct Row {
    params: Params,
    result: Result<GapReport<Rational>>,
    wall_ms: u128,
}

fn run_point(spec: &TableSpec<'_>, mut params: Params) -> Row {
    let start = Instant::now();
    let ell = params.remove("ell");
    let mut resolved = params.clone();
    let result = (|| -> Result<GapReport<Rational>> {
        let generated = generate(spec.family, &params, spec.seed, spec.mode, &spec.limits)?;
        resolved = generated.provenance.params.clone();
        let inst = generated.built.instance();
        let pairs: Vec<(String, String)> = resolved.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        match &inst.problem {
            Problem::Multicut { .. } => {
                if ell.is_some() {
                    bail!("ell only applies to length-bounded instances");
                }
                Ok(gap_report(pairs, || exact_min_multicut(inst), || multicut_lp(inst))?)
            }
            Problem::LengthBound { bound, .. } => {
                let bound = match &ell {
                    Some(v) => v.parse().map_err(|_| anyhow!("ell={v} is malformed"))?,
                    None => *bound,
                };
                resolved.insert("ell".into(), bound.to_string());
                Ok(gap_report(pairs, || exact_min_length_bounded_cut(inst, bound), || short_path_cover_lp(inst, bound))?)
            }
            Problem::Rmfc { .. } => bail!("firefighter instances have no path-covering LP"),
        }
    })();
    if let (Some(v), false) = (&ell, resolved.contains_key("ell")) {
        resolved.insert("ell".into(), v.clone());
    }
    let wall_ms = if spec.timing { start.elapsed().as_millis() } else { 0 };
    Row { params: resolved, result, wall_ms }
}

/// Columns after `family`: the family's own parameters, then anything else
/// that was set or swept, in name order.
fn columns(spec: &TableSpec<'_>) -> Result<Vec<String>> {
    let mut cols: Vec<String> = family_keys(spec.family)?.iter().map(|s| s.to_string()).collect();
    let mut extra: Vec<String> = spec
        .base
        .keys()
        .chain(spec.sweeps.iter().map(|(k, _)| k))
        .filter(|k| !cols.contains(k))
        .cloned()
        .collect();
    if matches!(spec.family, "dict-e" | "dict-v") {
        extra.push("ell".into());
    }
    extra.sort();
    extra.dedup();
    cols.extend(extra);
    Ok(cols)
}

/// The finished CSV. Rows run in parallel but come out in sweep order.
pub fn gap_table(spec: &TableSpec<'_>) -> Result<String> {
    let cols = columns(spec)?;
    let rows: Vec<Row> = points(&spec.base, &spec.sweeps).into_par_iter().map(|p| run_point(spec, p)).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["family".to_string()];
    header.extend(cols.iter().cloned());
    header.extend(["lp_value", "integral_value", "gap", "wall_ms", "status"].map(String::from));
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![spec.family.to_string()];
        rec.extend(cols.iter().map(|c| row.params.get(c).cloned().unwrap_or_default()));
        match &row.result {
            Ok(rep) => rec.extend([rep.lp_value.to_wire(), rep.integral_value.to_wire(), rep.gap.to_wire()]),
            Err(_) => rec.extend([String::new(), String::new(), String::new()]),
        }
        rec.push(row.wall_ms.to_string());
        rec.push(match &row.result {
            Ok(_) => "ok".into(),
            Err(e) => format!("error: {e:#}"),
        });
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}
