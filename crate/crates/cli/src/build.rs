//! Turning a family name and `key=value` parameters into an instance.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use gapkit::gadgets::{build_gadget, Gadget, GadgetParams, Limits};
use gapkit::io::Provenance;
use gapkit::random::{random_instance, suite_member, RandomKind, RandomSpec};
use gapkit::ug::{compose, Composed, SynthMode, Synthetic};
use gapkit::{CutMode, Instance, Rational};

pub type Params = BTreeMap<String, String>;

pub const FAMILIES: [&str; 6] = ["saks", "dict-m", "dict-e", "dict-v", "dict-f", "random"];
const UG_KEYS: [&str; 4] = ["ug_u", "ug_w", "ug_deg", "ug_eta"];

/// Parameter names of `family` in column order.
pub fn family_keys(family: &str) -> Result<&'static [&'static str]> {
    Ok(match family {
        "saks" => &["r", "k"],
        "dict-m" => &["r", "k", "R", "eps"],
        "dict-e" => &["a", "b", "r", "R"],
        "dict-v" => &["a", "b", "r", "R", "eps"],
        "dict-f" => &["b", "R", "eps"],
        "random" => &["i", "kind", "mode", "seed"],
        other => bail!("unknown generator {other:?} (expected one of {})", FAMILIES.join(", ")),
    })
}

/// `"r=3,k=2"` into a map; repeated keys are an error.
pub fn parse_params(text: &str) -> Result<Params> {
    let mut out = Params::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("parameter {part:?} is not key=value"))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            bail!("parameter {k} given twice");
        }
    }
    Ok(out)
}

pub fn format_params(params: &Params) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn get_parsed<T: std::str::FromStr>(params: &Params, key: &str) -> Result<Option<T>> {
    params
        .get(key)
        .map(|v| v.parse::<T>().map_err(|_| anyhow!("parameter {key}={v} is malformed")))
        .transpose()
}

/// What a family and its parameters produce.
pub enum Built {
    Gadget(Gadget<Rational>),
    Composed { composed: Composed<Rational>, synth: Synthetic },
    Random(Instance),
}

impl Built {
    pub fn instance(&self) -> &Instance {
        match self {
            Built::Gadget(g) => &g.instance,
            Built::Composed { composed, .. } => &composed.instance,
            Built::Random(inst) => inst,
        }
    }
}

pub struct Generated {
    pub built: Built,
    pub provenance: Provenance,
}

/// Build `family` from `params`. `seed` and `mode` fill in the random
/// parameters that were not given explicitly; the returned provenance
/// records everything needed to rebuild the same instance.
pub fn generate(family: &str, params: &Params, seed: u64, mode: Option<CutMode>, limits: &Limits) -> Result<Generated> {
    family_keys(family)?;
    let mut resolved = params.clone();
    if family == "random" {
        let i: usize = get_parsed(params, "i")?.unwrap_or(0);
        let seed: u64 = get_parsed(params, "seed")?.unwrap_or(seed);
        let (mut spec, mut sub) = suite_member(i, seed);
        let kind: Option<RandomKind> = get_parsed(params, "kind")?;
        let mode: Option<CutMode> = get_parsed(params, "mode")?.or(mode);
        if kind.is_some() || mode.is_some() {
            spec = RandomSpec { kind: kind.unwrap_or(spec.kind), mode: mode.unwrap_or(spec.mode), ..spec };
            sub = seed.wrapping_add(i as u64);
        }
        if let Some(extra) = params.keys().find(|k| !family_keys("random").unwrap().contains(&k.as_str())) {
            bail!("random: unknown parameter {extra}");
        }
        resolved.insert("i".into(), i.to_string());
        resolved.insert("seed".into(), seed.to_string());
        resolved.insert("kind".into(), spec.kind.to_string());
        resolved.insert("mode".into(), spec.mode.to_string());
        let inst = random_instance::<Rational>(spec, sub)?;
        return Ok(Generated { built: Built::Random(inst), provenance: Provenance { generator: family.into(), params: resolved } });
    }

    let mut gadget_params = params.clone();
    let ug: BTreeMap<&str, String> = UG_KEYS.iter().filter_map(|&k| gadget_params.remove(k).map(|v| (k, v))).collect();
    let seed = match gadget_params.remove("seed") {
        Some(v) => v.parse().with_context(|| format!("seed={v} is malformed"))?,
        None => seed,
    };
    let gp = GadgetParams::<Rational>::from_pairs(family, &gadget_params)?;
    let gadget = build_gadget(&gp, limits)?;
    if ug.is_empty() {
        return Ok(Generated { built: Built::Gadget(gadget), provenance: Provenance { generator: family.into(), params: resolved } });
    }
    let field = |k: &str| -> Result<usize> {
        ug.get(k)
            .ok_or_else(|| anyhow!("composition needs {}", UG_KEYS.join(", ")))?
            .parse()
            .map_err(|_| anyhow!("{k} must be a nonnegative integer"))
    };
    let eta: f64 = ug.get("ug_eta").map(|v| v.parse()).transpose().context("ug_eta is malformed")?.unwrap_or(0.0);
    let synth = gapkit::ug::synth_ug(
        field("ug_u")?,
        field("ug_w")?,
        field("ug_deg")?,
        gp.arity(),
        SynthMode::Planted { eta },
        seed,
    )?;
    let composed = compose(&synth.instance, &gadget, limits)?;
    resolved.insert("ug_eta".into(), eta.to_string());
    resolved.insert("seed".into(), seed.to_string());
    Ok(Generated {
        built: Built::Composed { composed, synth },
        provenance: Provenance { generator: family.into(), params: resolved },
    })
}

/// Rebuild from a provenance record.
pub fn regenerate(prov: &Provenance, limits: &Limits) -> Result<Generated> {
    generate(&prov.generator, &prov.params, 0, None, limits)
}
