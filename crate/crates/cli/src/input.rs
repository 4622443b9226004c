//! Parsing and validation of command-line values, done before any
//! computation starts.

use anyhow::{anyhow, bail, Context, Result};

use satake_core::numeric::{Tolerances, DEFAULT_SEED};
use satake_core::rational::parse_q;
use satake_core::rootsys::{presets, Multiplicity, SystemSpec, TypeLabel};
use satake_core::{RestrictedRootSystem, SimpleSubset, WeightVector};

use crate::{Common, Format};

pub fn system(c: &Common) -> Result<RestrictedRootSystem> {
    match (&c.preset, &c.system) {
        (Some(name), _) => {
            let extra = match &c.preset_dir {
                Some(dir) if dir.is_dir() => presets::load_dir(dir)?,
                Some(dir) => bail!("preset directory {} does not exist", dir.display()),
                None => Vec::new(),
            };
            Ok(presets::lookup(name, &extra)?)
        }
        (None, Some(spec)) => Ok(RestrictedRootSystem::build(&raw_system(spec)?)?),
        (None, None) => bail!("one of --preset or --system is required"),
    }
}

/// `LABEL RANK[:m1,m2,…[/d1,d2,…]]`, e.g. `A2`, `B2:1,3`, `BC1:2/1`.
fn raw_system(spec: &str) -> Result<SystemSpec> {
    let (head, mult) = match spec.split_once(':') {
        Some((h, m)) => (h.trim(), Some(m.trim())),
        None => (spec.trim(), None),
    };
    let split = head.find(|c: char| c.is_ascii_digit()).ok_or_else(|| anyhow!("system `{spec}` lacks a rank"))?;
    let label: TypeLabel = head[..split].parse()?;
    let rank: usize = head[split..].parse().with_context(|| format!("bad rank in `{spec}`"))?;
    let mut out = SystemSpec::split(label, rank);
    if let Some(m) = mult {
        let (single, double) = match m.split_once('/') {
            Some((s, d)) => (s, Some(d)),
            None => (m, None),
        };
        let single = uints(single)?;
        let double = match double {
            Some(d) => uints(d)?,
            None => out.mult.iter().map(|x| x.double).collect(),
        };
        if single.len() != rank || double.len() != rank {
            bail!("system `{spec}`: expected {rank} multiplicities per list");
        }
        out = out.with_mult(single.into_iter().zip(double).map(|(s, d)| Multiplicity::new(s, d)).collect());
    }
    Ok(out)
}

fn uints(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|p| p.trim().parse::<u32>().with_context(|| format!("`{p}` is not a multiplicity")))
        .collect()
}

pub fn weight(c: &Common, rs: &RestrictedRootSystem) -> Result<WeightVector> {
    let raw = c.weight.as_deref().ok_or_else(|| anyhow!("--weight is required"))?;
    let coords = raw
        .split(',')
        .map(|p| parse_q(p).with_context(|| "malformed weight coefficients".to_string()))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != rs.rank() {
        bail!(
            "malformed weight coefficients: {} given, {} has rank {}",
            coords.len(),
            rs.name(),
            rs.rank()
        );
    }
    Ok(WeightVector::fundamental(coords))
}

pub fn subset(c: &Common, rank: usize) -> Result<Option<SimpleSubset>> {
    c.subset
        .as_deref()
        .map(|s| {
            let e = SimpleSubset::parse_one_based(s)?;
            e.check_rank(rank)?;
            Ok(e)
        })
        .transpose()
}

pub fn direction(c: &Common) -> Result<Option<Vec<f64>>> {
    c.direction
        .as_deref()
        .map(|s| {
            s.split(',')
                .map(|p| p.trim().parse::<f64>().with_context(|| format!("`{p}` is not a number")))
                .collect::<Result<Vec<f64>>>()
        })
        .transpose()
}

pub fn seed(c: &Common) -> Result<u64> {
    let s = c.seed.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.with_context(|| format!("`{s}` is not a seed (default {DEFAULT_SEED:#x})"))
}

pub fn tolerances(c: &Common) -> Result<Tolerances> {
    let mut t = Tolerances::default();
    let Some(spec) = &c.tol else { return Ok(t) };
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("tolerance `{part}` is not key=value"))?;
        let v: f64 = v.trim().parse().with_context(|| format!("tolerance `{part}`"))?;
        if !(v > 0.0 && v < 1.0) {
            bail!("tolerance `{part}` must lie in (0, 1)");
        }
        match k.trim() {
            "algebraic" => t.algebraic = v,
            "nullspace" => t.nullspace = v,
            "limit" => t.limit = v,
            "monte_carlo" => t.monte_carlo = v,
            "det" => t.det = v,
            other => bail!("unknown tolerance `{other}` (algebraic, nullspace, limit, monte_carlo, det)"),
        }
    }
    Ok(t)
}

pub fn format(c: &Common, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = c.format.unwrap_or(default);
    if !allowed.contains(&f) {
        bail!("format {f:?} is not available here (choose from {allowed:?})");
    }
    Ok(f)
}

pub fn check_grid(c: &Common) -> Result<()> {
    if !(c.tmax.is_finite() && c.tmax > 0.0) {
        bail!("--tmax must be positive");
    }
    if c.steps < 2 {
        bail!("--steps must be at least 2");
    }
    Ok(())
}
