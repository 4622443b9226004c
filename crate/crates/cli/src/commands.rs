use std::fmt::Write;

use anyhow::{bail, Result};
use serde::Serialize;

use satake_core::boundary::{boundary_poset, to_dot};
use satake_core::numeric::{
    blocks, boundary_limit, build_irrep_with, ch_report, derive_seed, fatou_limit, haar_average, k_fixed_vector,
    linspace, random_sl, NumericIrrep,
};
use satake_core::rational::fmt_q;
use satake_core::rootsys::TypeLabel;
use satake_core::spherical::{self, root_name};
use satake_core::{Basis, RestrictedRootSystem, SimpleSubset, WeightVector};

use crate::input;
use crate::{Common, Format, Report};

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn roots(c: &Common) -> Result<Report> {
    let rs = input::system(c)?;
    let text = match input::format(c, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json(&rs.root_listing())?,
        _ => {
            let mut s = format!("{}: type {:?}{}, {} positive roots\n", rs.name(), rs.label(), rs.rank(), rs.roots().len());
            for r in rs.roots() {
                writeln!(s, "{}  m={}", root_name(&r.coords), r.multiplicity)?;
            }
            s
        }
    };
    Ok(Report::ok(text))
}

pub fn spherical(c: &Common) -> Result<Report> {
    let rs = input::system(c)?;
    let lambda = input::weight(c, &rs)?;
    let report = spherical::is_spherical(&rs, &lambda)?;
    let text = match input::format(c, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json(&report)?,
        _ => {
            let mut s = format!("spherical: {}\n", report.spherical);
            for line in report.explain() {
                writeln!(s, "  {line}")?;
            }
            s
        }
    };
    Ok(Report::ok(text))
}

#[derive(Serialize)]
struct LatticeOut {
    system: String,
    fundamental: Vec<WeightVector>,
    simple: Vec<WeightVector>,
}

pub fn lattice(c: &Common) -> Result<Report> {
    let rs = input::system(c)?;
    let fundamental = spherical::spherical_lattice_basis(&rs)?;
    let simple = fundamental
        .iter()
        .map(|b| rs.to_basis(b, Basis::SimpleRoot))
        .collect::<satake_core::Result<Vec<_>>>()?;
    let text = match input::format(c, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json(&LatticeOut {
            system: rs.name(),
            fundamental,
            simple,
        })?,
        _ => {
            let mut s = format!("spherical lattice of {}:\n", rs.name());
            for (f, g) in fundamental.iter().zip(&simple) {
                writeln!(s, "  {f} = {g}")?;
            }
            s
        }
    };
    Ok(Report::ok(text))
}

pub fn boundary(c: &Common) -> Result<Report> {
    let rs = input::system(c)?;
    let lambda = input::weight(c, &rs)?;
    let poset = boundary_poset(&rs, &lambda)?;
    let text = match input::format(c, Format::Text, &[Format::Text, Format::Json, Format::Dot])? {
        Format::Json => json(&poset)?,
        Format::Dot => to_dot(&poset),
        _ => {
            let mut s = format!("{} with highest weight {}, E0 = {}\n", poset.system, poset.highest, poset.e0);
            for w in &poset.warnings {
                writeln!(s, "warning: {w}")?;
            }
            writeln!(s, "interior: dim {}", poset.interior.dim)?;
            for n in &poset.nodes {
                let dim = n.orbit_dim.map_or_else(|| "?".into(), |d| d.to_string());
                writeln!(s, "E = {}  E' = {}  dim X^E = {}  orbit dim = {dim}", n.e, n.e_prime, n.dim_xe)?;
            }
            for e in &poset.order {
                writeln!(s, "{} < {}", e.lower, e.upper)?;
            }
            s
        }
    };
    Ok(Report::ok(text))
}

/// `n` for a split system of type `A_{n−1}`; the numeric commands need it.
fn split_sl(rs: &RestrictedRootSystem) -> Result<usize> {
    if rs.label() != TypeLabel::A || !rs.is_split() {
        bail!("{} is not split of type A; explicit representations exist for sl(n, R) only", rs.name());
    }
    Ok(rs.rank() + 1)
}

fn numeric_setup(c: &Common) -> Result<(RestrictedRootSystem, WeightVector, NumericIrrep)> {
    let rs = input::system(c)?;
    let lambda = input::weight(c, &rs)?;
    let tol = input::tolerances(c)?;
    let n = split_sl(&rs)?;
    let rep = build_irrep_with(n, &lambda, tol)?;
    Ok((rs, lambda, rep))
}

#[derive(Serialize)]
struct EmbedOut {
    n: usize,
    highest: WeightVector,
    dim: usize,
    ambient_dim: usize,
    /// Exterior powers making up the ambient tensor product.
    factors: Vec<usize>,
    /// Fundamental-weight coordinates of each basis vector.
    weights: Vec<Vec<i64>>,
    k_fixed: Vec<f64>,
}

pub fn embed(c: &Common) -> Result<Report> {
    let rs = input::system(c)?;
    let lambda = input::weight(c, &rs)?;
    spherical::is_spherical(&rs, &lambda)?.require()?;
    let (_, _, rep) = numeric_setup(c)?;
    let e = k_fixed_vector(&rep)?.ok_or_else(|| anyhow::anyhow!("no K-fixed vector found for a spherical weight"))?;
    let out = EmbedOut {
        n: rep.n(),
        highest: rep.highest().clone(),
        dim: rep.dim(),
        ambient_dim: rep.ambient_dim(),
        factors: rep.factors().to_vec(),
        weights: (0..rep.dim()).map(|i| rep.weight_fundamental(i)).collect(),
        k_fixed: e.iter().copied().collect(),
    };
    let text = match input::format(c, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json(&out)?,
        _ => {
            let mut s = format!(
                "irrep of sl({}) with highest weight {}: dim {} inside ambient dim {}\nK-fixed vector:\n",
                out.n, out.highest, out.dim, out.ambient_dim
            );
            for (w, x) in out.weights.iter().zip(&out.k_fixed) {
                if x.abs() > 0.0 {
                    writeln!(s, "  {w:?}  {x:.12}")?;
                }
            }
            s
        }
    };
    Ok(Report::ok(text))
}

/// `H` constant on the blocks of `E`, decreasing from block to block,
/// traceless.
fn default_direction(n: usize, e: SimpleSubset) -> Vec<f64> {
    let mut h = vec![0.0; n];
    for (b, block) in blocks(n, e).iter().enumerate() {
        for &i in block {
            h[i] = -(b as f64);
        }
    }
    let mean = h.iter().sum::<f64>() / n as f64;
    h.iter().map(|x| x - mean).collect()
}

pub fn limits(c: &Common) -> Result<Report> {
    input::check_grid(c)?;
    let (rs, _, rep) = numeric_setup(c)?;
    let subset = input::subset(c, rs.rank())?;
    let format = input::format(c, Format::Csv, &[Format::Csv, Format::Json, Format::Text])?;
    let h = input::direction(c)?.unwrap_or_else(|| default_direction(rep.n(), subset.unwrap_or(SimpleSubset::EMPTY)));
    let grid = linspace(c.tmax, c.steps);
    let (trace, extra) = match subset {
        None => (fatou_limit(&rep, &h, &grid)?, None),
        Some(e) => {
            let g = random_sl(rep.n(), input::seed(c)?);
            let bl = boundary_limit(&rep, e, &h, &g, &grid)?;
            (bl.trace.clone(), Some(bl))
        }
    };
    let text = match format {
        Format::Csv => trace.to_csv(),
        Format::Json => match &extra {
            Some(bl) => json(bl)?,
            None => json(&trace)?,
        },
        _ => {
            let mut s = String::new();
            let last = trace.samples.last().map_or(f64::NAN, |p| p.error);
            writeln!(s, "H = {h:?}")?;
            writeln!(s, "final error {last:.3e} at t = {}", trace.samples.last().map_or(0.0, |p| p.t))?;
            writeln!(s, "fitted rate {:?}, predicted rate {:?}", trace.fitted_rate, trace.predicted_rate)?;
            if trace.dropped > 0 {
                writeln!(s, "{} grid points dropped by the overflow guard", trace.dropped)?;
            }
            if let Some(bl) = &extra {
                writeln!(s, "distance of the limit to the Levi orbit point: {:.3e}", bl.levi_distance)?;
            }
            s
        }
    };
    Ok(Report::ok(text))
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        pass,
        detail,
    }
}

pub fn verify(c: &Common) -> Result<Report> {
    let rs = input::system(c)?;
    let lambda = input::weight(c, &rs)?;
    let tol = input::tolerances(c)?;
    let seed = input::seed(c)?;
    let mut checks = Vec::new();

    let report = spherical::is_spherical(&rs, &lambda)?;
    let member = spherical::in_spherical_lattice(&rs, &lambda)?;
    checks.push(check(
        "lattice membership",
        member == report.violations.is_empty(),
        format!("spherical {}, in lattice {member}", report.spherical),
    ));

    if report.spherical && !lambda.is_zero() {
        let poset = boundary_poset(&rs, &lambda)?;
        let dim_x = poset.interior.dim;
        let below = poset.nodes.iter().all(|n| n.orbit_dim.is_none_or(|d| d < dim_x));
        let decreasing = poset
            .order
            .iter()
            .all(|e| match (poset.dim_of(e.lower), poset.dim_of(e.upper)) {
                (Some(a), Some(b)) => a < b,
                _ => true,
            });
        checks.push(check(
            "boundary dimensions",
            below && decreasing,
            format!("{} boundary nodes, dim X = {dim_x}", poset.nodes.len()),
        ));
    }

    if let Ok(n) = split_sl(&rs) {
        let ws = spherical::weight_system(&rs, &lambda);
        let weyl = spherical::weyl_dimension(&rs, &lambda)?;
        let built = build_irrep_with(n, &lambda, tol)?;
        let total = ws.as_ref().map(|w| w.total()).unwrap_or(0);
        checks.push(check(
            "dimension",
            total == weyl && built.dim() as u64 == weyl,
            format!("multiplicities {total}, Weyl {weyl}, numeric {}", built.dim()),
        ));
        let ch = ch_report(n, &lambda)?;
        checks.push(check(
            "K-fixed vector",
            ch.holds,
            format!("spherical {}, K-fixed {}, M-fixed limit {:?}", ch.spherical, ch.k_fixed, ch.m_fixed_limit),
        ));
        if report.spherical {
            let h = default_direction(n, SimpleSubset::EMPTY);
            let span = (0..built.dim()).map(|i| built.weight_value(0, &h) - built.weight_value(i, &h)).fold(0.0, f64::max);
            // stop before the error reaches round-off
            let tmax = if span > 0.0 { 25.0 / span.max(1.0) } else { 1.0 };
            let trace = fatou_limit(&built, &h, &linspace(tmax, 40))?;
            checks.push(check(
                "Fatou rate",
                trace.predicted_rate.is_none() || trace.rate_matches(0.05),
                format!("fitted {:?}, predicted {:?}", trace.fitted_rate, trace.predicted_rate),
            ));
        }
        match haar_average(&built, c.samples, derive_seed(seed, 0)) {
            Ok(a) => {
                let pass = if a.spherical { a.cosine.unwrap_or(0.0) >= 0.999 && a.c.unwrap_or(0.0) > 0.0 } else { true };
                checks.push(check(
                    "Haar average",
                    pass,
                    format!(
                        "norm {:.3e}, 3 SE {:.3e}, cosine {:?}, c {:?}",
                        a.norm,
                        3.0 * a.standard_error,
                        a.cosine,
                        a.c
                    ),
                ));
            }
            Err(e) => checks.push(check("Haar average", false, e.to_string())),
        }
    }

    let verified = checks.iter().all(|c| c.pass);
    let text = match input::format(c, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json(&checks)?,
        _ => {
            let mut s = format!("{} with highest weight {}\n", rs.name(), weight_text(&lambda));
            for ch in &checks {
                writeln!(s, "{} {}: {}", if ch.pass { "PASS" } else { "FAIL" }, ch.name, ch.detail)?;
            }
            s
        }
    };
    Ok(Report { text, verified })
}

fn weight_text(w: &WeightVector) -> String {
    w.coords.iter().map(fmt_q).collect::<Vec<_>>().join(",")
}
