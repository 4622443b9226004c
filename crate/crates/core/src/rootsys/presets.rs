//! Real-form presets.
//!
//! Classical families are generated from their parameters; exceptional forms
//! come from an embedded TOML table. Additional tables with the same schema
//! can be loaded from disk. Every preset is validated by the dimension
//! identity `dim g = dim m + rank + 2 Σ m(γ)` before it is returned.

use std::path::Path;

use serde::Deserialize;

use super::{Multiplicity, RealFormMeta, RestrictedRootSystem, SystemSpec, TypeLabel};
use crate::error::{Error, Result};

const EXCEPTIONAL: &str = include_str!("../../presets/exceptional.toml");

/// One entry of a preset table.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct PresetEntry {
    pub name: String,
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub mult: Vec<u32>,
    #[serde(default)]
    pub mult_double: Vec<u32>,
    pub dim_g: usize,
    pub dim_k: usize,
    pub dim_m: usize,
}

#[derive(Debug, Deserialize)]
struct PresetTable {
    #[serde(default)]
    preset: Vec<PresetEntry>,
}

impl PresetEntry {
    pub fn build(&self) -> Result<RestrictedRootSystem> {
        let label: TypeLabel = self.type_label.parse()?;
        if self.mult.len() != self.rank {
            return Err(Error::Parse(format!(
                "preset `{}`: mult has {} entries for rank {}",
                self.name,
                self.mult.len(),
                self.rank
            )));
        }
        let doubles = if self.mult_double.is_empty() {
            vec![0; self.rank]
        } else if self.mult_double.len() == self.rank {
            self.mult_double.clone()
        } else {
            return Err(Error::Parse(format!(
                "preset `{}`: mult_double has {} entries for rank {}",
                self.name,
                self.mult_double.len(),
                self.rank
            )));
        };
        let mult = self
            .mult
            .iter()
            .zip(&doubles)
            .map(|(&s, &d)| Multiplicity::new(s, d))
            .collect();
        let spec = SystemSpec {
            label,
            rank: self.rank,
            mult,
            meta: Some(RealFormMeta {
                name: self.name.clone(),
                dim_g: self.dim_g,
                dim_k: self.dim_k,
                dim_m: self.dim_m,
            }),
        };
        RestrictedRootSystem::build(&spec)
    }
}

/// Parses a TOML preset table (`[[preset]]` entries).
pub fn parse_table(text: &str) -> Result<Vec<PresetEntry>> {
    let table: PresetTable = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(table.preset)
}

pub fn exceptional_entries() -> Vec<PresetEntry> {
    parse_table(EXCEPTIONAL).expect("embedded preset table is valid TOML")
}

/// Loads every `*.toml` table in `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<PresetEntry>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| Error::Parse(format!("{}: {e}", f.display())))?;
        out.extend(parse_table(&text)?);
    }
    Ok(out)
}

fn meta(name: String, dim_g: usize, dim_k: usize, dim_m: usize) -> RealFormMeta {
    RealFormMeta {
        name,
        dim_g,
        dim_k,
        dim_m,
    }
}

fn build(label: TypeLabel, rank: usize, mult: Vec<Multiplicity>, m: RealFormMeta) -> Result<RestrictedRootSystem> {
    RestrictedRootSystem::build(&SystemSpec {
        label,
        rank,
        mult,
        meta: Some(m),
    })
}

/// sl(n, ℝ): A_{n−1}, split.
pub fn sl_real(n: usize) -> Result<RestrictedRootSystem> {
    if n < 2 {
        return Err(Error::Degenerate(format!("sl({n},R) needs n >= 2")));
    }
    build(
        TypeLabel::A,
        n - 1,
        vec![Multiplicity::ONE; n - 1],
        meta(format!("sl({n},R)"), n * n - 1, n * (n - 1) / 2, 0),
    )
}

/// sl(n, ℂ) as a real Lie algebra: A_{n−1}, all multiplicities 2.
pub fn sl_complex(n: usize) -> Result<RestrictedRootSystem> {
    if n < 2 {
        return Err(Error::Degenerate(format!("sl({n},C) needs n >= 2")));
    }
    build(
        TypeLabel::A,
        n - 1,
        vec![Multiplicity::new(2, 0); n - 1],
        meta(format!("sl({n},C)"), 2 * (n * n - 1), n * n - 1, n - 1),
    )
}

/// sl(n, ℍ) = su*(2n): A_{n−1}, all multiplicities 4.
pub fn sl_quaternion(n: usize) -> Result<RestrictedRootSystem> {
    if n < 2 {
        return Err(Error::Degenerate(format!("sl({n},H) needs n >= 2")));
    }
    build(
        TypeLabel::A,
        n - 1,
        vec![Multiplicity::new(4, 0); n - 1],
        meta(format!("sl({n},H)"), 4 * n * n - 1, n * (2 * n + 1), 3 * n),
    )
}

/// su(p, q), p ≤ q: BC_p (p < q) or C_p (p = q).
pub fn su(p: usize, q: usize) -> Result<RestrictedRootSystem> {
    let name = format!("su({p},{q})");
    let (p, q) = (p.min(q), p.max(q));
    if p == 0 {
        return Err(Error::Degenerate(format!("{name} is compact")));
    }
    let dim_g = (p + q) * (p + q) - 1;
    let dim_k = p * p + q * q - 1;
    let mut mult = vec![Multiplicity::new(2, 0); p];
    let (label, dim_m) = if p < q {
        mult[p - 1] = Multiplicity::new(2 * (q - p) as u32, 1);
        (TypeLabel::BC, (q - p) * (q - p) + p - 1)
    } else {
        mult[p - 1] = Multiplicity::ONE;
        (TypeLabel::C, p - 1)
    };
    build(label, p, mult, meta(name, dim_g, dim_k, dim_m))
}

/// so(p, q), p ≤ q: B_p (p < q) or D_p (p = q).
pub fn so(p: usize, q: usize) -> Result<RestrictedRootSystem> {
    let name = format!("so({p},{q})");
    let (p, q) = (p.min(q), p.max(q));
    if p == 0 || p + q < 3 {
        return Err(Error::Degenerate(format!("{name} is not a noncompact semisimple form")));
    }
    let n = p + q;
    let dim_g = n * (n - 1) / 2;
    let dim_k = p * (p - 1) / 2 + q * (q - 1) / 2;
    let d = q - p;
    if d == 0 {
        build(TypeLabel::D, p, vec![Multiplicity::ONE; p], meta(name, dim_g, dim_k, 0))
    } else {
        let mut mult = vec![Multiplicity::ONE; p];
        mult[p - 1] = Multiplicity::new(d as u32, 0);
        build(TypeLabel::B, p, mult, meta(name, dim_g, dim_k, d * (d - 1) / 2))
    }
}

/// sp(n, ℝ): C_n, split.
pub fn sp_real(n: usize) -> Result<RestrictedRootSystem> {
    if n == 0 {
        return Err(Error::Degenerate("sp(0,R)".into()));
    }
    build(
        TypeLabel::C,
        n,
        vec![Multiplicity::ONE; n],
        meta(format!("sp({n},R)"), n * (2 * n + 1), n * n, 0),
    )
}

/// sp(p, q), p ≤ q: BC_p (p < q) or C_p (p = q).
pub fn sp_indefinite(p: usize, q: usize) -> Result<RestrictedRootSystem> {
    let name = format!("sp({p},{q})");
    let (p, q) = (p.min(q), p.max(q));
    if p == 0 {
        return Err(Error::Degenerate(format!("{name} is compact")));
    }
    let n = p + q;
    let d = q - p;
    let mut mult = vec![Multiplicity::new(4, 0); p];
    let label = if d > 0 {
        mult[p - 1] = Multiplicity::new(4 * d as u32, 3);
        TypeLabel::BC
    } else {
        mult[p - 1] = Multiplicity::new(3, 0);
        TypeLabel::C
    };
    build(
        label,
        p,
        mult,
        meta(
            name,
            n * (2 * n + 1),
            p * (2 * p + 1) + q * (2 * q + 1),
            3 * p + d * (2 * d + 1),
        ),
    )
}

/// Splits a preset name like `su(2,1)`, `su21`, `sl3r`, `SL(3,R)` into its
/// alphabetic family, numeric parameters and field suffix.
fn tokenize(name: &str) -> (String, Vec<usize>, String) {
    let s: String = name
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '_' && *c != '-')
        .collect();
    let family: String = s.chars().take_while(|c| c.is_ascii_alphabetic() || *c == '*').collect();
    let rest = &s[family.len()..];
    let rest = rest.trim_start_matches('(').trim_end_matches(')');
    let mut nums = Vec::new();
    let mut suffix = String::new();
    let parts: Vec<&str> = rest.split(',').collect();
    for part in parts {
        let digits: String = part.chars().take_while(|c| c.is_ascii_digit()).collect();
        let tail: String = part[digits.len()..].to_string();
        if digits.is_empty() {
            suffix = tail;
            continue;
        }
        nums.push(digits);
        if !tail.is_empty() {
            suffix = tail.trim_end_matches(')').to_string();
        }
    }
    // compact two-parameter forms: su21, so23, sp12
    let nums: Vec<usize> = if nums.len() == 1 && nums[0].len() == 2 && matches!(family.as_str(), "su" | "so" | "sp") && suffix.is_empty() {
        nums[0].chars().map(|c| c.to_digit(10).unwrap() as usize).collect()
    } else {
        nums.iter().filter_map(|d| d.parse().ok()).collect()
    };
    (family, nums, suffix)
}

/// Looks up a built-in preset by name.
pub fn preset(name: &str) -> Result<RestrictedRootSystem> {
    let unknown = || Error::UnknownPreset(name.to_string());
    for entry in exceptional_entries() {
        if normalize(&entry.name) == normalize(name) {
            return entry.build();
        }
    }
    let (family, nums, suffix) = tokenize(name);
    match (family.as_str(), nums.as_slice(), suffix.as_str()) {
        ("sl", [n], "r") => sl_real(*n),
        ("sl", [n], "c") => sl_complex(*n),
        ("sl", [n], "h") => sl_quaternion(*n),
        ("su*", [m], "") if m % 2 == 0 => sl_quaternion(m / 2),
        ("su", [p, q], "") => su(*p, *q),
        ("so", [p, q], "") => so(*p, *q),
        ("sp", [n], "r") => sp_real(*n),
        ("sp", [p, q], "") => sp_indefinite(*p, *q),
        _ => Err(unknown()),
    }
}

fn normalize(name: &str) -> String {
    name.to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect()
}

/// Looks `name` up among `extra` entries first, then the built-ins.
pub fn lookup(name: &str, extra: &[PresetEntry]) -> Result<RestrictedRootSystem> {
    match extra.iter().find(|e| normalize(&e.name) == normalize(name)) {
        Some(e) => e.build(),
        None => preset(name),
    }
}

/// A representative sample of the built-in presets.
pub fn shipped() -> Vec<Result<RestrictedRootSystem>> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push(sl_real(n));
        out.push(sl_complex(n));
        out.push(sl_quaternion(n));
        out.push(sp_real(n));
    }
    for p in 1..=4 {
        for q in p..=6 {
            out.push(su(p, q));
            out.push(sp_indefinite(p, q));
            if p + q >= 3 {
                out.push(so(p, q));
            }
        }
    }
    out.extend(exceptional_entries().iter().map(PresetEntry::build));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl3_dimension_check() {
        let rs = preset("sl3r").unwrap();
        assert_eq!(rs.label(), TypeLabel::A);
        assert_eq!(rs.rank(), 2);
        assert_eq!(rs.roots().len(), 3);
        let m = rs.meta().unwrap();
        assert_eq!((m.dim_g, m.dim_m), (8, 0));
        assert_eq!(m.dim_m + rs.rank() + 2 * rs.total_multiplicity(), 8);
        assert!(rs.is_split());
    }

    #[test]
    fn su21_is_bc1() {
        let rs = preset("su(2,1)").unwrap();
        assert_eq!(rs.label(), TypeLabel::BC);
        let m = rs.meta().unwrap();
        assert_eq!(m.dim_m, 1);
        assert_eq!(rs.total_multiplicity(), 3);
        assert_eq!(m.dim_m + rs.rank() + 2 * rs.total_multiplicity(), 8);
        assert_eq!(preset("su21").unwrap().name(), "su(2,1)");
        assert!(!rs.is_split());
    }

    #[test]
    fn name_variants() {
        for name in ["sl3r", "SL(3,R)", "sl(3, r)", "sl_3_r"] {
            assert_eq!(preset(name).unwrap().name(), "sl(3,R)", "{name}");
        }
        assert_eq!(preset("so(2,3)").unwrap().name(), "so(2,3)");
        assert_eq!(preset("sp2r").unwrap().name(), "sp(2,R)");
        assert_eq!(preset("su*(6)").unwrap().name(), "sl(3,H)");
        assert_eq!(preset("E6(-26)").unwrap().rank(), 2);
        assert!(matches!(preset("xx9"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn every_shipped_preset_validates() {
        for rs in shipped() {
            rs.unwrap();
        }
    }

    #[test]
    fn bad_table_entry_is_caught() {
        let text = r#"
            [[preset]]
            name = "broken"
            type = "A"
            rank = 2
            mult = [1, 1]
            dim_g = 9
            dim_k = 3
            dim_m = 0
        "#;
        let entries = parse_table(text).unwrap();
        assert!(matches!(entries[0].build(), Err(Error::DimensionIdentity { .. })));
    }

    #[test]
    fn extra_entries_shadow_builtins() {
        let text = r#"
            [[preset]]
            name = "mine"
            type = "BC"
            rank = 1
            mult = [2]
            mult_double = [1]
            dim_g = 8
            dim_k = 4
            dim_m = 1
        "#;
        let extra = parse_table(text).unwrap();
        assert_eq!(lookup("mine", &extra).unwrap().label(), TypeLabel::BC);
        assert_eq!(lookup("sl2r", &extra).unwrap().rank(), 1);
    }
}
