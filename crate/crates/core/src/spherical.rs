//! Sphericity of highest weights, the spherical lattice, and weight systems
//! of split forms.
//!
//! A dominant `Λ` is spherical when `(Λ|γ)/(γ|γ) ∈ ℤ` for every positive
//! restricted root `γ`, doubled roots included.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{common_denominator, hermite_rows};
use crate::rational::{self, q, RationalJson, Q};
use crate::rootsys::{Basis, RestrictedRootSystem, WeightVector};
use crate::subset::SimpleSubset;

/// Formats a root given in simple coordinates, e.g. `γ₁+2γ₂`.
pub fn root_name(coords: &[i64]) -> String {
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let mut parts = Vec::new();
    for (i, &c) in coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let idx: String = (i + 1).to_string().chars().map(|d| SUB[d.to_digit(10).unwrap() as usize]).collect();
        let coef = match c {
            1 => String::new(),
            -1 => "-".to_string(),
            _ => c.to_string(),
        };
        parts.push(format!("{coef}γ{idx}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+").replace("+-", "-")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Root in simple-root coordinates.
    pub root: Vec<i64>,
    pub ratio: RationalJson,
}

impl Violation {
    pub fn describe(&self) -> String {
        format!(
            "integrality condition (Λ|γ)/(γ|γ) ∈ ℤ fails at root {} with ratio {}",
            root_name(&self.root),
            rational::fmt_q(&self.ratio.0)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericityReport {
    pub spherical: bool,
    pub dominant: bool,
    pub violations: Vec<Violation>,
}

impl SphericityReport {
    /// One line per failed condition; empty when spherical.
    pub fn explain(&self) -> Vec<String> {
        let mut out: Vec<String> = self.violations.iter().map(Violation::describe).collect();
        if !self.dominant {
            out.push("highest weight is not dominant: (Λ|γᵢ) < 0 for some simple root".into());
        }
        out
    }

    /// `Ok` when spherical, else an error naming the first failed condition.
    pub fn require(&self) -> Result<()> {
        if self.spherical {
            Ok(())
        } else {
            Err(Error::NotSpherical(self.explain().join("; ")))
        }
    }
}

/// Tests dominance and the integrality condition over all positive roots.
pub fn is_spherical(rs: &RestrictedRootSystem, lambda: &WeightVector) -> Result<SphericityReport> {
    let a = rs.simple_coords(lambda)?;
    let violations: Vec<Violation> = rs
        .roots()
        .iter()
        .filter_map(|root| {
            let ratio = rs.inner_root(&a, &root.coords) / rs.root_norm(&root.coords);
            (!ratio.is_integer()).then(|| Violation {
                root: root.coords.clone(),
                ratio: RationalJson(ratio),
            })
        })
        .collect();
    let dominant = rs.is_dominant(lambda)?;
    Ok(SphericityReport {
        spherical: violations.is_empty() && dominant,
        dominant,
        violations,
    })
}

/// Membership in the lattice of weights satisfying the integrality
/// condition (dominance not required).
pub fn in_spherical_lattice(rs: &RestrictedRootSystem, lambda: &WeightVector) -> Result<bool> {
    Ok(is_spherical(rs, lambda)?.violations.is_empty())
}

/// A ℤ-basis of `{λ : (λ|γ)/(γ|γ) ∈ ℤ for all γ > 0}`, in the
/// fundamental-weight basis and in Hermite normal form.
pub fn spherical_lattice_basis(rs: &RestrictedRootSystem) -> Result<Vec<WeightVector>> {
    let r = rs.rank();
    let omegas: Vec<Vec<Q>> = rs
        .fundamental_weights()
        .iter()
        .map(|w| rs.simple_coords(w))
        .collect::<Result<_>>()?;
    // constraint row per root: c ↦ Σ_j c_j (ω_j|γ)/(γ|γ)
    let constraint: Vec<Vec<Q>> = rs
        .roots()
        .iter()
        .map(|root| {
            let norm = rs.root_norm(&root.coords);
            omegas.iter().map(|w| rs.inner_root(w, &root.coords) / &norm).collect()
        })
        .collect();
    let den = common_denominator(constraint.iter().flatten());
    let int_rows: Vec<Vec<BigInt>> = constraint
        .iter()
        .map(|row| row.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let h = hermite_rows(&int_rows);
    if h.len() != r {
        return Err(Error::Degenerate("constraint rows do not span the weight space".into()));
    }
    // lattice = {c : (h/den) c ∈ ℤ^r} = den · h⁻¹ ℤ^r
    let hq: Vec<Vec<Q>> = h
        .iter()
        .map(|row| row.iter().map(|x| Q::new(x.clone(), den.clone())).collect())
        .collect();
    let inv = rational::inverse(&hq).ok_or_else(|| Error::Degenerate("singular constraint matrix".into()))?;
    let generators = rational::transpose(&inv);
    // canonical basis: Hermite form of the generator rows
    let den2 = common_denominator(generators.iter().flatten());
    let int_gen: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|row| row.iter().map(|x| (x * Q::from_integer(den2.clone())).to_integer()).collect())
        .collect();
    Ok(hermite_rows(&int_gen)
        .into_iter()
        .map(|row| WeightVector::fundamental(row.into_iter().map(|x| Q::new(x, den2.clone())).collect()))
        .collect())
}

/// Weights of an irreducible representation of a split form with their
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub highest: WeightVector,
    /// Keys are in the fundamental-weight basis.
    pub entries: BTreeMap<WeightVector, u64>,
}

impl WeightSystem {
    pub fn multiplicity(&self, w: &WeightVector) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct WeightEntryJson {
    weight: WeightVector,
    multiplicity: u64,
}

#[derive(Serialize, Deserialize)]
struct WeightSystemJson {
    highest: WeightVector,
    dimension: u64,
    weights: Vec<WeightEntryJson>,
}

impl Serialize for WeightSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightSystemJson {
            highest: self.highest.clone(),
            dimension: self.total(),
            weights: self
                .entries
                .iter()
                .map(|(w, &m)| WeightEntryJson {
                    weight: w.clone(),
                    multiplicity: m,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = WeightSystemJson::deserialize(d)?;
        Ok(WeightSystem {
            highest: raw.highest,
            entries: raw.weights.into_iter().map(|e| (e.weight, e.multiplicity)).collect(),
        })
    }
}

/// Integer fundamental-weight coordinates of a dominant integral weight on a
/// split system.
fn admissible_highest(rs: &RestrictedRootSystem, lambda: &WeightVector) -> Result<Vec<i64>> {
    if !rs.is_split() {
        return Err(Error::NotSplit);
    }
    let c = rs.fundamental_coords(lambda)?;
    if c.iter().any(Signed::is_negative) {
        return Err(Error::NotDominant);
    }
    c.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_i64().ok_or_else(|| Error::NotIntegral(rational::fmt_q(x)))
            } else {
                Err(Error::NotIntegral(rational::fmt_q(x)))
            }
        })
        .collect()
}

/// Integer data of a split system used by the Freudenthal recursion.
struct FreudenthalData<'a> {
    rs: &'a RestrictedRootSystem,
    /// Fundamental coordinates of the positive roots.
    roots_fund: Vec<Vec<i64>>,
}

impl<'a> FreudenthalData<'a> {
    fn new(rs: &'a RestrictedRootSystem) -> Self {
        let cartan = rs.cartan();
        let r = rs.rank();
        // γ_i = Σ_j A_ij ω_j for reduced systems
        let roots_fund = rs
            .roots()
            .iter()
            .map(|root| {
                (0..r)
                    .map(|j| root.coords.iter().enumerate().map(|(i, &a)| a * cartan[i][j]).sum())
                    .collect()
            })
            .collect();
        Self { rs, roots_fund }
    }

    fn to_dominant(&self, c: &[i64]) -> Vec<i64> {
        let cartan = self.rs.cartan();
        let mut c = c.to_vec();
        while let Some(i) = c.iter().position(|&x| x < 0) {
            let p = c[i];
            for (j, cj) in c.iter_mut().enumerate() {
                *cj -= p * cartan[i][j];
            }
        }
        c
    }

    fn simple(&self, c: &[i64]) -> Vec<Q> {
        let w = WeightVector::fundamental_ints(c);
        self.rs.simple_coords(&w).expect("rank checked")
    }
}

/// All weights and multiplicities of the irreducible representation with
/// highest weight `lambda` (split forms only), by Freudenthal's recursion
/// over dominant weights in order of depth below `lambda`.
pub fn weight_system(rs: &RestrictedRootSystem, lambda: &WeightVector) -> Result<WeightSystem> {
    let top = admissible_highest(rs, lambda)?;
    let data = FreudenthalData::new(rs);
    let cartan = rs.cartan();
    let r = rs.rank();

    // saturate by simple-root strings
    let mut weights: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    weights.insert(top.clone());
    queue.push_back(top.clone());
    while let Some(mu) = queue.pop_front() {
        for i in 0..r {
            let mut nu = mu.clone();
            for _ in 0..mu[i].max(0) {
                for (j, x) in nu.iter_mut().enumerate() {
                    *x -= cartan[i][j];
                }
                if weights.insert(nu.clone()) {
                    queue.push_back(nu.clone());
                }
            }
        }
    }

    let top_simple = data.simple(&top);
    let rho = rs.half_sum().coords;
    let shifted_norm = |s: &[Q]| {
        let v: Vec<Q> = s.iter().zip(&rho).map(|(a, b)| a + b).collect();
        rs.inner_simple(&v, &v)
    };
    let top_norm = shifted_norm(&top_simple);
    let depth = |s: &[Q]| -> Q { top_simple.iter().zip(s).map(|(a, b)| a - b).sum() };

    let mut dominant: Vec<(Vec<i64>, Vec<Q>)> = weights
        .iter()
        .filter(|c| c.iter().all(|&x| x >= 0))
        .map(|c| (c.clone(), data.simple(c)))
        .collect();
    dominant.sort_by(|a, b| depth(&a.1).cmp(&depth(&b.1)).then_with(|| b.0.cmp(&a.0)));

    let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
    for (c, s) in &dominant {
        if *c == top {
            mult.insert(c.clone(), 1);
            continue;
        }
        let mut num = Q::zero();
        for (root, root_fund) in rs.roots().iter().zip(&data.roots_fund) {
            let mut nu = c.clone();
            let mut nu_simple = s.clone();
            loop {
                for (x, y) in nu.iter_mut().zip(root_fund) {
                    *x += y;
                }
                for (x, &y) in nu_simple.iter_mut().zip(&root.coords) {
                    *x += q(y);
                }
                if !weights.contains(&nu) {
                    break;
                }
                let m = mult
                    .get(&data.to_dominant(&nu))
                    .copied()
                    .expect("dominant representatives are processed in order of depth");
                num += q(m as i64) * rs.inner_root(&nu_simple, &root.coords);
            }
        }
        let den = &top_norm - shifted_norm(s);
        let m = q(2) * num / den;
        if !m.is_integer() || m.is_negative() {
            return Err(Error::Verification(format!(
                "Freudenthal recursion produced non-integral multiplicity {}",
                rational::fmt_q(&m)
            )));
        }
        mult.insert(c.clone(), m.to_integer().to_u64().unwrap_or(0));
    }

    let entries = weights
        .iter()
        .map(|c| {
            let m = mult[&data.to_dominant(c)];
            (WeightVector::fundamental_ints(c), m)
        })
        .filter(|(_, m)| *m > 0)
        .collect();
    Ok(WeightSystem {
        highest: WeightVector::fundamental_ints(&top),
        entries,
    })
}

/// Weyl's dimension formula `∏_{γ>0} (Λ+ρ|γ)/(ρ|γ)` (split forms only).
pub fn weyl_dimension(rs: &RestrictedRootSystem, lambda: &WeightVector) -> Result<u64> {
    let top = admissible_highest(rs, lambda)?;
    let a = rs.simple_coords(&WeightVector::fundamental_ints(&top))?;
    let rho = rs.half_sum().coords;
    let shifted: Vec<Q> = a.iter().zip(&rho).map(|(x, y)| x + y).collect();
    let mut dim = Q::one();
    for root in rs.roots() {
        dim *= rs.inner_root(&shifted, &root.coords) / rs.inner_root(&rho, &root.coords);
    }
    if !dim.is_integer() {
        return Err(Error::Verification("Weyl dimension is not an integer".into()));
    }
    dim.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Degenerate("dimension does not fit in 64 bits".into()))
}

/// The weights `λ` of `ws` with `λ − Λ` in the span of `e`, i.e. those
/// congruent to `Λ` modulo 𝔞^E. Their weight spaces make up `V^E`.
pub fn congruent_weights(
    rs: &RestrictedRootSystem,
    lambda: &WeightVector,
    e: SimpleSubset,
    ws: &WeightSystem,
) -> Result<BTreeMap<WeightVector, u64>> {
    e.check_rank(rs.rank())?;
    let top = rs.simple_coords(lambda)?;
    let mut out = BTreeMap::new();
    for (w, &m) in &ws.entries {
        let s = rs.simple_coords(w)?;
        let congruent = top
            .iter()
            .zip(&s)
            .enumerate()
            .all(|(i, (a, b))| e.contains(i) || a == b);
        if congruent {
            out.insert(rs.to_basis(w, Basis::FundamentalWeight)?, m);
        }
    }
    Ok(out)
}
