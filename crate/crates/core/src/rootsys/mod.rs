//! Restricted root systems over exact rationals.
//!
//! A system is stored through its simple roots: the Cartan matrix, the Gram
//! matrix of the invariant form on the simple roots, and one multiplicity per
//! simple root. In type `BC` the reduced system is type `B` and the short
//! simple root carries a second multiplicity `m(2γ)`; the roots `2γ` are
//! generated, never stored as simple.
//!
//! Within each irreducible factor the form is scaled so that the shortest
//! simple root has squared length 2.
//!
//! Fundamental weights are the dual basis to the coroots `2β/(β|β)` of the
//! simple roots `β` of the system of unmultipliable roots, that is `β = 2γ`
//! when the simple root `γ` is doubled and `β = γ` otherwise. For reduced
//! systems this is the usual convention.

mod cartan;
pub mod presets;
mod weight;

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use cartan::{cartan_matrix, TypeLabel};
pub use weight::{Basis, WeightVector};

use crate::error::{Error, Result};
use crate::rational::{self, frac, q, QMatrix, RationalJson, Q};

/// Multiplicity data attached to one simple root (and, by Weyl invariance,
/// to its whole orbit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicity {
    /// `m(γ)`.
    pub single: u32,
    /// `m(2γ)`, zero when `2γ` is not a root.
    pub double: u32,
}

impl Multiplicity {
    pub const ONE: Multiplicity = Multiplicity { single: 1, double: 0 };

    pub fn new(single: u32, double: u32) -> Self {
        Self { single, double }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealFormMeta {
    pub name: String,
    pub dim_g: usize,
    pub dim_k: usize,
    pub dim_m: usize,
}

/// Input to [`RestrictedRootSystem::build`].
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub label: TypeLabel,
    pub rank: usize,
    /// One entry per simple root.
    pub mult: Vec<Multiplicity>,
    pub meta: Option<RealFormMeta>,
}

impl SystemSpec {
    /// All multiplicities one; for `BC` the short root also gets `m(2γ) = 1`.
    pub fn split(label: TypeLabel, rank: usize) -> Self {
        let mut mult = vec![Multiplicity::ONE; rank];
        if label == TypeLabel::BC && rank > 0 {
            mult[rank - 1].double = 1;
        }
        Self {
            label,
            rank,
            mult,
            meta: None,
        }
    }

    pub fn with_mult(mut self, mult: Vec<Multiplicity>) -> Self {
        self.mult = mult;
        self
    }

    pub fn with_meta(mut self, meta: RealFormMeta) -> Self {
        self.meta = Some(meta);
        self
    }
}

/// A positive restricted root in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveRoot {
    pub coords: Vec<i64>,
    pub multiplicity: u32,
    /// True for the roots `2β` generated from doubled orbits.
    pub divisible: bool,
}

impl PositiveRoot {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn as_weight(&self) -> WeightVector {
        WeightVector::simple_ints(&self.coords)
    }

    /// Indices of simple roots with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i)
    }
}

#[derive(Debug, Clone)]
pub struct RestrictedRootSystem {
    label: TypeLabel,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    gram: QMatrix,
    mult: Vec<Multiplicity>,
    meta: Option<RealFormMeta>,
    roots: Vec<PositiveRoot>,
    simple_to_fund: QMatrix,
    fund_to_simple: QMatrix,
}

impl RestrictedRootSystem {
    pub fn build(spec: &SystemSpec) -> Result<Self> {
        let rank = spec.rank;
        let cartan = cartan_matrix(spec.label, rank)?;
        validate_cartan(&cartan)?;
        if spec.mult.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: spec.mult.len(),
            });
        }
        for (i, m) in spec.mult.iter().enumerate() {
            if m.single == 0 {
                return Err(Error::InconsistentMultiplicities(format!(
                    "m(γ{}) must be positive",
                    i + 1
                )));
            }
        }
        let doubled: Vec<bool> = spec.mult.iter().map(|m| m.double > 0).collect();
        if spec.label == TypeLabel::BC {
            if !doubled[rank - 1] {
                return Err(Error::InconsistentMultiplicities(
                    "type BC needs m(2γ) > 0 on the short simple root".into(),
                ));
            }
        } else if let Some(i) = doubled.iter().position(|&d| d) {
            return Err(Error::InconsistentMultiplicities(format!(
                "doubled root 2γ{} requires type BC",
                i + 1
            )));
        }

        let gram = normalized_gram(&cartan)?;
        if !rational::is_positive_definite(&gram) {
            return Err(Error::InvalidCartan("Gram matrix is not positive definite".into()));
        }

        let orbit_of = simple_root_orbits(&cartan);
        for i in 0..rank {
            for j in 0..i {
                if orbit_of[i] == orbit_of[j] && spec.mult[i] != spec.mult[j] {
                    return Err(Error::InconsistentMultiplicities(format!(
                        "γ{} and γ{} are W-conjugate but carry different multiplicities",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        if spec.label == TypeLabel::BC {
            // only the short orbit may be doubled
            let short = orbit_of[rank - 1];
            if (0..rank).any(|i| doubled[i] && orbit_of[i] != short) {
                return Err(Error::InconsistentMultiplicities(
                    "in type BC only the short roots are doubled".into(),
                ));
            }
        }

        let roots = generate_positive_roots(&cartan, &orbit_of, &spec.mult);

        // c_j = 2(λ|β_j)/(β_j|β_j), β_j = 2γ_j when doubled.
        let mut simple_to_fund = vec![vec![Q::zero(); rank]; rank];
        for j in 0..rank {
            let len = &gram[j][j];
            let factor = if doubled[j] { Q::one() / len } else { q(2) / len };
            for i in 0..rank {
                simple_to_fund[j][i] = &gram[i][j] * &factor;
            }
        }
        let fund_to_simple = rational::inverse(&simple_to_fund)
            .ok_or_else(|| Error::InvalidCartan("singular Gram matrix".into()))?;

        let rs = Self {
            label: spec.label,
            rank,
            cartan,
            gram,
            mult: spec.mult.clone(),
            meta: spec.meta.clone(),
            roots,
            simple_to_fund,
            fund_to_simple,
        };
        if let Some(meta) = &rs.meta {
            rs.check_dimension_identity(meta)?;
        }
        Ok(rs)
    }

    /// Split system of the given type (every multiplicity one).
    pub fn split(label: TypeLabel, rank: usize) -> Result<Self> {
        Self::build(&SystemSpec::split(label, rank))
    }

    fn check_dimension_identity(&self, meta: &RealFormMeta) -> Result<()> {
        let sum_m = self.total_multiplicity();
        let computed = meta.dim_m + self.rank + 2 * sum_m;
        if computed != meta.dim_g {
            return Err(Error::DimensionIdentity {
                name: meta.name.clone(),
                dim_g: meta.dim_g,
                computed,
            });
        }
        if meta.dim_k != meta.dim_m + sum_m {
            return Err(Error::InconsistentMultiplicities(format!(
                "`{}`: dim k = {} but dim m + sum m(gamma) = {}",
                meta.name,
                meta.dim_k,
                meta.dim_m + sum_m
            )));
        }
        Ok(())
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn meta(&self) -> Option<&RealFormMeta> {
        self.meta.as_ref()
    }

    pub fn simple_multiplicities(&self) -> &[Multiplicity] {
        &self.mult
    }

    pub fn is_doubled(&self, i: usize) -> bool {
        self.mult[i].double > 0
    }

    /// Display name: the real form when known, else the type label.
    pub fn name(&self) -> String {
        match &self.meta {
            Some(m) => m.name.clone(),
            None => format!("{}{}", self.label, self.rank),
        }
    }

    /// Restricted root system equals the absolute one: reduced, all
    /// multiplicities one, and (when known) 𝔪 = 0.
    pub fn is_split(&self) -> bool {
        self.mult.iter().all(|m| *m == Multiplicity::ONE)
            && self.meta.as_ref().is_none_or(|m| m.dim_m == 0)
    }

    /// Σ_{γ>0} m(γ), doubled roots counted separately.
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity as usize).sum()
    }

    /// dim X = rank + Σ_{γ>0} m(γ).
    pub fn symmetric_space_dim(&self) -> usize {
        self.rank + self.total_multiplicity()
    }

    /// Positive roots including the doubled ones, ordered by height.
    pub fn roots(&self) -> &[PositiveRoot] {
        &self.roots
    }

    pub fn positive_roots(&self) -> Vec<WeightVector> {
        self.roots.iter().map(PositiveRoot::as_weight).collect()
    }

    pub fn simple_root(&self, i: usize) -> WeightVector {
        let mut c = vec![0i64; self.rank];
        c[i] = 1;
        WeightVector::simple_ints(&c)
    }

    /// Dynkin adjacency of simple roots.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i][j] != 0
    }

    fn check_dim(&self, v: &WeightVector) -> Result<()> {
        if v.dim() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: v.dim(),
            });
        }
        Ok(())
    }

    pub fn simple_coords(&self, v: &WeightVector) -> Result<Vec<Q>> {
        self.check_dim(v)?;
        Ok(match v.basis {
            Basis::SimpleRoot => v.coords.clone(),
            Basis::FundamentalWeight => rational::mat_vec(&self.fund_to_simple, &v.coords),
        })
    }

    pub fn fundamental_coords(&self, v: &WeightVector) -> Result<Vec<Q>> {
        self.check_dim(v)?;
        Ok(match v.basis {
            Basis::FundamentalWeight => v.coords.clone(),
            Basis::SimpleRoot => rational::mat_vec(&self.simple_to_fund, &v.coords),
        })
    }

    pub fn to_basis(&self, v: &WeightVector, basis: Basis) -> Result<WeightVector> {
        let coords = match basis {
            Basis::SimpleRoot => self.simple_coords(v)?,
            Basis::FundamentalWeight => self.fundamental_coords(v)?,
        };
        Ok(WeightVector::new(coords, basis))
    }

    /// The invariant form `(v | w)`.
    pub fn inner(&self, v: &WeightVector, w: &WeightVector) -> Result<Q> {
        let a = self.simple_coords(v)?;
        let b = self.simple_coords(w)?;
        Ok(self.inner_simple(&a, &b))
    }

    pub(crate) fn inner_simple(&self, a: &[Q], b: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() && !self.gram[i][j].is_zero() {
                    acc += ai * bj * &self.gram[i][j];
                }
            }
        }
        acc
    }

    /// `(v | γ)` for a root given by integer simple coordinates.
    pub(crate) fn inner_root(&self, a: &[Q], root: &[i64]) -> Q {
        let b: Vec<Q> = root.iter().map(|&c| q(c)).collect();
        self.inner_simple(a, &b)
    }

    /// `(γ | γ)` of a root given in simple coordinates.
    pub(crate) fn root_norm(&self, root: &[i64]) -> Q {
        let b: Vec<Q> = root.iter().map(|&c| q(c)).collect();
        self.inner_simple(&b, &b)
    }

    /// Simple reflection `s_i(v) = v − 2(v|γ_i)/(γ_i|γ_i) γ_i`, in fundamental
    /// coordinates.
    fn reflect_fund(&self, c: &[Q], i: usize) -> Vec<Q> {
        // 2(v|γ_i)/(γ_i|γ_i) is c_i, or 2c_i when γ_i is doubled
        let pairing = if self.is_doubled(i) { &c[i] * q(2) } else { c[i].clone() };
        if pairing.is_zero() {
            return c.to_vec();
        }
        // fundamental coordinates of γ_i are column i of simple_to_fund
        c.iter()
            .enumerate()
            .map(|(j, cj)| cj - &pairing * &self.simple_to_fund[j][i])
            .collect()
    }

    pub fn reflect(&self, v: &WeightVector, i: usize) -> Result<WeightVector> {
        if i >= self.rank {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank });
        }
        let c = self.fundamental_coords(v)?;
        let w = WeightVector::fundamental(self.reflect_fund(&c, i));
        self.to_basis(&w, v.basis)
    }

    /// The Weyl group orbit of `v`, sorted, in the basis of `v`.
    pub fn weyl_orbit(&self, v: &WeightVector) -> Result<Vec<WeightVector>> {
        let start = self.fundamental_coords(v)?;
        let mut seen: HashSet<Vec<Q>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for i in 0..self.rank {
                let r = self.reflect_fund(&c, i);
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        let orbit: BTreeSet<WeightVector> = seen
            .into_iter()
            .map(|c| self.to_basis(&WeightVector::fundamental(c), v.basis))
            .collect::<Result<_>>()?;
        Ok(orbit.into_iter().collect())
    }

    /// `(v | γ_i) ≥ 0` for every simple root.
    pub fn is_dominant(&self, v: &WeightVector) -> Result<bool> {
        Ok(self.fundamental_coords(v)?.iter().all(|c| !c.is_negative()))
    }

    /// The unique dominant element of the orbit of `v`.
    pub fn to_dominant(&self, v: &WeightVector) -> Result<WeightVector> {
        let mut c = self.fundamental_coords(v)?;
        while let Some(i) = c.iter().position(Signed::is_negative) {
            c = self.reflect_fund(&c, i);
        }
        self.to_basis(&WeightVector::fundamental(c), v.basis)
    }

    /// Fundamental weights expressed in the simple-root basis.
    pub fn fundamental_weights(&self) -> Vec<WeightVector> {
        (0..self.rank)
            .map(|i| WeightVector::simple((0..self.rank).map(|j| self.fund_to_simple[j][i].clone()).collect()))
            .collect()
    }

    /// ½ Σ_{γ>0} m(γ) γ, in the simple-root basis.
    pub fn half_sum(&self) -> WeightVector {
        let mut acc = vec![Q::zero(); self.rank];
        for r in &self.roots {
            let m = q(r.multiplicity as i64);
            for (a, &c) in acc.iter_mut().zip(&r.coords) {
                *a += &m * q(c);
            }
        }
        WeightVector::simple(acc.into_iter().map(|a| a * frac(1, 2)).collect())
    }

    /// Whether the positive root lies in the span of the simple roots in `mask`.
    pub(crate) fn root_in_span(&self, root: &PositiveRoot, mask: u64) -> bool {
        root.support().all(|i| mask >> i & 1 == 1)
    }

    pub fn root_listing(&self) -> RootListing {
        RootListing {
            system: self.name(),
            rank: self.rank,
            roots: self
                .roots
                .iter()
                .map(|r| RootEntry {
                    coords_simple_basis: r.coords.iter().map(|&c| RationalJson(q(c))).collect(),
                    multiplicity: r.multiplicity,
                    divisible: r.divisible,
                })
                .collect(),
        }
    }
}

/// JSON emission of a root list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootListing {
    pub system: String,
    pub rank: usize,
    pub roots: Vec<RootEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootEntry {
    pub coords_simple_basis: Vec<RationalJson>,
    pub multiplicity: u32,
    pub divisible: bool,
}

/// Checks diagonal 2, non-positive off-diagonal, symmetric zero pattern and
/// finite type (symmetrizable with positive-definite symmetrization).
pub fn validate_cartan(a: &[Vec<i64>]) -> Result<()> {
    let r = a.len();
    if r == 0 {
        return Err(Error::EmptySystem);
    }
    for i in 0..r {
        if a[i].len() != r {
            return Err(Error::InvalidCartan("matrix is not square".into()));
        }
        if a[i][i] != 2 {
            return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
        }
        for j in 0..r {
            if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                return Err(Error::InvalidCartan(format!("bad off-diagonal pair ({}, {})", i + 1, j + 1)));
            }
        }
    }
    let g = normalized_gram(a)?;
    if !rational::is_positive_definite(&g) {
        return Err(Error::InvalidCartan("not of finite type".into()));
    }
    Ok(())
}

/// Symmetrizes `a` per connected component and scales so the shortest simple
/// root of each component has squared length 2.
fn normalized_gram(a: &[Vec<i64>]) -> Result<QMatrix> {
    let r = a.len();
    let mut len: Vec<Option<Q>> = vec![None; r];
    for start in 0..r {
        if len[start].is_some() {
            continue;
        }
        let mut comp = vec![start];
        len[start] = Some(Q::one());
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            k += 1;
            for j in 0..r {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                // A_ij d_j = A_ji d_i
                let dj = len[i].clone().unwrap() * q(a[j][i]) / q(a[i][j]);
                match &len[j] {
                    Some(existing) if *existing != dj => {
                        return Err(Error::InvalidCartan("matrix is not symmetrizable".into()));
                    }
                    Some(_) => {}
                    None => {
                        len[j] = Some(dj);
                        comp.push(j);
                    }
                }
            }
        }
        let min = comp.iter().map(|&i| len[i].clone().unwrap()).min().unwrap();
        let scale = q(2) / min;
        for &i in &comp {
            len[i] = Some(len[i].clone().unwrap() * &scale);
        }
    }
    let len: Vec<Q> = len.into_iter().map(Option::unwrap).collect();
    Ok((0..r)
        .map(|i| (0..r).map(|j| q(a[i][j]) * &len[j] / q(2)).collect())
        .collect())
}

fn reflect_int(a: &[Vec<i64>], v: &[i64], i: usize) -> Vec<i64> {
    let pairing: i64 = v.iter().enumerate().map(|(j, &vj)| vj * a[j][i]).sum();
    let mut w = v.to_vec();
    w[i] -= pairing;
    w
}

fn orbit_int(a: &[Vec<i64>], start: Vec<i64>) -> HashSet<Vec<i64>> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for i in 0..a.len() {
            let w = reflect_int(a, &v, i);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Orbit label (smallest simple-root index in the orbit) of each simple root.
fn simple_root_orbits(a: &[Vec<i64>]) -> Vec<usize> {
    let r = a.len();
    let mut label: Vec<Option<usize>> = vec![None; r];
    for i in 0..r {
        if label[i].is_some() {
            continue;
        }
        let mut e = vec![0; r];
        e[i] = 1;
        let orbit = orbit_int(a, e);
        for (j, lj) in label.iter_mut().enumerate() {
            let mut f = vec![0; r];
            f[j] = 1;
            if orbit.contains(&f) {
                *lj = Some(i);
            }
        }
    }
    label.into_iter().map(Option::unwrap).collect()
}

fn generate_positive_roots(a: &[Vec<i64>], orbit_of: &[usize], mult: &[Multiplicity]) -> Vec<PositiveRoot> {
    let r = a.len();
    let mut roots = Vec::new();
    let reps: BTreeSet<usize> = orbit_of.iter().copied().collect();
    for rep in reps {
        let mut e = vec![0; r];
        e[rep] = 1;
        let m = mult[rep];
        for coords in orbit_int(a, e) {
            if coords.iter().all(|&c| c >= 0) {
                if m.double > 0 {
                    roots.push(PositiveRoot {
                        coords: coords.iter().map(|c| 2 * c).collect(),
                        multiplicity: m.double,
                        divisible: true,
                    });
                }
                roots.push(PositiveRoot {
                    coords,
                    multiplicity: m.single,
                    divisible: false,
                });
            }
        }
    }
    roots.sort_by(|x, y| {
        x.height()
            .cmp(&y.height())
            .then_with(|| y.coords.cmp(&x.coords))
    });
    roots
}
