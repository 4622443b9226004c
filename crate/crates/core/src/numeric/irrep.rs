use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, ToPrimitive};

use super::{check_traceless_diag, Tolerances};
use crate::error::{Error, Result};
use crate::rootsys::{Basis, RestrictedRootSystem, TypeLabel, WeightVector};
use crate::spherical;

pub const MAX_IRREP_DIM: usize = 2000;
pub const MAX_AMBIENT: usize = 1 << 20;

/// `k`-subsets of `{0, …, n−1}` as bitmasks, in lexicographic order of the
/// sorted member lists. Index 0 is `{0, …, k−1}`.
fn wedge_basis(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, mask: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(mask);
            return;
        }
        for i in start..=n - k {
            rec(i + 1, n, k - 1, mask | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, 0, &mut out);
    out
}

/// Irreducible representation of `sl(n, ℝ)` realized inside a tensor product
/// of exterior powers of `ℝⁿ`: one factor `Λᵏℝⁿ` per unit of the `k`-th
/// fundamental coefficient of the highest weight.
///
/// The ambient basis consists of tensors of wedge basis vectors; these are
/// weight vectors, so the orthonormal basis of the irreducible subspace is
/// chosen weight by weight and column 0 is the highest weight vector.
#[derive(Debug, Clone)]
pub struct NumericIrrep {
    n: usize,
    highest: WeightVector,
    /// Wedge degree of each tensor factor.
    factors: Vec<usize>,
    wedges: Vec<Vec<u32>>,
    wedge_index: Vec<HashMap<u32, usize>>,
    ambient_dim: usize,
    basis: DMatrix<f64>,
    /// ε-coordinates of the weight of each basis column.
    weights: Vec<Vec<i64>>,
    tol: Tolerances,
}

pub fn build_irrep(n: usize, lambda: &WeightVector) -> Result<NumericIrrep> {
    build_irrep_with(n, lambda, Tolerances::default())
}

pub fn build_irrep_with(n: usize, lambda: &WeightVector, tol: Tolerances) -> Result<NumericIrrep> {
    if !(2..=16).contains(&n) {
        return Err(Error::Degenerate(format!("sl({n}) is outside the supported range 2..=16")));
    }
    let rs = RestrictedRootSystem::split(TypeLabel::A, n - 1)?;
    let coeffs = rs.fundamental_coords(lambda)?;
    let mut factors = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_negative() {
            return Err(Error::NotDominant);
        }
        if !c.is_integer() {
            return Err(Error::NotIntegral(crate::rational::fmt_q(c)));
        }
        let c = c.to_integer().to_usize().ok_or(Error::DimensionCap {
            dim: usize::MAX,
            cap: MAX_IRREP_DIM,
        })?;
        factors.extend(std::iter::repeat_n(k + 1, c));
    }
    let expected = spherical::weyl_dimension(&rs, lambda)? as usize;
    if expected > MAX_IRREP_DIM {
        return Err(Error::DimensionCap {
            dim: expected,
            cap: MAX_IRREP_DIM,
        });
    }
    let wedges: Vec<Vec<u32>> = factors.iter().map(|&k| wedge_basis(n, k)).collect();
    let mut ambient_dim = 1usize;
    for w in &wedges {
        ambient_dim = ambient_dim.saturating_mul(w.len());
    }
    if ambient_dim > MAX_AMBIENT {
        return Err(Error::DimensionCap {
            dim: ambient_dim,
            cap: MAX_AMBIENT,
        });
    }
    let wedge_index = wedges
        .iter()
        .map(|w| w.iter().enumerate().map(|(i, &m)| (m, i)).collect())
        .collect();
    let mut rep = NumericIrrep {
        n,
        highest: rs.to_basis(lambda, Basis::FundamentalWeight)?,
        factors,
        wedges,
        wedge_index,
        ambient_dim,
        basis: DMatrix::zeros(ambient_dim, 0),
        weights: Vec::new(),
        tol,
    };
    rep.span_from_highest()?;
    if rep.dim() != expected {
        return Err(Error::IrrepDimension {
            built: rep.dim(),
            expected,
        });
    }
    Ok(rep)
}

impl NumericIrrep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Highest weight in the fundamental-weight basis.
    pub fn highest(&self) -> &WeightVector {
        &self.highest
    }

    /// Wedge degree of each ambient tensor factor.
    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Orthonormal basis of the irreducible subspace, `ambient × dim`.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Weight of basis vector `i` in ε-coordinates: entry `j` counts how
    /// often index `j` occurs in the wedge factors.
    pub fn weight_eps(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }

    /// Weight of basis vector `i` in fundamental coordinates.
    pub fn weight_fundamental(&self, i: usize) -> Vec<i64> {
        let w = &self.weights[i];
        (0..self.n - 1).map(|j| w[j] - w[j + 1]).collect()
    }

    /// `λ(H)` for basis vector `i` and diagonal `H`.
    pub fn weight_value(&self, i: usize, h: &[f64]) -> f64 {
        self.weights[i].iter().zip(h).map(|(&c, &x)| c as f64 * x).sum()
    }

    /// Simple-root coordinates of `Λ − λ` for basis vector `i` (all ≥ 0).
    pub fn depth_coords(&self, i: usize) -> Vec<i64> {
        let top = &self.weights[0];
        let w = &self.weights[i];
        let mut acc = 0;
        (0..self.n - 1)
            .map(|j| {
                acc += top[j] - w[j];
                acc
            })
            .collect()
    }

    /// The highest weight vector `v⁺` in the irrep basis.
    pub fn highest_vector(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        v[0] = 1.0;
        v
    }

    /// Embeds an irrep-basis vector into the ambient tensor space.
    pub fn to_ambient(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.basis * v
    }

    /// Orthogonal projection of an ambient vector to irrep coordinates.
    pub fn from_ambient(&self, v: &DVector<f64>) -> DVector<f64> {
        self.basis.tr_mul(v)
    }

    /// Ambient index of a tuple of wedge masks, one per factor.
    pub fn ambient_index(&self, masks: &[u32]) -> Option<usize> {
        let mut idx = 0;
        for (f, m) in masks.iter().enumerate() {
            idx = idx * self.wedges[f].len() + *self.wedge_index[f].get(m)?;
        }
        Some(idx)
    }

    fn decode(&self, mut idx: usize, out: &mut [u32]) {
        for f in (0..self.factors.len()).rev() {
            let d = self.wedges[f].len();
            out[f] = self.wedges[f][idx % d];
            idx /= d;
        }
    }

    fn ambient_weight(&self, idx: usize) -> Vec<i64> {
        let mut masks = vec![0u32; self.factors.len()];
        self.decode(idx, &mut masks);
        (0..self.n)
            .map(|j| masks.iter().filter(|&&m| m >> j & 1 == 1).count() as i64)
            .collect()
    }

    /// `dρ(E_ab)` applied to an ambient vector (derivation rule over factors).
    fn apply_elementary(&self, v: &DVector<f64>, a: usize, b: usize, out: &mut DVector<f64>) {
        let mut masks = vec![0u32; self.factors.len()];
        for (idx, &x) in v.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            self.decode(idx, &mut masks);
            if a == b {
                let c = masks.iter().filter(|&&m| m >> a & 1 == 1).count();
                out[idx] += c as f64 * x;
                continue;
            }
            for f in 0..masks.len() {
                let m = masks[f];
                if m >> b & 1 == 0 || m >> a & 1 == 1 {
                    continue;
                }
                let (lo, hi) = (a.min(b), a.max(b));
                let between = (m >> (lo + 1)) & ((1u32 << (hi - lo - 1)) - 1);
                let sign = if between.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                masks[f] = m & !(1 << b) | 1 << a;
                let j = self.ambient_index(&masks).expect("wedge mask in basis");
                masks[f] = m;
                out[j] += sign * x;
            }
        }
    }

    /// Builds the basis by applying lowering operators `E_{i+1,i}` level by
    /// level from `v⁺`, orthonormalizing each weight space by SVD.
    fn span_from_highest(&mut self) -> Result<()> {
        let top_masks: Vec<u32> = self.factors.iter().map(|&k| (1u32 << k) - 1).collect();
        let top = self.ambient_index(&top_masks).expect("highest tensor");
        let mut by_weight: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for idx in 0..self.ambient_dim {
            by_weight.entry(self.ambient_weight(idx)).or_default().push(idx);
        }
        let mut hw = DVector::zeros(self.ambient_dim);
        hw[top] = 1.0;
        let mut columns = vec![hw.clone()];
        let mut weights = vec![self.ambient_weight(top)];
        let mut level: BTreeMap<Vec<i64>, Vec<DVector<f64>>> = BTreeMap::new();
        level.insert(weights[0].clone(), vec![hw]);
        while !level.is_empty() {
            let mut cand: BTreeMap<Vec<i64>, Vec<DVector<f64>>> = BTreeMap::new();
            for (w, vecs) in &level {
                for i in 0..self.n - 1 {
                    if w[i] == 0 {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2[i] -= 1;
                    w2[i + 1] += 1;
                    for v in vecs {
                        let mut out = DVector::zeros(self.ambient_dim);
                        self.apply_elementary(v, i + 1, i, &mut out);
                        if out.iter().any(|&x| x != 0.0) {
                            cand.entry(w2.clone()).or_default().push(out);
                        }
                    }
                }
            }
            let mut next = BTreeMap::new();
            // higher weights first within a level, matching BTreeMap reversed
            for (w, vecs) in cand.into_iter().rev() {
                let support = &by_weight[&w];
                let a = DMatrix::from_fn(support.len(), vecs.len(), |r, c| vecs[c][support[r]]);
                let kept = self.orthonormal_range(a)?;
                let mut lifted = Vec::with_capacity(kept.ncols());
                for c in 0..kept.ncols() {
                    let mut v = DVector::zeros(self.ambient_dim);
                    for (r, &idx) in support.iter().enumerate() {
                        v[idx] = kept[(r, c)];
                    }
                    columns.push(v.clone());
                    weights.push(w.clone());
                    lifted.push(v);
                }
                next.insert(w, lifted);
            }
            level = next;
            if columns.len() > MAX_IRREP_DIM {
                return Err(Error::DimensionCap {
                    dim: columns.len(),
                    cap: MAX_IRREP_DIM,
                });
            }
        }
        self.basis = DMatrix::from_columns(&columns);
        self.weights = weights;
        Ok(())
    }

    /// Orthonormal basis of the column space, with the rank decided at
    /// `τ = tol·σ_max` and values in `[τ, 10τ)` reported as ambiguous.
    fn orthonormal_range(&self, a: DMatrix<f64>) -> Result<DMatrix<f64>> {
        let svd = super::jacobi::svd(&a);
        let u = svd.u;
        let s = &svd.singular_values;
        let smax = s.iter().cloned().fold(0.0, f64::max);
        if smax == 0.0 {
            return Ok(DMatrix::zeros(u.nrows(), 0));
        }
        let tau = self.tol.nullspace * smax;
        let mut keep = Vec::new();
        for (i, &x) in s.iter().enumerate() {
            if x >= tau && x < 10.0 * tau {
                return Err(Error::RankAmbiguous {
                    ratio: x / smax,
                    lo: self.tol.nullspace,
                    hi: 10.0 * self.tol.nullspace,
                });
            }
            if x >= 10.0 * tau {
                keep.push(i);
            }
        }
        let mut out = DMatrix::zeros(u.nrows(), keep.len());
        for (c, &i) in keep.iter().enumerate() {
            // sign convention: entry of largest magnitude positive
            let col = u.column(i);
            let sgn = if col[col.iamax()] < 0.0 { -1.0 } else { 1.0 };
            out.set_column(c, &(col * sgn));
        }
        Ok(out)
    }

    /// `dρ(X)` on the irrep, for traceless `X`.
    pub fn lie_action(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_square(x)?;
        let scale = x.abs().max().max(1.0);
        if x.trace().abs() > 1e-12 * scale * self.n as f64 {
            return Err(Error::NotTraceless(format!("trace {}", x.trace())));
        }
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for c in 0..self.dim() {
            let col = self.basis.column(c).into_owned();
            let img = self.lie_ambient(x, &col);
            out.set_column(c, &self.basis.tr_mul(&img));
        }
        Ok(out)
    }

    fn lie_ambient(&self, x: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
        let mut acc = DVector::zeros(self.ambient_dim);
        for a in 0..self.n {
            for b in 0..self.n {
                let c = x[(a, b)];
                if c == 0.0 {
                    continue;
                }
                let mut out = DVector::zeros(self.ambient_dim);
                self.apply_elementary(v, a, b, &mut out);
                acc.axpy(c, &out, 1.0);
            }
        }
        acc
    }

    fn check_square(&self, g: &DMatrix<f64>) -> Result<()> {
        if g.nrows() != self.n || g.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: g.nrows().max(g.ncols()),
            });
        }
        Ok(())
    }

    fn check_unimodular(&self, g: &DMatrix<f64>) -> Result<()> {
        self.check_square(g)?;
        let det = g.determinant();
        let hadamard: f64 = g.column_iter().map(|c| c.norm()).product::<f64>().max(1.0);
        if !det.is_finite() || (det - 1.0).abs() > self.tol.det * hadamard {
            return Err(Error::NotUnimodular(det));
        }
        Ok(())
    }

    /// `ρ(g)` on the irrep, for `g ∈ SL(n, ℝ)`.
    pub fn group_action(&self, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_unimodular(g)?;
        let compounds = self.compounds(g);
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for c in 0..self.dim() {
            let img = self.group_ambient(&compounds, self.basis.column(c).into_owned());
            out.set_column(c, &self.basis.tr_mul(&img));
        }
        Ok(out)
    }

    /// `ρ(g)v` without forming the full matrix.
    pub fn act(&self, g: &DMatrix<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_unimodular(g)?;
        let compounds = self.compounds(g);
        let img = self.group_ambient(&compounds, self.to_ambient(v));
        Ok(self.from_ambient(&img))
    }

    /// `ρ(exp H)v` for diagonal `H`, optionally rescaled by `e^{−shift}` to
    /// stay in range.
    pub fn act_diag_exp(&self, h: &[f64], v: &DVector<f64>, shift: f64) -> Result<DVector<f64>> {
        check_traceless_diag(h, self.n)?;
        Ok(DVector::from_fn(self.dim(), |i, _| v[i] * (self.weight_value(i, h) - shift).exp()))
    }

    /// `max_λ |λ(H)|` over the weights of the representation.
    pub fn max_weight_value(&self, h: &[f64]) -> f64 {
        (0..self.dim()).map(|i| self.weight_value(i, h).abs()).fold(0.0, f64::max)
    }

    fn compounds(&self, g: &DMatrix<f64>) -> HashMap<usize, DMatrix<f64>> {
        let mut out = HashMap::new();
        for (f, &k) in self.factors.iter().enumerate() {
            out.entry(k).or_insert_with(|| compound(g, &self.wedges[f]));
        }
        out
    }

    fn group_ambient(&self, compounds: &HashMap<usize, DMatrix<f64>>, mut v: DVector<f64>) -> DVector<f64> {
        let dims: Vec<usize> = self.wedges.iter().map(Vec::len).collect();
        for (f, k) in self.factors.iter().enumerate() {
            v = mode_product(&v, &dims, f, &compounds[k]);
        }
        v
    }
}

/// `k`-th compound matrix: entry `(S, T)` is the minor `det g[S, T]`.
fn compound(g: &DMatrix<f64>, subsets: &[u32]) -> DMatrix<f64> {
    let idx: Vec<Vec<usize>> = subsets
        .iter()
        .map(|&m| (0..32).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    let d = subsets.len();
    DMatrix::from_fn(d, d, |r, c| {
        let (rows, cols) = (&idx[r], &idx[c]);
        let k = rows.len();
        DMatrix::from_fn(k, k, |i, j| g[(rows[i], cols[j])]).determinant()
    })
}

/// Applies `m` along tensor mode `f` of `v` (row-major, mode 0 outermost).
fn mode_product(v: &DVector<f64>, dims: &[usize], f: usize, m: &DMatrix<f64>) -> DVector<f64> {
    let d = dims[f];
    let inner: usize = dims[f + 1..].iter().product();
    let outer: usize = dims[..f].iter().product();
    let mut out = DVector::zeros(v.len());
    for o in 0..outer {
        for s in 0..inner {
            for j in 0..d {
                let x = v[(o * d + j) * inner + s];
                if x == 0.0 {
                    continue;
                }
                for i in 0..d {
                    out[(o * d + i) * inner + s] += m[(i, j)] * x;
                }
            }
        }
    }
    out
}
