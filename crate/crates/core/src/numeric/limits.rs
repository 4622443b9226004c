use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::irrep::NumericIrrep;
use super::kfixed::{k_fixed_vector, m_fixed_check, sign_matrices};
use super::trace::{ConvergenceTrace, TracePoint};
use super::{check_traceless_diag, projective_distance};
use crate::boundary;
use crate::error::{Error, Result};
use crate::rootsys::{RestrictedRootSystem, TypeLabel};
use crate::subset::SimpleSubset;

/// Noise floor below which projective distances are not used for fitting.
const FIT_FLOOR: f64 = 1e-13;

/// Largest `|λ(tH)|` allowed before grid points are dropped.
const EXP_CAP: f64 = 300.0;

/// Index blocks `{0..n}` cut between `j` and `j+1` whenever `γ_{j+1} ∉ s`.
pub fn blocks(n: usize, s: SimpleSubset) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0]];
    for j in 1..n {
        if s.contains(j - 1) {
            out.last_mut().unwrap().push(j);
        } else {
            out.push(vec![j]);
        }
    }
    out
}

fn split_system(rep: &NumericIrrep) -> Result<RestrictedRootSystem> {
    RestrictedRootSystem::split(TypeLabel::A, rep.n() - 1)
}

fn e0_of(rep: &NumericIrrep) -> SimpleSubset {
    let f = rep.weight_fundamental(0);
    SimpleSubset::from_indices(&f.iter().enumerate().filter(|(_, &c)| c == 0).map(|(i, _)| i).collect::<Vec<_>>())
}

fn scale_of(h: &[f64]) -> f64 {
    h.iter().fold(1.0f64, |m, x| m.max(x.abs()))
}

/// Checks `H ∈ 𝔞(s)⁺`: `γᵢ(H) = 0` for `i ∈ s` and `γᵢ(H) > 0` otherwise.
fn check_face(h: &[f64], s: SimpleSubset) -> Result<()> {
    let eps = 1e-12 * scale_of(h);
    for i in 0..h.len() - 1 {
        let v = h[i] - h[i + 1];
        if s.contains(i) && v.abs() > eps {
            return Err(Error::BadDirection(format!("γ{}(H) = {v} but γ{} ∈ {s}", i + 1, i + 1)));
        }
        if !s.contains(i) && v <= eps {
            return Err(Error::BadDirection(format!(
                "γ{}(H) = {v} ≤ 0: H is not in the open face for {s}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Drops grid points with `t·max|λ(H)| > 300`.
fn capped_grid(rep: &NumericIrrep, h: &[f64], t_grid: &[f64]) -> (Vec<f64>, usize) {
    let m = rep.max_weight_value(h);
    let kept: Vec<f64> = t_grid
        .iter()
        .copied()
        .filter(|&t| m == 0.0 || t.abs() * m <= EXP_CAP)
        .collect();
    let dropped = t_grid.len() - kept.len();
    (kept, dropped)
}

fn scaled(h: &[f64], t: f64) -> Vec<f64> {
    h.iter().map(|x| x * t).collect()
}

/// Indices of basis vectors whose weight is congruent to `Λ` modulo the
/// span of `s`.
fn congruent(rep: &NumericIrrep, s: SimpleSubset) -> Vec<bool> {
    (0..rep.dim())
        .map(|i| {
            rep.depth_coords(i)
                .iter()
                .enumerate()
                .all(|(j, &c)| s.contains(j) || c == 0)
        })
        .collect()
}

fn project(v: &DVector<f64>, mask: &[bool]) -> DVector<f64> {
    DVector::from_fn(v.len(), |i, _| if mask[i] { v[i] } else { 0.0 })
}

/// `e^{−tΛ(H)} ρ(exp tH) e` against the highest-weight component `e_Λ` of
/// the K-fixed vector `e`, with relative error `‖x(t) − e_Λ‖/‖e_Λ‖`.
///
/// `H` must be strictly dominant. The predicted rate is the smallest gap
/// `(Λ − λ)(H)` over weights with `e_λ ≠ 0`.
pub fn fatou_limit(rep: &NumericIrrep, h: &[f64], t_grid: &[f64]) -> Result<ConvergenceTrace> {
    let n = rep.n();
    check_traceless_diag(h, n)?;
    check_face(h, SimpleSubset::EMPTY)?;
    let e = k_fixed_vector(rep)?.ok_or(Error::NoKFixedVector)?;
    let tol = rep.tolerances();
    let top = e[0];
    if top.abs() <= tol.nullspace {
        return Err(Error::Verification("highest-weight component e_Λ of the K-fixed vector vanishes".into()));
    }
    let mut limit = DVector::zeros(rep.dim());
    limit[0] = top;
    if !m_fixed_check(rep, &limit)? {
        return Err(Error::Verification("Fatou limit e_Λ is not M-fixed".into()));
    }
    let lam_h = rep.weight_value(0, h);
    let gap = (1..rep.dim())
        .filter(|&i| e[i].abs() > tol.nullspace)
        .map(|i| lam_h - rep.weight_value(i, h))
        .fold(None, |m: Option<f64>, g| Some(m.map_or(g, |m| m.min(g))));
    let (grid, dropped) = capped_grid(rep, h, t_grid);
    let mut samples = Vec::with_capacity(grid.len());
    for &t in &grid {
        let th = scaled(h, t);
        let x = rep.act_diag_exp(&th, &e, rep.weight_value(0, &th))?;
        samples.push(TracePoint {
            t,
            error: (x - &limit).norm() / top.abs(),
        });
    }
    let mut trace = ConvergenceTrace::new(samples, 0.0, gap, limit.iter().copied().collect());
    trace.dropped = dropped;
    Ok(trace)
}

/// Result of [`boundary_limit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLimit {
    pub e: SimpleSubset,
    /// Projective distance of `ρ(exp tH)ρ(g)e` to the target
    /// `P_{V^E} ρ(g) e`.
    pub trace: ConvergenceTrace,
    /// `m′ ∈ M(E)`: the `E`-blocks of the lower-triangular factor of `g`,
    /// each scaled to determinant 1.
    pub levi: Vec<Vec<f64>>,
    /// Projective distance between the target and `ρ(m′) e^E`, a witness that
    /// the limit lies in `ρ(M(E)) ẽ^E`.
    pub levi_distance: f64,
}

/// Lower-triangular `L` with positive diagonal and orthogonal `Q` such that
/// `g = L Q`.
pub(crate) fn lq(g: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let qr = g.transpose().qr();
    let (mut q, mut r) = (qr.q(), qr.r());
    for i in 0..r.nrows() {
        if r[(i, i)] < 0.0 {
            r.row_mut(i).neg_mut();
            q.column_mut(i).neg_mut();
        }
    }
    (r.transpose(), q.transpose())
}

/// Tracks `ρ(exp tH) ρ(g) e` projectively for `H` in the open face `𝔞(E)⁺`.
pub fn boundary_limit(
    rep: &NumericIrrep,
    e: SimpleSubset,
    h: &[f64],
    g: &DMatrix<f64>,
    t_grid: &[f64],
) -> Result<BoundaryLimit> {
    let n = rep.n();
    let rs = split_system(rep)?;
    e.check_rank(n - 1)?;
    let e0 = e0_of(rep);
    if !boundary::is_e0_connected(&rs, e, e0) {
        return Err(Error::NotE0Connected(format!("{e} (E0 = {e0})")));
    }
    check_traceless_diag(h, n)?;
    check_face(h, e)?;
    let kf = k_fixed_vector(rep)?.ok_or(Error::NoKFixedVector)?;
    let tol = rep.tolerances();
    let w = rep.act(g, &kf)?;
    let mask = congruent(rep, e);
    let target = project(&w, &mask);
    if target.norm() <= tol.nullspace * w.norm() {
        return Err(Error::Verification(format!("ρ(g)e has no component in V^E for E = {e}")));
    }

    let (l, _) = lq(g);
    let mut levi = DMatrix::zeros(n, n);
    for b in blocks(n, e) {
        let sub = DMatrix::from_fn(b.len(), b.len(), |i, j| l[(b[i], b[j])]);
        let s = sub.determinant().powf(-1.0 / b.len() as f64);
        for (i, &bi) in b.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                levi[(bi, bj)] = sub[(i, j)] * s;
            }
        }
    }
    let e_e = project(&kf, &mask);
    let levi_target = rep.act(&levi, &e_e)?;
    let levi_distance = projective_distance(&target, &levi_target);

    let lam_h = rep.weight_value(0, h);
    let gap = (0..rep.dim())
        .filter(|&i| !mask[i] && w[i].abs() > tol.nullspace * w.norm())
        .map(|i| lam_h - rep.weight_value(i, h))
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))));
    let (grid, dropped) = capped_grid(rep, h, t_grid);
    let mut samples = Vec::with_capacity(grid.len());
    for &t in &grid {
        let th = scaled(h, t);
        let v = rep.act_diag_exp(&th, &w, rep.weight_value(0, &th))?;
        samples.push(TracePoint {
            t,
            error: projective_distance(&v, &target),
        });
    }
    let mut trace = ConvergenceTrace::new(samples, FIT_FLOOR, gap, target.iter().copied().collect());
    trace.dropped = dropped;
    Ok(BoundaryLimit {
        e,
        trace,
        levi: to_rows(&levi),
        levi_distance,
    })
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub e: SimpleSubset,
    pub e_prime: SimpleSubset,
    /// `‖conj_t − m·exp(ΣX^γ)‖ / ‖m·exp(ΣX^γ)‖`, with
    /// `conj_t = exp(tH) k_t exp(−tH)`.
    pub trace: ConvergenceTrace,
    /// Largest gap between the stable form of `conj_t` and the literal
    /// product `exp(tH) k_t exp(−tH)` on the grid points with `t ≤ 1`.
    pub direct_discrepancy: f64,
    /// Projective distance between `ρ(mn) ẽ^E` and `ẽ^E`.
    pub limit_distance: f64,
    /// Generators of `M_K(E′) A(E′) N(E′)` and of `M(E″)`: projective
    /// distance by which each moves the boundary point.
    pub point_checks: Vec<GeneratorCheck>,
    /// All generators of `B(E′)`: relative component of `ρ(b) e^E` outside
    /// `V^E`, zero when `b` preserves the boundary component.
    pub component_checks: Vec<GeneratorCheck>,
    /// Generators of `B(E′)` that preserve the component but move the point.
    pub moves_point: Vec<String>,
}

impl StabilizerReport {
    pub fn max_point_distance(&self) -> f64 {
        self.point_checks.iter().map(|c| c.value).fold(self.limit_distance, f64::max)
    }

    pub fn max_component_leak(&self) -> f64 {
        self.component_checks.iter().map(|c| c.value).fold(0.0, f64::max)
    }
}

fn elementary(n: usize, a: usize, b: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(a, b)] = 1.0;
    m
}

fn same_block(bl: &[Vec<usize>], a: usize, b: usize) -> bool {
    bl.iter().any(|x| x.contains(&a) && x.contains(&b))
}

/// `exp(tH) k_t exp(−tH)` for `k_t = m exp Σ e^{−tγ(H)}(X^γ + θX^γ)`,
/// `θX = −Xᵀ`, converging to `m exp ΣX^γ` at rate `2 min γ(H)`.
///
/// `coeffs` lists `(a, b, c)` with `a < b` (0-based) for `X = c E_ab`; the
/// root is `γ = ε_a − ε_b`. `m` must lie in `M_K(E′)`. Also checks that the
/// limit and the generators of the point stabilizer fix `ẽ^E` and that all
/// generators of `B(E′)` preserve the boundary component.
pub fn stabilizer_deformation(
    rep: &NumericIrrep,
    e: SimpleSubset,
    h: &[f64],
    m: &DMatrix<f64>,
    coeffs: &[(usize, usize, f64)],
    t_grid: &[f64],
) -> Result<StabilizerReport> {
    let n = rep.n();
    let tol = rep.tolerances();
    let rs = split_system(rep)?;
    e.check_rank(n - 1)?;
    let e0 = e0_of(rep);
    let e_prime = boundary::saturate(&rs, e, e0)?;
    check_traceless_diag(h, n)?;
    check_face(h, e_prime)?;
    let bl = blocks(n, e_prime);

    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.nrows(),
        });
    }
    let orth = (m.transpose() * m - DMatrix::identity(n, n)).norm();
    let off_block = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !same_block(&bl, a, b))
        .map(|(a, b)| m[(a, b)].abs())
        .fold(0.0, f64::max);
    if orth > tol.algebraic || off_block > tol.algebraic || (m.determinant() - 1.0).abs() > tol.algebraic {
        return Err(Error::BadDirection(format!("m is not in M_K({e_prime})")));
    }

    let mut x = DMatrix::zeros(n, n);
    let mut roots = Vec::new();
    for &(a, b, c) in coeffs {
        if a >= n || b >= n {
            return Err(Error::IndexOutOfRange { index: a.max(b), rank: n });
        }
        let gh = h[a] - h[b];
        if a >= b || gh <= 0.0 {
            return Err(Error::BadDirection(format!(
                "root ε{}−ε{} has γ(H) = {gh}, positive value required",
                a + 1,
                b + 1
            )));
        }
        x[(a, b)] += c;
        if c != 0.0 {
            roots.push((a, b, c, gh));
        }
    }
    let limit = m * x.clone().exp();
    let predicted = roots.iter().map(|r| 2.0 * r.3).reduce(f64::min);

    let stable = |t: f64| -> DMatrix<f64> {
        let mut y = DMatrix::zeros(n, n);
        for &(a, b, c, gh) in &roots {
            y[(a, b)] += c;
            y[(b, a)] -= c * (-2.0 * t * gh).exp();
        }
        m * y.exp()
    };
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut direct_discrepancy: f64 = 0.0;
    let lnorm = limit.norm();
    for &t in t_grid {
        let conj = stable(t);
        samples.push(TracePoint {
            t,
            error: (&conj - &limit).norm() / lnorm,
        });
        if t <= 1.0 {
            let mut y = DMatrix::zeros(n, n);
            for &(a, b, c, gh) in &roots {
                let s = c * (-t * gh).exp();
                y[(a, b)] += s;
                y[(b, a)] -= s;
            }
            let k_t = m * y.exp();
            let d = DMatrix::from_diagonal(&DVector::from_iterator(n, h.iter().map(|v| (t * v).exp())));
            let d_inv = DMatrix::from_diagonal(&DVector::from_iterator(n, h.iter().map(|v| (-t * v).exp())));
            let direct = d * k_t * d_inv;
            direct_discrepancy = direct_discrepancy.max((direct - &conj).norm() / lnorm);
        }
    }
    let trace = ConvergenceTrace::new(samples, FIT_FLOOR, predicted, limit.iter().copied().collect());

    let kf = k_fixed_vector(rep)?.ok_or(Error::NoKFixedVector)?;
    let mask = congruent(rep, e);
    let point = project(&kf, &mask);
    let moved = |g: &DMatrix<f64>| -> Result<f64> { Ok(projective_distance(&rep.act(g, &point)?, &point)) };
    let leak = |g: &DMatrix<f64>| -> Result<f64> {
        let v = rep.act(g, &point)?;
        Ok((&v - project(&v, &mask)).norm() / v.norm())
    };
    let limit_distance = moved(&limit)?;

    let s = 0.7;
    let one = |a: usize| a + 1;
    let mut point_gens: Vec<(String, DMatrix<f64>)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if same_block(&bl, a, b) {
                let r = (elementary(n, a, b) - elementary(n, b, a)) * s;
                point_gens.push((format!("rot({},{})", one(a), one(b)), r.exp()));
            } else {
                let u = DMatrix::identity(n, n) + elementary(n, a, b) * s;
                point_gens.push((format!("n({},{})", one(a), one(b)), u));
            }
        }
    }
    for (i, d) in sign_matrices(n).into_iter().enumerate().skip(1) {
        point_gens.push((format!("sign#{i}"), d));
    }
    for j in 0..n - 1 {
        if e_prime.contains(j) {
            continue;
        }
        let k = (j + 1) as f64;
        let diag = DVector::from_fn(n, |i, _| {
            let v = if i <= j { (n as f64 - k) / n as f64 } else { -k / n as f64 };
            (s * v).exp()
        });
        point_gens.push((format!("a({})", j + 1), DMatrix::from_diagonal(&diag)));
    }
    let e_dprime = e_prime.difference(e);
    for b in blocks(n, e_dprime).into_iter().filter(|b| b.len() > 1) {
        for &a1 in &b {
            for &a2 in &b {
                if a1 != a2 {
                    let u = DMatrix::identity(n, n) + elementary(n, a1, a2) * s;
                    point_gens.push((format!("m''({},{})", one(a1), one(a2)), u));
                }
            }
        }
    }
    let mut levi_gens: Vec<(String, DMatrix<f64>)> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && same_block(&bl, a, b) {
                let u = DMatrix::identity(n, n) + elementary(n, a, b) * s;
                levi_gens.push((format!("u({},{})", one(a), one(b)), u));
                if a < b {
                    let mut diag = DVector::from_element(n, 1.0);
                    diag[a] = s.exp();
                    diag[b] = (-s).exp();
                    levi_gens.push((format!("d({},{})", one(a), one(b)), DMatrix::from_diagonal(&diag)));
                }
            }
        }
    }

    let mut point_checks = Vec::new();
    for (name, g) in &point_gens {
        point_checks.push(GeneratorCheck {
            name: name.clone(),
            value: moved(g)?,
        });
    }
    let mut component_checks = Vec::new();
    let mut moves_point = Vec::new();
    for (name, g) in point_gens.iter().chain(&levi_gens) {
        component_checks.push(GeneratorCheck {
            name: name.clone(),
            value: leak(g)?,
        });
        if moved(g)? > tol.algebraic {
            moves_point.push(name.clone());
        }
    }
    Ok(StabilizerReport {
        e,
        e_prime,
        trace,
        direct_discrepancy,
        limit_distance,
        point_checks,
        component_checks,
        moves_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{build_irrep, linspace};
    use crate::WeightVector;

    fn irrep(n: usize, c: &[i64]) -> NumericIrrep {
        build_irrep(n, &WeightVector::fundamental_ints(c)).unwrap()
    }

    #[test]
    fn block_partition() {
        assert_eq!(blocks(3, SimpleSubset::from_indices(&[0])), vec![vec![0, 1], vec![2]]);
        assert_eq!(blocks(3, SimpleSubset::EMPTY), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(blocks(4, SimpleSubset::from_indices(&[1, 2])), vec![vec![0], vec![1, 2, 3]]);
    }

    #[test]
    fn fatou_sl2_closed_form() {
        let rep = irrep(2, &[2]);
        let tr = fatou_limit(&rep, &[1.0, -1.0], &linspace(5.0, 50)).unwrap();
        assert_eq!(tr.predicted_rate, Some(4.0));
        let err5 = tr.error_at(5.0).unwrap();
        assert!((err5 - (-20f64).exp()).abs() < 1e-15);
        assert!(tr.rate_matches(1e-9));
        // t = 0: ‖e − e_Λ‖/‖e_Λ‖ = 1 for e ∝ e₁² + e₂²
        assert!((tr.error_at(0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fatou_rejects_bad_input() {
        let rep = irrep(2, &[2]);
        assert!(matches!(fatou_limit(&rep, &[-1.0, 1.0], &[0.0]), Err(Error::BadDirection(_))));
        let std = irrep(2, &[1]);
        assert_eq!(fatou_limit(&std, &[1.0, -1.0], &[0.0]).unwrap_err(), Error::NoKFixedVector);
    }

    #[test]
    fn overflow_guard_drops_points() {
        let rep = irrep(2, &[2]);
        let tr = fatou_limit(&rep, &[1.0, -1.0], &[0.0, 100.0, 200.0]).unwrap();
        assert_eq!((tr.samples.len(), tr.dropped), (2, 1));
    }

    #[test]
    fn boundary_limit_identity_in_psd_model() {
        let rep = irrep(3, &[2, 0]);
        let g = DMatrix::identity(3, 3);
        let e1 = SimpleSubset::from_indices(&[0]);
        let bl = boundary_limit(&rep, e1, &[1.0, 1.0, -2.0], &g, &linspace(6.0, 30)).unwrap();
        let target = rep.to_ambient(&DVector::from_vec(bl.trace.limit.clone()));
        let mut expect = DVector::zeros(9);
        expect[rep.ambient_index(&[1, 1]).unwrap()] = 1.0;
        expect[rep.ambient_index(&[2, 2]).unwrap()] = 1.0;
        assert!(projective_distance(&target, &expect) < 1e-12);
        assert!(bl.levi_distance < 1e-12);
        assert!(bl.trace.rate_matches(0.05));
        assert!(matches!(
            boundary_limit(&rep, e1, &[1.0, 0.0, -1.0], &g, &[0.0]),
            Err(Error::BadDirection(_))
        ));
        assert!(matches!(
            boundary_limit(&rep, SimpleSubset::from_indices(&[1]), &[1.0, 0.0, -1.0], &g, &[0.0]),
            Err(Error::NotE0Connected(_))
        ));
    }

    #[test]
    fn stabilizer_sl2() {
        let rep = irrep(2, &[2]);
        let m = DMatrix::identity(2, 2);
        let r = stabilizer_deformation(&rep, SimpleSubset::EMPTY, &[1.0, -1.0], &m, &[(0, 1, 1.0)], &linspace(5.0, 50))
            .unwrap();
        assert_eq!(r.trace.predicted_rate, Some(4.0));
        assert!(r.trace.rate_matches(0.05));
        assert!(r.direct_discrepancy < 1e-12);
        assert!(r.max_point_distance() < 1e-12);
        let flat = stabilizer_deformation(&rep, SimpleSubset::EMPTY, &[1.0, -1.0], &m, &[], &linspace(1.0, 4)).unwrap();
        assert!(flat.trace.samples.iter().all(|p| p.error == 0.0));
    }

    #[test]
    fn stabilizer_sl3_rank_two_point() {
        let rep = irrep(3, &[2, 0]);
        let e = SimpleSubset::from_indices(&[0]);
        let th = 0.4f64;
        let m = DMatrix::from_row_slice(3, 3, &[th.cos(), -th.sin(), 0.0, th.sin(), th.cos(), 0.0, 0.0, 0.0, 1.0]);
        let r = stabilizer_deformation(&rep, e, &[1.0, 1.0, -2.0], &m, &[(0, 2, 0.5), (1, 2, -1.0)], &linspace(3.0, 30))
            .unwrap();
        assert!(r.trace.rate_matches(0.05));
        assert!(r.max_point_distance() < 1e-10, "{:?}", r.point_checks);
        assert!(r.max_component_leak() < 1e-10, "{:?}", r.component_checks);
        assert!(r.moves_point.contains(&"u(1,2)".to_string()));
        assert!(matches!(
            stabilizer_deformation(&rep, e, &[1.0, 1.0, -2.0], &m, &[(0, 1, 1.0)], &[0.0]),
            Err(Error::BadDirection(_))
        ));
    }
}
