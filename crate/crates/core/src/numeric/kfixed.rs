use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::irrep::{build_irrep, NumericIrrep};
use super::limits::fatou_limit;
use super::linspace;
use crate::error::{Error, Result};
use crate::rootsys::{RestrictedRootSystem, TypeLabel, WeightVector};
use crate::spherical;

/// Unit vector spanning the joint kernel of `dρ(E_ab − E_ba)`, `a < b`, or
/// `None` if the kernel is zero. The sign makes `⟨e, v⁺⟩ ≥ 0`.
pub fn k_fixed_vector(rep: &NumericIrrep) -> Result<Option<DVector<f64>>> {
    let n = rep.n();
    let dim = rep.dim();
    let mut blocks = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut x = DMatrix::zeros(n, n);
            x[(a, b)] = 1.0;
            x[(b, a)] = -1.0;
            blocks.push(rep.lie_action(&x)?);
        }
    }
    let stacked = DMatrix::from_fn(blocks.len() * dim, dim, |r, c| blocks[r / dim][(r % dim, c)]);
    let svd = super::jacobi::svd(&stacked);
    let s = &svd.singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let tol = rep.tolerances().nullspace;
    let mut null = Vec::new();
    for (i, &x) in s.iter().enumerate() {
        if smax == 0.0 || x < tol * smax {
            null.push(i);
        } else if x < 10.0 * tol * smax {
            return Err(Error::RankAmbiguous {
                ratio: x / smax,
                lo: tol,
                hi: 10.0 * tol,
            });
        }
    }
    match null.len() {
        0 => Ok(None),
        1 => {
            let mut e: DVector<f64> = svd.v.column(null[0]).into_owned();
            e /= e.norm();
            if e[0] < 0.0 {
                e.neg_mut();
            }
            Ok(Some(e))
        }
        k => Err(Error::KFixedDimension(k)),
    }
}

/// The sign-diagonal matrices of determinant 1.
pub(crate) fn sign_matrices(n: usize) -> Vec<DMatrix<f64>> {
    (0..1u32 << n)
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| DMatrix::from_fn(n, n, |i, j| if i != j { 0.0 } else if m >> i & 1 == 1 { -1.0 } else { 1.0 }))
        .collect()
}

/// Whether `ρ(d)v = v` for every sign-diagonal `d` of determinant 1, the
/// group `M` of `SL(n, ℝ)`.
pub fn m_fixed_check(rep: &NumericIrrep, v: &DVector<f64>) -> Result<bool> {
    let tol = rep.tolerances().algebraic * v.norm().max(f64::MIN_POSITIVE);
    for d in sign_matrices(rep.n()) {
        if (rep.act(&d, v)? - v).norm() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChReport {
    pub n: usize,
    pub highest: WeightVector,
    pub dim: usize,
    /// The integrality and dominance test on the split system `A_{n−1}`.
    pub spherical: bool,
    pub k_fixed: bool,
    /// `m_fixed_check` on the Fatou limit `e_Λ`, when a K-fixed vector exists.
    pub m_fixed_limit: Option<bool>,
    pub holds: bool,
}

/// Compares the existence of a K-fixed vector with the integrality test, and
/// checks that the Fatou limit of the K-fixed vector is M-fixed.
pub fn ch_report(n: usize, lambda: &WeightVector) -> Result<ChReport> {
    let rs = RestrictedRootSystem::split(TypeLabel::A, n - 1)?;
    let report = spherical::is_spherical(&rs, lambda)?;
    let rep = build_irrep(n, lambda)?;
    let e = k_fixed_vector(&rep)?;
    let m_fixed_limit = match &e {
        Some(_) => {
            // ρ-like direction (n−1, n−3, …, 1−n) is strictly dominant
            let h: Vec<f64> = (0..n).map(|i| (n as f64 - 1.0) - 2.0 * i as f64).collect();
            let trace = fatou_limit(&rep, &h, &linspace(4.0, 16))?;
            Some(m_fixed_check(&rep, &DVector::from_vec(trace.limit.clone()))?)
        }
        None => None,
    };
    let holds = report.spherical == e.is_some() && m_fixed_limit.unwrap_or(true);
    Ok(ChReport {
        n,
        highest: rep.highest().clone(),
        dim: rep.dim(),
        spherical: report.spherical,
        k_fixed: e.is_some(),
        m_fixed_limit,
        holds,
    })
}

pub fn verify_ch_equivalence(n: usize, lambda: &WeightVector) -> Result<bool> {
    Ok(ch_report(n, lambda)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn irrep(n: usize, c: &[i64]) -> NumericIrrep {
        build_irrep(n, &WeightVector::fundamental_ints(c)).unwrap()
    }

    #[test]
    fn quadratic_form_is_k_fixed() {
        let rep = irrep(3, &[2, 0]);
        let e = k_fixed_vector(&rep).unwrap().unwrap();
        // ambient e_i ⊗ e_i with equal weights, nothing else
        let amb = rep.to_ambient(&e);
        let expect = 1.0 / 3f64.sqrt();
        for i in 0..3 {
            let idx = rep.ambient_index(&[1 << i, 1 << i]).unwrap();
            assert!((amb[idx] - expect).abs() < 1e-12);
        }
        assert!((amb.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn standard_rep_has_no_invariant() {
        assert!(k_fixed_vector(&irrep(3, &[1, 0])).unwrap().is_none());
        assert!(k_fixed_vector(&irrep(3, &[1, 1])).unwrap().is_none());
        let triv = k_fixed_vector(&irrep(4, &[0, 0, 0])).unwrap().unwrap();
        assert_eq!(triv.len(), 1);
    }

    #[test]
    fn m_fixed_examples() {
        let rep = irrep(2, &[2]);
        assert!(m_fixed_check(&rep, &rep.highest_vector()).unwrap());
        let std = irrep(2, &[1]);
        assert!(!m_fixed_check(&std, &std.highest_vector()).unwrap());
        let rep = irrep(3, &[2, 0]);
        let e = k_fixed_vector(&rep).unwrap().unwrap();
        assert!(m_fixed_check(&rep, &e).unwrap());
        assert_eq!(sign_matrices(3).len(), 4);
    }

    #[test]
    fn equivalence_examples() {
        let f = WeightVector::fundamental_ints;
        assert!(verify_ch_equivalence(2, &f(&[1])).unwrap());
        let adj = ch_report(3, &f(&[1, 1])).unwrap();
        assert!(adj.holds && !adj.spherical && !adj.k_fixed);
        let triv = ch_report(3, &f(&[0, 0])).unwrap();
        assert!(triv.holds && triv.k_fixed);
        let sq = ch_report(3, &f(&[2, 2])).unwrap();
        assert_eq!((sq.holds, sq.m_fixed_limit), (true, Some(true)));
    }
}
