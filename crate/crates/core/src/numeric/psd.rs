//! Independent model of the compactification for `Λ = 2ω₁`: `g ↦ g gᵀ` in
//! symmetric matrices, projectivized. Boundary orbits are the rank strata of
//! positive semidefinite matrices.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::irrep::NumericIrrep;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub rank: usize,
    /// `k(2n − k + 1)/2 − 1`, the dimension of projectivized rank-`k` PSD
    /// matrices.
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsdOracle {
    pub n: usize,
    /// From rank `n` (the interior) down to rank 1.
    pub strata: Vec<Stratum>,
}

pub fn psd_model_oracle(n: usize) -> PsdOracle {
    PsdOracle {
        n,
        strata: (1..=n)
            .rev()
            .map(|k| Stratum {
                rank: k,
                dim: k * (2 * n - k + 1) / 2 - 1,
            })
            .collect(),
    }
}

impl PsdOracle {
    /// Dimensions of the boundary strata (ranks `n − 1` down to 1).
    pub fn boundary_dims(&self) -> Vec<usize> {
        self.strata.iter().skip(1).map(|s| s.dim).collect()
    }

    /// `g gᵀ / tr`.
    pub fn point(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        let s = g * g.transpose();
        let t = s.trace();
        s / t
    }

    /// Limit of `exp(tH) g gᵀ exp(tH)` projectively: the block of `g gᵀ` on
    /// the indices where `H` is maximal.
    pub fn limit(&self, g: &DMatrix<f64>, h: &[f64]) -> DMatrix<f64> {
        let top = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let scale = h.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let keep: Vec<bool> = h.iter().map(|&x| top - x <= 1e-12 * scale).collect();
        let s = g * g.transpose();
        let out = DMatrix::from_fn(self.n, self.n, |i, j| if keep[i] && keep[j] { s[(i, j)] } else { 0.0 });
        let t = out.trace();
        out / t
    }

    /// Largest affine-chart norm: `‖√n S/tr S − I/√n‖ ≤ √(n − 1)` for PSD `S`.
    pub fn chart_bound(&self) -> f64 {
        ((self.n - 1) as f64).sqrt()
    }

    /// The symmetric tensor `Σ S_ij e_i ⊗ e_j` in the coordinates of the
    /// irrep with highest weight `2ω₁`.
    pub fn to_rep_vector(&self, rep: &NumericIrrep, s: &DMatrix<f64>) -> Result<DVector<f64>> {
        if rep.n() != self.n || rep.factors() != [1, 1] {
            return Err(Error::Degenerate("the PSD model needs the irrep with highest weight 2ω₁".into()));
        }
        let mut amb = DVector::zeros(rep.ambient_dim());
        for i in 0..self.n {
            for j in 0..self.n {
                amb[rep.ambient_index(&[1 << i, 1 << j]).expect("basis tensor")] = s[(i, j)];
            }
        }
        Ok(rep.from_ambient(&amb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{build_irrep, k_fixed_vector, projective_distance};
    use crate::WeightVector;

    #[test]
    fn strata_dims() {
        let o = psd_model_oracle(3);
        assert_eq!(o.strata.iter().map(|s| s.dim).collect::<Vec<_>>(), vec![5, 4, 2]);
        assert_eq!(psd_model_oracle(2).boundary_dims(), vec![1]);
    }

    #[test]
    fn orthogonal_maps_to_base_point() {
        let o = psd_model_oracle(3);
        let th = 0.9f64;
        let k = DMatrix::from_row_slice(3, 3, &[th.cos(), 0.0, -th.sin(), 0.0, 1.0, 0.0, th.sin(), 0.0, th.cos()]);
        let p = o.point(&k);
        assert!((p - DMatrix::identity(3, 3) / 3.0).norm() < 1e-15);
        let rep = build_irrep(3, &WeightVector::fundamental_ints(&[2, 0])).unwrap();
        let e = k_fixed_vector(&rep).unwrap().unwrap();
        let id = o.to_rep_vector(&rep, &DMatrix::identity(3, 3)).unwrap();
        assert!(projective_distance(&e, &id) < 1e-12);
    }
}
