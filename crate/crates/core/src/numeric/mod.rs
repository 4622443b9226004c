//! Matrix realizations of irreducible representations of `sl(n, ℝ)` and the
//! numerical checks run in them: K-fixed vectors, Haar averages, Fatou and
//! boundary limits, the affine chart and the horocycle deformation of
//! stabilizers.
//!
//! Elements `H ∈ 𝔞` are traceless diagonal matrices, passed as their diagonal.

mod haar;
mod irrep;
mod jacobi;
mod kfixed;
mod limits;
mod psd;
mod trace;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub use haar::{affine_chart, boundedness_probe, haar_average, haar_so, BoundednessReport, HaarAverage};
pub use irrep::{build_irrep, build_irrep_with, NumericIrrep, MAX_AMBIENT, MAX_IRREP_DIM};
pub use kfixed::{ch_report, k_fixed_vector, m_fixed_check, verify_ch_equivalence, ChReport};
pub use limits::{
    blocks, boundary_limit, fatou_limit, stabilizer_deformation, BoundaryLimit, GeneratorCheck, StabilizerReport,
};
pub use psd::{psd_model_oracle, PsdOracle, Stratum};
pub use trace::{ConvergenceTrace, TracePoint};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Numerical tolerances, kept in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Homomorphism, invariance and fixed-point identities.
    pub algebraic: f64,
    /// Relative singular-value threshold for rank and nullspace decisions.
    pub nullspace: f64,
    /// Projective distance for limit targets.
    pub limit: f64,
    /// Relative agreement for Monte Carlo statistics.
    pub monte_carlo: f64,
    /// `|det g − 1|`, relative to the Hadamard bound of `g`.
    pub det: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-10,
            nullspace: 1e-9,
            limit: 1e-8,
            monte_carlo: 1e-2,
            det: 1e-12,
        }
    }
}

/// Per-task seed derived from a root seed (splitmix64 finalizer), so sweeps
/// can be split across threads without changing results.
pub fn derive_seed(root: u64, task: u64) -> u64 {
    let mut z = root ^ task.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sine of the angle between the lines through `v` and `w`.
///
/// Computed as `‖v̂ − (v̂·ŵ)ŵ‖`, which keeps full relative accuracy for
/// nearly parallel lines, unlike `√(1 − cos²)`.
pub fn projective_distance(v: &DVector<f64>, w: &DVector<f64>) -> f64 {
    let (nv, nw) = (v.norm(), w.norm());
    if nv == 0.0 || nw == 0.0 {
        return f64::NAN;
    }
    let a = v / nv;
    let b = w / nw;
    let c = a.dot(&b);
    (&a - &b * c).norm().min(1.0)
}

/// Random element of `SL(n, ℝ)`: a Gaussian matrix rescaled to determinant
/// one, with its first row negated if the determinant was negative.
pub fn random_sl(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
    let mut d: f64 = g.determinant();
    if d < 0.0 {
        g.row_mut(0).neg_mut();
        d = -d;
    }
    g / d.powf(1.0 / n as f64)
}

/// `steps + 1` equally spaced points from `0` to `tmax`.
pub fn linspace(tmax: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| tmax * i as f64 / steps as f64).collect()
}

fn check_traceless_diag(h: &[f64], n: usize) -> crate::Result<()> {
    if h.len() != n {
        return Err(crate::Error::DimensionMismatch {
            expected: n,
            got: h.len(),
        });
    }
    let scale = h.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tr: f64 = h.iter().sum();
    if tr.abs() > 1e-12 * scale * n as f64 {
        return Err(crate::Error::NotTraceless(format!("diagonal H has trace {tr}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_is_projective() {
        let v = DVector::from_vec(vec![1.0, 0.0]);
        let w = DVector::from_vec(vec![-3.0, 0.0]);
        assert_eq!(projective_distance(&v, &w), 0.0);
        let u = DVector::from_vec(vec![0.0, 2.0]);
        assert!((projective_distance(&v, &u) - 1.0).abs() < 1e-15);
        let eps = 1e-12;
        let x = DVector::from_vec(vec![1.0, eps]);
        assert!((projective_distance(&v, &x) - eps).abs() < 1e-24);
    }

    #[test]
    fn seeds_differ_per_task() {
        assert_ne!(derive_seed(DEFAULT_SEED, 0), derive_seed(DEFAULT_SEED, 1));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }
}
