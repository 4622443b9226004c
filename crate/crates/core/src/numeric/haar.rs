use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::irrep::NumericIrrep;
use super::kfixed::k_fixed_vector;
use crate::error::{Error, Result};
use crate::rootsys::{RestrictedRootSystem, TypeLabel};
use crate::spherical;

/// Haar-random element of `SO(n)`: QR of a Gaussian matrix, columns signed
/// so that `R` has positive diagonal, first column flipped if `det = −1`.
pub fn haar_so<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = a.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaarAverage {
    pub samples: usize,
    pub seed: u64,
    pub average: Vec<f64>,
    pub norm: f64,
    /// Standard error of the mean, as the norm of the per-coordinate errors.
    pub standard_error: f64,
    pub spherical: bool,
    /// `⟨average, e⟩` with `e` the unit K-fixed vector.
    pub c: Option<f64>,
    /// Cosine between the average and `e`.
    pub cosine: Option<f64>,
}

/// Monte Carlo estimate of `∫_K ρ(k)v⁺ dk`.
///
/// Fails with [`Error::NoiseFloor`] when the result contradicts the
/// sphericity test: a spherical weight must give a mean above three standard
/// errors, a non-spherical one a mean within them.
pub fn haar_average(rep: &NumericIrrep, samples: usize, seed: u64) -> Result<HaarAverage> {
    if samples < 2 {
        return Err(Error::Degenerate("at least two samples are needed".into()));
    }
    let n = rep.n();
    let dim = rep.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vplus = rep.highest_vector();
    let mut sum = DVector::<f64>::zeros(dim);
    let mut sumsq = DVector::<f64>::zeros(dim);
    for _ in 0..samples {
        let k = haar_so(n, &mut rng);
        let x = rep.act(&k, &vplus)?;
        sum += &x;
        sumsq += x.component_mul(&x);
    }
    let nf = samples as f64;
    let mean = &sum / nf;
    let var_sum: f64 = (0..dim)
        .map(|i| ((sumsq[i] - nf * mean[i] * mean[i]) / (nf - 1.0)).max(0.0))
        .sum();
    let standard_error = (var_sum / nf).sqrt();
    let norm = mean.norm();

    let rs = RestrictedRootSystem::split(TypeLabel::A, n - 1)?;
    let spherical = spherical::is_spherical(&rs, rep.highest())?.spherical;
    let significant = norm > 3.0 * standard_error;
    if significant != spherical {
        return Err(Error::NoiseFloor {
            norm,
            floor: 3.0 * standard_error,
            spherical,
        });
    }
    let e = k_fixed_vector(rep)?;
    let c = e.as_ref().map(|e| mean.dot(e));
    let cosine = e.as_ref().map(|e| mean.dot(e) / norm);
    Ok(HaarAverage {
        samples,
        seed,
        average: mean.iter().copied().collect(),
        norm,
        standard_error,
        spherical,
        c,
        cosine,
    })
}

/// Chart coordinate `v/⟨v,e⟩·‖e‖² − e`, orthogonal to `e`; the point `ṽ`
/// corresponds to `(e + v′)~`.
pub fn affine_chart(rep: &NumericIrrep, v: &DVector<f64>, e: &DVector<f64>) -> Result<DVector<f64>> {
    let ip = v.dot(e);
    if ip.abs() <= rep.tolerances().algebraic * v.norm() * e.norm() {
        return Err(Error::OutsideChart(ip));
    }
    Ok(v * (e.norm_squared() / ip) - e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub samples: usize,
    pub seed: u64,
    /// Largest chart norm of `ρ(g)e` over all samples.
    pub max_norm: f64,
    /// The same maximum over the first tenth of the samples.
    pub prefix_max: f64,
    /// Limit of the chart norm along the chamber: `tan θ₀` with
    /// `cos θ₀ = ⟨v⁺, e⟩`.
    pub sup_along_chamber: f64,
}

impl BoundednessReport {
    /// `|max − prefix_max| ≤ rel · max`.
    pub fn stable(&self, rel: f64) -> bool {
        (self.max_norm - self.prefix_max).abs() <= rel * self.max_norm
    }
}

/// Largest chart norm of `ρ(k₁ exp(H) k₂)e` over random `k₁, k₂ ∈ SO(n)`
/// and traceless diagonal `H` with `‖H‖ ≤ 50`.
///
/// Asserts `⟨ρ(g)e, e⟩ > 0` on every sample.
pub fn boundedness_probe(rep: &NumericIrrep, samples: usize, seed: u64) -> Result<BoundednessReport> {
    const RADIUS: f64 = 50.0;
    if samples < 10 {
        return Err(Error::Degenerate("at least ten samples are needed".into()));
    }
    let n = rep.n();
    let e = k_fixed_vector(rep)?.ok_or(Error::NoKFixedVector)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_norm: f64 = 0.0;
    let mut prefix_max: f64 = 0.0;
    let prefix = samples / 10;
    for s in 0..samples {
        let k1 = haar_so(n, &mut rng);
        let k2 = haar_so(n, &mut rng);
        let mut h: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mean = h.iter().sum::<f64>() / n as f64;
        h.iter_mut().for_each(|x| *x -= mean);
        let hn = h.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r: f64 = RADIUS * rng.random::<f64>();
        if hn > 0.0 {
            h.iter_mut().for_each(|x| *x *= r / hn);
        }
        let w = rep.act(&k2, &e)?;
        let shift = (0..rep.dim()).map(|i| rep.weight_value(i, &h)).fold(f64::NEG_INFINITY, f64::max);
        let w = rep.act_diag_exp(&h, &w, shift)?;
        let v = rep.act(&k1, &w)?;
        if v.dot(&e) <= 0.0 {
            return Err(Error::Verification(format!("⟨ρ(g)e, e⟩ = {} is not positive", v.dot(&e))));
        }
        let norm = affine_chart(rep, &v, &e)?.norm();
        max_norm = max_norm.max(norm);
        if s < prefix {
            prefix_max = prefix_max.max(norm);
        }
    }
    let c = e[0];
    Ok(BoundednessReport {
        samples,
        seed,
        max_norm,
        prefix_max,
        sup_along_chamber: (1.0 - c * c).max(0.0).sqrt() / c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::build_irrep;
    use crate::WeightVector;

    fn irrep(n: usize, c: &[i64]) -> NumericIrrep {
        build_irrep(n, &WeightVector::fundamental_ints(c)).unwrap()
    }

    #[test]
    fn haar_samples_are_special_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..5 {
            let q = haar_so(n, &mut rng);
            assert!((q.transpose() * &q - DMatrix::identity(n, n)).norm() < 1e-12);
            assert!((q.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_average_is_exact() {
        let rep = irrep(3, &[0, 0]);
        let a = haar_average(&rep, 50, 3).unwrap();
        assert_eq!(a.average, vec![1.0]);
        assert_eq!(a.standard_error, 0.0);
    }

    #[test]
    fn average_aligns_with_k_fixed() {
        let rep = irrep(2, &[2]);
        let a = haar_average(&rep, 4000, 5).unwrap();
        assert!(a.cosine.unwrap() > 0.99);
        assert!(a.c.unwrap() > 0.0);
        // the exact average ⟨v⁺, e⟩ e has norm 1/√2
        assert!((a.norm - 0.5f64.sqrt()).abs() < 0.05);
    }

    #[test]
    fn non_spherical_average_is_noise() {
        let rep = irrep(3, &[1, 0]);
        let a = haar_average(&rep, 4000, 5).unwrap();
        assert!(a.norm <= 3.0 * a.standard_error);
        assert_eq!(a.c, None);
    }

    #[test]
    fn chart_of_base_point_is_zero() {
        let rep = irrep(2, &[2]);
        let e = k_fixed_vector(&rep).unwrap().unwrap();
        assert!(affine_chart(&rep, &e, &e).unwrap().norm() < 1e-15);
        let mut perp = DVector::zeros(3);
        perp[1] = 1.0;
        assert!(matches!(affine_chart(&rep, &perp, &e), Err(Error::OutsideChart(_))));
    }

    #[test]
    fn probe_is_bounded_by_chamber_sup() {
        let rep = irrep(2, &[2]);
        let r = boundedness_probe(&rep, 500, 9).unwrap();
        assert!((r.sup_along_chamber - 1.0).abs() < 1e-12);
        assert!(r.max_norm <= 1.0 + 1e-9);
        assert!(r.max_norm > 0.9);
    }
}
