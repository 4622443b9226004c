//! One-sided Jacobi (Hestenes) SVD.
//!
//! nalgebra's bidiagonal SVD loses accuracy on some rank-deficient tall
//! matrices (wrong small singular values and non-matching left vectors), which
//! breaks rank decisions at a relative threshold of `1e-9`. Jacobi rotations
//! keep the singular values accurate relative to the largest one.

use nalgebra::{DMatrix, DVector};

pub(crate) struct Svd {
    /// `m × k`; column `j` is `A v_j / σ_j`, or zero when `σ_j = 0`.
    pub u: DMatrix<f64>,
    /// Descending.
    pub singular_values: DVector<f64>,
    /// `k × k` orthogonal, columns are right singular vectors.
    pub v: DMatrix<f64>,
}

pub(crate) fn svd(a: &DMatrix<f64>) -> Svd {
    let (m, k) = a.shape();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(k, k);
    const MAX_SWEEPS: usize = 80;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..k).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut u = DMatrix::zeros(m, k);
    let mut vs = DMatrix::zeros(k, k);
    let mut sv = DVector::zeros(k);
    for (c, &j) in order.iter().enumerate() {
        sv[c] = norms[j];
        if norms[j] > 0.0 {
            u.set_column(c, &(w.column(j) / norms[j]));
        }
        vs.set_column(c, &v.column(j));
    }
    Svd {
        u,
        singular_values: sv,
        v: vs,
    }
}

fn rotate(x: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..x.nrows() {
        let (xp, xq) = (x[(i, p)], x[(i, q)]);
        x[(i, p)] = c * xp - s * xq;
        x[(i, q)] = s * xp + c * xq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_deficient_tall_matrix() {
        // rank 2: third column is the sum of the first two
        let a = DMatrix::from_row_slice(
            5,
            3,
            &[1.0, 0.0, 1.0, 2.0, 1.0, 3.0, 0.0, 1.0, 1.0, -1.0, 2.0, 1.0, 0.5, 0.5, 1.0],
        );
        let s = svd(&a);
        assert!(s.singular_values[2] < 1e-14 * s.singular_values[0]);
        let rec = s.u.columns(0, 2) * DMatrix::from_diagonal(&s.singular_values.rows(0, 2).into_owned()) * s.v.columns(0, 2).transpose();
        assert!((rec - &a).norm() < 1e-13);
        assert!((s.v.tr_mul(&s.v) - DMatrix::identity(3, 3)).norm() < 1e-13);
        assert!((&a * s.v.column(2)).norm() < 1e-13);
        let reference = a.clone().svd(false, false).singular_values;
        assert!((reference[0] - s.singular_values[0]).abs() < 1e-12);
    }
}
