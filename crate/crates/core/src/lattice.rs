//! Integer row reduction to Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-style Hermite normal form of an integer matrix.
///
/// Returns the nonzero rows of the reduced matrix: rows are in echelon form,
/// pivots are positive, and entries above each pivot are reduced into
/// `[0, pivot)`. The rows form a ℤ-basis of the row lattice of `rows`.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == m.len() {
            break;
        }
        // gcd-combine everything below into pivot_row
        for r in pivot_row + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let a = m[pivot_row][col].clone();
            let b = m[r][col].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let top: Vec<BigInt> = (0..ncols).map(|j| &x * &m[pivot_row][j] + &y * &m[r][j]).collect();
            let bottom: Vec<BigInt> = (0..ncols).map(|j| &ag * &m[r][j] - &bg * &m[pivot_row][j]).collect();
            m[pivot_row] = top;
            m[r] = bottom;
        }
        if m[pivot_row][col].is_zero() {
            continue;
        }
        if m[pivot_row][col].is_negative() {
            for v in m[pivot_row].iter_mut() {
                *v = -v.clone();
            }
        }
        let p = m[pivot_row][col].clone();
        for r in 0..pivot_row {
            let f = m[r][col].div_floor(&p);
            if !f.is_zero() {
                for j in 0..ncols {
                    let t = &f * &m[pivot_row][j];
                    m[r][j] -= t;
                }
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m
}

/// Least common multiple of the denominators of a rational matrix.
pub fn common_denominator<'a>(entries: impl IntoIterator<Item = &'a crate::rational::Q>) -> BigInt {
    entries
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn reduces_to_canonical_form() {
        let h = hermite_rows(&b(&[&[2, 4], &[3, 6], &[0, 5]]));
        assert_eq!(h, b(&[&[1, 2], &[0, 5]]));
    }

    #[test]
    fn diagonal_lattice() {
        let h = hermite_rows(&b(&[&[2, 2], &[0, 2], &[4, 0]]));
        assert_eq!(h, b(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn rank_deficient() {
        let h = hermite_rows(&b(&[&[1, 1], &[2, 2]]));
        assert_eq!(h, b(&[&[1, 1]]));
    }
}
