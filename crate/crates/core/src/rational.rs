//! Exact rational scalars and the small amount of dense linear algebra over ℚ
//! the root-system code needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("`{s}` has zero denominator")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `{num, den}` pair used in every JSON emission of exact values.
///
/// Numerator and denominator are written as JSON integers when they fit in
/// an `i64` and as decimal strings otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalJson(pub Q);

impl Serialize for RationalJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Rational", 2)?;
        match (self.0.numer().to_i64(), self.0.denom().to_i64()) {
            (Some(n), Some(d)) => {
                st.serialize_field("num", &n)?;
                st.serialize_field("den", &d)?;
            }
            _ => {
                st.serialize_field("num", &self.0.numer().to_string())?;
                st.serialize_field("den", &self.0.denom().to_string())?;
            }
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for RationalJson {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Int {
            Num(i64),
            Str(String),
        }
        #[derive(Deserialize)]
        struct Raw {
            num: Int,
            den: Int,
        }
        let raw = Raw::deserialize(deserializer)?;
        let conv = |i: Int| -> std::result::Result<BigInt, D::Error> {
            match i {
                Int::Num(n) => Ok(BigInt::from(n)),
                Int::Str(s) => s.parse().map_err(de::Error::custom),
            }
        };
        let num = conv(raw.num)?;
        let den = conv(raw.den)?;
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(RationalJson(Q::new(num, den)))
    }
}

pub fn to_json_vec(v: &[Q]) -> Vec<RationalJson> {
    v.iter().cloned().map(RationalJson).collect()
}

pub fn from_json_vec(v: &[RationalJson]) -> Vec<Q> {
    v.iter().map(|r| r.0.clone()).collect()
}

/// Dense square matrix over ℚ, row major.
pub type QMatrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn transpose(m: &QMatrix) -> QMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &QMatrix, v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Inverse by Gauss-Jordan elimination; `None` if singular.
pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.len();
    let mut a: QMatrix = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Determinant by fraction-valued elimination.
pub fn determinant(m: &QMatrix) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Q::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

/// Sylvester's criterion on a symmetric matrix.
pub fn is_positive_definite(m: &QMatrix) -> bool {
    (1..=m.len()).all(|k| {
        let minor: QMatrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        determinant(&minor).is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_q(" -4 ").unwrap(), q(-4));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(fmt_q(&frac(-6, 4)), "-3/2");
        assert_eq!(fmt_q(&q(7)), "7");
    }

    #[test]
    fn inverse_and_determinant() {
        let a2 = vec![vec![q(2), q(-1)], vec![q(-1), q(2)]];
        assert_eq!(determinant(&a2), q(3));
        let inv = inverse(&a2).unwrap();
        assert_eq!(inv, vec![vec![frac(2, 3), frac(1, 3)], vec![frac(1, 3), frac(2, 3)]]);
        assert!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
        assert!(is_positive_definite(&a2));
        assert!(!is_positive_definite(&vec![vec![q(2), q(-2)], vec![q(-2), q(2)]]));
    }

    #[test]
    fn json_pairs() {
        let v = vec![frac(1, 2), q(-3)];
        let s = serde_json::to_string(&to_json_vec(&v)).unwrap();
        assert_eq!(s, r#"[{"num":1,"den":2},{"num":-3,"den":1}]"#);
        let back: Vec<RationalJson> = serde_json::from_str(&s).unwrap();
        assert_eq!(from_json_vec(&back), v);
        let big: RationalJson =
            serde_json::from_str(r#"{"num":"123456789012345678901234567891","den":"10"}"#).unwrap();
        assert_eq!(big.0.denom(), &BigInt::from(10));
    }
}
