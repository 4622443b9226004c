use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{fmt_q, from_json_vec, q, to_json_vec, RationalJson, Q};

/// Coordinate basis of a [`WeightVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    SimpleRoot,
    FundamentalWeight,
}

/// An exact vector of the restricted weight space 𝔞 (identified with its
/// dual through the invariant form).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    pub coords: Vec<Q>,
    pub basis: Basis,
}

impl WeightVector {
    pub fn new(coords: Vec<Q>, basis: Basis) -> Self {
        Self { coords, basis }
    }

    pub fn simple(coords: Vec<Q>) -> Self {
        Self::new(coords, Basis::SimpleRoot)
    }

    pub fn fundamental(coords: Vec<Q>) -> Self {
        Self::new(coords, Basis::FundamentalWeight)
    }

    pub fn simple_ints(coords: &[i64]) -> Self {
        Self::simple(coords.iter().map(|&c| q(c)).collect())
    }

    pub fn fundamental_ints(coords: &[i64]) -> Self {
        Self::fundamental(coords.iter().map(|&c| q(c)).collect())
    }

    pub fn zero(rank: usize, basis: Basis) -> Self {
        Self::new(vec![Q::zero(); rank], basis)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coords.iter().map(|c| c * s).collect(), self.basis)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Q, &Q) -> Q) -> Self {
        assert_eq!(self.basis, other.basis, "weight vectors in different bases");
        assert_eq!(self.dim(), other.dim(), "weight vectors of different rank");
        Self::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
            self.basis,
        )
    }
}

impl Add for &WeightVector {
    type Output = WeightVector;
    fn add(self, rhs: Self) -> WeightVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &WeightVector {
    type Output = WeightVector;
    fn sub(self, rhs: Self) -> WeightVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        WeightVector::new(self.coords.iter().map(|c| -c).collect(), self.basis)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.basis {
            Basis::SimpleRoot => "γ",
            Basis::FundamentalWeight => "ω",
        };
        let parts: Vec<String> = self.coords.iter().map(fmt_q).collect();
        write!(f, "{tag}[{}]", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    coords: Vec<RationalJson>,
    basis: Basis,
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightJson {
            coords: to_json_vec(&self.coords),
            basis: self.basis,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = WeightJson::deserialize(d)?;
        Ok(WeightVector::new(from_json_vec(&raw.coords), raw.basis))
    }
}
