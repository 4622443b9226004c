use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A subset of the simple restricted roots, as a bitset.
///
/// The Rust API is 0-based (`γ_1` is index 0). Textual and JSON forms list
/// the members 1-based, matching the usual `γ_1, …, γ_r` naming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SimpleSubset(u64);

pub const MAX_RANK: usize = 64;

impl SimpleSubset {
    pub const EMPTY: SimpleSubset = SimpleSubset(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(rank: usize) -> Self {
        if rank >= 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << rank) - 1)
        }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Self(indices.iter().fold(0, |acc, &i| acc | 1 << i))
    }

    pub fn singleton(i: usize) -> Self {
        Self(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 >> i & 1 == 1)
    }

    /// Errors when a member index is not below `rank`.
    pub fn check_rank(self, rank: usize) -> Result<()> {
        match self.iter().find(|&i| i >= rank) {
            Some(index) => Err(Error::IndexOutOfRange { index, rank }),
            None => Ok(()),
        }
    }

    /// All subsets of `{0, …, rank−1}`, in increasing bit order.
    pub fn all(rank: usize) -> impl Iterator<Item = SimpleSubset> {
        assert!(rank < 64, "subset enumeration limited to rank < 64");
        (0..1u64 << rank).map(SimpleSubset)
    }

    /// 1-based member list.
    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Parses a comma-separated 1-based list such as `1,3`; empty means ∅.
    pub fn parse_one_based(s: &str) -> Result<Self> {
        let mut out = Self::EMPTY;
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: usize = part
                .parse()
                .map_err(|_| Error::Parse(format!("`{part}` is not a simple-root index")))?;
            if i == 0 || i > MAX_RANK {
                return Err(Error::Parse(format!("simple-root index {i} out of range (indices are 1-based)")));
            }
            out.insert(i - 1);
        }
        Ok(out)
    }
}

impl fmt::Display for SimpleSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for SimpleSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleSubset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if v.iter().any(|&i| i == 0 || i > MAX_RANK) {
            return Err(serde::de::Error::custom("simple-root indices are 1-based and at most 64"));
        }
        Ok(SimpleSubset(v.iter().fold(0, |acc, &i| acc | 1 << (i - 1))))
    }
}
