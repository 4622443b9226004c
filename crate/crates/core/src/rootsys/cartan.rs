//! Cartan matrices of the finite-type labels, Bourbaki numbering, with the
//! convention `A[i][j] = 2 (γ_i | γ_j) / (γ_j | γ_j)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

impl TypeLabel {
    pub const ALL: [TypeLabel; 8] = [
        TypeLabel::A,
        TypeLabel::B,
        TypeLabel::C,
        TypeLabel::D,
        TypeLabel::E,
        TypeLabel::F,
        TypeLabel::G,
        TypeLabel::BC,
    ];

    /// Whether `rank` is admissible for this label.
    pub fn admits_rank(self, rank: usize) -> bool {
        match self {
            TypeLabel::A | TypeLabel::B | TypeLabel::C | TypeLabel::BC => rank >= 1,
            TypeLabel::D => rank >= 2,
            TypeLabel::E => (6..=8).contains(&rank),
            TypeLabel::F => rank == 4,
            TypeLabel::G => rank == 2,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::E => "E",
            TypeLabel::F => "F",
            TypeLabel::G => "G",
            TypeLabel::BC => "BC",
        };
        f.write_str(s)
    }
}

impl FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(TypeLabel::A),
            "B" => Ok(TypeLabel::B),
            "C" => Ok(TypeLabel::C),
            "D" => Ok(TypeLabel::D),
            "E" => Ok(TypeLabel::E),
            "F" => Ok(TypeLabel::F),
            "G" => Ok(TypeLabel::G),
            "BC" => Ok(TypeLabel::BC),
            other => Err(Error::Parse(format!("unknown type label `{other}`"))),
        }
    }
}

/// Cartan matrix for `label` and `rank`. For `BC` this is the matrix of the
/// reduced (type B) system; the doubled roots are tracked separately.
pub fn cartan_matrix(label: TypeLabel, rank: usize) -> Result<Vec<Vec<i64>>> {
    if rank == 0 {
        return Err(Error::EmptySystem);
    }
    if !label.admits_rank(rank) {
        return Err(Error::InvalidType {
            label: label.to_string(),
            rank,
        });
    }
    let r = rank;
    let mut a = vec![vec![0i64; r]; r];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut bond = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match label {
        TypeLabel::A => {
            for i in 0..r.saturating_sub(1) {
                bond(i, i + 1, -1, -1);
            }
        }
        TypeLabel::B | TypeLabel::BC => {
            for i in 0..r.saturating_sub(1) {
                bond(i, i + 1, -1, -1);
            }
            if r >= 2 {
                // γ_{r-1} long, γ_r short
                bond(r - 2, r - 1, -2, -1);
            }
        }
        TypeLabel::C => {
            for i in 0..r.saturating_sub(1) {
                bond(i, i + 1, -1, -1);
            }
            if r >= 2 {
                bond(r - 2, r - 1, -1, -2);
            }
        }
        TypeLabel::D => {
            for i in 0..r.saturating_sub(2) {
                bond(i, i + 1, -1, -1);
            }
            if r >= 3 {
                bond(r - 3, r - 1, -1, -1);
            }
        }
        TypeLabel::E => {
            // 1-3-4-5-6-7-8 with 2 attached to 4
            bond(0, 2, -1, -1);
            bond(1, 3, -1, -1);
            for i in 2..r - 1 {
                bond(i, i + 1, -1, -1);
            }
        }
        TypeLabel::F => {
            bond(0, 1, -1, -1);
            bond(1, 2, -2, -1);
            bond(2, 3, -1, -1);
        }
        TypeLabel::G => {
            // γ_1 short, γ_2 long
            bond(0, 1, -1, -3);
        }
    }
    Ok(a)
}
