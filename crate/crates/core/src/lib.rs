//! Restricted root systems, spherical representations and the boundary
//! structure of Satake compactifications, with numerical checks in explicit
//! representations of split `SL(n, ℝ)`.
//!
//! * [`rootsys`]: exact restricted root data, Weyl group, presets.
//! * [`spherical`]: sphericity test, spherical lattice, weight systems.
//! * [`boundary`]: E₀, E₀-connected subsets, saturations, the boundary poset.
//! * [`numeric`]: irreducible representations of `sl(n)` as matrices and the
//!   limit constructions checked in them.

pub mod boundary;
pub mod error;
pub mod lattice;
pub mod numeric;
pub mod rational;
pub mod rootsys;
pub mod spherical;
pub mod subset;

pub use error::{Error, Result};
pub use rootsys::{Basis, RestrictedRootSystem, WeightVector};
pub use subset::SimpleSubset;
