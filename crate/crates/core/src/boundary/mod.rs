//! Boundary combinatorics of the compactification attached to a spherical
//! highest weight `Λ`: the set `E₀` of simple roots orthogonal to `Λ`,
//! E₀-connected subsets `E`, their saturations `E′`, parabolic dimensions and
//! the poset of boundary orbits `K·ι_E(X^E)`.
//!
//! Subsets are stored on simple roots. Since `Λ` is dominant, a positive root
//! is orthogonal to `Λ` exactly when its support lies in `E₀`, so nothing is
//! lost by doing so.

mod dot;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, q, Q};
use crate::rootsys::{Basis, RestrictedRootSystem, WeightVector};
use crate::spherical;
use crate::subset::SimpleSubset;

pub use dot::to_dot;

/// Largest rank for which the boundary poset is enumerated (2^r subsets).
pub const MAX_POSET_RANK: usize = 16;

/// Simple roots orthogonal to a dominant `Λ`.
pub fn compute_e0(rs: &RestrictedRootSystem, lambda: &WeightVector) -> Result<SimpleSubset> {
    let c = rs.fundamental_coords(lambda)?;
    if !rs.is_dominant(lambda)? {
        return Err(Error::NotDominant);
    }
    Ok(SimpleSubset::from_indices(
        &c.iter().enumerate().filter(|(_, x)| x.is_zero()).map(|(i, _)| i).collect::<Vec<_>>(),
    ))
}

/// Simple roots outside `e` adjacent to some member of `e`.
pub fn neighbors(rs: &RestrictedRootSystem, e: SimpleSubset) -> SimpleSubset {
    let mut out = SimpleSubset::EMPTY;
    for i in e.iter() {
        for j in 0..rs.rank() {
            if !e.contains(j) && rs.adjacent(i, j) {
                out.insert(j);
            }
        }
    }
    out
}

/// Connected components of `e` in the Dynkin diagram, ordered by smallest
/// member.
pub fn components(rs: &RestrictedRootSystem, e: SimpleSubset) -> Vec<SimpleSubset> {
    let mut left = e;
    let mut out = Vec::new();
    while let Some(start) = left.iter().next() {
        let mut comp = SimpleSubset::singleton(start);
        loop {
            let grown = comp.union(neighbors(rs, comp).intersection(e));
            if grown == comp {
                break;
            }
            comp = grown;
        }
        left = left.difference(comp);
        out.push(comp);
    }
    out
}

/// No component of `e` lies inside `e0`. Vacuously true for `e = ∅`.
pub fn is_e0_connected(rs: &RestrictedRootSystem, e: SimpleSubset, e0: SimpleSubset) -> bool {
    components(rs, e).iter().all(|c| !c.is_subset_of(e0))
}

/// The closure step `E ↦ E ∪ (E₀ \ (E ∪ N(E)))` without the E₀-connectedness
/// check. It is idempotent, and on E₀-connected input it equals [`saturate`].
pub fn saturate_unchecked(rs: &RestrictedRootSystem, e: SimpleSubset, e0: SimpleSubset) -> SimpleSubset {
    e.union(e0.difference(e.union(neighbors(rs, e))))
}

/// The unique maximal `E′ ⊇ E` whose components are those of `E` together
/// with components lying in `E₀`.
pub fn saturate(rs: &RestrictedRootSystem, e: SimpleSubset, e0: SimpleSubset) -> Result<SimpleSubset> {
    e.check_rank(rs.rank())?;
    e0.check_rank(rs.rank())?;
    if !is_e0_connected(rs, e, e0) {
        return Err(Error::NotE0Connected(format!("{e} (E0 = {e0})")));
    }
    Ok(saturate_unchecked(rs, e, e0))
}

/// Dimensions attached to the parabolic subalgebra `𝔟(E)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicDims {
    /// dim 𝔞(E) = r − |E|
    pub a: usize,
    /// dim 𝔞^E = |E|
    pub a_upper: usize,
    /// dim 𝔫(E): multiplicities of positive roots outside span E
    pub n: usize,
    /// dim 𝔫^E: multiplicities of positive roots inside span E
    pub n_upper: usize,
    /// dim 𝔪_K(E) = dim 𝔪 + dim 𝔫^E
    pub m_k: usize,
    pub b: usize,
    /// dim G/B(E) = dim 𝔫(E)
    pub g_over_b: usize,
}

fn split_multiplicity(rs: &RestrictedRootSystem, e: SimpleSubset) -> (usize, usize) {
    let mut inside = 0;
    let mut outside = 0;
    for r in rs.roots() {
        if rs.root_in_span(r, e.bits()) {
            inside += r.multiplicity as usize;
        } else {
            outside += r.multiplicity as usize;
        }
    }
    (inside, outside)
}

pub fn parabolic_dims(rs: &RestrictedRootSystem, e: SimpleSubset) -> Result<ParabolicDims> {
    e.check_rank(rs.rank())?;
    let meta = rs.meta().ok_or(Error::MissingMetadata)?;
    let (n_upper, n) = split_multiplicity(rs, e);
    let r = rs.rank();
    let m_k = meta.dim_m + n_upper;
    let b = meta.dim_m + r + 2 * n_upper + n;
    Ok(ParabolicDims {
        a: r - e.len(),
        a_upper: e.len(),
        n,
        n_upper,
        m_k,
        b,
        g_over_b: meta.dim_g - b,
    })
}

/// The face `𝔞(E)⁺` of the closed positive chamber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceChamber {
    pub subset: SimpleSubset,
    /// Basis of `𝔞(E)`, the common zero space of the roots in `E`, in the
    /// simple-root basis (vectors of `𝔞` identified with weights by the form).
    pub basis: Vec<WeightVector>,
    /// Positive roots `γ ∉ span E`; `𝔞(E)⁺` is cut out by `γ(H) > 0`.
    pub inequalities: Vec<Vec<i64>>,
    /// Interior point with `γᵢ(H) = 1` for `i ∉ E` and `0` for `i ∈ E`.
    pub sample: WeightVector,
    /// `γᵢ(H)` for the sample, one entry per simple root.
    pub sample_values: Vec<i64>,
}

/// `γ(H)` for `H ∈ 𝔞` given as a weight vector.
pub fn root_value(rs: &RestrictedRootSystem, root: &[i64], h: &WeightVector) -> Result<Q> {
    let a = rs.simple_coords(h)?;
    Ok(rs.inner_root(&a, root))
}

pub fn face_chamber(rs: &RestrictedRootSystem, e: SimpleSubset) -> Result<FaceChamber> {
    e.check_rank(rs.rank())?;
    let r = rs.rank();
    if e == SimpleSubset::full(r) {
        return Err(Error::EmptyFace);
    }
    let g_inv = rational::inverse(rs.gram()).expect("gram is positive definite");
    // H with (γ_i | H) = b_i is gram⁻¹ b in simple coordinates
    let solve = |b: &[Q]| WeightVector::simple(rational::mat_vec(&g_inv, b));
    let basis = (0..r)
        .filter(|&i| !e.contains(i))
        .map(|i| {
            let b: Vec<Q> = (0..r).map(|j| q((i == j) as i64)).collect();
            solve(&b)
        })
        .collect();
    let values: Vec<i64> = (0..r).map(|i| (!e.contains(i)) as i64).collect();
    let sample = solve(&values.iter().map(|&v| q(v)).collect::<Vec<_>>());
    let inequalities = rs
        .roots()
        .iter()
        .filter(|root| !rs.root_in_span(root, e.bits()))
        .map(|root| root.coords.clone())
        .collect();
    Ok(FaceChamber {
        subset: e,
        basis,
        inequalities,
        sample,
        sample_values: values,
    })
}

/// Orthogonal projection `Λ^E` of `Λ` onto the span of the roots in `E`.
pub fn lambda_e(rs: &RestrictedRootSystem, lambda: &WeightVector, e: SimpleSubset) -> Result<WeightVector> {
    e.check_rank(rs.rank())?;
    let a = rs.simple_coords(lambda)?;
    let idx: Vec<usize> = e.iter().collect();
    let mut out = vec![Q::zero(); rs.rank()];
    if idx.is_empty() {
        return Ok(WeightVector::simple(out));
    }
    let g = rs.gram();
    let sub: Vec<Vec<Q>> = idx.iter().map(|&i| idx.iter().map(|&j| g[i][j].clone()).collect()).collect();
    let rhs: Vec<Q> = idx.iter().map(|&i| rs.inner_simple(&a, &unit(rs.rank(), i))).collect();
    let y = rational::mat_vec(&rational::inverse(&sub).expect("principal minor of gram"), &rhs);
    for (k, &i) in idx.iter().enumerate() {
        out[i] = y[k].clone();
    }
    Ok(WeightVector::simple(out))
}

fn unit(r: usize, i: usize) -> Vec<Q> {
    (0..r).map(|j| q((i == j) as i64)).collect()
}

/// Stabilizer dimensions of a boundary component, taken at `E′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerDims {
    pub m_k: usize,
    pub a: usize,
    pub n: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub e: SimpleSubset,
    pub e_prime: SimpleSubset,
    /// `E′ \ E`
    pub e_dprime: SimpleSubset,
    /// dim X^E = |E| + Σ_{γ ∈ span E} m(γ)
    pub dim_xe: usize,
    /// dim K·ι_E(X^E); needs real-form metadata.
    pub orbit_dim: Option<usize>,
    pub stab: Option<StabilizerDims>,
}

impl BoundaryComponent {
    pub fn new(rs: &RestrictedRootSystem, e: SimpleSubset, e0: SimpleSubset) -> Result<Self> {
        let e_prime = saturate(rs, e, e0)?;
        let (n_upper, _) = split_multiplicity(rs, e);
        let dim_xe = e.len() + n_upper;
        let (orbit_dim, stab) = match rs.meta() {
            Some(meta) => {
                let p = parabolic_dims(rs, e_prime)?;
                (
                    Some(meta.dim_k - p.m_k + dim_xe),
                    Some(StabilizerDims {
                        m_k: p.m_k,
                        a: p.a,
                        n: p.n,
                        b: p.b,
                    }),
                )
            }
            None => (None, None),
        };
        Ok(Self {
            e,
            e_prime,
            e_dprime: e_prime.difference(e),
            dim_xe,
            orbit_dim,
            stab,
        })
    }
}

/// A closure relation: the orbit of `lower` lies in the closure of the orbit
/// of `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub lower: SimpleSubset,
    pub upper: SimpleSubset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteriorNode {
    pub e: SimpleSubset,
    /// dim X = r + Σ m(γ)
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPoset {
    pub system: String,
    pub highest: WeightVector,
    pub e0: SimpleSubset,
    pub interior: InteriorNode,
    /// Boundary nodes ordered by `(|E|, E)`.
    pub nodes: Vec<BoundaryComponent>,
    /// Hasse diagram of the inclusion order, interior included.
    pub order: Vec<Edge>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl BoundaryPoset {
    pub fn node(&self, e: SimpleSubset) -> Option<&BoundaryComponent> {
        self.nodes.iter().find(|n| n.e == e)
    }

    /// Orbit dimension of a node; the interior reports `dim X`.
    pub fn dim_of(&self, e: SimpleSubset) -> Option<usize> {
        if e == self.interior.e {
            Some(self.interior.dim)
        } else {
            self.node(e).and_then(|n| n.orbit_dim)
        }
    }
}

/// All E₀-connected proper subsets with their data, ordered by inclusion.
///
/// `Λ = 0` gives an empty poset with a warning: the image of `X` is a point.
pub fn boundary_poset(rs: &RestrictedRootSystem, lambda: &WeightVector) -> Result<BoundaryPoset> {
    let r = rs.rank();
    if r > MAX_POSET_RANK {
        return Err(Error::DimensionCap {
            dim: r,
            cap: MAX_POSET_RANK,
        });
    }
    spherical::is_spherical(rs, lambda)?.require()?;
    let highest = rs.to_basis(lambda, Basis::FundamentalWeight)?;
    let full = SimpleSubset::full(r);
    let interior = InteriorNode {
        e: full,
        dim: rs.symmetric_space_dim(),
    };
    if highest.is_zero() {
        return Ok(BoundaryPoset {
            system: rs.name(),
            highest,
            e0: full,
            interior,
            nodes: Vec::new(),
            order: Vec::new(),
            warnings: vec!["Λ = 0: the compactification degenerates to a point; no boundary".into()],
        });
    }
    let e0 = compute_e0(rs, lambda)?;
    let mut subsets: Vec<SimpleSubset> = SimpleSubset::all(r)
        .filter(|&e| e != full && is_e0_connected(rs, e, e0))
        .collect();
    subsets.sort_by_key(|e| (e.len(), *e));
    let nodes = subsets
        .iter()
        .map(|&e| BoundaryComponent::new(rs, e, e0))
        .collect::<Result<Vec<_>>>()?;
    let mut all = subsets.clone();
    all.push(full);
    Ok(BoundaryPoset {
        system: rs.name(),
        highest,
        e0,
        interior,
        nodes,
        order: hasse(&all),
        warnings: Vec::new(),
    })
}

/// Covering pairs of the inclusion order on `sets`.
fn hasse(sets: &[SimpleSubset]) -> Vec<Edge> {
    let mut out = Vec::new();
    for &a in sets {
        for &b in sets {
            if a == b || !a.is_subset_of(b) {
                continue;
            }
            let covered = sets
                .iter()
                .any(|&c| c != a && c != b && a.is_subset_of(c) && c.is_subset_of(b));
            if !covered {
                out.push(Edge { lower: a, upper: b });
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::rootsys::{presets, TypeLabel};

    fn s(ix: &[usize]) -> SimpleSubset {
        SimpleSubset::from_indices(ix)
    }

    #[test]
    fn e0_examples() {
        let a2 = RestrictedRootSystem::split(TypeLabel::A, 2).unwrap();
        let f = WeightVector::fundamental_ints;
        assert_eq!(compute_e0(&a2, &f(&[2, 0])).unwrap(), s(&[1]));
        assert_eq!(compute_e0(&a2, &f(&[2, 2])).unwrap(), SimpleSubset::EMPTY);
        assert_eq!(compute_e0(&a2, &f(&[0, 0])).unwrap(), s(&[0, 1]));
        assert_eq!(compute_e0(&a2, &f(&[-1, 0])), Err(Error::NotDominant));
    }

    #[test]
    fn components_and_connectedness() {
        let a3 = RestrictedRootSystem::split(TypeLabel::A, 3).unwrap();
        assert_eq!(components(&a3, s(&[0, 2])), vec![s(&[0]), s(&[2])]);
        assert!(components(&a3, SimpleSubset::EMPTY).is_empty());
        let a2 = RestrictedRootSystem::split(TypeLabel::A, 2).unwrap();
        assert_eq!(components(&a2, s(&[0, 1])).len(), 1);
        assert!(!is_e0_connected(&a2, s(&[1]), s(&[1])));
        assert!(is_e0_connected(&a2, SimpleSubset::EMPTY, s(&[1])));
        assert!(is_e0_connected(&a2, s(&[0, 1]), s(&[1])));
    }

    #[test]
    fn saturation_examples() {
        let a2 = RestrictedRootSystem::split(TypeLabel::A, 2).unwrap();
        assert_eq!(saturate(&a2, SimpleSubset::EMPTY, s(&[1])).unwrap(), s(&[1]));
        assert_eq!(saturate(&a2, s(&[0]), s(&[1])).unwrap(), s(&[0]));
        assert!(saturate(&a2, s(&[1]), s(&[1])).is_err());
        let a3 = RestrictedRootSystem::split(TypeLabel::A, 3).unwrap();
        assert_eq!(saturate(&a3, s(&[1]), s(&[0, 2])).unwrap(), s(&[1]));
        assert_eq!(saturate(&a3, SimpleSubset::EMPTY, s(&[0, 2])).unwrap(), s(&[0, 2]));
    }

    #[test]
    fn parabolic_dims_sl3() {
        let rs = presets::sl_real(3).unwrap();
        let p = parabolic_dims(&rs, SimpleSubset::EMPTY).unwrap();
        assert_eq!((p.b, p.g_over_b), (5, 3));
        let p = parabolic_dims(&rs, s(&[0])).unwrap();
        assert_eq!((p.n, p.m_k, p.b, p.g_over_b), (2, 1, 6, 2));
        let p = parabolic_dims(&rs, s(&[0, 1])).unwrap();
        assert_eq!(p.g_over_b, 0);
        let bare = RestrictedRootSystem::split(TypeLabel::A, 2).unwrap();
        assert_eq!(parabolic_dims(&bare, SimpleSubset::EMPTY), Err(Error::MissingMetadata));
    }

    #[test]
    fn face_and_projection() {
        let rs = RestrictedRootSystem::split(TypeLabel::A, 2).unwrap();
        let face = face_chamber(&rs, s(&[0])).unwrap();
        assert_eq!(face.basis.len(), 1);
        assert_eq!(root_value(&rs, &[1, 0], &face.sample).unwrap(), q(0));
        assert_eq!(root_value(&rs, &[0, 1], &face.sample).unwrap(), q(1));
        assert_eq!(face.inequalities, vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(face_chamber(&rs, s(&[0, 1])), Err(Error::EmptyFace));

        let lam = WeightVector::fundamental_ints(&[2, 0]);
        assert_eq!(lambda_e(&rs, &lam, s(&[0])).unwrap(), WeightVector::simple_ints(&[1, 0]));
        assert!(lambda_e(&rs, &lam, SimpleSubset::EMPTY).unwrap().is_zero());
        let half = lambda_e(&rs, &WeightVector::fundamental_ints(&[1, 1]), s(&[0])).unwrap();
        assert_eq!(half.coords, vec![frac(1, 2), q(0)]);
    }

    #[test]
    fn poset_sl3() {
        let rs = presets::sl_real(3).unwrap();
        let p = boundary_poset(&rs, &WeightVector::fundamental_ints(&[2, 2])).unwrap();
        let dims: Vec<_> = p.nodes.iter().map(|n| (n.e, n.orbit_dim.unwrap())).collect();
        assert_eq!(dims, vec![(s(&[]), 3), (s(&[0]), 4), (s(&[1]), 4)]);
        assert_eq!(p.interior.dim, 5);
        assert_eq!(p.order.len(), 4);

        let p = boundary_poset(&rs, &WeightVector::fundamental_ints(&[2, 0])).unwrap();
        assert_eq!(p.nodes.len(), 2);
        assert_eq!(p.node(s(&[0])).unwrap().orbit_dim, Some(4));
        let empty = p.node(SimpleSubset::EMPTY).unwrap();
        assert_eq!((empty.e_prime, empty.orbit_dim), (s(&[1]), Some(2)));
    }

    #[test]
    fn poset_degenerate_and_errors() {
        let rs = presets::sl_real(2).unwrap();
        let p = boundary_poset(&rs, &WeightVector::fundamental_ints(&[2])).unwrap();
        assert_eq!(p.nodes.len(), 1);
        assert_eq!(p.nodes[0].orbit_dim, Some(1));
        let z = boundary_poset(&rs, &WeightVector::fundamental_ints(&[0])).unwrap();
        assert!(z.nodes.is_empty() && !z.warnings.is_empty());
        assert!(matches!(
            boundary_poset(&rs, &WeightVector::fundamental_ints(&[1])),
            Err(Error::NotSpherical(_))
        ));
    }

    #[test]
    fn poset_json_round_trip() {
        let rs = presets::sl_real(3).unwrap();
        let p = boundary_poset(&rs, &WeightVector::fundamental_ints(&[2, 0])).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: BoundaryPoset = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
