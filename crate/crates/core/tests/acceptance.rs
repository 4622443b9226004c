//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Oracles are computed here, independently of the library code
//! they check.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use satake_core::boundary::{boundary_poset, saturate, saturate_unchecked};
use satake_core::numeric::{
    boundary_limit, boundedness_probe, build_irrep, ch_report, fatou_limit, haar_average, linspace,
    projective_distance, psd_model_oracle, stabilizer_deformation, NumericIrrep, DEFAULT_SEED,
};
use satake_core::rational::q;
use satake_core::rootsys::{presets, TypeLabel};
use satake_core::spherical::{in_spherical_lattice, spherical_lattice_basis, weight_system, weyl_dimension};
use satake_core::{Basis, RestrictedRootSystem, SimpleSubset, WeightVector};

const LIMIT_TOL: f64 = 1e-8;
const ALGEBRAIC_TOL: f64 = 1e-10;
const RATE_REL: f64 = 0.05;

/// Number, name, check and time budget in seconds.
type Criterion = (u32, &'static str, fn() -> Outcome, u64);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn irrep(n: usize, c: &[i64]) -> NumericIrrep {
    build_irrep(n, &WeightVector::fundamental_ints(c)).expect("irrep builds")
}

/// Hook-content style product for `sl(n)`: `∏_{i<j} (λᵢ − λⱼ + j − i)/(j − i)`
/// with `λ` the partition whose column counts are the fundamental
/// coefficients.
fn sl_dimension(c: &[i64]) -> u64 {
    let n = c.len() + 1;
    let lam: Vec<i64> = (0..n).map(|i| c[i.min(c.len())..].iter().sum::<i64>() * (i < c.len()) as i64).collect();
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..n {
        for j in i + 1..n {
            num *= (lam[i] - lam[j] + (j - i) as i64) as u128;
            den *= (j - i) as u128;
        }
    }
    (num / den) as u64
}

fn all_coeffs(rank: usize, max: i64, height: Option<i64>) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| height.is_none_or(|h| v.iter().sum::<i64>() <= h));
    out
}

fn random_sl(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
    let mut d: f64 = g.determinant();
    if d < 0.0 {
        g.row_mut(0).neg_mut();
        d = -d;
    }
    g / d.powf(1.0 / n as f64)
}

fn c1() -> Outcome {
    let mut cases = Vec::new();
    for c in 0..=3 {
        cases.push((2usize, vec![c]));
    }
    for c in all_coeffs(2, 3, None) {
        cases.push((3, c));
    }
    let mut bad = Vec::new();
    for (n, c) in &cases {
        // oracle: on A_{n−1} with m = 1 the condition is that every
        // fundamental coefficient is even
        let expect = c.iter().all(|x| x % 2 == 0);
        match ch_report(*n, &WeightVector::fundamental_ints(c)) {
            Ok(r) if r.holds && r.spherical == expect && r.k_fixed == expect => {}
            Ok(r) => bad.push(format!("({n},{c:?}): {r:?}")),
            Err(e) => bad.push(format!("({n},{c:?}): {e}")),
        }
    }
    outcome(bad.is_empty(), format!("{} cases, failures: {bad:?}", cases.len()))
}

fn c2() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for n in [2usize, 3] {
        let rs = presets::sl_real(n).unwrap();
        let mut c = vec![0i64; n - 1];
        c[0] = 2;
        let p = boundary_poset(&rs, &WeightVector::fundamental_ints(&c)).unwrap();
        let mut dims: Vec<usize> = p.nodes.iter().map(|x| x.orbit_dim.unwrap()).collect();
        dims.sort_unstable_by(|a, b| b.cmp(a));
        let oracle = psd_model_oracle(n).boundary_dims();
        pass &= dims == oracle;
        notes.push(format!("sl{n}: dims {dims:?} oracle {oracle:?}"));
    }
    let expect_counts = [1usize, 2];
    for (i, n) in [2usize, 3].into_iter().enumerate() {
        let rs = presets::sl_real(n).unwrap();
        let mut c = vec![0i64; n - 1];
        c[0] = 2;
        pass &= boundary_poset(&rs, &WeightVector::fundamental_ints(&c)).unwrap().nodes.len() == expect_counts[i];
    }
    // limits: (n, E, H) with H in the open face of E
    let runs: [(usize, &[usize], &[f64]); 3] =
        [(2, &[], &[1.0, -1.0]), (3, &[0], &[1.0, 1.0, -2.0]), (3, &[], &[2.0, 1.0, -3.0])];
    let mut worst: f64 = 0.0;
    for (k, (n, e, h)) in runs.iter().enumerate() {
        let mut c = vec![0i64; n - 1];
        c[0] = 2;
        let rep = irrep(*n, &c);
        let oracle = psd_model_oracle(*n);
        for s in 0..4u64 {
            let g = random_sl(*n, DEFAULT_SEED + 16 * k as u64 + s);
            match boundary_limit(&rep, SimpleSubset::from_indices(e), h, &g, &linspace(4.0, 8)) {
                Ok(bl) => {
                    let target = nalgebra::DVector::from_vec(bl.trace.limit.clone());
                    let expect = oracle.to_rep_vector(&rep, &oracle.limit(&g, h)).unwrap();
                    worst = worst.max(projective_distance(&target, &expect));
                }
                Err(e) => {
                    pass = false;
                    notes.push(format!("boundary_limit failed: {e}"));
                }
            }
        }
    }
    pass &= worst <= LIMIT_TOL;
    notes.push(format!("max target distance {worst:.2e}"));
    outcome(pass, notes.join("; "))
}

fn c3() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for r in [2usize, 3] {
        let rs = presets::sl_real(r + 1).unwrap();
        // 2ρ = 2(ω₁ + … + ω_r)
        let p = boundary_poset(&rs, &WeightVector::fundamental_ints(&vec![2; r])).unwrap();
        let expected = (1usize << r) - 1;
        let decreasing = p.order.iter().all(|e| p.dim_of(e.lower).unwrap() < p.dim_of(e.upper).unwrap());
        // every strict inclusion between nodes lies on some chain
        let mut chains = true;
        for a in &p.nodes {
            for b in &p.nodes {
                if a.e != b.e && a.e.is_subset_of(b.e) {
                    chains &= a.orbit_dim < b.orbit_dim;
                }
            }
        }
        pass &= p.nodes.len() == expected && decreasing && chains;
        notes.push(format!("A{r}: {} nodes (expect {expected})", p.nodes.len()));
    }
    outcome(pass, notes.join("; "))
}

fn c4() -> Outcome {
    let rep = irrep(2, &[2]);
    let tr = fatou_limit(&rep, &[1.0, -1.0], &linspace(5.0, 50)).unwrap();
    let err5 = tr.error_at(5.0).unwrap_or(f64::INFINITY);
    let a = err5 <= 5e-9 && tr.rate_matches(RATE_REL) && tr.predicted_rate == Some(4.0);
    // sl3: e ∝ Σ eᵢ², weights 2εᵢ; gap = 2 min_{i>0}(h₀ − hᵢ)
    let h = [2.0, 1.0, -3.0];
    let gap = (1..3).map(|i| 2.0 * (h[0] - h[i])).fold(f64::INFINITY, f64::min);
    let rep3 = irrep(3, &[2, 0]);
    let tr3 = fatou_limit(&rep3, &h, &linspace(10.0, 40)).unwrap();
    let f3 = tr3.fitted_rate.unwrap_or(f64::NAN);
    let b = (f3 - gap).abs() <= RATE_REL * gap;
    outcome(
        a && b,
        format!(
            "sl2: error(5) = {err5:.3e}, rate {:.4}; sl3: rate {f3:.4} vs gap {gap}",
            tr.fitted_rate.unwrap_or(f64::NAN)
        ),
    )
}

fn c5() -> Outcome {
    const N: usize = 100_000;
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, c) in [(2usize, vec![2i64]), (3, vec![2, 0])] {
        match haar_average(&irrep(n, &c), N, DEFAULT_SEED) {
            Ok(a) => {
                let (cos, cc) = (a.cosine.unwrap_or(0.0), a.c.unwrap_or(0.0));
                pass &= cos >= 0.999 && cc > 0.0;
                notes.push(format!("({n},{c:?}): cosine {cos:.5}, c {cc:.4}"));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("({n},{c:?}): {e}"));
            }
        }
    }
    match haar_average(&irrep(3, &[1, 0]), N, DEFAULT_SEED) {
        Ok(a) => {
            pass &= a.norm <= 3.0 * a.standard_error;
            notes.push(format!("(3,[1,0]): norm {:.2e} vs 3SE {:.2e}", a.norm, 3.0 * a.standard_error));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("(3,[1,0]): {e}"));
        }
    }
    outcome(pass, notes.join("; "))
}

fn c6() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for r in 1..=3usize {
        let rs = RestrictedRootSystem::split(TypeLabel::A, r).unwrap();
        for c in all_coeffs(r, 4, Some(4)) {
            let lambda = WeightVector::fundamental_ints(&c);
            let oracle = sl_dimension(&c);
            let total = weight_system(&rs, &lambda).map(|w| w.total());
            let weyl = weyl_dimension(&rs, &lambda);
            let numeric = build_irrep(r + 1, &lambda).map(|x| x.dim() as u64);
            checked += 1;
            if total.as_ref().ok() != Some(&oracle) || weyl.as_ref().ok() != Some(&oracle) || numeric.as_ref().ok() != Some(&oracle) {
                bad.push(format!("A{r} {c:?}: oracle {oracle}, sum {total:?}, weyl {weyl:?}, numeric {numeric:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} weights, mismatches: {bad:?}"))
}

fn c7() -> Outcome {
    let mut systems = Vec::new();
    for r in 1..=5usize {
        for label in [TypeLabel::A, TypeLabel::B, TypeLabel::C, TypeLabel::D, TypeLabel::BC] {
            if label.admits_rank(r) {
                systems.push(RestrictedRootSystem::split(label, r).unwrap());
            }
        }
    }
    systems.push(RestrictedRootSystem::split(TypeLabel::G, 2).unwrap());
    let mut pairs = 0usize;
    let mut bad = Vec::new();
    for rs in &systems {
        let r = rs.rank();
        let a = rs.cartan();
        let adj = |i: usize, j: usize| i != j && a[i][j] != 0;
        let touches = |x: u64, y: u64| (0..r).any(|i| x >> i & 1 == 1 && (0..r).any(|j| y >> j & 1 == 1 && adj(i, j)));
        // connected components by flood fill over the Cartan matrix
        let comps = |x: u64| {
            let mut left = x;
            let mut out = Vec::new();
            while left != 0 {
                let mut c = left & left.wrapping_neg();
                loop {
                    let grown = c | (0..r).filter(|&j| left >> j & 1 == 1 && touches(c, 1 << j)).fold(0, |m, j| m | 1 << j);
                    if grown == c {
                        break;
                    }
                    c = grown;
                }
                left &= !c;
                out.push(c);
            }
            out
        };
        let full = (1u64 << r) - 1;
        for e0 in 0..=full {
            for e in 0..=full {
                let connected = comps(e).iter().all(|c| c & !e0 != 0);
                let got = saturate(rs, SimpleSubset::from_bits(e), SimpleSubset::from_bits(e0));
                if !connected {
                    if got.is_ok() {
                        bad.push(format!("{} E0={e0:b} E={e:b}: accepted a non-connected E", rs.name()));
                    }
                    continue;
                }
                pairs += 1;
                // admissible extensions D: components inside E₀, none adjacent to E
                let rest = full & !e;
                let mut admissible = Vec::new();
                let mut d = rest;
                loop {
                    if comps(d).iter().all(|c| c & !e0 == 0 && !touches(*c, e)) {
                        admissible.push(e | d);
                    }
                    if d == 0 {
                        break;
                    }
                    d = (d - 1) & rest;
                }
                let maximal: Vec<u64> =
                    admissible.iter().copied().filter(|x| !admissible.iter().any(|y| y != x && x & y == *x)).collect();
                let sat = got.map(|s| s.bits());
                if maximal.len() != 1 || sat != Ok(maximal[0]) {
                    bad.push(format!("{} E0={e0:b} E={e:b}: maximal {maximal:?}, saturate {sat:?}", rs.name()));
                    continue;
                }
                let s = SimpleSubset::from_bits(maximal[0]);
                if saturate_unchecked(rs, s, SimpleSubset::from_bits(e0)) != s {
                    bad.push(format!("{} E0={e0:b} E={e:b}: not idempotent", rs.name()));
                }
            }
        }
    }
    bad.truncate(5);
    outcome(bad.is_empty(), format!("{} systems, {pairs} (E0, E) pairs, failures: {bad:?}", systems.len()))
}

fn c8() -> Outcome {
    let rep = irrep(2, &[2]);
    let id = DMatrix::identity(2, 2);
    let h = [1.0, -1.0];
    // γ(H) = 2, so the deformation decays at 2γ(H) = 4
    let predicted = 2.0 * (h[0] - h[1]);
    let a = stabilizer_deformation(&rep, SimpleSubset::EMPTY, &h, &id, &[(0, 1, 1.0)], &linspace(5.0, 50));
    let (pass_a, note_a) = match a {
        Ok(r) => {
            let f = r.trace.fitted_rate.unwrap_or(f64::NAN);
            ((f - predicted).abs() <= RATE_REL * predicted, format!("sl2 rate {f:.4} vs {predicted}"))
        }
        Err(e) => (false, format!("sl2: {e}")),
    };
    let rep3 = irrep(3, &[2, 0]);
    let th = 0.7f64;
    let m = DMatrix::from_row_slice(3, 3, &[th.cos(), -th.sin(), 0.0, th.sin(), th.cos(), 0.0, 0.0, 0.0, 1.0]);
    let b = stabilizer_deformation(
        &rep3,
        SimpleSubset::from_indices(&[0]),
        &[1.0, 1.0, -2.0],
        &m,
        &[(0, 2, 0.8), (1, 2, -0.3)],
        &linspace(4.0, 40),
    );
    let (pass_b, note_b) = match b {
        Ok(r) => (
            r.max_point_distance() <= ALGEBRAIC_TOL && r.max_component_leak() <= ALGEBRAIC_TOL,
            format!(
                "sl3 E={{1}}: point stabilizer moves ẽ^E by ≤ {:.1e}, B(E') leaks ≤ {:.1e} out of V^E ({} and {} generators)",
                r.max_point_distance(),
                r.max_component_leak(),
                r.point_checks.len(),
                r.component_checks.len()
            ),
        ),
        Err(e) => (false, format!("sl3: {e}")),
    };
    outcome(pass_a && pass_b, format!("{note_a}; {note_b}"))
}

fn c9() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    let mut all: Vec<_> = presets::shipped();
    all.extend(presets::exceptional_entries().iter().map(|e| e.build()));
    for rs in all {
        count += 1;
        match rs {
            Ok(rs) => {
                let meta = rs.meta().expect("shipped presets carry metadata");
                let sum: usize = rs.roots().iter().map(|r| r.multiplicity as usize).sum();
                if meta.dim_g != meta.dim_m + rs.rank() + 2 * sum {
                    bad.push(rs.name());
                }
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    let su21 = presets::su(2, 1).unwrap();
    let basis: Vec<WeightVector> = spherical_lattice_basis(&su21)
        .unwrap()
        .iter()
        .map(|b| su21.to_basis(b, Basis::SimpleRoot).unwrap())
        .collect();
    let lattice_ok = basis == vec![WeightVector::simple_ints(&[2])]
        && (-12..=12).all(|k| {
            let v = WeightVector::simple(vec![q(k) / q(2)]);
            in_spherical_lattice(&su21, &v).unwrap() == (k % 4 == 0)
        });
    outcome(
        bad.is_empty() && lattice_ok,
        format!(
            "{count} presets, identity failures {bad:?}; su(2,1) lattice basis {:?} (simple-root coordinates)",
            basis.iter().map(|b| b.to_string()).collect::<Vec<_>>()
        ),
    )
}

fn c10() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, c) in [(2usize, vec![2i64]), (3, vec![2, 0])] {
        let rep = irrep(n, &c);
        // with one seed, the first 10³ samples of the 10⁴ run are the 10³ run
        let small = boundedness_probe(&rep, 1_000, DEFAULT_SEED);
        let large = boundedness_probe(&rep, 10_000, DEFAULT_SEED);
        match (small, large) {
            (Ok(s), Ok(l)) => {
                let stable = l.max_norm.is_finite() && (l.max_norm - s.max_norm).abs() <= 0.01 * l.max_norm;
                let bound = psd_model_oracle(n).chart_bound();
                let within = l.max_norm <= bound + ALGEBRAIC_TOL;
                pass &= stable && within;
                notes.push(format!(
                    "({n},{c:?}): max {:.6} at 10³, {:.6} at 10⁴, PSD bound {bound:.6}",
                    s.max_norm, l.max_norm
                ));
            }
            (s, l) => {
                pass = false;
                notes.push(format!("({n},{c:?}): {:?} {:?}", s.err(), l.err()));
            }
        }
    }
    outcome(pass, notes.join("; "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "sphericity equivalence sweep", c1, 60),
        (2, "PSD oracle match", c2, 60),
        (3, "regular-weight node count", c3, 60),
        (4, "Fatou limit", c4, 10),
        (5, "Haar average", c5, 60),
        (6, "weight-system consistency", c6, 30),
        (7, "saturation brute force", c7, 30),
        (8, "stabilizer deformation", c8, 10),
        (9, "preset integrity", c9, 1),
        (10, "boundedness", c10, 30),
    ];
    let mut failed = 0;
    for (k, name, f, budget) in criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget);
        let ok = out.pass && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {k:>2} {}: {name} [{:.2}s of {budget}s] {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            out.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
