use ince_core::eigensolver::{eigenvector_for, refine_eigenvalue, symmetrize};
use ince_core::verify::oracle_eigenvalues;
use ince_core::{eigen_decompose, Parity, Tier, TridiagonalMatrix};
use proptest::prelude::*;

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

fn matrix(max_n: i64, a: std::ops::RangeInclusive<f64>) -> impl Strategy<Value = TridiagonalMatrix> {
    (parity(), 0..=max_n, a).prop_map(|(p, n, a)| {
        let n = if p == Parity::Even { n.max(1) } else { n };
        TridiagonalMatrix::new(p, n, a).unwrap()
    })
}

fn residual_inf(m: &TridiagonalMatrix, eta: f64, d: &[f64]) -> f64 {
    m.apply(d).iter().zip(d).map(|(md, x)| (md - eta * x).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn couplings_mirror_and_are_positive(m in matrix(15, 0.0..=20.0)) {
        let rev: Vec<f64> = m.sup().iter().rev().cloned().collect();
        prop_assert_eq!(rev.as_slice(), m.sub());
        prop_assert_eq!(m.diag().len(), m.dim());
        prop_assert_eq!(m.sup().len(), m.dim() - 1);
        if m.a() > 0.0 {
            prop_assert!(m.edge_products().iter().all(|&p| p > 0.0));
        }
        let expected_dim = match m.parity() {
            Parity::Even => 2 * m.n() as usize,
            Parity::Odd => 2 * m.n() as usize + 1,
        };
        prop_assert_eq!(m.dim(), expected_dim);
    }

    #[test]
    fn decomposition_invariants(m in matrix(15, 0.0..=12.0), extended in any::<bool>()) {
        let tier = if extended { Tier::Extended } else { Tier::Double };
        let sol = eigen_decompose(&m, tier).unwrap();
        prop_assert_eq!(sol.dim(), m.dim());

        let vals = sol.eigenvalues();
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));

        let sum: f64 = vals.iter().sum();
        let trace = m.trace();
        prop_assert!((sum - trace).abs() <= 1e-9 * trace.abs().max(1.0), "{} vs {}", sum, trace);

        let bound_scale = m.a() * m.dim() as f64;
        for (eta, d) in vals.iter().zip(sol.eigenvectors()) {
            let norm: f64 = d.iter().map(|x| x * x).sum();
            prop_assert!((norm - 1.0).abs() <= 1e-12);
            let r = residual_inf(&m, *eta, d);
            prop_assert!(r <= 1e-10 * (eta.abs() + bound_scale), "residual {:e} at eta {}", r, eta);
            let big = d.iter().cloned().fold(0.0, |acc: f64, x| if x.abs() > acc.abs() { x } else { acc });
            prop_assert!(big > 0.0);
        }
    }

    #[test]
    fn oracle_matches_small_matrices(m in matrix(2, 0.05..=20.0)) {
        prop_assume!(m.dim() <= 5);
        let sol = eigen_decompose(&m, Tier::Extended).unwrap();
        let oracle = oracle_eigenvalues(&m).unwrap();
        for (x, y) in sol.eigenvalues().iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-10, "{} vs {}", x, y);
        }
    }

    #[test]
    fn oracle_matches_up_to_dim_eight(m in matrix(4, 2.0..=20.0)) {
        prop_assume!(m.dim() <= 8);
        let sol = eigen_decompose(&m, Tier::Extended).unwrap();
        let oracle = oracle_eigenvalues(&m).unwrap();
        for (x, y) in sol.eigenvalues().iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-10, "{} vs {}", x, y);
        }
    }

    /// `det(M - eta I) = prod (eta_j - eta)` so its sign at any point is
    /// `(-1)^(eigenvalues below)`. Checked at midpoints of resolvable gaps.
    #[test]
    fn sturm_interlacing(m in matrix(6, 0.1..=12.0)) {
        prop_assume!(m.dim() <= 12);
        let sol = eigen_decompose(&m, Tier::Extended).unwrap();
        let mut asc = sol.eigenvalues().to_vec();
        asc.reverse();
        for (i, w) in asc.windows(2).enumerate() {
            if w[1] - w[0] <= 1e-6 * w[1].abs().max(1.0) {
                continue;
            }
            let mid = 0.5 * (w[0] + w[1]);
            let below = i + 1;
            let expected = if below % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(m.char_poly_scaled(mid).signum(), expected);
        }
    }

    #[test]
    fn symmetrization_preserves_spectrum(m in matrix(8, 0.1..=12.0)) {
        let s = symmetrize(&m).unwrap();
        for (c, p) in s.off.iter().zip(m.edge_products()) {
            prop_assert!((c * c - p).abs() <= 1e-12 * p);
        }
        prop_assert_eq!(s.scaling[0], 1.0);
        prop_assert!(s.scaling.iter().all(|&d| d > 0.0));
    }

    #[test]
    fn refine_and_eigenvector_for_agree(m in matrix(8, 0.5..=12.0), pick in 0usize..100) {
        let sol = eigen_decompose(&m, Tier::Extended).unwrap();
        let k = pick % sol.dim();
        let eta = sol.eigenvalues()[k];
        let gap = sol.eigenvalues().windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
        prop_assume!(gap > 1e-6);
        let refined = refine_eigenvalue(&m, eta + 0.1 * gap.min(1.0)).unwrap();
        prop_assert!((refined - eta).abs() <= 1e-14 * eta.abs().max(1.0));
        let d = eigenvector_for(&m, eta).unwrap();
        for (x, y) in d.iter().zip(sol.eigenvectors()[k].iter()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn extended_tier_eigenvalues_are_distinct() {
    for parity in [Parity::Even, Parity::Odd] {
        for n in 1..=15 {
            for a in [0.5, 1.0, 12.0] {
                let m = TridiagonalMatrix::new(parity, n, a).unwrap();
                let sol = eigen_decompose(&m, Tier::Extended).unwrap();
                assert!(sol.min_relative_gap() > 0.0, "{parity} {n} {a}");
            }
        }
    }
}

#[test]
fn min_gaps_match_high_precision_reference() {
    // 120-digit reference values
    let cases = [
        (Parity::Even, 15, 12.0, 2.06463e-15),
        (Parity::Even, 9, 0.5, 5.5915e-27),
        (Parity::Even, 10, 0.5, 3.01921e-31),
        (Parity::Odd, 10, 0.5, 2.03814e-33),
        (Parity::Odd, 10, 1.0, 1.06439e-27),
        (Parity::Even, 15, 0.5, 7.2995e-54),
    ];
    for (parity, n, a, reference) in cases {
        let m = TridiagonalMatrix::new(parity, n, a).unwrap();
        let gap = eigen_decompose(&m, Tier::Extended).unwrap().min_relative_gap();
        assert!((gap / reference - 1.0).abs() < 1e-4, "{parity} {n} {a}: {gap:e}");
    }
}

#[test]
fn double_and_extended_agree_on_well_separated_spectra() {
    let m = TridiagonalMatrix::even(5, 7.0).unwrap();
    let d = eigen_decompose(&m, Tier::Double).unwrap();
    let e = eigen_decompose(&m, Tier::Extended).unwrap();
    for (x, y) in d.eigenvalues().iter().zip(e.eigenvalues()) {
        assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
    }
}
