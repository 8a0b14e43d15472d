//! Independent checks: weighted inner products by quadrature and by the
//! Bessel closed form, Parseval normalisation, and a characteristic-polynomial
//! root finder that shares no code with the eigensolver.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bessel;
use crate::eigensolver::SpectralSolution;
use crate::error::{Error, Result};
use crate::ince_matrix::{Parity, TridiagonalMatrix};
use crate::polynomials::{Branch, TrigPolynomial};
use crate::wavefunction::truncation_order;

/// How two eigenfunctions are paired under the weight `exp(-(a/2) cos xi)`.
///
/// The weighted operator of the complex Ince equation is complex-symmetric,
/// not Hermitian, so eigenfunctions of one branch are orthogonal under the
/// bilinear pairing `∫ w p_k p_l` (equivalently, `p_k` paired with the
/// conjugate of its partner on the other branch). The conjugated pairing
/// `∫ w conj(p_k) p_l` is not diagonal for `a > 0`; it is computed for the
/// record and for the positive weighted norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pairing {
    Bilinear,
    Conjugated,
}

/// One weighted inner product over a 2π window of `xi` (odd parity: half of
/// the 4π period), by trapezoid quadrature and by the Bessel closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProductReport {
    pub k: usize,
    pub l: usize,
    pub pairing: Pairing,
    pub quadrature_value: Complex64,
    pub bessel_value: Complex64,
    pub discrepancy: f64,
}

/// Trapezoid points used for polynomials of order `n` at coupling `a`.
pub fn quadrature_points(n: u32, a: f64) -> usize {
    8 * (n as usize + truncation_order(a))
}

fn check_pairing(pk: &TrigPolynomial, pl: &TrigPolynomial) -> Result<()> {
    if pk.parity() != pl.parity()
        || pk.n() != pl.n()
        || pk.a() != pl.a()
        || pk.branch() != pl.branch()
    {
        return Err(Error::InvalidPairing(format!(
            "({} n={} a={} {}) vs ({} n={} a={} {})",
            pk.parity(),
            pk.n(),
            pk.a(),
            pk.branch(),
            pl.parity(),
            pl.n(),
            pl.a(),
            pl.branch()
        )));
    }
    Ok(())
}

fn period(parity: Parity) -> f64 {
    match parity {
        Parity::Even => 2.0 * PI,
        Parity::Odd => 4.0 * PI,
    }
}

/// Quadrature grid and weights (trapezoid, scaled to a 2π window).
fn weighted_grid(parity: Parity, points: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    let h = period(parity) / points as f64;
    let scale = 2.0 * PI / points as f64;
    (0..points)
        .map(|j| {
            let xi = j as f64 * h;
            (xi, scale * (-(a / 2.0) * xi.cos()).exp())
        })
        .unzip()
}

/// Closed form: every product of two harmonics is `e^{i m xi}` with integer
/// `m`, and `∫ e^{-(a/2) cos xi} e^{i m xi} = 2π (-1)^m I_m(a/2)`.
fn bessel_route(pk: &TrigPolynomial, pl: &TrigPolynomial, pairing: Pairing) -> Result<f64> {
    let x = pk.a() / 2.0;
    let dim = pk.coeffs().len().max(pl.coeffs().len());
    let table = bessel::scaled_bessel_i_table(2 * dim + 1, x)?;
    let mut sum = 0.0;
    for (wr, dr) in pk.terms() {
        for (ws, ds) in pl.terms() {
            let m = match pairing {
                Pairing::Bilinear => wr + ws,
                Pairing::Conjugated => ws - wr,
            };
            let m = m.round() as i64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += dr * ds * sign * table[m.unsigned_abs() as usize];
        }
    }
    Ok(2.0 * PI * x.exp() * sum)
}

pub fn weighted_inner_product(
    pk: &TrigPolynomial,
    pl: &TrigPolynomial,
    pairing: Pairing,
) -> Result<InnerProductReport> {
    check_pairing(pk, pl)?;
    let points = quadrature_points(pk.n(), pk.a());
    let (grid, weights) = weighted_grid(pk.parity(), points, pk.a());
    let quadrature: Complex64 = grid
        .iter()
        .zip(&weights)
        .map(|(&xi, &w)| {
            let fk = pk.evaluate(xi);
            let fk = match pairing {
                Pairing::Bilinear => fk,
                Pairing::Conjugated => fk.conj(),
            };
            w * fk * pl.evaluate(xi)
        })
        .sum();
    let bessel_value = Complex64::new(bessel_route(pk, pl, pairing)?, 0.0);
    Ok(InnerProductReport {
        k: pk.k(),
        l: pl.k(),
        pairing,
        quadrature_value: quadrature,
        bessel_value,
        discrepancy: (quadrature - bessel_value).norm(),
    })
}

/// `∫ w |p|^2`, the positive weighted norm (Bessel route).
pub fn weighted_norm(p: &TrigPolynomial) -> Result<f64> {
    bessel_route(p, p, Pairing::Conjugated)
}

/// `(1/2π) ∫ |p|^2` over a 2π window (odd: mean over the 4π period).
pub fn normalization_check(p: &TrigPolynomial) -> f64 {
    let points = 4 * p.coeffs().len() + 4;
    let h = period(p.parity()) / points as f64;
    let sum: f64 = (0..points).map(|j| p.evaluate(j as f64 * h).norm_sqr()).sum();
    sum / points as f64
}

/// Weighted Gram matrices of all eigenfunctions of one solution.
///
/// Entries are compared against `sqrt(N_k N_l)` with `N_k = ∫ w |p_k|^2`,
/// the Cauchy–Schwarz bound for either pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSummary {
    /// `N_k`, Bessel route.
    pub norms: Vec<f64>,
    /// `max |B_kl| / sqrt(N_k N_l)` over `k != l`, bilinear pairing, both routes.
    pub max_off_diagonal: f64,
    /// Same measure for the conjugated pairing.
    pub max_off_diagonal_conjugated: f64,
    /// `max |quad - bessel| / sqrt(N_k N_l)` over all entries of both pairings.
    pub max_route_discrepancy: f64,
}

pub fn gram_summary(sol: &SpectralSolution, branch: Branch) -> Result<GramSummary> {
    let polys: Vec<TrigPolynomial> = (1..=sol.dim())
        .map(|k| TrigPolynomial::from_solution(sol, k, branch))
        .collect::<Result<_>>()?;
    let dim = polys.len();
    let points = quadrature_points(sol.n(), sol.a());
    let (grid, weights) = weighted_grid(sol.parity(), points, sol.a());
    let values: Vec<Vec<Complex64>> =
        polys.iter().map(|p| grid.iter().map(|&xi| p.evaluate(xi)).collect()).collect();
    let norms: Vec<f64> = polys.iter().map(weighted_norm).collect::<Result<_>>()?;

    let mut max_off: f64 = 0.0;
    let mut max_off_conj: f64 = 0.0;
    let mut max_route: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let scale = (norms[i] * norms[j]).sqrt();
            let mut bilinear = Complex64::new(0.0, 0.0);
            let mut conjugated = Complex64::new(0.0, 0.0);
            for ((fi, fj), w) in values[i].iter().zip(&values[j]).zip(&weights) {
                bilinear += w * fi * fj;
                conjugated += w * fi.conj() * fj;
            }
            let b_closed = bessel_route(&polys[i], &polys[j], Pairing::Bilinear)?;
            let c_closed = bessel_route(&polys[i], &polys[j], Pairing::Conjugated)?;
            max_route = max_route
                .max((bilinear - b_closed).norm() / scale)
                .max((conjugated - c_closed).norm() / scale);
            if i != j {
                max_off = max_off.max(bilinear.norm() / scale).max(b_closed.abs() / scale);
                max_off_conj =
                    max_off_conj.max(conjugated.norm() / scale).max(c_closed.abs() / scale);
            }
        }
    }
    Ok(GramSummary {
        norms,
        max_off_diagonal: max_off,
        max_off_diagonal_conjugated: max_off_conj,
        max_route_discrepancy: max_route,
    })
}

/// `max |∫ w p_k q_l| / sqrt(N_k N_l)` between the eigenfunctions of two
/// solutions with equal parity and `a` but different `n` (bilinear pairing,
/// Bessel route). Orthogonality across `n` is not expected; this is a
/// measurement only.
pub fn cross_gram_max(s1: &SpectralSolution, s2: &SpectralSolution, branch: Branch) -> Result<f64> {
    if s1.parity() != s2.parity() || s1.a() != s2.a() {
        return Err(Error::InvalidPairing(format!(
            "cross-n comparison needs equal parity and a: ({} a={}) vs ({} a={})",
            s1.parity(),
            s1.a(),
            s2.parity(),
            s2.a()
        )));
    }
    let polys = |s: &SpectralSolution| -> Result<Vec<TrigPolynomial>> {
        (1..=s.dim()).map(|k| TrigPolynomial::from_solution(s, k, branch)).collect()
    };
    let (p1, p2) = (polys(s1)?, polys(s2)?);
    let n1: Vec<f64> = p1.iter().map(weighted_norm).collect::<Result<_>>()?;
    let n2: Vec<f64> = p2.iter().map(weighted_norm).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (pk, nk) in p1.iter().zip(&n1) {
        for (pl, nl) in p2.iter().zip(&n2) {
            let v = bessel_route(pk, pl, Pairing::Bilinear)?;
            worst = worst.max(v.abs() / (nk * nl).sqrt());
        }
    }
    Ok(worst)
}

/// Largest dimension the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 8;

/// Descending eigenvalues from sign changes of `det(M - eta I)` on a grid,
/// refined by bisection to `1e-12`.
pub fn oracle_eigenvalues(m: &TridiagonalMatrix) -> Result<Vec<f64>> {
    let dim = m.dim();
    if dim > ORACLE_MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "oracle is limited to dimension {ORACLE_MAX_DIM}, got {dim}"
        )));
    }
    if m.a() == 0.0 {
        let mut d = m.diag().to_vec();
        d.sort_by(|x, y| y.total_cmp(x));
        return Ok(d);
    }
    let spread = 2.0 * m.a() * dim as f64;
    let lo = m.diag().iter().cloned().fold(f64::INFINITY, f64::min) - spread;
    let hi = m.diag().iter().cloned().fold(f64::NEG_INFINITY, f64::max) + spread;
    let sign = |eta: f64| m.char_poly_scaled(eta).signum();

    let mut points = 4096;
    let mut roots = Vec::new();
    while points <= 1 << 22 {
        roots.clear();
        let h = (hi - lo) / points as f64;
        let mut left = lo;
        let mut s_left = sign(left);
        for j in 1..=points {
            let right = lo + j as f64 * h;
            let s_right = sign(right);
            if s_right == 0.0 {
                roots.push(right);
            } else if s_left != 0.0 && s_left != s_right {
                roots.push(bisect_sign(&sign, left, right, s_left));
            }
            left = right;
            s_left = s_right;
        }
        if roots.len() == dim {
            roots.reverse();
            return Ok(roots);
        }
        points *= 4;
    }
    Err(Error::OracleFailure { found: roots.len(), expected: dim })
}

fn bisect_sign<F: Fn(f64) -> f64>(sign: &F, mut lo: f64, mut hi: f64, s_lo: f64) -> f64 {
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = sign(mid);
        if s == 0.0 {
            return mid;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{eigen_decompose, Tier};

    fn solve(parity: Parity, n: i64, a: f64) -> SpectralSolution {
        eigen_decompose(&TridiagonalMatrix::new(parity, n, a).unwrap(), Tier::Double).unwrap()
    }

    #[test]
    fn free_field_orthogonality_is_exact() {
        let sol = solve(Parity::Even, 2, 0.0);
        let p1 = TrigPolynomial::from_solution(&sol, 1, Branch::Plus).unwrap();
        let p2 = TrigPolynomial::from_solution(&sol, 2, Branch::Plus).unwrap();
        for pairing in [Pairing::Bilinear, Pairing::Conjugated] {
            let r = weighted_inner_product(&p1, &p2, pairing).unwrap();
            assert_eq!(r.bessel_value, Complex64::new(0.0, 0.0));
            assert!(r.quadrature_value.norm() < 1e-15);
        }
    }

    #[test]
    fn routes_agree_on_diagonal() {
        for parity in [Parity::Even, Parity::Odd] {
            let sol = solve(parity, 3, 2.5);
            let p = TrigPolynomial::from_solution(&sol, 2, Branch::Minus).unwrap();
            let r = weighted_inner_product(&p, &p, Pairing::Conjugated).unwrap();
            assert!(r.bessel_value.re > 0.0);
            assert!(r.discrepancy / r.bessel_value.re < 1e-12);
            assert_eq!(weighted_norm(&p).unwrap(), r.bessel_value.re);
            let b = weighted_inner_product(&p, &p, Pairing::Bilinear).unwrap();
            assert!(b.discrepancy / r.bessel_value.re < 1e-12);
        }
    }

    #[test]
    fn gram_is_diagonal() {
        for parity in [Parity::Even, Parity::Odd] {
            for branch in [Branch::Plus, Branch::Minus] {
                let g = gram_summary(&solve(parity, 3, 1.0), branch).unwrap();
                assert!(g.max_off_diagonal < 1e-12, "{}", g.max_off_diagonal);
                assert!(g.max_route_discrepancy < 1e-12);
                // the conjugated pairing is not orthogonal
                assert!(g.max_off_diagonal_conjugated > 1e-2);
            }
        }
    }

    #[test]
    fn pairing_errors() {
        let a = TrigPolynomial::from_solution(&solve(Parity::Even, 2, 1.0), 1, Branch::Plus).unwrap();
        let b = TrigPolynomial::from_solution(&solve(Parity::Even, 3, 1.0), 1, Branch::Plus).unwrap();
        let pairing = Pairing::Bilinear;
        assert!(matches!(weighted_inner_product(&a, &b, pairing), Err(Error::InvalidPairing(_))));
        assert!(weighted_inner_product(&a, &a.with_branch(Branch::Minus), pairing).is_err());
    }

    #[test]
    fn normalization_examples() {
        let p = TrigPolynomial::from_solution(&solve(Parity::Odd, 0, 4.0), 1, Branch::Plus).unwrap();
        assert_eq!(normalization_check(&p), 1.0);
        let q = TrigPolynomial::from_solution(&solve(Parity::Even, 4, 3.0), 3, Branch::Plus).unwrap();
        assert!((normalization_check(&q) - 1.0).abs() < 1e-12);
        assert!((normalization_check(&q.scaled(2.0)) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_eigenvalues(&TridiagonalMatrix::odd(0, 3.0).unwrap()).unwrap(), vec![1.0]);
        let r = oracle_eigenvalues(&TridiagonalMatrix::even(1, 12.0).unwrap()).unwrap();
        assert!((r[0] - (2.0 + 148f64.sqrt())).abs() < 1e-11);
        assert!((r[1] - (2.0 - 148f64.sqrt())).abs() < 1e-11);
        let m = TridiagonalMatrix::odd(1, 2.0).unwrap();
        let main = eigen_decompose(&m, Tier::Double).unwrap();
        for (x, y) in oracle_eigenvalues(&m).unwrap().iter().zip(main.eigenvalues()) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(oracle_eigenvalues(&TridiagonalMatrix::even(5, 1.0).unwrap()).is_err());
    }

    #[test]
    fn cross_n_is_measured_not_zero() {
        let s = |n| eigen_decompose(&TridiagonalMatrix::even(n, 1.0).unwrap(), Tier::Extended).unwrap();
        let v = cross_gram_max(&s(2), &s(3), Branch::Plus).unwrap();
        // Cauchy–Schwarz caps every entry at 1.
        assert!(v > 1e-3 && v <= 1.0 + 1e-12);
        let same = cross_gram_max(&s(2), &s(2), Branch::Plus).unwrap();
        assert!(same > 0.0 && same <= 1.0 + 1e-12);
        let odd = eigen_decompose(&TridiagonalMatrix::odd(2, 1.0).unwrap(), Tier::Double).unwrap();
        assert!(matches!(cross_gram_max(&s(2), &odd, Branch::Plus), Err(Error::InvalidPairing(_))));
    }
}
