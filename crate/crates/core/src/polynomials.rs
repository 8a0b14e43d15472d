//! Complex trigonometric polynomial eigenfunctions `g_n^k(xi|a,±)` (even)
//! and `h_n^k(xi|a,±)` (odd), and the residual of the complex Ince-type
//! equation they solve.
//!
//! Internally the angular variable is `z = xi/2`; the public evaluation
//! functions take `xi`. Odd polynomials carry half-integer harmonics in `xi`
//! and are 4π-periodic.

use std::fmt;

use num_complex::Complex64;

use crate::eigensolver::SpectralSolution;
use crate::error::{Error, Result};
use crate::ince_matrix::Parity;

/// Sign of the spin eigenvalue `±sqrt(1 - n_m^2)`. `Minus` is the complex
/// conjugate of `Plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    /// `s` in `f'' + a sin 2z (f' + s i f) + ...`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            other => Err(Error::InvalidArgument(format!(
                "branch must be 'plus' or 'minus', got '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    parity: Parity,
    branch: Branch,
    n: u32,
    k: usize,
    a: f64,
    eta: f64,
    row_lo: i64,
    coeffs: Vec<f64>,
}

impl TrigPolynomial {
    /// Polynomial built from eigenpair `k` (1-based, descending order) of `sol`.
    pub fn from_solution(sol: &SpectralSolution, k: usize, branch: Branch) -> Result<Self> {
        let eta = sol.eigenvalue(k)?;
        let coeffs = sol.eigenvector(k)?.to_vec();
        Ok(Self {
            parity: sol.parity(),
            branch,
            n: sol.n(),
            k,
            a: sol.a(),
            eta,
            row_lo: sol.row_lo(),
            coeffs,
        })
    }

    /// Polynomial from explicit coefficients over the parity's row range;
    /// `k` is set to 0 (no label).
    pub fn from_parts(
        parity: Parity,
        branch: Branch,
        n: u32,
        a: f64,
        eta: f64,
        coeffs: Vec<f64>,
    ) -> Result<Self> {
        let (row_lo, dim) = match parity {
            Parity::Even => (1 - n as i64, 2 * n as usize),
            Parity::Odd => (-(n as i64), 2 * n as usize + 1),
        };
        if coeffs.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "{parity} n = {n} needs {dim} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { parity, branch, n, k: 0, a, eta, row_lo, coeffs })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn rows(&self) -> impl Iterator<Item = i64> {
        self.row_lo..self.row_lo + self.coeffs.len() as i64
    }

    /// `q = 2n - 1` (even) or `2n` (odd).
    pub fn q(&self) -> f64 {
        match self.parity {
            Parity::Even => 2.0 * self.n as f64 - 1.0,
            Parity::Odd => 2.0 * self.n as f64,
        }
    }

    /// Same polynomial with a different `eta` (the coefficients are kept).
    pub fn with_eta(&self, eta: f64) -> Self {
        Self { eta, ..self.clone() }
    }

    /// Same polynomial on the other branch.
    pub fn with_branch(&self, branch: Branch) -> Self {
        Self { branch, ..self.clone() }
    }

    /// Coefficients multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|d| d * c).collect(), ..self.clone() }
    }

    /// Frequency in `xi` of the harmonic carried by row `r`.
    pub fn frequency(&self, r: i64) -> f64 {
        let half_m = match self.parity {
            Parity::Even => r as f64,
            Parity::Odd => r as f64 + 0.5,
        };
        match self.branch {
            Branch::Plus => -half_m,
            Branch::Minus => half_m,
        }
    }

    /// `(frequency in xi, coefficient)` for each term.
    pub fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rows().zip(&self.coeffs).map(|(r, &d)| (self.frequency(r), d))
    }

    /// `d^order/dxi^order` at `xi`; order 0 is the value.
    pub fn derivative(&self, xi: f64, order: u32) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (w, d) in self.terms() {
            // (i w)^order * d * e^{i w xi}
            let factor = Complex64::new(0.0, w).powu(order);
            sum += factor * d * Complex64::from_polar(1.0, w * xi);
        }
        sum
    }

    pub fn evaluate(&self, xi: f64) -> Complex64 {
        self.derivative(xi, 0)
    }

    /// Value, first and second derivative with respect to `z = xi/2`.
    pub fn jet_z(&self, z: f64) -> [Complex64; 3] {
        let xi = 2.0 * z;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (w, d) in self.terms() {
            let e = Complex64::from_polar(d, w * xi);
            let wz = 2.0 * w;
            out[0] += e;
            out[1] += Complex64::new(0.0, wz) * e;
            out[2] += -(wz * wz) * e;
        }
        out
    }

    /// `f'' + a sin 2z (f' + s i f) + (eta - q a cos 2z) f` at `z`.
    pub fn ode_residual(&self, z: f64) -> Complex64 {
        let [f, df, ddf] = self.jet_z(z);
        let s = self.branch.sign();
        let (sin2z, cos2z) = (2.0 * z).sin_cos();
        ddf + self.a * sin2z * (df + Complex64::new(0.0, s) * f)
            + (self.eta - self.q() * self.a * cos2z) * f
    }

    /// `(r, D_r^2)` in row order.
    pub fn harmonic_strengths(&self) -> Vec<(i64, f64)> {
        self.rows().zip(&self.coeffs).map(|(r, &d)| (r, d * d)).collect()
    }

    /// `sum |D_r|`, a bound on `|p(xi)|`.
    pub fn abs_coefficient_sum(&self) -> f64 {
        self.coeffs.iter().map(|d| d.abs()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{eigen_decompose, Tier};
    use crate::ince_matrix::TridiagonalMatrix;
    use std::f64::consts::PI;

    fn poly(parity: Parity, n: i64, a: f64, k: usize, branch: Branch) -> TrigPolynomial {
        let m = TridiagonalMatrix::new(parity, n, a).unwrap();
        let sol = eigen_decompose(&m, Tier::Double).unwrap();
        TrigPolynomial::from_solution(&sol, k, branch).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn odd_ground_state() {
        let p = poly(Parity::Odd, 0, 3.0, 1, Branch::Plus);
        assert_eq!(p.q(), 0.0);
        assert_eq!(p.evaluate(0.0), Complex64::new(1.0, 0.0));
        assert!(close(p.evaluate(PI), Complex64::new(0.0, -1.0), 1e-15));
        assert!(close(p.derivative(0.0, 1), Complex64::new(0.0, -0.5), 1e-15));
        for z in [0.0, 0.3, 1.7, -2.2] {
            assert!(p.ode_residual(z).norm() < 1e-14);
        }
        assert_eq!(p.harmonic_strengths(), vec![(0, 1.0)]);
    }

    #[test]
    fn even_free_harmonic() {
        let p = poly(Parity::Even, 1, 0.0, 1, Branch::Plus);
        assert_eq!(p.eta(), 4.0);
        for xi in [0.0, 0.4, 2.0] {
            assert!(close(p.evaluate(xi), Complex64::from_polar(1.0, -xi), 1e-15));
        }
        // d/dz of exp(-2iz) is -2i exp(-2iz)
        let z = 0.37;
        let [f, df, _] = p.jet_z(z);
        assert!(close(df, Complex64::new(0.0, -2.0) * f, 1e-15));
    }

    #[test]
    fn q_by_parity() {
        assert_eq!(poly(Parity::Even, 3, 1.0, 1, Branch::Plus).q(), 5.0);
        assert_eq!(poly(Parity::Odd, 3, 1.0, 1, Branch::Plus).q(), 6.0);
    }

    #[test]
    fn minus_is_conjugate() {
        let p = poly(Parity::Odd, 2, 1.5, 3, Branch::Plus);
        let q = p.with_branch(Branch::Minus);
        for xi in [-3.0, 0.1, 2.5, 7.0] {
            assert!(close(q.evaluate(xi), p.evaluate(xi).conj(), 1e-15));
        }
    }

    #[test]
    fn periodicity() {
        let e = poly(Parity::Even, 2, 1.0, 2, Branch::Plus);
        let o = poly(Parity::Odd, 2, 1.0, 2, Branch::Plus);
        for xi in [0.2, 1.1, -2.0] {
            assert!(close(e.evaluate(xi + 2.0 * PI), e.evaluate(xi), 1e-13));
            assert!(close(o.evaluate(xi + 2.0 * PI), -o.evaluate(xi), 1e-13));
            assert!(close(o.evaluate(xi + 4.0 * PI), o.evaluate(xi), 1e-13));
        }
    }

    #[test]
    fn residual_is_linear_in_eta() {
        let p = poly(Parity::Even, 3, 2.0, 2, Branch::Plus);
        let shifted = p.with_eta(p.eta() + 1.0);
        for z in [0.1, 0.9, 2.3] {
            let diff = shifted.ode_residual(z) - p.ode_residual(z);
            assert!(close(diff, p.jet_z(z)[0], 1e-12));
        }
    }

    #[test]
    fn residual_vanishes_on_both_branches() {
        for (parity, n) in [(Parity::Even, 3), (Parity::Odd, 3)] {
            for branch in [Branch::Plus, Branch::Minus] {
                for k in 1..=6 {
                    let p = poly(parity, n, 1.0, k, branch);
                    for j in 0..16 {
                        let z = j as f64 * PI / 16.0;
                        assert!(p.ode_residual(z).norm() < 1e-11, "{parity} {branch} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn from_parts_checks_length() {
        assert!(TrigPolynomial::from_parts(Parity::Even, Branch::Plus, 2, 1.0, 0.0, vec![1.0; 3])
            .is_err());
        let p = TrigPolynomial::from_parts(Parity::Odd, Branch::Plus, 1, 1.0, 0.0, vec![0.0; 3])
            .unwrap();
        assert_eq!(p.rows().collect::<Vec<_>>(), vec![-1, 0, 1]);
    }

    #[test]
    fn branch_parses() {
        assert_eq!("Plus".parse::<Branch>().unwrap(), Branch::Plus);
        assert_eq!("-".parse::<Branch>().unwrap(), Branch::Minus);
        assert!("up".parse::<Branch>().is_err());
    }
}
