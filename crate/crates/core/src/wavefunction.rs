//! Full scalar coefficient functions: plane-wave phase × `exp[-(a/4) cos xi]`
//! × polynomial, plus the Bessel-series view of the prefactor.
//!
//! Units: lengths in `1/k_p`, time as `tau = k_p c t`, momenta in `k_p`.

use num_complex::Complex64;

use crate::bessel;
use crate::error::{Error, Result};
use crate::ince_matrix::Parity;
use crate::physics::PhysicalConfig;
use crate::polynomials::{Branch, TrigPolynomial};

/// Which spinor pair the scalar multiplies: `u_1, u_2` or `u_3, u_4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinorSlot {
    S12,
    S34,
}

impl SpinorSlot {
    pub fn for_branch(branch: Branch) -> Self {
        match branch {
            Branch::Plus => SpinorSlot::S12,
            Branch::Minus => SpinorSlot::S34,
        }
    }
}

/// `p_hat / k_p`: real, or purely imaginary with the given magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PHat {
    Propagating(f64),
    Evanescent(f64),
}

impl PHat {
    /// From the Eq. (24) radicand, `p_hat / k_p = sqrt(radicand) / 2`.
    pub fn from_radicand(radicand: f64) -> Self {
        let m = 0.5 * radicand.abs().sqrt();
        if radicand >= 0.0 {
            PHat::Propagating(m)
        } else {
            PHat::Evanescent(m)
        }
    }
}

/// Refractive index and `k_0 / k_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveGeometry {
    pub n_m: f64,
    pub k0_over_kp: f64,
}

impl WaveGeometry {
    pub fn new(n_m: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&n_m) {
            return Err(Error::InvalidConfig(format!(
                "refractive index must lie in [0, 1), got {n_m}"
            )));
        }
        Ok(Self { n_m, k0_over_kp: 1.0 / (1.0 - n_m * n_m).sqrt() })
    }

    pub fn from_config(cfg: &PhysicalConfig) -> Result<Self> {
        Self::new(cfg.n_m)
    }

    /// `xi = omega0 (t - n_m y / c)`.
    pub fn xi(&self, tau: f64, y: f64) -> f64 {
        self.k0_over_kp * (tau - self.n_m * y)
    }

    /// `x_hat = (k0/k_p)(y - n_m c t)`.
    pub fn x_hat(&self, tau: f64, y: f64) -> f64 {
        self.k0_over_kp * (y - self.n_m * tau)
    }
}

/// `x_hat` for a configuration; see [`WaveGeometry::x_hat`].
pub fn x_hat(tau: f64, y: f64, cfg: &PhysicalConfig) -> Result<f64> {
    Ok(WaveGeometry::from_config(cfg)?.x_hat(tau, y))
}

/// Length in cm from `1/k_p` units.
pub fn length_to_cm(length: f64, kp_per_cm: f64) -> f64 {
    length / kp_per_cm
}

/// `exp(-(a/4) cos xi)`.
pub fn prefactor(a: f64, xi: f64) -> f64 {
    (-(a / 4.0) * xi.cos()).exp()
}

/// Truncation order `ceil(a/2 + 15 sqrt(a/2 + 1))`.
pub fn truncation_order(a: f64) -> usize {
    (a / 2.0 + 15.0 * (a / 2.0 + 1.0).sqrt()).ceil() as usize
}

/// Coefficients `c_l` of `exp(-(a/4) cos xi) = sum_l c_l cos[l (xi - pi)]`:
/// `c_0 = I_0(a/4)`, `c_l = 2 I_l(a/4)`.
pub fn prefactor_series(a: f64, l_max: usize) -> Result<Vec<f64>> {
    if !(a >= 0.0) {
        return Err(Error::InvalidArgument(format!("a must be >= 0, got {a}")));
    }
    let x = a / 4.0;
    let scaled = bessel::scaled_bessel_i_table(l_max, x)?;
    let scale = x.exp();
    Ok(scaled
        .iter()
        .enumerate()
        .map(|(l, v)| if l == 0 { v * scale } else { 2.0 * v * scale })
        .collect())
}

/// Partial sum of the cosine series at `xi`.
pub fn prefactor_partial_sum(coeffs: &[f64], xi: f64) -> f64 {
    let phase = xi - std::f64::consts::PI;
    coeffs.iter().enumerate().map(|(l, c)| c * (l as f64 * phase).cos()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSolution {
    pub polynomial: TrigPolynomial,
    pub spinor_slot: SpinorSlot,
    pub p_hat: PHat,
    /// `n` (even) or `n + 1/2` (odd).
    pub p_x: f64,
    pub p_z: f64,
    pub geometry: WaveGeometry,
}

impl ScalarSolution {
    pub fn new(polynomial: TrigPolynomial, p_hat: PHat, p_z: f64, geometry: WaveGeometry) -> Self {
        let p_x = match polynomial.parity() {
            Parity::Even => polynomial.n() as f64,
            Parity::Odd => polynomial.n() as f64 + 0.5,
        };
        Self {
            spinor_slot: SpinorSlot::for_branch(polynomial.branch()),
            polynomial,
            p_hat,
            p_x,
            p_z,
            geometry,
        }
    }

    /// `Psi` at `(tau, x, y, z)`. An evanescent `p_hat = i|p_hat|` turns the
    /// `x_hat` phase into `exp(-|p_hat| x_hat)`, which grows without bound in
    /// one direction; it is only evaluated when `allow_evanescent` is set.
    pub fn evaluate(
        &self,
        tau: f64,
        x: f64,
        y: f64,
        z: f64,
        allow_evanescent: bool,
    ) -> Result<Complex64> {
        let xi = self.geometry.xi(tau, y);
        let xh = self.geometry.x_hat(tau, y);
        let transverse = Complex64::from_polar(1.0, self.p_x * x + self.p_z * z);
        let along = match self.p_hat {
            PHat::Propagating(p) => Complex64::from_polar(1.0, p * xh),
            PHat::Evanescent(p) => {
                if !allow_evanescent {
                    return Err(Error::EvanescentRejected);
                }
                Complex64::new((-p * xh).exp(), 0.0)
            }
        };
        let a = self.polynomial.a();
        Ok(transverse * along * prefactor(a, xi) * self.polynomial.evaluate(xi))
    }
}

/// Free function form of [`ScalarSolution::evaluate`].
pub fn scalar_wavefunction(
    sol: &ScalarSolution,
    tau: f64,
    x: f64,
    y: f64,
    z: f64,
    allow_evanescent: bool,
) -> Result<Complex64> {
    sol.evaluate(tau, x, y, z, allow_evanescent)
}
