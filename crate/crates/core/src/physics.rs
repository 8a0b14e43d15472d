//! Laboratory parameters (laser photon energy, intensity, plasma density)
//! mapped onto the dimensionless model, the Whittaker–Hill parameters, and
//! the momentum spectrum with its gap classification.
//!
//! Two paths are kept side by side: the printed engineering prefactors for
//! `mu0` and `n_ph`, and a first-principles evaluation from SI constants.
//! Their disagreement is reported, not reconciled.

use std::f64::consts::PI;

use crate::eigensolver::SpectralSolution;
use crate::error::{Error, Result};

/// Electron rest energy, eV.
pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.95;
/// `hbar c`, eV cm.
pub const HBAR_C_EV_CM: f64 = 1.973_269_804e-5;
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035_999;

const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;
const ELECTRON_MASS_KG: f64 = 9.109_383_701_5e-31;
const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
const VACUUM_PERMITTIVITY_F_M: f64 = 8.854_187_812_8e-12;
const HBAR_J_S: f64 = 1.054_571_817e-34;

/// Printed prefactor of `mu0 = C sqrt(S) / E_ph`.
pub const MU0_PREFACTOR: f64 = 1.06e-9;
/// Printed prefactor of `n_ph = C S / E_ph` (cm^-3).
pub const PHOTON_DENSITY_PREFACTOR: f64 = 2.08e8;

/// Plasma described either by its plasmon energy or its electron density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plasma {
    EnergyEv(f64),
    DensityPerCm3(f64),
}

/// Raw laboratory inputs; exactly one of the plasma fields must be set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhysicalInputs {
    pub photon_ev: f64,
    pub plasma_ev: Option<f64>,
    pub density_cm3: Option<f64>,
    pub intensity_wcm2: f64,
}

impl PhysicalInputs {
    pub fn plasma(&self) -> Result<Plasma> {
        match (self.plasma_ev, self.density_cm3) {
            (Some(_), Some(_)) => Err(Error::AmbiguousInput),
            (Some(e), None) => Ok(Plasma::EnergyEv(e)),
            (None, Some(n)) => Ok(Plasma::DensityPerCm3(n)),
            (None, None) => Err(Error::InvalidConfig(
                "either the plasma energy or the electron density is required".into(),
            )),
        }
    }
}

/// Electron density (cm^-3) for a plasmon energy (eV), Gaussian `omega_p^2 = 4 pi n e^2 / m`.
pub fn density_from_plasma_energy(plasma_ev: f64) -> f64 {
    ELECTRON_REST_ENERGY_EV * plasma_ev * plasma_ev
        / (4.0 * PI * FINE_STRUCTURE * HBAR_C_EV_CM.powi(3))
}

/// Inverse of [`density_from_plasma_energy`].
pub fn plasma_energy_from_density(density_cm3: f64) -> f64 {
    (density_cm3 * 4.0 * PI * FINE_STRUCTURE * HBAR_C_EV_CM.powi(3) / ELECTRON_REST_ENERGY_EV)
        .sqrt()
}

/// `m*/m = sqrt(1 + mu0^2)`.
pub fn mass_shift(mu0: f64) -> f64 {
    (1.0 + mu0 * mu0).sqrt()
}

/// Quantities evaluated from SI constants, independent of the printed prefactors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstPrinciples {
    /// Peak field `F0 = sqrt(2 I / (eps0 c))`, V/m.
    pub field_v_m: f64,
    pub mu0: f64,
    /// `I0 / (c hbar omega0)`, cm^-3.
    pub photon_density_cm3: f64,
    /// The four forms of `a`: `4 eps A0 / k_p`, `4 e F0 lambda_p / (hbar omega0)`,
    /// `4 sqrt((2mc^2/hbar omega0)(n_ph/n_e))`, `2 mu0 (2mc^2/hbar omega_p)`.
    pub a_forms: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalConfig {
    pub photon_ev: f64,
    pub plasma_ev: f64,
    pub density_cm3: f64,
    pub intensity_wcm2: f64,
    pub n_m: f64,
    /// cm^-1
    pub k0_per_cm: f64,
    /// cm^-1
    pub kp_per_cm: f64,
    pub plasma_wavelength_nm: f64,
    pub mu0: f64,
    /// cm^-3
    pub photon_density_cm3: f64,
    pub a: f64,
    pub mass_shift_ratio: f64,
    pub first_principles: FirstPrinciples,
}

/// Builds the configuration; `a` and `mu0` use the printed prefactors.
pub fn derive_config(inputs: &PhysicalInputs) -> Result<PhysicalConfig> {
    let plasma = inputs.plasma()?;
    let photon_ev = inputs.photon_ev;
    let intensity = inputs.intensity_wcm2;
    positive("photon energy", photon_ev)?;
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "intensity must be finite and >= 0, got {intensity}"
        )));
    }
    let (plasma_ev, density_cm3) = match plasma {
        Plasma::EnergyEv(e) => {
            positive("plasma energy", e)?;
            (e, density_from_plasma_energy(e))
        }
        Plasma::DensityPerCm3(n) => {
            positive("electron density", n)?;
            (plasma_energy_from_density(n), n)
        }
    };
    if photon_ev <= plasma_ev {
        return Err(Error::NotUnderdense { photon_ev, plasma_ev });
    }

    let ratio = plasma_ev / photon_ev;
    let n_m = (1.0 - ratio * ratio).sqrt();
    let k0_per_cm = photon_ev / HBAR_C_EV_CM;
    let kp_per_cm = plasma_ev / HBAR_C_EV_CM;
    let plasma_wavelength_nm = 2.0 * PI / kp_per_cm * 1e7;
    let mu0 = MU0_PREFACTOR * intensity.sqrt() / photon_ev;
    let photon_density_cm3 = PHOTON_DENSITY_PREFACTOR * intensity / photon_ev;
    let a = 2.0 * mu0 * (2.0 * ELECTRON_REST_ENERGY_EV / plasma_ev);

    Ok(PhysicalConfig {
        photon_ev,
        plasma_ev,
        density_cm3,
        intensity_wcm2: intensity,
        n_m,
        k0_per_cm,
        kp_per_cm,
        plasma_wavelength_nm,
        mu0,
        photon_density_cm3,
        a,
        mass_shift_ratio: mass_shift(mu0),
        first_principles: first_principles(photon_ev, plasma_ev, intensity),
    })
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{what} must be finite and > 0, got {v}")))
    }
}

fn first_principles(photon_ev: f64, plasma_ev: f64, intensity_wcm2: f64) -> FirstPrinciples {
    let e = ELEMENTARY_CHARGE_C;
    let c = SPEED_OF_LIGHT_M_S;
    let intensity_w_m2 = intensity_wcm2 * 1e4;
    let field = (2.0 * intensity_w_m2 / (VACUUM_PERMITTIVITY_F_M * c)).sqrt();
    let omega0 = photon_ev * e / HBAR_J_S;
    let omega_p = plasma_ev * e / HBAR_J_S;
    let photon_energy_j = photon_ev * e;
    let mu0 = e * field / (ELECTRON_MASS_KG * c * omega0);
    let photon_density_m3 = intensity_w_m2 / (c * photon_energy_j);
    let rest_energy_j = ELECTRON_MASS_KG * c * c;
    // SI plasma relation omega_p^2 = n e^2 / (eps0 m)
    let density_m3 = VACUUM_PERMITTIVITY_F_M * ELECTRON_MASS_KG * omega_p * omega_p / (e * e);

    // SI vector potential amplitude, V s / m
    let vector_potential = field / omega0;
    let kp = omega_p / c;
    let a_forms = [
        4.0 * (e * vector_potential / HBAR_J_S) / kp,
        4.0 * e * field * (c / omega_p) / photon_energy_j,
        4.0 * (2.0 * rest_energy_j / photon_energy_j * photon_density_m3 / density_m3).sqrt(),
        2.0 * mu0 * (2.0 * rest_energy_j / (plasma_ev * e)),
    ];
    FirstPrinciples {
        field_v_m: field,
        mu0,
        photon_density_cm3: photon_density_m3 * 1e-6,
        a_forms,
    }
}

impl PhysicalConfig {
    pub fn from_inputs(inputs: &PhysicalInputs) -> Result<Self> {
        derive_config(inputs)
    }

    /// `k0 / k_p = 1 / sqrt(1 - n_m^2)`.
    pub fn k0_over_kp(&self) -> f64 {
        self.k0_per_cm / self.kp_per_cm
    }

    /// `K = 2 kappa / k_p = 2 mc^2 / (hbar omega_p)`.
    pub fn kappa_scaled(&self) -> f64 {
        2.0 * ELECTRON_REST_ENERGY_EV / self.plasma_ev
    }

    /// Relative gap between the printed-prefactor and first-principles `mu0`.
    pub fn mu0_discrepancy(&self) -> f64 {
        relative_gap(self.mu0, self.first_principles.mu0)
    }

    /// Relative gap between the printed-prefactor and first-principles `a`.
    pub fn a_discrepancy(&self) -> f64 {
        relative_gap(self.a, self.first_principles.a_forms[3])
    }

    pub fn photon_density_discrepancy(&self) -> f64 {
        relative_gap(self.photon_density_cm3, self.first_principles.photon_density_cm3)
    }
}

fn relative_gap(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        (x - y).abs() / x.abs().max(y.abs())
    }
}

/// Momentum parameters in units of `k_p`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Momenta {
    pub p_hat: f64,
    pub p_x: f64,
    pub p_z: f64,
}

/// `theta_0, theta_1, theta_2` and `G_1` of the spinor Whittaker–Hill
/// system, for an electron on the positive-energy branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerHill {
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub g1: f64,
}

impl WhittakerHill {
    /// From `a` and `kappa / k_p` directly.
    pub fn from_scaled(a: f64, kappa_over_kp: f64, p: &Momenta) -> Self {
        let a_quarter = a / 4.0;
        let perp_sq = p.p_x * p.p_x + p.p_z * p.p_z;
        Self {
            theta0: 4.0
                * (p.p_hat * p.p_hat
                    + perp_sq
                    + kappa_over_kp * kappa_over_kp
                    + 0.5 * a_quarter * a_quarter),
            theta1: -p.p_x * a,
            theta2: a_quarter * a_quarter,
            g1: a / 2.0,
        }
    }

    /// `theta_0 + 2 theta_2`, the eigenvalue the momenta correspond to.
    pub fn eta(&self) -> f64 {
        self.theta0 + 2.0 * self.theta2
    }
}

pub fn whittaker_hill_params(cfg: &PhysicalConfig, p: &Momenta) -> WhittakerHill {
    WhittakerHill::from_scaled(cfg.a, cfg.kappa_scaled() / 2.0, p)
}

/// `eta = 4 [p_hat^2 + p_perp^2 + kappa^2 + (a/4)^2]` in `k_p` units.
pub fn eta_from_momenta(a: f64, kappa_over_kp: f64, p: &Momenta) -> f64 {
    let perp_sq = p.p_x * p.p_x + p.p_z * p.p_z;
    4.0 * (p.p_hat * p.p_hat + perp_sq + kappa_over_kp * kappa_over_kp + (a / 4.0).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PHatKind {
    Propagating,
    Evanescent,
}

/// One eigenvalue classified through the mass-shell relations. Magnitudes
/// are stored; both signs are physical (see [`MomentumRecord::signed`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumRecord {
    pub k: usize,
    pub eta: f64,
    /// `eta - (q+1)^2 - P_z^2 - K^2 - (a/2)^2`.
    pub p_hat_sq_scaled: f64,
    /// `|p_hat| / k_p = sqrt(|radicand|) / 2`.
    pub p_hat: f64,
    pub p_hat_kind: PHatKind,
    /// `|2 p_xi / k_p^2| = sqrt(|eta - a^2/4|)`; only meaningful when not a gap state.
    pub p_xi_scaled: f64,
    pub gap: bool,
}

impl MomentumRecord {
    /// `p_xi_scaled`, or `None` for a gap state.
    pub fn p_xi(&self) -> Option<f64> {
        (!self.gap).then_some(self.p_xi_scaled)
    }

    /// The `+` and `-` branches of `(p_hat, p_xi)`.
    pub fn signed(&self) -> [(f64, Option<f64>); 2] {
        let p_xi = self.p_xi();
        [(self.p_hat, p_xi), (-self.p_hat, p_xi.map(|v| -v))]
    }
}

/// Gap threshold `a^2 / 4`.
pub fn gap_threshold(a: f64) -> f64 {
    a * a / 4.0
}

/// Classification of a single eigenvalue.
pub fn classify(eta: f64, a: f64, q: f64, p_z: f64, kappa_scaled: f64) -> MomentumRecord {
    let radicand =
        eta - (q + 1.0).powi(2) - p_z * p_z - kappa_scaled * kappa_scaled - (a / 2.0).powi(2);
    let xi_radicand = eta - gap_threshold(a);
    MomentumRecord {
        k: 0,
        eta,
        p_hat_sq_scaled: radicand,
        p_hat: 0.5 * radicand.abs().sqrt(),
        p_hat_kind: if radicand >= 0.0 { PHatKind::Propagating } else { PHatKind::Evanescent },
        p_xi_scaled: xi_radicand.abs().sqrt(),
        gap: xi_radicand < 0.0,
    }
}

/// One record per eigenvalue of `sol`, in its descending order.
/// `p_z_scaled = 2 p_z / k_p`, `kappa_scaled = 2 kappa / k_p`.
pub fn momentum_spectrum(
    sol: &SpectralSolution,
    p_z_scaled: f64,
    kappa_scaled: f64,
) -> Result<Vec<MomentumRecord>> {
    if !(kappa_scaled >= 0.0) {
        return Err(Error::InvalidArgument(format!("K must be >= 0, got {kappa_scaled}")));
    }
    Ok(sol
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(i, &eta)| MomentumRecord {
            k: i + 1,
            ..classify(eta, sol.a(), sol.q(), p_z_scaled, kappa_scaled)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(photon: f64, plasma: f64, s: f64) -> PhysicalInputs {
        PhysicalInputs {
            photon_ev: photon,
            plasma_ev: Some(plasma),
            density_cm3: None,
            intensity_wcm2: s,
        }
    }

    #[test]
    fn one_ev_plasmon() {
        let cfg = derive_config(&inputs(1.563, 1.0, 1e8)).unwrap();
        assert!((cfg.density_cm3 / 7.242e20 - 1.0).abs() < 5e-3);
        assert!((cfg.plasma_wavelength_nm / 1240.0 - 1.0).abs() < 5e-3);
    }

    #[test]
    fn moderate_intensity() {
        let cfg = derive_config(&inputs(1.563, 1.0, 1e8)).unwrap();
        assert!((cfg.mu0 - 6.782e-6).abs() < 1e-9);
        assert!((13.3..=13.9).contains(&cfg.a), "a = {}", cfg.a);
        assert!(cfg.mu0_discrepancy() < 0.03);
    }

    #[test]
    fn relativistic_intensity() {
        let cfg = derive_config(&inputs(1.563, 1.0, 6e20)).unwrap();
        assert!((cfg.mu0 - 16.61).abs() < 0.1);
        assert!((cfg.a / 3.3e7 - 1.0).abs() < 0.03);
        assert!((cfg.mass_shift_ratio - mass_shift(cfg.mu0)).abs() < 1e-15);
    }

    #[test]
    fn zero_intensity_gives_zero_coupling() {
        let cfg = derive_config(&inputs(1.563, 1.0, 0.0)).unwrap();
        assert_eq!(cfg.a, 0.0);
        assert_eq!(cfg.mass_shift_ratio, 1.0);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            derive_config(&inputs(1.0, 1.5, 1.0)),
            Err(Error::NotUnderdense { .. })
        ));
        let both = PhysicalInputs { density_cm3: Some(1e20), ..inputs(1.5, 1.0, 1.0) };
        assert!(matches!(derive_config(&both), Err(Error::AmbiguousInput)));
        let neither = PhysicalInputs { plasma_ev: None, ..inputs(1.5, 1.0, 1.0) };
        assert!(derive_config(&neither).is_err());
    }

    #[test]
    fn density_round_trip() {
        for n in [1e15, 7.242e20, 3e23] {
            let back = density_from_plasma_energy(plasma_energy_from_density(n));
            assert!((back / n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_input_path() {
        let by_density = PhysicalInputs {
            plasma_ev: None,
            density_cm3: Some(density_from_plasma_energy(1.0)),
            ..inputs(1.563, 1.0, 1e8)
        };
        let cfg = derive_config(&by_density).unwrap();
        assert!((cfg.plasma_ev - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dispersion_identities() {
        let cfg = derive_config(&inputs(1.563, 1.0, 1e8)).unwrap();
        let w0 = cfg.photon_ev;
        let wp = cfg.plasma_ev;
        assert!(((w0 * cfg.n_m).powi(2) / (w0 * w0 - wp * wp) - 1.0).abs() < 1e-12);
        let kp = cfg.k0_per_cm * (1.0 - cfg.n_m * cfg.n_m).sqrt();
        assert!((kp / cfg.kp_per_cm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn a_forms_agree() {
        let cfg = derive_config(&inputs(1.563, 1.0, 1e8)).unwrap();
        let forms = cfg.first_principles.a_forms;
        for f in &forms[1..] {
            assert!((f / forms[0] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn mass_shift_examples() {
        assert_eq!(mass_shift(0.0), 1.0);
        assert_eq!(mass_shift(1.0), 2f64.sqrt());
        assert!((mass_shift(16.61) - 16.640_075).abs() < 1e-5);
    }

    #[test]
    fn whittaker_hill_relations() {
        let p = Momenta { p_hat: 0.7, p_x: 15.0, p_z: -0.3 };
        let wh = WhittakerHill::from_scaled(12.0, 3.0, &p);
        assert_eq!(4.0 * wh.theta2.sqrt(), 12.0);
        assert_eq!(2.0 * wh.g1.abs(), 12.0);
        let eta = eta_from_momenta(12.0, 3.0, &p);
        assert!((wh.eta() / eta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(gap_threshold(12.0), 36.0);
        let at = classify(36.0, 12.0, 29.0, 0.0, 0.0);
        assert!(!at.gap);
        assert_eq!(at.p_xi(), Some(0.0));
        let r = classify(718.092_858_484_742, 12.0, 29.0, 0.0, 0.0);
        assert!((r.p_xi_scaled - 682.092_858_484_742f64.sqrt()).abs() < 1e-12);
        assert!(classify(35.9, 12.0, 29.0, 0.0, 0.0).gap);
        let ev = classify(10.0, 1.0, 1.0, 0.0, 5.0);
        assert_eq!(ev.p_hat_kind, PHatKind::Evanescent);
        assert_eq!(ev.signed()[1].0, -ev.p_hat);
    }
}
