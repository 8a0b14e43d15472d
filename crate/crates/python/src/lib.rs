//! Python bindings: `import ince`.

use ince_core::physics::{self, PHatKind, PhysicalInputs};
use ince_core::verify;
use ince_core::wavefunction::prefactor;
use ince_core::{
    eigen_decompose, Branch, Error, Parity, SpectralSolution, Tier, TridiagonalMatrix,
    TrigPolynomial,
};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NumericalFailure { .. } | Error::OracleFailure { .. } | Error::InternalInvariant(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

pub fn parse_parity(s: &str) -> Result<Parity, String> {
    match s {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        _ => Err(format!("parity must be 'even' or 'odd', got {s:?}")),
    }
}

pub fn parse_tier(s: &str) -> Result<Tier, String> {
    match s {
        "double" => Ok(Tier::Double),
        "extended" => Ok(Tier::Extended),
        _ => Err(format!("tier must be 'double' or 'extended', got {s:?}")),
    }
}

pub fn parse_branch(s: &str) -> Result<Branch, String> {
    match s {
        "plus" | "+" => Ok(Branch::Plus),
        "minus" | "-" => Ok(Branch::Minus),
        _ => Err(format!("branch must be 'plus' or 'minus', got {s:?}")),
    }
}

fn value_err(msg: String) -> PyErr {
    PyValueError::new_err(msg)
}

/// Eigen-decomposition of one Ince matrix, eigenpairs in descending order (k = 1..dim).
#[pyclass(module = "ince", frozen)]
struct Spectrum {
    sol: SpectralSolution,
}

impl Spectrum {
    fn poly(&self, k: usize, branch: &str) -> PyResult<TrigPolynomial> {
        let branch = parse_branch(branch).map_err(value_err)?;
        TrigPolynomial::from_solution(&self.sol, k, branch).map_err(py_err)
    }
}

#[pymethods]
impl Spectrum {
    #[new]
    #[pyo3(signature = (parity, n, a, tier = "extended"))]
    fn new(parity: &str, n: i64, a: f64, tier: &str) -> PyResult<Self> {
        let parity = parse_parity(parity).map_err(value_err)?;
        let tier = parse_tier(tier).map_err(value_err)?;
        let m = TridiagonalMatrix::new(parity, n, a).map_err(py_err)?;
        Ok(Self { sol: eigen_decompose(&m, tier).map_err(py_err)? })
    }

    #[getter]
    fn parity(&self) -> &'static str {
        self.sol.parity().as_str()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.sol.n()
    }

    #[getter]
    fn a(&self) -> f64 {
        self.sol.a()
    }

    #[getter]
    fn tier(&self) -> &'static str {
        self.sol.tier().as_str()
    }

    /// "double", "double-double" or "quad-double".
    #[getter]
    fn precision(&self) -> &'static str {
        self.sol.precision().as_str()
    }

    #[getter]
    fn min_relative_gap(&self) -> f64 {
        self.sol.min_relative_gap()
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.sol.eigenvalues().to_vec()
    }

    #[getter]
    fn eigenvectors(&self) -> Vec<Vec<f64>> {
        self.sol.eigenvectors().to_vec()
    }

    #[getter]
    fn rows(&self) -> Vec<i64> {
        self.sol.rows().collect()
    }

    fn __len__(&self) -> usize {
        self.sol.dim()
    }

    fn __repr__(&self) -> String {
        format!(
            "Spectrum(parity={:?}, n={}, a={}, tier={:?})",
            self.parity(),
            self.sol.n(),
            self.sol.a(),
            self.tier()
        )
    }

    /// `(k, eigenvalue)` nearest `eta`.
    fn nearest(&self, eta: f64) -> (usize, f64) {
        self.sol.nearest(eta)
    }

    /// Polynomial `k` at each `xi`, optionally times `exp(-(a/4) cos xi)`.
    #[pyo3(signature = (k, xi, branch = "plus", with_prefactor = false))]
    fn evaluate(
        &self,
        k: usize,
        xi: Vec<f64>,
        branch: &str,
        with_prefactor: bool,
    ) -> PyResult<Vec<Complex64>> {
        let p = self.poly(k, branch)?;
        let a = p.a();
        Ok(xi
            .iter()
            .map(|&x| {
                let f = p.evaluate(x);
                if with_prefactor {
                    f * prefactor(a, x)
                } else {
                    f
                }
            })
            .collect())
    }

    /// Ince-equation residual of polynomial `k` at each `z = xi / 2`.
    #[pyo3(signature = (k, z, branch = "plus"))]
    fn ode_residual(&self, k: usize, z: Vec<f64>, branch: &str) -> PyResult<Vec<Complex64>> {
        let p = self.poly(k, branch)?;
        Ok(z.iter().map(|&z| p.ode_residual(z)).collect())
    }

    /// `[(r, |d_r|^2), ...]` for polynomial `k`; the strengths sum to 1.
    fn harmonic_strengths(&self, k: usize) -> PyResult<Vec<(i64, f64)>> {
        Ok(self.poly(k, "plus")?.harmonic_strengths())
    }

    /// Weighted Gram summary (bilinear and conjugated pairings).
    #[pyo3(signature = (branch = "plus"))]
    fn gram<'py>(&self, py: Python<'py>, branch: &str) -> PyResult<Bound<'py, PyDict>> {
        let branch = parse_branch(branch).map_err(value_err)?;
        let g = verify::gram_summary(&self.sol, branch).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("norms", g.norms)?;
        d.set_item("max_off_diagonal", g.max_off_diagonal)?;
        d.set_item("max_off_diagonal_conjugated", g.max_off_diagonal_conjugated)?;
        d.set_item("max_route_discrepancy", g.max_route_discrepancy)?;
        Ok(d)
    }

    /// Momentum classification of every eigenvalue; `pz = 2 p_z / k_p`, `kappa = 2 kappa / k_p`.
    #[pyo3(signature = (pz = 0.0, kappa = 0.0))]
    fn momenta<'py>(&self, py: Python<'py>, pz: f64, kappa: f64) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let records = physics::momentum_spectrum(&self.sol, pz, kappa).map_err(py_err)?;
        records
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("k", r.k)?;
                d.set_item("eta", r.eta)?;
                d.set_item("gap", r.gap)?;
                d.set_item("p_xi_scaled", r.p_xi())?;
                d.set_item("p_hat", r.p_hat)?;
                let kind = match r.p_hat_kind {
                    PHatKind::Propagating => "propagating",
                    PHatKind::Evanescent => "evanescent",
                };
                d.set_item("p_hat_kind", kind)?;
                Ok(d)
            })
            .collect()
    }
}

/// Eigenvalues from the characteristic-polynomial oracle (small matrices only).
#[pyfunction]
fn oracle_eigenvalues(parity: &str, n: i64, a: f64) -> PyResult<Vec<f64>> {
    let parity = parse_parity(parity).map_err(value_err)?;
    let m = TridiagonalMatrix::new(parity, n, a).map_err(py_err)?;
    verify::oracle_eigenvalues(&m).map_err(py_err)
}

/// Dimensionless parameters from laser/plasma inputs; give exactly one of
/// `plasma_ev` and `density_cm3`.
#[pyfunction]
#[pyo3(signature = (photon_ev, intensity, plasma_ev = None, density_cm3 = None))]
fn derive_physics<'py>(
    py: Python<'py>,
    photon_ev: f64,
    intensity: f64,
    plasma_ev: Option<f64>,
    density_cm3: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = physics::derive_config(&PhysicalInputs {
        photon_ev,
        plasma_ev,
        density_cm3,
        intensity_wcm2: intensity,
    })
    .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("photon_ev", cfg.photon_ev)?;
    d.set_item("plasma_ev", cfg.plasma_ev)?;
    d.set_item("density_cm3", cfg.density_cm3)?;
    d.set_item("intensity_wcm2", cfg.intensity_wcm2)?;
    d.set_item("n_m", cfg.n_m)?;
    d.set_item("k0_per_cm", cfg.k0_per_cm)?;
    d.set_item("kp_per_cm", cfg.kp_per_cm)?;
    d.set_item("plasma_wavelength_nm", cfg.plasma_wavelength_nm)?;
    d.set_item("mu0", cfg.mu0)?;
    d.set_item("photon_density_cm3", cfg.photon_density_cm3)?;
    d.set_item("a", cfg.a)?;
    d.set_item("mass_shift_ratio", cfg.mass_shift_ratio)?;
    d.set_item("kappa_scaled", cfg.kappa_scaled())?;
    d.set_item("a_first_principles", cfg.first_principles.a_forms.to_vec())?;
    d.set_item("mu0_first_principles", cfg.first_principles.mu0)?;
    d.set_item("a_discrepancy", cfg.a_discrepancy())?;
    d.set_item("mu0_discrepancy", cfg.mu0_discrepancy())?;
    Ok(d)
}

#[pyfunction]
fn gap_threshold(a: f64) -> f64 {
    physics::gap_threshold(a)
}

/// Spin basis `u_1..u_4` and eigenvalues of the coupling matrix.
#[pyfunction]
fn spin_basis(n_m: f64) -> PyResult<(Vec<[f64; 4]>, [f64; 4])> {
    let b = ince_core::spinor::spin_basis(n_m).map_err(py_err)?;
    Ok((b.vectors.to_vec(), b.lambdas))
}

#[pymodule]
fn ince(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Spectrum>()?;
    m.add_function(wrap_pyfunction!(oracle_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(derive_physics, m)?)?;
    m.add_function(wrap_pyfunction!(gap_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(spin_basis, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsing() {
        assert_eq!(parse_parity("odd"), Ok(Parity::Odd));
        assert!(parse_parity("Odd").is_err());
        assert_eq!(parse_tier("double"), Ok(Tier::Double));
        assert!(parse_tier("quad").is_err());
        assert_eq!(parse_branch("-"), Ok(Branch::Minus));
    }
}
