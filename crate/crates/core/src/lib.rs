//! Exact polynomial solutions of the Dirac equation for a charged particle in a
//! monochromatic plane wave propagating through a medium with refractive index
//! below one.
//!
//! The scalar coefficient functions of the bispinor reduce to a complex
//! Ince-type equation whose finite trigonometric-polynomial solutions are
//! eigenvectors of two families of tridiagonal matrices. This crate builds
//! those matrices, solves them (with double-double and quad-double tiers for
//! near-degenerate pairs), assembles and checks the polynomial wavefunctions,
//! and maps laboratory laser/plasma parameters onto the dimensionless model.
//!
//! Module map:
//!
//! - [`ince_matrix`]: even/odd tridiagonal matrices and their characteristic polynomials
//! - [`eigensolver`]: Sturm bisection, inverse iteration, [`eigensolver::SpectralSolution`]
//! - [`polynomials`]: complex trigonometric polynomials and the ODE residual
//! - [`wavefunction`]: full scalar solutions, prefactor and its Bessel series
//! - [`spinor`]: the 4x4 spin-coupling matrix and its eigenbasis
//! - [`physics`]: laboratory parameters, momentum spectrum, gap states
//! - [`verify`]: independent oracles (quadrature, Bessel closed form, characteristic-polynomial roots)

pub mod bessel;
pub mod dd;
pub mod eigensolver;
mod error;
pub mod ince_matrix;
pub mod physics;
pub mod polynomials;
pub mod spinor;
pub mod verify;
pub mod wavefunction;

pub use eigensolver::{eigen_decompose, Precision, SpectralSolution, Tier};
pub use error::{Error, Result};
pub use ince_matrix::{Parity, TridiagonalMatrix};
pub use physics::PhysicalConfig;
pub use polynomials::{Branch, TrigPolynomial};
