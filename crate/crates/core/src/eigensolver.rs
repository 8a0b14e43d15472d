//! Full eigen-decomposition of the Ince matrices.
//!
//! Both matrix families have strictly positive off-diagonal products for
//! `a > 0`, so a diagonal similarity turns them into real symmetric
//! tridiagonal matrices with the same spectrum. Eigenvalues come from
//! bisection on Sturm counts, eigenvectors from inverse iteration on the
//! symmetric form with reorthogonalisation inside clusters, mapped back
//! through the scaling.
//!
//! Two precision tiers share the same generic code: [`Tier::Double`] runs in
//! `f64`, [`Tier::Extended`] in [`DoubleDouble`]. The extended tier is needed
//! to split pairs such as the two eigenvalues near 822.7045604445 of
//! `M_30(12)`, which differ by about 15 ulps of a double.
//!
//! At small `a` the `r <-> -r` pairs of the larger matrices are split by far
//! less than double-double resolution (relative gaps of 1e-27 .. 1e-33 for
//! `n = 9, 10`, `a <= 1`). Eigenvectors then mix by `eps / gap`, which ruins
//! orthogonality, so the extended tier repeats the whole decomposition in
//! [`QuadDouble`] whenever its smallest relative gap drops below
//! [`PROMOTION_GAP`]. Gaps below about 1e-50 (n >= 15 at a = 0.5) stay
//! unresolved even then; [`SpectralSolution::min_relative_gap`] reports them.

use std::fmt;

use crate::dd::{DoubleDouble, QuadDouble, Scalar};
use crate::error::{Error, Result};
use crate::ince_matrix::{Parity, TridiagonalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    Double,
    Extended,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Double => "double",
            Tier::Extended => "extended",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "double" => Ok(Tier::Double),
            "extended" => Ok(Tier::Extended),
            other => Err(Error::InvalidArgument(format!(
                "tier must be 'double' or 'extended', got '{other}'"
            ))),
        }
    }
}

/// Arithmetic the decomposition actually ran in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Double,
    DoubleDouble,
    QuadDouble,
}

impl Precision {
    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::DoubleDouble => "double-double",
            Precision::QuadDouble => "quad-double",
        }
    }

    /// Unit roundoff.
    pub fn epsilon(self) -> f64 {
        match self {
            Precision::Double => f64::EPSILON,
            Precision::DoubleDouble => DoubleDouble::EPSILON,
            Precision::QuadDouble => QuadDouble::EPSILON,
        }
    }
}

/// Smallest relative eigenvalue gap at which double-double eigenvectors are
/// still trusted; below it the extended tier reruns in quad-double.
pub const PROMOTION_GAP: f64 = 1e-20;

/// Eigenvalues (descending) and normalised coefficient vectors of one matrix.
///
/// Labels `k` run from 1 to the dimension in descending eigenvalue order.
/// Each vector is indexed like the matrix rows, `r = row_lo ..`, satisfies
/// `sum D_r^2 = 1`, and has its largest-magnitude component positive (the
/// lowest `r` wins ties).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution {
    parity: Parity,
    n: u32,
    a: f64,
    row_lo: i64,
    tier: Tier,
    precision: Precision,
    min_relative_gap: f64,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
}

impl SpectralSolution {
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn tier(&self) -> Tier {
        self.tier
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// `min (eta_k - eta_{k+1}) / max(1, |eta_k|)`, evaluated in the working
    /// precision; infinite for a single eigenvalue. Eigenvectors are only
    /// trustworthy to about `precision().epsilon() / min_relative_gap`.
    pub fn min_relative_gap(&self) -> f64 {
        self.min_relative_gap
    }

    pub fn row_lo(&self) -> i64 {
        self.row_lo
    }

    pub fn rows(&self) -> impl Iterator<Item = i64> {
        self.row_lo..self.row_lo + self.dim() as i64
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `q = 2n - 1` (even) or `2n` (odd).
    pub fn q(&self) -> f64 {
        match self.parity {
            Parity::Even => 2.0 * self.n as f64 - 1.0,
            Parity::Odd => 2.0 * self.n as f64,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    /// Eigenvalue with label `k` (1-based).
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        self.check_label(k)?;
        Ok(self.eigenvalues[k - 1])
    }

    /// Coefficient vector with label `k` (1-based).
    pub fn eigenvector(&self, k: usize) -> Result<&[f64]> {
        self.check_label(k)?;
        Ok(&self.eigenvectors[k - 1])
    }

    fn check_label(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.dim() {
            return Err(Error::InvalidArgument(format!(
                "eigenvalue label k = {k} outside 1..={}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Label and value of the eigenvalue closest to `eta`.
    pub fn nearest(&self, eta: f64) -> (usize, f64) {
        let (idx, &val) = self
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| (*x - eta).abs().total_cmp(&(*y - eta).abs()))
            .expect("spectrum is never empty");
        (idx + 1, val)
    }
}

/// Off-diagonals and scaling of the symmetric form `D^-1 M D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrized {
    pub diag: Vec<f64>,
    /// `c_j = sqrt(sup_j * sub_j)`.
    pub off: Vec<f64>,
    /// Diagonal of `D`, with `d[0] = 1`.
    pub scaling: Vec<f64>,
}

/// Diagonal similarity that symmetrises an Ince matrix.
pub fn symmetrize(m: &TridiagonalMatrix) -> Result<Symmetrized> {
    let form = SymmetricForm::<f64>::new(m)?;
    Ok(Symmetrized {
        diag: form.diag.clone(),
        off: form.off_sq.iter().map(|x| x.sqrt()).collect(),
        scaling: form.scaling,
    })
}

/// Symmetric tridiagonal form in a working precision `T`.
struct SymmetricForm<T> {
    diag: Vec<T>,
    off_sq: Vec<T>,
    off: Vec<T>,
    scaling: Vec<T>,
    norm: f64,
    pivmin: f64,
    bounds: (f64, f64),
}

impl<T: Scalar> SymmetricForm<T> {
    fn new(m: &TridiagonalMatrix) -> Result<Self> {
        let dim = m.dim();
        let diag: Vec<T> = m.diag().iter().map(|&d| T::from(d)).collect();
        let mut off_sq = Vec::with_capacity(dim.saturating_sub(1));
        let mut scaling = Vec::with_capacity(dim);
        scaling.push(T::from(1.0));
        let coupled = m.a() > 0.0;
        for (j, (&s, &t)) in m.sup().iter().zip(m.sub()).enumerate() {
            if coupled {
                if !(s > 0.0 && t > 0.0) {
                    return Err(Error::InternalInvariant(format!(
                        "off-diagonal product at edge {j} is not positive ({s} * {t})"
                    )));
                }
                off_sq.push(T::exact_product(s, t));
                let ratio = T::from(t) / T::from(s);
                scaling.push(scaling[j] * ratio.sqrt());
            } else {
                off_sq.push(T::zero());
                scaling.push(T::from(1.0));
            }
        }
        let off: Vec<T> = off_sq.iter().map(|&x| x.sqrt()).collect();

        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut max_off_sq: f64 = 0.0;
        for i in 0..dim {
            let left = if i > 0 { off[i - 1].to_f64() } else { 0.0 };
            let right = if i + 1 < dim { off[i].to_f64() } else { 0.0 };
            let d = diag[i].to_f64();
            lo = lo.min(d - left - right);
            hi = hi.max(d + left + right);
            if i + 1 < dim {
                max_off_sq = max_off_sq.max(off_sq[i].to_f64());
            }
        }
        let norm = lo.abs().max(hi.abs());
        let margin = 1e-8 * norm.max(1.0);
        Ok(Self {
            diag,
            off_sq,
            off,
            scaling,
            norm,
            pivmin: f64::MIN_POSITIVE * 1e20 * max_off_sq.max(1.0),
            bounds: (lo - margin, hi + margin),
        })
    }

    fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the
    /// ratios of consecutive leading principal minors of `T - x I`.
    fn count_below(&self, x: T) -> usize {
        let pivmin = T::from(self.pivmin);
        let guard = |q: T| if q.abs() < pivmin { -pivmin } else { q };
        let mut q = guard(self.diag[0] - x);
        let mut count = usize::from(q < T::zero());
        for i in 1..self.dim() {
            q = self.diag[i] - x - self.off_sq[i - 1] / q;
            q = guard(q);
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// Bisection for the eigenvalue with ascending index `k` inside a
    /// bracket where `count_below(lo) <= k < count_below(hi)`.
    fn bisect(&self, k: usize, mut lo: T, mut hi: T) -> T {
        if self.dim() == 1 {
            return self.diag[0];
        }
        let abs_floor = T::EPSILON * 1e-3;
        for _ in 0..600 {
            let width = (hi - lo).to_f64();
            let scale = lo.to_f64().abs().max(hi.to_f64().abs());
            if width <= 2.0 * T::EPSILON * scale + abs_floor {
                break;
            }
            let mid = lo.half_sum(hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo.half_sum(hi)
    }

    fn eigenvalues_ascending(&self) -> Vec<T> {
        if self.dim() == 1 {
            return vec![self.diag[0]];
        }
        let (lo, hi) = (T::from(self.bounds.0), T::from(self.bounds.1));
        (0..self.dim()).map(|k| self.bisect(k, lo, hi)).collect()
    }

    fn residual_norm(&self, lambda: T, y: &[T]) -> f64 {
        let n = self.dim();
        let mut sum = 0.0;
        for i in 0..n {
            let mut r = (self.diag[i] - lambda) * y[i];
            if i > 0 {
                r = r + self.off[i - 1] * y[i - 1];
            }
            if i + 1 < n {
                r = r + self.off[i] * y[i + 1];
            }
            let r = r.to_f64();
            sum += r * r;
        }
        sum.sqrt()
    }

    /// Inverse iteration for ascending eigenvalues; returns vectors of the
    /// symmetric form. Vectors whose eigenvalues sit within `1e-3 * |T|` of
    /// each other are kept mutually orthogonal.
    fn eigenvectors(&self, lambdas: &[T]) -> Result<Vec<Vec<T>>> {
        const MAX_ITERATIONS: usize = 12;
        let n = self.dim();
        let ortol = 1e-3 * self.norm;
        let pertol = 10.0 * T::EPSILON;
        let res_tol = 32.0 * T::EPSILON * n as f64 * (self.norm + 1.0);

        let mut vectors: Vec<Vec<T>> = Vec::with_capacity(n);
        let mut cluster_start = 0;
        let mut prev_shift = T::zero();
        for (i, &lambda) in lambdas.iter().enumerate() {
            let mut shift = lambda;
            if i > 0 {
                if (lambda - lambdas[i - 1]).to_f64() > ortol {
                    cluster_start = i;
                } else {
                    let step = pertol * prev_shift.to_f64().abs().max(1.0);
                    if (shift - prev_shift).to_f64() < step {
                        shift = prev_shift + T::from(step);
                    }
                }
            }
            prev_shift = shift;

            let lu = ShiftedLu::new(self, shift);
            let mut b: Vec<T> = (0..n)
                .map(|j| T::from(1.0 + 0.5 * (1.7 * j as f64 + 0.37 * i as f64 + 0.11).sin()))
                .collect();
            let mut converged_passes = 0;
            for _ in 0..MAX_ITERATIONS {
                let mut y = lu.solve(&b);
                for _ in 0..2 {
                    for v in &vectors[cluster_start..i] {
                        let proj = dot(&y, v);
                        for (yj, &vj) in y.iter_mut().zip(v) {
                            *yj = *yj - proj * vj;
                        }
                    }
                }
                normalize(&mut y);
                let residual = self.residual_norm(lambda, &y);
                b = y;
                if residual <= res_tol {
                    converged_passes += 1;
                    if converged_passes == 2 {
                        break;
                    }
                }
            }
            if converged_passes == 0 {
                return Err(Error::NumericalFailure { k: n - i });
            }
            vectors.push(b);
        }
        Ok(vectors)
    }

    /// Maps a symmetric-form vector back to Ince coefficients, normalised
    /// and sign-fixed.
    fn to_coefficients(&self, y: &[T]) -> Vec<f64> {
        let mut x: Vec<T> = y.iter().zip(&self.scaling).map(|(&yi, &di)| yi * di).collect();
        normalize(&mut x);
        let mut out: Vec<f64> = x.iter().map(|v| v.to_f64()).collect();
        fix_sign(&mut out);
        out
    }
}

fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

fn normalize<T: Scalar>(x: &mut [T]) {
    // pre-scale by the largest entry to keep the sum of squares finite
    let big = x.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    if big == 0.0 || !big.is_finite() {
        return;
    }
    let inv_big = T::from(1.0 / big);
    for v in x.iter_mut() {
        *v = *v * inv_big;
    }
    let norm = dot(x, x).sqrt();
    for v in x.iter_mut() {
        *v = *v / norm;
    }
}

/// Largest-magnitude component made positive; the first (lowest `r`) wins ties.
pub(crate) fn fix_sign(x: &mut [f64]) {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    if x[best] < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
}

/// Gaussian elimination with partial pivoting of `T - shift I`.
struct ShiftedLu<T> {
    // after elimination: upper triangle with two superdiagonals
    diag: Vec<T>,
    up1: Vec<T>,
    up2: Vec<T>,
    // multiplier and whether rows were swapped at each step
    mult: Vec<T>,
    swapped: Vec<bool>,
}

impl<T: Scalar> ShiftedLu<T> {
    fn new(form: &SymmetricForm<T>, shift: T) -> Self {
        let n = form.dim();
        let mut diag: Vec<T> = form.diag.iter().map(|&d| d - shift).collect();
        let mut up1: Vec<T> = form.off.clone();
        let mut up2 = vec![T::zero(); n.saturating_sub(2)];
        let sub: Vec<T> = form.off.clone();
        let mut mult = vec![T::zero(); n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let tiny = T::from(T::EPSILON * form.norm.max(1.0));
        for i in 0..n.saturating_sub(1) {
            if diag[i].abs() >= sub[i].abs() {
                if diag[i].abs() < tiny {
                    diag[i] = tiny;
                }
                let f = sub[i] / diag[i];
                mult[i] = f;
                diag[i + 1] = diag[i + 1] - f * up1[i];
            } else {
                swapped[i] = true;
                let f = diag[i] / sub[i];
                mult[i] = f;
                diag[i] = sub[i];
                let temp = diag[i + 1];
                diag[i + 1] = up1[i] - f * temp;
                if i + 2 < n {
                    up2[i] = up1[i + 1];
                    up1[i + 1] = -f * up2[i];
                }
                up1[i] = temp;
            }
        }
        if n > 0 && diag[n - 1].abs() < tiny {
            diag[n - 1] = tiny;
        }
        Self { diag, up1, up2, mult, swapped }
    }

    fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = self.diag.len();
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.mult[i] * b[i + 1];
            } else {
                b[i + 1] = b[i + 1] - self.mult[i] * b[i];
            }
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s = s - self.up1[i] * x[i + 1];
            }
            if i + 2 < n {
                s = s - self.up2[i] * x[i + 2];
            }
            x[i] = s / self.diag[i];
        }
        x
    }
}

struct Decomposition {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    min_relative_gap: f64,
}

fn decompose_in<T: Scalar>(m: &TridiagonalMatrix) -> Result<Decomposition> {
    let form = SymmetricForm::<T>::new(m)?;
    let ascending = form.eigenvalues_ascending();
    let min_relative_gap = ascending
        .windows(2)
        .map(|w| (w[1] - w[0]).to_f64() / w[1].abs().to_f64().max(1.0))
        .fold(f64::INFINITY, f64::min);
    let vectors = form.eigenvectors(&ascending)?;
    Ok(Decomposition {
        values: ascending.iter().rev().map(|v| v.to_f64()).collect(),
        vectors: vectors.iter().rev().map(|y| form.to_coefficients(y)).collect(),
        min_relative_gap,
    })
}

/// Uncoupled case: exact diagonal entries and unit vectors, ties ordered by `r`.
fn decompose_diagonal(m: &TridiagonalMatrix) -> Decomposition {
    let dim = m.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| m.diag()[j].total_cmp(&m.diag()[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m.diag()[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            v
        })
        .collect();
    // Ties are exact and the unit vectors exactly orthogonal.
    Decomposition { values, vectors, min_relative_gap: f64::INFINITY }
}

/// All eigenpairs of `m`, eigenvalues descending.
pub fn eigen_decompose(m: &TridiagonalMatrix, tier: Tier) -> Result<SpectralSolution> {
    let (d, precision) = if m.a() == 0.0 {
        (decompose_diagonal(m), Precision::Double)
    } else {
        match tier {
            Tier::Double => (decompose_in::<f64>(m)?, Precision::Double),
            Tier::Extended => {
                let d = decompose_in::<DoubleDouble>(m)?;
                if d.min_relative_gap < PROMOTION_GAP {
                    (decompose_in::<QuadDouble>(m)?, Precision::QuadDouble)
                } else {
                    (d, Precision::DoubleDouble)
                }
            }
        }
    };
    Ok(SpectralSolution {
        parity: m.parity(),
        n: m.n(),
        a: m.a(),
        row_lo: m.row_lo(),
        tier,
        precision,
        min_relative_gap: d.min_relative_gap,
        eigenvalues: d.values,
        eigenvectors: d.vectors,
    })
}

fn dd_form(m: &TridiagonalMatrix) -> Result<SymmetricForm<DoubleDouble>> {
    SymmetricForm::<DoubleDouble>::new(m)
}

/// Double-double eigenvalue inside `[lo, hi]`, which must hold exactly one
/// eigenvalue by Sturm count.
pub fn refine_in_bracket(m: &TridiagonalMatrix, lo: f64, hi: f64) -> Result<f64> {
    let form = dd_form(m)?;
    let (dlo, dhi) = (DoubleDouble::from(lo), DoubleDouble::from(hi));
    let below_lo = form.count_below(dlo);
    let below_hi = form.count_below(dhi);
    let count = below_hi.saturating_sub(below_lo);
    if lo >= hi || count != 1 {
        return Err(Error::InvalidBracket { lo, hi, count });
    }
    Ok(form.bisect(below_lo, dlo, dhi).to_f64())
}

/// Ascending indices and double-double values of the eigenvalues nearest
/// `eta`, found by widening a bracket around it until it catches one.
fn nearest_dd(
    form: &SymmetricForm<DoubleDouble>,
    eta: f64,
    initial_halfwidth: f64,
    max_halfwidth: f64,
) -> Option<(usize, DoubleDouble)> {
    let centre = DoubleDouble::from(eta);
    let mut half = initial_halfwidth;
    loop {
        let lo = centre - DoubleDouble::from(half);
        let hi = centre + DoubleDouble::from(half);
        let below_lo = form.count_below(lo);
        let below_hi = form.count_below(hi);
        if below_hi > below_lo {
            return (below_lo..below_hi)
                .map(|k| (k, form.bisect(k, lo, hi)))
                .min_by(|(_, x), (_, y)| {
                    let dx = (*x - centre).abs();
                    let dy = (*y - centre).abs();
                    dx.partial_cmp(&dy).expect("finite eigenvalues")
                });
        }
        if half >= max_halfwidth {
            return None;
        }
        half *= 2.0;
    }
}

/// The eigenvalue closest to `eta0`, refined by double-double Sturm
/// bisection to well below `1e-14 * max(1, |eta|)`.
pub fn refine_eigenvalue(m: &TridiagonalMatrix, eta0: f64) -> Result<f64> {
    if !eta0.is_finite() {
        return Err(Error::InvalidArgument(format!("eta0 must be finite, got {eta0}")));
    }
    let form = dd_form(m)?;
    let span = (form.bounds.1 - form.bounds.0) + (eta0 - form.bounds.0).abs();
    let start = 1e-12 * eta0.abs().max(1.0);
    nearest_dd(&form, eta0, start, 4.0 * span.max(1.0))
        .map(|(_, v)| v.to_f64())
        .ok_or(Error::InvalidBracket { lo: form.bounds.0, hi: form.bounds.1, count: 0 })
}

/// Coefficient vector for the eigenvalue `eta` (which must lie within
/// `1e-9 * max(1, |eta|)` of a true eigenvalue), from the extended tier.
pub fn eigenvector_for(m: &TridiagonalMatrix, eta: f64) -> Result<Vec<f64>> {
    let tolerance = 1e-9 * eta.abs().max(1.0);
    let sol = eigen_decompose(m, Tier::Extended)?;
    if m.a() == 0.0 {
        let (k, val) = sol.nearest(eta);
        if (val - eta).abs() > tolerance {
            return Err(not_an_eigenvalue(eta, tolerance));
        }
        return Ok(sol.eigenvectors[k - 1].clone());
    }
    let form = dd_form(m)?;
    let (ascending_idx, _) = nearest_dd(&form, eta, tolerance, tolerance)
        .ok_or_else(|| not_an_eigenvalue(eta, tolerance))?;
    Ok(sol.eigenvectors[sol.dim() - 1 - ascending_idx].clone())
}

fn not_an_eigenvalue(eta: f64, tolerance: f64) -> Error {
    Error::InvalidArgument(format!(
        "{eta} is not an eigenvalue: Sturm count is unchanged across [{}, {}]",
        eta - tolerance,
        eta + tolerance
    ))
}
