//! The even (`M_2n`) and odd (`N_2n+1`) tridiagonal matrices whose eigenvectors
//! are the Fourier coefficients of the terminating solutions.
//!
//! Rows are labelled by the harmonic index `r` exactly as in the Fourier
//! expansion: `r = -n+1 ..= n` for the even family and `r = -n ..= n` for the
//! odd one. Storage is 0-based, `index = r - row_lo`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::InvalidArgument(format!(
                "parity must be 'even' or 'odd', got '{other}'"
            ))),
        }
    }
}

/// Three-band representation of `M_2n(a)` or `N_2n+1(a)`.
///
/// `sup[j]` is the entry at `(j, j+1)` and `sub[j]` the entry at `(j+1, j)`
/// in 0-based storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    parity: Parity,
    n: u32,
    a: f64,
    row_lo: i64,
    row_hi: i64,
    diag: Vec<f64>,
    sup: Vec<f64>,
    sub: Vec<f64>,
}

fn check_coupling(a: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::InvalidArgument(format!("coupling a must be finite, got {a}")));
    }
    if a < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "coupling a must be >= 0, got {a}; the equation is invariant under \
             z -> z + pi/2 together with a -> -a, so negative a duplicates the a > 0 problem"
        )));
    }
    Ok(())
}

impl TridiagonalMatrix {
    /// `M_2n(a)`: rows `r = -n+1 ..= n`, diagonal `4r^2`, super `(n+r)a`,
    /// sub `(n-r+1)a`.
    pub fn even(n: i64, a: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument(format!(
                "even solutions need n >= 1, got {n}"
            )));
        }
        check_coupling(a)?;
        let (row_lo, row_hi) = (-n + 1, n);
        let diag = (row_lo..=row_hi).map(|r| (4 * r * r) as f64).collect();
        let sup = (row_lo..row_hi).map(|r| (n + r) as f64 * a).collect();
        let sub = (row_lo + 1..=row_hi).map(|r| (n - r + 1) as f64 * a).collect();
        Ok(Self { parity: Parity::Even, n: n as u32, a, row_lo, row_hi, diag, sup, sub })
    }

    /// `N_2n+1(a)`: rows `r = -n ..= n`, diagonal `(2r+1)^2`, super
    /// `(n+r+1)a`, sub `(n-r+1)a`.
    pub fn odd(n: i64, a: f64) -> Result<Self> {
        if n < 0 {
            return Err(Error::InvalidArgument(format!(
                "odd solutions need n >= 0, got {n}"
            )));
        }
        check_coupling(a)?;
        let (row_lo, row_hi) = (-n, n);
        let diag = (row_lo..=row_hi).map(|r| ((2 * r + 1) * (2 * r + 1)) as f64).collect();
        let sup = (row_lo..row_hi).map(|r| (n + r + 1) as f64 * a).collect();
        let sub = (row_lo + 1..=row_hi).map(|r| (n - r + 1) as f64 * a).collect();
        Ok(Self { parity: Parity::Odd, n: n as u32, a, row_lo, row_hi, diag, sup, sub })
    }

    pub fn new(parity: Parity, n: i64, a: f64) -> Result<Self> {
        match parity {
            Parity::Even => Self::even(n, a),
            Parity::Odd => Self::odd(n, a),
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn row_lo(&self) -> i64 {
        self.row_lo
    }

    pub fn row_hi(&self) -> i64 {
        self.row_hi
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = i64> {
        self.row_lo..=self.row_hi
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    /// `q = 2n - 1` (even) or `q = 2n` (odd).
    pub fn q(&self) -> f64 {
        match self.parity {
            Parity::Even => 2.0 * self.n as f64 - 1.0,
            Parity::Odd => 2.0 * self.n as f64,
        }
    }

    /// Products `sup[j] * sub[j]` across each off-diagonal edge.
    pub fn edge_products(&self) -> Vec<f64> {
        self.sup.iter().zip(&self.sub).map(|(s, t)| s * t).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let dim = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..dim {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.sub[i - 1].abs();
            }
            if i + 1 < dim {
                radius += self.sup[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    /// `M x` in storage order.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let dim = self.dim();
        assert_eq!(x.len(), dim, "vector length must match matrix dimension");
        (0..dim)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < dim {
                    y += self.sup[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Row-major dense copy, for tests and small oracles.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let mut m = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            m[i][i] = self.diag[i];
            if i + 1 < dim {
                m[i][i + 1] = self.sup[i];
                m[i + 1][i] = self.sub[i];
            }
        }
        m
    }

    /// `det(M - eta I)` as a scaled value that cannot overflow.
    pub fn char_poly_scaled(&self, eta: f64) -> ScaledValue {
        // p_{-1} = 1, p_0 = d_0 - eta, p_i = (d_i - eta) p_{i-1} - s_{i-1} t_{i-1} p_{i-2}
        let mut prev = 1.0;
        let mut cur = self.diag[0] - eta;
        let mut exp2: i64 = 0;
        for i in 1..self.dim() {
            let next = (self.diag[i] - eta) * cur - self.sup[i - 1] * self.sub[i - 1] * prev;
            prev = cur;
            cur = next;
            let big = cur.abs().max(prev.abs());
            if big > RESCALE_HIGH {
                cur *= RESCALE_DOWN;
                prev *= RESCALE_DOWN;
                exp2 += RESCALE_BITS;
            } else if big != 0.0 && big < RESCALE_LOW {
                cur *= RESCALE_UP;
                prev *= RESCALE_UP;
                exp2 -= RESCALE_BITS;
            }
        }
        ScaledValue { mantissa: cur, exp2 }
    }

    /// `det(M - eta I)`; may be infinite for huge dimensions, see
    /// [`char_poly_scaled`](Self::char_poly_scaled).
    pub fn char_poly_eval(&self, eta: f64) -> f64 {
        self.char_poly_scaled(eta).to_f64()
    }
}

const RESCALE_BITS: i64 = 256;
const RESCALE_HIGH: f64 = 1e60;
const RESCALE_LOW: f64 = 1e-60;
// 2^-256 and 2^256, exact powers of two
const RESCALE_DOWN: f64 = 8.636_168_555_094_445e-78;
const RESCALE_UP: f64 = 1.157_920_892_373_162e77;

/// `mantissa * 2^exp2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub exp2: i64,
}

impl ScaledValue {
    pub fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.mantissa;
        let mut e = self.exp2;
        while e > 0 && v.is_finite() && v != 0.0 {
            let step = e.min(512);
            v *= 2f64.powi(step as i32);
            e -= step;
        }
        while e < 0 && v != 0.0 {
            let step = (-e).min(512);
            v *= 2f64.powi(-(step as i32));
            e += step;
        }
        v
    }

    /// `log10 |value|`.
    pub fn log10_abs(&self) -> f64 {
        self.mantissa.abs().log10() + self.exp2 as f64 * std::f64::consts::LOG10_2
    }
}
