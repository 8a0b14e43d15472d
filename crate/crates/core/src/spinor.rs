//! The real 4x4 spin-coupling matrix `(1 + n_m beta) alpha_x` in the
//! Majorana representation and its eigenvectors.

use crate::error::{Error, Result};

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct SpinBasis {
    pub n_m: f64,
    /// `u_1 .. u_4`
    pub vectors: [Vec4; 4],
    /// `+sqrt(1-n_m^2)` twice, then `-sqrt(1-n_m^2)` twice.
    pub lambdas: [f64; 4],
}

fn check_index(n_m: f64) -> Result<()> {
    if (0.0..1.0).contains(&n_m) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "refractive index must lie in [0, 1), got {n_m}"
        )))
    }
}

/// Antidiagonal matrix with entries `1+n_m, 1+n_m, 1-n_m, 1-n_m` from top to bottom.
pub fn build_coupling_matrix(n_m: f64) -> Result<Mat4> {
    check_index(n_m)?;
    let mut b = [[0.0; 4]; 4];
    b[0][3] = 1.0 + n_m;
    b[1][2] = 1.0 + n_m;
    b[2][1] = 1.0 - n_m;
    b[3][0] = 1.0 - n_m;
    Ok(b)
}

pub fn spin_basis(n_m: f64) -> Result<SpinBasis> {
    check_index(n_m)?;
    let p = ((1.0 + n_m) / 2.0).sqrt();
    let m = ((1.0 - n_m) / 2.0).sqrt();
    let lambda = (1.0 - n_m * n_m).sqrt();
    Ok(SpinBasis {
        n_m,
        vectors: [
            [p, 0.0, 0.0, m],
            [0.0, p, m, 0.0],
            [-p, 0.0, 0.0, m],
            [0.0, -p, m, 0.0],
        ],
        lambdas: [lambda, lambda, -lambda, -lambda],
    })
}

pub fn dot(u: &Vec4, v: &Vec4) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn mat_vec(m: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = dot(row, v);
    }
    out
}

pub fn gram(vectors: &[Vec4; 4]) -> Mat4 {
    let mut g = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = dot(&vectors[i], &vectors[j]);
        }
    }
    g
}

/// Classical Gram–Schmidt, applied twice per vector, in the order `u_1..u_4`.
pub fn orthonormalize(b: &SpinBasis) -> [Vec4; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        let mut v = b.vectors[i];
        for _ in 0..2 {
            for prev in &out[..i] {
                let c = dot(&v, prev);
                for (x, p) in v.iter_mut().zip(prev) {
                    *x -= c * p;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        out[i] = v;
    }
    out
}

/// `sum_s v_s v_s^T`.
pub fn projector(vectors: &[Vec4]) -> Mat4 {
    let mut p = [[0.0; 4]; 4];
    for v in vectors {
        for i in 0..4 {
            for j in 0..4 {
                p[i][j] += v[i] * v[j];
            }
        }
    }
    p
}
