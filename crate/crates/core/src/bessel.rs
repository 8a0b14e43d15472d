//! Modified Bessel functions of the first kind at integer order.

use crate::error::{Error, Result};

/// Crossover between the power series and Miller's recurrence.
const SERIES_LIMIT: f64 = 15.0;

/// `I_l(x)` for integer `l` (negative orders by `I_{-l} = I_l`) and `x >= 0`.
pub fn modified_bessel_i(l: i64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "modified Bessel argument must be finite and >= 0, got {x}"
        )));
    }
    let l = l.unsigned_abs() as usize;
    if x <= SERIES_LIMIT {
        Ok(series(l, x))
    } else {
        Ok(scaled_sequence(l, x)[l] * x.exp())
    }
}

/// `e^{-x} I_l(x)` for `l = 0..=l_max`, one shared recurrence.
pub fn scaled_bessel_i_table(l_max: usize, x: f64) -> Result<Vec<f64>> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "modified Bessel argument must be finite and >= 0, got {x}"
        )));
    }
    if x <= SERIES_LIMIT {
        let scale = (-x).exp();
        return Ok((0..=l_max).map(|l| series(l, x) * scale).collect());
    }
    let mut table = scaled_sequence(l_max, x);
    table.truncate(l_max + 1);
    Ok(table)
}

/// Ascending series `sum (x/2)^{2m+l} / (m! (m+l)!)`.
fn series(l: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    // (x/2)^l / l! built incrementally to avoid overflow of the pieces
    let mut term = 1.0;
    for j in 1..=l {
        term *= half / j as f64;
    }
    let quarter_sq = half * half;
    let mut sum = term;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= quarter_sq / (m * (m + l as f64));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Miller backward recurrence for `e^{-x} I_j(x)`, `j = 0..=l`, normalised
/// through `I_0 + 2 sum I_j = e^x`.
fn scaled_sequence(l: usize, x: f64) -> Vec<f64> {
    let start = (l as f64).max(x) as usize + 50 + (10.0 * x.sqrt()) as usize;
    let mut values = vec![0.0; start + 2];
    let (mut next, mut current) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for j in (0..=start).rev() {
        values[j] = current;
        norm += if j == 0 { current } else { 2.0 * current };
        // I_{j-1} = (2j/x) I_j + I_{j+1}
        let prev = (2.0 * j as f64 / x) * current + next;
        next = current;
        current = prev;
        if current > 1e250 {
            let s = 1e-250;
            current *= s;
            next *= s;
            norm *= s;
            for v in values[j..].iter_mut() {
                *v *= s;
            }
        }
    }
    for v in values.iter_mut() {
        *v /= norm;
    }
    values.truncate(l.max(1) + 1);
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(modified_bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(modified_bessel_i(3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn i1_at_one() {
        let v = modified_bessel_i(1, 1.0).unwrap();
        assert!((v - 0.565_159_103_992_485).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        // I_0(20), I_5(30), I_2(16) (mpmath besseli)
        let cases = [
            (0, 20.0, 4.355_828_255_955_353e7),
            (5, 30.0, 5.121_514_654_769_350e11),
            (2, 16.0, 7.853_137_984_382_501e5),
            (3, 10.0, 1.758_380_716_610_853e3),
        ];
        for (l, x, want) in cases {
            let got = modified_bessel_i(l, x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "I_{l}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn negative_order_and_argument() {
        assert_eq!(modified_bessel_i(-2, 3.0).unwrap(), modified_bessel_i(2, 3.0).unwrap());
        assert!(modified_bessel_i(0, -1.0).is_err());
    }

    #[test]
    fn series_and_recurrence_agree_at_crossover() {
        for l in 0..8 {
            let a = series(l, 15.0);
            let b = scaled_sequence(l, 15.0)[l] * 15f64.exp();
            assert!(((a - b) / a).abs() < 1e-13, "l = {l}");
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let t = scaled_bessel_i_table(6, 40.0).unwrap();
        for (l, v) in t.iter().enumerate() {
            let direct = modified_bessel_i(l as i64, 40.0).unwrap() * (-40f64).exp();
            assert!(((v - direct) / direct).abs() < 1e-14);
        }
    }
}
