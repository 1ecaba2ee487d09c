//! Cancellation-free forms of the atanh combinations that appear in the
//! closed forms, plus `sin(v)/v` and its derivative.
//!
//! Every deformed quantity is a function of `s = γa` through `atanh(s)/s`
//! and `(atanh(s) - s)/s³`, both of which are 0/0 at `s = 0`.

/// Below this |s| the Maclaurin series is used.
const SERIES_CUTOFF: f64 = 0.1;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// `atanh(s) / s`, equal to 1 at `s = 0`.
pub fn atanh_ratio(s: f64) -> f64 {
    if s.abs() < SERIES_CUTOFF {
        // Σ s^(2k) / (2k + 1)
        let s2 = s * s;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= s2;
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add < f64::EPSILON * sum {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        s.atanh() / s
    }
}

/// `(atanh(s) - s) / s³`, equal to 1/3 at `s = 0`.
pub fn atanh_remainder(s: f64) -> f64 {
    if s.abs() < SERIES_CUTOFF {
        // Σ_{k>=1} s^(2k-2) / (2k + 1)
        let s2 = s * s;
        let mut term = 1.0;
        let mut sum = 1.0 / 3.0;
        let mut k = 2.0;
        loop {
            term *= s2;
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add < f64::EPSILON * sum {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        (s.atanh() - s) / (s * s * s)
    }
}

/// `sin(v) / v`.
pub fn sinc(v: f64) -> f64 {
    if v.abs() < 1e-4 {
        let v2 = v * v;
        1.0 - v2 / 6.0 + v2 * v2 / 120.0
    } else {
        v.sin() / v
    }
}

/// Derivative of [`sinc`].
pub fn sinc_derivative(v: f64) -> f64 {
    if v.abs() < 1e-3 {
        let v2 = v * v;
        v * (-1.0 / 3.0 + v2 / 30.0 - v2 * v2 / 840.0)
    } else {
        (v * v.cos() - v.sin()) / (v * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ratio_matches_direct_evaluation_across_cutoff() {
        for &s in &[0.0999999, 0.1, 0.3, -0.5, 0.9, 0.05, -0.01] {
            let direct = if s == 0.0 { 1.0 } else { f64::atanh(s) / s };
            assert_relative_eq!(atanh_ratio(s), direct, max_relative = 1e-14);
        }
        assert_eq!(atanh_ratio(0.0), 1.0);
        assert_relative_eq!(atanh_ratio(1e-10), 1.0 + 1e-20 / 3.0, max_relative = 1e-16);
    }

    #[test]
    fn remainder_limits() {
        assert_relative_eq!(atanh_remainder(0.0), 1.0 / 3.0, max_relative = 1e-16);
        assert_relative_eq!(
            atanh_remainder(1e-6),
            1.0 / 3.0 + 1e-12 / 5.0,
            max_relative = 1e-15
        );
        // continuity at the series cutoff
        let below = atanh_remainder(0.1 - 1e-12);
        let above = atanh_remainder(0.1 + 1e-12);
        assert_relative_eq!(below, above, max_relative = 1e-11);
        assert_relative_eq!(
            atanh_remainder(0.6),
            (0.6f64.atanh() - 0.6) / 0.216,
            max_relative = 1e-15
        );
    }

    #[test]
    fn sinc_pieces() {
        assert_eq!(sinc(0.0), 1.0);
        assert_relative_eq!(
            sinc(1e-4 + 1e-12),
            (1e-4f64 + 1e-12).sin() / (1e-4 + 1e-12),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            sinc_derivative(0.5),
            (0.5 * 0.5f64.cos() - 0.5f64.sin()) / 0.25,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            sinc_derivative(1e-3 - 1e-12),
            sinc_derivative(1e-3 + 1e-12),
            max_relative = 1e-8
        );
        assert_eq!(sinc_derivative(0.0), 0.0);
    }
}
