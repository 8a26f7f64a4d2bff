//! Small summary-statistics helpers shared by the estimators.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sample mean and standard error of the mean.
///
/// Values are shifted by the first element before summing, so a constant
/// sample yields that constant and a standard error of exactly zero.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let shift = values[0];
    let mean_dev = compensated_sum(values.iter().map(|v| v - shift)) / n as f64;
    let mean = shift + mean_dev;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss = compensated_sum(values.iter().map(|v| {
        let d = (v - shift) - mean_dev;
        d * d
    }));
    let var = ss / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Two-sided standard normal quantile for confidence `level`.
pub fn normal_quantile(level: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + level / 2.0)
}

/// Two-sided Student t quantile with `df` degrees of freedom.
pub fn student_quantile(level: f64, df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df)
        .map(|d| d.inverse_cdf(0.5 + level / 2.0))
        .unwrap_or_else(|_| normal_quantile(level))
}

/// `max(ln x, 0)`, with `log⁺(0) = 0`.
pub fn log_plus(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x.ln()
    }
}

/// Shortest round-trip text for a table cell: plain notation for
/// moderate magnitudes, scientific otherwise.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.5, -2.5e-18, 3.0e20, 0.1 + 0.2, f64::MIN_POSITIVE] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_number(2.5e-18), "2.5e-18");
        assert_eq!(format_number(0.25), "0.25");
    }

    #[test]
    fn constant_sample_has_zero_se() {
        let v = vec![-std::f64::consts::LN_2; 1000];
        let (m, se) = mean_and_se(&v);
        assert_eq!(m, v[0]);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn mean_and_se_small() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-15);
        assert!((se - (5.0_f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn quantiles() {
        assert!((normal_quantile(0.99) - 2.5758293035489).abs() < 1e-9);
        assert!((student_quantile(0.95, 10.0) - 2.2281388519649).abs() < 1e-6);
    }

    #[test]
    fn compensated_beats_naive() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }

    #[test]
    fn log_plus_values() {
        assert_eq!(log_plus(0.0), 0.0);
        assert_eq!(log_plus(0.5), 0.0);
        assert_eq!(log_plus(1.0), 0.0);
        assert!((log_plus(std::f64::consts::E.powi(2)) - 2.0).abs() < 1e-15);
    }
}
