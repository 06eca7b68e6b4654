//! Floating-point evaluators for the analytic inequalities behind the product
//! threshold. Nothing here gates a solver verdict.

use serde::Serialize;

/// Absolute tolerance for comparisons; closer than this is `Indeterminate`.
pub const TOLERANCE: f64 = 1e-9;

/// Default width of the admissible band below `n` for `Σ k_i`.
pub const DEFAULT_EPSILON: f64 = 0.2;

/// Smallest `n` the tail inequality checker accepts.
pub const MIN_N: u64 = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("logarithm of a non-positive value: {0}")]
    Domain(&'static str),
    #[error("n = {n} is below the minimum {min}")]
    TooSmall { n: u64, min: u64 },
    #[error("{0}")]
    Invalid(&'static str),
}

/// `f(t) = t(ln k1² + ln t − ln n) − ln(k1·k2) + 2 ln n`.
///
/// Equals `ln((k1²·t/n)^t / (k1·k2/n²))`.
pub fn log_ratio(t: f64, n: f64, k1: f64, k2: f64) -> Result<f64, NumericError> {
    if t <= 0.0 || k1 <= 0.0 || k2 <= 0.0 {
        return Err(NumericError::Domain("t, k1 and k2 must be positive"));
    }
    if n <= 1.0 {
        return Err(NumericError::Domain("n must exceed 1"));
    }
    Ok(t * (2.0 * k1.ln() + t.ln() - n.ln()) - (k1 * k2).ln() + 2.0 * n.ln())
}

/// Whether `n` is large enough for `log_ratio` to decrease on `[t, t + 1]`:
/// the derivative `ln(k1² s / n) + 1` is negative for `s ≤ t + 1` exactly
/// when `n > e·k1²·(t + 1)`.
pub fn log_ratio_decreasing_from(t: f64, n: f64, k1: f64) -> bool {
    n > core::f64::consts::E * k1 * k1 * (t + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    Holds,
    Fails,
    Indeterminate,
}

impl Comparison {
    pub fn of(margin: f64) -> Self {
        if margin.abs() <= TOLERANCE {
            Comparison::Indeterminate
        } else if margin > 0.0 {
            Comparison::Holds
        } else {
            Comparison::Fails
        }
    }
}

/// Both sides of `(k1·k2/n²)^(1/t) > 1 − ½(1 − Σk/n)^k1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCheck {
    pub n: u64,
    pub t: usize,
    pub sum: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub comparison: Comparison,
    /// `[n(1 − ε), n − n(8·k1·ln n / n)^(1/k1)]`, the admissible range of `Σk`.
    pub range: (f64, f64),
    /// `false` marks an exploratory evaluation outside the admissible range.
    pub in_range: bool,
}

/// Evaluates the tail inequality for uniformities `ks` sorted descending.
pub fn tail_inequality(n: u64, ks: &[u64], epsilon: f64) -> Result<TailCheck, NumericError> {
    if n < MIN_N {
        return Err(NumericError::TooSmall { n, min: MIN_N });
    }
    if ks.len() < 2 {
        return Err(NumericError::Invalid("need at least two uniformities"));
    }
    if ks.contains(&0) || ks.windows(2).any(|w| w[0] < w[1]) {
        return Err(NumericError::Invalid("uniformities must be positive and sorted in descending order"));
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(NumericError::Invalid("epsilon must lie in [0, 1)"));
    }
    let nf = n as f64;
    let (k1, k2) = (ks[0] as f64, ks[1] as f64);
    let t = ks.len();
    let sum: u64 = ks.iter().sum();
    let lhs = (k1 * k2 / (nf * nf)).powf(1.0 / t as f64);
    let rhs = 1.0 - 0.5 * (1.0 - sum as f64 / nf).powi(ks[0] as i32);
    let lo = nf * (1.0 - epsilon);
    let hi = nf - nf * (8.0 * k1 * nf.ln() / nf).powf(1.0 / k1);
    let s = sum as f64;
    Ok(TailCheck {
        n,
        t,
        sum,
        lhs,
        rhs,
        comparison: Comparison::of(lhs - rhs),
        range: (lo, hi),
        in_range: lo <= s && s <= hi,
    })
}

/// Parses `2,2,3x10` style lists: `vxc` repeats `v` `c` times.
pub fn parse_repeated_list(text: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once('x') {
            Some((v, c)) => {
                let v: u64 = v.parse().map_err(|_| format!("bad value in {item:?}"))?;
                let c: usize = c.parse().map_err(|_| format!("bad count in {item:?}"))?;
                out.extend(std::iter::repeat_n(v, c));
            }
            None => out.push(item.parse().map_err(|_| format!("bad value {item:?}"))?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_ratio_values() {
        // 3 ln 12 − ln 1000 − ln 4
        let want = 3.0 * 12f64.ln() - 1000f64.ln() - 4f64.ln();
        let got = log_ratio(3.0, 1000.0, 2.0, 2.0).unwrap();
        assert!((got - want).abs() < 1e-12);
        assert!((got + 0.8394).abs() < 1e-3);
        // 12³ = 432·4 makes the value vanish
        assert!(log_ratio(3.0, 432.0, 2.0, 2.0).unwrap().abs() < 1e-12);
        assert!(log_ratio(0.0, 10.0, 1.0, 1.0).is_err());
        assert!(log_ratio(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn tail_check_mid_range() {
        let ks = vec![2; 44_000];
        let c = tail_inequality(100_000, &ks, DEFAULT_EPSILON).unwrap();
        assert!(c.in_range);
        assert_eq!(c.comparison, Comparison::Holds);
        assert!((c.range.0 - 80_000.0).abs() < 1e-6);
        assert!((c.range.1 - 95_708.0).abs() < 1.0);
    }

    #[test]
    fn tail_check_flags_and_guards() {
        let c = tail_inequality(100_000, &[2, 2, 2], DEFAULT_EPSILON).unwrap();
        assert!(!c.in_range);
        assert!(tail_inequality(999, &[2, 2], DEFAULT_EPSILON).is_err());
        assert!(tail_inequality(5000, &[2], DEFAULT_EPSILON).is_err());
        assert!(tail_inequality(5000, &[2, 3], DEFAULT_EPSILON).is_err());
    }

    #[test]
    fn repeated_lists() {
        assert_eq!(parse_repeated_list("3,2x3,1").unwrap(), [3, 2, 2, 2, 1]);
        assert!(parse_repeated_list("2xq").is_err());
    }
}
