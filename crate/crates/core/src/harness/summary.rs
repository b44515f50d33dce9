use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Type-7 (linear interpolation) sample quantile at lower probability `p`.
fn type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Upper-tail empirical quantiles: for each `q` the value exceeded by a
/// fraction `q` of the sample (type-7 quantile at `1 - q`).
pub fn quantile_report(samples: &[f64], upper: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter(
            "quantiles of an empty sample".into(),
        ));
    }
    if samples.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter("sample contains NaN".into()));
    }
    if let Some(q) = upper.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::InvalidParameter(format!(
            "tail probability {q} outside [0, 1]"
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(upper
        .iter()
        .map(|&q| (q, type7(&sorted, 1.0 - q)))
        .collect())
}

/// Probability that a draw from `alt` exceeds a draw from `null`, ties
/// counting one half (the Mann-Whitney AUC).
pub fn auc(null: &[f64], alt: &[f64]) -> Result<f64> {
    if null.is_empty() || alt.is_empty() {
        return Err(Error::InvalidParameter(
            "AUC needs two nonempty samples".into(),
        ));
    }
    let mut pooled: Vec<(f64, bool)> = null
        .iter()
        .map(|&v| (v, false))
        .chain(alt.iter().map(|&v| (v, true)))
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Sum of midranks of the alternative sample.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let mid = (i + j + 1) as f64 / 2.0;
        rank_sum += mid * pooled[i..j].iter().filter(|x| x.1).count() as f64;
        i = j;
    }
    let (m, n) = (alt.len() as f64, null.len() as f64);
    Ok((rank_sum - m * (m + 1.0) / 2.0) / (m * n))
}

/// Histogram with Freedman-Diaconis bin width. Returns `(lo, hi, count)`
/// per bin; the last bin is closed on the right.
pub fn histogram(samples: &[f64]) -> Result<Vec<(f64, f64, usize)>> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter(
            "histogram of an empty sample".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    let iqr = type7(&sorted, 0.75) - type7(&sorted, 0.25);
    let width = 2.0 * iqr / (sorted.len() as f64).cbrt();
    let bins = if max > min && width > 0.0 {
        (((max - min) / width).ceil() as usize).clamp(1, 10_000)
    } else {
        1
    };
    let step = if max > min {
        (max - min) / bins as f64
    } else {
        1.0
    };
    let mut counts = vec![0usize; bins];
    for &v in &sorted {
        let k = (((v - min) / step) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| (min + k as f64 * step, min + (k + 1) as f64 * step, c))
        .collect())
}

pub fn histogram_csv(samples: &[f64]) -> Result<String> {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (lo, hi, c) in histogram(samples)? {
        let _ = writeln!(out, "{lo},{hi},{c}");
    }
    Ok(out)
}

pub fn quantile_csv(report: &[(f64, f64)]) -> String {
    let mut out = String::from("upper_tail,quantile\n");
    for (q, v) in report {
        let _ = writeln!(out, "{q},{v}");
    }
    out
}
