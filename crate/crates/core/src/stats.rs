//! Standardization, moments and normality checks for replicate samples.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::statistics::Statistics;

use crate::error::{Error, Result};

/// Smallest sample accepted by [`ks_test`].
pub const KS_MIN_SAMPLES: usize = 50;
/// Smallest sample accepted by [`variance_ratio`].
pub const RATIO_MIN_SAMPLES: usize = 100;

/// `(x_i − center) / scale`.
pub fn standardize(samples: &[f64], center: f64, scale: f64) -> Result<Vec<f64>> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidArgument(format!("scale {scale} must be positive")));
    }
    Ok(samples.iter().map(|x| (x - center) / scale).collect())
}

/// Standard normal distribution function, `Φ(x) = erfc(−x/√2) / 2`, using
/// the `statrs` complementary error function (rational approximations;
/// absolute error about 1e-11 near `x = 1`).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub sample_size: usize,
    /// `sup_x |F̂(x) − Φ(x)|`.
    pub ks_statistic: f64,
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
}

/// One-sample Kolmogorov–Smirnov distance to the standard normal, computed
/// exactly from the order statistics, with descriptive moments.
pub fn ks_test(samples: &[f64]) -> Result<NormalityReport> {
    let n = samples.len();
    if n < KS_MIN_SAMPLES {
        return Err(Error::Precondition(format!(
            "KS test needs at least {KS_MIN_SAMPLES} samples, got {n}"
        )));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("samples contain NaN".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = normal_cdf(x);
        d = d.max((i + 1) as f64 / nf - phi).max(phi - i as f64 / nf);
    }
    Ok(NormalityReport {
        sample_size: n,
        ks_statistic: d.clamp(0.0, 1.0),
        mean: mean(&sorted),
        sd: variance(&sorted).max(0.0).sqrt(),
        skewness: skewness(&sorted),
    })
}

pub fn mean(samples: &[f64]) -> f64 {
    samples.mean()
}

/// Unbiased sample variance.
pub fn variance(samples: &[f64]) -> f64 {
    samples.variance()
}

/// Unbiased sample covariance.
pub fn covariance(x: &[f64], y: &[f64]) -> f64 {
    x.covariance(y)
}

/// Moment skewness `m₃ / m₂^(3/2)`; zero for constant samples.
pub fn skewness(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mu = mean(samples);
    let (m2, m3) = samples.iter().fold((0.0, 0.0), |(a, b), x| {
        let d = x - mu;
        (a + d * d, b + d * d * d)
    });
    let (m2, m3) = (m2 / n, m3 / n);
    if m2 > 0.0 {
        m3 / m2.powf(1.5)
    } else {
        0.0
    }
}

/// Standard error of the sample mean.
pub fn se_mean(samples: &[f64]) -> f64 {
    (variance(samples) / samples.len() as f64).sqrt()
}

/// Standard error of the unbiased sample variance,
/// `sqrt((m₄ − (n−3)/(n−1) s⁴) / n)`.
pub fn se_variance(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mu = mean(samples);
    let s2 = variance(samples);
    let m4 = samples.iter().map(|x| (x - mu).powi(4)).sum::<f64>() / n;
    ((m4 - (n - 3.0) / (n - 1.0) * s2 * s2).max(0.0) / n).sqrt()
}

/// Standard error of the sample covariance: the standard error of the mean
/// of the centred products.
pub fn se_covariance(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let products: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    se_mean(&products)
}

/// Sample correlation; zero when either sample is constant.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let denom = (variance(x) * variance(y)).sqrt();
    if denom > 0.0 {
        covariance(x, y) / denom
    } else {
        0.0
    }
}

/// Variance shares `(r1, r2)` of two components with `r1 + r2 = 1`.
pub fn variance_ratio(delta1s: &[f64], delta2s: &[f64]) -> Result<(f64, f64)> {
    if delta1s.len() != delta2s.len() {
        return Err(Error::InvalidArgument(format!(
            "component samples differ in length ({} vs {})",
            delta1s.len(),
            delta2s.len()
        )));
    }
    if delta1s.len() < RATIO_MIN_SAMPLES {
        return Err(Error::Precondition(format!(
            "variance ratio needs at least {RATIO_MIN_SAMPLES} samples, got {}",
            delta1s.len()
        )));
    }
    let (v1, v2) = (variance(delta1s), variance(delta2s));
    let total = v1 + v2;
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("total variance is zero".into()));
    }
    let r1 = v1 / total;
    Ok((r1, 1.0 - r1))
}
