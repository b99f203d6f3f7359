//! Log-normal primitives: CDF, partial and truncated moments, and the
//! Fenton–Wilkinson moment-matched sum.

use crate::math;
use crate::{ModelError, Result};

const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Standard normal CDF.
#[inline]
pub fn phi(z: f64) -> f64 {
    0.5 * math::erfc(-z / SQRT_2)
}

/// Standard normal survival function, accurate in the upper tail.
#[inline]
pub fn phi_c(z: f64) -> f64 {
    0.5 * math::erfc(z / SQRT_2)
}

/// Φ(b) − Φ(a) for a ≤ b, evaluated on the tail side that keeps precision.
#[inline]
fn phi_diff(a: f64, b: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    if a > 0.0 {
        phi_c(a) - phi_c(b)
    } else {
        phi(b) - phi(a)
    }
}

/// Converts a dB-scale shadowing standard deviation to natural-log scale.
#[inline]
pub fn sigma_from_db(sigma_db: f64) -> f64 {
    sigma_db * math::LN_10 / 10.0
}

/// A log-normal random variable, `X = exp(mu + sigma·Z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormal {
    pub mu: f64,
    pub sigma: f64,
}

impl LogNormal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(ModelError::Domain { what: "log-normal mu", value: mu });
        }
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(ModelError::Domain { what: "log-normal sigma", value: sigma });
        }
        let d = LogNormal { mu, sigma };
        if !d.mean().is_finite() {
            return Err(ModelError::Domain { what: "log-normal mean", value: mu });
        }
        Ok(d)
    }

    /// Log-normal with median `median` and natural-log scale `sigma`.
    pub fn from_median(median: f64, sigma: f64) -> Result<Self> {
        if !(median > 0.0) || !median.is_finite() {
            return Err(ModelError::Domain { what: "log-normal median", value: median });
        }
        Self::new(math::ln(median), sigma)
    }

    /// Deterministic value `x` as a degenerate log-normal.
    pub fn constant(x: f64) -> Result<Self> {
        Self::from_median(x, 0.0)
    }

    #[inline]
    pub fn median(&self) -> f64 {
        math::exp(self.mu)
    }

    #[inline]
    pub fn mean(&self) -> f64 {
        math::exp(self.mu + 0.5 * self.sigma * self.sigma)
    }

    #[inline]
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        m * m * math::exp_m1(self.sigma * self.sigma)
    }

    /// `k·X` for k > 0.
    #[inline]
    pub fn scaled(&self, k: f64) -> Self {
        LogNormal { mu: self.mu + math::ln(k), sigma: self.sigma }
    }

    /// The size-biased variable `exp(sigma²)·X`.
    #[inline]
    pub fn tilted(&self) -> Self {
        LogNormal { mu: self.mu + self.sigma * self.sigma, sigma: self.sigma }
    }

    #[inline]
    fn z(&self, x: f64) -> f64 {
        (math::ln(x) - self.mu) / self.sigma
    }

    /// P(X ≤ x), with x ≤ 0 giving 0 and x = ∞ giving 1.
    #[inline]
    pub fn cdf_at(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if self.sigma == 0.0 {
            return if self.mu <= math::ln(x) { 1.0 } else { 0.0 };
        }
        phi(self.z(x))
    }

    /// P(X ≤ x) for x > 0.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(ModelError::Domain { what: "cdf argument", value: x });
        }
        Ok(self.cdf_at(x))
    }

    /// P(X > x).
    #[inline]
    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if self.sigma == 0.0 {
            return if self.mu > math::ln(x) { 1.0 } else { 0.0 };
        }
        phi_c(self.z(x))
    }

    /// P(lo ≤ X ≤ hi); either bound may be 0 or ∞.
    #[inline]
    pub fn prob_between(&self, lo: f64, hi: f64) -> f64 {
        if !(lo <= hi) {
            return 0.0;
        }
        if self.sigma == 0.0 {
            return if self.between_exact(lo, hi) { 1.0 } else { 0.0 };
        }
        let za = if lo <= 0.0 { f64::NEG_INFINITY } else { self.z(lo) };
        let zb = self.z(hi);
        phi_diff(za, zb)
    }

    #[inline]
    fn between_exact(&self, lo: f64, hi: f64) -> bool {
        (lo <= 0.0 || math::ln(lo) <= self.mu) && self.mu <= math::ln(hi)
    }

    /// E[X·1{lo ≤ X ≤ hi}].
    #[inline]
    pub fn partial_mean(&self, lo: f64, hi: f64) -> f64 {
        if !(lo <= hi) {
            return 0.0;
        }
        if self.sigma == 0.0 {
            return if self.between_exact(lo, hi) { self.median() } else { 0.0 };
        }
        let za = if lo <= 0.0 { f64::NEG_INFINITY } else { self.z(lo) - self.sigma };
        let zb = self.z(hi) - self.sigma;
        self.mean() * phi_diff(za, zb)
    }

    /// E[X | X ≤ cap].
    pub fn truncated_mean(&self, cap: f64) -> Result<f64> {
        if !(cap > 0.0) {
            return Err(ModelError::Domain { what: "truncation cap", value: cap });
        }
        let mass = self.cdf_at(cap);
        if !(mass >= f64::MIN_POSITIVE) {
            return Err(ModelError::NegligibleMass { cap });
        }
        Ok(self.partial_mean(0.0, cap) / mass)
    }
}

/// P(X ≤ x) for x > 0.
pub fn cdf(x: f64, d: &LogNormal) -> Result<f64> {
    d.cdf(x)
}

/// E[X | X ≤ cap], written g(k, E) in the energy terms.
pub fn truncated_mean(d: &LogNormal, cap: f64) -> Result<f64> {
    d.truncated_mean(cap)
}

/// Fenton–Wilkinson approximation of `A + B` where `ln A`, `ln B` are
/// jointly normal with correlation `rho`.
pub fn fw_sum(a: &LogNormal, b: &LogNormal, rho: f64) -> Result<LogNormal> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(ModelError::Domain { what: "correlation", value: rho });
    }
    Ok(fw(a, b, rho))
}

/// Exact covariance of two jointly log-normal variables.
#[inline]
pub fn lognormal_cov(a: &LogNormal, b: &LogNormal, rho: f64) -> f64 {
    a.mean() * b.mean() * math::exp_m1(rho * a.sigma * b.sigma)
}

#[inline]
pub(crate) fn fw(a: &LogNormal, b: &LogNormal, rho: f64) -> LogNormal {
    let m = a.mean() + b.mean();
    let v = a.variance() + b.variance() + 2.0 * lognormal_cov(a, b, rho);
    fw_from_moments(m, v)
}

#[inline]
pub(crate) fn fw_from_moments(m: f64, v: f64) -> LogNormal {
    let s2 = math::ln_1p(v.max(0.0) / (m * m));
    LogNormal { mu: math::ln(m) - 0.5 * s2, sigma: math::sqrt(s2) }
}

/// P(B + R + c ≤ D) for independent log-normals B, R, D and a constant
/// c ≥ 0, via the correlated ratio form
/// `B·(s_d) + R·(s_d) + c·s_d ≤ median(D)` collapsed with Fenton–Wilkinson.
pub fn prob_sum_below(b: &LogNormal, r: &LogNormal, c: f64, d: &LogNormal) -> f64 {
    let sd2 = d.sigma * d.sigma;
    let xb = LogNormal { mu: b.mu, sigma: math::sqrt(b.sigma * b.sigma + sd2) };
    let xr = LogNormal { mu: r.mu, sigma: math::sqrt(r.sigma * r.sigma + sd2) };
    let denom = xb.sigma * xr.sigma;
    let rho = if denom > 0.0 { (sd2 / denom).min(1.0) } else { 0.0 };
    let mut u = fw(&xb, &xr, rho);
    if c > 0.0 {
        let t = LogNormal { mu: math::ln(c), sigma: d.sigma };
        // log-covariances of each summand with t are both sd2
        let cov = lognormal_cov(&xb, &t, unit_corr(sd2, xb.sigma, t.sigma))
            + lognormal_cov(&xr, &t, unit_corr(sd2, xr.sigma, t.sigma));
        let m = u.mean() + t.mean();
        let v = u.variance() + t.variance() + 2.0 * cov;
        u = fw_from_moments(m, v);
    }
    u.cdf_at(math::exp(d.mu))
}

#[inline]
fn unit_corr(cov: f64, sa: f64, sb: f64) -> f64 {
    let den = sa * sb;
    if den > 0.0 {
        (cov / den).clamp(-1.0, 1.0)
    } else {
        0.0
    }
}
