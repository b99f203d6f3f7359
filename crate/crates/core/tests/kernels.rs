use proptest::prelude::*;
use relayarea_core::stats::{cdf, fw_sum, lognormal_cov, phi, phi_c, sigma_from_db, truncated_mean, LogNormal};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Composite Simpson rule for E[X·1{X ≤ cap}] / P(X ≤ cap), integrating the
/// normal density in the log domain.
fn truncated_mean_quadrature(d: &LogNormal, cap: f64) -> f64 {
    let hi = cap.ln();
    let lo = d.mu - 12.0 * d.sigma;
    if hi <= lo {
        return f64::NAN;
    }
    let n = 20_000;
    let h = (hi - lo) / n as f64;
    let pdf = |y: f64| {
        let z = (y - d.mu) / d.sigma;
        (-0.5 * z * z).exp() / (d.sigma * (2.0 * std::f64::consts::PI).sqrt())
    };
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=n {
        let y = lo + i as f64 * h;
        let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        num += w * y.exp() * pdf(y);
        den += w * pdf(y);
    }
    num / den
}

#[test]
fn normal_cdf_reference_values() {
    assert!(rel(phi(-1.5), 0.06680720126885807) < 1e-13);
    assert!(rel(phi(0.3), 0.6179114221889526) < 1e-13);
    assert!(rel(phi_c(8.0), 6.22096057427174e-16) < 1e-10);
}

#[test]
fn truncated_mean_reference_values() {
    let d = LogNormal::new(0.0, 0.5).unwrap();
    assert!(rel(truncated_mean(&d, 1.2).unwrap(), 0.7871123916368536) < 1e-10);
    let d = LogNormal::new(-2.0, sigma_from_db(6.0)).unwrap();
    assert!(rel(truncated_mean(&d, 0.05).unwrap(), 0.02650708804405815) < 1e-10);
}

#[test]
fn truncated_mean_against_quadrature() {
    for &s_db in &[1.0, 3.0, 6.0, 8.0] {
        for &mu in &[-3.0, 0.0, 1.5] {
            let d = LogNormal::new(mu, sigma_from_db(s_db)).unwrap();
            for &q in &[-2.0, -0.5, 0.0, 1.0, 3.0] {
                let cap = (mu + q * d.sigma).exp();
                let a = truncated_mean(&d, cap).unwrap();
                let b = truncated_mean_quadrature(&d, cap);
                assert!(rel(a, b) <= 1e-6, "sigma {s_db} dB mu {mu} q {q}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn domain_errors() {
    let d = LogNormal::new(0.0, 1.0).unwrap();
    assert!(cdf(0.0, &d).is_err());
    assert!(truncated_mean(&d, -1.0).is_err());
    assert!(LogNormal::new(0.0, -0.1).is_err());
    assert!(fw_sum(&d, &d, 1.5).is_err());
}

proptest! {
    #[test]
    fn cdf_is_monotone(mu in -5.0f64..5.0, s in 0.01f64..2.0, x in 1e-3f64..1e3, k in 1.0f64..10.0) {
        let d = LogNormal::new(mu, s).unwrap();
        let (a, b) = (cdf(x, &d).unwrap(), cdf(x * k, &d).unwrap());
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(a <= b);
    }

    #[test]
    fn truncated_mean_below_cap_and_monotone(mu in -3.0f64..3.0, s in 0.05f64..1.5, q in -2.5f64..2.5, k in 1.0f64..4.0) {
        let d = LogNormal::new(mu, s).unwrap();
        let cap = (mu + q * s).exp();
        let t1 = truncated_mean(&d, cap).unwrap();
        let t2 = truncated_mean(&d, cap * k).unwrap();
        prop_assert!(t1 <= cap * (1.0 + 1e-12));
        prop_assert!(t1 <= t2 * (1.0 + 1e-12));
        prop_assert!(t2 <= d.mean() * (1.0 + 1e-12));
    }

    #[test]
    fn fw_moment_identity(
        mu_a in -5.0f64..2.0, mu_b in -5.0f64..2.0,
        sa_db in 0.0f64..10.0, sb_db in 0.0f64..10.0, rho in -1.0f64..1.0,
    ) {
        let a = LogNormal::new(mu_a, sigma_from_db(sa_db)).unwrap();
        let b = LogNormal::new(mu_b, sigma_from_db(sb_db)).unwrap();
        let s = fw_sum(&a, &b, rho).unwrap();
        let m = a.mean() + b.mean();
        let v = a.variance() + b.variance() + 2.0 * lognormal_cov(&a, &b, rho);
        prop_assert!(rel(s.mean(), m) <= 1e-12);
        if v > 1e-12 * m * m {
            prop_assert!(rel(s.variance(), v) <= 1e-10);
        }
    }

    #[test]
    fn partial_means_add_up(mu in -3.0f64..3.0, s in 0.05f64..1.5, q in -2.0f64..2.0) {
        let d = LogNormal::new(mu, s).unwrap();
        let c = (mu + q * s).exp();
        let total = d.partial_mean(0.0, c) + d.partial_mean(c, f64::INFINITY);
        prop_assert!(rel(total, d.mean()) <= 1e-12);
        prop_assert!((d.prob_between(0.0, c) - d.cdf_at(c)).abs() <= 1e-15);
    }
}
