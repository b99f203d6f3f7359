//! Expected RF energy model and EEA membership.

use crate::math;
use crate::rea::{p_low, ModelInputs};
use crate::stats::fw;

/// The four conditional terms of the expected energy and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub e_cr: f64,
    pub e_cd: f64,
    pub e_er_lb: f64,
    pub e_ed_ub: f64,
    pub total: f64,
}

/// Closed-form estimate of the expected energy for `inp`.
pub fn expected_rf_energy(inp: &ModelInputs) -> EnergyEstimate {
    let d = &inp.d;
    let caps = &inp.caps;
    let Some(rd) = inp.relay else {
        let e_cd = d.partial_mean(0.0, caps.direct);
        return EnergyEstimate { e_cr: 0.0, e_cd, e_er_lb: 0.0, e_ed_ub: 0.0, total: e_cd };
    };
    let (b, r) = (&rd.b, &rd.r);
    let c = inp.dsp;
    let pb = b.cdf_at(caps.backhaul);
    let pr = r.cdf_at(caps.relay);
    let d_over = d.sf(caps.direct);

    let e_cr = d_over * (b.partial_mean(0.0, caps.backhaul) * pr + pb * r.partial_mean(0.0, caps.relay) + c * pb * pr);
    let e_cd = (1.0 - pb * pr) * d.partial_mean(0.0, caps.direct);

    let s = fw(b, r, 0.0);
    let t_r = inp.t_relay();
    let (p1, p2) = p_low(d, b, r, caps, c);
    let k = math::exp(s.sigma * s.sigma);
    let (p1_s, _) = p_low(d, &b.scaled(k), &r.scaled(k), caps, c);
    let d_mid = d.prob_between(t_r, caps.direct);
    let e_er_lb = s.mean() * p1_s + d_mid * s.partial_mean(0.0, caps.relay) + c * (p1 + p2);

    let (p1_d, _) = p_low(&d.tilted(), b, r, caps, c);
    let e_ed_ub = (d.partial_mean(0.0, caps.direct) * pb * pr
        - d.mean() * p1_d
        - d.partial_mean(t_r, caps.direct) * s.cdf_at(caps.relay))
    .max(0.0);

    EnergyEstimate { e_cr, e_cd, e_er_lb, e_ed_ub, total: e_cr + e_er_lb + e_cd + e_ed_ub }
}

/// EEA membership: `Ê ≤ E_T`.
pub fn eea_membership(est: &EnergyEstimate, e_t: f64) -> bool {
    est.total <= e_t
}

/// Lower-bound estimate of the relay's radiated RF energy (raw joules,
/// before its amplifier multiplier).
pub fn expected_relay_rf(inp: &ModelInputs) -> f64 {
    let Some(rd) = inp.relay else {
        return 0.0;
    };
    let caps = &inp.caps;
    let (b, r) = (&rd.b, &rd.r);
    let pb = b.cdf_at(caps.backhaul);
    let forced = inp.d.sf(caps.direct) * pb * r.partial_mean(0.0, caps.relay);
    let (p1, p2) = p_low(&inp.d, b, &r.tilted(), caps, inp.dsp);
    (forced + r.mean() * (p1 + p2)) / inp.eta_r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rea::{Caps, RelayDists};
    use crate::stats::LogNormal;

    fn c(x: f64) -> LogNormal {
        LogNormal::constant(x).unwrap()
    }

    fn inputs(d: f64, b: f64, r: f64) -> ModelInputs {
        ModelInputs {
            d: c(d),
            relay: Some(RelayDists { b: c(b), r: c(r) }),
            caps: Caps { direct: 1.0, backhaul: 1.0, relay: 0.5 },
            dsp: 0.0,
            eta_r: 1.0,
        }
    }

    #[test]
    fn relaying_cheaper() {
        let e = expected_rf_energy(&inputs(0.7, 0.05, 0.3));
        assert!((e.total - 0.35).abs() < 1e-12, "{e:?}");
        assert!((expected_relay_rf(&inputs(0.7, 0.05, 0.3)) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn direct_cheaper() {
        let e = expected_rf_energy(&inputs(0.2, 0.05, 0.3));
        assert!((e.total - 0.2).abs() < 1e-12, "{e:?}");
        assert_eq!(expected_relay_rf(&inputs(0.2, 0.05, 0.3)), 0.0);
    }

    #[test]
    fn forced_relaying() {
        let e = expected_rf_energy(&inputs(1.4, 0.05, 0.3));
        assert!((e.e_cr - 0.35).abs() < 1e-12 && (e.total - 0.35).abs() < 1e-12);
    }

    #[test]
    fn membership_nested() {
        let e = expected_rf_energy(&inputs(0.7, 0.05, 0.3));
        assert!(!eea_membership(&e, 0.3) && eea_membership(&e, 0.4));
    }
}
