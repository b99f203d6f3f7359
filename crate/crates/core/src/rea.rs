//! Relaying-probability model: coverage-forced probabilities, the lower
//! bound on energy-efficient relaying, REA membership and the circuitry
//! substitution.

use crate::schemes::{EnergyProfile, SchemeKind};
use crate::stats::{fw, prob_sum_below, LogNormal};

/// Energy caps seen by the comparisons, after any circuitry scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Caps {
    /// Cap on direct transmission; `f64::INFINITY` when DTx is uncapped.
    pub direct: f64,
    /// Cap on the BS→relay hop.
    pub backhaul: f64,
    /// Cap on the relay→user hop.
    pub relay: f64,
}

/// Link distributions of the relaying option.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayDists {
    pub b: LogNormal,
    pub r: LogNormal,
}

/// Per-point RF energy distributions before circuitry substitution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawInputs {
    pub d: LogNormal,
    pub relay: Option<RelayDists>,
    /// Whether DTx is subject to the BS cap.
    pub direct_capped: bool,
}

/// Inputs consumed by every closed form: distributions, caps and the
/// constant processing energy added to the relaying option.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelInputs {
    pub d: LogNormal,
    pub relay: Option<RelayDists>,
    pub caps: Caps,
    pub dsp: f64,
    /// Amplifier multiplier applied to the relay hop.
    pub eta_r: f64,
}

impl ModelInputs {
    /// Plain RF inputs: unit multipliers and no processing energy.
    pub fn plain(raw: &RawInputs, e_b_max: f64, e_r_max: f64) -> ModelInputs {
        ModelInputs {
            d: raw.d,
            relay: raw.relay,
            caps: Caps {
                direct: if raw.direct_capped { e_b_max } else { f64::INFINITY },
                backhaul: e_b_max,
                relay: e_r_max,
            },
            dsp: 0.0,
            eta_r: 1.0,
        }
    }

    #[inline]
    pub(crate) fn t_relay(&self) -> f64 {
        self.caps.relay + self.dsp
    }
}

/// Replaces each energy by its circuitry-inclusive counterpart: link
/// energies scale by the station's amplifier multiplier, caps scale alike
/// and the scheme's processing energy joins the relaying option.
pub fn with_circuitry(raw: &RawInputs, profile: &EnergyProfile, scheme: SchemeKind) -> ModelInputs {
    let relay = if scheme.uses_relay() {
        raw.relay.map(|rd| RelayDists { b: rd.b.scaled(profile.eta_b), r: rd.r.scaled(profile.eta_r) })
    } else {
        None
    };
    ModelInputs {
        d: raw.d.scaled(profile.eta_b),
        relay,
        caps: Caps {
            direct: if raw.direct_capped { profile.eta_b * profile.e_b_max } else { f64::INFINITY },
            backhaul: profile.eta_b * profile.e_b_max,
            relay: profile.eta_r * profile.e_r_max,
        },
        dsp: profile.dsp(scheme),
        eta_r: profile.eta_r,
    }
}

/// Closed-form decision probabilities at one user location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionProbabilities {
    pub p_cr: f64,
    pub p_cd: f64,
    pub p_low1: f64,
    pub p_low2: f64,
    pub p_low: f64,
    pub p_ed_ub: f64,
    pub outage_ok: bool,
}

impl DecisionProbabilities {
    /// Lower bound on the probability that the relay is used.
    #[inline]
    pub fn p_relay(&self) -> f64 {
        self.p_low + self.p_cr
    }
}

/// (P_CR, P_CD): relaying forced because DTx exceeds its cap, and DTx
/// forced because a relay hop exceeds its cap.
pub fn coverage_probs(e_d: &LogNormal, e_b: &LogNormal, e_r: &LogNormal, caps: &Caps) -> (f64, f64) {
    let both = e_b.cdf_at(caps.backhaul) * e_r.cdf_at(caps.relay);
    (e_d.sf(caps.direct) * both, e_d.cdf_at(caps.direct) * (1.0 - both))
}

/// (P_low⁽¹⁾, P_low⁽²⁾) for relaying-option processing energy `dsp`.
///
/// P_low⁽¹⁾ only keeps outcomes with E_d below `min(t_r, cap_d, cap_b + dsp)`,
/// so it stays a lower bound when the circuitry scaling reorders the caps.
pub fn p_low(e_d: &LogNormal, e_b: &LogNormal, e_r: &LogNormal, caps: &Caps, dsp: f64) -> (f64, f64) {
    let t_r = caps.relay + dsp;
    let t_lo = t_r.min(caps.direct).min(caps.backhaul + dsp);
    let t_br = caps.backhaul + caps.relay + dsp;
    let s = fw(e_b, e_r, 0.0);
    let sum_below = prob_sum_below(e_b, e_r, dsp, e_d);
    let upper = e_d.prob_between(t_lo, t_br) * s.cdf_at(caps.backhaul + caps.relay) + e_d.sf(t_br);
    let p1 = (sum_below - upper).max(0.0);
    let p2 = if t_r < caps.direct { e_d.prob_between(t_r, caps.direct) * s.cdf_at(caps.relay) } else { 0.0 };
    let p1 = p1.min(1.0);
    (p1, p2.min(1.0 - p1))
}

/// All decision probabilities for `inp`; the outage flag uses `p_out`.
pub fn decision_probabilities(inp: &ModelInputs, p_out: f64) -> DecisionProbabilities {
    let d_ok = inp.d.cdf_at(inp.caps.direct);
    let Some(rd) = inp.relay else {
        let probs = DecisionProbabilities {
            p_cr: 0.0,
            p_cd: d_ok,
            p_low1: 0.0,
            p_low2: 0.0,
            p_low: 0.0,
            p_ed_ub: 0.0,
            outage_ok: false,
        };
        return DecisionProbabilities { outage_ok: outage_check(&probs, p_out), ..probs };
    };
    let (p_cr, p_cd) = coverage_probs(&inp.d, &rd.b, &rd.r, &inp.caps);
    let (p_low1, p_low2) = p_low(&inp.d, &rd.b, &rd.r, &inp.caps, inp.dsp);
    let both = d_ok * rd.b.cdf_at(inp.caps.backhaul) * rd.r.cdf_at(inp.caps.relay);
    let p_low = p_low1 + p_low2;
    let probs = DecisionProbabilities {
        p_cr,
        p_cd,
        p_low1,
        p_low2,
        p_low,
        p_ed_ub: (both - p_low).max(0.0),
        outage_ok: false,
    };
    // both feasible + CR + CD, written through its complement
    let covered = 1.0 - inp.d.sf(inp.caps.direct) * (1.0 - rd.b.cdf_at(inp.caps.backhaul) * rd.r.cdf_at(inp.caps.relay));
    DecisionProbabilities { outage_ok: 1.0 - p_out <= covered, ..probs }
}

/// Outage condition recomputed from the probabilities alone:
/// P(both feasible) + P_CR + P_CD ≥ 1 − P_out.
pub fn outage_check(probs: &DecisionProbabilities, p_out: f64) -> bool {
    // P_ED upper bound plus P_low equals P(both feasible) by construction
    let both = probs.p_ed_ub + probs.p_low;
    1.0 - p_out <= both + probs.p_cr + probs.p_cd
}

/// Model-1 REA membership: `P_T ≤ P_low + P_CR`.
pub fn rea_membership(probs: &DecisionProbabilities, p_t: f64) -> bool {
    p_t <= probs.p_relay()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> LogNormal {
        LogNormal::constant(x).unwrap()
    }

    const CAPS: Caps = Caps { direct: 1.0, backhaul: 1.0, relay: 0.5 };

    #[test]
    fn deterministic_coverage() {
        assert_eq!(coverage_probs(&c(1.2), &c(0.1), &c(0.3), &CAPS), (1.0, 0.0));
        assert_eq!(coverage_probs(&c(0.8), &c(0.1), &c(0.3), &CAPS).0, 0.0);
        assert_eq!(coverage_probs(&c(0.8), &c(0.1), &c(0.7), &CAPS), (0.0, 1.0));
    }

    #[test]
    fn deterministic_p_low_one() {
        let (p1, p2) = p_low(&c(0.45), &c(0.1), &c(0.2), &CAPS, 0.0);
        assert_eq!(p1 + p2, 1.0);
        let (p1, p2) = p_low(&c(0.8), &c(0.1), &c(0.2), &CAPS, 0.0);
        assert_eq!((p1, p2), (0.0, 1.0));
    }

    #[test]
    fn reordered_caps_do_not_count_forced_relaying() {
        let caps = Caps { direct: 1.0, backhaul: 1.0, relay: 2.0 };
        let (p1, p2) = p_low(&c(1.2), &c(0.1), &c(0.3), &caps, 0.0);
        assert_eq!((p1, p2), (0.0, 0.0));
        let (p_cr, _) = coverage_probs(&c(1.2), &c(0.1), &c(0.3), &caps);
        assert_eq!(p_cr, 1.0);
    }

    #[test]
    fn dominated_relay() {
        let d = LogNormal::from_median(0.05, 0.2).unwrap();
        let b = LogNormal::from_median(5.0, 0.2).unwrap();
        let r = LogNormal::from_median(0.01, 0.2).unwrap();
        let (p1, p2) = p_low(&d, &b, &r, &CAPS, 0.0);
        assert!(p1 + p2 < 1e-12);
    }

    #[test]
    fn circuitry_identity_and_shift() {
        let raw = RawInputs {
            d: LogNormal::new(-1.0, 0.7).unwrap(),
            relay: Some(RelayDists { b: LogNormal::new(-4.0, 0.3).unwrap(), r: LogNormal::new(-2.0, 0.5).unwrap() }),
            direct_capped: true,
        };
        let mut prof = EnergyProfile {
            e_b_max: 1.0,
            e_r_max: 0.5,
            eta_b: 1.0,
            eta_r: 1.0,
            e_b_tx_plus_u_rx: 0.09,
            e_b_idle: 0.025,
            e_r_idle: 0.01,
            e_dsp_2hop: 0.0,
            e_dsp_plus_pdf: 0.0,
        };
        let same = with_circuitry(&raw, &prof, SchemeKind::TwoHop);
        assert_eq!(same, ModelInputs::plain(&raw, 1.0, 0.5));
        prof.eta_b = 2.0;
        let shifted = with_circuitry(&raw, &prof, SchemeKind::TwoHop);
        assert!((shifted.d.mu - (raw.d.mu + core::f64::consts::LN_2)).abs() < 1e-15);
        assert_eq!(shifted.d.sigma, raw.d.sigma);
    }

    #[test]
    fn outage_extremes() {
        let inp = ModelInputs {
            d: c(0.3),
            relay: Some(RelayDists { b: c(0.1), r: c(0.1) }),
            caps: CAPS,
            dsp: 0.0,
            eta_r: 1.0,
        };
        assert!(decision_probabilities(&inp, 1e-9).outage_ok);
        let far = ModelInputs {
            d: LogNormal::from_median(1e6, 0.69).unwrap(),
            relay: Some(RelayDists { b: LogNormal::from_median(1e5, 0.69).unwrap(), r: c(0.1) }),
            ..inp
        };
        let p = decision_probabilities(&far, 0.02);
        assert!(!p.outage_ok && !outage_check(&p, 0.02));
    }
}
