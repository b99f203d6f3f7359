//! Energy accounting for direct transmission, two-hop decode-forward and
//! partial decode-forward (PDF), and the numerical PDF allocation.
//!
//! Time is normalized to one block of two equal phases; an energy is
//! `½·P` per phase in which a station transmits with power `P`, and
//! "gains" are received SNR per unit power (`G/(N·γ)`).

use crate::math;
use crate::{ModelError, Result};

/// Energy caps, amplifier multipliers and circuitry offsets (joules).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyProfile {
    pub e_b_max: f64,
    pub e_r_max: f64,
    pub eta_b: f64,
    pub eta_r: f64,
    pub e_b_tx_plus_u_rx: f64,
    pub e_b_idle: f64,
    pub e_r_idle: f64,
    pub e_dsp_2hop: f64,
    pub e_dsp_plus_pdf: f64,
}

impl EnergyProfile {
    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("e_b_max", self.e_b_max),
            ("e_r_max", self.e_r_max),
            ("e_b_tx_plus_u_rx", self.e_b_tx_plus_u_rx),
            ("e_b_idle", self.e_b_idle),
            ("e_r_idle", self.e_r_idle),
            ("e_dsp_2hop", self.e_dsp_2hop),
            ("e_dsp_plus_pdf", self.e_dsp_plus_pdf),
        ];
        for (what, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(ModelError::Domain { what, value: v });
            }
        }
        if !(self.e_b_max > 0.0) {
            return Err(ModelError::Domain { what: "e_b_max", value: self.e_b_max });
        }
        if !(self.e_r_max > 0.0) {
            return Err(ModelError::Domain { what: "e_r_max", value: self.e_r_max });
        }
        if !(self.eta_b >= 1.0) {
            return Err(ModelError::Domain { what: "eta_b", value: self.eta_b });
        }
        if !(self.eta_r >= 1.0) {
            return Err(ModelError::Domain { what: "eta_r", value: self.eta_r });
        }
        Ok(())
    }

    /// Profile with unit amplifier multipliers and no circuitry offsets.
    pub fn transmit_only(&self) -> EnergyProfile {
        EnergyProfile {
            eta_b: 1.0,
            eta_r: 1.0,
            e_b_tx_plus_u_rx: 0.0,
            e_b_idle: 0.0,
            e_r_idle: 0.0,
            e_dsp_2hop: 0.0,
            e_dsp_plus_pdf: 0.0,
            ..*self
        }
    }

    /// Processing energy added when relaying with `kind`.
    pub fn dsp(&self, kind: SchemeKind) -> f64 {
        match kind {
            SchemeKind::Dtx => 0.0,
            SchemeKind::TwoHop => self.e_dsp_2hop,
            SchemeKind::EoPdf | SchemeKind::IrPdf => self.e_dsp_2hop + self.e_dsp_plus_pdf,
        }
    }

    /// Offsets paid regardless of the transmission outcome.
    pub fn idle_offsets(&self, n_r: usize) -> f64 {
        self.e_b_tx_plus_u_rx + self.e_b_idle + n_r as f64 * self.e_r_idle
    }
}

/// The coding schemes, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeKind {
    Dtx,
    TwoHop,
    EoPdf,
    IrPdf,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [SchemeKind::Dtx, SchemeKind::TwoHop, SchemeKind::EoPdf, SchemeKind::IrPdf];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Dtx => "dtx",
            SchemeKind::TwoHop => "two-hop",
            SchemeKind::EoPdf => "eo-pdf",
            SchemeKind::IrPdf => "ir-pdf",
        }
    }

    pub fn uses_relay(&self) -> bool {
        !matches!(self, SchemeKind::Dtx)
    }
}

/// RF energies radiated by the BS and the relay for one transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfDraw {
    pub e_bs: f64,
    pub e_relay: f64,
}

/// Total consumption of one transmission with `kind` in a sector with
/// `n_r` relays.
pub fn total_energy(kind: SchemeKind, rf: RfDraw, profile: &EnergyProfile, n_r: usize) -> f64 {
    let radiated = match kind {
        SchemeKind::Dtx => profile.eta_b * rf.e_bs,
        _ => profile.eta_b * rf.e_bs + profile.eta_r * rf.e_relay,
    };
    radiated + profile.dsp(kind) + profile.idle_offsets(n_r)
}

/// SNR per unit power on the direct, backhaul and access links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub g_d: f64,
    pub g_b: f64,
    pub g_r: f64,
}

/// What a PDF allocation minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdfObjective {
    /// Total transmit energy (EO-PDF).
    Total,
    /// Relay transmit energy, then total energy (IR-PDF).
    RelayOnly,
}

/// Per-station energy caps for the allocation (joules).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationCaps {
    pub bs: f64,
    pub relay: f64,
}

/// Transmit powers of one PDF block.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PdfPowers {
    /// Phase 1, BS, relayed part.
    pub p1r: f64,
    /// Phase 1, BS, direct part.
    pub p1d: f64,
    /// Phase 2, BS, coherent with the relay.
    pub p2r: f64,
    /// Phase 2, BS, direct part.
    pub p2d: f64,
    /// Phase 2, relay.
    pub pr: f64,
}

/// A PDF rate split and power allocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdfAllocation {
    pub e_b_phase1: f64,
    pub e_b_phase2: f64,
    pub e_r_phase2: f64,
    /// Rate carried by the relayed message (bits per channel use).
    pub rate_relayed: f64,
    pub powers: PdfPowers,
}

impl PdfAllocation {
    pub fn e_bs(&self) -> f64 {
        self.e_b_phase1 + self.e_b_phase2
    }

    pub fn total(&self) -> f64 {
        self.e_bs() + self.e_r_phase2
    }

    fn key(&self, obj: PdfObjective) -> (f64, f64) {
        match obj {
            PdfObjective::Total => (self.total(), 0.0),
            PdfObjective::RelayOnly => (self.e_r_phase2, self.total()),
        }
    }
}

/// Result of a PDF allocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdfOutcome {
    Feasible(PdfAllocation),
    Infeasible,
}

impl PdfOutcome {
    pub fn allocation(&self) -> Option<&PdfAllocation> {
        match self {
            PdfOutcome::Feasible(a) => Some(a),
            PdfOutcome::Infeasible => None,
        }
    }
}

#[inline]
fn half_cap(snr: f64) -> f64 {
    0.5 * math::log2(1.0 + snr)
}

/// Checks the half-duplex PDF rate constraints for `powers` at total rate
/// `rate` with `rate_relayed` bits routed through the relay.
pub fn pdf_rates_achievable(g: &LinkGains, rate: f64, rate_relayed: f64, p: &PdfPowers, tol: f64) -> bool {
    let rd = rate - rate_relayed;
    let a = math::sqrt(g.g_d * p.p2r) + math::sqrt(g.g_r * p.pr);
    let relay_ok = rate_relayed <= tol || rate_relayed <= half_cap(g.g_b * p.p1r / (1.0 + g.g_b * p.p1d)) + tol;
    let direct_ok = rd <= half_cap(g.g_d * p.p1d) + half_cap(g.g_d * p.p2d) + tol;
    let relayed_ok = rate_relayed <= half_cap(g.g_d * p.p1r) + half_cap(a * a) + tol;
    let sum_ok = rate <= half_cap(g.g_d * (p.p1r + p.p1d)) + half_cap(a * a + g.g_d * p.p2d) + tol;
    relay_ok && direct_ok && relayed_ok && sum_ok
}

/// Outer decision variables of the allocation search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPoint {
    pub rate_relayed: f64,
    pub p1d: f64,
    /// Phase-1 relayed power above the minimum that lets the relay decode.
    pub p1r_extra: f64,
}

/// Cheapest phase-2 completion for a fixed phase 1.
pub fn complete_split(
    g: &LinkGains,
    rate: f64,
    sp: &SplitPoint,
    obj: PdfObjective,
    caps: Option<StationCaps>,
) -> Option<PdfAllocation> {
    let rr = sp.rate_relayed.clamp(0.0, rate);
    let rd = rate - rr;
    let p1d = sp.p1d.max(0.0);
    let p1r = if rr > 0.0 {
        math::exp_m1(2.0 * rr * core::f64::consts::LN_2) * (1.0 + g.g_b * p1d) / g.g_b + sp.p1r_extra.max(0.0)
    } else {
        0.0
    };
    let x = (math::exp2(2.0 * rd) / (1.0 + g.g_d * p1d) - 1.0).max(0.0);
    let c3 = if rr > 0.0 { (math::exp2(2.0 * rr) / (1.0 + g.g_d * p1r) - 1.0).max(0.0) } else { 0.0 };
    let c4 = (math::exp2(2.0 * rate) / (1.0 + g.g_d * (p1r + p1d)) - 1.0).max(0.0);
    let y = c3.max(c4 - x);
    let amp = math::sqrt(y);
    let sg_r = math::sqrt(g.g_r);
    // t = √PR; coherent optimum for the combined amplitude
    let t_free = amp * sg_r / (g.g_d + g.g_r);
    let mut t_max = amp / sg_r;
    let mut t_min = 0.0;
    if let Some(c) = caps {
        t_max = t_max.min(math::sqrt(2.0 * c.relay));
        let budget = 2.0 * c.bs - p1r - p1d - x / g.g_d;
        if budget < 0.0 {
            return None;
        }
        let bs_amp = math::sqrt(g.g_d * budget);
        t_min = ((amp - bs_amp) / sg_r).max(0.0);
        if t_min > t_max * (1.0 + 1e-12) {
            return None;
        }
        t_min = t_min.min(t_max);
    }
    let t = match obj {
        PdfObjective::Total => t_free.clamp(t_min, t_max),
        PdfObjective::RelayOnly => t_min,
    };
    let bs_amp = (amp - sg_r * t).max(0.0);
    let powers = PdfPowers { p1r, p1d, p2r: bs_amp * bs_amp / g.g_d, p2d: x / g.g_d, pr: t * t };
    Some(PdfAllocation {
        e_b_phase1: 0.5 * (powers.p1r + powers.p1d),
        e_b_phase2: 0.5 * (powers.p2r + powers.p2d),
        e_r_phase2: 0.5 * powers.pr,
        rate_relayed: rr,
        powers,
    })
}

fn better(a: &PdfAllocation, b: &Option<PdfAllocation>, obj: PdfObjective) -> bool {
    match b {
        None => true,
        Some(b) => a.key(obj) < b.key(obj),
    }
}

/// Numerical PDF rate split and power allocation.
///
/// A coarse grid over (relayed rate, phase-1 direct power, extra phase-1
/// relayed power) is refined by a shrinking pattern search; phase 2 is
/// solved in closed form. The grid contains the pure direct and pure
/// two-hop operating points, so the result never does worse than either.
/// The relay-only search is also seeded with the total-energy optimum.
pub fn pdf_allocation(obj: PdfObjective, g: &LinkGains, rate: f64, caps: Option<StationCaps>) -> PdfOutcome {
    if !(rate > 0.0) || !(g.g_d > 0.0 && g.g_b > 0.0 && g.g_r > 0.0) {
        return PdfOutcome::Infeasible;
    }
    let seed = match obj {
        PdfObjective::Total => None,
        PdfObjective::RelayOnly => search(PdfObjective::Total, g, rate, caps, None).map(|(_, sp)| sp),
    };
    match search(obj, g, rate, caps, seed) {
        Some((a, _)) => PdfOutcome::Feasible(a),
        None => PdfOutcome::Infeasible,
    }
}

fn search(
    obj: PdfObjective,
    g: &LinkGains,
    rate: f64,
    caps: Option<StationCaps>,
    seed: Option<SplitPoint>,
) -> Option<(PdfAllocation, SplitPoint)> {
    let p_dtx = math::exp_m1(rate * core::f64::consts::LN_2) / g.g_d;
    let p_hop = math::exp_m1(2.0 * rate * core::f64::consts::LN_2) / g.g_b;
    let scale = p_dtx.min(p_hop);
    let mut levels = [0.0; 14];
    for (i, v) in levels.iter_mut().enumerate().skip(1) {
        *v = scale * math::powf(2.0, i as f64 - 9.0);
    }
    let mut best: Option<PdfAllocation> = None;
    let mut best_sp = SplitPoint { rate_relayed: 0.0, p1d: p_dtx, p1r_extra: 0.0 };
    let consider = |sp: SplitPoint, best: &mut Option<PdfAllocation>, best_sp: &mut SplitPoint| -> bool {
        if let Some(a) = complete_split(g, rate, &sp, obj, caps) {
            if better(&a, best, obj) {
                *best = Some(a);
                *best_sp = sp;
                return true;
            }
        }
        false
    };
    consider(SplitPoint { rate_relayed: 0.0, p1d: p_dtx, p1r_extra: 0.0 }, &mut best, &mut best_sp);
    consider(SplitPoint { rate_relayed: rate, p1d: 0.0, p1r_extra: 0.0 }, &mut best, &mut best_sp);
    if let Some(sp) = seed {
        consider(sp, &mut best, &mut best_sp);
    }
    const NR: usize = 24;
    for k in 0..=NR {
        let rr = rate * k as f64 / NR as f64;
        for &p1d in levels.iter().chain(core::iter::once(&p_dtx)) {
            for &extra in &levels {
                consider(SplitPoint { rate_relayed: rr, p1d, p1r_extra: extra }, &mut best, &mut best_sp);
            }
        }
    }
    best?;
    let mut steps = [rate / NR as f64, scale, scale];
    for _ in 0..60 {
        let mut moved = false;
        for dim in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut sp = best_sp;
                match dim {
                    0 => sp.rate_relayed = (sp.rate_relayed + sign * steps[0]).clamp(0.0, rate),
                    1 => sp.p1d = (sp.p1d + sign * steps[1]).max(0.0),
                    _ => sp.p1r_extra = (sp.p1r_extra + sign * steps[2]).max(0.0),
                }
                moved |= consider(sp, &mut best, &mut best_sp);
            }
        }
        if !moved {
            for s in steps.iter_mut() {
                *s *= 0.5;
            }
        }
    }
    best.map(|a| (a, best_sp))
}

/// Transmit energy of direct transmission over both phases.
pub fn dtx_energy(g: &LinkGains, rate: f64) -> f64 {
    math::exp_m1(rate * core::f64::consts::LN_2) / g.g_d
}

/// (BS, relay) transmit energy of two-hop decode-forward.
pub fn two_hop_energy(g: &LinkGains, rate: f64) -> (f64, f64) {
    let f = math::exp_m1(2.0 * rate * core::f64::consts::LN_2);
    (0.5 * f / g.g_b, 0.5 * f / g.g_r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> EnergyProfile {
        EnergyProfile {
            e_b_max: 1.0,
            e_r_max: 0.5,
            eta_b: 2.66,
            eta_r: 3.1,
            e_b_tx_plus_u_rx: 0.090,
            e_b_idle: 0.025,
            e_r_idle: 0.010,
            e_dsp_2hop: 0.050,
            e_dsp_plus_pdf: 0.0,
        }
    }

    #[test]
    fn dtx_offsets_only() {
        let e = total_energy(SchemeKind::Dtx, RfDraw { e_bs: 0.0, e_relay: 0.0 }, &reference(), 0);
        assert!((e - 0.115).abs() < 1e-15);
    }

    #[test]
    fn two_hop_hand_sum() {
        let e = total_energy(SchemeKind::TwoHop, RfDraw { e_bs: 0.1, e_relay: 0.05 }, &reference(), 2);
        assert!((e - 0.606).abs() < 1e-12, "{e}");
    }

    #[test]
    fn identity_accounting() {
        let p = reference().transmit_only();
        let e = total_energy(SchemeKind::TwoHop, RfDraw { e_bs: 0.3, e_relay: 0.07 }, &p, 3);
        assert!((e - 0.37).abs() < 1e-15);
    }

    #[test]
    fn pdf_reduces_to_dtx_without_relayed_message() {
        let g = LinkGains { g_d: 3.0e9, g_b: 5.0e10, g_r: 2.0e10 };
        let rate = 3.0;
        let sp = SplitPoint { rate_relayed: 0.0, p1d: dtx_energy(&g, rate), p1r_extra: 0.0 };
        let a = complete_split(&g, rate, &sp, PdfObjective::Total, None).unwrap();
        assert!((a.total() - dtx_energy(&g, rate)).abs() <= 1e-12 * dtx_energy(&g, rate));
        assert_eq!(a.e_r_phase2, 0.0);
    }

    #[test]
    fn pdf_bounded_by_two_hop_point() {
        let g = LinkGains { g_d: 1.0e8, g_b: 5.0e10, g_r: 2.0e10 };
        let rate = 3.0;
        let sp = SplitPoint { rate_relayed: rate, p1d: 0.0, p1r_extra: 0.0 };
        let a = complete_split(&g, rate, &sp, PdfObjective::Total, None).unwrap();
        let (b, r) = two_hop_energy(&g, rate);
        assert!(a.total() <= b + r);
        assert!(pdf_rates_achievable(&g, rate, a.rate_relayed, &a.powers, 1e-9));
    }

    #[test]
    fn relay_only_without_caps_is_direct() {
        let g = LinkGains { g_d: 1.0e8, g_b: 5.0e10, g_r: 2.0e10 };
        let a = *pdf_allocation(PdfObjective::RelayOnly, &g, 3.0, None).allocation().unwrap();
        assert_eq!(a.e_r_phase2, 0.0);
        assert!((a.total() - dtx_energy(&g, 3.0)).abs() <= 1e-12 * a.total());
    }

    #[test]
    fn infeasible_under_tight_caps() {
        let g = LinkGains { g_d: 1.0, g_b: 1.0, g_r: 1.0 };
        let out = pdf_allocation(PdfObjective::Total, &g, 3.0, Some(StationCaps { bs: 1e-3, relay: 1e-3 }));
        assert_eq!(out, PdfOutcome::Infeasible);
    }
}
