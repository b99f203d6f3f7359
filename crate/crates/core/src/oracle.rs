//! Seeded Monte-Carlo ground truth and the area error ratios ζ_R, ζ_E, ζ_I.
//!
//! Each grid point draws from its own ChaCha8 stream keyed by
//! `(seed, point index)`, so results do not depend on thread scheduling.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{sector_grid, CellLayout, UserPos};
use crate::math;
use crate::model::{ModelContext, PointEval};
use crate::par;
use crate::rea::RawInputs;
use crate::schemes::{EnergyProfile, SchemeKind};
use crate::Result;

/// Physical quantities the sampler draws from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerSetup {
    pub e_d0: f64,
    pub sigma_d: f64,
    /// Shadow-free (E_b⁽⁰⁾, σ_b, E_r⁽⁰⁾, σ_r) of the relaying option.
    pub relay: Option<(f64, f64, f64, f64)>,
    pub e_b_max: f64,
    pub e_r_max: f64,
    pub eta_b: f64,
    pub eta_r: f64,
    pub dsp: f64,
    pub direct_capped: bool,
}

impl SamplerSetup {
    pub fn new(raw: &RawInputs, profile: &EnergyProfile, scheme: SchemeKind) -> Self {
        SamplerSetup {
            e_d0: raw.d.median(),
            sigma_d: raw.d.sigma,
            relay: if scheme.uses_relay() {
                raw.relay.map(|r| (r.b.median(), r.b.sigma, r.r.median(), r.r.sigma))
            } else {
                None
            },
            e_b_max: profile.e_b_max,
            e_r_max: profile.e_r_max,
            eta_b: profile.eta_b,
            eta_r: profile.eta_r,
            dsp: profile.dsp(scheme),
            direct_capped: raw.direct_capped,
        }
    }
}

/// Outcome of one shadowing draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decision {
    /// Relaying because DTx exceeds its cap.
    CoverageRelay,
    /// DTx because a relay hop exceeds its cap.
    CoverageDirect,
    /// Both feasible, relaying cheaper (ties go to the relay).
    EfficientRelay,
    /// Both feasible, DTx cheaper.
    EfficientDirect,
    Outage,
}

/// Decision and consumed energies for one realization of the link energies.
/// Returns (decision, circuitry-inclusive energy, raw relay RF energy).
pub fn decide(setup: &SamplerSetup, e_d: f64, e_b: f64, e_r: f64) -> (Decision, f64, f64) {
    let d_ok = !setup.direct_capped || e_d <= setup.e_b_max;
    let direct_cost = setup.eta_b * e_d;
    let relay_ok = setup.relay.is_some() && e_b <= setup.e_b_max && e_r <= setup.e_r_max;
    let relay_cost = setup.eta_b * e_b + setup.eta_r * e_r + setup.dsp;
    match (d_ok, relay_ok) {
        (false, true) => (Decision::CoverageRelay, relay_cost, e_r),
        (true, false) => (Decision::CoverageDirect, direct_cost, 0.0),
        (true, true) if relay_cost <= direct_cost => (Decision::EfficientRelay, relay_cost, e_r),
        (true, true) => (Decision::EfficientDirect, direct_cost, 0.0),
        (false, false) => (Decision::Outage, 0.0, 0.0),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    sum: f64,
    sumsq: f64,
}

impl Moments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sumsq += x * x;
    }

    fn mean(&self, n: u64) -> f64 {
        self.sum / n as f64
    }

    fn se(&self, n: u64) -> f64 {
        let m = self.mean(n);
        let var = (self.sumsq / n as f64 - m * m).max(0.0);
        math::sqrt(var / n as f64)
    }
}

/// Empirical decision frequencies and mean energies at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub n: u64,
    pub k_cr: u64,
    pub k_cd: u64,
    pub k_er: u64,
    pub k_ed: u64,
    pub k_out: u64,
    e_total: Moments,
    e_cr: Moments,
    e_cd: Moments,
    e_er: Moments,
    e_ed: Moments,
    e_relay: Moments,
}

/// Agresti–Coull standard error for `k` successes in `n` trials.
pub fn binomial_se(k: u64, n: u64) -> f64 {
    let nt = n as f64 + 4.0;
    let p = (k as f64 + 2.0) / nt;
    math::sqrt(p * (1.0 - p) / nt)
}

impl OracleEstimate {
    fn frac(&self, k: u64) -> f64 {
        k as f64 / self.n as f64
    }
    pub fn p_cr(&self) -> f64 {
        self.frac(self.k_cr)
    }
    pub fn p_cd(&self) -> f64 {
        self.frac(self.k_cd)
    }
    pub fn p_er(&self) -> f64 {
        self.frac(self.k_er)
    }
    pub fn p_ed(&self) -> f64 {
        self.frac(self.k_ed)
    }
    pub fn p_outage(&self) -> f64 {
        self.frac(self.k_out)
    }
    /// Probability that the relay is used.
    pub fn p_rtx(&self) -> f64 {
        self.frac(self.k_cr + self.k_er)
    }
    pub fn p_dtx(&self) -> f64 {
        self.frac(self.k_cd + self.k_ed)
    }
    pub fn se_p_er(&self) -> f64 {
        binomial_se(self.k_er, self.n)
    }
    pub fn se_p_ed(&self) -> f64 {
        binomial_se(self.k_ed, self.n)
    }
    pub fn se_p_cr(&self) -> f64 {
        binomial_se(self.k_cr, self.n)
    }
    pub fn se_p_rtx(&self) -> f64 {
        binomial_se(self.k_cr + self.k_er, self.n)
    }
    /// E[E·1{covered}], circuitry-inclusive.
    pub fn e_total(&self) -> f64 {
        self.e_total.mean(self.n)
    }
    pub fn se_e_total(&self) -> f64 {
        self.e_total.se(self.n)
    }
    pub fn e_cr(&self) -> f64 {
        self.e_cr.mean(self.n)
    }
    pub fn e_cd(&self) -> f64 {
        self.e_cd.mean(self.n)
    }
    /// E[E_relay-path·1{ER}].
    pub fn e_er(&self) -> f64 {
        self.e_er.mean(self.n)
    }
    pub fn se_e_er(&self) -> f64 {
        self.e_er.se(self.n)
    }
    /// E[E_direct·1{ED}].
    pub fn e_ed(&self) -> f64 {
        self.e_ed.mean(self.n)
    }
    pub fn se_e_ed(&self) -> f64 {
        self.e_ed.se(self.n)
    }
    /// E[E_r^(RF)·1{relay used}] in raw joules.
    pub fn e_relay(&self) -> f64 {
        self.e_relay.mean(self.n)
    }
    pub fn se_e_relay(&self) -> f64 {
        self.e_relay.se(self.n)
    }
}

/// The per-point random stream.
pub fn point_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `n` joint shadowing realizations and applies the decision logic.
pub fn sample_decision(setup: &SamplerSetup, n: u64, seed: u64, stream: u64) -> OracleEstimate {
    let mut rng = point_rng(seed, stream);
    let mut est = OracleEstimate {
        n: n.max(1),
        k_cr: 0,
        k_cd: 0,
        k_er: 0,
        k_ed: 0,
        k_out: 0,
        e_total: Moments::default(),
        e_cr: Moments::default(),
        e_cd: Moments::default(),
        e_er: Moments::default(),
        e_ed: Moments::default(),
        e_relay: Moments::default(),
    };
    let (e_b0, s_b, e_r0, s_r) = setup.relay.unwrap_or((f64::INFINITY, 0.0, f64::INFINITY, 0.0));
    for _ in 0..est.n {
        let zd: f64 = StandardNormal.sample(&mut rng);
        let zb: f64 = StandardNormal.sample(&mut rng);
        let zr: f64 = StandardNormal.sample(&mut rng);
        let e_d = setup.e_d0 * math::exp(setup.sigma_d * zd);
        let e_b = e_b0 * math::exp(s_b * zb);
        let e_r = e_r0 * math::exp(s_r * zr);
        let (dec, e, er) = decide(setup, e_d, e_b, e_r);
        est.e_total.push(e);
        est.e_relay.push(er);
        let mut zero = [&mut est.e_cr, &mut est.e_cd, &mut est.e_er, &mut est.e_ed];
        let slot = match dec {
            Decision::CoverageRelay => {
                est.k_cr += 1;
                Some(0)
            }
            Decision::CoverageDirect => {
                est.k_cd += 1;
                Some(1)
            }
            Decision::EfficientRelay => {
                est.k_er += 1;
                Some(2)
            }
            Decision::EfficientDirect => {
                est.k_ed += 1;
                Some(3)
            }
            Decision::Outage => {
                est.k_out += 1;
                None
            }
        };
        for (i, m) in zero.iter_mut().enumerate() {
            m.push(if Some(i) == slot { e } else { 0.0 });
        }
    }
    est
}

/// Model and oracle side by side at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointAudit {
    pub pos: UserPos,
    pub serving: Option<usize>,
    pub model: PointEval,
    pub oracle: OracleEstimate,
}

/// Evaluates the model and the oracle at every point of `grid`.
pub fn audit_points(
    grid: &[UserPos],
    layout: &CellLayout,
    ctx: &ModelContext,
    n: u64,
    seed: u64,
) -> Result<Vec<PointAudit>> {
    let bs = layout.bs();
    let out: Vec<Result<PointAudit>> = par::map_range(grid.len(), |i| {
        let u = &grid[i];
        let serving = ctx.serving_relay(u, layout)?;
        let relay = serving.map(|j| &layout.relays[j]);
        let raw = ctx.raw_inputs(&bs, u, relay)?;
        let inp = crate::rea::with_circuitry(&raw, &ctx.profile, ctx.scheme);
        let model = ctx.evaluate_inputs(&inp);
        let oracle = sample_decision(&SamplerSetup::new(&raw, &ctx.profile, ctx.scheme), n, seed, i as u64);
        Ok(PointAudit { pos: *u, serving, model, oracle })
    });
    out.into_iter().collect()
}

/// Which region a threshold defines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaKind {
    /// Relaying probability ≥ P_T.
    Rea,
    /// Expected energy ≤ E_T.
    Eea,
    /// Expected relay energy ≤ E_T,r.
    RelayEnergy,
}

impl ZetaKind {
    pub fn name(&self) -> &'static str {
        match self {
            ZetaKind::Rea => "rea",
            ZetaKind::Eea => "eea",
            ZetaKind::RelayEnergy => "relay-energy",
        }
    }
}

/// Threshold lists for the three error ratios.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Thresholds {
    pub p_t: Vec<f64>,
    pub e_t: Vec<f64>,
    pub e_t_relay: Vec<f64>,
}

/// Error ratio at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdError {
    pub kind: ZetaKind,
    pub threshold: f64,
    pub zeta: f64,
    /// Grid points in the model region.
    pub model_points: usize,
    /// Grid points in the oracle region.
    pub oracle_points: usize,
    /// Grid points in exactly one of the two regions.
    pub mismatched: usize,
}

/// Error ratios over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub zeta_r: f64,
    pub zeta_e: f64,
    pub zeta_i: f64,
    pub per_threshold: Vec<ThresholdError>,
    pub samples: u64,
    pub seed: u64,
    /// Covered grid points the ratios were taken over.
    pub points: usize,
}

/// Mismatch area over oracle area. An empty oracle region counts as
/// error-free only when the model region is empty too.
pub fn zeta(model: &[bool], oracle: &[bool]) -> (f64, usize, usize, usize) {
    let mut m = 0;
    let mut o = 0;
    let mut x = 0;
    for (a, b) in model.iter().zip(oracle) {
        m += *a as usize;
        o += *b as usize;
        x += (*a != *b) as usize;
    }
    let z = if o > 0 {
        x as f64 / o as f64
    } else if x == 0 {
        0.0
    } else {
        1.0
    };
    (z, m, o, x)
}

/// Compares model and oracle regions over the covered points of an audit.
pub fn error_ratios_from(audits: &[PointAudit], thresholds: &Thresholds, n: u64, seed: u64) -> ValidationReport {
    let covered: Vec<&PointAudit> = audits.iter().filter(|a| a.model.probs.outage_ok).collect();
    let mut per = Vec::new();
    let eval = |kind: ZetaKind, list: &[f64], per: &mut Vec<ThresholdError>| -> f64 {
        let mut acc = 0.0;
        for &t in list {
            let (model, oracle): (Vec<bool>, Vec<bool>) = covered
                .iter()
                .map(|a| match kind {
                    ZetaKind::Rea => (a.model.probs.p_relay() >= t, a.oracle.p_rtx() >= t),
                    ZetaKind::Eea => (a.model.energy.total <= t, a.oracle.e_total() <= t),
                    ZetaKind::RelayEnergy => (a.model.relay_rf <= t, a.oracle.e_relay() <= t),
                })
                .unzip();
            let (z, m, o, x) = zeta(&model, &oracle);
            per.push(ThresholdError {
                kind,
                threshold: t,
                zeta: z,
                model_points: m,
                oracle_points: o,
                mismatched: x,
            });
            acc += z;
        }
        if list.is_empty() {
            0.0
        } else {
            acc / list.len() as f64
        }
    };
    let zeta_r = eval(ZetaKind::Rea, &thresholds.p_t, &mut per);
    let zeta_e = eval(ZetaKind::Eea, &thresholds.e_t, &mut per);
    let zeta_i = eval(ZetaKind::RelayEnergy, &thresholds.e_t_relay, &mut per);
    ValidationReport { zeta_r, zeta_e, zeta_i, per_threshold: per, samples: n, seed, points: covered.len() }
}

/// Audits the sector grid of `layout` and computes the error ratios.
pub fn error_ratios(
    layout: &CellLayout,
    thresholds: &Thresholds,
    ctx: &ModelContext,
    n: u64,
    seed: u64,
) -> Result<ValidationReport> {
    let grid = sector_grid(layout)?;
    let audits = audit_points(&grid, layout, ctx, n, seed)?;
    Ok(error_ratios_from(&audits, thresholds, n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(sigma: f64) -> SamplerSetup {
        SamplerSetup {
            e_d0: 0.6,
            sigma_d: sigma,
            relay: Some((0.05, sigma, 0.3, sigma)),
            e_b_max: 1.0,
            e_r_max: 0.5,
            eta_b: 1.0,
            eta_r: 1.0,
            dsp: 0.0,
            direct_capped: true,
        }
    }

    #[test]
    fn degenerate_draws_are_exact() {
        let est = sample_decision(&setup(0.0), 100, 7, 3);
        assert_eq!(est.k_er, 100);
        assert!((est.e_total() - 0.35).abs() < 1e-15);
        assert!((est.e_relay() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn prefix_consistency() {
        let one = sample_decision(&setup(0.7), 1, 11, 5);
        let many = sample_decision(&setup(0.7), 100_000, 11, 5);
        let mut rng = point_rng(11, 5);
        let zd: f64 = StandardNormal.sample(&mut rng);
        let zb: f64 = StandardNormal.sample(&mut rng);
        let zr: f64 = StandardNormal.sample(&mut rng);
        let first = decide(&setup(0.7), 0.6 * math::exp(0.7 * zd), 0.05 * math::exp(0.7 * zb), 0.3 * math::exp(0.7 * zr));
        assert!((one.e_total() - first.1).abs() < 1e-15);
        assert_eq!(many.n, 100_000);
    }

    #[test]
    fn ties_go_to_relay() {
        let s = setup(0.0);
        assert_eq!(decide(&s, 0.35, 0.05, 0.3).0, Decision::EfficientRelay);
    }

    #[test]
    fn always_relay_model() {
        let model = [true, true, true, true];
        let oracle = [true, false, false, true];
        let (z, _, _, _) = zeta(&model, &oracle);
        assert_eq!(z, 1.0);
    }
}
