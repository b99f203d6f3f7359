//! Per-point evaluation context tying the channel, schemes and closed forms
//! together.

use crate::channel::ScenarioConfig;
use crate::eea::{expected_rf_energy, expected_relay_rf, EnergyEstimate};
use crate::geometry::{BaseStation, CellLayout, Point, UserPos};
use crate::rea::{decision_probabilities, with_circuitry, DecisionProbabilities, ModelInputs, RawInputs, RelayDists};
use crate::schemes::{pdf_allocation, EnergyProfile, PdfObjective, SchemeKind, StationCaps};
use crate::stats::LogNormal;
use crate::Result;

/// Energies below this floor are treated as this floor (joules).
pub const ENERGY_FLOOR: f64 = 1e-30;

/// Everything needed to evaluate the closed forms at a user location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelContext {
    pub scenario: ScenarioConfig,
    pub profile: EnergyProfile,
    pub scheme: SchemeKind,
    /// Whether DTx is subject to the BS cap (false for Γ evaluations).
    pub direct_capped: bool,
}

/// Closed-form results at one user location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEval {
    pub probs: DecisionProbabilities,
    pub energy: EnergyEstimate,
    /// Expected relay RF energy (joules, before the relay multiplier).
    pub relay_rf: f64,
    /// Mean of the uncapped direct RF energy.
    pub direct_mean: f64,
}

impl ModelContext {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.profile.validate()
    }

    pub fn with_scheme(&self, scheme: SchemeKind) -> ModelContext {
        ModelContext { scheme, ..*self }
    }

    pub fn with_direct_cap(&self, direct_capped: bool) -> ModelContext {
        ModelContext { direct_capped, ..*self }
    }

    /// Shadow-free relay-path cost η_B·E_b⁽⁰⁾ + η_R·E_r⁽⁰⁾ used for serving
    /// relay selection.
    pub fn path_cost(&self, bs: &BaseStation, u: &UserPos, relay: &Point) -> Result<f64> {
        let s = &self.scenario;
        Ok(self.profile.eta_b * s.backhaul_energy(bs, relay)? + self.profile.eta_r * s.access_energy(relay, u)?)
    }

    /// Serving relay for `u`: minimal path cost, ties to the lowest index.
    pub fn serving_relay(&self, u: &UserPos, layout: &CellLayout) -> Result<Option<usize>> {
        let bs = layout.bs();
        let mut err = None;
        let j = crate::geometry::serving_assignment(u, layout, |u, p| match self.path_cost(&bs, u, p) {
            Ok(c) => c,
            Err(e) => {
                err = Some(e);
                f64::INFINITY
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(j),
        }
    }

    /// Distributions of the RF energies at `u` with optional `relay`, for
    /// this context's scheme.
    pub fn raw_inputs(&self, bs: &BaseStation, u: &UserPos, relay: Option<&Point>) -> Result<RawInputs> {
        let s = &self.scenario;
        let d = LogNormal::from_median(s.direct_energy(bs, u)?.max(ENERGY_FLOOR), s.direct.sigma())?;
        let relay = match (relay, self.scheme) {
            (None, _) | (_, SchemeKind::Dtx) => None,
            (Some(p), SchemeKind::TwoHop) => Some(RelayDists {
                b: LogNormal::from_median(s.backhaul_energy(bs, p)?.max(ENERGY_FLOOR), s.backhaul.sigma())?,
                r: LogNormal::from_median(s.access_energy(p, u)?.max(ENERGY_FLOOR), s.access.sigma())?,
            }),
            (Some(p), kind) => {
                let g = s.link_gains(bs, p, u)?;
                let obj = if kind == SchemeKind::EoPdf { PdfObjective::Total } else { PdfObjective::RelayOnly };
                let caps = StationCaps { bs: self.profile.e_b_max, relay: self.profile.e_r_max };
                let alloc = pdf_allocation(obj, &g, s.rate, Some(caps));
                alloc.allocation().filter(|a| a.rate_relayed > 0.0 && a.e_r_phase2 > ENERGY_FLOOR).map(|a| RelayDists {
                    b: LogNormal { mu: crate::math::ln(a.e_bs().clamp(ENERGY_FLOOR, caps.bs)), sigma: s.backhaul.sigma() },
                    r: LogNormal { mu: crate::math::ln(a.e_r_phase2.clamp(ENERGY_FLOOR, caps.relay)), sigma: s.access.sigma() },
                })
            }
        };
        Ok(RawInputs { d, relay, direct_capped: self.direct_capped })
    }

    /// Circuitry-inclusive model inputs.
    pub fn inputs(&self, bs: &BaseStation, u: &UserPos, relay: Option<&Point>) -> Result<ModelInputs> {
        let raw = self.raw_inputs(bs, u, relay)?;
        Ok(with_circuitry(&raw, &self.profile, self.scheme))
    }

    /// Evaluates every closed form at `u` served through `relay`.
    pub fn evaluate_with(&self, bs: &BaseStation, u: &UserPos, relay: Option<&Point>) -> Result<PointEval> {
        let inp = self.inputs(bs, u, relay)?;
        Ok(self.evaluate_inputs(&inp))
    }

    pub fn evaluate_inputs(&self, inp: &ModelInputs) -> PointEval {
        PointEval {
            probs: decision_probabilities(inp, self.scenario.p_out),
            energy: expected_rf_energy(inp),
            relay_rf: expected_relay_rf(inp),
            direct_mean: inp.d.mean() / self.profile.eta_b,
        }
    }

    /// Evaluates `u` in `layout` with its serving relay.
    pub fn evaluate(&self, u: &UserPos, layout: &CellLayout) -> Result<(Option<usize>, PointEval)> {
        let j = self.serving_relay(u, layout)?;
        let bs = layout.bs();
        let ev = self.evaluate_with(&bs, u, j.map(|j| &layout.relays[j]))?;
        Ok((j, ev))
    }
}
