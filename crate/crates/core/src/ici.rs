//! Relay-generated interference, victim energy loss and the Γ metric.

use alloc::vec::Vec;

use crate::geometry::{neighbor_cells, sector_grid, serving_bs, CellLayout, Point, UserPos};
use crate::math;
use crate::model::{ModelContext, PointEval};
use crate::par;
use crate::schemes::SchemeKind;
use crate::Result;

pub use crate::eea::expected_relay_rf;

/// Average interference energy at `victim` from a relay at `relay`
/// radiating `relay_energy` joules on average.
pub fn interference_at(victim: &UserPos, relay: &Point, relay_energy: f64, ctx: &ModelContext) -> Result<f64> {
    let s = &ctx.scenario;
    let sigma = s.interference.sigma();
    let gamma = s.gamma(&s.interference, victim.dist(relay))?;
    Ok(relay_energy * math::exp(0.5 * sigma * sigma) / gamma)
}

/// How Γ's three regimes read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaRegime {
    /// Γ > 1: the served cell gains more than its neighbours lose.
    Beneficial,
    /// 0 ≤ Γ ≤ 1: a gain, outweighed by the neighbours' loss.
    Outweighed,
    /// Γ < 0: relaying brings no energy gain.
    NoGain,
}

/// υ_Gain, υ_Loss and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaReport {
    pub upsilon_gain: f64,
    pub upsilon_loss: f64,
    /// `+∞` when υ_Loss is zero.
    pub gamma: f64,
}

impl GammaReport {
    pub fn new(upsilon_gain: f64, upsilon_loss: f64) -> Self {
        let gamma = if upsilon_loss > 0.0 { upsilon_gain / upsilon_loss } else { f64::INFINITY };
        GammaReport { upsilon_gain, upsilon_loss, gamma }
    }

    pub fn regime(&self) -> GammaRegime {
        if self.gamma > 1.0 {
            GammaRegime::Beneficial
        } else if self.gamma >= 0.0 {
            GammaRegime::Outweighed
        } else {
            GammaRegime::NoGain
        }
    }
}

/// Which points υ_Gain averages over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainScope {
    /// Every grid point (coverage extension counted through uncapped DTx).
    #[default]
    All,
    /// Only points that pass the capped outage condition.
    CoveredOnly,
}

/// Per-point scheme choice.
#[derive(Debug, Clone, Copy)]
pub enum SchemeAssignment<'a> {
    Uniform(SchemeKind),
    PerPoint(&'a [SchemeKind]),
}

impl SchemeAssignment<'_> {
    fn at(&self, i: usize) -> SchemeKind {
        match self {
            SchemeAssignment::Uniform(k) => *k,
            SchemeAssignment::PerPoint(v) => v[i],
        }
    }
}

/// Reference consumption of a cell-1 user without relays.
pub fn baseline_energy(ctx: &ModelContext, direct_mean: f64) -> f64 {
    ctx.profile.eta_b * direct_mean + ctx.profile.e_b_tx_plus_u_rx + ctx.profile.e_b_idle
}

/// Relative saving `(E⁰ − E^{N_r})/E⁰` at one point.
pub fn relative_gain(ctx: &ModelContext, ev: &PointEval, n_r: usize) -> f64 {
    let e0 = baseline_energy(ctx, ev.direct_mean);
    let en = ev.energy.total + ctx.profile.idle_offsets(n_r);
    (e0 - en) / e0
}

/// One victim location replicated in the six neighbouring cells.
#[derive(Debug, Clone, PartialEq)]
pub struct VictimRow {
    pub pos: [Point; 6],
    /// Coefficient turning interference energy into extra consumption.
    pub slope: [f64; 6],
    /// Σ over the six cells of the victims' consumption without interference.
    pub reference: f64,
}

/// Victim rows for `layout`, one per grid point of a neighbour hexagon.
pub fn victims(layout: &CellLayout, ctx: &ModelContext) -> Result<Vec<VictimRow>> {
    let cells = neighbor_cells(layout);
    let s = &ctx.scenario;
    let sd = s.direct.sigma();
    let n = cells[0].grid.len();
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let mut pos = [Point::new(0.0, 0.0); 6];
        let mut slope = [0.0; 6];
        let mut reference = 0.0;
        for (i, cell) in cells.iter().enumerate() {
            let p = cell.grid[v];
            let bs = serving_bs(&p, &cell.center, layout.d_b);
            let m_d = s.direct_energy(&bs, &p)? * math::exp(0.5 * sd * sd);
            pos[i] = p;
            slope[i] = ctx.profile.eta_b * m_d * 2.0 / s.noise;
            reference += ctx.profile.eta_b * m_d + ctx.profile.e_b_tx_plus_u_rx + ctx.profile.e_b_idle;
        }
        out.push(VictimRow { pos, slope, reference });
    }
    Ok(out)
}

/// υ_Loss contributed per joule of average radiated energy by a relay at
/// `p`; υ_Loss is linear in the per-relay averages.
pub fn victim_weight(p: &Point, rows: &[VictimRow], ctx: &ModelContext) -> Result<f64> {
    if rows.is_empty() {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for row in rows {
        let mut num = 0.0;
        for i in 0..6 {
            num += row.slope[i] * interference_at(&row.pos[i], p, 1.0, ctx)?;
        }
        acc += num / row.reference;
    }
    Ok(acc / rows.len() as f64)
}

/// Mean radiated energy of each relay over the sector grid (raw joules per
/// transmission slot, users uniform over the grid).
pub fn relay_loads(layout: &CellLayout, ctx: &ModelContext) -> Result<Vec<f64>> {
    let grid = sector_grid(layout)?;
    let per_point: Vec<Result<(Option<usize>, f64)>> = par::map(&grid, |u| {
        let (j, ev) = ctx.evaluate(u, layout)?;
        Ok((j, ev.relay_rf))
    });
    let mut load = alloc::vec![0.0; layout.n_r()];
    for r in per_point {
        if let (Some(j), e) = r? {
            load[j] += e;
        }
    }
    for l in &mut load {
        *l /= grid.len() as f64;
    }
    Ok(load)
}

/// Γ for `layout` with the given scheme assignment. DTx is uncapped;
/// victims are served by DTx only.
pub fn gamma(
    layout: &CellLayout,
    assignment: SchemeAssignment<'_>,
    ctx: &ModelContext,
    scope: GainScope,
) -> Result<GammaReport> {
    let grid = sector_grid(layout)?;
    let unc = ctx.with_direct_cap(false);
    let bs = layout.bs();
    let n_r = layout.n_r();
    let per_point: Vec<Result<(Option<usize>, f64, f64, bool)>> = par::map_range(grid.len(), |i| {
        let u = &grid[i];
        let c = unc.with_scheme(assignment.at(i));
        let j = c.serving_relay(u, layout)?;
        let relay = j.map(|j| &layout.relays[j]);
        let ev = c.evaluate_with(&bs, u, relay)?;
        let covered = match scope {
            GainScope::All => true,
            GainScope::CoveredOnly => c.with_direct_cap(true).evaluate_with(&bs, u, relay)?.probs.outage_ok,
        };
        Ok((j, relative_gain(&c, &ev, n_r), ev.relay_rf, covered))
    });
    let mut gain = 0.0;
    let mut counted = 0usize;
    let mut per_relay = alloc::vec![0.0; n_r];
    for r in per_point {
        let (j, g, e_r, covered) = r?;
        if covered {
            gain += g;
            counted += 1;
        }
        if let Some(j) = j {
            per_relay[j] += e_r;
        }
    }
    let upsilon_gain = if counted > 0 { gain / counted as f64 } else { 0.0 };
    let rows = victims(layout, ctx)?;
    let mut loss = 0.0;
    for (j, p) in layout.relays.iter().enumerate() {
        if per_relay[j] > 0.0 {
            loss += per_relay[j] / grid.len() as f64 * victim_weight(p, &rows, ctx)?;
        }
    }
    Ok(GammaReport::new(upsilon_gain, loss))
}
