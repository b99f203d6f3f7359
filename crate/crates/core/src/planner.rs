//! The Ψ metric, exhaustive relay placement for Ψ and Γ, and the
//! per-location coding-scheme map.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geometry::{in_sector, sector_area, sector_bs, sector_grid, CellLayout, Point, UserPos};
use crate::ici::{baseline_energy, victim_weight, victims, GammaReport};
use crate::math;
use crate::model::ModelContext;
use crate::par;
use crate::schemes::SchemeKind;
use crate::{ModelError, Result};

/// Worst-case energy per unit area of a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiReport {
    pub e_max: f64,
    pub e_idle: f64,
    /// Joules per square meter.
    pub psi: f64,
    /// Grid point attaining `e_max`.
    pub worst: UserPos,
    pub layout: CellLayout,
}

/// Ψ of a layout, or the first grid point that fails the outage condition.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiOutcome {
    Feasible(PsiReport),
    Infeasible { at: UserPos },
}

/// Ψ = (E_max + E_idle)/A_sector over the sector grid of `layout`.
pub fn psi(layout: &CellLayout, scheme: SchemeKind, ctx: &ModelContext) -> Result<PsiOutcome> {
    let c = ctx.with_scheme(scheme).with_direct_cap(true);
    let grid = sector_grid(layout)?;
    let evals: Vec<Result<(bool, f64)>> = par::map(&grid, |u| {
        let (_, ev) = c.evaluate(u, layout)?;
        Ok((ev.probs.outage_ok, ev.energy.total))
    });
    let mut e_max = f64::NEG_INFINITY;
    let mut worst = grid[0];
    for (u, r) in grid.iter().zip(evals) {
        let (ok, e) = r?;
        if !ok {
            return Ok(PsiOutcome::Infeasible { at: *u });
        }
        if e > e_max {
            e_max = e;
            worst = *u;
        }
    }
    let e_idle = c.profile.idle_offsets(layout.n_r());
    Ok(PsiOutcome::Feasible(PsiReport {
        e_max,
        e_idle,
        psi: (e_max + e_idle) / sector_area(layout.d_b),
        worst,
        layout: layout.clone(),
    }))
}

/// What a placement search optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Minimize Ψ subject to full coverage.
    Psi,
    /// Maximize Γ.
    Gamma,
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::Psi => "psi",
            Objective::Gamma => "gamma",
        }
    }
}

/// Resolution and symmetry of a placement search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Radial step of the candidate polar grid (meters).
    pub search_step: f64,
    /// Step of the user evaluation grid (meters).
    pub grid_step: f64,
    /// Restrict to layouts symmetric about the sector axis.
    pub symmetric: bool,
}

/// Candidate relay positions: a polar grid around BS₁ with radial step
/// `step` and angular step giving arcs of about `step`, mirror-symmetric
/// about the x-axis. Ordered by radius, then angle.
pub fn candidate_points(d_b: f64, step: f64) -> Vec<Point> {
    let mut out = Vec::new();
    let bs = sector_bs(d_b).pos;
    let half_wedge = core::f64::consts::FRAC_PI_3;
    let mut k = 1;
    loop {
        let r = k as f64 * step;
        if r > d_b * 1.000_001 {
            break;
        }
        let dphi = step / r;
        let m_max = math::floor(half_wedge / dphi) as i64;
        for m in -m_max..=m_max {
            let phi = m as f64 * dphi;
            let p = Point::new(bs.x - r * math::cos(phi), r * math::sin(phi));
            if in_sector(&p, d_b) {
                out.push(p);
            }
        }
        k += 1;
    }
    out
}

/// Best layout found by [`optimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub layout: CellLayout,
    /// Ψ (J/m²) or Γ, depending on the objective.
    pub value: f64,
    pub layouts_evaluated: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OptimizeOutcome {
    Found(Optimum),
    Infeasible,
}

/// Per-candidate, per-user quantities shared by every layout.
struct Table {
    users: usize,
    cost: Vec<f64>,
    value: Vec<f64>,
    covered: Vec<bool>,
    relay_rf: Vec<f64>,
    lambda: Vec<f64>,
    mean_inv_e0: f64,
}

impl Table {
    fn build(
        cands: &[Point],
        grid: &[UserPos],
        d_b: f64,
        grid_step: f64,
        objective: Objective,
        ctx: &ModelContext,
    ) -> Result<Table> {
        let users = grid.len();
        let bs = sector_bs(d_b);
        let c = match objective {
            Objective::Psi => ctx.with_direct_cap(true),
            Objective::Gamma => ctx.with_direct_cap(false),
        };
        let rows: Vec<Result<Vec<(f64, f64, bool, f64)>>> = par::map(cands, |p| {
            grid.iter()
                .map(|u| {
                    let cost = c.path_cost(&bs, u, p)?;
                    let ev = c.evaluate_with(&bs, u, Some(p))?;
                    let value = match objective {
                        Objective::Psi => ev.energy.total,
                        Objective::Gamma => {
                            let e0 = baseline_energy(&c, ev.direct_mean);
                            (e0 - ev.energy.total - c.profile.idle_offsets(0)) / e0
                        }
                    };
                    Ok((cost, value, ev.probs.outage_ok, ev.relay_rf))
                })
                .collect()
        });
        let mut t = Table {
            users,
            cost: Vec::with_capacity(cands.len() * users),
            value: Vec::with_capacity(cands.len() * users),
            covered: Vec::with_capacity(cands.len() * users),
            relay_rf: Vec::with_capacity(cands.len() * users),
            lambda: Vec::new(),
            mean_inv_e0: 0.0,
        };
        for r in rows {
            for (cost, v, ok, er) in r? {
                t.cost.push(cost);
                t.value.push(v);
                t.covered.push(ok);
                t.relay_rf.push(er);
            }
        }
        if objective == Objective::Gamma {
            let layout = CellLayout::new(d_b, Vec::new(), grid_step)?;
            let rows = victims(&layout, &c)?;
            let lam: Vec<Result<f64>> = par::map(cands, |p| victim_weight(p, &rows, &c));
            t.lambda = lam.into_iter().collect::<Result<Vec<_>>>()?;
            let mut acc = 0.0;
            for u in grid {
                let sd = c.scenario.direct.sigma();
                let dm = c.scenario.direct_energy(&bs, u)? * math::exp(0.5 * sd * sd);
                acc += 1.0 / baseline_energy(&c, dm);
            }
            t.mean_inv_e0 = acc / users as f64;
        }
        Ok(t)
    }

    /// Objective value of a layout given as candidate indices, to be
    /// minimized; `None` when a user is uncovered.
    fn score(&self, idx: &[usize], objective: Objective, ctx: &ModelContext) -> Option<f64> {
        let n = self.users;
        match objective {
            Objective::Psi => {
                let mut e_max = f64::NEG_INFINITY;
                for u in 0..n {
                    let c = self.serving(idx, u);
                    if !self.covered[c * n + u] {
                        return None;
                    }
                    e_max = e_max.max(self.value[c * n + u]);
                }
                Some(e_max)
            }
            Objective::Gamma => {
                let mut gain = 0.0;
                let mut per = [0.0f64; 16];
                let mut per_v = Vec::new();
                let per: &mut [f64] = if idx.len() <= 16 {
                    &mut per[..idx.len()]
                } else {
                    per_v.resize(idx.len(), 0.0);
                    &mut per_v
                };
                for u in 0..n {
                    let k = self.serving_slot(idx, u);
                    let c = idx[k];
                    gain += self.value[c * n + u];
                    per[k] += self.relay_rf[c * n + u];
                }
                let gain = gain / n as f64 - idx.len() as f64 * ctx.profile.e_r_idle * self.mean_inv_e0;
                let mut loss = 0.0;
                for (k, &c) in idx.iter().enumerate() {
                    if per[k] > 0.0 {
                        loss += per[k] / n as f64 * self.lambda[c];
                    }
                }
                Some(-GammaReport::new(gain, loss).gamma)
            }
        }
    }

    #[inline]
    fn serving_slot(&self, idx: &[usize], u: usize) -> usize {
        let n = self.users;
        let mut best = 0;
        let mut bc = self.cost[idx[0] * n + u];
        for (k, &c) in idx.iter().enumerate().skip(1) {
            let v = self.cost[c * n + u];
            if v < bc {
                bc = v;
                best = k;
            }
        }
        best
    }

    #[inline]
    fn serving(&self, idx: &[usize], u: usize) -> usize {
        idx[self.serving_slot(idx, u)]
    }
}

/// Canonical relay order: y ≥ 0 first, then by x, then by |y|.
fn canonical_cmp(a: &Point, b: &Point) -> Ordering {
    (a.y < 0.0)
        .cmp(&(b.y < 0.0))
        .then(a.x.total_cmp(&b.x))
        .then(a.y.abs().total_cmp(&b.y.abs()))
}

fn lex_cmp(a: &[Point], b: &[Point]) -> Ordering {
    for (p, q) in a.iter().zip(b) {
        let o = p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn combinations(n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Candidate-index layouts of `n_r` relays.
fn enumerate_layouts(cands: &[Point], n_r: usize, symmetric: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if !symmetric {
        combinations(cands.len(), n_r, &mut out);
        return out;
    }
    let axis: Vec<usize> = (0..cands.len()).filter(|&i| cands[i].y == 0.0).collect();
    let upper: Vec<usize> = (0..cands.len()).filter(|&i| cands[i].y > 0.0).collect();
    let mirror_of = |i: usize| -> usize {
        let m = cands[i].mirror();
        (0..cands.len())
            .find(|&j| (cands[j].x - m.x).abs() < 1e-9 && (cands[j].y - m.y).abs() < 1e-9)
            .unwrap_or(i)
    };
    let mirrors: Vec<usize> = upper.iter().map(|&i| mirror_of(i)).collect();
    let mut n_axis = n_r % 2;
    while n_axis <= n_r {
        let pairs = (n_r - n_axis) / 2;
        let mut ax = Vec::new();
        combinations(axis.len(), n_axis, &mut ax);
        let mut pr = Vec::new();
        combinations(upper.len(), pairs, &mut pr);
        for a in &ax {
            for p in &pr {
                let mut v: Vec<usize> = a.iter().map(|&i| axis[i]).collect();
                for &i in p {
                    v.push(upper[i]);
                    v.push(mirrors[i]);
                }
                out.push(v);
            }
        }
        n_axis += 2;
    }
    out
}

/// Exhaustive placement of `n_r` relays over the candidate polar grid.
pub fn optimize(
    objective: Objective,
    n_r: usize,
    d_b: f64,
    scheme: SchemeKind,
    ctx: &ModelContext,
    opts: &SearchOptions,
) -> Result<OptimizeOutcome> {
    if n_r == 0 {
        return Err(ModelError::Invalid("optimize needs at least one relay"));
    }
    if !(opts.search_step > 0.0) {
        return Err(ModelError::Domain { what: "search step", value: opts.search_step });
    }
    let ctx = ctx.with_scheme(scheme);
    let cands = candidate_points(d_b, opts.search_step);
    optimize_over(objective, n_r, d_b, &cands, &ctx, opts)
}

/// Exhaustive search over layouts drawn from an explicit candidate set.
pub fn optimize_over(
    objective: Objective,
    n_r: usize,
    d_b: f64,
    cands: &[Point],
    ctx: &ModelContext,
    opts: &SearchOptions,
) -> Result<OptimizeOutcome> {
    let probe = CellLayout::new(d_b, Vec::new(), opts.grid_step)?;
    let grid = sector_grid(&probe)?;
    let table = Table::build(cands, &grid, d_b, opts.grid_step, objective, ctx)?;
    let layouts = enumerate_layouts(cands, n_r, opts.symmetric);
    let scores: Vec<Option<f64>> = par::map(&layouts, |idx| table.score(idx, objective, ctx));
    let mut best: Option<(f64, Vec<Point>)> = None;
    for (idx, s) in layouts.iter().zip(scores) {
        let Some(s) = s else { continue };
        let mut pts: Vec<Point> = idx.iter().map(|&i| cands[i]).collect();
        pts.sort_by(canonical_cmp);
        let take = match &best {
            None => true,
            Some((b, bp)) => s < *b || (s == *b && lex_cmp(&pts, bp) == Ordering::Less),
        };
        if take {
            best = Some((s, pts));
        }
    }
    let Some((s, pts)) = best else {
        return Ok(OptimizeOutcome::Infeasible);
    };
    let layout = CellLayout::new(d_b, pts, opts.grid_step)?;
    let value = match objective {
        Objective::Psi => (s + ctx.profile.idle_offsets(n_r)) / sector_area(d_b),
        Objective::Gamma => -s,
    };
    Ok(OptimizeOutcome::Found(Optimum { layout, value, layouts_evaluated: layouts.len() }))
}

/// The Γ-maximizing scheme per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeMap {
    pub points: Vec<UserPos>,
    pub schemes: Vec<SchemeKind>,
    /// Γ with the baseline scheme everywhere.
    pub baseline: GammaReport,
    /// Γ of the selected assignment.
    pub report: GammaReport,
}

impl SchemeMap {
    pub fn count(&self, kind: SchemeKind) -> usize {
        self.schemes.iter().filter(|&&s| s == kind).count()
    }
}

fn ratio(gain: f64, loss: f64) -> f64 {
    GammaReport::new(gain, loss).gamma
}

/// Per-point selection of the scheme maximizing Γ when only that point is
/// switched away from the baseline (two-hop, or the first candidate when
/// two-hop is not offered). Ties follow DTx < TwoHop < EoPdf < IrPdf.
pub fn scheme_map(layout: &CellLayout, ctx: &ModelContext, candidates: &[SchemeKind]) -> Result<SchemeMap> {
    let mut cands: Vec<SchemeKind> = candidates.to_vec();
    cands.sort();
    cands.dedup();
    if cands.is_empty() {
        return Err(ModelError::Invalid("empty scheme candidate set"));
    }
    let grid = sector_grid(layout)?;
    let n = grid.len();
    let unc = ctx.with_direct_cap(false);
    let bs = layout.bs();
    let rows = victims(layout, &unc)?;
    let mut lambda = Vec::with_capacity(layout.n_r());
    for p in &layout.relays {
        lambda.push(victim_weight(p, &rows, &unc)?);
    }
    let n_r = layout.n_r();
    // (gain term, loss term) per point and candidate scheme
    let terms: Vec<Result<Vec<(f64, f64)>>> = par::map(&grid, |u| {
        let j = unc.serving_relay(u, layout)?;
        cands
            .iter()
            .map(|&k| {
                let c = unc.with_scheme(k);
                let ev = c.evaluate_with(&bs, u, j.map(|j| &layout.relays[j]))?;
                let g = crate::ici::relative_gain(&c, &ev, n_r) / n as f64;
                let l = match j {
                    Some(j) => ev.relay_rf / n as f64 * lambda[j],
                    None => 0.0,
                };
                Ok((g, l))
            })
            .collect()
    });
    let terms: Vec<Vec<(f64, f64)>> = terms.into_iter().collect::<Result<_>>()?;
    let base = cands.iter().position(|&k| k == SchemeKind::TwoHop).unwrap_or(0);
    let (mut g_base, mut l_base) = (0.0, 0.0);
    for t in &terms {
        g_base += t[base].0;
        l_base += t[base].1;
    }
    let choice: Vec<usize> = terms
        .iter()
        .map(|t| {
            let (g0, l0) = t[base];
            let mut best = 0;
            let mut best_v = f64::NEG_INFINITY;
            for (k, &(g, l)) in t.iter().enumerate() {
                let v = ratio(g_base - g0 + g, (l_base - l0 + l).max(0.0));
                if v > best_v {
                    best_v = v;
                    best = k;
                }
            }
            best
        })
        .collect();
    let (mut g_tot, mut l_tot) = (0.0, 0.0);
    for (t, &c) in terms.iter().zip(&choice) {
        g_tot += t[c].0;
        l_tot += t[c].1;
    }
    Ok(SchemeMap {
        points: grid,
        schemes: choice.iter().map(|&c| cands[c]).collect(),
        baseline: GammaReport::new(g_base, l_base),
        report: GammaReport::new(g_tot, l_tot),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidates_symmetric_and_inside() {
        let c = candidate_points(800.0, 50.0);
        assert!(c.iter().all(|p| in_sector(p, 800.0)));
        for p in &c {
            assert!(c.iter().any(|q| (q.x - p.x).abs() < 1e-9 && (q.y + p.y).abs() < 1e-9));
        }
        assert!(c.iter().any(|p| p.y == 0.0));
    }

    #[test]
    fn combination_count() {
        let mut v = Vec::new();
        combinations(6, 3, &mut v);
        assert_eq!(v.len(), 20);
        assert_eq!(v[0], alloc::vec![0, 1, 2]);
        assert_eq!(v[19], alloc::vec![3, 4, 5]);
    }

    #[test]
    fn symmetric_layouts_pair_up() {
        let c = candidate_points(600.0, 100.0);
        for l in enumerate_layouts(&c, 3, true) {
            let pts: Vec<Point> = l.iter().map(|&i| c[i]).collect();
            for p in &pts {
                assert!(pts.iter().any(|q| (q.x - p.x).abs() < 1e-9 && (q.y + p.y).abs() < 1e-9));
            }
        }
    }
}
