//! Subcommand implementations over a resolved configuration.

use relayarea_core::geometry::{neighbor_cells, sector_grid, CellLayout, Point};
use relayarea_core::ici::{gamma, interference_at, relay_loads, GainScope, GammaRegime, SchemeAssignment};
use relayarea_core::oracle::error_ratios;
use relayarea_core::planner::{optimize, psi, scheme_map, Objective, OptimizeOutcome, PsiOutcome, SearchOptions};
use relayarea_core::schemes::SchemeKind;

use crate::config::Resolved;
use crate::error::CliError;
use crate::output::{num, Artifacts, Table};

/// The subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    MapRea,
    MapEea,
    MapIci,
    Gamma,
    Psi,
    Optimize,
    SchemeMap,
    Validate,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::MapRea,
        Command::MapEea,
        Command::MapIci,
        Command::Gamma,
        Command::Psi,
        Command::Optimize,
        Command::SchemeMap,
        Command::Validate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::MapRea => "map-rea",
            Command::MapEea => "map-eea",
            Command::MapIci => "map-ici",
            Command::Gamma => "gamma",
            Command::Psi => "psi",
            Command::Optimize => "optimize",
            Command::SchemeMap => "scheme-map",
            Command::Validate => "validate",
        }
    }
}

pub fn run(cmd: Command, cfg: &Resolved) -> Result<Artifacts, CliError> {
    match cmd {
        Command::MapRea => map_rea(cfg),
        Command::MapEea => map_eea(cfg),
        Command::MapIci => map_ici(cfg),
        Command::Gamma => gamma_report(cfg),
        Command::Psi => psi_report(cfg),
        Command::Optimize => optimize_report(cfg),
        Command::SchemeMap => scheme_map_report(cfg),
        Command::Validate => validate(cfg),
    }
}

fn serving(j: Option<usize>) -> String {
    j.map(|j| j.to_string()).unwrap_or_default()
}

fn flag(b: bool) -> String {
    (b as u8).to_string()
}

fn relays_field(layout: &CellLayout) -> String {
    layout.relays.iter().map(|p| format!("{} {}", num(p.x), num(p.y))).collect::<Vec<_>>().join(";")
}

fn map_rea(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let grid = sector_grid(&cfg.layout)?;
    let mut header: Vec<String> =
        ["x", "y", "serving", "p_cr", "p_cd", "p_low1", "p_low2", "p_low", "p_relay", "p_ed_ub", "outage_ok"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    header.extend(cfg.thresholds.p_t.iter().map(|t| format!("rea@{}", num(*t))));
    let mut t = Table::with_header("map_rea", header);
    let evals = eval_grid(cfg, &grid)?;
    let mut covered = 0;
    for (u, (j, ev)) in grid.iter().zip(&evals) {
        let p = &ev.probs;
        covered += p.outage_ok as usize;
        let mut row = vec![
            num(u.x),
            num(u.y),
            serving(*j),
            num(p.p_cr),
            num(p.p_cd),
            num(p.p_low1),
            num(p.p_low2),
            num(p.p_low),
            num(p.p_relay()),
            num(p.p_ed_ub),
            flag(p.outage_ok),
        ];
        row.extend(cfg.thresholds.p_t.iter().map(|&th| flag(p.outage_ok && p.p_relay() >= th)));
        t.push(row);
    }
    let mut a = Artifacts::default();
    a.note("points", grid.len());
    a.note("covered", covered);
    a.tables.push(t);
    Ok(a)
}

type Eval = (Option<usize>, relayarea_core::model::PointEval);

fn eval_grid(cfg: &Resolved, grid: &[Point]) -> Result<Vec<Eval>, CliError> {
    let out: Vec<relayarea_core::Result<Eval>> =
        rayon_map(grid, |u| cfg.ctx.evaluate(u, &cfg.layout));
    Ok(out.into_iter().collect::<relayarea_core::Result<Vec<_>>>()?)
}

fn rayon_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

fn map_eea(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let grid = sector_grid(&cfg.layout)?;
    let mut header: Vec<String> =
        ["x", "y", "serving", "e_cr", "e_cd", "e_er_lb", "e_ed_ub", "e_total", "relay_rf", "outage_ok"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    header.extend(cfg.thresholds.e_t.iter().map(|t| format!("eea@{}J", num(*t))));
    let mut t = Table::with_header("map_eea", header);
    let evals = eval_grid(cfg, &grid)?;
    let mut e_max = 0.0f64;
    for (u, (j, ev)) in grid.iter().zip(&evals) {
        let e = &ev.energy;
        if ev.probs.outage_ok {
            e_max = e_max.max(e.total);
        }
        let mut row = vec![
            num(u.x),
            num(u.y),
            serving(*j),
            num(e.e_cr),
            num(e.e_cd),
            num(e.e_er_lb),
            num(e.e_ed_ub),
            num(e.total),
            num(ev.relay_rf),
            flag(ev.probs.outage_ok),
        ];
        row.extend(cfg.thresholds.e_t.iter().map(|&th| flag(ev.probs.outage_ok && e.total <= th)));
        t.push(row);
    }
    let mut a = Artifacts::default();
    a.note("points", grid.len());
    a.note("e_max_covered_j", num(e_max));
    a.tables.push(t);
    Ok(a)
}

fn map_ici(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let layout = &cfg.layout;
    let loads = relay_loads(layout, &cfg.ctx)?;
    let noise = cfg.ctx.scenario.noise;
    let mut t = Table::new("map_ici", &["cell", "x", "y", "interference", "interference_over_noise"]);
    let mut peak = 0.0f64;
    for (c, cell) in neighbor_cells(layout).iter().enumerate() {
        for v in &cell.grid {
            let mut i = 0.0;
            for (p, &e) in layout.relays.iter().zip(&loads) {
                i += interference_at(v, p, e, &cfg.ctx)?;
            }
            peak = peak.max(i / noise);
            t.push(vec![(c + 2).to_string(), num(v.x), num(v.y), num(i), num(i / noise)]);
        }
    }
    let mut a = Artifacts::default();
    for (j, e) in loads.iter().enumerate() {
        a.note(&format!("relay_{j}_mean_rf_j"), num(*e));
    }
    a.note("peak_interference_over_noise", num(peak));
    a.tables.push(t);
    Ok(a)
}

fn regime(r: GammaRegime) -> &'static str {
    match r {
        GammaRegime::Beneficial => "beneficial",
        GammaRegime::Outweighed => "outweighed",
        GammaRegime::NoGain => "no-gain",
    }
}

fn gamma_report(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let g = gamma(&cfg.layout, SchemeAssignment::Uniform(cfg.ctx.scheme), &cfg.ctx, cfg.scope)?;
    let mut t = Table::new("gamma", &["d_b", "n_r", "scheme", "scope", "upsilon_gain", "upsilon_loss", "gamma", "regime"]);
    t.push(vec![
        num(cfg.layout.d_b),
        cfg.layout.n_r().to_string(),
        cfg.ctx.scheme.name().into(),
        match cfg.scope {
            GainScope::All => "all",
            GainScope::CoveredOnly => "covered",
        }
        .into(),
        num(g.upsilon_gain),
        num(g.upsilon_loss),
        num(g.gamma),
        regime(g.regime()).into(),
    ]);
    let mut a = Artifacts::default();
    a.note("gamma", num(g.gamma));
    a.note("regime", regime(g.regime()));
    a.tables.push(t);
    Ok(a)
}

fn scaled_layout(base: &CellLayout, d_b: f64) -> Result<CellLayout, CliError> {
    let k = d_b / base.d_b;
    let relays = base.relays.iter().map(|p| Point::new(p.x * k, p.y * k)).collect();
    Ok(CellLayout::new(d_b, relays, base.grid_step)?)
}

fn psi_report(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let mut t = Table::new(
        "psi",
        &["d_b", "n_r", "scheme", "feasible", "e_max", "e_idle", "psi", "worst_x", "worst_y", "relays"],
    );
    let sweep = if cfg.psi_sweep.is_empty() { vec![cfg.layout.d_b] } else { cfg.psi_sweep.clone() };
    let mut a = Artifacts::default();
    for d_b in sweep {
        let layout = scaled_layout(&cfg.layout, d_b)?;
        let head = vec![num(d_b), layout.n_r().to_string(), cfg.ctx.scheme.name().to_string()];
        let row = match psi(&layout, cfg.ctx.scheme, &cfg.ctx)? {
            PsiOutcome::Feasible(r) => {
                a.note(&format!("psi@{}", num(d_b)), num(r.psi));
                let mut row = head;
                row.extend([
                    "1".into(),
                    num(r.e_max),
                    num(r.e_idle),
                    num(r.psi),
                    num(r.worst.x),
                    num(r.worst.y),
                    relays_field(&layout),
                ]);
                row
            }
            PsiOutcome::Infeasible { at } => {
                if a.infeasible.is_none() {
                    a.infeasible =
                        Some(format!("coverage hole at ({}, {}) for d_b = {} m", num(at.x), num(at.y), num(d_b)));
                }
                let mut row = head;
                row.extend(["0".into(), String::new(), String::new(), String::new(), num(at.x), num(at.y), relays_field(&layout)]);
                row
            }
        };
        t.push(row);
    }
    a.tables.push(t);
    Ok(a)
}

fn optimize_report(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let Some(s) = &cfg.search else {
        return Err(CliError::config("[search]", "the optimize subcommand needs a [search] section"));
    };
    let opts = SearchOptions { search_step: s.search_step, grid_step: cfg.layout.grid_step, symmetric: s.symmetric };
    let mut t = Table::new(
        "optimize",
        &["d_b", "n_r", "objective", "scheme", "feasible", "value", "psi", "gamma", "layouts_evaluated", "relays"],
    );
    let mut a = Artifacts::default();
    for &d_b in &s.d_b {
        for &n_r in &s.n_r {
            let head = vec![num(d_b), n_r.to_string(), s.objective.name().to_string(), cfg.ctx.scheme.name().to_string()];
            let mut row = head;
            match optimize(s.objective, n_r, d_b, cfg.ctx.scheme, &cfg.ctx, &opts)? {
                OptimizeOutcome::Found(o) => {
                    let psi_v = match psi(&o.layout, cfg.ctx.scheme, &cfg.ctx)? {
                        PsiOutcome::Feasible(r) => num(r.psi),
                        PsiOutcome::Infeasible { .. } => String::new(),
                    };
                    let g = gamma(&o.layout, SchemeAssignment::Uniform(cfg.ctx.scheme), &cfg.ctx, cfg.scope)?;
                    let value = match s.objective {
                        Objective::Psi => num(o.value),
                        Objective::Gamma => num(o.value),
                    };
                    a.note(&format!("{}@d_b={},n_r={}", s.objective.name(), num(d_b), n_r), &value);
                    row.extend([
                        "1".into(),
                        value,
                        psi_v,
                        num(g.gamma),
                        o.layouts_evaluated.to_string(),
                        relays_field(&o.layout),
                    ]);
                }
                OptimizeOutcome::Infeasible => {
                    if a.infeasible.is_none() {
                        a.infeasible = Some(format!("no layout covers the sector at d_b = {} m, n_r = {n_r}", num(d_b)));
                    }
                    row.extend(["0".into(), String::new(), String::new(), String::new(), String::new(), String::new()]);
                }
            }
            t.push(row);
        }
    }
    a.tables.push(t);
    Ok(a)
}

fn scheme_map_report(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let mut points = Table::new("scheme_map", &["e_dsp_plus_pdf", "x", "y", "scheme"]);
    let mut header = vec!["e_dsp_plus_pdf".to_string()];
    header.extend(SchemeKind::ALL.iter().map(|k| k.name().to_string()));
    header.extend(["gamma_baseline".to_string(), "gamma".to_string()]);
    let mut counts = Table::with_header("scheme_map_summary", header);
    let mut a = Artifacts::default();
    for &dp in &cfg.dsp_plus_sweep {
        let mut ctx = cfg.ctx;
        ctx.profile.e_dsp_plus_pdf = dp;
        let m = scheme_map(&cfg.layout, &ctx, &cfg.candidates)?;
        for (u, k) in m.points.iter().zip(&m.schemes) {
            points.push(vec![num(dp), num(u.x), num(u.y), k.name().into()]);
        }
        let mut row = vec![num(dp)];
        row.extend(SchemeKind::ALL.iter().map(|&k| m.count(k).to_string()));
        row.extend([num(m.baseline.gamma), num(m.report.gamma)]);
        counts.push(row);
        a.note(&format!("gamma@e_dsp_plus_pdf={}J", num(dp)), num(m.report.gamma));
    }
    a.tables.push(points);
    a.tables.push(counts);
    Ok(a)
}

fn validate(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let mut ctx = cfg.ctx;
    if cfg.transmit_only {
        ctx.profile = ctx.profile.transmit_only();
    }
    let r = error_ratios(&cfg.layout, &cfg.thresholds, &ctx, cfg.samples, cfg.seed)?;
    let mut t = Table::new("validate", &["kind", "threshold", "zeta", "model_points", "oracle_points", "mismatched"]);
    for e in &r.per_threshold {
        t.push(vec![
            e.kind.name().into(),
            num(e.threshold),
            num(e.zeta),
            e.model_points.to_string(),
            e.oracle_points.to_string(),
            e.mismatched.to_string(),
        ]);
    }
    let mut a = Artifacts::default();
    a.note("samples", r.samples);
    a.note("seed", r.seed);
    a.note("covered_points", r.points);
    a.note("zeta_r", num(r.zeta_r));
    a.note("zeta_e", num(r.zeta_e));
    a.note("zeta_i", num(r.zeta_i));
    a.tables.push(t);
    Ok(a)
}
