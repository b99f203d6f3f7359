//! Run configuration: strict TOML with explicit units on every physical
//! quantity.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use relayarea_core::channel::{AntennaPattern, ScenarioConfig};
use relayarea_core::geometry::{CellLayout, Point};
use relayarea_core::ici::GainScope;
use relayarea_core::model::ModelContext;
use relayarea_core::oracle::Thresholds;
use relayarea_core::planner::Objective;
use relayarea_core::schemes::{EnergyProfile, SchemeKind};

use crate::error::CliError;
use crate::params::{ParamFile, BUILTIN, BUILTIN_NAME};
use crate::units::{self, Angle, Decibel, Frequency, Gain, Joules, Length, Meters, Power, Quantity, Rate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Dtx,
    TwoHop,
    EoPdf,
    IrPdf,
}

impl From<Scheme> for SchemeKind {
    fn from(s: Scheme) -> SchemeKind {
        match s {
            Scheme::Dtx => SchemeKind::Dtx,
            Scheme::TwoHop => SchemeKind::TwoHop,
            Scheme::EoPdf => SchemeKind::EoPdf,
            Scheme::IrPdf => SchemeKind::IrPdf,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub rate: Quantity<Rate>,
    pub noise: Quantity<Power>,
    pub carrier: Quantity<Frequency>,
    pub p_out: f64,
    pub min_link_distance: Meters,
    /// Parameter file, relative to the config file; the builtin one if absent.
    pub params: Option<String>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternKind {
    Sectored,
    Omni,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaSection {
    pub pattern: PatternKind,
    pub g_max: Option<Quantity<Gain>>,
    pub theta_3db: Option<Quantity<Angle>>,
    pub a_max: Option<Quantity<Decibel>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub e_b_max: Joules,
    pub e_r_max: Joules,
    pub eta_b: f64,
    pub eta_r: f64,
    pub e_b_tx_plus_u_rx: Joules,
    pub e_b_idle: Joules,
    pub e_r_idle: Joules,
    pub e_dsp_2hop: Joules,
    pub e_dsp_plus_pdf: Joules,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutSection {
    pub d_b: Meters,
    pub grid_step: Meters,
    pub scheme: Scheme,
    #[serde(default)]
    pub relays: Vec<[Meters; 2]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSection {
    #[serde(default)]
    pub p_t: Vec<f64>,
    #[serde(default)]
    pub e_t: Vec<Joules>,
    #[serde(default)]
    pub e_t_relay: Vec<Joules>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Validate transmit energies only (unit multipliers, no offsets).
    #[serde(default)]
    pub transmit_only: bool,
}

fn default_samples() -> u64 {
    20_000
}
fn default_seed() -> u64 {
    1
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection { samples: default_samples(), seed: default_seed(), transmit_only: false }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveName {
    Psi,
    Gamma,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub objective: ObjectiveName,
    pub n_r: Vec<usize>,
    /// Cell edges to optimize at; the layout's when empty.
    #[serde(default)]
    pub d_b: Vec<Meters>,
    #[serde(default = "default_search_step")]
    pub search_step: Meters,
    #[serde(default = "yes")]
    pub symmetric: bool,
}

fn default_search_step() -> Meters {
    Meters::new(25.0)
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeMapSection {
    #[serde(default)]
    pub candidates: Vec<Scheme>,
    /// Values of the extra PDF processing energy to map; the profile's when empty.
    #[serde(default)]
    pub e_dsp_plus_pdf: Vec<Joules>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeName {
    #[default]
    All,
    Covered,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSection {
    #[serde(default)]
    pub scope: ScopeName,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSection {
    /// Cell edges to evaluate at, relays scaled with the edge.
    #[serde(default)]
    pub d_b: Vec<Meters>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioSection,
    pub antenna: AntennaSection,
    pub profile: ProfileSection,
    pub layout: LayoutSection,
    #[serde(default)]
    pub thresholds: ThresholdSection,
    #[serde(default)]
    pub oracle: OracleSection,
    pub search: Option<SearchSection>,
    #[serde(default)]
    pub scheme_map: SchemeMapSection,
    #[serde(default)]
    pub gamma: GammaSection,
    #[serde(default)]
    pub psi: PsiSection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub grid_step: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SearchSettings {
    pub objective: Objective,
    pub n_r: Vec<usize>,
    pub d_b: Vec<f64>,
    pub search_step: f64,
    pub symmetric: bool,
}

/// A validated configuration ready to run.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub ctx: ModelContext,
    pub layout: CellLayout,
    pub thresholds: Thresholds,
    pub samples: u64,
    pub seed: u64,
    pub transmit_only: bool,
    pub search: Option<SearchSettings>,
    pub candidates: Vec<SchemeKind>,
    pub dsp_plus_sweep: Vec<f64>,
    pub scope: GainScope,
    pub psi_sweep: Vec<f64>,
    pub params_version: String,
    /// SHA-256 over the config text, the parameter file and the overrides.
    pub hash: String,
}

fn positive(origin: &str, key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(origin, format!("`{key}` must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn parse(text: &str, origin: &str) -> Result<RunConfig, CliError> {
        toml::from_str(text).map_err(|e| CliError::config(origin, e))
    }
}

/// Reads, parses and validates the config at `path`.
pub fn load(path: &Path, ov: &Overrides) -> Result<Resolved, CliError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(&origin, e))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    resolve(&text, &origin, &dir, ov)
}

/// Validates config `text`; parameter files are looked up relative to `dir`.
pub fn resolve(text: &str, origin: &str, dir: &Path, ov: &Overrides) -> Result<Resolved, CliError> {
    let cfg = RunConfig::parse(text, origin)?;
    let (ptext, porigin) = match &cfg.scenario.params {
        Some(p) => {
            let pp: PathBuf = dir.join(p);
            let po = pp.display().to_string();
            (std::fs::read_to_string(&pp).map_err(|e| CliError::config(&po, e))?, po)
        }
        None => (BUILTIN.to_string(), BUILTIN_NAME.to_string()),
    };
    let params = ParamFile::parse(&ptext, &porigin)?;
    let [direct, backhaul, access, interference] = params.links();
    for l in params.links() {
        l.validate().map_err(|e| CliError::config(&porigin, format!("{:?} link: {e}", l.label)))?;
    }

    let antenna = match cfg.antenna.pattern {
        PatternKind::Omni => AntennaPattern::Omni,
        PatternKind::Sectored => {
            let (Some(g), Some(t), Some(a)) = (cfg.antenna.g_max, cfg.antenna.theta_3db, cfg.antenna.a_max) else {
                return Err(CliError::config(origin, "sectored antenna needs `g_max`, `theta_3db` and `a_max`"));
            };
            AntennaPattern::Sectored { g_max_db: g.value, theta_3db_deg: positive(origin, "antenna.theta_3db", t.value)?, a_max_db: a.value }
        }
    };
    let sc = &cfg.scenario;
    let scenario = ScenarioConfig {
        rate: sc.rate.value,
        noise: sc.noise.value,
        f_c: sc.carrier.value,
        p_out: sc.p_out,
        direct,
        backhaul,
        access,
        interference,
        antenna,
        min_link_distance: sc.min_link_distance.value,
    };
    scenario.validate().map_err(|e| CliError::config(origin, format!("[scenario] {e}")))?;

    let p = &cfg.profile;
    let profile = EnergyProfile {
        e_b_max: p.e_b_max.value,
        e_r_max: p.e_r_max.value,
        eta_b: p.eta_b,
        eta_r: p.eta_r,
        e_b_tx_plus_u_rx: p.e_b_tx_plus_u_rx.value,
        e_b_idle: p.e_b_idle.value,
        e_r_idle: p.e_r_idle.value,
        e_dsp_2hop: p.e_dsp_2hop.value,
        e_dsp_plus_pdf: p.e_dsp_plus_pdf.value,
    };
    profile.validate().map_err(|e| CliError::config(origin, format!("[profile] {e}")))?;

    let grid_step = positive(origin, "layout.grid_step", ov.grid_step.unwrap_or(cfg.layout.grid_step.value))?;
    let d_b = positive(origin, "layout.d_b", cfg.layout.d_b.value)?;
    let relays = cfg.layout.relays.iter().map(|[x, y]| Point::new(x.value, y.value)).collect();
    let layout = CellLayout::new(d_b, relays, grid_step).map_err(|e| CliError::config(origin, format!("[layout] {e}")))?;
    relayarea_core::geometry::sector_grid(&layout).map_err(|e| CliError::config(origin, format!("[layout] {e}")))?;

    let ctx = ModelContext { scenario, profile, scheme: cfg.layout.scheme.into(), direct_capped: true };

    let th = &cfg.thresholds;
    if let Some(p) = th.p_t.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(CliError::config(origin, format!("[thresholds] p_t values must lie in (0, 1), got {p}")));
    }
    let thresholds = Thresholds {
        p_t: th.p_t.clone(),
        e_t: th.e_t.iter().map(|e| e.value).collect(),
        e_t_relay: th.e_t_relay.iter().map(|e| e.value).collect(),
    };

    let search = match &cfg.search {
        None => None,
        Some(s) => {
            if s.n_r.is_empty() || s.n_r.contains(&0) {
                return Err(CliError::config(origin, "[search] n_r must list relay counts of at least 1"));
            }
            let mut d = Vec::new();
            for m in &s.d_b {
                d.push(positive(origin, "search.d_b", m.value)?);
            }
            if d.is_empty() {
                d.push(d_b);
            }
            Some(SearchSettings {
                objective: match s.objective {
                    ObjectiveName::Psi => Objective::Psi,
                    ObjectiveName::Gamma => Objective::Gamma,
                },
                n_r: s.n_r.clone(),
                d_b: d,
                search_step: positive(origin, "search.search_step", s.search_step.value)?,
                symmetric: s.symmetric,
            })
        }
    };

    let mut candidates: Vec<SchemeKind> = cfg.scheme_map.candidates.iter().map(|&s| s.into()).collect();
    if candidates.is_empty() {
        candidates = SchemeKind::ALL.to_vec();
    }
    let mut dsp_plus_sweep: Vec<f64> = cfg.scheme_map.e_dsp_plus_pdf.iter().map(|e| e.value).collect();
    if dsp_plus_sweep.is_empty() {
        dsp_plus_sweep.push(profile.e_dsp_plus_pdf);
    }
    let mut psi_sweep = Vec::new();
    for m in &cfg.psi.d_b {
        psi_sweep.push(positive(origin, "psi.d_b", m.value)?);
    }
    if cfg.oracle.samples == 0 {
        return Err(CliError::config(origin, "[oracle] samples must be at least 1"));
    }

    let seed = ov.seed.unwrap_or(cfg.oracle.seed);
    let mut h = Sha256::new();
    h.update(b"relayarea-config/1\n");
    h.update(text.as_bytes());
    h.update(b"\n--params--\n");
    h.update(ptext.as_bytes());
    h.update(format!("\n--overrides--\nseed={:?}\ngrid_step={:?}\n", ov.seed, ov.grid_step).as_bytes());
    let hash = hex::encode(h.finalize());

    Ok(Resolved {
        ctx,
        layout,
        thresholds,
        samples: cfg.oracle.samples,
        seed,
        transmit_only: cfg.oracle.transmit_only,
        search,
        candidates,
        dsp_plus_sweep,
        scope: match cfg.gamma.scope {
            ScopeName::All => GainScope::All,
            ScopeName::Covered => GainScope::CoveredOnly,
        },
        psi_sweep,
        params_version: params.version,
        hash,
    })
}

/// Parses a CLI length: `"25 m"` or a bare number of meters.
pub fn parse_cli_length(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) => Ok(v),
        Err(_) => units::parse::<Length>(s).map(|q| q.value),
    }
}
