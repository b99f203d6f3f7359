#![allow(dead_code)]

use relayarea_core::channel::{dbm_to_watts, AntennaPattern, LinkLabel, LinkModel, ScenarioConfig};
use relayarea_core::model::ModelContext;
use relayarea_core::schemes::{EnergyProfile, SchemeKind};

pub fn link(label: LinkLabel, a: f64, b: f64, c: f64, d: f64, sigma_db: f64, h_tx: f64, h_rx: f64) -> LinkModel {
    LinkModel { label, a, b, c, d, sigma_db, h_tx, h_rx }
}

pub fn scenario() -> ScenarioConfig {
    ScenarioConfig {
        rate: 3.0,
        noise: dbm_to_watts(-93.0),
        f_c: 2.6,
        p_out: 0.02,
        direct: link(LinkLabel::Direct, 35.225, 43.072, 23.0, 0.0, 6.0, 30.0, 1.5),
        backhaul: link(LinkLabel::Backhaul, 22.7, 41.0, 20.0, 0.0, 3.0, 30.0, 20.0),
        access: link(LinkLabel::Access, 22.7, 41.0, 20.0, 0.0, 4.0, 20.0, 1.5),
        interference: link(LinkLabel::Interference, 40.0, 13.47, 6.0, -14.0, 6.0, 20.0, 1.5),
        antenna: AntennaPattern::Sectored { g_max_db: 18.0, theta_3db_deg: 65.0, a_max_db: 20.0 },
        min_link_distance: 10.0,
    }
}

pub fn profile() -> EnergyProfile {
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

pub fn ctx() -> ModelContext {
    ModelContext { scenario: scenario(), profile: profile(), scheme: SchemeKind::TwoHop, direct_capped: true }
}

/// The same context with every shadowing deviation set to zero.
pub fn ctx_sigma0() -> ModelContext {
    let mut c = ctx();
    for l in [&mut c.scenario.direct, &mut c.scenario.backhaul, &mut c.scenario.access, &mut c.scenario.interference] {
        l.sigma_db = 0.0;
    }
    c
}
