//! Path loss, BS antenna gain and per-link RF energy requirements.

use crate::geometry::{BaseStation, CellLayout, Point, UserPos};
use crate::math;
use crate::stats::{sigma_from_db, LogNormal};
use crate::{ModelError, Result};

/// Which hop a link model describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkLabel {
    Direct,
    Backhaul,
    Access,
    Interference,
}

/// Path loss `PL = A·log10(d) + B + C·log10(f_c/5) + D·log10((h_tx−1)(h_rx−1))` dB
/// with log-normal shadowing of standard deviation `sigma_db`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkModel {
    pub label: LinkLabel,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub sigma_db: f64,
    pub h_tx: f64,
    pub h_rx: f64,
}

impl LinkModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(ModelError::Domain { what: "path-loss exponent A", value: self.a });
        }
        if !(self.sigma_db >= 0.0) {
            return Err(ModelError::Domain { what: "shadowing sigma", value: self.sigma_db });
        }
        if !(self.h_tx > 1.0) {
            return Err(ModelError::Domain { what: "transmit antenna height", value: self.h_tx });
        }
        if !(self.h_rx > 1.0) {
            return Err(ModelError::Domain { what: "receive antenna height", value: self.h_rx });
        }
        Ok(())
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.a / 10.0
    }

    /// 10·log10(K) at carrier `f_c` GHz.
    pub fn k_db(&self, f_c: f64) -> f64 {
        self.b + self.c * math::log10(f_c / 5.0) + self.d * math::log10((self.h_tx - 1.0) * (self.h_rx - 1.0))
    }

    /// Natural-log shadowing scale.
    #[inline]
    pub fn sigma(&self) -> f64 {
        sigma_from_db(self.sigma_db)
    }
}

/// Linear attenuation γ = K·d^α.
pub fn path_loss(link: &LinkModel, dist: f64, f_c: f64) -> Result<f64> {
    if !(dist > 0.0) {
        return Err(ModelError::Domain { what: "link distance", value: dist });
    }
    if !(link.h_tx > 1.0 && link.h_rx > 1.0) {
        return Err(ModelError::Domain { what: "antenna height", value: link.h_tx.min(link.h_rx) });
    }
    Ok(math::db_to_lin(link.k_db(f_c)) * math::powf(dist, link.alpha()))
}

/// Horizontal BS antenna pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AntennaPattern {
    /// `G(θ) = G_max − min(12(θ/θ_3dB)², A_max)` dB.
    Sectored { g_max_db: f64, theta_3db_deg: f64, a_max_db: f64 },
    /// Unit gain in every direction.
    Omni,
}

impl AntennaPattern {
    pub fn gain_db(&self, theta: f64) -> f64 {
        match *self {
            AntennaPattern::Sectored { g_max_db, theta_3db_deg, a_max_db } => {
                let r = theta.to_degrees() / theta_3db_deg;
                g_max_db - (12.0 * r * r).min(a_max_db)
            }
            AntennaPattern::Omni => 0.0,
        }
    }

    /// Linear gain from `bs` toward `target`.
    pub fn gain(&self, bs: &BaseStation, target: &Point) -> f64 {
        match self {
            AntennaPattern::Omni => 1.0,
            _ => math::db_to_lin(self.gain_db(bs.off_boresight(target))),
        }
    }
}

/// Channel, rate and noise settings shared by every model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    /// Bits per channel use.
    pub rate: f64,
    /// Noise power in watts.
    pub noise: f64,
    /// Carrier frequency in GHz.
    pub f_c: f64,
    pub p_out: f64,
    pub direct: LinkModel,
    pub backhaul: LinkModel,
    pub access: LinkModel,
    pub interference: LinkModel,
    pub antenna: AntennaPattern,
    /// Link distances are clamped from below to this value (meters).
    pub min_link_distance: f64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0) {
            return Err(ModelError::DegenerateRate);
        }
        if !(self.noise > 0.0) {
            return Err(ModelError::Domain { what: "noise power", value: self.noise });
        }
        if !(self.f_c > 0.0) {
            return Err(ModelError::Domain { what: "carrier frequency", value: self.f_c });
        }
        if !(self.p_out > 0.0 && self.p_out < 1.0) {
            return Err(ModelError::Domain { what: "outage probability", value: self.p_out });
        }
        if !(self.min_link_distance >= 0.0) {
            return Err(ModelError::Domain { what: "minimum link distance", value: self.min_link_distance });
        }
        for l in [&self.direct, &self.backhaul, &self.access, &self.interference] {
            l.validate()?;
        }
        Ok(())
    }

    /// Attenuation over `link` with the distance clamp applied.
    pub fn gamma(&self, link: &LinkModel, dist: f64) -> Result<f64> {
        path_loss(link, dist.max(self.min_link_distance), self.f_c)
    }

    #[inline]
    fn single_phase_factor(&self) -> f64 {
        math::exp2(self.rate) - 1.0
    }

    #[inline]
    fn half_phase_factor(&self) -> f64 {
        math::exp2(2.0 * self.rate) - 1.0
    }

    /// E_d⁽⁰⁾ from `bs` to `u`.
    pub fn direct_energy(&self, bs: &BaseStation, u: &UserPos) -> Result<f64> {
        let g = self.gamma(&self.direct, bs.pos.dist(u))?;
        Ok(self.single_phase_factor() * self.noise * g / self.antenna.gain(bs, u))
    }

    /// E_b⁽⁰⁾ from `bs` to the relay at `p`.
    pub fn backhaul_energy(&self, bs: &BaseStation, p: &Point) -> Result<f64> {
        let g = self.gamma(&self.backhaul, bs.pos.dist(p))?;
        Ok(self.half_phase_factor() * self.noise * g / (2.0 * self.antenna.gain(bs, p)))
    }

    /// E_r⁽⁰⁾ from the relay at `p` to `u`.
    pub fn access_energy(&self, p: &Point, u: &UserPos) -> Result<f64> {
        let g = self.gamma(&self.access, p.dist(u))?;
        Ok(self.half_phase_factor() * self.noise * g / 2.0)
    }

    /// Received SNR per joule on each hop (used by partial decode-forward).
    pub fn link_gains(&self, bs: &BaseStation, p: &Point, u: &UserPos) -> Result<crate::schemes::LinkGains> {
        let g_d = self.antenna.gain(bs, u) / (self.noise * self.gamma(&self.direct, bs.pos.dist(u))?);
        let g_b = self.antenna.gain(bs, p) / (self.noise * self.gamma(&self.backhaul, bs.pos.dist(p))?);
        let g_r = 1.0 / (self.noise * self.gamma(&self.access, p.dist(u))?);
        Ok(crate::schemes::LinkGains { g_d, g_b, g_r })
    }
}

/// Shadow-free energies E_d⁽⁰⁾, E_b⁽⁰⁾, E_r⁽⁰⁾ in joules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowFree {
    pub e_d: f64,
    pub e_b: f64,
    pub e_r: f64,
}

/// The three link energies as log-normals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfEnergies {
    pub d: LogNormal,
    pub b: LogNormal,
    pub r: LogNormal,
}

/// Shadow-free energies for user `u` served through `relay` by `bs`.
/// A zero rate yields zeros.
pub fn shadow_free(u: &UserPos, relay: &Point, cfg: &ScenarioConfig, bs: &BaseStation) -> Result<ShadowFree> {
    Ok(ShadowFree {
        e_d: cfg.direct_energy(bs, u)?,
        e_b: cfg.backhaul_energy(bs, relay)?,
        e_r: cfg.access_energy(relay, u)?,
    })
}

/// Log-normal RF energies for user `u` via `relay`, served by BS₁ of `layout`.
pub fn rf_energies(u: &UserPos, relay: &Point, cfg: &ScenarioConfig, layout: &CellLayout) -> Result<RfEnergies> {
    if !(cfg.rate > 0.0) {
        return Err(ModelError::DegenerateRate);
    }
    let e = shadow_free(u, relay, cfg, &layout.bs())?;
    Ok(RfEnergies {
        d: LogNormal::from_median(e.e_d, cfg.direct.sigma())?,
        b: LogNormal::from_median(e.e_b, cfg.backhaul.sigma())?,
        r: LogNormal::from_median(e.e_r, cfg.access.sigma())?,
    })
}

/// Noise power in watts from dBm.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    math::db_to_lin(dbm - 30.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(a: f64) -> LinkModel {
        LinkModel { label: LinkLabel::Direct, a, b: 40.0, c: 20.0, d: 0.0, sigma_db: 6.0, h_tx: 30.0, h_rx: 1.5 }
    }

    #[test]
    fn exponent_law() {
        let l = link(35.0);
        let r = path_loss(&l, 400.0, 2.6).unwrap() / path_loss(&l, 200.0, 2.6).unwrap();
        assert!((r - 11.313_708_498_984_76).abs() < 1e-9);
    }

    #[test]
    fn carrier_term_vanishes_at_5ghz() {
        let l = link(35.0);
        assert!((l.k_db(5.0) - 40.0).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        let l = link(35.0);
        assert!(path_loss(&l, 0.0, 2.6).is_err());
        let mut low = l;
        low.h_rx = 1.0;
        assert!(path_loss(&low, 10.0, 2.6).is_err());
    }

    #[test]
    fn dbm_conversion() {
        assert!((dbm_to_watts(-93.0) - 5.011_872_336_272_715e-13).abs() < 1e-25);
    }

    #[test]
    fn sectored_pattern_floor() {
        let p = AntennaPattern::Sectored { g_max_db: 18.0, theta_3db_deg: 65.0, a_max_db: 20.0 };
        assert_eq!(p.gain_db(0.0), 18.0);
        assert!((p.gain_db(65f64.to_radians()) - 6.0).abs() < 1e-12);
        assert_eq!(p.gain_db(core::f64::consts::PI), -2.0);
    }
}
