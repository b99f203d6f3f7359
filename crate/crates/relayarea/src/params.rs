//! Versioned path-loss parameter files.

use serde::Deserialize;

use relayarea_core::channel::{LinkLabel, LinkModel};

use crate::error::CliError;
use crate::units::{Decibel, Meters, Quantity};

/// The parameter file shipped with the crate.
pub const BUILTIN: &str = include_str!("../data/winner2.toml");
pub const BUILTIN_NAME: &str = "<builtin winner2.toml>";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub scenario: String,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub sigma: Quantity<Decibel>,
    pub h_tx: Meters,
    pub h_rx: Meters,
}

impl LinkSection {
    pub fn model(&self, label: LinkLabel) -> LinkModel {
        LinkModel {
            label,
            a: self.a,
            b: self.b,
            c: self.c,
            d: self.d,
            sigma_db: self.sigma.value,
            h_tx: self.h_tx.value,
            h_rx: self.h_rx.value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub version: String,
    pub direct: LinkSection,
    pub backhaul: LinkSection,
    pub access: LinkSection,
    pub interference: LinkSection,
}

impl ParamFile {
    pub fn parse(text: &str, origin: &str) -> Result<ParamFile, CliError> {
        toml::from_str(text).map_err(|e| CliError::config(origin, e))
    }

    pub fn builtin() -> ParamFile {
        ParamFile::parse(BUILTIN, BUILTIN_NAME).expect("builtin parameter file parses")
    }

    /// Link models for direct, backhaul, access and interference.
    pub fn links(&self) -> [LinkModel; 4] {
        [
            self.direct.model(LinkLabel::Direct),
            self.backhaul.model(LinkLabel::Backhaul),
            self.access.model(LinkLabel::Access),
            self.interference.model(LinkLabel::Interference),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let p = ParamFile::builtin();
        assert_eq!(p.version, "winner2/1");
        assert_eq!(p.direct.sigma.value, 6.0);
        assert_eq!(p.backhaul.sigma.value, 3.0);
        assert_eq!(p.access.sigma.value, 4.0);
        assert_eq!(p.interference.sigma.value, 6.0);
        for l in p.links() {
            l.validate().unwrap();
        }
    }

    #[test]
    fn unknown_key_names_line() {
        let text = BUILTIN.replace("d = 0.0\nsigma = \"3 dB\"", "d = 0.0\nsigmaa = \"3 dB\"");
        let err = ParamFile::parse(&text, "p.toml").unwrap_err().to_string();
        assert!(err.contains("sigmaa") && err.contains("line"), "{err}");
    }
}
