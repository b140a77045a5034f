//! Sidecar JSON with per-place capacities: `{"capacities": {"p1": 3}}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use symvec::PetriNet;

use crate::error::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    #[serde(default)]
    pub capacities: BTreeMap<String, u32>,
}

impl Sidecar {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        Sidecar::parse(&text)
    }

    pub fn apply(&self, net: &mut PetriNet) -> Result<()> {
        for (place, k) in &self.capacities {
            let p = net.place_index(place)?;
            net.set_capacity(p, Some(*k))?;
        }
        Ok(())
    }
}
