//! The built-in field catalog used for realizability grids.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numfields::NumberFieldDesc;

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Clone, Debug, Deserialize)]
pub struct FieldCatalog {
    pub version: u32,
    pub totally_real: Vec<NumberFieldDesc>,
    pub cm: Vec<NumberFieldDesc>,
}

impl FieldCatalog {
    pub fn builtin() -> FieldCatalog {
        serde_json::from_str(CATALOG_JSON).expect("bundled catalog parses")
    }

    pub fn from_json(s: &str) -> Result<FieldCatalog> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("catalog: {e}")))
    }

    pub fn all(&self) -> impl Iterator<Item = &NumberFieldDesc> {
        self.totally_real.iter().chain(&self.cm)
    }
}
