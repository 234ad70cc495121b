//! JSON curve documents.
//!
//! ```json
//! {"name": "cusp_f3", "p": 3, "k": 1,
//!  "terms": [[0, 2, 1, "1"], [3, 0, 0, "-1"]],
//!  "declared": {"integral": true,
//!               "singular_points": [{"chart": "z", "coords": ["0", "0"],
//!                                    "residue_degree": 1, "branches": 1, "delta": 1}]}}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub name: String,
    pub p: u32,
    pub k: u32,
    /// `[i, j, k, coeff]` for `coeff * x^i y^j z^k`.
    pub terms: Vec<(u32, u32, u32, String)>,
    #[serde(default)]
    pub declared: Declared,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Declared {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular_points: Vec<DeclaredPoint>,
}

/// Branch data for one singular closed point. `coords` are the affine
/// coordinates of one geometric point of the orbit in the named chart,
/// written over `F_{q^e}` with `e = residue_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclaredPoint {
    #[serde(default = "default_chart")]
    pub chart: String,
    pub coords: Vec<String>,
    #[serde(default = "default_residue_degree")]
    pub residue_degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_degrees: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<u32>,
}

fn default_chart() -> String {
    "z".into()
}

fn default_residue_degree() -> u32 {
    1
}

impl DeclaredPoint {
    /// Residue degrees of the branch orbits, from whichever form was declared.
    pub fn branch_orbits(&self) -> Option<Vec<u32>> {
        match (&self.orbit_degrees, self.branches) {
            (Some(o), _) => Some(o.clone()),
            (None, Some(r)) => Some(vec![1; r as usize]),
            (None, None) => None,
        }
    }
}

impl CurveDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("curve document: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}
