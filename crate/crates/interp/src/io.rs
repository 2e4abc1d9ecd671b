//! JSON dataset files.
//!
//! ```json
//! { "dim": 1,
//!   "points": [ { "x": [0.0], "f": 0.0, "g": [1.0] } ],
//!   "family": { "kind": "WeaklyConvexBounded", "mu": 1.0, "B": 1.0 },
//!   "probe_x": [2.5] }
//! ```
//! `family`, `probe_x` (number or array) and `tau_star` are optional.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use interp_core::search::Counterexample;
use interp_core::{ConstraintFamily, DataTriple, Dataset};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probe {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Probe {
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            Probe::Scalar(v) => vec![*v],
            Probe::Vector(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub points: Vec<DataTriple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<ConstraintFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_x: Option<Probe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_star: Option<f64>,
}

impl DatasetFile {
    pub fn from_dataset(s: &Dataset) -> Self {
        DatasetFile {
            dim: Some(s.dim()),
            points: s.triples().to_vec(),
            family: None,
            probe_x: None,
            tau_star: None,
        }
    }

    pub fn from_counterexample(c: &Counterexample) -> Self {
        DatasetFile {
            family: Some(c.family),
            probe_x: Some(Probe::Vector(c.x.clone())),
            tau_star: Some(c.tau_star),
            ..Self::from_dataset(&c.s)
        }
    }

    /// Validated dataset; the declared `dim` must match the points.
    pub fn dataset(&self) -> anyhow::Result<Dataset> {
        let s = Dataset::new(self.points.clone())?;
        if let Some(d) = self.dim {
            if d != s.dim() {
                bail!("declared dim {d} but points have dimension {}", s.dim());
            }
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset files always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_scalar_probe_and_family() {
        let f = DatasetFile::parse(
            r#"{"dim":1,"points":[{"x":[0],"f":0,"g":[1]},{"x":[3],"f":-1.5,"g":[1]}],
                "family":{"kind":"wc","mu":1,"B":1},"probe_x":2.5}"#,
        )
        .unwrap();
        assert_eq!(f.dataset().unwrap().len(), 2);
        assert_eq!(
            f.family,
            Some(ConstraintFamily::WeaklyConvexBounded { mu: 1.0, b: 1.0 })
        );
        assert_eq!(f.probe_x.unwrap().to_vec(), vec![2.5]);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let f = DatasetFile::parse(r#"{"dim":2,"points":[{"x":[0],"f":0,"g":[1]}]}"#).unwrap();
        assert!(f.dataset().is_err());
        assert!(DatasetFile::parse(r#"{"points":[{"x":[0],"f":0}]}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let s = Dataset::from_scalars(&[(0.0, 0.0, 1.0), (1.0, 0.5, -0.5)]).unwrap();
        let f = DatasetFile::from_dataset(&s);
        let back = DatasetFile::parse(&f.to_json()).unwrap();
        assert_eq!(back.dataset().unwrap(), s);
    }
}
