//! Run configuration shared by every subcommand.

use maslov_core::maslov::IndexOptions;
use maslov_core::Tolerances;
use serde::{Deserialize, Serialize};

use crate::json::{JsonMatrix, LagrangianSpec, PathSpec, SpaceSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default = "d_structure")]
    pub structure: f64,
    #[serde(default = "d_symplectic")]
    pub symplectic: f64,
    #[serde(default = "d_lagrangian")]
    pub lagrangian: f64,
    #[serde(default = "d_rank")]
    pub rank: f64,
    #[serde(default = "d_ambiguity")]
    pub ambiguity: f64,
}

fn d_structure() -> f64 {
    Tolerances::default().structure
}
fn d_symplectic() -> f64 {
    Tolerances::default().symplectic
}
fn d_lagrangian() -> f64 {
    Tolerances::default().lagrangian
}
fn d_rank() -> f64 {
    Tolerances::default().rank
}
fn d_ambiguity() -> f64 {
    Tolerances::default().ambiguity
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec::from(Tolerances::default())
    }
}

impl From<Tolerances> for ToleranceSpec {
    fn from(t: Tolerances) -> Self {
        ToleranceSpec {
            structure: t.structure,
            symplectic: t.symplectic,
            lagrangian: t.lagrangian,
            rank: t.rank,
            ambiguity: t.ambiguity,
        }
    }
}

impl From<ToleranceSpec> for Tolerances {
    fn from(t: ToleranceSpec) -> Self {
        Tolerances {
            structure: t.structure,
            symplectic: t.symplectic,
            lagrangian: t.lagrangian,
            rank: t.rank,
            ambiguity: t.ambiguity,
        }
    }
}

/// Which index algorithm `index` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    #[default]
    Winding,
    CrossingForm,
    /// Both, with a disagreement reported as an identity violation.
    Both,
}

fn d_schema() -> u32 {
    SCHEMA_VERSION
}
fn d_trials() -> u64 {
    100
}
fn d_seed() -> u64 {
    20_240_601
}
fn d_dims() -> [usize; 2] {
    [1, 3]
}
fn d_k() -> [usize; 2] {
    [1, 6]
}
fn d_suite() -> String {
    "all".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "d_schema")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lagrangian: Option<LagrangianSpec>,
    /// Input of `decompose`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<JsonMatrix>,
    #[serde(default)]
    pub method: MethodChoice,
    #[serde(default = "d_suite")]
    pub suite: String,
    #[serde(default = "d_trials")]
    pub trials: u64,
    #[serde(default = "d_seed")]
    pub master_seed: u64,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    /// Inclusive range of the half-dimension `n`.
    #[serde(default = "d_dims")]
    pub dims: [usize; 2],
    /// Inclusive range of the iteration count `k`.
    #[serde(default = "d_k")]
    pub k_range: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("every field has a default")
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        if self.dims[0] == 0 || self.dims[0] > self.dims[1] {
            return Err(format!("dims range {:?} is empty or starts at 0", self.dims));
        }
        if self.k_range[0] == 0 || self.k_range[0] > self.k_range[1] {
            return Err(format!("k_range {:?} is empty or starts at 0", self.k_range));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("structure", t.structure),
            ("symplectic", t.symplectic),
            ("lagrangian", t.lagrangian),
            ("rank", t.rank),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(format!("tolerance {name} = {v} must lie in (0, 1)"));
            }
        }
        if !(t.ambiguity >= 1.0) {
            return Err(format!("tolerance ambiguity = {} must be at least 1", t.ambiguity));
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.into()
    }

    pub fn index_options(&self) -> IndexOptions {
        IndexOptions::with_tolerances(self.tolerances())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.schema_version, SCHEMA_VERSION);
        assert_eq!(cfg.tolerances(), Tolerances::default());
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(RunConfig::from_json(r#"{"trials": 0}"#).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = RunConfig::from_json(r#"{"trails": 3}"#).unwrap_err();
        assert!(err.contains("trails"), "{err}");
    }

    #[test]
    fn wrong_schema_rejected() {
        assert!(RunConfig::from_json(r#"{"schema_version": 7}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig::from_json(r#"{"space": "canonical:2", "trials": 5, "dims": [1, 2]}"#).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }
}
