//! Problem configuration: a single JSON document describing one testing
//! problem, plus validation into ready-to-use domain types.
//!
//! One file captures everything an experiment needs (laws, channel, costs,
//! schedules, grid, seed), so any result can be reproduced from the config
//! that produced it. Command-line flags may override only the seed and the
//! trial count.

use crate::error::{Error, Result};
use crate::prob::{validate_problem, CostFunction, Dmc, JointPmf};
use crate::schemes::{Regime, Schedules};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Cost vector plus the index of the free symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSpec {
    pub costs: Vec<f64>,
    pub zero_symbol: usize,
}

fn default_grid() -> Vec<usize> {
    vec![100, 200, 300, 400, 500]
}

fn default_trials() -> u64 {
    10_000
}

fn default_epsilon() -> f64 {
    0.05
}

fn all_regimes() -> Vec<Regime> {
    vec![
        Regime::SublinearUses,
        Regime::StrictCost,
        Regime::ExpectedCostH0,
        Regime::ExpectedCostBoth,
        Regime::LocalOnly,
    ]
}

/// One problem instance as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Joint law of `(U, V)` under the null hypothesis, rows indexed by `U`.
    pub p_uv: Vec<Vec<f64>>,
    /// Joint law under the alternative hypothesis.
    pub q_uv: Vec<Vec<f64>>,
    /// Channel transition matrix, rows indexed by input symbol.
    pub channel: Vec<Vec<f64>>,
    pub cost: CostSpec,
    #[serde(default)]
    pub schedules: Schedules,
    /// Typicality slack override; regime defaults apply when absent.
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default = "default_grid")]
    pub grid: Vec<usize>,
    /// Type-I error budget used by feasibility diagnostics.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "all_regimes")]
    pub regimes: Vec<Regime>,
}

/// A validated configuration with all domain types constructed.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub p_uv: JointPmf,
    pub q_uv: JointPmf,
    pub channel: Dmc,
    pub cost: CostFunction,
    pub schedules: Schedules,
    pub mu: Option<f64>,
    pub grid: Vec<usize>,
    pub epsilon: f64,
    pub seed: u64,
    pub trials: u64,
    pub regimes: Vec<Regime>,
}

impl ProblemConfig {
    /// Parses a config from JSON text.
    pub fn parse_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads and parses a config file.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_str(&text)
    }

    /// Serializes back to JSON text; parsing the result yields an equal
    /// config.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Validates every field and constructs the domain types.
    pub fn build(&self) -> Result<ProblemInstance> {
        let p_uv = JointPmf::from_rows(self.p_uv.clone())?;
        let q_uv = JointPmf::from_rows(self.q_uv.clone())?;
        validate_problem(&p_uv, &q_uv)?;
        let channel = Dmc::from_rows(self.channel.clone())?;
        let cost = CostFunction::new(self.cost.costs.clone(), self.cost.zero_symbol)?;
        if cost.len() != channel.inputs() {
            return Err(Error::ShapeMismatch {
                op: "config: cost vector vs channel inputs",
                expected: channel.inputs(),
                got: cost.len(),
            });
        }
        if let Some(m) = self.mu {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::InvalidConfig {
                    detail: format!("mu must be positive and finite, got {m}"),
                });
            }
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidConfig {
                detail: "blocklength grid is empty".into(),
            });
        }
        if self.grid[0] == 0 {
            return Err(Error::InvalidConfig {
                detail: "blocklengths must be positive".into(),
            });
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig {
                detail: "blocklength grid must be strictly increasing".into(),
            });
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::InvalidConfig {
                detail: format!("epsilon must lie in [0, 1), got {}", self.epsilon),
            });
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig {
                detail: "trials must be positive".into(),
            });
        }
        if self.regimes.is_empty() {
            return Err(Error::InvalidConfig {
                detail: "no regimes selected".into(),
            });
        }
        self.schedules.uses.check_sublinear(&self.grid, "channel-use schedule")?;
        self.schedules.cost.check_sublinear(&self.grid, "cost schedule")?;
        Ok(ProblemInstance {
            p_uv,
            q_uv,
            channel,
            cost,
            schedules: self.schedules.clone(),
            mu: self.mu,
            grid: self.grid.clone(),
            epsilon: self.epsilon,
            seed: self.seed,
            trials: self.trials,
            regimes: self.regimes.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> &'static str {
        r#"{
            "p_uv": [[0.35, 0.15], [0.10, 0.40]],
            "q_uv": [[0.30, 0.20], [0.25, 0.25]],
            "channel": [[1.0, 0.0], [0.1, 0.9]],
            "cost": {"costs": [0.0, 1.0], "zero_symbol": 0}
        }"#
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ProblemConfig::parse_str(minimal_json()).unwrap();
        assert_eq!(cfg.grid, vec![100, 200, 300, 400, 500]);
        assert_eq!(cfg.trials, 10_000);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.epsilon, 0.05);
        assert_eq!(cfg.regimes.len(), 5);
        assert!(cfg.mu.is_none());
        let inst = cfg.build().unwrap();
        assert_eq!(inst.p_uv.nu(), 2);
        assert_eq!(inst.channel.outputs(), 2);
    }

    #[test]
    fn round_trip_preserves_equality() {
        let mut cfg = ProblemConfig::parse_str(minimal_json()).unwrap();
        cfg.mu = Some(0.037);
        cfg.seed = 424242;
        cfg.grid = vec![50, 75, 200];
        cfg.regimes = vec![Regime::LocalOnly, Regime::ExpectedCostBoth];
        cfg.schedules = Schedules {
            uses: crate::schemes::Schedule::LogN,
            cost: crate::schemes::Schedule::Custom {
                table: vec![(50, 5.0), (75, 6.0), (200, 9.5)],
            },
        };
        let text = cfg.to_json().unwrap();
        let back = ProblemConfig::parse_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn validation_catches_bad_fields() {
        let base = ProblemConfig::parse_str(minimal_json()).unwrap();

        let mut bad = base.clone();
        bad.epsilon = 1.0;
        assert!(matches!(bad.build(), Err(Error::InvalidConfig { .. })));

        let mut bad = base.clone();
        bad.trials = 0;
        assert!(matches!(bad.build(), Err(Error::InvalidConfig { .. })));

        let mut bad = base.clone();
        bad.grid = vec![100, 100];
        assert!(matches!(bad.build(), Err(Error::InvalidConfig { .. })));

        let mut bad = base.clone();
        bad.mu = Some(-0.5);
        assert!(matches!(bad.build(), Err(Error::InvalidConfig { .. })));

        let mut bad = base.clone();
        bad.cost.costs = vec![0.0, 1.0, 1.0];
        assert!(matches!(bad.build(), Err(Error::ShapeMismatch { .. })));

        let mut bad = base.clone();
        bad.regimes.clear();
        assert!(matches!(bad.build(), Err(Error::InvalidConfig { .. })));
    }

    #[test]
    fn malformed_rows_are_cell_level_errors() {
        let mut bad = ProblemConfig::parse_str(minimal_json()).unwrap();
        bad.p_uv[0][0] = 0.5;
        assert!(matches!(bad.build(), Err(Error::NotNormalized { .. })));

        let mut neg = ProblemConfig::parse_str(minimal_json()).unwrap();
        neg.channel[1] = vec![-0.1, 1.1];
        assert!(matches!(neg.build(), Err(Error::NegativeEntry { .. })));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let with_extra = minimal_json().replace(
            "\"cost\"",
            "\"surprise\": 1, \"cost\"",
        );
        assert!(ProblemConfig::parse_str(&with_extra).is_err());
    }

    #[test]
    fn zero_support_alternative_is_rejected() {
        let mut bad = ProblemConfig::parse_str(minimal_json()).unwrap();
        bad.q_uv = vec![vec![0.5, 0.5], vec![0.0, 0.0]];
        assert!(matches!(
            bad.build(),
            Err(Error::SupportAssumptionViolation { .. })
        ));
    }

    #[test]
    fn linear_schedule_is_rejected_on_the_grid() {
        let mut bad = ProblemConfig::parse_str(minimal_json()).unwrap();
        bad.schedules.cost = crate::schemes::Schedule::Custom {
            table: bad.grid.iter().map(|&n| (n, n as f64)).collect(),
        };
        assert!(matches!(bad.build(), Err(Error::ScheduleViolation { .. })));
    }
}
