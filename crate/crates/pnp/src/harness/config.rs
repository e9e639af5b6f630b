//! JSON run configuration: a scenario id plus numeric parameters, with
//! unknown keys rejected and scenario-appropriate defaults for everything
//! except the resolution, time step, and dielectric coefficient.

use super::scenarios::{self, ChannelParams, TripleParams};
use crate::pnp::{Initial, System};
use crate::transport::FluxOrder;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCENARIOS: &[&str] = &[
    "manufactured",
    "channel",
    "channel-uncharged",
    "triple",
    "triple-robin",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxOrderName {
    Zeroth,
    First,
    Second,
}

impl From<FluxOrderName> for FluxOrder {
    fn from(f: FluxOrderName) -> FluxOrder {
        match f {
            FluxOrderName::Zeroth => FluxOrder::Zeroth,
            FluxOrderName::First => FluxOrder::First,
            FluxOrderName::Second => FluxOrder::Second,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    pub n_cells: usize,
    pub tau: f64,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux_order: Option<FluxOrderName>,
    /// Channel geometry: funnel mouth half-width.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_f: Option<f64>,
    /// Channel geometry: neck half-width.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_c: Option<f64>,
    /// Channel geometry: neck length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_c: Option<f64>,
    /// Permanent charge amplitude in the channel neck.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    /// Permanent charge amplitude of the wide-domain scenarios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voltage: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_right: Option<f64>,
    /// Run to a fixed time (mutually exclusive with `steady_tol`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// Run until the potential stops moving in max-norm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    /// Use seeded uniform random initial data instead of the scenario's
    /// smooth profiles (wide-domain scenarios only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_init: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Minimal config for a scenario id with that scenario's canonical
    /// resolution, step, and dielectric coefficient.
    pub fn defaults_for(scenario: &str) -> Result<RunConfig> {
        let (n_cells, tau, epsilon) = match scenario {
            "manufactured" => (80, 1.0 / (80.0 * 80.0), 1.0),
            "channel" | "channel-uncharged" => (100, 5e-5, 5e-5),
            "triple" | "triple-robin" => (200, 1e-3, 0.1),
            other => {
                return Err(Error::Config(format!(
                    "unknown scenario `{other}`; valid ids: {}",
                    SCENARIOS.join(", ")
                )))
            }
        };
        Ok(RunConfig {
            scenario: scenario.to_string(),
            n_cells,
            tau,
            epsilon,
            flux_order: None,
            r_f: None,
            r_c: None,
            l_c: None,
            q0: None,
            charge: None,
            voltage: None,
            c_left: None,
            c_right: None,
            t_end: None,
            steady_tol: None,
            max_steps: None,
            random_init: None,
            seed: None,
        })
    }

    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serialization");
        s.push('\n');
        s
    }

    pub fn emit(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
    }

    fn validate(&self) -> Result<()> {
        if !SCENARIOS.contains(&self.scenario.as_str()) {
            return Err(Error::Config(format!(
                "unknown scenario `{}`; valid ids: {}",
                self.scenario,
                SCENARIOS.join(", ")
            )));
        }
        if self.t_end.is_some() && self.steady_tol.is_some() {
            return Err(Error::Config(
                "t_end and steady_tol are mutually exclusive".into(),
            ));
        }
        if self.random_init == Some(true) && !self.scenario.starts_with("triple") {
            return Err(Error::Config(
                "random_init is only available for the triple scenarios".into(),
            ));
        }
        Ok(())
    }

    pub fn flux(&self) -> FluxOrder {
        self.flux_order.map_or(FluxOrder::First, FluxOrder::from)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndCondition {
    FixedTime(f64),
    Steady { tol: f64, max_steps: u64 },
}

/// A config resolved into something runnable.
pub struct BuiltRun {
    pub system: System,
    pub initial: Vec<Initial>,
    pub end: EndCondition,
    /// Comment lines recorded in emitted CSV headers (e.g. the RNG seed).
    pub notes: Vec<String>,
}

pub fn build(cfg: &RunConfig) -> Result<BuiltRun> {
    cfg.validate()?;
    let default_steady = |tol: f64| EndCondition::Steady {
        tol: cfg.steady_tol.unwrap_or(tol),
        max_steps: cfg.max_steps.unwrap_or(1_000_000),
    };
    let end = |fallback: EndCondition| match (cfg.t_end, cfg.steady_tol) {
        (Some(t), _) => EndCondition::FixedTime(t),
        (None, Some(tol)) => EndCondition::Steady {
            tol,
            max_steps: cfg.max_steps.unwrap_or(1_000_000),
        },
        (None, None) => fallback,
    };
    match cfg.scenario.as_str() {
        "manufactured" => {
            let system = super::manufactured::build(cfg.n_cells, cfg.flux())?;
            let [p1, p2] = super::manufactured::initial_profiles();
            Ok(BuiltRun {
                system,
                initial: vec![Initial::Profile(p1), Initial::Profile(p2)],
                end: end(EndCondition::FixedTime(1.0)),
                notes: vec![],
            })
        }
        "channel" | "channel-uncharged" => {
            let uncharged = cfg.scenario == "channel-uncharged";
            let p = ChannelParams {
                n_cells: cfg.n_cells,
                tau: cfg.tau,
                epsilon: cfg.epsilon,
                r_f: cfg.r_f.unwrap_or(20.0),
                r_c: cfg.r_c.unwrap_or(0.2),
                l_c: cfg.l_c.unwrap_or(0.2),
                q0: if uncharged { 0.0 } else { cfg.q0.unwrap_or(0.2) },
                voltage: cfg.voltage.unwrap_or(0.5),
                c_left: cfg.c_left.unwrap_or(0.5),
                c_right: cfg.c_right.unwrap_or(0.4),
                flux_order: cfg.flux(),
            };
            if uncharged && cfg.q0.is_some_and(|q| q != 0.0) {
                return Err(Error::Config(
                    "channel-uncharged fixes q0 = 0; use `channel` to set it".into(),
                ));
            }
            let (system, initial) = scenarios::channel(&p)?;
            Ok(BuiltRun {
                system,
                initial,
                end: end(default_steady(1e-6)),
                notes: vec![],
            })
        }
        "triple" | "triple-robin" => {
            let p = TripleParams {
                n_cells: cfg.n_cells,
                tau: cfg.tau,
                epsilon: cfg.epsilon,
                charge: cfg.charge.unwrap_or(1.0),
                flux_order: cfg.flux(),
            };
            let system = if cfg.scenario == "triple" {
                scenarios::triple_dirichlet(&p)?
            } else {
                scenarios::triple_robin(&p)?
            };
            let mut notes = Vec::new();
            let initial = if cfg.random_init == Some(true) {
                let seed = cfg.seed.unwrap_or(1);
                notes.push(format!("rng chacha8, seed {seed}"));
                scenarios::triple_initial_random(cfg.n_cells, 3, seed)
            } else {
                scenarios::triple_initial_bumps()
            };
            let fallback = if cfg.scenario == "triple" {
                default_steady(1e-7)
            } else {
                EndCondition::FixedTime(15.0)
            };
            Ok(BuiltRun {
                system,
                initial,
                end: end(fallback),
                notes,
            })
        }
        other => Err(Error::Config(format!(
            "unknown scenario `{other}`; valid ids: {}",
            SCENARIOS.join(", ")
        ))),
    }
}
