//! Flat key/value experiment configuration.
//!
//! Every key is optional; missing keys take the defaults below. SNRs and
//! gains are given in dB here and converted to linear once, in
//! [`ExperimentConfig::system`].
//!
//! ```toml
//! antennas = 10
//! spreading_factor = 50
//! frame_bits = 100
//! pilot_bits = 20
//! alpha_tr_db = 5.0
//! alpha_jr_db = 7.0
//! alpha_t_rel_db = -15.0
//! alpha_j_rel_db = -15.0
//! theta0 = 0.5
//! seed = 1
//! trials = 10000
//! realizations = 100
//! sweep = "alpha_jr_db=1,2,3,4,5"
//! ```

use std::path::Path;

use backscatter_core::channel::{db_to_linear, SystemConfig};
use backscatter_core::dl::{AdamConfig, TrainConfig};
use serde::{Deserialize, Serialize};

use crate::BenchError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub antennas: usize,
    pub spreading_factor: usize,
    pub frame_bits: usize,
    pub pilot_bits: usize,
    pub alpha_tr_db: f64,
    pub alpha_jr_db: f64,
    pub alpha_t_rel_db: f64,
    pub alpha_j_rel_db: f64,
    pub theta0: f64,

    pub seed: u64,
    /// Frames per BER point.
    pub trials: usize,
    /// Channel realizations per rate point.
    pub realizations: usize,
    /// Monte-Carlo samples per realization for the mutual information.
    pub mc_samples: usize,
    pub grid_step: f64,
    /// `name=v1,v2,...`
    pub sweep: Option<String>,

    pub hidden: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub train_frames: usize,
    /// Data symbols taken from each training frame.
    pub train_symbols_per_frame: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            antennas: 10,
            spreading_factor: 50,
            frame_bits: 100,
            pilot_bits: 20,
            alpha_tr_db: 5.0,
            alpha_jr_db: 7.0,
            alpha_t_rel_db: -15.0,
            alpha_j_rel_db: -15.0,
            theta0: 0.5,
            seed: 1,
            trials: 10_000,
            realizations: 100,
            mc_samples: 10_000,
            grid_step: 0.01,
            sweep: None,
            hidden: 64,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            epochs: 8,
            batch_size: 64,
            train_frames: 10_000,
            train_symbols_per_frame: 8,
        }
    }
}

/// Parameters that can be swept.
pub const SWEEPABLE: [&str; 9] = [
    "antennas",
    "spreading_factor",
    "frame_bits",
    "pilot_bits",
    "alpha_tr_db",
    "alpha_jr_db",
    "alpha_t_rel_db",
    "alpha_j_rel_db",
    "theta0",
];

fn as_count(name: &str, value: f64) -> Result<usize, BenchError> {
    if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(BenchError::Config(format!("{name} must be a non-negative integer, got {value}")))
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, BenchError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// The physical scenario in linear units.
    pub fn system(&self) -> SystemConfig {
        SystemConfig {
            antennas: self.antennas,
            spreading: self.spreading_factor,
            frame_bits: self.frame_bits,
            pilot_bits: self.pilot_bits,
            alpha_tr: db_to_linear(self.alpha_tr_db),
            alpha_jr: db_to_linear(self.alpha_jr_db),
            alpha_t_rel: db_to_linear(self.alpha_t_rel_db),
            alpha_j_rel: db_to_linear(self.alpha_j_rel_db),
            theta0: self.theta0,
            seed: self.seed,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            hidden: self.hidden,
            adam: AdamConfig {
                learning_rate: self.learning_rate,
                beta1: self.beta1,
                beta2: self.beta2,
                epsilon: self.epsilon,
            },
            epochs: self.epochs,
            batch_size: self.batch_size,
            seed: self.seed,
        }
    }

    /// Copy with one swept parameter replaced.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self, BenchError> {
        let mut c = self.clone();
        match name {
            "antennas" => c.antennas = as_count(name, value)?,
            "spreading_factor" => c.spreading_factor = as_count(name, value)?,
            "frame_bits" => c.frame_bits = as_count(name, value)?,
            "pilot_bits" => c.pilot_bits = as_count(name, value)?,
            "alpha_tr_db" => c.alpha_tr_db = value,
            "alpha_jr_db" => c.alpha_jr_db = value,
            "alpha_t_rel_db" => c.alpha_t_rel_db = value,
            "alpha_j_rel_db" => c.alpha_j_rel_db = value,
            "theta0" => c.theta0 = value,
            _ => return Err(unknown_param(name)),
        }
        Ok(c)
    }

    pub fn param(&self, name: &str) -> Result<f64, BenchError> {
        Ok(match name {
            "antennas" => self.antennas as f64,
            "spreading_factor" => self.spreading_factor as f64,
            "frame_bits" => self.frame_bits as f64,
            "pilot_bits" => self.pilot_bits as f64,
            "alpha_tr_db" => self.alpha_tr_db,
            "alpha_jr_db" => self.alpha_jr_db,
            "alpha_t_rel_db" => self.alpha_t_rel_db,
            "alpha_j_rel_db" => self.alpha_j_rel_db,
            "theta0" => self.theta0,
            _ => return Err(unknown_param(name)),
        })
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        self.system().validate()?;
        if !(self.grid_step > 0.0 && self.grid_step <= 0.5) {
            return Err(BenchError::Config("grid_step must lie in (0, 0.5]".into()));
        }
        if self.batch_size == 0 || self.hidden == 0 {
            return Err(BenchError::Config("hidden and batch_size must be positive".into()));
        }
        if let Some(s) = &self.sweep {
            Sweep::parse(s)?;
        }
        Ok(())
    }
}

pub(crate) fn unknown_param(name: &str) -> BenchError {
    BenchError::UnknownParameter {
        name: name.to_string(),
        valid: SWEEPABLE.join(", "),
    }
}

/// One swept parameter and its values, in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub name: String,
    pub values: Vec<f64>,
}

impl Sweep {
    /// Parses `name=v1,v2,...`.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let (name, list) = text
            .split_once('=')
            .ok_or_else(|| BenchError::Config(format!("sweep `{text}` is not of the form name=v1,v2")))?;
        let name = name.trim();
        if !SWEEPABLE.contains(&name) {
            return Err(unknown_param(name));
        }
        let values = list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| BenchError::Config(format!("bad sweep value `{}`", v.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err(BenchError::Config("sweep needs at least one value".into()));
        }
        Ok(Sweep {
            name: name.to_string(),
            values,
        })
    }

    /// Degenerate sweep holding the current value of `name`.
    pub fn single(cfg: &ExperimentConfig, name: &str) -> Result<Self, BenchError> {
        Ok(Sweep {
            name: name.to_string(),
            values: vec![cfg.param(name)?],
        })
    }
}
