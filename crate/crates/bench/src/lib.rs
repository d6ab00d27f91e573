//! Experiment driver: rate and BER sweeps, LSTM training and evaluation,
//! with TOML configuration, CSV results and JSON checkpoints.

pub mod checkpoint;
pub mod config;
pub mod experiment;
pub mod report;

pub use config::{ExperimentConfig, Sweep};
pub use experiment::{
    describe, run_ber_experiment, run_eval, run_rate_experiment, run_training, Detector, ExperimentKind,
    ExperimentSpec, TrainingRun,
};
pub use report::ResultRow;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown parameter `{name}`; valid names are: {valid}")]
    UnknownParameter { name: String, valid: String },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Core(#[from] backscatter_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}
