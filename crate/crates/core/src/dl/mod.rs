//! Learned detector: pilot-whitened covariance features fed to an LSTM.

pub mod adam;
pub mod detector;
pub mod features;
pub mod lstm;
pub mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use detector::{frame_examples, predict_frame, SymbolDetector};
pub use features::{featurize, pilot_covariances, sample_covariance, symbol_features, whiten, FeatureSequence, PilotCovariances};
pub use lstm::{lstm_backward, lstm_forward, LstmModel, LstmParams};
pub use train::{train, train_with, EpochLog, TrainConfig, TrainOutcome};
