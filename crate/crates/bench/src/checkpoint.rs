//! JSON model checkpoints.
//!
//! Layout: a format tag, `hidden` and `input_dim`, then the tensors in the
//! fixed order `w` (4H×D), `r` (4H×H), `b` (4H×1), `dense_w` (2×H),
//! `dense_b` (2×1), each row-major with its shape, and finally the
//! configuration (including the seed) that produced the model. Floats are
//! written with round-trip precision so a reload is bit-exact.

use std::path::Path;

use backscatter_core::dl::{LstmModel, LstmParams};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::BenchError;

pub const FORMAT: &str = "backscatter-lstm/1";

const TENSOR_NAMES: [&str; 5] = ["w", "r", "b", "dense_w", "dense_b"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    pub name: String,
    pub shape: [usize; 2],
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub hidden: usize,
    pub input_dim: usize,
    pub tensors: Vec<Tensor>,
    pub config: ExperimentConfig,
}

fn shapes(h: usize, d: usize) -> [[usize; 2]; 5] {
    [[4 * h, d], [4 * h, h], [4 * h, 1], [2, h], [2, 1]]
}

impl Checkpoint {
    pub fn from_model(model: &LstmModel, config: &ExperimentConfig) -> Self {
        let shapes = shapes(model.hidden, model.input_dim);
        let tensors = model
            .params
            .tensors()
            .iter()
            .zip(TENSOR_NAMES)
            .zip(shapes)
            .map(|((data, name), shape)| Tensor {
                name: name.to_string(),
                shape,
                data: data.to_vec(),
            })
            .collect();
        Checkpoint {
            format: FORMAT.to_string(),
            hidden: model.hidden,
            input_dim: model.input_dim,
            tensors,
            config: config.clone(),
        }
    }

    pub fn to_model(&self) -> Result<LstmModel, BenchError> {
        if self.format != FORMAT {
            return Err(BenchError::Checkpoint(format!("unsupported format `{}`", self.format)));
        }
        if self.tensors.len() != TENSOR_NAMES.len() {
            return Err(BenchError::Checkpoint(format!(
                "expected {} tensors, found {}",
                TENSOR_NAMES.len(),
                self.tensors.len()
            )));
        }
        let expected = shapes(self.hidden, self.input_dim);
        for ((t, name), shape) in self.tensors.iter().zip(TENSOR_NAMES).zip(expected) {
            if t.name != name || t.shape != shape || t.data.len() != shape[0] * shape[1] {
                return Err(BenchError::Checkpoint(format!(
                    "tensor `{}` {:?} does not match `{name}` {:?}",
                    t.name, t.shape, shape
                )));
            }
        }
        let take = |i: usize| self.tensors[i].data.clone();
        let params = LstmParams {
            w: take(0),
            r: take(1),
            b: take(2),
            dense_w: take(3),
            dense_b: take(4),
        };
        Ok(LstmModel::from_params(self.hidden, self.input_dim, params)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), BenchError> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use backscatter_core::rng::substream;

    #[test]
    fn round_trip_is_bit_exact() {
        let model = LstmModel::for_features(5, &mut substream(1, 0)).unwrap();
        let cfg = ExperimentConfig::default();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        Checkpoint::from_model(&model, &cfg).save(&path).unwrap();
        let back = Checkpoint::load(&path).unwrap();
        assert_eq!(back.config, cfg);
        assert_eq!(back.to_model().unwrap(), model);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let model = LstmModel::for_features(3, &mut substream(2, 0)).unwrap();
        let mut ck = Checkpoint::from_model(&model, &ExperimentConfig::default());
        ck.hidden = 4;
        assert!(ck.to_model().is_err());
        let mut ck = Checkpoint::from_model(&model, &ExperimentConfig::default());
        ck.tensors[1].data.pop();
        assert!(ck.to_model().is_err());
        let mut ck = Checkpoint::from_model(&model, &ExperimentConfig::default());
        ck.tensors.swap(0, 1);
        assert!(ck.to_model().is_err());
    }
}
