//! Minibatch training of the LSTM detector.

use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::adam::{AdamConfig, AdamState};
use super::features::{FeatureSequence, FEATURE_DIM};
use super::lstm::{backward_batch, cross_entropy, decide, forward_batch, infer_logits, LstmModel};
use crate::rng::substream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub hidden: usize,
    pub adam: AdamConfig,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden: 64,
            adam: AdamConfig::default(),
            epochs: 10,
            batch_size: 64,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    /// Mean minibatch cross-entropy seen during the epoch.
    pub loss: f64,
    /// Fraction of training examples classified correctly during the epoch.
    pub accuracy: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: LstmModel,
    pub log: Vec<EpochLog>,
}

/// Labelled training example: features and the encoded tag state.
pub type Example = (FeatureSequence, u8);

fn validate(data: &[Example], cfg: &TrainConfig) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Training("empty dataset"));
    }
    if cfg.batch_size == 0 || cfg.hidden == 0 {
        return Err(Error::Training("batch size and hidden size must be positive"));
    }
    let mut seen = [false; 2];
    for (k, (_, y)) in data.iter().enumerate() {
        if *y > 1 {
            return Err(Error::NonBinary { index: k, value: *y });
        }
        seen[usize::from(*y)] = true;
    }
    if !(seen[0] && seen[1]) {
        return Err(Error::Training("dataset contains a single class"));
    }
    Ok(())
}

/// Trains from a Glorot initialisation; the stream of `cfg.seed` drives both
/// the initial weights and the epoch shuffles.
pub fn train(data: &[Example], cfg: &TrainConfig) -> Result<TrainOutcome> {
    train_with(data, cfg, |_| {})
}

/// [`train`] with a callback after every epoch.
pub fn train_with<F: FnMut(&EpochLog)>(data: &[Example], cfg: &TrainConfig, mut on_epoch: F) -> Result<TrainOutcome> {
    validate(data, cfg)?;
    let mut init_rng = substream(cfg.seed, 0);
    let mut shuffle_rng = substream(cfg.seed, 1);
    let mut model = LstmModel::new(cfg.hidden, FEATURE_DIM, &mut init_rng)?;
    let mut adam = AdamState::new(cfg.hidden, FEATURE_DIM);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut log = Vec::with_capacity(cfg.epochs);
    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut shuffle_rng);
        let mut loss_sum = 0.0;
        let mut batches = 0usize;
        let mut correct = 0usize;
        for chunk in order.chunks(cfg.batch_size) {
            let seqs: Vec<&FeatureSequence> = chunk.iter().map(|&i| &data[i].0).collect();
            let labels: Vec<u8> = chunk.iter().map(|&i| data[i].1).collect();
            let cache = forward_batch(&model, &seqs)?;
            loss_sum += cross_entropy(&cache, &labels)?;
            batches += 1;
            correct += labels
                .iter()
                .enumerate()
                .filter(|&(k, &y)| decide(cache.logits_of(k)) == y)
                .count();
            let grads = backward_batch(&model, &cache, &labels)?;
            adam.update(&mut model.params, &grads, &cfg.adam);
            if !model.params.is_finite() {
                return Err(Error::NumericFault("parameters diverged"));
            }
        }
        let entry = EpochLog {
            epoch,
            loss: loss_sum / batches as f64,
            accuracy: correct as f64 / data.len() as f64,
        };
        on_epoch(&entry);
        log.push(entry);
    }
    Ok(TrainOutcome { model, log })
}

/// Mean cross-entropy and accuracy of `model` over `data`, in chunks of `batch`.
pub fn evaluate(model: &LstmModel, data: &[Example], batch: usize) -> Result<(f64, f64)> {
    if data.is_empty() || batch == 0 {
        return Err(Error::Training("nothing to evaluate"));
    }
    let mut loss = 0.0;
    let mut correct = 0usize;
    for chunk in data.chunks(batch) {
        let seqs: Vec<&FeatureSequence> = chunk.iter().map(|(s, _)| s).collect();
        let labels: Vec<u8> = chunk.iter().map(|(_, y)| *y).collect();
        let cache = forward_batch(model, &seqs)?;
        loss += cross_entropy(&cache, &labels)? * chunk.len() as f64;
        correct += (0..chunk.len())
            .filter(|&k| decide(cache.logits_of(k)) == labels[k])
            .count();
    }
    Ok((loss / data.len() as f64, correct as f64 / data.len() as f64))
}

/// Class decisions for a batch of sequences.
pub fn classify(model: &LstmModel, seqs: &[&FeatureSequence]) -> Result<Vec<u8>> {
    let logits = infer_logits(model, seqs)?;
    let b = seqs.len();
    Ok((0..b).map(|k| decide([logits[k], logits[b + k]])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::Rng;

    fn separable(count: usize, len: usize, seed: u64) -> Vec<Example> {
        let mut rng = substream(seed, 0);
        (0..count)
            .map(|k| {
                let y = (k % 2) as u8;
                let level = if y == 0 { -0.6 } else { 0.6 };
                let jitter: f64 = rng.random_range(-0.1..0.1);
                let v = level + jitter;
                (
                    FeatureSequence {
                        steps: vec![[v, -v, v.abs()]; len],
                    },
                    y,
                )
            })
            .collect()
    }

    #[test]
    fn separable_data_is_learned() {
        let data = separable(400, 6, 1);
        let cfg = TrainConfig {
            hidden: 16,
            epochs: 5,
            batch_size: 16,
            adam: AdamConfig {
                learning_rate: 0.01,
                ..AdamConfig::default()
            },
            ..TrainConfig::default()
        };
        let out = train(&data, &cfg).unwrap();
        let (_, acc) = evaluate(&out.model, &data, 64).unwrap();
        assert!(acc >= 0.99, "{acc} {:?}", out.log);
        assert_eq!(out.log.len(), 5);
    }

    #[test]
    fn first_epoch_lowers_loss() {
        let data = separable(256, 5, 2);
        let cfg = TrainConfig {
            hidden: 8,
            epochs: 1,
            batch_size: 32,
            ..TrainConfig::default()
        };
        let init = LstmModel::new(8, FEATURE_DIM, &mut substream(cfg.seed, 0)).unwrap();
        let (initial_loss, _) = evaluate(&init, &data, 64).unwrap();
        let out = train(&data, &cfg).unwrap();
        let (after, _) = evaluate(&out.model, &data, 64).unwrap();
        assert!(after < initial_loss, "{after} vs {initial_loss}");
    }

    #[test]
    fn training_is_deterministic() {
        let data = separable(64, 4, 3);
        let cfg = TrainConfig {
            hidden: 6,
            epochs: 2,
            batch_size: 10,
            ..TrainConfig::default()
        };
        let a = train(&data, &cfg).unwrap();
        let b = train(&data, &cfg).unwrap();
        assert_eq!(a.model, b.model);
        assert_eq!(a.log, b.log);
        let c = train(&data, &TrainConfig { seed: 2, ..cfg }).unwrap();
        assert_ne!(a.model, c.model);
    }

    #[test]
    fn rejects_degenerate_datasets() {
        let cfg = TrainConfig::default();
        let one_class: Vec<Example> = separable(10, 3, 4).into_iter().filter(|(_, y)| *y == 1).collect();
        assert_eq!(train(&one_class, &cfg).unwrap_err(), Error::Training("dataset contains a single class"));
        assert!(train(&[], &cfg).is_err());
        let mut bad = separable(4, 3, 5);
        bad[0].1 = 7;
        assert!(train(&bad, &cfg).is_err());
    }

    #[test]
    fn classify_matches_evaluate() {
        let data = separable(40, 4, 6);
        let cfg = TrainConfig {
            hidden: 4,
            epochs: 3,
            batch_size: 8,
            ..TrainConfig::default()
        };
        let out = train(&data, &cfg).unwrap();
        let seqs: Vec<&FeatureSequence> = data.iter().map(|(s, _)| s).collect();
        let pred = classify(&out.model, &seqs).unwrap();
        let acc = pred.iter().zip(&data).filter(|(p, (_, y))| *p == y).count() as f64 / 40.0;
        let (_, acc2) = evaluate(&out.model, &data, 7).unwrap();
        assert!((acc - acc2).abs() < 1e-12);
    }
}
