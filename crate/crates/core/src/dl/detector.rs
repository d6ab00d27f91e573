//! Frame-level decoding with a per-symbol detector.

use alloc::vec::Vec;

use super::features::{pilot_covariances, symbol_features, FeatureSequence, PilotCovariances};
use super::lstm::LstmModel;
use super::train::classify;
use crate::channel::ReceivedBlock;
use crate::coding::{diff_decode, BackscatterFrame};
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Sequences pushed through the network at once during inference.
pub const INFERENCE_BATCH: usize = 128;

/// Decides tag states from received symbols given the frame's pilot estimates.
pub trait SymbolDetector {
    fn detect_symbols(&self, symbols: &[CMatrix], pilots: &PilotCovariances) -> Result<Vec<u8>>;
}

impl SymbolDetector for LstmModel {
    fn detect_symbols(&self, symbols: &[CMatrix], pilots: &PilotCovariances) -> Result<Vec<u8>> {
        let feats = symbols
            .iter()
            .map(|s| symbol_features(s, pilots))
            .collect::<Result<Vec<FeatureSequence>>>()?;
        let mut states = Vec::with_capacity(feats.len());
        for chunk in feats.chunks(INFERENCE_BATCH) {
            let refs: Vec<&FeatureSequence> = chunk.iter().collect();
            states.extend(classify(self, &refs)?);
        }
        Ok(states)
    }
}

/// Decoded data bits of one frame. Only the pilot part of `frame` is used:
/// it supplies the pilot classes and the decoding reference.
pub fn predict_frame<D: SymbolDetector + ?Sized>(
    detector: &D,
    block: &ReceivedBlock,
    frame: &BackscatterFrame,
) -> Result<Vec<u8>> {
    let pilots = pilot_covariances(block, frame)?;
    let data = &block.symbols[frame.pilot_count..];
    let states = detector.detect_symbols(data, &pilots)?;
    if states.len() != data.len() {
        return Err(Error::Dimension("detector returned the wrong number of states"));
    }
    diff_decode(&states, frame.data_reference())
}

/// Labelled features for every data symbol of a frame, whitened with that
/// frame's pilots; the label is the encoded tag state.
pub fn frame_examples(block: &ReceivedBlock, frame: &BackscatterFrame) -> Result<Vec<(FeatureSequence, u8)>> {
    let pilots = pilot_covariances(block, frame)?;
    block.symbols[frame.pilot_count..]
        .iter()
        .zip(&frame.encoded[frame.pilot_count..])
        .map(|(s, &e)| Ok((symbol_features(s, &pilots)?, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw_channel, synthesize_frame, SystemConfig};
    use crate::coding::make_frame_for;
    use crate::ml::{covariance_matrices, detect_states, detect_symbol, CovariancePair};
    use crate::rng::substream;
    use rand::Rng;

    // Test double: ignores the pilots and applies the true-covariance rule.
    struct MlMimic(CovariancePair);

    impl SymbolDetector for MlMimic {
        fn detect_symbols(&self, symbols: &[CMatrix], _: &PilotCovariances) -> Result<Vec<u8>> {
            symbols.iter().map(|s| detect_symbol(s, &self.0)).collect()
        }
    }

    fn small_cfg() -> SystemConfig {
        SystemConfig {
            antennas: 3,
            spreading: 6,
            frame_bits: 30,
            pilot_bits: 10,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn ml_mimic_reproduces_ml_bits() {
        let cfg = small_cfg();
        let mut rng = substream(31, 0);
        for _ in 0..20 {
            let ch = draw_channel(&cfg, &mut rng);
            let data: Vec<u8> = (0..cfg.data_bits()).map(|_| rng.random_range(0..2)).collect();
            let frame = make_frame_for(&cfg, &data).unwrap();
            let block = synthesize_frame(&cfg, &ch, &frame.encoded, &mut rng).unwrap();
            let pair = covariance_matrices(&ch, &cfg).unwrap();
            let bits = predict_frame(&MlMimic(pair.clone()), &block, &frame).unwrap();
            let states = detect_states(&block, &pair).unwrap();
            let expect = diff_decode(&states[cfg.pilot_bits..], frame.data_reference()).unwrap();
            assert_eq!(bits, expect);
        }
    }

    #[test]
    fn lstm_detector_shapes_and_examples() {
        let cfg = small_cfg();
        let mut rng = substream(32, 0);
        let ch = draw_channel(&cfg, &mut rng);
        let data: Vec<u8> = (0..cfg.data_bits()).map(|_| rng.random_range(0..2)).collect();
        let frame = make_frame_for(&cfg, &data).unwrap();
        let block = synthesize_frame(&cfg, &ch, &frame.encoded, &mut rng).unwrap();
        let model = LstmModel::for_features(5, &mut rng).unwrap();
        let bits = predict_frame(&model, &block, &frame).unwrap();
        assert_eq!(bits.len(), cfg.data_bits());
        let ex = frame_examples(&block, &frame).unwrap();
        assert_eq!(ex.len(), cfg.data_bits());
        assert!(ex.iter().all(|(f, _)| f.len() == 2 * 9));
        let labels: Vec<u8> = ex.iter().map(|(_, y)| *y).collect();
        assert_eq!(labels, &frame.encoded[cfg.pilot_bits..]);
    }
}
