//! Experiment kinds and their runners.
//!
//! Randomness is organised in tagged streams derived from the master seed.
//! Frame `k` of a BER or evaluation run uses stream `k` of the BER tag at
//! every sweep point; realization `r` of a rate run uses stream `r` of the
//! rate tag. Sweep points therefore share their random numbers, and results
//! do not depend on how rayon schedules the work.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use backscatter_core::capacity::{max_over_grid, prior_grid, LikelihoodDraws};
use backscatter_core::channel::{draw_channel, synthesize_frame, ReceivedBlock, SystemConfig};
use backscatter_core::coding::{diff_decode, diff_encode, make_frame_for, pilot_pattern, BackscatterFrame, REFERENCE_SYMBOL};
use backscatter_core::dl::train::Example;
use backscatter_core::dl::{frame_examples, predict_frame, train_with, EpochLog, LstmModel};
use backscatter_core::ml::{covariance_matrices, detect_symbol};
use backscatter_core::rng::{derive_seed, substream, SimRng};
use backscatter_core::stats::{mean_and_stderr, pairwise_sum};
use rand::Rng;
use rayon::prelude::*;

use crate::checkpoint::Checkpoint;
use crate::config::{ExperimentConfig, Sweep};
use crate::report::{write_csv, ResultRow};
use crate::BenchError;

const TAG_RATE: u64 = 1;
const TAG_BER: u64 = 2;
const TAG_TRAIN: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    RateVsTheta0,
    RateVsSnr,
    BerVsSnr,
    BerVsBackscatterSnr,
    BerVsN,
    TrainDl,
    EvalDl,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::RateVsTheta0,
        ExperimentKind::RateVsSnr,
        ExperimentKind::BerVsSnr,
        ExperimentKind::BerVsBackscatterSnr,
        ExperimentKind::BerVsN,
        ExperimentKind::TrainDl,
        ExperimentKind::EvalDl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RateVsTheta0 => "rate-vs-theta0",
            ExperimentKind::RateVsSnr => "rate-vs-snr",
            ExperimentKind::BerVsSnr => "ber-vs-snr",
            ExperimentKind::BerVsBackscatterSnr => "ber-vs-backscatter-snr",
            ExperimentKind::BerVsN => "ber-vs-N",
            ExperimentKind::TrainDl => "train-dl",
            ExperimentKind::EvalDl => "eval-dl",
        }
    }

    /// Parameter swept when none is given.
    pub fn default_sweep(self) -> &'static str {
        match self {
            ExperimentKind::RateVsTheta0 => "theta0",
            ExperimentKind::RateVsSnr | ExperimentKind::BerVsSnr => "alpha_jr_db",
            ExperimentKind::BerVsBackscatterSnr => "alpha_t_rel_db",
            ExperimentKind::BerVsN => "spreading_factor",
            ExperimentKind::TrainDl | ExperimentKind::EvalDl => "alpha_jr_db",
        }
    }

    pub fn is_rate(self) -> bool {
        matches!(self, ExperimentKind::RateVsTheta0 | ExperimentKind::RateVsSnr)
    }

    pub fn is_ber(self) -> bool {
        matches!(
            self,
            ExperimentKind::BerVsSnr | ExperimentKind::BerVsBackscatterSnr | ExperimentKind::BerVsN
        )
    }

    /// Rate kind implied by the swept parameter.
    pub fn rate_for(sweep: Option<&str>) -> Self {
        match sweep {
            Some("theta0") => ExperimentKind::RateVsTheta0,
            _ => ExperimentKind::RateVsSnr,
        }
    }

    /// BER kind implied by the swept parameter.
    pub fn ber_for(sweep: Option<&str>) -> Self {
        match sweep {
            Some("spreading_factor") => ExperimentKind::BerVsN,
            Some("alpha_t_rel_db") | Some("alpha_j_rel_db") => ExperimentKind::BerVsBackscatterSnr,
            _ => ExperimentKind::BerVsSnr,
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown experiment kind `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub sweep: Sweep,
    pub config: ExperimentConfig,
    pub out: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Resolves the sweep (from `config.sweep`, else the kind's default
    /// parameter at its configured value) and validates the result.
    pub fn new(kind: ExperimentKind, config: ExperimentConfig) -> Result<Self, BenchError> {
        let sweep = match &config.sweep {
            Some(text) => Sweep::parse(text)?,
            None if kind == ExperimentKind::RateVsTheta0 => Sweep {
                name: "theta0".into(),
                values: prior_grid(config.grid_step)?,
            },
            None => Sweep::single(&config, kind.default_sweep())?,
        };
        let spec = ExperimentSpec {
            kind,
            sweep,
            config,
            out: None,
            checkpoint: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_out(mut self, path: impl Into<PathBuf>) -> Self {
        self.out = Some(path.into());
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        self.config.validate()?;
        for p in self.points()? {
            p.1.validate()?;
        }
        let name = self.sweep.name.as_str();
        match self.kind {
            ExperimentKind::RateVsTheta0 if name != "theta0" => {
                return Err(BenchError::Config("rate-vs-theta0 must sweep theta0".into()));
            }
            ExperimentKind::RateVsSnr if name == "theta0" => {
                return Err(BenchError::Config("rate-vs-snr maximises over theta0 and cannot sweep it".into()));
            }
            k if k.is_rate() && name == "spreading_factor" => {
                return Err(BenchError::Config(
                    "rates are computed for single-sample symbols; spreading_factor cannot be swept".into(),
                ));
            }
            _ => {}
        }
        if self.kind.is_rate() {
            if self.config.realizations == 0 || self.config.mc_samples == 0 {
                return Err(BenchError::Config("realizations and mc_samples must be at least 1".into()));
            }
            if self.kind == ExperimentKind::RateVsTheta0
                && self.sweep.values.iter().any(|t| !(*t > 0.0 && *t < 1.0))
            {
                return Err(BenchError::Config("theta0 values must lie strictly inside (0, 1)".into()));
            }
        } else if self.kind == ExperimentKind::TrainDl {
            if self.config.train_frames == 0 || self.config.train_symbols_per_frame == 0 {
                return Err(BenchError::Config("train_frames and train_symbols_per_frame must be at least 1".into()));
            }
        } else if self.config.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// `(swept value, config at that value)` for every sweep point.
    pub fn points(&self) -> Result<Vec<(f64, ExperimentConfig)>, BenchError> {
        self.sweep
            .values
            .iter()
            .map(|&v| Ok((v, self.config.with_param(&self.sweep.name, v)?)))
            .collect()
    }

    fn row(&self, value: f64, metric: &str, (v, se): (f64, f64), trials: usize, secs: f64) -> ResultRow {
        ResultRow {
            swept_name: self.sweep.name.clone(),
            swept_value: value,
            metric: metric.to_string(),
            value: v,
            stderr: se,
            trials,
            seed: self.config.seed,
            wall_time_s: secs,
        }
    }

    fn finish(&self, rows: Vec<ResultRow>) -> Result<Vec<ResultRow>, BenchError> {
        if let Some(path) = &self.out {
            write_csv(path, &rows)?;
        }
        Ok(rows)
    }
}

/// Random frame with i.i.d. data tag states, `P(e = 0) = θ₀`, and its
/// received samples under a fresh channel.
pub fn simulate_frame(sys: &SystemConfig, rng: &mut SimRng) -> Result<(BackscatterFrame, ReceivedBlock), BenchError> {
    let channel = draw_channel(sys, rng);
    let pilots = diff_encode(&pilot_pattern(sys.pilot_bits)?, REFERENCE_SYMBOL)?;
    let reference = pilots.last().copied().unwrap_or(REFERENCE_SYMBOL);
    let states: Vec<u8> = (0..sys.data_bits())
        .map(|_| u8::from(rng.random::<f64>() >= sys.theta0))
        .collect();
    let data = diff_decode(&states, reference)?;
    let frame = make_frame_for(sys, &data)?;
    let block = synthesize_frame(sys, &channel, &frame.encoded, rng)?;
    Ok((frame, block))
}

pub enum Detector {
    /// Likelihood rule with the true covariances.
    Ml,
    /// Trained LSTM on pilot-whitened features.
    Dl(LstmModel),
}

impl Detector {
    pub fn name(&self) -> &'static str {
        match self {
            Detector::Ml => "ml",
            Detector::Dl(_) => "dl",
        }
    }

    /// Decoded data bits; both detectors decode from the last pilot state.
    pub fn decode(&self, frame: &BackscatterFrame, block: &ReceivedBlock) -> Result<Vec<u8>, BenchError> {
        match self {
            Detector::Ml => {
                let pair = covariance_matrices(&block.channel, &block.config)?;
                let states = block.symbols[frame.pilot_count..]
                    .iter()
                    .map(|s| detect_symbol(s, &pair))
                    .collect::<Result<Vec<u8>, _>>()?;
                Ok(diff_decode(&states, frame.data_reference())?)
            }
            Detector::Dl(model) => Ok(predict_frame(model, block, frame)?),
        }
    }
}

fn bit_errors(decoded: &[u8], truth: &[u8]) -> usize {
    decoded.iter().zip(truth).filter(|(a, b)| a != b).count()
}

// Per-frame error fractions for each detector, frames in stream order.
fn frame_error_rates(sys: &SystemConfig, seed: u64, frames: usize, detectors: &[&Detector]) -> Result<Vec<Vec<f64>>, BenchError> {
    let base = derive_seed(seed, TAG_BER);
    let data_bits = sys.data_bits() as f64;
    let per_frame = (0..frames as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(base, k);
            let (frame, block) = simulate_frame(sys, &mut rng)?;
            detectors
                .iter()
                .map(|d| Ok(bit_errors(&d.decode(&frame, &block)?, frame.data_bits()) as f64 / data_bits))
                .collect::<Result<Vec<f64>, BenchError>>()
        })
        .collect::<Result<Vec<_>, BenchError>>()?;
    Ok((0..detectors.len())
        .map(|d| per_frame.iter().map(|f| f[d]).collect())
        .collect())
}

/// BER per sweep point, plus data bits delivered per RF-source symbol.
pub fn run_ber_experiment(spec: &ExperimentSpec, detector: &Detector) -> Result<Vec<ResultRow>, BenchError> {
    if !spec.kind.is_ber() {
        return Err(BenchError::Config(format!("{} is not a BER experiment", spec.kind.name())));
    }
    let trials = spec.config.trials;
    let mut rows = Vec::new();
    for (value, cfg) in spec.points()? {
        let start = Instant::now();
        let sys = cfg.system();
        let rates = frame_error_rates(&sys, cfg.seed, trials, &[detector])?.remove(0);
        let (_, se) = mean_and_stderr(&rates);
        let ber = pairwise_sum(&rates) / trials as f64;
        let secs = start.elapsed().as_secs_f64();
        let scale = sys.data_bits() as f64 / (sys.frame_bits as f64 * sys.spreading as f64);
        rows.push(spec.row(value, "ber", (ber, se), trials, secs));
        rows.push(spec.row(value, "bits_per_rf_symbol", ((1.0 - ber) * scale, se * scale), trials, secs));
    }
    spec.finish(rows)
}

/// ML and DL on the same held-out frames.
pub fn run_eval(spec: &ExperimentSpec, model: &LstmModel) -> Result<Vec<ResultRow>, BenchError> {
    let trials = spec.config.trials;
    let ml = Detector::Ml;
    let dl = Detector::Dl(model.clone());
    let mut rows = Vec::new();
    for (value, cfg) in spec.points()? {
        let start = Instant::now();
        let rates = frame_error_rates(&cfg.system(), cfg.seed, trials, &[&ml, &dl])?;
        let secs = start.elapsed().as_secs_f64();
        for (det, r) in [&ml, &dl].iter().zip(&rates) {
            let (_, se) = mean_and_stderr(r);
            let ber = pairwise_sum(r) / trials as f64;
            rows.push(spec.row(value, &format!("ber_{}", det.name()), (ber, se), trials, secs));
        }
    }
    spec.finish(rows)
}

/// Rate experiments on single-sample symbols. `rate-vs-theta0` reports the
/// realization-averaged mutual information at each prior; `rate-vs-snr`
/// reports the averaged maximum over the prior grid and the maximising prior.
pub fn run_rate_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, BenchError> {
    let cfg = &spec.config;
    let base = derive_seed(cfg.seed, TAG_RATE);
    let realizations = cfg.realizations;
    match spec.kind {
        ExperimentKind::RateVsTheta0 => {
            let start = Instant::now();
            let sys = cfg.system();
            let per_real = (0..realizations as u64)
                .into_par_iter()
                .map(|r| {
                    let mut rng = substream(base, r);
                    let ch = draw_channel(&sys, &mut rng);
                    let pair = covariance_matrices(&ch, &sys)?;
                    let draws = LikelihoodDraws::sample(&pair, cfg.mc_samples, &mut rng)?;
                    spec.sweep
                        .values
                        .iter()
                        .map(|&t| Ok(draws.mutual_information(t)?.estimate))
                        .collect::<Result<Vec<f64>, BenchError>>()
                })
                .collect::<Result<Vec<_>, BenchError>>()?;
            let secs = start.elapsed().as_secs_f64();
            let rows = spec
                .sweep
                .values
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    let vals: Vec<f64> = per_real.iter().map(|v| v[i]).collect();
                    spec.row(t, "mutual_information", mean_and_stderr(&vals), realizations, secs)
                })
                .collect();
            spec.finish(rows)
        }
        ExperimentKind::RateVsSnr => {
            let grid = prior_grid(cfg.grid_step)?;
            let mut rows = Vec::new();
            for (value, point) in spec.points()? {
                let start = Instant::now();
                let sys = point.system();
                let est = (0..realizations as u64)
                    .into_par_iter()
                    .map(|r| {
                        let mut rng = substream(base, r);
                        let ch = draw_channel(&sys, &mut rng);
                        let pair = covariance_matrices(&ch, &sys)?;
                        let draws = LikelihoodDraws::sample(&pair, point.mc_samples, &mut rng)?;
                        Ok(max_over_grid(&draws, &grid)?)
                    })
                    .collect::<Result<Vec<_>, BenchError>>()?;
                let secs = start.elapsed().as_secs_f64();
                let rates: Vec<f64> = est.iter().map(|e| e.rate_bits).collect();
                let stars: Vec<f64> = est.iter().map(|e| e.theta0_star).collect();
                rows.push(spec.row(value, "rate_bits", mean_and_stderr(&rates), realizations, secs));
                rows.push(spec.row(value, "theta0_star", mean_and_stderr(&stars), realizations, secs));
            }
            spec.finish(rows)
        }
        k => Err(BenchError::Config(format!("{} is not a rate experiment", k.name()))),
    }
}

/// Labelled examples from `train_frames` fresh frames, taking
/// `train_symbols_per_frame` evenly spaced data symbols from each.
pub fn training_dataset(cfg: &ExperimentConfig) -> Result<Vec<Example>, BenchError> {
    let sys = cfg.system();
    let base = derive_seed(cfg.seed, TAG_TRAIN);
    let take = cfg.train_symbols_per_frame.min(sys.data_bits()).max(1);
    let stride = sys.data_bits() / take;
    let chunks = (0..cfg.train_frames as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(base, k);
            let (frame, block) = simulate_frame(&sys, &mut rng)?;
            let all = frame_examples(&block, &frame)?;
            Ok(all.into_iter().step_by(stride).take(take).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, BenchError>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

pub struct TrainingRun {
    pub model: LstmModel,
    pub log: Vec<EpochLog>,
    /// Examples per encoded tag state.
    pub class_counts: [usize; 2],
}

/// Generates the dataset, trains, and writes the checkpoint (if set) and the
/// epoch log CSV (to `out`, else next to the checkpoint).
pub fn run_training(spec: &ExperimentSpec) -> Result<TrainingRun, BenchError> {
    run_training_with(spec, |_| {})
}

pub fn run_training_with<F: FnMut(&EpochLog)>(spec: &ExperimentSpec, on_epoch: F) -> Result<TrainingRun, BenchError> {
    if spec.kind != ExperimentKind::TrainDl {
        return Err(BenchError::Config(format!("{} is not a training run", spec.kind.name())));
    }
    let data = training_dataset(&spec.config)?;
    let mut class_counts = [0usize; 2];
    for (_, y) in &data {
        class_counts[usize::from(*y)] += 1;
    }
    let outcome = train_with(&data, &spec.config.train_config(), on_epoch)?;
    if let Some(path) = &spec.checkpoint {
        Checkpoint::from_model(&outcome.model, &spec.config).save(path)?;
    }
    let log_path = spec
        .out
        .clone()
        .or_else(|| spec.checkpoint.as_ref().map(|p| p.with_extension("log.csv")));
    if let Some(path) = log_path {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["epoch", "loss", "accuracy"])?;
        for e in &outcome.log {
            w.write_record([e.epoch.to_string(), e.loss.to_string(), e.accuracy.to_string()])?;
        }
        w.flush()?;
    }
    Ok(TrainingRun {
        model: outcome.model,
        log: outcome.log,
        class_counts,
    })
}

/// Human-readable plan: resolved configuration, seed schedule and workload.
pub fn describe(spec: &ExperimentSpec) -> String {
    let c = &spec.config;
    let sys = c.system();
    let mut s = String::new();
    let _ = writeln!(s, "experiment: {}", spec.kind.name());
    let _ = writeln!(s, "antennas M = {}", c.antennas);
    let _ = writeln!(s, "spreading factor N = {}", c.spreading_factor);
    let _ = writeln!(s, "frame bits I = {}", c.frame_bits);
    let _ = writeln!(s, "pilot bits P = {}", c.pilot_bits);
    for (name, db, lin) in [
        ("alpha_tr", c.alpha_tr_db, sys.alpha_tr),
        ("alpha_jr", c.alpha_jr_db, sys.alpha_jr),
        ("alpha_t_rel", c.alpha_t_rel_db, sys.alpha_t_rel),
        ("alpha_j_rel", c.alpha_j_rel_db, sys.alpha_j_rel),
    ] {
        let _ = writeln!(s, "{name} = {db} dB -> {lin:.4} linear");
    }
    let _ = writeln!(s, "alpha_tb = {:.6} linear, alpha_jb = {:.6} linear", sys.alpha_tb(), sys.alpha_jb());
    let _ = writeln!(s, "theta0 = {}", c.theta0);
    let values: Vec<String> = spec.sweep.values.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(s, "sweep: {} = [{}]", spec.sweep.name, values.join(", "));
    let _ = writeln!(s, "master seed = {}", c.seed);
    let points = spec.sweep.values.len();
    match spec.kind {
        k if k.is_rate() => {
            let _ = writeln!(
                s,
                "streams: realization r -> stream r of seed {:#018x}",
                derive_seed(c.seed, TAG_RATE)
            );
            let grid = prior_grid(c.grid_step).map(|g| g.len()).unwrap_or(0);
            let _ = writeln!(
                s,
                "workload: {points} point(s) x {} realizations x {} samples, prior grid of {grid}",
                c.realizations, c.mc_samples
            );
        }
        ExperimentKind::TrainDl => {
            let _ = writeln!(s, "streams: frame k -> stream k of seed {:#018x}", derive_seed(c.seed, TAG_TRAIN));
            let _ = writeln!(
                s,
                "workload: {} frames x {} symbols, H = {}, {} epochs, batch {}, lr {}",
                c.train_frames, c.train_symbols_per_frame, c.hidden, c.epochs, c.batch_size, c.learning_rate
            );
        }
        _ => {
            let _ = writeln!(s, "streams: frame k -> stream k of seed {:#018x}", derive_seed(c.seed, TAG_BER));
            let _ = writeln!(
                s,
                "workload: {points} point(s) x {} frames x {} data bits",
                c.trials,
                sys.data_bits()
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            antennas: 2,
            spreading_factor: 5,
            frame_bits: 20,
            pilot_bits: 6,
            trials: 30,
            realizations: 4,
            mc_samples: 200,
            grid_step: 0.1,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn kinds_round_trip_names() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
        }
        assert!("ber".parse::<ExperimentKind>().is_err());
        assert_eq!(ExperimentKind::ber_for(Some("spreading_factor")), ExperimentKind::BerVsN);
        assert_eq!(ExperimentKind::rate_for(Some("theta0")), ExperimentKind::RateVsTheta0);
    }

    #[test]
    fn spec_validation() {
        let mut cfg = small();
        cfg.trials = 0;
        assert!(ExperimentSpec::new(ExperimentKind::BerVsSnr, cfg).is_err());
        let cfg = ExperimentConfig {
            sweep: Some("spreading_factor=1,2".into()),
            ..small()
        };
        assert!(ExperimentSpec::new(ExperimentKind::RateVsSnr, cfg).is_err());
        let cfg = ExperimentConfig {
            sweep: Some("pilot_bits=3".into()),
            ..small()
        };
        assert!(ExperimentSpec::new(ExperimentKind::BerVsSnr, cfg).is_err());
        let spec = ExperimentSpec::new(ExperimentKind::RateVsTheta0, small()).unwrap();
        assert_eq!(spec.sweep.values.len(), 9);
    }

    #[test]
    fn simulated_frames_respect_the_prior() {
        let sys = SystemConfig {
            frame_bits: 4020,
            pilot_bits: 20,
            antennas: 1,
            spreading: 1,
            theta0: 0.3,
            ..SystemConfig::default()
        };
        let (frame, block) = simulate_frame(&sys, &mut substream(5, 0)).unwrap();
        assert_eq!(block.len(), 4020);
        let zeros = frame.encoded[20..].iter().filter(|&&e| e == 0).count() as f64;
        let n = 4000.0;
        let sd = (n * 0.3 * 0.7_f64).sqrt();
        assert!((zeros - 0.3 * n).abs() < 4.0 * sd, "{zeros}");
    }

    #[test]
    fn single_frame_ber_is_on_the_bit_grid() {
        let cfg = ExperimentConfig { trials: 1, ..small() };
        let spec = ExperimentSpec::new(ExperimentKind::BerVsSnr, cfg).unwrap();
        let rows = run_ber_experiment(&spec, &Detector::Ml).unwrap();
        let ber = rows[0].value * 14.0;
        assert!((ber - ber.round()).abs() < 1e-12);
        assert_eq!(rows[1].metric, "bits_per_rf_symbol");
    }

    #[test]
    fn describe_mentions_defaults() {
        let spec = ExperimentSpec::new(ExperimentKind::BerVsSnr, ExperimentConfig::default()).unwrap();
        let text = describe(&spec);
        assert!(text.contains("spreading factor N = 50"));
        assert!(text.contains("frame bits I = 100"));
        assert!(text.contains("pilot bits P = 20"));
        assert!(text.contains("alpha_jr = 7 dB -> 5.0119 linear"));
    }
}
