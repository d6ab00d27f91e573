use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use backscatter_bench::checkpoint::Checkpoint;
use backscatter_bench::experiment::run_training_with;
use backscatter_bench::report::write_rows;
use backscatter_bench::{
    describe, run_ber_experiment, run_eval, run_rate_experiment, Detector, ExperimentConfig, ExperimentKind,
    ExperimentSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "backscatter", about = "Backscatter anti-jamming experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Frames per BER point.
    #[arg(long)]
    trials: Option<usize>,
    /// Channel realizations per rate point.
    #[arg(long)]
    realizations: Option<usize>,
    /// Swept parameter, `name=v1,v2,...`.
    #[arg(long)]
    sweep: Option<String>,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectorArg {
    Ml,
    Dl,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum achievable backscatter rate sweeps.
    Rate(Common),
    /// Bit error rate sweeps.
    Ber {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "ml")]
        detector: DetectorArg,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Train the LSTM detector and write a checkpoint.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        checkpoint: PathBuf,
    },
    /// Compare the ML and LSTM detectors on the same frames.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        checkpoint: PathBuf,
    },
    /// Print the resolved plan without running it.
    Describe {
        #[command(flatten)]
        common: Common,
        /// Experiment kind, e.g. `ber-vs-snr`.
        #[arg(long, default_value = "ber-vs-snr")]
        kind: String,
    },
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    if let Some(r) = common.realizations {
        cfg.realizations = r;
    }
    if let Some(s) = &common.sweep {
        cfg.sweep = Some(s.clone());
    }
    Ok(cfg)
}

fn sweep_name(cfg: &ExperimentConfig) -> Option<String> {
    cfg.sweep
        .as_deref()
        .and_then(|s| s.split_once('='))
        .map(|(n, _)| n.trim().to_string())
}

fn emit(spec: &ExperimentSpec, rows: &[backscatter_bench::ResultRow]) -> Result<()> {
    if spec.out.is_none() {
        write_rows(std::io::stdout().lock(), rows)?;
    }
    Ok(())
}

fn build_spec(kind: ExperimentKind, cfg: ExperimentConfig, common: &Common) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new(kind, cfg)?;
    if let Some(out) = &common.out {
        spec = spec.with_out(out);
    }
    Ok(spec)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Rate(common) => {
            let cfg = load_config(&common)?;
            let kind = ExperimentKind::rate_for(sweep_name(&cfg).as_deref());
            let spec = build_spec(kind, cfg, &common)?;
            let rows = run_rate_experiment(&spec)?;
            emit(&spec, &rows)
        }
        Command::Ber {
            common,
            detector,
            checkpoint,
        } => {
            let cfg = load_config(&common)?;
            let kind = ExperimentKind::ber_for(sweep_name(&cfg).as_deref());
            let spec = build_spec(kind, cfg, &common)?;
            let detector = match (detector, checkpoint) {
                (DetectorArg::Ml, _) => Detector::Ml,
                (DetectorArg::Dl, Some(path)) => Detector::Dl(Checkpoint::load(&path)?.to_model()?),
                (DetectorArg::Dl, None) => bail!("--detector dl requires --checkpoint"),
            };
            let rows = run_ber_experiment(&spec, &detector)?;
            emit(&spec, &rows)
        }
        Command::Train { common, checkpoint } => {
            let cfg = load_config(&common)?;
            let spec = build_spec(ExperimentKind::TrainDl, cfg, &common)?.with_checkpoint(&checkpoint);
            let run = run_training_with(&spec, |e| {
                eprintln!("epoch {:>3}  loss {:.5}  accuracy {:.4}", e.epoch, e.loss, e.accuracy);
            })?;
            eprintln!(
                "trained on {} examples ({} / {} per class); checkpoint {}",
                run.class_counts[0] + run.class_counts[1],
                run.class_counts[0],
                run.class_counts[1],
                checkpoint.display()
            );
            Ok(())
        }
        Command::Eval { common, checkpoint } => {
            let cfg = load_config(&common)?;
            let spec = build_spec(ExperimentKind::EvalDl, cfg, &common)?;
            let model = Checkpoint::load(&checkpoint)?.to_model()?;
            let rows = run_eval(&spec, &model)?;
            emit(&spec, &rows)
        }
        Command::Describe { common, kind } => {
            let cfg = load_config(&common)?;
            let spec = build_spec(kind.parse()?, cfg, &common)?;
            print!("{}", describe(&spec));
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
