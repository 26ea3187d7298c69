//! Thin command-line front end over the pipeline library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use texfis::pipeline::{
    cmd_evaluate, cmd_features, cmd_segment, cmd_synth, cmd_train, Method, PipelineConfig,
};

#[derive(Parser)]
#[command(
    name = "texfis",
    about = "Grayscale texture classification: synthetic corpora, co-occurrence features, \
             neuro-fuzzy training, baseline comparison, and mask extraction",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the seeded four-class synthetic texture corpus and manifest.
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for images/ and manifest.csv.
        #[arg(long)]
        out: PathBuf,
        /// Override the configured RNG seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Extract per-image texture features into train/test CSV tables.
    Features {
        /// Dataset manifest (CSV: path,label,split).
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Train the neuro-fuzzy classifier on features_train.csv.
    Train {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Score the model and baselines on the test split; write reports.
    Evaluate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated subset of: anfis, fcm, knn, kmeans.
        #[arg(long, value_delimiter = ',', default_values_t = [
            String::from("anfis"),
            String::from("fcm"),
            String::from("knn"),
            String::from("kmeans"),
        ])]
        methods: Vec<String>,
    },
    /// Extract a foreground mask and boundary overlay from one image.
    Segment {
        /// Input PGM image.
        image: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn load_config(path: Option<&PathBuf>, seed: Option<u64>) -> texfis::Result<PipelineConfig> {
    let mut cfg = match path {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run() -> texfis::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Synth { config, out, seed } => {
            let cfg = load_config(config.as_ref(), seed)?;
            let outcome = cmd_synth(&cfg, &out)?;
            println!(
                "wrote {} images and {}",
                outcome.image_count,
                outcome.manifest_path.display()
            );
        }
        Command::Features {
            manifest,
            config,
            out,
            seed,
        } => {
            let cfg = load_config(config.as_ref(), seed)?;
            let outcome = cmd_features(&manifest, &cfg, &out)?;
            println!(
                "wrote {} train rows to {} and {} test rows to {}",
                outcome.train_rows,
                outcome.train_csv.display(),
                outcome.test_rows,
                outcome.test_csv.display()
            );
        }
        Command::Train { config, out, seed } => {
            let cfg = load_config(config.as_ref(), seed)?;
            let outcome = cmd_train(&cfg, &out)?;
            println!(
                "trained for {} epochs (final mse {:.6e}); model at {}",
                outcome.epochs_run,
                outcome.final_loss,
                outcome.model_path.display()
            );
        }
        Command::Evaluate {
            config,
            out,
            seed,
            methods,
        } => {
            let cfg = load_config(config.as_ref(), seed)?;
            let methods = methods
                .iter()
                .map(|m| m.parse())
                .collect::<texfis::Result<Vec<Method>>>()?;
            let outcome = cmd_evaluate(&cfg, &out, &methods)?;
            for report in &outcome.reports {
                let fmt = |v: Option<f64>| match v {
                    Some(x) => format!("{x:.2}"),
                    None => "undefined".to_string(),
                };
                println!(
                    "{:<8} sensitivity {:>9}  specificity {:>9}  accuracy {:>6.2}",
                    report.method,
                    fmt(report.sensitivity),
                    fmt(report.specificity),
                    report.accuracy
                );
            }
            println!("comparison table at {}", outcome.comparison_path.display());
        }
        Command::Segment {
            image,
            config,
            out,
            seed,
        } => {
            let cfg = load_config(config.as_ref(), seed)?;
            let outcome = cmd_segment(&image, &cfg, &out)?;
            if outcome.all_foreground {
                eprintln!("warning: mask covers the entire image");
            }
            println!(
                "mask at {}, overlay at {}",
                outcome.mask_path.display(),
                outcome.overlay_path.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
