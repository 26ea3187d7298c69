//! The whole pipeline in one program: generate a synthetic corpus, extract
//! features, train the classifier, and score it against every baseline.
//! This is exactly what the `texfis` binary does across four subcommands.
//!
//! ```bash
//! cargo run -p texfis --example full_pipeline
//! ```

use texfis::pipeline::{cmd_evaluate, cmd_features, cmd_synth, cmd_train, Method, PipelineConfig};

fn main() -> texfis::Result<()> {
    let dir = std::env::temp_dir().join("texfis_full_pipeline");
    let cfg = PipelineConfig {
        seed: 7,
        ..PipelineConfig::default()
    };

    let synth = cmd_synth(&cfg, &dir)?;
    println!(
        "synth:    {} images under {}",
        synth.image_count,
        dir.display()
    );

    let features = cmd_features(&synth.manifest_path, &cfg, &dir)?;
    println!(
        "features: {} train rows, {} test rows",
        features.train_rows, features.test_rows
    );

    let train = cmd_train(&cfg, &dir)?;
    println!(
        "train:    {} epochs, final mse {:.3e}",
        train.epochs_run, train.final_loss
    );

    let evaluate = cmd_evaluate(&cfg, &dir, &Method::ALL)?;
    println!(
        "evaluate: (test split, {} cases)",
        evaluate.reports[0].cases
    );
    println!(
        "  {:<8} {:>12} {:>12} {:>9}",
        "method", "sensitivity", "specificity", "accuracy"
    );
    for report in &evaluate.reports {
        let fmt = |v: Option<f64>| match v {
            Some(x) => format!("{x:.2}"),
            None => "undefined".into(),
        };
        println!(
            "  {:<8} {:>12} {:>12} {:>9.2}",
            report.method,
            fmt(report.sensitivity),
            fmt(report.specificity),
            report.accuracy
        );
    }
    println!("reports and chart written next to the corpus");
    Ok(())
}
