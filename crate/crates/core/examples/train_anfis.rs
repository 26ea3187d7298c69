//! Training the neuro-fuzzy classifier on a small in-memory dataset:
//! hybrid least-squares/gradient learning, the loss history, and model
//! persistence.
//!
//! ```bash
//! cargo run -p texfis --example train_anfis
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use texfis::anfis::{AnfisModel, TrainConfig};

fn main() -> texfis::Result<()> {
    // Three classes in two feature dimensions with generous scatter.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..90 {
        let label = 1 + i % 3;
        let center = (label - 1) as f64;
        rows.push(vec![
            center + 0.4 * rng.random::<f64>(),
            center * 0.8 + 0.4 * rng.random::<f64>(),
        ]);
        labels.push(label);
    }

    let mut model = AnfisModel::new(&rows, 3, Some(&["x0", "x1"]), None)?;
    println!(
        "grid partition: {} rules over {} inputs",
        model.rulebase.rules.len(),
        model.n_inputs()
    );

    let cfg = TrainConfig {
        epochs: 40,
        min_improvement: 0.0,
        ..TrainConfig::default()
    };
    let history = model.train(&rows, &labels, &cfg)?;
    println!("trained for {} epochs", history.len());
    println!("  first epoch mse: {:.6}", history[0]);
    println!("  final epoch mse: {:.6}", history[history.len() - 1]);

    let correct = rows
        .iter()
        .zip(&labels)
        .filter(|(row, &label)| model.predict_class(row).unwrap() == label)
        .count();
    println!("training accuracy: {correct}/{}", rows.len());

    // The trace exposes every layer of the forward pass.
    let trace = model.trace(&rows[0])?;
    println!(
        "sample forward pass: {} strengths summing to {:.3}, output {:.3} -> class {}",
        trace.strengths.len(),
        trace.normalized.iter().sum::<f64>(),
        trace.output,
        model.predict_class(&rows[0])?
    );

    let path = std::env::temp_dir().join("texfis_demo.anfis");
    model.save(&path)?;
    let restored = AnfisModel::load(&path)?;
    assert_eq!(
        model.forward(&rows[0])?.to_bits(),
        restored.forward(&rows[0])?.to_bits()
    );
    println!("model round-tripped bit-exactly through {}", path.display());
    Ok(())
}
