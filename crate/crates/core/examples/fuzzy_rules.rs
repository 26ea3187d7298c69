//! Bell membership functions and grid-partition rules: how feature values
//! turn into rule firing strengths.
//!
//! ```bash
//! cargo run -p texfis --example fuzzy_rules
//! ```

use texfis::fuzzy::{BellMf, RuleBase};

fn main() -> texfis::Result<()> {
    let mf = BellMf::new(0.5, 2.0, 0.0)?;
    println!("bell membership centered at 0 with width 0.5:");
    for x in [-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0] {
        println!("  mu({x:>5}) = {:.4}", mf.eval(x));
    }
    println!("(1 at the center, 0.5 at center +/- width, never 0)\n");

    // Two inputs spanning [0, 1] each: two bells per input, 4 rules.
    let samples = vec![
        vec![0.05, 0.1],
        vec![0.1, 0.0],
        vec![0.95, 0.85],
        vec![1.0, 1.0],
        vec![0.0, 0.9],
    ];
    let rulebase = RuleBase::grid_partition(&samples, Some(&["contrast", "entropy"]))?;
    println!(
        "grid partition over {} inputs: {} membership functions each, {} rules",
        rulebase.n_inputs,
        rulebase.mfs_per_input,
        rulebase.rules.len()
    );

    for x in [[0.0, 0.0], [1.0, 1.0], [0.5, 0.5], [0.9, 0.1]] {
        let strengths = rulebase.firing_strengths(&x)?;
        let total: f64 = strengths.iter().sum();
        print!("input {x:?} fires");
        for (rule, w) in rulebase.rules.iter().zip(&strengths) {
            print!("  {:?}->{:.3}", rule.antecedent, w / total);
        }
        println!();
    }
    println!("(antecedent [i, j] = MF choice per input; values are normalized strengths)");

    // Keep only the rules the samples actually activate.
    let pruned = rulebase.pruned_to_top_k(&samples, 2)?;
    println!(
        "top-2 rules by total activation on the samples: {:?}",
        pruned
            .rules
            .iter()
            .map(|r| r.antecedent.clone())
            .collect::<Vec<_>>()
    );
    Ok(())
}
