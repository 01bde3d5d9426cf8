//! Random 4-qubit wirings: final-loss histogram and the 0.8 MW split.

use entforge::experiments::{loss_histogram, monte_carlo, threshold_analysis, MonteCarloSetup};
use entforge::{Activation, TrainConfig};

fn main() -> entforge::Result<()> {
    let cfg = TrainConfig { max_epochs: 200, ..TrainConfig::default() };
    for act in [Activation::Linear, Activation::Sine] {
        let recs = monte_carlo(60, &MonteCarloSetup::new(4, act), None, &cfg, 0)?;
        let s = threshold_analysis(&recs, 0.8)?;
        println!("{act}: P(MW>0.8) = {:.3}, below without flag = {}", s.fraction_above, s.below_without_flag);
        for b in loss_histogram(&recs).iter().filter(|b| b.count > 0) {
            println!("  [{:.2}, {:.2})  {}", b.lo, b.hi, "#".repeat(b.count));
        }
    }
    Ok(())
}
