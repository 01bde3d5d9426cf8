//! Mean and spread of the loss curve over several seeds.

use entforge::network::staircase_plus_2;
use entforge::{multi_seed_stats, Activation, Bipartition, Circuit, NoiseModel, TrainConfig};

fn main() -> entforge::Result<()> {
    let c = Circuit::new(staircase_plus_2(5)?, 1, Activation::Sine, 2)?;
    let parts = [Bipartition::new(vec![0, 1, 2])?];
    let cfg = TrainConfig { max_epochs: 200, ..TrainConfig::default() };
    let s = multi_seed_stats(&c, &cfg, Some(&NoiseModel::nisq_default()), &parts, 4)?;
    for e in (0..s.loss_mean.len()).step_by(50) {
        println!("epoch {e:>4}  loss {:.4} +- {:.4}", s.loss_mean[e], s.loss_std[e]);
    }
    let best = s.best_trace();
    println!("final loss mean {:.4} var {:.2e}", s.final_loss_mean, s.final_loss_var);
    println!("best seed {} loss {:.4} N[0,1,2] {:.4}", best.seed, best.final_loss, best.final_negativities[0].unwrap());
    Ok(())
}
