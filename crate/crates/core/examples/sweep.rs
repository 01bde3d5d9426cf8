//! Final loss across memristor oscillation periods at t_int = 1.

use entforge::experiments::{sweep_memristor_params, DEFAULT_RATIOS};
use entforge::network::staircase;
use entforge::{Activation, Circuit, TrainConfig};

fn main() -> entforge::Result<()> {
    let template = Circuit::new(staircase(4)?, 1, Activation::memristor_default(), 2)?;
    let cfg = TrainConfig { max_epochs: 200, ..TrainConfig::default() };
    for row in sweep_memristor_params(&DEFAULT_RATIOS, &template, 4, None, &cfg)? {
        println!(
            "t_osc {:.1}  t_int {:.1}  mean loss {:.4}  var {:.2e}",
            row.t_osc, row.t_int, row.mean_final_loss, row.var_final_loss
        );
    }
    Ok(())
}
