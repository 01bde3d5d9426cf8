//! Timing of a 20-qubit noiseless forward pass and MW evaluation.

use std::time::Instant;

use entforge::network::staircase_plus_1;
use entforge::train::initial_params;
use entforge::{forward, meyer_wallach, Activation, Circuit};

fn main() -> entforge::Result<()> {
    let c = Circuit::new(staircase_plus_1(20)?, 1, Activation::Sine, 2)?;
    let params = initial_params(c.num_params(), 0);
    let start = Instant::now();
    let state = forward(&c, &params, None)?;
    let t_fwd = start.elapsed();
    let mw = meyer_wallach(&state)?;
    println!("forward {:.3?}, MW {mw:.4} after {:.3?}", t_fwd, start.elapsed());
    Ok(())
}
