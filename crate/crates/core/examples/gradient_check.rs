//! Adjoint, parameter-shift and finite-difference gradients side by side.

use entforge::network::staircase_plus_1;
use entforge::train::{gradient, initial_params, GradientMode};
use entforge::{Activation, Circuit, NoiseModel};

fn main() -> entforge::Result<()> {
    let c = Circuit::new(staircase_plus_1(4)?, 1, Activation::Sine, 2)?;
    let params = initial_params(c.num_params(), 7);
    let nm = NoiseModel::nisq_default();
    for (label, noise) in [("noiseless", None), ("p=g=0.01", Some(&nm))] {
        let adj = gradient(&c, &params, noise, GradientMode::Adjoint)?;
        let ps = gradient(&c, &params, noise, GradientMode::ParameterShift)?;
        let fd = gradient(&c, &params, noise, GradientMode::FiniteDifference)?;
        println!("{label}");
        for i in 0..params.len() {
            println!("  d{i:<2} adj {:+.8}  ps {:+.8}  fd {:+.8}", adj[i], ps[i], fd[i]);
        }
    }
    Ok(())
}
