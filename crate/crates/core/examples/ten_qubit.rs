//! A short noisy 10-qubit run on one of the named wirings.
//!
//! `cargo run --release --example ten_qubit -- u_0_3 50`

use entforge::network::named_10q;
use entforge::{train, Activation, Bipartition, Circuit, NoiseModel, TrainConfig};

fn main() -> entforge::Result<()> {
    let mut args = std::env::args().skip(1);
    let variant = args.next().unwrap_or_else(|| "u_5_9".into());
    let epochs = args.next().map_or(20, |e| e.parse().expect("epoch count"));
    let side = if variant == "u_5_9" { vec![0, 1, 2, 3, 4] } else { vec![0, 1, 2, 3] };
    let c = Circuit::new(named_10q(&variant)?, 1, Activation::Sine, 2)?;
    let cfg = TrainConfig { max_epochs: epochs, negativity_every: Some(10), ..TrainConfig::default() };
    let t = train(&c, &cfg, Some(&NoiseModel::nisq_default()), &[Bipartition::new(side)?])?;
    for r in t.records.iter().filter(|r| r.negativities[0].is_some()) {
        println!("epoch {:>4}  loss {:.4}  N {:.4}", r.epoch, r.loss, r.negativities[0].unwrap());
    }
    Ok(())
}
