//! Loads a preset, shortens it, runs it and writes the output files.
//!
//! `cargo run --release --example run_preset -- fig_sc_plus1_5q_low_noise out/`

use std::path::PathBuf;

use entforge::experiments::{preset, run_experiment};
use entforge::TrainConfig;

fn main() -> entforge::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig_sc_5q_low_noise".into());
    let mut spec = preset(&name)?;
    spec.seeds = spec.seeds.min(2);
    spec.train = Some(TrainConfig { max_epochs: 100, ..spec.train_config() });
    spec.output = args.next().map(PathBuf::from);
    println!("{}", spec.to_json()?);
    let out = run_experiment(&spec)?;
    println!("{}", out.summary_json()?);
    for name in out.files.keys() {
        println!("produced {name}");
    }
    Ok(())
}
