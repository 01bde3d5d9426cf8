//! Five qubits on SC+1 with memristor activation under light damping.

use entforge::experiments::PRESET_MEMRISTOR;
use entforge::network::staircase_plus_1;
use entforge::{negativity_upper_bound, train, Bipartition, Circuit, NoiseModel, TrainConfig};

fn main() -> entforge::Result<()> {
    let c = Circuit::new(staircase_plus_1(5)?, 1, PRESET_MEMRISTOR, 2)?;
    let noise = NoiseModel::damping_only(0.01)?;
    let part = Bipartition::new(vec![0, 1, 2])?;
    let cfg = TrainConfig { max_epochs: 600, seed: 1, ..TrainConfig::default() };
    let t = train(&c, &cfg, Some(&noise), std::slice::from_ref(&part))?;
    for r in t.records.iter().step_by(100) {
        println!("epoch {:>4}  loss {:.4}  N[0,1,2] {:.4}", r.epoch, r.loss, r.negativities[0].unwrap_or(f64::NAN));
    }
    println!(
        "best epoch {}: loss {:.4}, N {:.4} of {}",
        t.best_epoch,
        t.final_loss,
        t.final_negativity(&part).unwrap(),
        negativity_upper_bound(5, &part)?
    );
    Ok(())
}
