//! Angle maps of the three activations and the memristor reflectivity.

use entforge::activation::{response, Activation};
use entforge::activate;

fn main() -> entforge::Result<()> {
    let acts = [
        Activation::Linear,
        Activation::Sine,
        Activation::memristor(1.0, 0.1)?,
        Activation::memristor_default(),
    ];
    println!("{:>7} {:>9} {:>9} {:>12} {:>12}", "theta", "linear", "sin", "bm(1,0.1)", "bm(1,1)");
    for k in -4..=4 {
        let theta = k as f64 * 0.75;
        let row: Vec<String> = acts.iter().map(|a| format!("{:>9.4}", activate(theta, a))).collect();
        println!("{theta:>7.2} {}", row.join(" "));
    }
    println!("\nR(t) for t_osc=1, t_int=0.1");
    for k in 0..8 {
        let t = k as f64 * 0.25;
        println!("  t={t:.2}  R={:+.4}", response(t, 1.0, 0.1)?);
    }
    Ok(())
}
