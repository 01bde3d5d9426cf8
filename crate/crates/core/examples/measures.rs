//! Meyer-Wallach and negativity on textbook states.

use entforge::measures::{meyer_wallach, negativity, negativity_upper_bound};
use entforge::qstate::{Bipartition, StateVector};
use num_complex::Complex64;

fn ghz(n: usize) -> StateVector {
    let mut a = vec![Complex64::new(0.0, 0.0); 1 << n];
    a[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    a[(1 << n) - 1] = a[0];
    StateVector::from_amplitudes(a).unwrap()
}

fn main() -> entforge::Result<()> {
    for n in [2, 3, 5, 8] {
        println!("GHZ_{n}: MW = {:.6}", meyer_wallach(&ghz(n))?);
    }
    let s = 1.0 / 3f64.sqrt();
    let w: Vec<Complex64> = [0.0, s, s, 0.0, s, 0.0, 0.0, 0.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
    println!("W_3:   MW = {:.6}", meyer_wallach(&StateVector::from_amplitudes(w)?)?);
    println!("|000>: MW = {:.6}", meyer_wallach(&StateVector::zero(3)?)?);

    let rho = ghz(5).to_density()?;
    for side in [vec![0], vec![0, 1], vec![0, 1, 2], vec![1, 3]] {
        let part = Bipartition::new(side)?;
        println!(
            "GHZ_5 B={part}: negativity {:.4} (bound {})",
            negativity(&rho, &part)?,
            negativity_upper_bound(5, &part)?
        );
    }
    Ok(())
}
