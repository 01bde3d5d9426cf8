//! Dephasing and amplitude damping acting on |+>.

use entforge::noise::{amplitude_damp, dephase};
use entforge::qstate::{DensityMatrix, StateVector};
use num_complex::Complex64;

fn show(label: &str, rho: &DensityMatrix) {
    let m = |i, j| rho.get(i, j).re;
    println!(
        "{label:<22} [[{:.3}, {:.3}], [{:.3}, {:.3}]]  purity {:.3}",
        m(0, 0),
        m(0, 1),
        m(1, 0),
        m(1, 1),
        rho.purity()
    );
}

fn main() -> entforge::Result<()> {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = StateVector::from_amplitudes(vec![s, s])?.to_density()?;
    show("|+>", &plus);
    for p in [0.01, 0.1, 0.5] {
        show(&format!("dephase p={p}"), &dephase(&plus, p, 0)?);
    }
    for g in [0.01, 0.1, 1.0] {
        show(&format!("damp gamma={g}"), &amplitude_damp(&plus, g, 0)?);
    }
    Ok(())
}
