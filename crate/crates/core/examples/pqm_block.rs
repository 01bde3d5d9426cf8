//! One PQM block on |10>, and its unitary.

use entforge::gates::{apply_block, pqm_block_unitary, PqmBlockSpec};
use entforge::qstate::{State, StateVector};

fn main() -> entforge::Result<()> {
    let u = pqm_block_unitary(0.7, 1.3);
    println!("unitarity defect {:.2e}", u.unitarity_defect());
    for i in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|j| {
                let z = u.get(i, j);
                format!("{:+.3}{:+.3}i", z.re, z.im)
            })
            .collect();
        println!("  {}", row.join("  "));
    }

    let mut st = State::Pure(StateVector::basis(&[1, 0])?);
    apply_block(&mut st, &PqmBlockSpec::symmetric(0, 1, std::f64::consts::FRAC_PI_2)?, None)?;
    for (i, a) in st.as_pure().unwrap().amplitudes().iter().enumerate() {
        println!("|{i:02b}>  {:+.4}{:+.4}i", a.re, a.im);
    }
    Ok(())
}
