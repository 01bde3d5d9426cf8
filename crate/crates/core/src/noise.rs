//! Single-qubit Kraus channels: Pauli-Z dephasing and amplitude damping.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C0;
use crate::qstate::{bit_of, DensityMatrix};

pub type Kraus = [[Complex64; 2]; 2];

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::config(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

fn check_wire(rho: &DensityMatrix, wire: usize) -> Result<()> {
    if wire >= rho.num_qubits() {
        return Err(Error::config(format!(
            "wire {wire} out of range for {} qubits",
            rho.num_qubits()
        )));
    }
    Ok(())
}

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn dephasing_kraus(p: f64) -> [Kraus; 2] {
    let a = (1.0 - p).sqrt();
    let b = p.sqrt();
    [[[r(a), C0], [C0, r(a)]], [[r(b), C0], [C0, r(-b)]]]
}

pub fn damping_kraus(gamma: f64) -> [Kraus; 2] {
    [
        [[r(1.0), C0], [C0, r((1.0 - gamma).sqrt())]],
        [[C0, r(gamma.sqrt())], [C0, C0]],
    ]
}

/// `(1 - p) rho + p Z rho Z` on one wire.
pub fn dephase(rho: &DensityMatrix, p: f64, wire: usize) -> Result<DensityMatrix> {
    check_probability("dephasing p", p)?;
    check_wire(rho, wire)?;
    let mut out = rho.clone();
    dephase_in_place(&mut out, p, wire);
    Ok(out)
}

/// `K0 rho K0† + K1 rho K1†` with the amplitude-damping Kraus pair.
pub fn amplitude_damp(rho: &DensityMatrix, gamma: f64, wire: usize) -> Result<DensityMatrix> {
    check_probability("damping gamma", gamma)?;
    check_wire(rho, wire)?;
    let mut out = rho.clone();
    damp_in_place(&mut out, gamma, wire);
    Ok(out)
}

/// Coherences between the two values of `wire` shrink by `1 - 2p`; the
/// populations are untouched. Same result as the Kraus sum, done entrywise.
pub(crate) fn dephase_in_place(rho: &mut DensityMatrix, p: f64, wire: usize) {
    if p == 0.0 {
        return;
    }
    let d = rho.dim();
    let m = bit_of(rho.num_qubits(), wire);
    let f = 1.0 - 2.0 * p;
    let data = rho.matrix_mut().as_mut_slice();
    for j in 0..d {
        for k in 0..d {
            if (j ^ k) & m != 0 {
                data[j * d + k] *= f;
            }
        }
    }
}

pub(crate) fn damp_in_place(rho: &mut DensityMatrix, gamma: f64, wire: usize) {
    if gamma == 0.0 {
        return;
    }
    rho.apply_kraus_unchecked(&damping_kraus(gamma), wire);
}

/// Which channels run inside each block and how strong they are.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    #[serde(default)]
    pub dephase_p: f64,
    #[serde(default)]
    pub damping_gamma: f64,
    #[serde(rename = "dephasing", default)]
    pub dephasing_enabled: bool,
    #[serde(rename = "damping", default)]
    pub damping_enabled: bool,
}

impl NoiseModel {
    pub fn new(dephase_p: f64, damping_gamma: f64, dephasing: bool, damping: bool) -> Result<Self> {
        let nm = Self {
            dephase_p,
            damping_gamma,
            dephasing_enabled: dephasing,
            damping_enabled: damping,
        };
        nm.validate()?;
        Ok(nm)
    }

    /// Dephasing p = 0.01 and damping gamma = 0.01, both on.
    pub fn nisq_default() -> Self {
        Self {
            dephase_p: 0.01,
            damping_gamma: 0.01,
            dephasing_enabled: true,
            damping_enabled: true,
        }
    }

    pub fn full(p: f64, gamma: f64) -> Result<Self> {
        Self::new(p, gamma, true, true)
    }

    pub fn damping_only(gamma: f64) -> Result<Self> {
        Self::new(0.0, gamma, false, true)
    }

    pub fn dephasing_only(p: f64) -> Result<Self> {
        Self::new(p, 0.0, true, false)
    }

    /// Both channels off; still forces the density-matrix path.
    pub fn silent() -> Self {
        Self {
            dephase_p: 0.0,
            damping_gamma: 0.0,
            dephasing_enabled: false,
            damping_enabled: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("dephase_p", self.dephase_p)?;
        check_probability("damping_gamma", self.damping_gamma)
    }

    pub(crate) fn effective_dephasing(&self) -> Option<f64> {
        (self.dephasing_enabled && self.dephase_p > 0.0).then_some(self.dephase_p)
    }

    pub(crate) fn effective_damping(&self) -> Option<f64> {
        (self.damping_enabled && self.damping_gamma > 0.0).then_some(self.damping_gamma)
    }

    pub(crate) fn after_rotation(&self, rho: &mut DensityMatrix, wire: usize) {
        if let Some(p) = self.effective_dephasing() {
            dephase_in_place(rho, p, wire);
        }
    }

    pub(crate) fn after_block(&self, rho: &mut DensityMatrix, wire_a: usize, wire_b: usize) {
        if let Some(g) = self.effective_damping() {
            damp_in_place(rho, g, wire_a);
            damp_in_place(rho, g, wire_b);
        }
    }
}
