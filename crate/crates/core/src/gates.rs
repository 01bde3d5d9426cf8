//! Primitive gates and the two-qubit memristor-inspired block built from
//! them.
//!
//! Rotation conventions: `RY(t) = exp(-i t Y / 2)`, `RX(t) = exp(-i t X / 2)`.
//! For a block on wires `(a, b)` the sequence is
//! `RY(a) -> CNOT(b->a) -> CRX(a->b, -bs) -> CNOT(b->a) -> SWAP(a, b)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C0, C1};
use crate::noise::NoiseModel;
use crate::qstate::{DensityMatrix, State, StateVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_rows([[C0, C1], [C1, C0]])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows([[C0, c(0.0, -1.0)], [c(0.0, 1.0), C0]])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_rows([[C1, C0], [C0, c(-1.0, 0.0)]])
}

pub fn ry(theta: f64) -> CMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    CMatrix::from_rows([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
}

pub fn rx(theta: f64) -> CMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    CMatrix::from_rows([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
}

/// Controlled RX; the control is the first wire of the pair.
pub fn crx(theta: f64) -> CMatrix {
    let r = rx(theta);
    let mut m = CMatrix::identity(4);
    for i in 0..2 {
        for j in 0..2 {
            m.set(2 + i, 2 + j, r.get(i, j));
        }
    }
    m
}

/// CNOT with the first wire as control.
pub fn cnot() -> CMatrix {
    CMatrix::from_rows([
        [C1, C0, C0, C0],
        [C0, C1, C0, C0],
        [C0, C0, C0, C1],
        [C0, C0, C1, C0],
    ])
}

pub fn swap() -> CMatrix {
    CMatrix::from_rows([
        [C1, C0, C0, C0],
        [C0, C0, C1, C0],
        [C0, C1, C0, C0],
        [C0, C0, C0, C1],
    ])
}

/// CNOT expressed in the `(a, b)` local basis with `b` as control.
fn cnot_b_to_a() -> CMatrix {
    CMatrix::from_rows([
        [C1, C0, C0, C0],
        [C0, C0, C0, C1],
        [C0, C0, C1, C0],
        [C0, C1, C0, C0],
    ])
}

/// Full 4x4 unitary of one block in the `(a, b)` local basis.
pub fn pqm_block_unitary(ry_angle: f64, bs_angle: f64) -> CMatrix {
    let ry_a = ry(ry_angle).kron(&CMatrix::identity(2));
    let cx = cnot_b_to_a();
    swap()
        .matmul(&cx)
        .matmul(&crx(-bs_angle))
        .matmul(&cx)
        .matmul(&ry_a)
}

/// Where one block acts and with which (already activated) angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PqmBlockSpec {
    pub wire_a: usize,
    pub wire_b: usize,
    pub ry_angle: f64,
    pub bs_angle: f64,
}

impl PqmBlockSpec {
    pub fn new(wire_a: usize, wire_b: usize, ry_angle: f64, bs_angle: f64) -> Result<Self> {
        let spec = Self {
            wire_a,
            wire_b,
            ry_angle,
            bs_angle,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Single-parameter form: both angles equal.
    pub fn symmetric(wire_a: usize, wire_b: usize, angle: f64) -> Result<Self> {
        Self::new(wire_a, wire_b, angle, angle)
    }

    pub fn validate(&self) -> Result<()> {
        if self.wire_a == self.wire_b {
            return Err(Error::config(format!(
                "block wires must differ, got ({}, {})",
                self.wire_a, self.wire_b
            )));
        }
        if !self.ry_angle.is_finite() || !self.bs_angle.is_finite() {
            return Err(Error::numerical("block angles must be finite"));
        }
        Ok(())
    }
}

/// Applies one block, with optional gate-level noise: dephasing on wire A
/// right after the RY, amplitude damping on both wires after the SWAP.
///
/// Noise needs a mixed state; passing a [`State::Pure`] together with a
/// noise model is an error.
pub fn apply_block(state: &mut State, spec: &PqmBlockSpec, noise: Option<&NoiseModel>) -> Result<()> {
    spec.validate()?;
    let n = state.num_qubits();
    if spec.wire_a >= n || spec.wire_b >= n {
        return Err(Error::config(format!(
            "block ({}, {}) out of range for {n} qubits",
            spec.wire_a, spec.wire_b
        )));
    }
    match (state, noise) {
        (State::Pure(psi), None) => {
            apply_block_pure(psi, spec);
            Ok(())
        }
        (State::Mixed(rho), noise) => {
            apply_block_mixed(rho, spec, noise);
            Ok(())
        }
        (State::Pure(_), Some(_)) => Err(Error::numerical(
            "noise requires a density matrix; lift the state first",
        )),
    }
}

fn apply_block_pure(psi: &mut StateVector, spec: &PqmBlockSpec) {
    let (a, b) = (spec.wire_a, spec.wire_b);
    psi.apply_unchecked(&ry(spec.ry_angle), &[a]);
    psi.apply_unchecked(&cnot(), &[b, a]);
    psi.apply_unchecked(&crx(-spec.bs_angle), &[a, b]);
    psi.apply_unchecked(&cnot(), &[b, a]);
    psi.apply_unchecked(&swap(), &[a, b]);
}

fn apply_block_mixed(rho: &mut DensityMatrix, spec: &PqmBlockSpec, noise: Option<&NoiseModel>) {
    let (a, b) = (spec.wire_a, spec.wire_b);
    rho.conjugate_unchecked(&ry(spec.ry_angle), &[a]);
    if let Some(nm) = noise {
        nm.after_rotation(rho, a);
    }
    rho.conjugate_unchecked(&cnot(), &[b, a]);
    rho.conjugate_unchecked(&crx(-spec.bs_angle), &[a, b]);
    rho.conjugate_unchecked(&cnot(), &[b, a]);
    rho.conjugate_unchecked(&swap(), &[a, b]);
    if let Some(nm) = noise {
        nm.after_block(rho, a, b);
    }
}
