//! Pure and mixed n-qubit states and the tensor-algebra primitives built on
//! them.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index, so
//! for three qubits `|q0 q1 q2>` lives at index `4*q0 + 2*q1 + q2`. Local gate
//! matrices follow the same rule: the first listed wire is the high-order bit
//! of the local 2x2 or 4x4 index.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix, C0, C1};

pub const MAX_QUBITS: usize = 24;
/// Largest register for which a density matrix may be allocated.
pub const MAX_MIXED_QUBITS: usize = 12;

pub(crate) const UNITARY_TOL: f64 = 1e-10;
pub(crate) const HERMITIAN_TOL: f64 = 1e-8;

#[inline]
pub(crate) fn bit_of(num_qubits: usize, wire: usize) -> usize {
    1 << (num_qubits - 1 - wire)
}

fn check_wires(num_qubits: usize, wires: &[usize]) -> Result<()> {
    for (k, &w) in wires.iter().enumerate() {
        if w >= num_qubits {
            return Err(Error::config(format!(
                "wire {w} out of range for {num_qubits} qubits"
            )));
        }
        if wires[..k].contains(&w) {
            return Err(Error::config(format!("wire {w} listed twice")));
        }
    }
    Ok(())
}

fn check_local_unitary(u: &CMatrix, wires: &[usize]) -> Result<()> {
    let k = wires.len();
    if !(k == 1 || k == 2) {
        return Err(Error::config(format!(
            "gates act on one or two wires, got {k}"
        )));
    }
    if u.dim() != 1 << k {
        return Err(Error::config(format!(
            "{}x{} matrix cannot act on {k} wire(s)",
            u.dim(),
            u.dim()
        )));
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::numerical(format!(
            "matrix is not unitary (|U†U - I| = {defect:.3e})"
        )));
    }
    Ok(())
}

/// Applies a 2x2 or 4x4 matrix to the given wires of a flat amplitude array
/// indexed over `num_qubits` bits. No validation.
pub(crate) fn apply_local(data: &mut [Complex64], num_qubits: usize, u: &CMatrix, wires: &[usize]) {
    match wires {
        [w] => {
            let m = bit_of(num_qubits, *w);
            let (u00, u01, u10, u11) = (u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1));
            for i0 in 0..data.len() {
                if i0 & m != 0 {
                    continue;
                }
                let i1 = i0 | m;
                let (a0, a1) = (data[i0], data[i1]);
                data[i0] = u00 * a0 + u01 * a1;
                data[i1] = u10 * a0 + u11 * a1;
            }
        }
        [wa, wb] => {
            let ma = bit_of(num_qubits, *wa);
            let mb = bit_of(num_qubits, *wb);
            let mut m = [[C0; 4]; 4];
            for (r, row) in m.iter_mut().enumerate() {
                for (c, x) in row.iter_mut().enumerate() {
                    *x = u.get(r, c);
                }
            }
            for base in 0..data.len() {
                if base & (ma | mb) != 0 {
                    continue;
                }
                let idx = [base, base | mb, base | ma, base | ma | mb];
                let a = [data[idx[0]], data[idx[1]], data[idx[2]], data[idx[3]]];
                for (r, &i) in idx.iter().enumerate() {
                    let row = &m[r];
                    data[i] = row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3];
                }
            }
        }
        _ => unreachable!("local operators act on one or two wires"),
    }
}

/// Pure state of `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::config(format!(
                "register size {num_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let mut amps = vec![C0; 1 << num_qubits];
        amps[0] = C1;
        Ok(Self { num_qubits, amps })
    }

    /// Wraps amplitudes; length must be a power of two and the norm 1 within
    /// 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::config(format!(
                "{len} amplitudes is not a qubit register"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::config(format!("{num_qubits} qubits is too many")));
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-10 {
            return Err(Error::numerical(format!(
                "state is not normalized (norm² = {norm2})"
            )));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state; `bits[q]` is the value of qubit q.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        let mut s = Self::zero(bits.len())?;
        let idx = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0));
        s.amps[0] = C0;
        s.amps[idx] = C1;
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_unitary(&mut self, u: &CMatrix, wires: &[usize]) -> Result<()> {
        check_wires(self.num_qubits, wires)?;
        check_local_unitary(u, wires)?;
        self.apply_unchecked(u, wires);
        Ok(())
    }

    #[inline]
    pub(crate) fn apply_unchecked(&mut self, u: &CMatrix, wires: &[usize]) {
        apply_local(&mut self.amps, self.num_qubits, u, wires);
    }

    pub fn reduced_single_qubit(&self, wire: usize) -> Result<DensityMatrix> {
        check_wires(self.num_qubits, &[wire])?;
        Ok(DensityMatrix::from_single_qubit(self.reduced_block(wire)))
    }

    /// 2x2 reduced matrix of one wire as a plain array.
    pub(crate) fn reduced_block(&self, wire: usize) -> [[Complex64; 2]; 2] {
        let m = bit_of(self.num_qubits, wire);
        let (mut r00, mut r01, mut r11) = (0.0, C0, 0.0);
        for i0 in 0..self.amps.len() {
            if i0 & m != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[i0], self.amps[i0 | m]);
            r00 += a0.norm_sqr();
            r11 += a1.norm_sqr();
            r01 += a0 * a1.conj();
        }
        [[Complex64::new(r00, 0.0), r01], [r01.conj(), Complex64::new(r11, 0.0)]]
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_pure(self)
    }
}

/// Mixed state of `num_qubits` qubits as a dense `2^n x 2^n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::from_pure(&StateVector::zero(num_qubits)?)
    }

    /// `|psi><psi|`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let n = psi.num_qubits;
        if n > MAX_MIXED_QUBITS {
            return Err(Error::config(format!(
                "density matrices are limited to {MAX_MIXED_QUBITS} qubits, got {n}"
            )));
        }
        let d = 1 << n;
        let mut mat = CMatrix::zeros(d);
        let data = mat.as_mut_slice();
        for j in 0..d {
            let a = psi.amps[j];
            if a == C0 {
                continue;
            }
            for k in 0..d {
                data[j * d + k] = a * psi.amps[k].conj();
            }
        }
        Ok(Self { num_qubits: n, mat })
    }

    /// Validates and wraps a matrix: Hermitian and trace one within 1e-10,
    /// eigenvalues no lower than -1e-9.
    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        let d = mat.dim();
        if d < 2 || !d.is_power_of_two() {
            return Err(Error::config(format!("dimension {d} is not a register")));
        }
        let num_qubits = d.trailing_zeros() as usize;
        if num_qubits > MAX_MIXED_QUBITS {
            return Err(Error::config(format!("{num_qubits} qubits is too many")));
        }
        let h = mat.hermiticity_defect();
        if h > 1e-10 {
            return Err(Error::numerical(format!("matrix is not Hermitian ({h:.3e})")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::numerical(format!("trace is {tr}, expected 1")));
        }
        let rho = Self { num_qubits, mat };
        let min = rho.min_eigenvalue();
        if min < -1e-9 {
            return Err(Error::numerical(format!(
                "matrix is not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(rho)
    }

    fn from_single_qubit(b: [[Complex64; 2]; 2]) -> Self {
        Self {
            num_qubits: 1,
            mat: CMatrix::from_rows(b),
        }
    }

    pub(crate) fn from_matrix_unchecked(mat: CMatrix) -> Self {
        let num_qubits = mat.dim().trailing_zeros() as usize;
        Self { num_qubits, mat }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut CMatrix {
        &mut self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat.get(row, col)
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `rho <- U rho U†` with U acting on `wires`.
    pub fn apply_unitary(&mut self, u: &CMatrix, wires: &[usize]) -> Result<()> {
        check_wires(self.num_qubits, wires)?;
        check_local_unitary(u, wires)?;
        self.conjugate_unchecked(u, wires);
        Ok(())
    }

    /// `rho <- V rho V†` for any local V (not necessarily unitary).
    pub(crate) fn conjugate_unchecked(&mut self, v: &CMatrix, wires: &[usize]) {
        let n = self.num_qubits;
        let data = self.mat.as_mut_slice();
        // Row index bits are flat qubits 0..n, column bits are n..2n.
        apply_local(data, 2 * n, v, wires);
        let vc = v.conj();
        let col_wires: Vec<usize> = wires.iter().map(|w| w + n).collect();
        apply_local(data, 2 * n, &vc, &col_wires);
    }

    /// `rho <- V rho` (row action only).
    pub(crate) fn left_multiply_unchecked(&mut self, v: &CMatrix, wires: &[usize]) {
        let n = self.num_qubits;
        apply_local(self.mat.as_mut_slice(), 2 * n, v, wires);
    }

    /// `rho <- sum_k K_k rho K_k†` for single-qubit Kraus operators on `wire`.
    pub(crate) fn apply_kraus_unchecked(&mut self, kraus: &[[[Complex64; 2]; 2]], wire: usize) {
        let n = self.num_qubits;
        let d = 1usize << n;
        let m = bit_of(n, wire);
        let data = self.mat.as_mut_slice();
        for r0 in 0..d {
            if r0 & m != 0 {
                continue;
            }
            let r1 = r0 | m;
            for c0 in 0..d {
                if c0 & m != 0 {
                    continue;
                }
                let c1 = c0 | m;
                let b = [
                    [data[r0 * d + c0], data[r0 * d + c1]],
                    [data[r1 * d + c0], data[r1 * d + c1]],
                ];
                let mut out = [[C0; 2]; 2];
                for k in kraus {
                    // K B K†
                    let kb = [
                        [
                            k[0][0] * b[0][0] + k[0][1] * b[1][0],
                            k[0][0] * b[0][1] + k[0][1] * b[1][1],
                        ],
                        [
                            k[1][0] * b[0][0] + k[1][1] * b[1][0],
                            k[1][0] * b[0][1] + k[1][1] * b[1][1],
                        ],
                    ];
                    for i in 0..2 {
                        for j in 0..2 {
                            out[i][j] += kb[i][0] * k[j][0].conj() + kb[i][1] * k[j][1].conj();
                        }
                    }
                }
                data[r0 * d + c0] = out[0][0];
                data[r0 * d + c1] = out[0][1];
                data[r1 * d + c0] = out[1][0];
                data[r1 * d + c1] = out[1][1];
            }
        }
    }

    pub fn reduced_single_qubit(&self, wire: usize) -> Result<DensityMatrix> {
        check_wires(self.num_qubits, &[wire])?;
        Ok(DensityMatrix::from_single_qubit(self.reduced_block(wire)))
    }

    pub(crate) fn reduced_block(&self, wire: usize) -> [[Complex64; 2]; 2] {
        let d = self.dim();
        let m = bit_of(self.num_qubits, wire);
        let data = self.mat.as_slice();
        let mut out = [[C0; 2]; 2];
        for r in 0..d {
            if r & m != 0 {
                continue;
            }
            let r1 = r | m;
            out[0][0] += data[r * d + r];
            out[0][1] += data[r * d + r1];
            out[1][0] += data[r1 * d + r];
            out[1][1] += data[r1 * d + r1];
        }
        out
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        // Tr[rho^2] = sum_jk rho_jk rho_kj = sum_jk |rho_jk|^2 for Hermitian rho
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn partial_transpose(&self, part: &Bipartition) -> Result<CMatrix> {
        part.validate(self.num_qubits)?;
        let mask = part.mask(self.num_qubits);
        let d = self.dim();
        let src = self.mat.as_slice();
        let mut out = CMatrix::zeros(d);
        let dst = out.as_mut_slice();
        for j in 0..d {
            for k in 0..d {
                let jj = (j & !mask) | (k & mask);
                let kk = (k & !mask) | (j & mask);
                dst[j * d + k] = src[jj * d + kk];
            }
        }
        Ok(out)
    }
}

/// A split of the register into subsystem B (listed) and its complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Bipartition {
    side_b: Vec<usize>,
}

impl Bipartition {
    /// Sorts the indices; rejects empty sets and duplicates. Range checks
    /// against a register size happen in [`Bipartition::validate`].
    pub fn new(mut side_b: Vec<usize>) -> Result<Self> {
        if side_b.is_empty() {
            return Err(Error::config("bipartition side B is empty"));
        }
        side_b.sort_unstable();
        if side_b.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config(format!(
                "bipartition {side_b:?} lists a qubit twice"
            )));
        }
        Ok(Self { side_b })
    }

    /// Like [`Bipartition::new`] but also checks it is a proper subset of
    /// `0..num_qubits`.
    pub fn for_register(side_b: Vec<usize>, num_qubits: usize) -> Result<Self> {
        let b = Self::new(side_b)?;
        b.validate(num_qubits)?;
        Ok(b)
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if let Some(&w) = self.side_b.iter().find(|&&w| w >= num_qubits) {
            return Err(Error::config(format!(
                "bipartition index {w} out of range for {num_qubits} qubits"
            )));
        }
        if self.side_b.len() >= num_qubits {
            return Err(Error::config(format!(
                "bipartition {self} is not a proper subset of {num_qubits} qubits"
            )));
        }
        Ok(())
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn complement(&self, num_qubits: usize) -> Result<Bipartition> {
        self.validate(num_qubits)?;
        Bipartition::new(
            (0..num_qubits)
                .filter(|q| !self.side_b.contains(q))
                .collect(),
        )
    }

    pub(crate) fn mask(&self, num_qubits: usize) -> usize {
        self.side_b
            .iter()
            .fold(0, |acc, &w| acc | bit_of(num_qubits, w))
    }

    /// Column-safe label, e.g. `0_1_2`.
    pub fn label(&self) -> String {
        self.side_b
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join("_")
    }
}

impl TryFrom<Vec<usize>> for Bipartition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Bipartition::new(v)
    }
}

impl From<Bipartition> for Vec<usize> {
    fn from(b: Bipartition) -> Self {
        b.side_b
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, w) in self.side_b.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "]")
    }
}

impl std::str::FromStr for Bipartition {
    type Err = Error;

    /// Parses `"[0,1,2]"`; brackets and whitespace are optional.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let idx = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>().map_err(|e| Error::Parse {
                    what: format!("bipartition {s:?}"),
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Bipartition::new(idx)
    }
}

/// Anything with single-qubit marginals. Lets measures accept pure and
/// mixed states alike.
pub trait QuantumState {
    fn num_qubits(&self) -> usize;

    /// 2x2 reduced density matrix of `wire`; the wire must be in range.
    fn marginal(&self, wire: usize) -> [[Complex64; 2]; 2];
}

impl QuantumState for StateVector {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }
    fn marginal(&self, wire: usize) -> [[Complex64; 2]; 2] {
        self.reduced_block(wire)
    }
}

impl QuantumState for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }
    fn marginal(&self, wire: usize) -> [[Complex64; 2]; 2] {
        self.reduced_block(wire)
    }
}

impl QuantumState for State {
    fn num_qubits(&self) -> usize {
        State::num_qubits(self)
    }
    fn marginal(&self, wire: usize) -> [[Complex64; 2]; 2] {
        self.reduced_block(wire)
    }
}

/// Either kind of state; what a forward pass returns.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl State {
    pub fn num_qubits(&self) -> usize {
        match self {
            State::Pure(s) => s.num_qubits(),
            State::Mixed(r) => r.num_qubits(),
        }
    }

    pub fn apply_unitary(&mut self, u: &CMatrix, wires: &[usize]) -> Result<()> {
        match self {
            State::Pure(s) => s.apply_unitary(u, wires),
            State::Mixed(r) => r.apply_unitary(u, wires),
        }
    }

    pub fn reduced_single_qubit(&self, wire: usize) -> Result<DensityMatrix> {
        match self {
            State::Pure(s) => s.reduced_single_qubit(wire),
            State::Mixed(r) => r.reduced_single_qubit(wire),
        }
    }

    pub(crate) fn reduced_block(&self, wire: usize) -> [[Complex64; 2]; 2] {
        match self {
            State::Pure(s) => s.reduced_block(wire),
            State::Mixed(r) => r.reduced_block(wire),
        }
    }

    /// Density matrix of the state, lifting a pure state if needed.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        match self {
            State::Pure(s) => s.to_density(),
            State::Mixed(r) => Ok(r.clone()),
        }
    }

    pub fn as_pure(&self) -> Option<&StateVector> {
        match self {
            State::Pure(s) => Some(s),
            State::Mixed(_) => None,
        }
    }

    pub fn as_mixed(&self) -> Option<&DensityMatrix> {
        match self {
            State::Mixed(r) => Some(r),
            State::Pure(_) => None,
        }
    }
}

impl From<StateVector> for State {
    fn from(s: StateVector) -> Self {
        State::Pure(s)
    }
}

impl From<DensityMatrix> for State {
    fn from(r: DensityMatrix) -> Self {
        State::Mixed(r)
    }
}

pub fn zero_state(num_qubits: usize) -> Result<StateVector> {
    StateVector::zero(num_qubits)
}

pub fn to_density(psi: &StateVector) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(psi)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn partial_transpose(rho: &DensityMatrix, part: &Bipartition) -> Result<CMatrix> {
    rho.partial_transpose(part)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(h: &CMatrix) -> Result<f64> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::numerical(format!(
            "trace norm needs a Hermitian matrix (defect {defect:.3e})"
        )));
    }
    Ok(hermitian_eigenvalues(h).iter().map(|l| l.abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ghz(n: usize) -> StateVector {
        let mut a = vec![C0; 1 << n];
        a[0] = c(FRAC_1_SQRT_2);
        a[(1 << n) - 1] = c(FRAC_1_SQRT_2);
        StateVector::from_amplitudes(a).unwrap()
    }

    fn bell() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), C0, C0, c(FRAC_1_SQRT_2)]).unwrap()
    }

    #[test]
    fn zero_state_examples() {
        assert_eq!(zero_state(1).unwrap().amplitudes(), &[C1, C0]);
        assert_eq!(zero_state(2).unwrap().amplitudes(), &[C1, C0, C0, C0]);
        let s = zero_state(5).unwrap();
        assert_eq!(s.amplitudes().len(), 32);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_state_size_limits() {
        assert!(matches!(zero_state(0), Err(Error::Config(_))));
        assert!(matches!(zero_state(25), Err(Error::Config(_))));
    }

    #[test]
    fn to_density_examples() {
        let r = to_density(&zero_state(1).unwrap()).unwrap();
        assert_eq!(r.matrix(), &CMatrix::from_rows([[C1, C0], [C0, C0]]));
        let plus = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2); 2]).unwrap();
        let r = to_density(&plus).unwrap();
        for z in r.matrix().as_slice() {
            assert!((z - c(0.5)).norm() < 1e-15);
        }
        assert!((r.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_flips_qubit_zero() {
        let mut s = zero_state(1).unwrap();
        s.apply_unitary(&gates::pauli_x(), &[0]).unwrap();
        assert_eq!(s.amplitudes(), &[C0, C1]);
    }

    #[test]
    fn identity_leaves_state_alone() {
        let mut s = ghz(3);
        let before = s.clone();
        s.apply_unitary(&CMatrix::identity(4), &[2, 0]).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn cnot_builds_bell_pair() {
        // (|00> + |10>)/sqrt2 -> (|00> + |11>)/sqrt2
        let mut s =
            StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), C0, c(FRAC_1_SQRT_2), C0]).unwrap();
        s.apply_unitary(&gates::cnot(), &[0, 1]).unwrap();
        let want = bell();
        for (a, b) in s.amplitudes().iter().zip(want.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_unitary_rejects_bad_input() {
        let mut s = zero_state(2).unwrap();
        let err = s.apply_unitary(&gates::cnot(), &[1, 1]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let not_unitary = CMatrix::from_rows([[C1, C1], [C0, C1]]);
        let err = s.apply_unitary(&not_unitary, &[0]).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
        assert!(s.apply_unitary(&gates::pauli_x(), &[2]).is_err());
    }

    #[test]
    fn reduced_states() {
        let g = ghz(3);
        for i in 0..3 {
            let r = g.reduced_single_qubit(i).unwrap();
            assert!(r.matrix().max_abs_diff(&CMatrix::from_real_diagonal(&[0.5, 0.5])) < 1e-15);
        }
        let p = StateVector::basis(&[0, 1, 0]).unwrap();
        let r = p.reduced_single_qubit(1).unwrap();
        assert_eq!(r.matrix(), &CMatrix::from_real_diagonal(&[0.0, 1.0]));
        let r = bell().reduced_single_qubit(0).unwrap();
        assert!((r.purity() - 0.5).abs() < 1e-15);
        assert!(g.reduced_single_qubit(3).is_err());
    }

    #[test]
    fn purity_examples() {
        assert!((to_density(&ghz(2)).unwrap().purity() - 1.0).abs() < 1e-14);
        let half = DensityMatrix::from_matrix(CMatrix::from_real_diagonal(&[0.5, 0.5])).unwrap();
        assert!((purity(&half) - 0.5).abs() < 1e-15);
        let r = DensityMatrix::from_matrix(CMatrix::from_real_diagonal(&[0.75, 0.25])).unwrap();
        assert!((purity(&r) - 5.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let rho = to_density(&bell()).unwrap();
        let b = Bipartition::for_register(vec![1], 2).unwrap();
        let pt = partial_transpose(&rho, &b).unwrap();
        let ev = hermitian_eigenvalues(&pt);
        for (got, want) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!((trace_norm(&pt).unwrap() - 2.0).abs() < 1e-13);
        // involution
        let back = DensityMatrix::from_matrix_unchecked(pt)
            .partial_transpose(&b)
            .unwrap();
        assert_eq!(&back, rho.matrix());
    }

    #[test]
    fn product_partial_transpose_stays_psd() {
        let a = CMatrix::from_rows([[c(0.7), Complex64::new(0.1, 0.2)], [Complex64::new(0.1, -0.2), c(0.3)]]);
        let bm = CMatrix::from_rows([[c(0.4), Complex64::new(0.0, 0.3)], [Complex64::new(0.0, -0.3), c(0.6)]]);
        let rho = DensityMatrix::from_matrix(a.kron(&bm)).unwrap();
        let pt = rho.partial_transpose(&Bipartition::new(vec![1]).unwrap()).unwrap();
        assert!(pt.max_abs_diff(&a.kron(&bm.transpose())) < 1e-15);
        assert!(hermitian_eigenvalues(&pt)[0] > -1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&CMatrix::from_real_diagonal(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-15);
        let rho = to_density(&ghz(3)).unwrap();
        assert!((trace_norm(rho.matrix()).unwrap() - 1.0).abs() < 1e-13);
        let skew = CMatrix::from_rows([[C0, C1], [C0, C0]]);
        assert!(matches!(trace_norm(&skew), Err(Error::Numerical(_))));
    }

    #[test]
    fn bipartition_parsing_and_validation() {
        let b: Bipartition = "[2, 0,1]".parse().unwrap();
        assert_eq!(b.side_b(), &[0, 1, 2]);
        assert_eq!(b.to_string(), "[0,1,2]");
        assert_eq!(b.complement(5).unwrap().side_b(), &[3, 4]);
        assert!("[]".parse::<Bipartition>().is_err());
        assert!("[1,1]".parse::<Bipartition>().is_err());
        assert!("[a]".parse::<Bipartition>().is_err());
        assert!(Bipartition::for_register(vec![0, 1], 2).is_err());
        assert!(Bipartition::for_register(vec![3], 3).is_err());
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, "[0,1,2]");
        assert!(serde_json::from_str::<Bipartition>("[1,1]").is_err());
    }

    #[test]
    fn density_from_matrix_validates() {
        assert!(DensityMatrix::from_matrix(CMatrix::from_real_diagonal(&[0.6, 0.6])).is_err());
        assert!(DensityMatrix::from_matrix(CMatrix::from_real_diagonal(&[1.2, -0.2])).is_err());
        let nonherm = CMatrix::from_rows([[c(0.5), c(0.1)], [c(0.0), c(0.5)]]);
        assert!(DensityMatrix::from_matrix(nonherm).is_err());
    }
}
