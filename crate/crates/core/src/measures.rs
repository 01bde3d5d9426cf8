//! Meyer-Wallach global entanglement and bipartite negativity.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{trace_norm, Bipartition, DensityMatrix, QuantumState};

#[inline]
fn marginal_purity(b: &[[Complex64; 2]; 2]) -> f64 {
    b[0][0].norm_sqr() + b[1][1].norm_sqr() + b[0][1].norm_sqr() + b[1][0].norm_sqr()
}

/// `Q = (2/N) * sum_i (1 - Tr[rho_i^2])` over single-qubit marginals.
///
/// Normalized so that GHZ states score 1 and product states 0. Mixed inputs
/// go through the same formula.
pub fn meyer_wallach<S: QuantumState + ?Sized>(state: &S) -> Result<f64> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::config(format!(
            "Meyer-Wallach needs at least 2 qubits, got {n}"
        )));
    }
    let linear_entropy: f64 = (0..n)
        .map(|i| 1.0 - marginal_purity(&state.marginal(i)))
        .sum();
    Ok(2.0 / n as f64 * linear_entropy)
}

/// `(||rho^{T_B}||_1 - 1) / 2`.
pub fn negativity(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    let pt = rho.partial_transpose(part)?;
    Ok((trace_norm(&pt)? - 1.0) / 2.0)
}

/// Pure-state maximum of the negativity across `part`:
/// `(d_min - 1) / 2` with `d_min = 2^min(|B|, n - |B|)`.
pub fn negativity_upper_bound(num_qubits: usize, part: &Bipartition) -> Result<f64> {
    part.validate(num_qubits)?;
    let b = part.side_b().len();
    let k = b.min(num_qubits - b);
    Ok(((1u64 << k) as f64 - 1.0) / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub mw: f64,
    pub negativities: BTreeMap<String, f64>,
    pub bounds: BTreeMap<String, f64>,
}

impl MeasureReport {
    /// MW plus negativity and its bound for every bipartition. Pure inputs
    /// are lifted to a density matrix for the negativity part.
    pub fn compute(state: &crate::qstate::State, parts: &[Bipartition]) -> Result<Self> {
        let mw = meyer_wallach(state)?;
        let mut negativities = BTreeMap::new();
        let mut bounds = BTreeMap::new();
        if !parts.is_empty() {
            let rho = state.to_density()?;
            for p in parts {
                negativities.insert(p.to_string(), negativity(&rho, p)?);
                bounds.insert(p.to_string(), negativity_upper_bound(state.num_qubits(), p)?);
            }
        }
        Ok(Self {
            mw,
            negativities,
            bounds,
        })
    }
}
