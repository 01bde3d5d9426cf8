//! Random-topology sampling and the 0.8 threshold analysis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::network::{random_topology, structure_flags, Circuit, StructureFlags, Topology};
use crate::noise::NoiseModel;
use crate::train::{train, TrainConfig};

/// Default per-sample epoch budget.
pub const MONTE_CARLO_EPOCHS: usize = 500;
pub const HISTOGRAM_BINS: usize = 20;
pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloRecord {
    pub index: usize,
    pub seed: u64,
    pub topology: Topology,
    pub final_loss: f64,
    pub final_mw: f64,
    pub flags: StructureFlags,
}

/// Shape of every sampled network apart from its topology.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSetup {
    pub num_qubits: usize,
    pub num_gates: usize,
    pub depth: usize,
    pub params_per_block: usize,
    pub activation: Activation,
}

impl MonteCarloSetup {
    pub fn new(num_qubits: usize, activation: Activation) -> Self {
        Self {
            num_qubits,
            num_gates: num_qubits,
            depth: 1,
            params_per_block: 1,
            activation,
        }
    }
}

/// Sample `i` draws its topology from `master_seed + i` and trains with the
/// same seed. Samples run in parallel; the output is in sample order.
pub fn monte_carlo(
    n_samples: usize,
    setup: &MonteCarloSetup,
    noise: Option<&NoiseModel>,
    config: &TrainConfig,
    master_seed: u64,
) -> Result<Vec<MonteCarloRecord>> {
    if n_samples == 0 {
        return Err(Error::config("monte carlo needs at least one sample"));
    }
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let seed = master_seed.wrapping_add(i as u64);
            let topology = random_topology(setup.num_qubits, setup.num_gates, seed)?;
            let circuit = Circuit::new(topology.clone(), setup.depth, setup.activation, setup.params_per_block)?;
            let trace = train(&circuit, &config.clone().with_seed(seed), noise, &[])?;
            Ok(MonteCarloRecord {
                index: i,
                seed,
                flags: structure_flags(&topology),
                topology,
                final_loss: trace.final_loss,
                final_mw: trace.final_mw,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdSummary {
    pub threshold: f64,
    pub count: usize,
    pub fraction_above: f64,
    pub fraction_below: f64,
    pub below_all_have_flag: bool,
    /// Below-threshold records lacking the flag.
    pub below_without_flag: usize,
}

/// Splits records by `final_mw > threshold`.
pub fn threshold_analysis(records: &[MonteCarloRecord], threshold: f64) -> Result<ThresholdSummary> {
    if records.is_empty() {
        return Err(Error::config("threshold analysis needs at least one record"));
    }
    let above = records.iter().filter(|r| r.final_mw > threshold).count();
    let below_without_flag = records
        .iter()
        .filter(|r| r.final_mw <= threshold && !r.flags.has_descending_nonneighbor)
        .count();
    let n = records.len();
    Ok(ThresholdSummary {
        threshold,
        count: n,
        fraction_above: above as f64 / n as f64,
        fraction_below: (n - above) as f64 / n as f64,
        below_all_have_flag: below_without_flag == 0,
        below_without_flag,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Uniform bins over `[0, 1]`; the last bin is closed and out-of-range
/// values are clamped into the edge bins.
pub fn histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = if v.is_nan() {
            0
        } else {
            ((v.clamp(0.0, 1.0) * bins as f64) as usize).min(bins - 1)
        };
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            lo: k as f64 / bins as f64,
            hi: (k + 1) as f64 / bins as f64,
            count,
        })
        .collect()
}

pub fn loss_histogram(records: &[MonteCarloRecord]) -> Vec<HistogramBin> {
    let losses: Vec<f64> = records.iter().map(|r| r.final_loss).collect();
    histogram(&losses, HISTOGRAM_BINS)
}
