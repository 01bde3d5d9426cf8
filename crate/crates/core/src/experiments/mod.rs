//! Experiment specs, presets and result files.
//!
//! An [`ExperimentSpec`] is a JSON document naming one of four kinds
//! (`train`, `montecarlo`, `sweep`, `measure`). [`run_experiment`] executes
//! it on a worker pool sized by `ENTFORGE_THREADS` and returns the output
//! files in memory; [`ExperimentOutput::write_to`] puts them on disk.

mod montecarlo;
mod output;
mod overrides;
mod presets;
mod sweep;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::measures::MeasureReport;
use crate::network::{forward, named, Circuit, Topology};
use crate::noise::NoiseModel;
use crate::qstate::Bipartition;
use crate::train::{initial_params, multi_seed_stats, train, TrainConfig};

pub use montecarlo::{
    histogram, loss_histogram, monte_carlo, threshold_analysis, HistogramBin, MonteCarloRecord, MonteCarloSetup,
    ThresholdSummary, DEFAULT_THRESHOLD, HISTOGRAM_BINS, MONTE_CARLO_EPOCHS,
};
pub use output::ExperimentOutput;
pub use overrides::SpecOverrides;
pub use presets::{preset, PRESET_MEMRISTOR, PRESET_NAMES};
pub use sweep::{sweep_memristor_params, SweepRow, DEFAULT_RATIOS};

pub const THREADS_ENV: &str = "ENTFORGE_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Train,
    Montecarlo,
    Sweep,
    Measure,
}

/// A named topology (`"sc+1"`, `"u_5_9"`, ...), the text form
/// (`"0-1,1-2"`), or an inline object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopologyRef {
    Inline(Topology),
    Named(String),
}

impl TopologyRef {
    pub fn resolve(&self, num_qubits: usize) -> Result<Topology> {
        let t = match self {
            TopologyRef::Inline(t) => t.clone(),
            TopologyRef::Named(s) => match named(s, num_qubits) {
                Ok(t) => t,
                Err(named_err) => Topology::parse_text(s, num_qubits).map_err(|_| named_err)?,
            },
        };
        if t.num_qubits() != num_qubits {
            return Err(Error::config(format!(
                "topology {} is defined on {} qubits but the experiment uses {num_qubits}",
                t.name(),
                t.num_qubits()
            )));
        }
        Ok(t)
    }
}

fn one() -> usize {
    1
}

fn default_activation() -> Activation {
    Activation::Sine
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub num_qubits: usize,
    /// Required for every kind except `montecarlo`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologyRef>,
    #[serde(default = "one")]
    pub depth: usize,
    #[serde(default = "one")]
    pub params_per_block: usize,
    #[serde(default = "default_activation")]
    pub activation: Activation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModel>,
    /// Missing means the defaults, except that Monte Carlo drops the epoch
    /// budget to [`MONTE_CARLO_EPOCHS`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train: Option<TrainConfig>,
    #[serde(default = "one")]
    pub seeds: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Gates per random topology; defaults to `num_qubits`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_gates: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bipartitions: Vec<Bipartition>,
    /// Explicit parameters for `measure`; otherwise the seeded initial draw.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, num_qubits: usize) -> Self {
        Self {
            kind,
            num_qubits,
            topology: None,
            depth: 1,
            params_per_block: 1,
            activation: default_activation(),
            noise: None,
            train: None,
            seeds: 1,
            samples: None,
            num_gates: None,
            threshold: None,
            ratios: None,
            bipartitions: Vec::new(),
            params: None,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "experiment spec".into(),
            msg: e.to_string(),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse { what, msg } => Error::Parse {
                what: format!("{what} {}", path.display()),
                msg,
            },
            other => other,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn train_config(&self) -> TrainConfig {
        self.train.clone().unwrap_or_else(|| match self.kind {
            ExperimentKind::Montecarlo => TrainConfig {
                max_epochs: MONTE_CARLO_EPOCHS,
                ..TrainConfig::default()
            },
            _ => TrainConfig::default(),
        })
    }

    pub fn resolved_topology(&self) -> Result<Topology> {
        self.topology
            .as_ref()
            .ok_or_else(|| Error::config(format!("field `topology` is required for {:?} experiments", self.kind)))?
            .resolve(self.num_qubits)
    }

    pub fn circuit(&self) -> Result<Circuit> {
        Circuit::new(self.resolved_topology()?, self.depth, self.activation, self.params_per_block)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits < 2 {
            return Err(Error::config(format!("field `num_qubits` must be at least 2, got {}", self.num_qubits)));
        }
        if self.seeds == 0 {
            return Err(Error::config("field `seeds` must be at least 1"));
        }
        if let Some(nm) = &self.noise {
            nm.validate()?;
        }
        self.train_config().validate()?;
        for p in &self.bipartitions {
            p.validate(self.num_qubits)?;
        }
        match self.kind {
            ExperimentKind::Montecarlo => {
                if self.samples == Some(0) {
                    return Err(Error::config("field `samples` must be at least 1"));
                }
                if self.num_gates == Some(0) {
                    return Err(Error::config("field `num_gates` must be at least 1"));
                }
                Circuit::new(
                    crate::network::staircase(self.num_qubits)?,
                    self.depth,
                    self.activation,
                    self.params_per_block,
                )?;
            }
            _ => {
                self.circuit()?;
            }
        }
        if let Some(params) = &self.params {
            let expected = self.circuit()?.num_params();
            if params.len() != expected {
                return Err(Error::config(format!(
                    "field `params` has {} entries, the circuit needs {expected}",
                    params.len()
                )));
            }
        }
        Ok(())
    }
}

/// Worker pool honoring `ENTFORGE_THREADS`; unset means rayon's default.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::config(format!("{THREADS_ENV}={v:?} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))
}

/// Validates and runs `spec`. Files are written when `spec.output` is set.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    let pool = worker_pool()?;
    let out = pool.install(|| match spec.kind {
        ExperimentKind::Train => run_train(spec),
        ExperimentKind::Montecarlo => run_montecarlo(spec),
        ExperimentKind::Sweep => run_sweep(spec),
        ExperimentKind::Measure => run_measure(spec),
    })?;
    if let Some(dir) = &spec.output {
        out.write_to(dir)?;
    }
    Ok(out)
}

fn labels(parts: &[Bipartition]) -> Vec<String> {
    parts.iter().map(|p| format!("neg_{}", p.label())).collect()
}

fn run_train(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let circuit = spec.circuit()?;
    let cfg = spec.train_config();
    let noise = spec.noise.as_ref();
    let parts = &spec.bipartitions;
    let traces = if spec.seeds == 1 {
        vec![train(&circuit, &cfg, noise, parts)?]
    } else {
        multi_seed_stats(&circuit, &cfg, noise, parts, spec.seeds)?.traces
    };
    let neg_labels = labels(parts);
    let single = traces.len() == 1;

    let mut trace_rows = Vec::new();
    let mut record_rows = Vec::new();
    for t in &traces {
        for r in &t.records {
            let mut row = vec![t.seed.to_string(), r.epoch.to_string(), output::num(r.loss), output::num(r.mw)];
            if single {
                row.remove(0);
            }
            row.extend(r.negativities.iter().map(|v| output::opt(*v)));
            trace_rows.push(row);
        }
        let mut row = vec![
            t.seed.to_string(),
            output::num(t.final_loss),
            output::num(t.final_mw),
            t.best_epoch.to_string(),
            t.stop_epoch.to_string(),
            t.stopped_early.to_string(),
        ];
        row.extend(t.final_negativities.iter().map(|v| output::opt(*v)));
        record_rows.push(row);
    }
    let mut trace_header = vec!["seed", "epoch", "loss", "mw"];
    if single {
        trace_header.remove(0);
    }
    trace_header.extend(neg_labels.iter().map(String::as_str));
    let mut record_header = vec!["seed", "final_loss", "final_mw", "best_epoch", "stop_epoch", "stopped_early"];
    record_header.extend(neg_labels.iter().map(String::as_str));

    let best = traces
        .iter()
        .min_by(|a, b| a.final_loss.total_cmp(&b.final_loss))
        .expect("at least one seed");
    let finals: Vec<f64> = traces.iter().map(|t| t.final_loss).collect();
    let (mean, var) = crate::train::mean_and_var(&finals);
    let mut best_negs = BTreeMap::new();
    let mut max_negs = BTreeMap::new();
    let mut bounds = BTreeMap::new();
    for (j, p) in parts.iter().enumerate() {
        best_negs.insert(p.to_string(), best.final_negativities[j]);
        let max = traces
            .iter()
            .filter_map(|t| t.final_negativities[j])
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
        max_negs.insert(p.to_string(), max);
        bounds.insert(p.to_string(), crate::measures::negativity_upper_bound(spec.num_qubits, p)?);
    }
    let summary = json!({
        "kind": "train",
        "spec": spec,
        "topology": circuit.topology.to_text(),
        "num_params": circuit.num_params(),
        "seeds": traces.iter().map(|t| t.seed).collect::<Vec<_>>(),
        "final_loss_mean": mean,
        "final_loss_var": var,
        "best": {
            "seed": best.seed,
            "final_loss": best.final_loss,
            "final_mw": best.final_mw,
            "best_epoch": best.best_epoch,
            "negativities": best_negs,
            "final_params": best.final_params,
        },
        "max_negativities": max_negs,
        "negativity_bounds": bounds,
    });
    let mut out = ExperimentOutput::new(summary);
    out.add_csv("trace.csv", &trace_header, &trace_rows)?;
    out.add_csv("records.csv", &record_header, &record_rows)?;
    Ok(out)
}

fn run_montecarlo(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let setup = MonteCarloSetup {
        num_qubits: spec.num_qubits,
        num_gates: spec.num_gates.unwrap_or(spec.num_qubits),
        depth: spec.depth,
        params_per_block: spec.params_per_block,
        activation: spec.activation,
    };
    let cfg = spec.train_config();
    let samples = spec.samples.unwrap_or(1);
    let records = monte_carlo(samples, &setup, spec.noise.as_ref(), &cfg, cfg.seed)?;
    let threshold = spec.threshold.unwrap_or(DEFAULT_THRESHOLD);
    let analysis = threshold_analysis(&records, threshold)?;
    let hist = loss_histogram(&records);

    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                r.seed.to_string(),
                r.topology.to_text(),
                output::num(r.final_loss),
                output::num(r.final_mw),
                r.flags.has_descending_nonneighbor.to_string(),
            ]
        })
        .collect();
    let hist_rows: Vec<Vec<String>> = hist
        .iter()
        .map(|b| vec![output::num(b.lo), output::num(b.hi), b.count.to_string()])
        .collect();
    let summary = json!({
        "kind": "montecarlo",
        "spec": spec,
        "samples": samples,
        "setup": setup,
        "threshold": analysis,
    });
    let mut out = ExperimentOutput::new(summary);
    out.add_csv(
        "records.csv",
        &["index", "seed", "topology", "final_loss", "final_mw", "has_descending_nonneighbor"],
        &rows,
    )?;
    out.add_csv("histogram.csv", &["bin_lo", "bin_hi", "count"], &hist_rows)?;
    Ok(out)
}

fn run_sweep(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let circuit = spec.circuit()?;
    let ratios = spec.ratios.clone().unwrap_or_else(|| DEFAULT_RATIOS.to_vec());
    let rows = sweep_memristor_params(&ratios, &circuit, spec.seeds, spec.noise.as_ref(), &spec.train_config())?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                output::num(r.t_osc),
                output::num(r.t_int),
                r.seeds.to_string(),
                output::num(r.mean_final_loss),
                output::num(r.var_final_loss),
            ]
        })
        .collect();
    let summary = json!({
        "kind": "sweep",
        "spec": spec,
        "rows": rows,
    });
    let mut out = ExperimentOutput::new(summary);
    out.add_csv(
        "records.csv",
        &["t_osc", "t_int", "seeds", "mean_final_loss", "var_final_loss"],
        &csv_rows,
    )?;
    Ok(out)
}

fn run_measure(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let circuit = spec.circuit()?;
    let cfg = spec.train_config();
    let params = match &spec.params {
        Some(p) => p.clone(),
        None => initial_params(circuit.num_params(), cfg.seed),
    };
    let state = forward(&circuit, &params, spec.noise.as_ref())?;
    let report = MeasureReport::compute(&state, &spec.bipartitions)?;
    let summary = json!({
        "kind": "measure",
        "spec": spec,
        "params": params,
        "loss": 1.0 - report.mw,
        "report": report,
    });
    Ok(ExperimentOutput::new(summary))
}
