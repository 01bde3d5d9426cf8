//! Command-line style overrides layered on top of a preset or a blank spec.

use std::path::{Path, PathBuf};

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::network::Topology;
use crate::noise::NoiseModel;
use crate::qstate::Bipartition;
use crate::train::GradientMode;

use super::{preset, ExperimentKind, ExperimentSpec, TopologyRef};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpecOverrides {
    pub qubits: Option<usize>,
    /// Name, text form, or path to a JSON/text topology file.
    pub topology: Option<String>,
    pub activation: Option<String>,
    pub t_osc: Option<f64>,
    pub t_int: Option<f64>,
    pub dephase_p: Option<f64>,
    pub damping_gamma: Option<f64>,
    pub depth: Option<usize>,
    pub params_per_block: Option<usize>,
    pub epochs: Option<usize>,
    pub lr: Option<f64>,
    pub seeds: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub gradient: Option<GradientMode>,
    pub bipartitions: Vec<Bipartition>,
    pub ratios: Option<Vec<f64>>,
    pub params: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
}

fn topology_ref(arg: &str) -> Result<TopologyRef> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let text = text.trim();
        if text.starts_with('{') {
            let t: Topology = serde_json::from_str(text).map_err(|e| Error::Parse {
                what: format!("topology file {}", path.display()),
                msg: e.to_string(),
            })?;
            return Ok(TopologyRef::Inline(t));
        }
        return Ok(TopologyRef::Named(text.to_string()));
    }
    Ok(TopologyRef::Named(arg.to_string()))
}

impl SpecOverrides {
    /// Starts from `preset_name` (whose kind must equal `kind`) or from a
    /// blank spec, then applies every override that is set.
    pub fn build(&self, kind: ExperimentKind, preset_name: Option<&str>) -> Result<ExperimentSpec> {
        let mut spec = match preset_name {
            Some(name) => {
                let s = preset(name)?;
                if s.kind != kind {
                    return Err(Error::config(format!(
                        "preset {name} is a {:?} experiment, not {kind:?}",
                        s.kind
                    )));
                }
                s
            }
            None => {
                let n = self
                    .qubits
                    .ok_or_else(|| Error::config("--qubits is required without --preset"))?;
                ExperimentSpec::new(kind, n)
            }
        };
        self.apply(&mut spec)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn apply(&self, spec: &mut ExperimentSpec) -> Result<()> {
        if let Some(n) = self.qubits {
            spec.num_qubits = n;
        }
        if let Some(t) = &self.topology {
            spec.topology = Some(topology_ref(t)?);
        }
        match &self.activation {
            Some(name) => spec.activation = Activation::from_name(name, self.t_osc, self.t_int)?,
            None => {
                if let Activation::Memristor { t_osc, t_int } = spec.activation {
                    if self.t_osc.is_some() || self.t_int.is_some() {
                        spec.activation =
                            Activation::memristor(self.t_osc.unwrap_or(t_osc), self.t_int.unwrap_or(t_int))?;
                    }
                }
            }
        }
        if self.dephase_p.is_some() || self.damping_gamma.is_some() {
            let mut nm = spec.noise.unwrap_or_else(NoiseModel::silent);
            if let Some(p) = self.dephase_p {
                nm.dephase_p = p;
                nm.dephasing_enabled = true;
            }
            if let Some(g) = self.damping_gamma {
                nm.damping_gamma = g;
                nm.damping_enabled = true;
            }
            nm.validate()?;
            spec.noise = Some(nm);
        }
        if let Some(d) = self.depth {
            spec.depth = d;
        }
        if let Some(k) = self.params_per_block {
            spec.params_per_block = k;
        }
        if self.epochs.is_some() || self.lr.is_some() || self.seed.is_some() || self.gradient.is_some() {
            let mut cfg = spec.train_config();
            if let Some(e) = self.epochs {
                cfg.max_epochs = e;
            }
            if let Some(lr) = self.lr {
                cfg.learning_rate = lr;
            }
            if let Some(s) = self.seed {
                cfg.seed = s;
            }
            if let Some(g) = self.gradient {
                cfg.gradient_mode = g;
            }
            spec.train = Some(cfg);
        }
        if let Some(s) = self.seeds {
            spec.seeds = s;
        }
        if let Some(s) = self.samples {
            spec.samples = Some(s);
        }
        if !self.bipartitions.is_empty() {
            spec.bipartitions = self.bipartitions.clone();
        }
        if let Some(r) = &self.ratios {
            spec.ratios = Some(r.clone());
        }
        if let Some(p) = &self.params {
            spec.params = Some(p.clone());
        }
        if let Some(o) = &self.out {
            spec.output = Some(o.clone());
        }
        Ok(())
    }
}
