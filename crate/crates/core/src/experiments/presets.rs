//! Ready-made experiment specs.

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::qstate::Bipartition;
use crate::train::TrainConfig;

use super::{ExperimentKind, ExperimentSpec, TopologyRef};

pub const PRESET_NAMES: &[&str] = &[
    "fig_sc_5q_low_noise",
    "fig_sc_plus1_5q_low_noise",
    "fig_sc_plus1_full_noise_5q",
    "fig_sc_plus2_full_noise_5q",
    "fig_10q_u_5_9",
    "fig_10q_u_0_3",
    "fig_10q_w_0_3",
    "fig_10q_sc_plus1_damping_bm",
    "fig_10q_sc_plus1_damping_sin",
    "fig_11q_sc_plus1_bm",
    "fig_11q_sc_plus1_sin",
    "fig_11q_w_sc_plus1_bm",
    "fig_11q_w_sc_plus1_sin",
    "fig_20q_sc_plus1_bm",
    "fig_20q_sc_plus1_sin",
    "fig_montecarlo_5q_linear",
    "fig_montecarlo_5q_sin",
    "fig_montecarlo_5q_bm",
    "fig_sweep_initial_conditions",
];

/// Memristor timing used by the presets. The `t_osc = t_int` default is
/// flat (zero reflectivity everywhere), so presets use a short integration
/// window instead.
pub const PRESET_MEMRISTOR: Activation = Activation::Memristor { t_osc: 1.0, t_int: 0.1 };

fn parts(list: &[&[usize]]) -> Vec<Bipartition> {
    list.iter()
        .map(|s| Bipartition::new(s.to_vec()).expect("preset bipartitions are valid"))
        .collect()
}

fn base(kind: ExperimentKind, n: usize, topology: &str, activation: Activation) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(kind, n);
    if kind != ExperimentKind::Montecarlo {
        s.topology = Some(TopologyRef::Named(topology.to_string()));
    }
    s.activation = activation;
    s.params_per_block = 2;
    s
}

fn five_qubit(topology: &str, activation: Activation, noise: NoiseModel, depth: usize) -> ExperimentSpec {
    let mut s = base(ExperimentKind::Train, 5, topology, activation);
    s.depth = depth;
    s.noise = Some(noise);
    s.seeds = 20;
    s.bipartitions = parts(&[&[0, 1, 2], &[2, 3, 4]]);
    s
}

fn ten_qubit(topology: &str, activation: Activation, noise: NoiseModel, tracked: &[usize]) -> ExperimentSpec {
    let mut s = base(ExperimentKind::Train, 10, topology, activation);
    s.noise = Some(noise);
    s.bipartitions = parts(&[tracked]);
    s.train = Some(TrainConfig {
        negativity_every: Some(10),
        ..TrainConfig::default()
    });
    s
}

fn noiseless(n: usize, topology: &str, activation: Activation, depth: usize) -> ExperimentSpec {
    let mut s = base(ExperimentKind::Train, n, topology, activation);
    s.depth = depth;
    s
}

fn montecarlo(activation: Activation) -> ExperimentSpec {
    let mut s = base(ExperimentKind::Montecarlo, 5, "", activation);
    s.params_per_block = 1;
    s.samples = Some(1000);
    s
}

pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let damping = NoiseModel::damping_only(0.01)?;
    let nisq = NoiseModel::nisq_default();
    let sin = Activation::Sine;
    let spec = match name {
        "fig_sc_5q_low_noise" => five_qubit("sc", PRESET_MEMRISTOR, damping, 1),
        "fig_sc_plus1_5q_low_noise" => five_qubit("sc+1", PRESET_MEMRISTOR, damping, 1),
        "fig_sc_plus1_full_noise_5q" => five_qubit("sc+1", sin, nisq, 2),
        "fig_sc_plus2_full_noise_5q" => five_qubit("sc+2", sin, nisq, 2),
        "fig_10q_u_5_9" => ten_qubit("u_5_9", sin, nisq, &[0, 1, 2, 3, 4]),
        "fig_10q_u_0_3" => ten_qubit("u_0_3", sin, nisq, &[0, 1, 2, 3]),
        "fig_10q_w_0_3" => ten_qubit("w_0_3", sin, nisq, &[0, 1, 2, 3]),
        "fig_10q_sc_plus1_damping_bm" => ten_qubit("sc+1", PRESET_MEMRISTOR, damping, &[0, 1, 2, 3, 4]),
        "fig_10q_sc_plus1_damping_sin" => ten_qubit("sc+1", sin, damping, &[0, 1, 2, 3, 4]),
        "fig_11q_sc_plus1_bm" => noiseless(11, "sc+1", PRESET_MEMRISTOR, 2),
        "fig_11q_sc_plus1_sin" => noiseless(11, "sc+1", sin, 2),
        "fig_11q_w_sc_plus1_bm" => noiseless(11, "sc+1w", PRESET_MEMRISTOR, 2),
        "fig_11q_w_sc_plus1_sin" => noiseless(11, "sc+1w", sin, 2),
        "fig_20q_sc_plus1_bm" => noiseless(20, "sc+1", PRESET_MEMRISTOR, 1),
        "fig_20q_sc_plus1_sin" => noiseless(20, "sc+1", sin, 1),
        "fig_montecarlo_5q_linear" => montecarlo(Activation::Linear),
        "fig_montecarlo_5q_sin" => montecarlo(sin),
        "fig_montecarlo_5q_bm" => montecarlo(PRESET_MEMRISTOR),
        "fig_sweep_initial_conditions" => {
            let mut s = base(ExperimentKind::Sweep, 5, "sc", PRESET_MEMRISTOR);
            s.seeds = 20;
            s
        }
        other => {
            return Err(Error::config(format!(
                "unknown preset {other:?}; known presets: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Topology;

    #[test]
    fn every_preset_builds_and_round_trips() {
        for name in PRESET_NAMES {
            let spec = preset(name).unwrap();
            if let Ok(t) = spec.resolved_topology() {
                let back = Topology::parse_text(&t.to_text(), t.num_qubits()).unwrap();
                assert_eq!(back.pairs(), t.pairs(), "{name}");
            }
            let json = spec.to_json().unwrap();
            assert_eq!(ExperimentSpec::from_json(&json).unwrap(), spec, "{name}");
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn nisq_preset_contents() {
        let s = preset("fig_sc_plus2_full_noise_5q").unwrap();
        let nm = s.noise.unwrap();
        assert_eq!((nm.dephase_p, nm.damping_gamma), (0.01, 0.01));
        assert!(nm.dephasing_enabled && nm.damping_enabled);
        assert_eq!(s.bipartitions, parts(&[&[0, 1, 2], &[2, 3, 4]]));
        assert_eq!(s.resolved_topology().unwrap().name(), "sc+2");
        let s = preset("fig_10q_u_5_9").unwrap();
        assert_eq!(s.num_qubits, 10);
        assert_eq!(s.bipartitions, parts(&[&[0, 1, 2, 3, 4]]));
    }
}
