//! Memristor initial-condition sweep.

use rayon::prelude::*;
use serde::Serialize;

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::network::Circuit;
use crate::noise::NoiseModel;
use crate::train::{mean_and_var, train, TrainConfig};

pub const DEFAULT_RATIOS: [f64; 5] = [0.2, 0.5, 0.8, 1.1, 1.4];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub t_osc: f64,
    pub t_int: f64,
    pub seeds: usize,
    pub mean_final_loss: f64,
    pub var_final_loss: f64,
    pub final_losses: Vec<f64>,
}

/// For each ratio `r` trains `k_seeds` copies of `template` with the
/// memristor activation at `t_osc = r, t_int = 1`. Seeds are
/// `config.seed, config.seed + 1, ...`. Every (ratio, seed) cell runs as an
/// independent job.
pub fn sweep_memristor_params(
    ratios: &[f64],
    template: &Circuit,
    k_seeds: usize,
    noise: Option<&NoiseModel>,
    config: &TrainConfig,
) -> Result<Vec<SweepRow>> {
    if k_seeds == 0 {
        return Err(Error::config("sweep needs at least one seed per ratio"));
    }
    let mut circuits = Vec::with_capacity(ratios.len());
    for &r in ratios {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::config(format!("sweep ratio {r} must be positive")));
        }
        let mut c = template.clone();
        c.activation = Activation::Memristor { t_osc: r, t_int: 1.0 };
        c.validate()?;
        circuits.push(c);
    }
    let cells: Vec<(usize, u64)> = (0..ratios.len())
        .flat_map(|i| (0..k_seeds as u64).map(move |s| (i, s)))
        .collect();
    let losses = cells
        .par_iter()
        .map(|&(i, s)| {
            let cfg = config.clone().with_seed(config.seed.wrapping_add(s));
            train(&circuits[i], &cfg, noise, &[]).map(|t| t.final_loss)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios
        .iter()
        .zip(losses.chunks(k_seeds))
        .map(|(&r, chunk)| {
            let (mean, var) = mean_and_var(chunk);
            SweepRow {
                t_osc: r,
                t_int: 1.0,
                seeds: k_seeds,
                mean_final_loss: mean,
                var_final_loss: var,
                final_losses: chunk.to_vec(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::staircase;

    #[test]
    fn single_seed_has_zero_variance() {
        let c = Circuit::simple(staircase(3).unwrap(), Activation::Sine);
        let cfg = TrainConfig { max_epochs: 5, ..TrainConfig::default() };
        let rows = sweep_memristor_params(&[0.8, 1.4], &c, 1, None, &cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.var_final_loss == 0.0 && r.t_int == 1.0));
        assert_eq!(rows[1].t_osc, 1.4);
    }

    #[test]
    fn rejects_bad_input() {
        let c = Circuit::simple(staircase(3).unwrap(), Activation::Sine);
        let cfg = TrainConfig { max_epochs: 1, ..TrainConfig::default() };
        assert!(sweep_memristor_params(&[0.0], &c, 2, None, &cfg).is_err());
        assert!(sweep_memristor_params(&[1.0], &c, 0, None, &cfg).is_err());
    }
}
