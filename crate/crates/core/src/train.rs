//! Loss, gradients, Adam and the training loop.
//!
//! The cost is `1 - MW` of the circuit output. Three gradient routes are
//! available and agree to rounding away from activation clamp points:
//!
//! * `ParameterShift`: shifted circuit evaluations per rotation. The MW cost
//!   is quadratic in the state, so the shift rule is applied to the
//!   single-qubit marginals (which are linear in the state) and combined
//!   through `dL = (4/N) sum_i Tr[rho_i d rho_i]`. RY uses the two-term
//!   `pi/2` rule; the controlled RX has generator eigenvalues `{0, +-1/2}` and
//!   needs the four-term rule.
//! * `Adjoint`: one forward and one backward sweep, propagating the cost
//!   gradient `Lambda = (4/N) sum_i rho_i (x) 1` in the Heisenberg picture.
//! * `FiniteDifference`: central differences on raw parameters.
//!
//! All three then apply the activation chain factor.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activation::activate_derivative;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C0};
use crate::measures::{meyer_wallach, negativity};
use crate::network::{forward, Circuit, Op, RotKind, Tape};
use crate::noise::{damping_kraus, dephasing_kraus, Kraus, NoiseModel};
use crate::qstate::{bit_of, Bipartition, DensityMatrix, State, StateVector, MAX_MIXED_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    ParameterShift,
    FiniteDifference,
    #[default]
    Adjoint,
}

impl std::str::FromStr for GradientMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parameter_shift" | "ps" => Ok(GradientMode::ParameterShift),
            "finite_difference" | "fd" => Ok(GradientMode::FiniteDifference),
            "adjoint" => Ok(GradientMode::Adjoint),
            other => Err(Error::Parse {
                what: "gradient mode".into(),
                msg: format!("unknown mode {other:?}"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub max_epochs: usize,
    pub early_stop_patience: usize,
    pub early_stop_min_delta: f64,
    pub seed: u64,
    pub gradient_mode: GradientMode,
    pub fd_step: f64,
    /// Epochs between negativity evaluations; `None` picks 1 for up to six
    /// qubits and 10 above.
    pub negativity_every: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 5e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            max_epochs: 2000,
            early_stop_patience: 100,
            early_stop_min_delta: 1e-6,
            seed: 0,
            gradient_mode: GradientMode::default(),
            fd_step: 1e-4,
            negativity_every: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::config("learning_rate must be positive"));
        }
        if self.early_stop_patience == 0 {
            return Err(Error::config("early_stop_patience must be at least 1"));
        }
        for (name, b) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::config(format!("{name} = {b} must lie in (0, 1)")));
            }
        }
        if !(self.fd_step > 0.0) {
            return Err(Error::config("fd_step must be positive"));
        }
        if self.negativity_every == Some(0) {
            return Err(Error::config("negativity_every must be at least 1"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn negativity_cadence(&self, num_qubits: usize) -> usize {
        self.negativity_every
            .unwrap_or(if num_qubits <= 6 { 1 } else { 10 })
    }
}

/// `1 - MW(forward(...))`.
pub fn loss(circuit: &Circuit, params: &[f64], noise: Option<&NoiseModel>) -> Result<f64> {
    let st = forward(circuit, params, noise)?;
    Ok(1.0 - meyer_wallach(&st)?)
}

/// Gradient of [`loss`] with respect to the raw parameters.
pub fn gradient(
    circuit: &Circuit,
    params: &[f64],
    noise: Option<&NoiseModel>,
    mode: GradientMode,
) -> Result<Vec<f64>> {
    gradient_with_step(circuit, params, noise, mode, TrainConfig::default().fd_step)
}

pub fn gradient_with_step(
    circuit: &Circuit,
    params: &[f64],
    noise: Option<&NoiseModel>,
    mode: GradientMode,
    fd_step: f64,
) -> Result<Vec<f64>> {
    Ok(evaluate(circuit, params, noise, mode, fd_step)?.grad)
}

pub(crate) struct Evaluation {
    pub loss: f64,
    pub grad: Vec<f64>,
    pub state: State,
}

/// Loss, raw-parameter gradient and output state at `params`.
pub(crate) fn evaluate(
    circuit: &Circuit,
    params: &[f64],
    noise: Option<&NoiseModel>,
    mode: GradientMode,
    fd_step: f64,
) -> Result<Evaluation> {
    let state = forward(circuit, params, noise)?;
    let n = circuit.num_qubits();
    let mw = meyer_wallach(&state)?;
    let loss = 1.0 - mw;

    let grad = match mode {
        GradientMode::FiniteDifference => {
            let mut g = Vec::with_capacity(params.len());
            let mut p = params.to_vec();
            for i in 0..params.len() {
                let orig = p[i];
                p[i] = orig + fd_step;
                let up = self::loss(circuit, &p, noise)?;
                p[i] = orig - fd_step;
                let down = self::loss(circuit, &p, noise)?;
                p[i] = orig;
                g.push((up - down) / (2.0 * fd_step));
            }
            return Ok(Evaluation { loss, grad: g, state });
        }
        GradientMode::Adjoint => {
            let angles = circuit.activated(params);
            let tape = circuit.tape(noise);
            match &state {
                State::Pure(psi) => adjoint_pure(&tape, &angles, psi, n),
                State::Mixed(_) => adjoint_mixed(&tape, &angles, &state, n)?,
            }
        }
        GradientMode::ParameterShift => {
            let angles = circuit.activated(params);
            let tape = circuit.tape(noise);
            parameter_shift(&tape, &angles, &state, n)?
        }
    };
    let raw = grad
        .iter()
        .zip(params)
        .map(|(g, &p)| g * activate_derivative(p, &circuit.activation))
        .collect();
    Ok(Evaluation { loss, grad: raw, state })
}

fn marginals(state: &State, n: usize) -> Vec<[[Complex64; 2]; 2]> {
    (0..n).map(|i| state.reduced_block(i)).collect()
}

/// `(4/N) sum_i Re Tr[rho_i d rho_i]`.
fn marginal_pairing(rho: &[[[Complex64; 2]; 2]], drho: &[[[Complex64; 2]; 2]]) -> f64 {
    let n = rho.len() as f64;
    let mut acc = 0.0;
    for (r, d) in rho.iter().zip(drho) {
        for a in 0..2 {
            for b in 0..2 {
                acc += (r[a][b] * d[b][a]).re;
            }
        }
    }
    4.0 / n * acc
}

fn combine(
    terms: &[(f64, &[[[Complex64; 2]; 2]])],
) -> Vec<[[Complex64; 2]; 2]> {
    let n = terms[0].1.len();
    let mut out = vec![[[C0; 2]; 2]; n];
    for (w, m) in terms {
        for (o, x) in out.iter_mut().zip(m.iter()) {
            for a in 0..2 {
                for b in 0..2 {
                    o[a][b] += x[a][b] * *w;
                }
            }
        }
    }
    out
}

/// Shift rules applied to the marginals, in activated-angle space.
fn parameter_shift(tape: &Tape, angles: &[f64], state: &State, n: usize) -> Result<Vec<f64>> {
    let rho_now = marginals(state, n);
    let mut grad = vec![0.0; angles.len()];
    let d_plus = (SQRT_2 + 1.0) / (4.0 * SQRT_2);
    let d_minus = (SQRT_2 - 1.0) / (4.0 * SQRT_2);

    // Prefix state before op `idx`, advanced one op at a time.
    let mut prefix = match state {
        State::Pure(_) => State::Pure(StateVector::zero(n)?),
        State::Mixed(_) => State::Mixed(DensityMatrix::zero(n)?),
    };
    let shifted = |prefix: &State, idx: usize, delta: f64| -> Vec<[[Complex64; 2]; 2]> {
        let mut s = prefix.clone();
        match &mut s {
            State::Pure(psi) => tape.run_pure_from(psi, idx, angles, Some((idx, delta))),
            State::Mixed(rho) => tape.run_mixed_from(rho, idx, angles, Some((idx, delta))),
        }
        marginals(&s, n)
    };

    for (idx, op) in tape.ops.iter().enumerate() {
        if let Op::Rot { kind, slot, .. } = op {
            let d = match kind {
                RotKind::Ry => {
                    let up = shifted(&prefix, idx, FRAC_PI_2);
                    let dn = shifted(&prefix, idx, -FRAC_PI_2);
                    combine(&[(0.5, &up), (-0.5, &dn)])
                }
                RotKind::CrxNeg => {
                    let up1 = shifted(&prefix, idx, FRAC_PI_2);
                    let dn1 = shifted(&prefix, idx, -FRAC_PI_2);
                    let up3 = shifted(&prefix, idx, 3.0 * FRAC_PI_2);
                    let dn3 = shifted(&prefix, idx, -3.0 * FRAC_PI_2);
                    combine(&[(d_plus, &up1), (-d_plus, &dn1), (-d_minus, &up3), (d_minus, &dn3)])
                }
            };
            grad[*slot] += marginal_pairing(&rho_now, &d);
        }
        match &mut prefix {
            State::Pure(psi) => tape.apply_pure_op(psi, idx, angles, None),
            State::Mixed(rho) => tape.apply_mixed_op(rho, idx, angles, None),
        }
    }
    Ok(grad)
}

/// `Lambda |psi>` with `Lambda = (4/N) sum_i rho_i (x) 1`.
fn cost_covector(psi: &StateVector, rho: &[[[Complex64; 2]; 2]]) -> StateVector {
    let n = psi.num_qubits();
    let scale = 4.0 / n as f64;
    let mut out = psi.clone();
    out.amplitudes_mut().iter_mut().for_each(|a| *a = C0);
    for (i, r) in rho.iter().enumerate() {
        let mut t = psi.clone();
        t.apply_unchecked(&CMatrix::from_rows(*r), &[i]);
        for (o, x) in out.amplitudes_mut().iter_mut().zip(t.amplitudes()) {
            *o += x * scale;
        }
    }
    out
}

fn adjoint_pure(tape: &Tape, angles: &[f64], psi_final: &StateVector, n: usize) -> Vec<f64> {
    let rho = (0..n).map(|i| psi_final.reduced_block(i)).collect::<Vec<_>>();
    let mut lam = cost_covector(psi_final, &rho);
    let mut psi = psi_final.clone();
    let mut grad = vec![0.0; angles.len()];
    for (idx, op) in tape.ops.iter().enumerate().rev() {
        let (u, wires) = match op {
            Op::Rot { kind, wires, .. } => (kind.matrix(tape.op_angle(idx, angles, None)), wires),
            Op::Fixed { gate, wires } => (gate.clone(), wires),
            _ => unreachable!("channels only appear on mixed tapes"),
        };
        let udag = u.adjoint();
        psi.apply_unchecked(&udag, wires);
        lam.apply_unchecked(&udag, wires);
        if let Op::Rot { kind, slot, .. } = op {
            let mut g_psi = psi.clone();
            g_psi.apply_unchecked(&kind.generator(), wires);
            grad[*slot] += 2.0 * lam.inner(&g_psi).im;
        }
    }
    grad
}

fn cost_observable(rho_final: &DensityMatrix) -> CMatrix {
    let n = rho_final.num_qubits();
    let d = rho_final.dim();
    let scale = 4.0 / n as f64;
    let mut lam = CMatrix::zeros(d);
    let data = lam.as_mut_slice();
    for i in 0..n {
        let r = rho_final.reduced_block(i);
        let m = bit_of(n, i);
        for j in 0..d {
            let bj = usize::from(j & m != 0);
            // same bit: diagonal-in-wire term
            data[j * d + j] += r[bj][bj] * scale;
            let k = j ^ m;
            data[j * d + k] += r[bj][1 - bj] * scale;
        }
    }
    lam
}

fn dagger(k: &Kraus) -> Kraus {
    [
        [k[0][0].conj(), k[1][0].conj()],
        [k[0][1].conj(), k[1][1].conj()],
    ]
}

fn adjoint_mixed(tape: &Tape, angles: &[f64], state: &State, n: usize) -> Result<Vec<f64>> {
    let rho_final = state
        .as_mixed()
        .ok_or_else(|| Error::numerical("adjoint_mixed needs a density matrix"))?;
    // Snapshot the state in front of every rotation.
    let mut snapshots: Vec<Option<DensityMatrix>> = vec![None; tape.ops.len()];
    let mut rho = DensityMatrix::zero(n)?;
    for (idx, op) in tape.ops.iter().enumerate() {
        if matches!(op, Op::Rot { .. }) {
            snapshots[idx] = Some(rho.clone());
        }
        tape.apply_mixed_op(&mut rho, idx, angles, None);
    }

    let mut lam = DensityMatrix::from_matrix_unchecked(cost_observable(rho_final));
    let mut grad = vec![0.0; angles.len()];
    for (idx, op) in tape.ops.iter().enumerate().rev() {
        match op {
            Op::Rot { kind, wires, slot } => {
                let u = kind.matrix(tape.op_angle(idx, angles, None));
                lam.conjugate_unchecked(&u.adjoint(), wires);
                let before = snapshots[idx].take().expect("snapshot recorded");
                let mut g_rho = before;
                g_rho.left_multiply_unchecked(&kind.generator(), wires);
                // Tr[Lambda X] for Hermitian Lambda is sum conj(Lambda_kj) X_kj
                let z: Complex64 = lam
                    .matrix()
                    .as_slice()
                    .iter()
                    .zip(g_rho.matrix().as_slice())
                    .map(|(l, x)| l.conj() * x)
                    .sum();
                grad[*slot] += 2.0 * z.im;
            }
            Op::Fixed { gate, wires } => lam.conjugate_unchecked(&gate.adjoint(), wires),
            Op::Dephase { wire, p } => {
                let ks = dephasing_kraus(*p);
                lam.apply_kraus_unchecked(&[dagger(&ks[0]), dagger(&ks[1])], *wire);
            }
            Op::Damp { wire, gamma } => {
                let ks = damping_kraus(*gamma);
                lam.apply_kraus_unchecked(&[dagger(&ks[0]), dagger(&ks[1])], *wire);
            }
        }
    }
    Ok(grad)
}

/// First and second Adam moments plus the step counter.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
        }
    }
}

/// One bias-corrected Adam update; `epoch` counts from 1.
pub fn adam_step(params: &mut [f64], grads: &[f64], state: &mut AdamState, config: &TrainConfig, epoch: usize) {
    assert_eq!(params.len(), grads.len(), "parameter/gradient length mismatch");
    assert_eq!(params.len(), state.m.len(), "moment length mismatch");
    let t = epoch.max(1) as i32;
    let (b1, b2) = (config.adam_beta1, config.adam_beta2);
    let c1 = 1.0 - b1.powi(t);
    let c2 = 1.0 - b2.powi(t);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        let m_hat = state.m[i] / c1;
        let v_hat = state.v[i] / c2;
        params[i] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_eps);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub mw: f64,
    /// One entry per tracked bipartition; `None` on epochs skipped by the
    /// logging cadence.
    pub negativities: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainingTrace {
    pub tracked: Vec<Bipartition>,
    pub records: Vec<EpochRecord>,
    /// Parameters of the best epoch.
    pub final_params: Vec<f64>,
    pub final_loss: f64,
    pub final_mw: f64,
    pub final_negativities: Vec<Option<f64>>,
    pub best_epoch: usize,
    pub stop_epoch: usize,
    pub stopped_early: bool,
    pub seed: u64,
}

impl TrainingTrace {
    pub fn final_negativity(&self, part: &Bipartition) -> Option<f64> {
        let i = self.tracked.iter().position(|p| p == part)?;
        self.final_negativities[i]
    }
}

pub fn initial_params(num: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num).map(|_| rng.random_range(-PI..PI)).collect()
}

fn negativities_of(state: &State, tracked: &[Bipartition]) -> Result<Vec<Option<f64>>> {
    if tracked.is_empty() {
        return Ok(Vec::new());
    }
    if state.num_qubits() > MAX_MIXED_QUBITS {
        return Ok(vec![None; tracked.len()]);
    }
    let rho = state.to_density()?;
    tracked
        .iter()
        .map(|p| negativity(&rho, p).map(Some))
        .collect()
}

/// Trains from uniform `[-pi, pi)` initial parameters drawn with
/// `config.seed`. Early stopping watches the loss; the reported result is
/// the best epoch.
pub fn train(
    circuit: &Circuit,
    config: &TrainConfig,
    noise: Option<&NoiseModel>,
    tracked: &[Bipartition],
) -> Result<TrainingTrace> {
    let params = initial_params(circuit.num_params(), config.seed);
    train_from(circuit, config, noise, tracked, params)
}

/// [`train`] with caller-supplied starting parameters.
pub fn train_from(
    circuit: &Circuit,
    config: &TrainConfig,
    noise: Option<&NoiseModel>,
    tracked: &[Bipartition],
    mut params: Vec<f64>,
) -> Result<TrainingTrace> {
    config.validate()?;
    circuit.validate()?;
    let n = circuit.num_qubits();
    for p in tracked {
        p.validate(n)?;
    }
    if params.len() != circuit.num_params() {
        return Err(Error::config(format!(
            "expected {} initial parameters, got {}",
            circuit.num_params(),
            params.len()
        )));
    }
    let cadence = config.negativity_cadence(n);
    let mut adam = AdamState::new(params.len());
    let mut records = Vec::new();
    let mut best_loss = f64::INFINITY;
    let mut best_params = params.clone();
    let mut best_epoch = 0;
    let mut best_state: Option<State> = None;
    let mut stale = 0usize;
    let mut stopped_early = false;
    let mut stop_epoch = 0;

    for epoch in 0..=config.max_epochs {
        let ev = evaluate(circuit, &params, noise, config.gradient_mode, config.fd_step)?;
        if !ev.loss.is_finite() || ev.grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::numerical(format!("non-finite loss or gradient at epoch {epoch}")));
        }
        let negs = if epoch % cadence == 0 {
            negativities_of(&ev.state, tracked)?
        } else {
            vec![None; tracked.len()]
        };
        records.push(EpochRecord {
            epoch,
            loss: ev.loss,
            mw: 1.0 - ev.loss,
            negativities: negs,
        });
        stop_epoch = epoch;

        if ev.loss < best_loss - config.early_stop_min_delta {
            stale = 0;
        } else {
            stale += 1;
        }
        if ev.loss < best_loss {
            best_loss = ev.loss;
            best_params.clone_from(&params);
            best_epoch = epoch;
            best_state = Some(ev.state);
        }
        if stale >= config.early_stop_patience {
            stopped_early = true;
            break;
        }
        if epoch == config.max_epochs {
            break;
        }
        adam_step(&mut params, &ev.grad, &mut adam, config, epoch + 1);
    }

    let best_state = best_state.expect("at least one epoch evaluated");
    let final_negativities = negativities_of(&best_state, tracked)?;
    Ok(TrainingTrace {
        tracked: tracked.to_vec(),
        records,
        final_params: best_params,
        final_loss: best_loss,
        final_mw: 1.0 - best_loss,
        final_negativities,
        best_epoch,
        stop_epoch,
        stopped_early,
        seed: config.seed,
    })
}

/// Pointwise mean and population standard deviation over several seeds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiSeedStats {
    pub seeds: Vec<u64>,
    pub loss_mean: Vec<f64>,
    pub loss_std: Vec<f64>,
    pub mw_mean: Vec<f64>,
    pub mw_std: Vec<f64>,
    /// `[bipartition][epoch]`.
    pub negativity_mean: Vec<Vec<Option<f64>>>,
    pub negativity_std: Vec<Vec<Option<f64>>>,
    pub final_loss_mean: f64,
    pub final_loss_var: f64,
    pub traces: Vec<TrainingTrace>,
}

impl MultiSeedStats {
    pub fn best_trace(&self) -> &TrainingTrace {
        self.traces
            .iter()
            .min_by(|a, b| a.final_loss.total_cmp(&b.final_loss))
            .expect("non-empty")
    }
}

/// Mean and population variance; NaN for an empty slice.
pub fn mean_and_var(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    // offset by the first sample so identical inputs give exactly zero spread
    let x0 = xs[0];
    let mean = x0 + xs.iter().map(|x| x - x0).sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// Per-epoch series of a quantity; traces that stopped early are padded with
/// their last value and gaps from the negativity cadence carry the previous
/// value forward.
fn padded(series: impl Iterator<Item = Option<f64>>, len: usize) -> Vec<Option<f64>> {
    let mut out = Vec::with_capacity(len);
    let mut last = None;
    for v in series {
        if v.is_some() {
            last = v;
        }
        out.push(last);
    }
    while out.len() < len {
        out.push(last);
    }
    out
}

fn pointwise(columns: &[Vec<Option<f64>>], len: usize) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let mut mean = Vec::with_capacity(len);
    let mut std = Vec::with_capacity(len);
    for e in 0..len {
        let vals: Vec<f64> = columns.iter().filter_map(|c| c[e]).collect();
        if vals.is_empty() {
            mean.push(None);
            std.push(None);
        } else {
            let (m, v) = mean_and_var(&vals);
            mean.push(Some(m));
            std.push(Some(v.sqrt()));
        }
    }
    (mean, std)
}

/// Runs `k` trainings with seeds `config.seed, config.seed + 1, ...`. Runs
/// execute on the rayon pool; results are kept in seed order.
pub fn multi_seed_stats(
    circuit: &Circuit,
    config: &TrainConfig,
    noise: Option<&NoiseModel>,
    tracked: &[Bipartition],
    k: usize,
) -> Result<MultiSeedStats> {
    if k < 2 {
        return Err(Error::config(format!("multi-seed statistics need k >= 2, got {k}")));
    }
    let seeds: Vec<u64> = (0..k as u64).map(|i| config.seed.wrapping_add(i)).collect();
    let traces = seeds
        .par_iter()
        .map(|&s| train(circuit, &config.clone().with_seed(s), noise, tracked))
        .collect::<Result<Vec<_>>>()?;
    Ok(stats_from_traces(seeds, traces))
}

pub fn stats_from_traces(seeds: Vec<u64>, traces: Vec<TrainingTrace>) -> MultiSeedStats {
    let len = traces.iter().map(|t| t.records.len()).max().unwrap_or(0);
    let loss_cols: Vec<_> = traces
        .iter()
        .map(|t| padded(t.records.iter().map(|r| Some(r.loss)), len))
        .collect();
    let mw_cols: Vec<_> = traces
        .iter()
        .map(|t| padded(t.records.iter().map(|r| Some(r.mw)), len))
        .collect();
    let (lm, ls) = pointwise(&loss_cols, len);
    let (mm, ms) = pointwise(&mw_cols, len);
    let n_parts = traces.first().map_or(0, |t| t.tracked.len());
    let mut negativity_mean = Vec::new();
    let mut negativity_std = Vec::new();
    for j in 0..n_parts {
        let cols: Vec<_> = traces
            .iter()
            .map(|t| padded(t.records.iter().map(|r| r.negativities[j]), len))
            .collect();
        let (m, s) = pointwise(&cols, len);
        negativity_mean.push(m);
        negativity_std.push(s);
    }
    let finals: Vec<f64> = traces.iter().map(|t| t.final_loss).collect();
    let (final_loss_mean, final_loss_var) = mean_and_var(&finals);
    let unwrap = |v: Vec<Option<f64>>| v.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect();
    MultiSeedStats {
        seeds,
        loss_mean: unwrap(lm),
        loss_std: unwrap(ls),
        mw_mean: unwrap(mm),
        mw_std: unwrap(ms),
        negativity_mean,
        negativity_std,
        final_loss_mean,
        final_loss_var,
        traces,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::Activation;
    use crate::network::{staircase, staircase_plus_1, staircase_plus_2};

    fn sc1_sine(n: usize) -> Circuit {
        Circuit::simple(staircase_plus_1(n).unwrap(), Activation::Sine)
    }

    #[test]
    fn loss_examples() {
        let c = Circuit::simple(staircase(2).unwrap(), Activation::Linear);
        assert!((loss(&c, &[0.0], None).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_parameters_give_zero_loss() {
        // RY(pi) then CRX(-pi/2) leaves (|10> + i|01>)/sqrt2.
        let c = Circuit::new(staircase(2).unwrap(), 1, Activation::Linear, 2).unwrap();
        let l = loss(&c, &[PI, FRAC_PI_2], None).unwrap();
        assert!(l.abs() < 1e-12, "{l}");
    }

    #[test]
    fn constant_region_gives_zero_gradient() {
        let c = Circuit::simple(staircase_plus_1(4).unwrap(), Activation::memristor_default());
        let params = initial_params(c.num_params(), 3);
        for mode in [GradientMode::ParameterShift, GradientMode::Adjoint, GradientMode::FiniteDifference] {
            let g = gradient(&c, &params, None, mode).unwrap();
            assert!(g.iter().all(|x| x.abs() < 1e-12), "{mode:?}: {g:?}");
        }
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?}\n{b:?}");
        }
    }

    #[test]
    fn two_qubit_gradient_matches_finite_differences() {
        let c = Circuit::simple(staircase(2).unwrap(), Activation::Linear);
        let params = [0.83];
        let fd = gradient_with_step(&c, &params, None, GradientMode::FiniteDifference, 1e-5).unwrap();
        for mode in [GradientMode::ParameterShift, GradientMode::Adjoint] {
            let g = gradient(&c, &params, None, mode).unwrap();
            assert_close(&g, &fd, 1e-6);
        }
    }

    #[test]
    fn gradient_routes_agree_noiseless_and_noisy() {
        let c = Circuit::new(staircase_plus_1(4).unwrap(), 2, Activation::Sine, 2).unwrap();
        let params = initial_params(c.num_params(), 11);
        let nm = NoiseModel::nisq_default();
        for noise in [None, Some(&nm)] {
            let fd = gradient_with_step(&c, &params, noise, GradientMode::FiniteDifference, 1e-5).unwrap();
            let ps = gradient(&c, &params, noise, GradientMode::ParameterShift).unwrap();
            let adj = gradient(&c, &params, noise, GradientMode::Adjoint).unwrap();
            assert_close(&ps, &fd, 1e-6);
            assert_close(&adj, &ps, 1e-10);
        }
    }

    #[test]
    fn linear_activation_uses_raw_shift() {
        let c = Circuit::simple(staircase(3).unwrap(), Activation::Linear);
        let params = [0.4, -1.2];
        let angles = c.activated(&params);
        assert_eq!(angles, params);
        let g = gradient(&c, &params, None, GradientMode::ParameterShift).unwrap();
        let fd = gradient_with_step(&c, &params, None, GradientMode::FiniteDifference, 1e-5).unwrap();
        assert_close(&g, &fd, 1e-7);
    }

    #[test]
    fn adam_examples() {
        let cfg = TrainConfig::default();
        let mut p = vec![1.0, -2.0];
        let mut st = AdamState::new(2);
        st.m = vec![0.5, 0.5];
        st.v = vec![0.1, 0.1];
        adam_step(&mut p, &[0.0, 0.0], &mut st, &cfg, 5);
        assert!(st.m[0] < 0.5 && st.v[0] < 0.1);
        // zero gradient with zero moments: nothing moves
        let mut p = vec![1.0, -2.0];
        let mut st = AdamState::new(2);
        adam_step(&mut p, &[0.0, 0.0], &mut st, &cfg, 1);
        assert_eq!(p, vec![1.0, -2.0]);
        // first step moves each parameter by ~lr against the gradient sign
        let mut p = vec![0.0, 0.0, 0.0];
        let mut st = AdamState::new(3);
        adam_step(&mut p, &[3.0, -0.01, 1e3], &mut st, &cfg, 1);
        assert!((p[0] + cfg.learning_rate).abs() < 1e-8);
        assert!((p[1] - cfg.learning_rate).abs() < 1e-5);
        assert!((p[2] + cfg.learning_rate).abs() < 1e-8);
        // determinism
        let mut a = (vec![0.3], AdamState::new(1));
        let mut b = a.clone();
        adam_step(&mut a.0, &[0.7], &mut a.1, &cfg, 1);
        adam_step(&mut b.0, &[0.7], &mut b.1, &cfg, 1);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_epochs_gives_single_record() {
        let cfg = TrainConfig { max_epochs: 0, ..TrainConfig::default() };
        let t = train(&sc1_sine(3), &cfg, None, &[]).unwrap();
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.best_epoch, 0);
        assert!(!t.stopped_early);
    }

    #[test]
    fn training_is_deterministic_and_tracks_best() {
        let cfg = TrainConfig { max_epochs: 60, seed: 9, ..TrainConfig::default() };
        let parts = vec![Bipartition::new(vec![0]).unwrap()];
        let a = train(&sc1_sine(3), &cfg, None, &parts).unwrap();
        let b = train(&sc1_sine(3), &cfg, None, &parts).unwrap();
        assert_eq!(a, b);
        let min = a.records.iter().map(|r| r.loss).fold(f64::INFINITY, f64::min);
        assert!((a.final_loss - min).abs() < 1e-12);
        for r in &a.records {
            assert!((r.loss - (1.0 - r.mw)).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&r.loss));
            assert!(r.negativities[0].is_some());
        }
        assert!(a.records.last().unwrap().loss <= a.records[0].loss);
    }

    #[test]
    fn early_stopping_triggers_on_flat_loss() {
        let c = Circuit::simple(staircase_plus_1(3).unwrap(), Activation::memristor_default());
        let cfg = TrainConfig { max_epochs: 500, early_stop_patience: 5, ..TrainConfig::default() };
        let t = train(&c, &cfg, None, &[]).unwrap();
        assert!(t.stopped_early);
        assert_eq!(t.records.len(), 6);
    }

    #[test]
    fn noisy_training_runs() {
        let c = Circuit::simple(staircase_plus_2(5).unwrap(), Activation::Sine);
        let cfg = TrainConfig { max_epochs: 5, ..TrainConfig::default() };
        let parts = vec![Bipartition::new(vec![0, 1, 2]).unwrap()];
        let t = train(&c, &cfg, Some(&NoiseModel::nisq_default()), &parts).unwrap();
        assert_eq!(t.records.len(), 6);
        assert!(t.final_negativities[0].unwrap() >= -1e-10);
    }

    #[test]
    fn multi_seed_basics() {
        let cfg = TrainConfig { max_epochs: 20, ..TrainConfig::default() };
        let c = sc1_sine(3);
        assert!(multi_seed_stats(&c, &cfg, None, &[], 1).is_err());
        let s = multi_seed_stats(&c, &cfg, None, &[], 2).unwrap();
        let (t0, t1) = (&s.traces[0], &s.traces[1]);
        for e in 0..s.loss_mean.len() {
            let a = t0.records.get(e).map_or(t0.records.last().unwrap().loss, |r| r.loss);
            let b = t1.records.get(e).map_or(t1.records.last().unwrap().loss, |r| r.loss);
            assert!((s.loss_mean[e] - (a + b) / 2.0).abs() < 1e-15);
        }
        let same = stats_from_traces(vec![0, 0, 0], vec![t0.clone(), t0.clone(), t0.clone()]);
        assert!(same.loss_std.iter().all(|&x| x == 0.0));
        assert_eq!(same.final_loss_var, 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig { learning_rate: 0.0, ..TrainConfig::default() }.validate().is_err());
        assert!(TrainConfig { early_stop_patience: 0, ..TrainConfig::default() }.validate().is_err());
        assert!(TrainConfig { adam_beta1: 1.0, ..TrainConfig::default() }.validate().is_err());
        let cfg: TrainConfig = serde_json::from_str(r#"{"max_epochs": 5, "gradient_mode": "finite_difference"}"#).unwrap();
        assert_eq!(cfg.max_epochs, 5);
        assert_eq!(cfg.gradient_mode, GradientMode::FiniteDifference);
        assert_eq!(cfg.learning_rate, 5e-3);
    }
}
