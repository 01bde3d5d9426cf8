//! Circuit topologies, parameter layout and the forward pass.
//!
//! A circuit is a topology (ordered list of wire pairs), repeated `depth`
//! times, with one memristor-inspired block per pair. Raw parameters are
//! activated before they reach a gate.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::activation::{activate, Activation};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::CMatrix;
use crate::noise::{self, NoiseModel};
use crate::qstate::{DensityMatrix, State, StateVector};

/// Ordered wire pairs; `(a, b)` puts the RY and the CRX control on `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TopologyRepr")]
pub struct Topology {
    name: String,
    num_qubits: usize,
    pairs: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct TopologyRepr {
    #[serde(default)]
    name: String,
    num_qubits: usize,
    pairs: Vec<(usize, usize)>,
}

impl TryFrom<TopologyRepr> for Topology {
    type Error = Error;
    fn try_from(r: TopologyRepr) -> Result<Self> {
        let name = if r.name.is_empty() { "custom".to_string() } else { r.name };
        Topology::new(name, r.num_qubits, r.pairs)
    }
}

impl Topology {
    pub fn new(name: impl Into<String>, num_qubits: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if num_qubits < 2 {
            return Err(Error::config(format!(
                "a topology needs at least 2 qubits, got {num_qubits}"
            )));
        }
        if pairs.is_empty() {
            return Err(Error::config("a topology needs at least one pair"));
        }
        for &(a, b) in &pairs {
            if a == b {
                return Err(Error::config(format!("pair ({a}, {b}) repeats a wire")));
            }
            if a >= num_qubits || b >= num_qubits {
                return Err(Error::config(format!(
                    "pair ({a}, {b}) out of range for {num_qubits} qubits"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            num_qubits,
            pairs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Appends pairs, re-checking range.
    pub fn extended(&self, name: impl Into<String>, extra: &[(usize, usize)]) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(extra);
        Topology::new(name, self.num_qubits, pairs)
    }

    /// Text form, e.g. `0-1,1-2,2-3`.
    pub fn to_text(&self) -> String {
        self.pairs
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the text form. The register size is given separately since the
    /// pairs need not touch every wire.
    pub fn parse_text(text: &str, num_qubits: usize) -> Result<Self> {
        let parse_err = |msg: String| Error::Parse {
            what: format!("topology {text:?}"),
            msg,
        };
        let mut pairs = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| parse_err(format!("pair {item:?} is not of the form A-B")))?;
            let a = a.trim().parse::<usize>().map_err(|e| parse_err(e.to_string()))?;
            let b = b.trim().parse::<usize>().map_err(|e| parse_err(e.to_string()))?;
            pairs.push((a, b));
        }
        Topology::new("custom", num_qubits, pairs)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} qubits): {}", self.name, self.num_qubits, self.to_text())
    }
}

/// Nearest-neighbour chain `(0,1), (1,2), ..., (n-2, n-1)`.
pub fn staircase(n: usize) -> Result<Topology> {
    if n < 2 {
        return Err(Error::config(format!("staircase needs n >= 2, got {n}")));
    }
    Topology::new("sc", n, (0..n - 1).map(|i| (i, i + 1)).collect())
}

/// Staircase closed by `(n-1, 0)`.
pub fn staircase_plus_1(n: usize) -> Result<Topology> {
    if n < 3 {
        return Err(Error::config(format!("staircase+1 needs n >= 3, got {n}")));
    }
    staircase(n)?.extended("sc+1", &[(n - 1, 0)])
}

/// Staircase closed by `(0, n-1)`: the mirrored long-range coupling.
pub fn staircase_plus_1_mirrored(n: usize) -> Result<Topology> {
    if n < 3 {
        return Err(Error::config(format!("staircase+1 needs n >= 3, got {n}")));
    }
    staircase(n)?.extended("sc+1w", &[(0, n - 1)])
}

/// Staircase+1 followed by `(3, 1)`.
pub fn staircase_plus_2(n: usize) -> Result<Topology> {
    if n < 5 {
        return Err(Error::config(format!("staircase+2 needs n >= 5, got {n}")));
    }
    staircase_plus_1(n)?.extended("sc+2", &[(3, 1)])
}

/// Ten-qubit topologies `u_5_9`, `u_0_3` and `w_0_3`.
pub fn named_10q(variant: &str) -> Result<Topology> {
    let base = staircase_plus_1(10)?;
    match variant {
        "u_5_9" => base.extended("u_5_9", &[(8, 1), (7, 2), (6, 3), (5, 4)]),
        "u_0_3" => base.extended("u_0_3", &U_0_3_EXTRA),
        "w_0_3" => {
            let u = base.extended("w_0_3", &U_0_3_EXTRA)?;
            u.extended("w_0_3", &[(9, 1), (8, 0)])
        }
        other => Err(Error::config(format!(
            "unknown 10-qubit topology {other:?} (expected u_5_9, u_0_3 or w_0_3)"
        ))),
    }
}

const U_0_3_EXTRA: [(usize, usize); 5] = [(8, 1), (7, 2), (6, 3), (4, 1), (5, 2)];

/// `num_gates` ordered pairs of distinct wires, each drawn uniformly from the
/// `n (n - 1)` possibilities. Deterministic in `seed`.
pub fn random_topology(n: usize, num_gates: usize, seed: u64) -> Result<Topology> {
    if n < 2 {
        return Err(Error::config(format!("random topology needs n >= 2, got {n}")));
    }
    if num_gates == 0 {
        return Err(Error::config("random topology needs at least one gate"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..num_gates)
        .map(|_| {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    Topology::new("rn", n, pairs)
}

/// Resolves a topology by name for a register size: `sc`, `sc+1`, `sc+1w`,
/// `sc+2`, or one of the ten-qubit variants.
pub fn named(name: &str, n: usize) -> Result<Topology> {
    match name {
        "sc" | "staircase" => staircase(n),
        "sc+1" | "sc1" => staircase_plus_1(n),
        "sc+1w" | "w_sc+1" => staircase_plus_1_mirrored(n),
        "sc+2" | "sc2" => staircase_plus_2(n),
        "u_5_9" | "u_0_3" | "w_0_3" => {
            if n != 10 {
                return Err(Error::config(format!("{name} is a 10-qubit topology, got n = {n}")));
            }
            named_10q(name)
        }
        other => Err(Error::config(format!("unknown topology name {other:?}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFlags {
    /// Some pair `(a, b)` has `a > b` and `a - b > 1`.
    pub has_descending_nonneighbor: bool,
}

pub fn structure_flags(t: &Topology) -> StructureFlags {
    StructureFlags {
        has_descending_nonneighbor: t.pairs.iter().any(|&(a, b)| a > b && a - b > 1),
    }
}

/// A trainable network: topology, depth, activation, and whether each block
/// owns one shared angle or separate RY and beam-splitter angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub topology: Topology,
    pub depth: usize,
    pub activation: Activation,
    pub params_per_block: usize,
}

impl Circuit {
    pub fn new(topology: Topology, depth: usize, activation: Activation, params_per_block: usize) -> Result<Self> {
        let c = Self {
            topology,
            depth,
            activation,
            params_per_block,
        };
        c.validate()?;
        Ok(c)
    }

    /// Depth one, one shared angle per block.
    pub fn simple(topology: Topology, activation: Activation) -> Self {
        Self {
            topology,
            depth: 1,
            activation,
            params_per_block: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.depth) {
            return Err(Error::config(format!("depth must be 1 or 2, got {}", self.depth)));
        }
        if !(1..=2).contains(&self.params_per_block) {
            return Err(Error::config(format!(
                "params_per_block must be 1 or 2, got {}",
                self.params_per_block
            )));
        }
        self.activation.validate()
    }

    pub fn num_qubits(&self) -> usize {
        self.topology.num_qubits()
    }

    pub fn num_blocks(&self) -> usize {
        self.depth * self.topology.len()
    }

    pub fn num_params(&self) -> usize {
        self.num_blocks() * self.params_per_block
    }

    /// Parameter indices `(ry, bs)` of block `k` in execution order.
    pub(crate) fn block_params(&self, k: usize) -> (usize, usize) {
        let base = k * self.params_per_block;
        (base, base + self.params_per_block - 1)
    }

    pub fn activated(&self, params: &[f64]) -> Vec<f64> {
        params.iter().map(|&t| activate(t, &self.activation)).collect()
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_params() {
            return Err(Error::config(format!(
                "expected {} parameters, got {}",
                self.num_params(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::numerical("parameters must be finite"));
        }
        Ok(())
    }

    pub(crate) fn tape(&self, noise: Option<&NoiseModel>) -> Tape {
        Tape::build(self, noise)
    }
}

/// Runs `|0...0>` through the circuit. With a noise model the evolution is
/// done on a density matrix; without one it stays a state vector.
pub fn forward(circuit: &Circuit, params: &[f64], noise: Option<&NoiseModel>) -> Result<State> {
    circuit.validate()?;
    circuit.check_params(params)?;
    if let Some(nm) = noise {
        nm.validate()?;
    }
    let angles = circuit.activated(params);
    circuit.tape(noise).run(&angles, None)
}

/// Rotation generators used by the gradient code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RotKind {
    /// `RY(angle)` on one wire; generator `Y / 2`.
    Ry,
    /// `CRX(-angle)` on `[control, target]`; generator `-|1><1| (x) X / 2`.
    CrxNeg,
}

#[derive(Clone, Debug)]
pub(crate) enum Op {
    Rot {
        kind: RotKind,
        wires: Vec<usize>,
        slot: usize,
    },
    Fixed {
        gate: CMatrix,
        wires: Vec<usize>,
    },
    Dephase {
        wire: usize,
        p: f64,
    },
    Damp {
        wire: usize,
        gamma: f64,
    },
}

impl RotKind {
    pub(crate) fn matrix(self, angle: f64) -> CMatrix {
        match self {
            RotKind::Ry => gates::ry(angle),
            RotKind::CrxNeg => gates::crx(-angle),
        }
    }

    /// Hermitian generator `G` with `d/d angle U = -i G U`.
    pub(crate) fn generator(self) -> CMatrix {
        use num_complex::Complex64;
        match self {
            RotKind::Ry => gates::pauli_y().scale(Complex64::new(0.5, 0.0)),
            RotKind::CrxNeg => {
                let mut g = CMatrix::zeros(4);
                g.set(2, 3, Complex64::new(-0.5, 0.0));
                g.set(3, 2, Complex64::new(-0.5, 0.0));
                g
            }
        }
    }
}

/// Flattened gate/channel sequence of a circuit.
#[derive(Clone, Debug)]
pub(crate) struct Tape {
    pub num_qubits: usize,
    pub ops: Vec<Op>,
    pub mixed: bool,
}

impl Tape {
    fn build(circuit: &Circuit, noise: Option<&NoiseModel>) -> Tape {
        let dephase = noise.and_then(NoiseModel::effective_dephasing);
        let damp = noise.and_then(NoiseModel::effective_damping);
        let mut ops = Vec::new();
        let pairs = circuit.topology.pairs();
        for k in 0..circuit.num_blocks() {
            let (a, b) = pairs[k % pairs.len()];
            let (ry_slot, bs_slot) = circuit.block_params(k);
            ops.push(Op::Rot {
                kind: RotKind::Ry,
                wires: vec![a],
                slot: ry_slot,
            });
            if let Some(p) = dephase {
                ops.push(Op::Dephase { wire: a, p });
            }
            ops.push(Op::Fixed {
                gate: gates::cnot(),
                wires: vec![b, a],
            });
            ops.push(Op::Rot {
                kind: RotKind::CrxNeg,
                wires: vec![a, b],
                slot: bs_slot,
            });
            ops.push(Op::Fixed {
                gate: gates::cnot(),
                wires: vec![b, a],
            });
            ops.push(Op::Fixed {
                gate: gates::swap(),
                wires: vec![a, b],
            });
            if let Some(g) = damp {
                ops.push(Op::Damp { wire: a, gamma: g });
                ops.push(Op::Damp { wire: b, gamma: g });
            }
        }
        Tape {
            num_qubits: circuit.num_qubits(),
            ops,
            mixed: noise.is_some(),
        }
    }

    /// Executes the tape. `shift = Some((op_index, delta))` adds `delta` to
    /// the angle of that single rotation op only.
    pub(crate) fn run(&self, angles: &[f64], shift: Option<(usize, f64)>) -> Result<State> {
        if self.mixed {
            let mut rho = DensityMatrix::zero(self.num_qubits)?;
            self.run_mixed_from(&mut rho, 0, angles, shift);
            Ok(State::Mixed(rho))
        } else {
            let mut psi = StateVector::zero(self.num_qubits)?;
            self.run_pure_from(&mut psi, 0, angles, shift);
            Ok(State::Pure(psi))
        }
    }

    pub(crate) fn op_angle(&self, idx: usize, angles: &[f64], shift: Option<(usize, f64)>) -> f64 {
        let Op::Rot { slot, .. } = &self.ops[idx] else {
            unreachable!("angle requested for a non-rotation op")
        };
        let mut a = angles[*slot];
        if let Some((i, d)) = shift {
            if i == idx {
                a += d;
            }
        }
        a
    }

    pub(crate) fn run_pure_from(
        &self,
        psi: &mut StateVector,
        start: usize,
        angles: &[f64],
        shift: Option<(usize, f64)>,
    ) {
        for idx in start..self.ops.len() {
            self.apply_pure_op(psi, idx, angles, shift);
        }
    }

    pub(crate) fn apply_pure_op(
        &self,
        psi: &mut StateVector,
        idx: usize,
        angles: &[f64],
        shift: Option<(usize, f64)>,
    ) {
        match &self.ops[idx] {
            Op::Rot { kind, wires, .. } => {
                let m = kind.matrix(self.op_angle(idx, angles, shift));
                psi.apply_unchecked(&m, wires);
            }
            Op::Fixed { gate, wires } => psi.apply_unchecked(gate, wires),
            Op::Dephase { .. } | Op::Damp { .. } => {
                unreachable!("channels only appear on mixed tapes")
            }
        }
    }

    pub(crate) fn run_mixed_from(
        &self,
        rho: &mut DensityMatrix,
        start: usize,
        angles: &[f64],
        shift: Option<(usize, f64)>,
    ) {
        for idx in start..self.ops.len() {
            self.apply_mixed_op(rho, idx, angles, shift);
        }
    }

    pub(crate) fn apply_mixed_op(
        &self,
        rho: &mut DensityMatrix,
        idx: usize,
        angles: &[f64],
        shift: Option<(usize, f64)>,
    ) {
        match &self.ops[idx] {
            Op::Rot { kind, wires, .. } => {
                let m = kind.matrix(self.op_angle(idx, angles, shift));
                rho.conjugate_unchecked(&m, wires);
            }
            Op::Fixed { gate, wires } => rho.conjugate_unchecked(gate, wires),
            Op::Dephase { wire, p } => noise::dephase_in_place(rho, *p, *wire),
            Op::Damp { wire, gamma } => noise::damp_in_place(rho, *gamma, *wire),
        }
    }
}

impl FromStr for Activation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Activation::from_name(s, None, None)
    }
}
