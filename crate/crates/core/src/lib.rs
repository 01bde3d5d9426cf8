//! Entanglement engineering with nonlinear quantum neural networks.
//!
//! Circuits are built from two-qubit PQM blocks placed along a [`Topology`].
//! Block angles pass through an [`Activation`] before use, the cost is
//! `1 - MW` of the output state, and [`train()`] minimizes it with Adam.
//! Noise ([`NoiseModel`]) switches simulation to density matrices.

pub mod activation;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod linalg;
pub mod measures;
pub mod network;
pub mod noise;
pub mod qstate;
pub mod train;

pub use activation::{activate, activate_derivative, Activation};
pub use error::{Error, Result};
pub use gates::{apply_block, PqmBlockSpec};
pub use measures::{meyer_wallach, negativity, negativity_upper_bound, MeasureReport};
pub use network::{forward, Circuit, Topology};
pub use noise::{amplitude_damp, dephase, NoiseModel};
pub use qstate::{Bipartition, DensityMatrix, QuantumState, State, StateVector};
pub use train::{gradient, loss, multi_seed_stats, train, GradientMode, TrainConfig, TrainingTrace};
