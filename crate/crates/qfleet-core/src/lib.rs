//! Hardware selection, compilation, noisy simulation and multi-hardware
//! training for small quantum classifiers.
//!
//! The crate is organized around the stages of the workload pipeline:
//!
//! - [`calibration`]: hardware snapshots, qubit configurations, coupling maps
//! - [`scoring`]: per-configuration property scores and ranking
//! - [`circuits`]: circuit IR, data embeddings, strongly entangling layers
//! - [`transpile`]: basis decomposition, SWAP routing, depth
//! - [`sim`]: density-matrix simulation with calibration-derived noise
//! - [`train`]: loss, parameter-shift gradients, Adam, schedules, inference
//! - [`queue`]: queue traces, wait-time arithmetic, speedups
//! - [`datasets`]: Iris and Digits loading, scaling, stratified splits
//! - [`fixtures`]: seeded generators for the calibration and trace fixtures

pub mod calibration;
pub mod circuits;
pub mod datasets;
pub mod error;
pub mod fixtures;
pub mod queue;
pub mod rng;
pub mod scoring;
pub mod sim;
pub mod train;
pub mod transpile;

pub use calibration::{
    induced_coupling, validate_configuration, BasisSet, Configuration, CouplingEdge, CouplingMap,
    HardwareSnapshot, QubitCalibration,
};
pub use circuits::{
    amplitude_embedding, angle_embedding, build_qnn, sel_layer, CircuitIR, Embedding, GateKind,
    GateOp, ModelSpec, ParameterSet,
};
pub use error::{Error, Result};
pub use sim::{expectation_z, run, run_statevector, sample_counts, DensityState, NoiseModel, Statevector};
