//! Simulation core for disordered XX spin chains.
//!
//! Everything in this crate is a pure function over small dense objects:
//! state vectors and density matrices of up to a dozen qubits, gate
//! circuits, the chain Hamiltonian and its exact propagator, Trotterized
//! evolution circuits in two CNOT-count schemes, z-basis observables and a
//! depolarizing gate-noise model. The crate is `no_std` and only needs
//! `alloc`; IO, configuration and CSV output live in the `spinchain` crate.
//!
//! Conventions used throughout:
//!
//! * sites are numbered from 1; site 1 is the leftmost ket character and the
//!   most significant bit of a basis index,
//! * bit 0 is spin up (`σz = +1`), bit 1 is spin down (`σz = -1`),
//! * rotations are `R(φ) = exp(-i φ σ / 2)`, `ħ = 1`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chain;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod noise;
pub mod observables;
pub mod rng;
pub mod state;
pub mod trotter;
pub mod verify;

pub use chain::{
    build_hamiltonian, exact_evolve, initial_state, sample_disorder, Boundary, ChainSpec,
    DisorderSpec, ExactPropagator, HamiltonianMatrix, InitialState,
};
pub use error::{Error, Result};
pub use gates::{
    apply_circuit, apply_circuit_density, apply_gate, circuit_unitary, gate_matrix,
    unitaries_equal_up_to_phase, Circuit, GateKind, GateOp,
};
pub use linalg::CMatrix;
pub use noise::{
    apply_depolarizing, deviation_series, noisy_execute, noisy_probability_series, ExecutionMode,
    NoiseModel,
};
pub use observables::{
    basis_probabilities, marginal_probability, ms_from_counts, ms_from_probabilities, sample_shots,
    staggered_magnetization, ObservableSeries, ShotCounts,
};
pub use state::{bloch_coords, inner_product, to_density, BlochVector, DensityMatrix, StateVector};
pub use trotter::{
    cnot_count, field_layer, trotter_evolve, trotter_step_circuit, verify_magic_identity,
    xxyy_block_circuit, xxyy_block_circuit_naive, xxyy_block_matrix, SchemeKind, TrotterPlan,
};
