//! Gate noise: a symmetric depolarizing channel after every gate, executed
//! either exactly on density matrices or by Pauli-error trajectories.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{
    apply_circuit_in_place, apply_gate_density_in_place, apply_gate_in_place, Circuit, GateKind,
    GateOp, MAX_DENSITY_QUBITS,
};
use crate::observables::{basis_probabilities, ObservableSeries};
use crate::rng::{below, derive_seed, seeded, uniform01, Rng};
use crate::state::{to_density, DensityMatrix, StateVector};

/// Largest register for trajectory sampling.
pub const MAX_TRAJECTORY_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// Depolarizing probability after each two-qubit gate.
    pub p_two_qubit: f64,
    /// Depolarizing probability after each single-qubit gate.
    pub p_single_qubit: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            p_two_qubit: 0.01,
            p_single_qubit: 0.0,
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::BadProbability(p))
    }
}

impl NoiseModel {
    pub fn new(p_two_qubit: f64, p_single_qubit: f64) -> Result<Self> {
        check_probability(p_two_qubit)?;
        check_probability(p_single_qubit)?;
        Ok(Self {
            p_two_qubit,
            p_single_qubit,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            p_two_qubit: 0.0,
            p_single_qubit: 0.0,
        }
    }

    pub fn probability_for(&self, op: &GateOp) -> f64 {
        if op.kind.arity() == 2 {
            self.p_two_qubit
        } else {
            self.p_single_qubit
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutionMode {
    /// Noiseless statevector evolution.
    Ideal,
    /// Exact channel evolution on the density matrix.
    DensityMatrix,
    /// Average over `n_traj` statevector runs with random Pauli insertions.
    Trajectories { n_traj: usize, seed: u64 },
}

const PAULIS: [Option<GateKind>; 4] = [
    None,
    Some(GateKind::PauliX),
    Some(GateKind::PauliY),
    Some(GateKind::PauliZ),
];

/// Pauli string number `index` (base-4 digits, first site most significant;
/// 0 = I, 1 = X, 2 = Y, 3 = Z) as gate ops on `sites`.
fn pauli_ops(index: usize, sites: &[usize]) -> impl Iterator<Item = GateOp> + '_ {
    let k = sites.len();
    sites.iter().enumerate().filter_map(move |(pos, &site)| {
        let digit = (index >> (2 * (k - 1 - pos))) & 3;
        PAULIS[digit].map(|kind| GateOp::single(kind, site).expect("single-qubit op"))
    })
}

/// `ρ → (1−p)ρ + p/(4^k−1) Σ_{P≠I} PρP†` over the Pauli strings on `sites`.
pub fn apply_depolarizing(rho: &DensityMatrix, sites: &[usize], p: f64) -> Result<DensityMatrix> {
    let m = rho.num_qubits();
    if m > MAX_DENSITY_QUBITS {
        return Err(Error::TooManyQubits {
            what: "depolarizing channel",
            max: MAX_DENSITY_QUBITS,
            actual: m,
        });
    }
    check_probability(p)?;
    if sites.is_empty() || sites.len() > 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "depolarizing acts on 1 or 2 sites, got {}",
            sites.len()
        )));
    }
    if sites.len() == 2 && sites[0] == sites[1] {
        return Err(Error::DuplicateTarget);
    }
    for &s in sites {
        if s == 0 || s > m {
            return Err(Error::TargetOutOfRange {
                index: s,
                num_qubits: m,
            });
        }
    }
    let mut out = rho.clone();
    depolarize_in_place(&mut out, sites, p)?;
    Ok(out)
}

fn depolarize_in_place(rho: &mut DensityMatrix, sites: &[usize], p: f64) -> Result<()> {
    if p == 0.0 {
        return Ok(());
    }
    let n_strings = 1usize << (2 * sites.len());
    let weight = p / (n_strings - 1) as f64;
    let mut acc: Vec<Complex64> = rho.data().iter().map(|z| z * (1.0 - p)).collect();
    for index in 1..n_strings {
        let mut term = rho.clone();
        for op in pauli_ops(index, sites) {
            apply_gate_density_in_place(&mut term, &op)?;
        }
        for (a, t) in acc.iter_mut().zip(term.data()) {
            *a += t * weight;
        }
    }
    rho.data_mut().copy_from_slice(&acc);
    Ok(())
}

fn evolve_density_noisy(
    rho: &mut DensityMatrix,
    circuit: &Circuit,
    noise: &NoiseModel,
) -> Result<()> {
    for op in circuit.ops() {
        apply_gate_density_in_place(rho, op)?;
        let p = noise.probability_for(op);
        if p > 0.0 {
            depolarize_in_place(rho, op.targets(), p)?;
        }
    }
    Ok(())
}

fn evolve_trajectory(
    psi: &mut StateVector,
    circuit: &Circuit,
    noise: &NoiseModel,
    rng: &mut Rng,
) -> Result<()> {
    for op in circuit.ops() {
        apply_gate_in_place(psi, op)?;
        let p = noise.probability_for(op);
        if p > 0.0 && uniform01(rng) < p {
            let n_strings = 1u64 << (2 * op.targets().len());
            let index = 1 + below(rng, n_strings - 1) as usize;
            for err in pauli_ops(index, op.targets()) {
                apply_gate_in_place(psi, &err)?;
            }
        }
    }
    Ok(())
}

fn check_mode_size(mode: &ExecutionMode, m: usize) -> Result<()> {
    match mode {
        ExecutionMode::Ideal => Ok(()),
        ExecutionMode::DensityMatrix if m > MAX_DENSITY_QUBITS => Err(Error::TooManyQubits {
            what: "density-matrix mode",
            max: MAX_DENSITY_QUBITS,
            actual: m,
        }),
        ExecutionMode::Trajectories { .. } if m > MAX_TRAJECTORY_QUBITS => {
            Err(Error::TooManyQubits {
                what: "trajectory mode",
                max: MAX_TRAJECTORY_QUBITS,
                actual: m,
            })
        }
        ExecutionMode::Trajectories { n_traj: 0, .. } => Err(Error::InvalidParameter(
            "trajectory count must be >= 1".into(),
        )),
        _ => Ok(()),
    }
}

fn check_register(circuit: &Circuit, psi0: &StateVector) -> Result<()> {
    if circuit.num_qubits() != psi0.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: circuit.num_qubits(),
            right: psi0.num_qubits(),
        });
    }
    Ok(())
}

/// Runs `circuit` on `psi0` under `noise` and returns the final state as a
/// density matrix. Trajectory `i` draws from `ChaCha8(derive_seed(seed, i))`
/// and the average is accumulated in index order.
pub fn noisy_execute(
    circuit: &Circuit,
    psi0: &StateVector,
    noise: &NoiseModel,
    mode: ExecutionMode,
) -> Result<DensityMatrix> {
    let m = psi0.num_qubits();
    check_register(circuit, psi0)?;
    check_mode_size(&mode, m)?;
    match mode {
        ExecutionMode::Ideal => {
            let mut psi = psi0.clone();
            apply_circuit_in_place(&mut psi, circuit)?;
            Ok(to_density(&psi))
        }
        ExecutionMode::DensityMatrix => {
            let mut rho = to_density(psi0);
            evolve_density_noisy(&mut rho, circuit, noise)?;
            Ok(rho)
        }
        ExecutionMode::Trajectories { n_traj, seed } => {
            let d = psi0.dim();
            let mut acc = vec![Complex64::new(0.0, 0.0); d * d];
            let w = 1.0 / n_traj as f64;
            for i in 0..n_traj {
                let mut rng = seeded(derive_seed(seed, i as u64));
                let mut psi = psi0.clone();
                evolve_trajectory(&mut psi, circuit, noise, &mut rng)?;
                let a = psi.amplitudes();
                for r in 0..d {
                    for c in 0..d {
                        acc[r * d + c] += a[r] * a[c].conj() * w;
                    }
                }
            }
            Ok(DensityMatrix::from_raw(m, acc))
        }
    }
}

/// Outcome distributions after `0, 1, …, n_steps` repetitions of `step`.
///
/// Cheaper than repeated [`noisy_execute`] calls: density mode carries one
/// density matrix through all steps and trajectory mode runs each
/// trajectory through all steps once.
pub fn noisy_probability_series(
    step: &Circuit,
    psi0: &StateVector,
    n_steps: usize,
    noise: &NoiseModel,
    mode: ExecutionMode,
) -> Result<Vec<Vec<f64>>> {
    let m = psi0.num_qubits();
    check_register(step, psi0)?;
    check_mode_size(&mode, m)?;
    let mut rows = Vec::with_capacity(n_steps + 1);
    match mode {
        ExecutionMode::Ideal => {
            let mut psi = psi0.clone();
            rows.push(basis_probabilities(&psi));
            for _ in 0..n_steps {
                apply_circuit_in_place(&mut psi, step)?;
                rows.push(basis_probabilities(&psi));
            }
        }
        ExecutionMode::DensityMatrix => {
            let mut rho = to_density(psi0);
            rows.push(rho.diagonal_probabilities());
            for _ in 0..n_steps {
                evolve_density_noisy(&mut rho, step, noise)?;
                rows.push(rho.diagonal_probabilities());
            }
        }
        ExecutionMode::Trajectories { n_traj, seed } => {
            let d = psi0.dim();
            rows = vec![vec![0.0; d]; n_steps + 1];
            let w = 1.0 / n_traj as f64;
            for i in 0..n_traj {
                let mut rng = seeded(derive_seed(seed, i as u64));
                let mut psi = psi0.clone();
                for (j, row) in rows.iter_mut().enumerate() {
                    if j > 0 {
                        evolve_trajectory(&mut psi, step, noise, &mut rng)?;
                    }
                    for (acc, a) in row.iter_mut().zip(psi.amplitudes()) {
                        *acc += a.norm_sqr() * w;
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// `|M_s^ideal(t_j) − M_s^noisy(t_j)|` per step.
pub fn deviation_series(ideal: &ObservableSeries, noisy: &ObservableSeries) -> Result<Vec<f64>> {
    if ideal.times.len() != noisy.times.len()
        || ideal
            .times
            .iter()
            .zip(&noisy.times)
            .any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0))
    {
        return Err(Error::GridMismatch);
    }
    Ok(ideal
        .ms_values
        .iter()
        .zip(&noisy.ms_values)
        .map(|(a, b)| (a - b).abs())
        .collect())
}
