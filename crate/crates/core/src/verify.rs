//! Numerical identity suite backing the `verify` command.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use crate::chain::{build_hamiltonian, Boundary, ChainSpec};
use crate::gates::{circuit_unitary, gate_matrix, Circuit, GateKind};
use crate::linalg::{
    expi_real_symmetric, kron, max_abs_diff, phase_aligned_deviation, real_part, unitarity_defect,
    CMatrix,
};
use crate::rng::{seeded, uniform01};
use crate::trotter::{
    trotter_step_circuit, verify_magic_identity, xxyy_block_circuit, xxyy_block_circuit_naive,
    xxyy_block_matrix, SchemeKind, TrotterPlan,
};

pub const MAGIC_TOLERANCE: f64 = 1e-12;
pub const SYNTHESIS_TOLERANCE: f64 = 1e-10;
pub const GATE_IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn worst_deviation(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_deviation)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<58} max_dev={:.3e} tol={:.0e}",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.max_deviation,
                c.tolerance
            )?;
        }
        Ok(())
    }
}

/// `θ_j = −π + 2πj/(n−1)`, `j = 0..n`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| -PI + 2.0 * PI * j as f64 / (n - 1) as f64)
        .collect()
}

fn one_qubit(kind: GateKind) -> CMatrix {
    gate_matrix(kind)
}

/// Runs every identity check. `perturbation` is added to the angle fed to
/// the block synthesizers (the oracle keeps the unperturbed angle); a
/// nonzero value serves as a negative control.
pub fn run_identity_suite(perturbation: f64) -> Report {
    let mut checks = Vec::new();

    let mut rng = seeded(0x5eed);
    let magic = (0..100)
        .map(|_| {
            let lambda = PI * (2.0 * uniform01(&mut rng) - 1.0);
            let phi = PI * (2.0 * uniform01(&mut rng) - 1.0);
            verify_magic_identity(lambda, phi)
        })
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "magic basis: M^dag N(l,0,p) M = e^{ip Z} x e^{il Z} (100 pairs)",
        max_deviation: magic,
        tolerance: MAGIC_TOLERANCE,
    });

    let grid = theta_grid(100);
    type Synth = fn(f64, (usize, usize), usize) -> crate::Result<Circuit>;
    let synths: [(&'static str, Synth); 2] = [
        (
            "2-CNOT block vs exp(i t (XX+YY)), 100-point grid",
            xxyy_block_circuit,
        ),
        (
            "4-CNOT block vs exp(i t (XX+YY)), 100-point grid",
            xxyy_block_circuit_naive,
        ),
    ];
    for (name, synth) in synths {
        let dev = grid
            .iter()
            .map(|&theta| {
                let c = synth(theta + perturbation, (1, 2), 2).expect("valid pair");
                let u = circuit_unitary(&c).expect("two qubits");
                phase_aligned_deviation(&u, &xxyy_block_matrix(theta))
            })
            .fold(0.0, f64::max);
        checks.push(Check {
            name,
            max_deviation: dev,
            tolerance: SYNTHESIS_TOLERANCE,
        });
    }

    let count_gap = grid
        .iter()
        .map(|&t| {
            let opt = xxyy_block_circuit(t, (1, 2), 2)
                .expect("valid pair")
                .cnot_count();
            let naive = xxyy_block_circuit_naive(t, (1, 2), 2)
                .expect("valid pair")
                .cnot_count();
            (opt.abs_diff(2) + naive.abs_diff(4)) as f64
        })
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "CNOT count per block: 2 (optimized) and 4 (naive)",
        max_deviation: count_gap,
        tolerance: 0.0,
    });

    let h = one_qubit(GateKind::Hadamard);
    let hh = kron(&h, &h);
    let reversed = &hh * gate_matrix(GateKind::Cnot) * &hh;
    let mut c21 = Circuit::new(2);
    c21.push(GateKind::Cnot, &[2, 1]).expect("valid op");
    let rc_dev = max_abs_diff(&reversed, &gate_matrix(GateKind::Rcnot)).max(max_abs_diff(
        &circuit_unitary(&c21).expect("two qubits"),
        &reversed,
    ));
    checks.push(Check {
        name: "CNOT reversal: RCNOT = (HxH) CNOT (HxH) = CNOT(2,1)",
        max_deviation: rc_dev,
        tolerance: GATE_IDENTITY_TOLERANCE,
    });

    let commute = grid
        .iter()
        .zip(grid.iter().rev())
        .map(|(&phi, &lambda)| {
            let rz = one_qubit(GateKind::Rz(phi));
            let s = one_qubit(GateKind::Phase(lambda));
            max_abs_diff(&(&rz * &s), &(&s * &rz))
        })
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "[S(l), Rz(p)] = 0",
        max_deviation: commute,
        tolerance: GATE_IDENTITY_TOLERANCE,
    });

    let hrzh = grid
        .iter()
        .map(|&phi| {
            max_abs_diff(
                &(&h * one_qubit(GateKind::Rz(phi)) * &h),
                &one_qubit(GateKind::Rx(phi)),
            )
        })
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "H Rz(p) H = Rx(p)",
        max_deviation: hrzh,
        tolerance: GATE_IDENTITY_TOLERANCE,
    });

    let kinds = [
        GateKind::PauliX,
        GateKind::PauliY,
        GateKind::PauliZ,
        GateKind::Hadamard,
        GateKind::Phase(0.7),
        GateKind::Rx(1.9),
        GateKind::Ry(-2.3),
        GateKind::Rz(0.4),
        GateKind::Cnot,
        GateKind::Rcnot,
        GateKind::Magic,
        GateKind::MagicDagger,
    ];
    let unit = kinds
        .iter()
        .map(|k| unitarity_defect(&gate_matrix(*k)))
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "gate unitarity U^dag U = I",
        max_deviation: unit,
        tolerance: GATE_IDENTITY_TOLERANCE,
    });

    let chain = ChainSpec::clean(2, 1.0, Boundary::Open).expect("valid chain");
    let dt = 0.1;
    let generator =
        real_part(&(build_hamiltonian(&chain).expect("small").matrix() * Complex64::new(-dt, 0.0)));
    let exact = expi_real_symmetric(&generator);
    let step_dev = [SchemeKind::Optimized2Cnot, SchemeKind::Naive4Cnot]
        .iter()
        .map(|&scheme| {
            let plan = TrotterPlan::new(dt, 1, scheme).expect("valid plan");
            let step = trotter_step_circuit(&chain, &plan).expect("valid step");
            phase_aligned_deviation(&circuit_unitary(&step).expect("two qubits"), &exact)
        })
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "two-site Trotter step = exp(-iH dt), both schemes",
        max_deviation: step_dev,
        tolerance: SYNTHESIS_TOLERANCE,
    });

    Report { checks }
}
