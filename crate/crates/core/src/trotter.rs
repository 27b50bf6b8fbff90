//! Trotterized evolution circuits.
//!
//! One step is `O · Q_even · Q_odd`, with `Q_k = exp(i g δt (σx σx + σy σy))`
//! on bond `k` and `O = Π_k exp(−i h_k σz_k δt)`. Circuits run left to right,
//! so a step lists the odd-bond layer first, then the even-bond layer, then
//! the field layer.
//!
//! Each bond block `exp(iθ(XX+YY))` is synthesized in one of two ways:
//!
//! * [`SchemeKind::Naive4Cnot`]: `exp(iθXX)` and `exp(iθYY)` separately, each
//!   as a CNOT–Rz–CNOT ladder inside a basis change (4 CNOTs),
//! * [`SchemeKind::Optimized2Cnot`]: the magic-basis route. `XX` and `ZZ` are
//!   simultaneously diagonal in the Bell basis, and conjugating by one CNOT
//!   maps `XX → X⊗I`, `ZZ → I⊗Z`, so `exp(i(λXX + φZZ)) =
//!   CNOT · (Rx(−2λ) ⊗ Rz(−2φ)) · CNOT`. Rotating both qubits by `Rx(−π/2)`
//!   turns `ZZ` into `YY`, giving the 2-CNOT block.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::chain::{Boundary, ChainSpec};
use crate::error::{Error, Result};
use crate::gates::{apply_circuit_in_place, gate_matrix, Circuit, GateKind};
use crate::linalg::{
    expi_real_symmetric, kron, max_abs_diff, pauli_x, pauli_y, pauli_z, real_part, CMatrix,
};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Naive4Cnot,
    Optimized2Cnot,
}

impl SchemeKind {
    pub fn cnots_per_block(&self) -> usize {
        match self {
            SchemeKind::Naive4Cnot => 4,
            SchemeKind::Optimized2Cnot => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterPlan {
    dt: f64,
    n_steps: usize,
    scheme: SchemeKind,
}

impl TrotterPlan {
    /// `n_steps = 0` is accepted and means no evolution.
    pub fn new(dt: f64, n_steps: usize, scheme: SchemeKind) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "step size must be finite and > 0, got {dt}"
            )));
        }
        Ok(Self {
            dt,
            n_steps,
            scheme,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn total_time(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }
}

fn xxyy_generator() -> CMatrix {
    kron(&pauli_x(), &pauli_x()) + kron(&pauli_y(), &pauli_y())
}

/// `exp(iθ(σx⊗σx + σy⊗σy))`, from the eigendecomposition of the generator.
pub fn xxyy_block_matrix(theta: f64) -> CMatrix {
    let gen = real_part(&(xxyy_generator() * Complex64::new(theta, 0.0)));
    expi_real_symmetric(&gen)
}

fn check_pair(sites: (usize, usize), num_qubits: usize) -> Result<()> {
    let (a, b) = sites;
    let in_range = (1..=num_qubits).contains(&a) && (1..=num_qubits).contains(&b);
    let adjacent = a.abs_diff(b) == 1;
    let wrap = num_qubits >= 3 && a.min(b) == 1 && a.max(b) == num_qubits;
    if in_range && (adjacent || wrap) {
        Ok(())
    } else {
        Err(Error::InvalidSitePair(a, b))
    }
}

fn push_zz_ladder(c: &mut Circuit, theta: f64, a: usize, b: usize) -> Result<()> {
    c.push(GateKind::Cnot, &[a, b])?;
    c.push(GateKind::Rz(-2.0 * theta), &[b])?;
    c.push(GateKind::Cnot, &[a, b])?;
    Ok(())
}

fn push_both(c: &mut Circuit, kind: GateKind, a: usize, b: usize) -> Result<()> {
    c.push(kind, &[a])?;
    c.push(kind, &[b])?;
    Ok(())
}

/// 2-CNOT circuit for `exp(iθ(XX+YY))` on `sites` of a `num_qubits` register.
pub fn xxyy_block_circuit(theta: f64, sites: (usize, usize), num_qubits: usize) -> Result<Circuit> {
    check_pair(sites, num_qubits)?;
    let (a, b) = sites;
    let mut c = Circuit::new(num_qubits);
    push_both(&mut c, GateKind::Rx(FRAC_PI_2), a, b)?;
    c.push(GateKind::Cnot, &[a, b])?;
    c.push(GateKind::Rx(-2.0 * theta), &[a])?;
    c.push(GateKind::Rz(-2.0 * theta), &[b])?;
    c.push(GateKind::Cnot, &[a, b])?;
    push_both(&mut c, GateKind::Rx(-FRAC_PI_2), a, b)?;
    Ok(c)
}

/// 4-CNOT circuit: `exp(iθXX)` then `exp(iθYY)`, each a ZZ ladder in a
/// rotated basis (`H` for XX, `Rx(π/2)` for YY).
pub fn xxyy_block_circuit_naive(
    theta: f64,
    sites: (usize, usize),
    num_qubits: usize,
) -> Result<Circuit> {
    check_pair(sites, num_qubits)?;
    let (a, b) = sites;
    let mut c = Circuit::new(num_qubits);
    push_both(&mut c, GateKind::Hadamard, a, b)?;
    push_zz_ladder(&mut c, theta, a, b)?;
    push_both(&mut c, GateKind::Hadamard, a, b)?;
    push_both(&mut c, GateKind::Rx(FRAC_PI_2), a, b)?;
    push_zz_ladder(&mut c, theta, a, b)?;
    push_both(&mut c, GateKind::Rx(-FRAC_PI_2), a, b)?;
    Ok(c)
}

fn block_circuit(
    scheme: SchemeKind,
    theta: f64,
    sites: (usize, usize),
    m: usize,
) -> Result<Circuit> {
    match scheme {
        SchemeKind::Naive4Cnot => xxyy_block_circuit_naive(theta, sites, m),
        SchemeKind::Optimized2Cnot => xxyy_block_circuit(theta, sites, m),
    }
}

/// `Rz(2 h_k δt)` on every site, i.e. `Π_k exp(−i h_k σz_k δt)`.
pub fn field_layer(fields: &[f64], dt: f64) -> Circuit {
    let mut c = Circuit::new(fields.len());
    for (k, h) in fields.iter().enumerate() {
        c.push(GateKind::Rz(2.0 * h * dt), &[k + 1])
            .expect("site index within register");
    }
    c
}

/// Bond layers in circuit order. Odd bonds `(k, k+1)` with odd `k`, then
/// even bonds. A closed chain's wrap bond `(m, 1)` joins the even layer when
/// `m` is even; for odd `m` it touches both layers and gets a third layer.
pub fn bond_layers(chain: &ChainSpec) -> Vec<Vec<(usize, usize)>> {
    let m = chain.num_sites();
    let odd: Vec<_> = (1..m).filter(|k| k % 2 == 1).map(|k| (k, k + 1)).collect();
    let mut even: Vec<_> = (1..m).filter(|k| k % 2 == 0).map(|k| (k, k + 1)).collect();
    let mut layers = Vec::new();
    let mut wrap_layer = Vec::new();
    if chain.boundary() == Boundary::Closed {
        if m.is_multiple_of(2) {
            even.push((m, 1));
        } else {
            wrap_layer.push((m, 1));
        }
    }
    layers.push(odd);
    layers.push(even);
    if !wrap_layer.is_empty() {
        layers.push(wrap_layer);
    }
    layers.retain(|l| !l.is_empty());
    layers
}

pub fn trotter_step_circuit(chain: &ChainSpec, plan: &TrotterPlan) -> Result<Circuit> {
    let m = chain.num_sites();
    let theta = chain.g_xy() * plan.dt;
    let mut step = Circuit::new(m);
    for layer in bond_layers(chain) {
        for bond in layer {
            step.append(&block_circuit(plan.scheme, theta, bond, m)?)?;
        }
    }
    step.append(&field_layer(chain.fields(), plan.dt))?;
    Ok(step)
}

/// Repeats the step circuit `n_steps` times, recording `(j·δt, ψ_j)` for
/// `j = 0, record_every, 2·record_every, …`.
pub fn trotter_evolve(
    chain: &ChainSpec,
    psi0: &StateVector,
    plan: &TrotterPlan,
    record_every: usize,
) -> Result<Vec<(f64, StateVector)>> {
    if record_every == 0 {
        return Err(Error::InvalidParameter("record_every must be >= 1".into()));
    }
    if psi0.num_qubits() != chain.num_sites() {
        return Err(Error::DimensionMismatch {
            left: chain.num_sites(),
            right: psi0.num_qubits(),
        });
    }
    let step = trotter_step_circuit(chain, plan)?;
    let mut psi = psi0.clone();
    let mut out = alloc::vec![(0.0, psi.clone())];
    for j in 1..=plan.n_steps {
        apply_circuit_in_place(&mut psi, &step)?;
        if j % record_every == 0 {
            out.push((j as f64 * plan.dt, psi.clone()));
        }
    }
    Ok(out)
}

/// Largest entrywise gap between `M† N(λ,0,φ) M` and `e^{iφσz} ⊗ e^{iλσz}`,
/// with `N(λ,0,φ) = exp(i(λ σx⊗σx + φ σz⊗σz))`.
pub fn verify_magic_identity(lambda: f64, phi: f64) -> f64 {
    let xx = kron(&pauli_x(), &pauli_x());
    let zz = kron(&pauli_z(), &pauli_z());
    let gen = real_part(&(xx * Complex64::new(lambda, 0.0) + zz * Complex64::new(phi, 0.0)));
    let n = expi_real_symmetric(&gen);
    let m = gate_matrix(GateKind::Magic);
    let lhs = m.adjoint() * n * &m;
    let ez = |a: f64| {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::cis(a),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::cis(-a),
            ],
        )
    };
    let rhs = kron(&ez(phi), &ez(lambda));
    max_abs_diff(&lhs, &rhs)
}

pub fn cnot_count(circuit: &Circuit) -> usize {
    circuit.cnot_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::InitialState;
    use crate::gates::circuit_unitary;
    use crate::linalg::phase_aligned_deviation;
    use crate::observables::staggered_magnetization;
    use alloc::vec;
    use core::f64::consts::PI;

    #[test]
    fn block_matrix_action() {
        assert!(max_abs_diff(&xxyy_block_matrix(0.0), &CMatrix::identity(4, 4)) < 1e-14);
        let u = xxyy_block_matrix(PI / 4.0);
        let i = Complex64::new(0.0, 1.0);
        assert!((u[(2, 1)] - i).norm() < 1e-12);
        assert!((u[(1, 2)] - i).norm() < 1e-12);
        assert!((u[(0, 0)] - 1.0).norm() < 1e-12);
        assert!((u[(3, 3)] - 1.0).norm() < 1e-12);
        let theta = 0.37;
        let u = xxyy_block_matrix(theta);
        assert!((u[(1, 1)] - Complex64::new((2.0 * theta).cos(), 0.0)).norm() < 1e-12);
        assert!((u[(2, 1)] - Complex64::new(0.0, (2.0 * theta).sin())).norm() < 1e-12);
    }

    #[test]
    fn synthesized_blocks_match_oracle() {
        for theta in [0.0, 0.3, 1.1, 2.7, -0.9] {
            let oracle = xxyy_block_matrix(theta);
            let opt = xxyy_block_circuit(theta, (1, 2), 2).unwrap();
            let naive = xxyy_block_circuit_naive(theta, (1, 2), 2).unwrap();
            assert_eq!(cnot_count(&opt), 2);
            assert_eq!(cnot_count(&naive), 4);
            assert!(phase_aligned_deviation(&circuit_unitary(&opt).unwrap(), &oracle) < 1e-10);
            assert!(phase_aligned_deviation(&circuit_unitary(&naive).unwrap(), &oracle) < 1e-10);
        }
    }

    #[test]
    fn site_pairs() {
        assert!(xxyy_block_circuit(0.1, (2, 3), 4).is_ok());
        assert!(xxyy_block_circuit(0.1, (4, 1), 4).is_ok());
        assert_eq!(
            xxyy_block_circuit(0.1, (1, 3), 4),
            Err(Error::InvalidSitePair(1, 3))
        );
        assert_eq!(
            xxyy_block_circuit_naive(0.1, (2, 2), 4),
            Err(Error::InvalidSitePair(2, 2))
        );
        assert_eq!(xxyy_block_circuit(0.1, (2, 1), 2).unwrap().cnot_count(), 2);
        assert!(xxyy_block_circuit(0.1, (4, 5), 4).is_err());
    }

    #[test]
    fn field_layers() {
        let layer = field_layer(&[0.0, 0.0, 0.0], 0.3);
        assert!(max_abs_diff(&circuit_unitary(&layer).unwrap(), &CMatrix::identity(8, 8)) < 1e-15);
        let one = circuit_unitary(&field_layer(&[1.0], PI / 2.0)).unwrap();
        let expect = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, -1.0),
                0.0.into(),
                0.0.into(),
                Complex64::new(0.0, 1.0),
            ],
        );
        assert!(max_abs_diff(&one, &expect) < 1e-15);
        let four = field_layer(&[0.1, 0.2, 0.3, 0.4], 0.5);
        assert_eq!(four.len(), 4);
        assert_eq!(four.cnot_count(), 0);
    }

    #[test]
    fn step_structure() {
        let chain = ChainSpec::clean(4, 1.0, Boundary::Open).unwrap();
        let plan = TrotterPlan::new(0.1, 1, SchemeKind::Optimized2Cnot).unwrap();
        assert_eq!(trotter_step_circuit(&chain, &plan).unwrap().cnot_count(), 6);
        let two = ChainSpec::clean(2, 1.0, Boundary::Open).unwrap();
        for (scheme, expect) in [(SchemeKind::Optimized2Cnot, 2), (SchemeKind::Naive4Cnot, 4)] {
            let plan = TrotterPlan::new(0.1, 1, scheme).unwrap();
            assert_eq!(
                trotter_step_circuit(&two, &plan).unwrap().cnot_count(),
                expect
            );
        }
    }

    #[test]
    fn layering_rules() {
        let open = ChainSpec::clean(5, 1.0, Boundary::Open).unwrap();
        assert_eq!(
            bond_layers(&open),
            vec![vec![(1, 2), (3, 4)], vec![(2, 3), (4, 5)]]
        );
        let even = ChainSpec::clean(4, 1.0, Boundary::Closed).unwrap();
        assert_eq!(
            bond_layers(&even),
            vec![vec![(1, 2), (3, 4)], vec![(2, 3), (4, 1)]]
        );
        let odd = ChainSpec::clean(3, 1.0, Boundary::Closed).unwrap();
        assert_eq!(
            bond_layers(&odd),
            vec![vec![(1, 2)], vec![(2, 3)], vec![(3, 1)]]
        );
        let two = ChainSpec::clean(2, 1.0, Boundary::Open).unwrap();
        assert_eq!(bond_layers(&two), vec![vec![(1, 2)]]);
    }

    #[test]
    fn evolve_records() {
        let chain = ChainSpec::clean(2, 1.0, Boundary::Open).unwrap();
        let psi0 = crate::chain::initial_state(&InitialState::Neel, 2).unwrap();
        let plan = TrotterPlan::new(0.1, 0, SchemeKind::Optimized2Cnot).unwrap();
        let rec = trotter_evolve(&chain, &psi0, &plan, 1).unwrap();
        assert_eq!(rec, vec![(0.0, psi0.clone())]);

        let plan = TrotterPlan::new(0.1, 50, SchemeKind::Optimized2Cnot).unwrap();
        let rec = trotter_evolve(&chain, &psi0, &plan, 1).unwrap();
        assert_eq!(rec.len(), 51);
        for (t, s) in &rec {
            assert!((staggered_magnetization(s) - (4.0 * t).cos()).abs() < 1e-9);
        }
        let sparse = trotter_evolve(&chain, &psi0, &plan, 7).unwrap();
        assert_eq!(sparse.len(), 8);
        assert!((sparse[1].0 - 0.7).abs() < 1e-15);
        assert!(trotter_evolve(&chain, &psi0, &plan, 0).is_err());
        assert!(TrotterPlan::new(0.0, 1, SchemeKind::Naive4Cnot).is_err());
    }

    #[test]
    fn magic_identity() {
        assert!(verify_magic_identity(0.0, 0.0) < 1e-14);
        assert!(verify_magic_identity(0.7, 0.2) < 1e-12);
    }
}
