//! The disordered XX chain
//! `H = −g Σ_bonds (σx_a σx_b + σy_a σy_b) + Σ_k h_k σz_k`,
//! its exact propagator and the canonical initial states.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{real_part, CMatrix, ZERO};
use crate::rng::{seeded, uniform01};
use crate::state::StateVector;

/// Dense Hamiltonian construction limit.
pub const MAX_DENSE_SITES: usize = 12;
/// Exact-evolution limit.
pub const MAX_EXACT_SITES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    /// Open chain plus the wrap-around bond `(m, 1)`.
    Closed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    num_sites: usize,
    g_xy: f64,
    fields: Vec<f64>,
    boundary: Boundary,
}

impl ChainSpec {
    pub fn new(g_xy: f64, fields: Vec<f64>, boundary: Boundary) -> Result<Self> {
        let m = fields.len();
        if m < 2 {
            return Err(Error::TooFewSites(m));
        }
        if boundary == Boundary::Closed && m < 3 {
            return Err(Error::ClosedChainTooSmall(m));
        }
        if !g_xy.is_finite() {
            return Err(Error::InvalidParameter("g_xy must be finite".into()));
        }
        if fields.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidParameter("fields must be finite".into()));
        }
        Ok(Self {
            num_sites: m,
            g_xy,
            fields,
            boundary,
        })
    }

    /// Chain with all fields zero.
    pub fn clean(num_sites: usize, g_xy: f64, boundary: Boundary) -> Result<Self> {
        Self::new(g_xy, alloc::vec![0.0; num_sites], boundary)
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn g_xy(&self) -> f64 {
        self.g_xy
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Bonds `(k, k+1)` for `k = 1..m−1`, then `(m, 1)` for a closed chain.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let m = self.num_sites;
        let mut bonds: Vec<_> = (1..m).map(|k| (k, k + 1)).collect();
        if self.boundary == Boundary::Closed {
            bonds.push((m, 1));
        }
        bonds
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderSpec {
    bound: f64,
    seed: u64,
}

impl DisorderSpec {
    pub fn new(bound: f64, seed: u64) -> Result<Self> {
        if !(bound >= 0.0 && bound.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "disorder bound must be finite and >= 0, got {bound}"
            )));
        }
        Ok(Self { bound, seed })
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// `m` independent fields uniform on `[−h, h]`.
pub fn sample_disorder(spec: &DisorderSpec, m: usize) -> Vec<f64> {
    let mut rng = seeded(spec.seed);
    let h = spec.bound;
    (0..m).map(|_| -h + 2.0 * h * uniform01(&mut rng)).collect()
}

/// Dense Hamiltonian in the computational basis. All elements are real for
/// this model; the complex storage matches the gate library's matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    num_sites: usize,
    matrix: CMatrix,
}

impl HamiltonianMatrix {
    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.num_sites {
            return Err(Error::DimensionMismatch {
                left: self.num_sites,
                right: state.num_qubits(),
            });
        }
        let a = state.amplitudes();
        let mut acc = ZERO;
        for (r, ar) in a.iter().enumerate() {
            let row: Complex64 = a
                .iter()
                .enumerate()
                .map(|(c, ac)| self.matrix[(r, c)] * ac)
                .sum();
            acc += ar.conj() * row;
        }
        Ok(acc.re)
    }
}

pub fn build_hamiltonian(chain: &ChainSpec) -> Result<HamiltonianMatrix> {
    let m = chain.num_sites;
    if m > MAX_DENSE_SITES {
        return Err(Error::TooManySites(m));
    }
    let d = 1usize << m;
    let mask = |site: usize| 1usize << (m - site);
    let bonds = chain.bonds();
    let mut h = CMatrix::zeros(d, d);
    for i in 0..d {
        let diag: f64 = (1..=m)
            .map(|k| {
                let up = i & mask(k) == 0;
                if up {
                    chain.fields[k - 1]
                } else {
                    -chain.fields[k - 1]
                }
            })
            .sum();
        h[(i, i)] += Complex64::new(diag, 0.0);
        // σxσx + σyσy = 2(|01⟩⟨10| + |10⟩⟨01|) on the bond; zero on aligned spins.
        for &(a, b) in &bonds {
            let (ma, mb) = (mask(a), mask(b));
            if (i & ma == 0) != (i & mb == 0) {
                let j = i ^ ma ^ mb;
                h[(j, i)] += Complex64::new(-2.0 * chain.g_xy, 0.0);
            }
        }
    }
    Ok(HamiltonianMatrix {
        num_sites: m,
        matrix: h,
    })
}

/// Eigendecomposition of `H`, reusable across many evolution times.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    num_sites: usize,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl ExactPropagator {
    pub fn new(chain: &ChainSpec) -> Result<Self> {
        let m = chain.num_sites;
        if m > MAX_EXACT_SITES {
            return Err(Error::TooManySites(m));
        }
        let h = build_hamiltonian(chain)?;
        Ok(Self::from_hamiltonian(&h))
    }

    pub fn from_hamiltonian(h: &HamiltonianMatrix) -> Self {
        let eig = SymmetricEigen::new(real_part(&h.matrix));
        Self {
            num_sites: h.num_sites,
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `e^{−iHt}|ψ0⟩`.
    pub fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        if psi0.num_qubits() != self.num_sites {
            return Err(Error::DimensionMismatch {
                left: self.num_sites,
                right: psi0.num_qubits(),
            });
        }
        if !t.is_finite() {
            return Err(Error::InvalidParameter(
                "evolution time must be finite".into(),
            ));
        }
        if t == 0.0 {
            return Ok(psi0.clone());
        }
        let v = &self.vectors;
        let a = psi0.amplitudes();
        let d = a.len();
        let coeffs: Vec<Complex64> = (0..d)
            .map(|k| {
                let proj: Complex64 = (0..d).map(|r| a[r] * v[(r, k)]).sum();
                proj * Complex64::cis(-self.energies[k] * t)
            })
            .collect();
        let out = (0..d)
            .map(|r| (0..d).map(|k| coeffs[k] * v[(r, k)]).sum())
            .collect();
        Ok(StateVector::from_raw(self.num_sites, out))
    }
}

pub fn exact_evolve(chain: &ChainSpec, psi0: &StateVector, t: f64) -> Result<StateVector> {
    ExactPropagator::new(chain)?.evolve(psi0, t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialState {
    /// `↓↑↓↑…`, site 1 down.
    Neel,
    /// First half of the sites down, second half up.
    DomainWall,
    Custom(String),
}

pub fn initial_state(kind: &InitialState, m: usize) -> Result<StateVector> {
    if m == 0 {
        return Err(Error::EmptyString);
    }
    match kind {
        InitialState::Neel => {
            let bits: String = (1..=m)
                .map(|k| if k % 2 == 1 { '1' } else { '0' })
                .collect();
            StateVector::from_bitstring(&bits)
        }
        InitialState::DomainWall => {
            if !m.is_multiple_of(2) {
                return Err(Error::OddSitesForDomainWall(m));
            }
            let bits: String = (0..m).map(|k| if k < m / 2 { '1' } else { '0' }).collect();
            StateVector::from_bitstring(&bits)
        }
        InitialState::Custom(bits) => {
            let s = StateVector::from_bitstring(bits)?;
            if s.num_qubits() != m {
                return Err(Error::WrongQubitCount {
                    expected: m,
                    actual: s.num_qubits(),
                });
            }
            Ok(s)
        }
    }
}
