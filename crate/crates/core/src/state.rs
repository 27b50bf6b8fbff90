//! Pure and mixed register states.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ONE, ZERO};

/// Tolerance on `Σ|a_i|² = 1` accepted by [`StateVector::from_amplitudes`].
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Pure state of `num_qubits` qubits; `amplitudes()[i]` is the amplitude of the
/// basis state whose binary expansion (site 1 = most significant bit) is `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state named by a string over `{0,1}`.
    ///
    /// The leftmost character is site 1; `0` is spin up and `1` spin down.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyString);
        }
        let mut index = 0usize;
        let mut n = 0usize;
        for ch in bits.chars() {
            let bit = match ch {
                '0' => 0,
                '1' => 1,
                other => return Err(Error::InvalidCharacter(other)),
            };
            index = (index << 1) | bit;
            n += 1;
        }
        Ok(Self::basis(n, index))
    }

    /// Basis state `|index⟩` on `num_qubits` qubits.
    ///
    /// Panics if `index >= 2^num_qubits`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let dim = 1usize << num_qubits;
        assert!(
            index < dim,
            "basis index {index} out of range for {num_qubits} qubits"
        );
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { num_qubits, amps }
    }

    /// Superposition with the given amplitudes. The amplitudes are stored as
    /// given; an unnormalized vector is rejected rather than rescaled.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Wraps amplitudes produced by a norm-preserving operation.
    pub(crate) fn from_raw(num_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `self` multiplied by a unit-modulus phase.
    pub fn with_phase(&self, phase: Complex64) -> Self {
        Self::from_raw(
            self.num_qubits,
            self.amps.iter().map(|a| a * phase).collect(),
        )
    }

    /// Euclidean distance to `other` after removing the relative global phase.
    pub fn phase_aligned_distance(&self, other: &Self) -> Result<f64> {
        let overlap = inner_product(other, self)?;
        let phase = if overlap.norm() > 0.0 {
            overlap.conj() / overlap.norm()
        } else {
            ONE
        };
        let d: f64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a * phase - b).norm_sqr())
            .sum();
        Ok(num_traits::Float::sqrt(d))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self::from_raw(self.num_qubits + other.num_qubits, amps)
    }
}

/// Expectation values `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn length(&self) -> f64 {
        num_traits::Float::sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
    }
}

pub fn bloch_coords(state: &StateVector) -> Result<BlochVector> {
    if state.num_qubits != 1 {
        return Err(Error::WrongQubitCount {
            expected: 1,
            actual: state.num_qubits,
        });
    }
    let (a0, a1) = (state.amps[0], state.amps[1]);
    let coherence = a0.conj() * a1;
    Ok(BlochVector {
        x: 2.0 * coherence.re,
        y: 2.0 * coherence.im,
        z: a0.norm_sqr() - a1.norm_sqr(),
    })
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::DimensionMismatch {
            left: a.num_qubits,
            right: b.num_qubits,
        });
    }
    Ok(a.amps
        .iter()
        .zip(b.amps.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

pub fn to_density(state: &StateVector) -> DensityMatrix {
    let d = state.dim();
    let mut data = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            data.push(state.amps[r] * state.amps[c].conj());
        }
    }
    DensityMatrix {
        num_qubits: state.num_qubits,
        data,
    }
}

/// Mixed state stored row-major as a `2^m × 2^m` complex array.
///
/// Row-major storage makes `vec(ρ)` a `2m`-qubit amplitude array whose upper
/// `m` bits are the row (ket) register and lower `m` bits the column (bra)
/// register, which lets the gate kernels act on density matrices directly.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity within `1e-9`.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let d = m.nrows();
        if m.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: m.ncols(),
            });
        }
        if d < 2 || !d.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(d));
        }
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                data.push(m[(r, c)]);
            }
        }
        let rho = Self {
            num_qubits: d.trailing_zeros() as usize,
            data,
        };
        if !rho.is_physical(1e-9) {
            return Err(Error::InvalidParameter(
                "matrix is not a valid density matrix".into(),
            ));
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(num_qubits: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), 1 << (2 * num_qubits));
        Self { num_qubits, data }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let d = 1usize << num_qubits;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            data[i * d + i] = Complex64::new(1.0 / d as f64, 0.0);
        }
        Self { num_qubits, data }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub(crate) fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i]).sum()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for r in 0..d {
            for c in 0..d {
                // tr(ρρ) = Σ ρ_rc ρ_cr = Σ |ρ_rc|² for Hermitian ρ
                acc += (self.data[r * d + c] * self.data[c * d + r]).re;
            }
        }
        acc
    }

    /// Diagonal of ρ, i.e. computational-basis outcome probabilities.
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).collect()
    }

    pub fn to_matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_row_slice(d, d, &self.data)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                let dev = (self.data[r * d + c] - self.data[c * d + r].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = self.to_matrix();
        // symmetrize so the solver sees an exactly Hermitian input
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    /// Hermitian, unit trace and positive semidefinite, each within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let tr = self.trace();
        self.hermiticity_defect() <= tol
            && (tr.re - 1.0).abs() <= tol
            && tr.im.abs() <= tol
            && self.eigenvalues().iter().all(|&e| e >= -tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }

    #[test]
    fn bitstrings_follow_msb_first_ordering() {
        let s = StateVector::from_bitstring("00").unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
        let s = StateVector::from_bitstring("1").unwrap();
        assert_eq!(s.amplitudes(), &[ZERO, ONE]);
        let s = StateVector::from_bitstring("10").unwrap();
        assert_eq!(s.amplitudes(), &[ZERO, ZERO, ONE, ZERO]);
        assert_eq!(s.num_qubits(), 2);
    }

    #[test]
    fn bitstring_errors() {
        assert_eq!(StateVector::from_bitstring(""), Err(Error::EmptyString));
        assert_eq!(
            StateVector::from_bitstring("01x"),
            Err(Error::InvalidCharacter('x'))
        );
    }

    #[test]
    fn amplitude_validation() {
        assert!(StateVector::from_amplitudes(vec![ONE, ZERO, ZERO, ZERO]).is_ok());
        assert_eq!(plus().num_qubits(), 1);
        assert_eq!(
            StateVector::from_amplitudes(vec![ONE, ZERO, ZERO]),
            Err(Error::NotPowerOfTwo(3))
        );
        assert_eq!(
            StateVector::from_amplitudes(vec![ONE]),
            Err(Error::NotPowerOfTwo(1))
        );
        // the two-qubit example state with amplitudes 1,2,3,1 over sqrt(7)
        let s7 = 7f64.sqrt();
        let err = StateVector::from_amplitudes(vec![
            c(1.0 / s7, 0.0),
            c(2.0 / s7, 0.0),
            c(3.0 / s7, 0.0),
            c(1.0 / s7, 0.0),
        ])
        .unwrap_err();
        match err {
            Error::NotNormalized { norm_sqr } => assert!((norm_sqr - 15.0 / 7.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bloch_vectors_of_named_states() {
        let zero = StateVector::from_bitstring("0").unwrap();
        assert_eq!(
            bloch_coords(&zero).unwrap(),
            BlochVector {
                x: 0.0,
                y: 0.0,
                z: 1.0
            }
        );

        let a = bloch_coords(&plus()).unwrap();
        assert!((a.x - 1.0).abs() < 1e-12 && a.y.abs() < 1e-12 && a.z.abs() < 1e-12);

        let cstate =
            StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)])
                .unwrap();
        let b = bloch_coords(&cstate).unwrap();
        assert!(b.x.abs() < 1e-12 && (b.y - 1.0).abs() < 1e-12 && b.z.abs() < 1e-12);

        let two = StateVector::from_bitstring("01").unwrap();
        assert_eq!(
            bloch_coords(&two),
            Err(Error::WrongQubitCount {
                expected: 1,
                actual: 2
            })
        );
    }

    #[test]
    fn inner_products() {
        let s00 = StateVector::from_bitstring("00").unwrap();
        assert_eq!(inner_product(&s00, &s00).unwrap(), ONE);
        let s0 = StateVector::from_bitstring("0").unwrap();
        let s1 = StateVector::from_bitstring("1").unwrap();
        assert_eq!(inner_product(&s0, &s1).unwrap(), ZERO);
        let minus =
            StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)])
                .unwrap();
        assert!(inner_product(&plus(), &minus).unwrap().norm() < 1e-15);
        assert!(matches!(
            inner_product(&s0, &s00),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_of_pure_states() {
        let rho0 = to_density(&StateVector::from_bitstring("0").unwrap());
        assert_eq!(
            rho0.to_matrix(),
            CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO])
        );
        let rho1 = to_density(&StateVector::from_bitstring("1").unwrap());
        assert_eq!(
            rho1.to_matrix(),
            CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE])
        );
        let rho_a = to_density(&plus());
        for r in 0..2 {
            for col in 0..2 {
                assert!((rho_a.get(r, col) - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
        assert!((rho_a.purity() - 1.0).abs() < 1e-12);
        assert!(rho_a.is_physical(1e-9));
    }

    #[test]
    fn maximally_mixed_is_physical() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(rho.is_physical(1e-12));
        assert!((rho.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn from_matrix_rejects_non_density() {
        let bad = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]);
        assert!(DensityMatrix::from_matrix(&bad).is_err());
        let good = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), ZERO, ZERO, c(0.5, 0.0)]);
        assert!(DensityMatrix::from_matrix(&good).is_ok());
    }
}
