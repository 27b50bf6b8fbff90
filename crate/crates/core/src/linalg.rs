//! Small dense-matrix helpers shared by the gate library, the chain model and
//! the verification suite.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `exp(i·A)` for a real symmetric `A`, through its eigendecomposition.
///
/// Every generator in this crate (`XX+YY`, `XX+ZZ`, the chain Hamiltonian)
/// has real matrix elements in the computational basis, so a real symmetric
/// eigensolver is enough.
pub fn expi_real_symmetric(a: &DMatrix<f64>) -> CMatrix {
    let eig = SymmetricEigen::new(a.clone());
    let n = a.nrows();
    let v = &eig.eigenvectors;
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let phase = Complex64::cis(eig.eigenvalues[k]);
        for r in 0..n {
            let vr = v[(r, k)];
            if vr == 0.0 {
                continue;
            }
            for col in 0..n {
                out[(r, col)] += phase * (vr * v[(col, k)]);
            }
        }
    }
    out
}

/// Real part of a complex matrix whose imaginary parts are known to vanish.
pub fn real_part(a: &CMatrix) -> DMatrix<f64> {
    a.map(|z| z.re)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise deviation between `a` and `b` after removing the best
/// global phase (the phase of `tr(a† b)`).
pub fn phase_aligned_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

/// `max |(U†U - I)_{ij}|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &CMatrix::identity(u.nrows(), u.ncols()))
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    max_abs_diff(a, &a.adjoint()) <= tol
}
