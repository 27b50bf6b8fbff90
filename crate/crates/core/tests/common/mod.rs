//! Test-only oracles, independent of the library's fast paths.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use spinchain_core::{CMatrix, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}
pub fn y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}
pub fn z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// `op` placed on the given 1-based sites of an `m`-site register via
/// Kronecker products, identity elsewhere.
pub fn site_op(m: usize, placements: &[(usize, CMatrix)]) -> CMatrix {
    let mut acc = CMatrix::identity(1, 1);
    for k in 1..=m {
        let factor = placements
            .iter()
            .find(|(s, _)| *s == k)
            .map(|(_, op)| op.clone())
            .unwrap_or_else(|| CMatrix::identity(2, 2));
        acc = acc.kronecker(&factor);
    }
    acc
}

/// Chain Hamiltonian assembled from Pauli Kronecker products.
pub fn kron_hamiltonian(g: f64, fields: &[f64], closed: bool) -> CMatrix {
    let m = fields.len();
    let d = 1 << m;
    let mut h = CMatrix::zeros(d, d);
    let mut bonds: Vec<(usize, usize)> = (1..m).map(|k| (k, k + 1)).collect();
    if closed {
        bonds.push((m, 1));
    }
    for (a, b) in bonds {
        let xx = site_op(m, &[(a, x()), (b, x())]);
        let yy = site_op(m, &[(a, y()), (b, y())]);
        h -= (xx + yy) * c(g, 0.0);
    }
    for (k, hk) in fields.iter().enumerate() {
        h += site_op(m, &[(k + 1, z())]) * c(*hk, 0.0);
    }
    h
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let norm: f64 = a.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let scaled = a * c(scale, 0.0);
    let n = a.nrows();
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn max_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
}

/// Max entrywise deviation after removing the global phase of `tr(a† b)`.
pub fn phase_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    let ov: Complex64 = a.iter().zip(b.iter()).map(|(p, q)| p.conj() * q).sum();
    let ph = ov / ov.norm();
    a.iter()
        .zip(b.iter())
        .map(|(p, q)| (p * ph - q).norm())
        .fold(0.0, f64::max)
}

pub fn mat_vec(u: &CMatrix, s: &StateVector) -> Vec<Complex64> {
    let v = DMatrix::from_column_slice(s.dim(), 1, s.amplitudes());
    (u * v).iter().copied().collect()
}

pub fn random_state(m: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut amps: Vec<Complex64> = (0..1 << m)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= n;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

pub fn random_fields(m: usize, bound: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..m).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Total probability on basis states with `weight` ones.
pub fn sector_probability(s: &StateVector, weight: u32) -> f64 {
    s.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i.count_ones() == weight)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}
