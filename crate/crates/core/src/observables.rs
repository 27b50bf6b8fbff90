//! z-basis observables: staggered magnetization, outcome probabilities,
//! single-site marginals and finite-shot sampling.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{seeded, uniform01};
use crate::state::StateVector;

/// `(−1)^k` for 1-based site `k`.
#[inline]
fn stagger_sign(site: usize) -> f64 {
    if site % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

pub fn basis_probabilities(state: &StateVector) -> Vec<f64> {
    state.amplitudes().iter().map(|a| a.norm_sqr()).collect()
}

/// `M_s = (1/m) Σ_k (−1)^k ⟨σz_k⟩` evaluated from an outcome distribution
/// over `m`-bit basis states.
pub fn ms_from_probabilities(probs: &[f64], m: usize) -> f64 {
    debug_assert_eq!(probs.len(), 1 << m);
    let mut total = 0.0;
    for k in 1..=m {
        let mask = 1usize << (m - k);
        let sigma_z: f64 = probs
            .iter()
            .enumerate()
            .map(|(i, p)| if i & mask == 0 { *p } else { -*p })
            .sum();
        total += stagger_sign(k) * sigma_z;
    }
    total / m as f64
}

pub fn staggered_magnetization(state: &StateVector) -> f64 {
    ms_from_probabilities(&basis_probabilities(state), state.num_qubits())
}

/// Probability that `site` reads `outcome` (0 or 1).
pub fn marginal_probability(state: &StateVector, site: usize, outcome: u8) -> Result<f64> {
    let m = state.num_qubits();
    if site == 0 || site > m {
        return Err(Error::SiteOutOfRange { site, num_sites: m });
    }
    if outcome > 1 {
        return Err(Error::InvalidParameter(alloc::format!(
            "measurement outcome must be 0 or 1, got {outcome}"
        )));
    }
    let mask = 1usize << (m - site);
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| usize::from(i & mask != 0) == usize::from(outcome))
        .map(|(_, a)| a.norm_sqr())
        .sum())
}

/// Basis label for index `i` of an `m`-qubit register, site 1 leftmost.
pub fn bitstring(index: usize, m: usize) -> String {
    (1..=m)
        .map(|k| {
            if index & (1 << (m - k)) == 0 {
                '0'
            } else {
                '1'
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotCounts {
    num_qubits: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl ShotCounts {
    /// Builds counts from `(bitstring, count)` pairs; every bitstring must have
    /// the same length.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut width = None;
        let mut shots = 0u64;
        for (bits, n) in pairs {
            if bits.is_empty() {
                return Err(Error::EmptyString);
            }
            if let Some(bad) = bits.chars().find(|c| *c != '0' && *c != '1') {
                return Err(Error::InvalidCharacter(bad));
            }
            match width {
                None => width = Some(bits.len()),
                Some(w) if w != bits.len() => {
                    return Err(Error::DimensionMismatch {
                        left: w,
                        right: bits.len(),
                    })
                }
                _ => {}
            }
            *counts.entry(String::from(bits)).or_insert(0) += n;
            shots += n;
        }
        Ok(Self {
            num_qubits: width.unwrap_or(0),
            shots,
            counts,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }
}

/// Draws `shots` outcomes from `probs` by inverse CDF.
pub fn sample_from_probabilities(
    probs: &[f64],
    m: usize,
    shots: u64,
    seed: u64,
) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be >= 1".into()));
    }
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p.max(0.0);
        cumulative.push(acc);
    }
    let total = acc;
    let last_nonzero = probs.iter().rposition(|p| *p > 0.0).unwrap_or(0);
    let mut rng = seeded(seed);
    let mut tally = alloc::vec![0u64; probs.len()];
    for _ in 0..shots {
        let u = uniform01(&mut rng) * total;
        let idx = cumulative.partition_point(|c| *c <= u).min(last_nonzero);
        tally[idx] += 1;
    }
    let counts = tally
        .iter()
        .enumerate()
        .filter(|(_, n)| **n > 0)
        .map(|(i, n)| (bitstring(i, m), *n))
        .collect();
    Ok(ShotCounts {
        num_qubits: m,
        shots,
        counts,
    })
}

pub fn sample_shots(state: &StateVector, shots: u64, seed: u64) -> Result<ShotCounts> {
    sample_from_probabilities(&basis_probabilities(state), state.num_qubits(), shots, seed)
}

/// Staggered magnetization estimated from measured bitstrings, each shot
/// contributing `(1/m) Σ_k (−1)^k s_k` with `s_k = +1` for `0` and `−1` for `1`.
pub fn ms_from_counts(counts: &ShotCounts) -> Result<f64> {
    if counts.shots == 0 || counts.counts.is_empty() {
        return Err(Error::EmptyCounts);
    }
    let m = counts.num_qubits as f64;
    let mut acc = 0.0;
    for (bits, n) in &counts.counts {
        let per_shot: f64 = bits
            .chars()
            .enumerate()
            .map(|(idx, ch)| {
                let s = if ch == '0' { 1.0 } else { -1.0 };
                stagger_sign(idx + 1) * s
            })
            .sum::<f64>()
            / m;
        acc += *n as f64 * per_shot;
    }
    Ok(acc / counts.shots as f64)
}

/// Time series of `M_s` and full outcome distributions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub ms_values: Vec<f64>,
    pub probabilities: Vec<Vec<f64>>,
}

impl ObservableSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_probabilities(&mut self, t: f64, probs: Vec<f64>, m: usize) {
        self.times.push(t);
        self.ms_values.push(ms_from_probabilities(&probs, m));
        self.probabilities.push(probs);
    }

    pub fn push_state(&mut self, t: f64, state: &StateVector) {
        self.push_probabilities(t, basis_probabilities(state), state.num_qubits());
    }

    pub fn from_states<'a>(states: impl IntoIterator<Item = &'a (f64, StateVector)>) -> Self {
        let mut series = Self::new();
        for (t, s) in states {
            series.push_state(*t, s);
        }
        series
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Equal lengths, rows summing to 1 within `tol`, `|M_s| ≤ 1 + tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.ms_values.len() == self.times.len()
            && self.probabilities.len() == self.times.len()
            && self.ms_values.iter().all(|v| v.abs() <= 1.0 + tol)
            && self
                .probabilities
                .iter()
                .all(|row| (row.iter().sum::<f64>() - 1.0).abs() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::FRAC_1_SQRT_2;
    use num_complex::Complex64;

    fn plus() -> StateVector {
        StateVector::from_amplitudes(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn staggered_magnetization_of_product_states() {
        let ms = |b: &str| staggered_magnetization(&StateVector::from_bitstring(b).unwrap());
        assert_eq!(ms("1010"), 1.0);
        assert_eq!(ms("0101"), -1.0);
        assert_eq!(ms("1111"), 0.0);
        let uniform = StateVector::from_amplitudes(vec![Complex64::new(0.25, 0.0); 16]).unwrap();
        assert!(staggered_magnetization(&uniform).abs() < 1e-15);
    }

    #[test]
    fn probabilities() {
        let p = basis_probabilities(&plus());
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        assert_eq!(
            basis_probabilities(&StateVector::from_bitstring("00").unwrap()),
            vec![1.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn marginals() {
        let amps: Vec<Complex64> = [0.1, 0.3, 0.5, 0.0]
            .iter()
            .map(|&x: &f64| Complex64::new(x, 0.0))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        let amps: Vec<_> = amps.iter().map(|a| a / norm.sqrt()).collect();
        let s = StateVector::from_amplitudes(amps.clone()).unwrap();
        let p = marginal_probability(&s, 1, 0).unwrap();
        assert!((p - (amps[0].norm_sqr() + amps[1].norm_sqr())).abs() < 1e-15);

        let even = StateVector::from_amplitudes(vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        assert!((marginal_probability(&even, 1, 0).unwrap() - 0.5).abs() < 1e-15);
        let s10 = StateVector::from_bitstring("10").unwrap();
        assert_eq!(marginal_probability(&s10, 1, 1).unwrap(), 1.0);
        assert_eq!(
            marginal_probability(&s10, 3, 0),
            Err(Error::SiteOutOfRange {
                site: 3,
                num_sites: 2
            })
        );
    }

    #[test]
    fn shots_on_basis_state() {
        let counts = sample_shots(&StateVector::from_bitstring("00").unwrap(), 500, 1).unwrap();
        assert_eq!(counts.get("00"), 500);
        assert_eq!(counts.counts().len(), 1);
    }

    #[test]
    fn shot_statistics() {
        let counts = sample_shots(&plus(), 8192, 99).unwrap();
        let sigma = (8192.0f64 * 0.25).sqrt();
        for b in ["0", "1"] {
            assert!((counts.get(b) as f64 - 4096.0).abs() < 5.0 * sigma);
        }
        assert_eq!(counts.get("0") + counts.get("1"), 8192);
        assert_eq!(counts, sample_shots(&plus(), 8192, 99).unwrap());
    }

    #[test]
    fn ms_from_measured_counts() {
        let all_neel = ShotCounts::from_pairs([("1010", 100)]).unwrap();
        assert_eq!(ms_from_counts(&all_neel).unwrap(), 1.0);
        let balanced = ShotCounts::from_pairs([("01", 500), ("10", 500)]).unwrap();
        assert_eq!(ms_from_counts(&balanced).unwrap(), 0.0);
        let empty = ShotCounts::from_pairs(core::iter::empty()).unwrap();
        assert_eq!(ms_from_counts(&empty), Err(Error::EmptyCounts));
        assert!(ShotCounts::from_pairs([("01", 1), ("1", 1)]).is_err());
    }

    #[test]
    fn bitstring_labels() {
        assert_eq!(bitstring(2, 2), "10");
        assert_eq!(bitstring(5, 4), "0101");
    }
}
