mod common;

use common::*;
use proptest::prelude::*;
use spinchain_core::observables::{bitstring, sample_from_probabilities};
use spinchain_core::*;

/// Random mixed state: convex mixture of a few random pure states.
fn random_density(m: usize, seed: u64) -> DensityMatrix {
    let weights = [0.5, 0.3, 0.2];
    let d = 1 << m;
    let mut acc = CMatrix::zeros(d, d);
    for (i, w) in weights.iter().enumerate() {
        acc += to_density(&random_state(m, seed.wrapping_add(i as u64))).to_matrix() * c(*w, 0.0);
    }
    DensityMatrix::from_matrix(&acc).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn channel_preserves_trace_and_hermiticity(seed in any::<u64>(), p in 0.0..=1.0f64, two in any::<bool>()) {
        let rho = random_density(3, seed);
        let sites: &[usize] = if two { &[3, 1] } else { &[2] };
        let out = apply_depolarizing(&rho, sites, p).unwrap();
        prop_assert!((out.trace() - rho.trace()).norm() < 1e-12);
        prop_assert!(out.hermiticity_defect() < 1e-12);
        prop_assert!(out.eigenvalues().iter().all(|e| *e > -1e-9));
    }

    #[test]
    fn marginals_sum_to_one(m in 1usize..=5, seed in any::<u64>()) {
        let s = random_state(m, seed);
        for site in 1..=m {
            let total = marginal_probability(&s, site, 0).unwrap() + marginal_probability(&s, site, 1).unwrap();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn staggered_magnetization_is_bounded(m in 1usize..=6, seed in any::<u64>()) {
        prop_assert!(staggered_magnetization(&random_state(m, seed)).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn counts_and_amplitudes_agree_in_the_exact_limit(m in 1usize..=5, seed in any::<u64>()) {
        // counts proportional to probabilities: scale by 2^40 and round, then
        // compare the two code paths on the resulting exact distribution
        let s = random_state(m, seed);
        let scale = (1u64 << 40) as f64;
        let probs = basis_probabilities(&s);
        let labels: Vec<String> = (0..probs.len()).map(|i| bitstring(i, m)).collect();
        let ints: Vec<u64> = probs.iter().map(|p| (p * scale).round() as u64).collect();
        let counts = ShotCounts::from_pairs(labels.iter().map(String::as_str).zip(ints.iter().copied())).unwrap();
        let total: u64 = ints.iter().sum();
        let quantized: Vec<f64> = ints.iter().map(|n| *n as f64 / total as f64).collect();
        let from_counts = ms_from_counts(&counts).unwrap();
        prop_assert!((from_counts - ms_from_probabilities(&quantized, m)).abs() < 1e-12);
        prop_assert!((from_counts - staggered_magnetization(&s)).abs() < 1e-9);
    }
}

#[test]
fn finite_shot_estimate_is_close() {
    for seed in 0..5u64 {
        let s = random_state(4, 100 + seed);
        let counts = sample_shots(&s, 100_000, seed).unwrap();
        assert_eq!(counts.shots(), 100_000);
        assert_eq!(counts.counts().values().sum::<u64>(), 100_000);
        let est = ms_from_counts(&counts).unwrap();
        assert!((est - staggered_magnetization(&s)).abs() < 0.02);
    }
}

#[test]
fn sampler_skips_zero_probability_outcomes() {
    let probs = [0.0, 0.5, 0.5, 0.0];
    let counts = sample_from_probabilities(&probs, 2, 10_000, 3).unwrap();
    assert_eq!(counts.get("00") + counts.get("11"), 0);
    assert!(sample_from_probabilities(&probs, 2, 0, 3).is_err());
}

#[test]
fn trajectories_converge_to_channel() {
    let mut circuit = Circuit::new(2);
    circuit.push(GateKind::Hadamard, &[1]).unwrap();
    circuit.push(GateKind::Cnot, &[1, 2]).unwrap();
    let psi0 = StateVector::from_bitstring("00").unwrap();
    let noise = NoiseModel::new(0.1, 0.0).unwrap();
    let exact = noisy_execute(&circuit, &psi0, &noise, ExecutionMode::DensityMatrix).unwrap();
    let sampled = noisy_execute(
        &circuit,
        &psi0,
        &noise,
        ExecutionMode::Trajectories {
            n_traj: 100_000,
            seed: 8,
        },
    )
    .unwrap();
    let worst = exact
        .diagonal_probabilities()
        .iter()
        .zip(sampled.diagonal_probabilities())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.01, "{worst}");
    // Paulis without a net single-qubit bit flip (IZ, ZI, ZZ, XX, XY, YX, YY)
    // keep the Bell state inside span{|00>, |11>} with P(00) = 1/2; the other
    // eight move it to span{|01>, |10>}.
    let p = 0.1;
    let expected_p00 = (1.0 - p) * 0.5 + p / 15.0 * 7.0 * 0.5;
    assert!((exact.diagonal_probabilities()[0] - expected_p00).abs() < 1e-12);
}

fn neel_protocol(scheme: SchemeKind, p: f64) -> (ObservableSeries, ObservableSeries) {
    let chain = ChainSpec::clean(2, 1.0, Boundary::Open).unwrap();
    let plan = TrotterPlan::new(0.1, 12, scheme).unwrap();
    let step = trotter_step_circuit(&chain, &plan).unwrap();
    let psi0 = initial_state(&InitialState::Neel, 2).unwrap();
    let noise = NoiseModel::new(p, 0.0).unwrap();
    let to_series = |rows: Vec<Vec<f64>>| {
        let mut s = ObservableSeries::new();
        for (j, row) in rows.into_iter().enumerate() {
            s.push_probabilities(j as f64 * 0.1, row, 2);
        }
        s
    };
    let ideal = noisy_probability_series(&step, &psi0, 12, &noise, ExecutionMode::Ideal).unwrap();
    let noisy =
        noisy_probability_series(&step, &psi0, 12, &noise, ExecutionMode::DensityMatrix).unwrap();
    (to_series(ideal), to_series(noisy))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn noise_shrinks_staggered_magnetization() {
    for scheme in [SchemeKind::Optimized2Cnot, SchemeKind::Naive4Cnot] {
        let (ideal, noisy) = neel_protocol(scheme, 0.05);
        assert!(ideal.is_consistent(1e-9) && noisy.is_consistent(1e-9));
        let avg =
            |s: &ObservableSeries| mean(&s.ms_values.iter().map(|v| v.abs()).collect::<Vec<_>>());
        assert!(avg(&noisy) <= avg(&ideal) + 1e-9);
        for (a, b) in ideal.ms_values.iter().zip(&noisy.ms_values) {
            assert!(b.abs() <= a.abs() + 1e-9);
        }
    }
}

#[test]
fn fewer_cnots_track_ideal_more_closely() {
    for p in [0.005, 0.01, 0.02] {
        let (ideal, naive) = neel_protocol(SchemeKind::Naive4Cnot, p);
        let (_, opt) = neel_protocol(SchemeKind::Optimized2Cnot, p);
        let dn = mean(&deviation_series(&ideal, &naive).unwrap());
        let d2 = mean(&deviation_series(&ideal, &opt).unwrap());
        assert!(dn > d2, "p={p}: naive {dn} vs optimized {d2}");
    }
}

#[test]
fn zero_noise_series_equal_ideal() {
    let (ideal, noisy) = neel_protocol(SchemeKind::Naive4Cnot, 0.0);
    assert!(deviation_series(&ideal, &noisy)
        .unwrap()
        .iter()
        .all(|d| *d < 1e-9));
}

#[test]
fn trajectory_series_match_density_series() {
    let chain = ChainSpec::clean(2, 1.0, Boundary::Open).unwrap();
    let plan = TrotterPlan::new(0.1, 6, SchemeKind::Naive4Cnot).unwrap();
    let step = trotter_step_circuit(&chain, &plan).unwrap();
    let psi0 = initial_state(&InitialState::Neel, 2).unwrap();
    let noise = NoiseModel::new(0.05, 0.01).unwrap();
    let dm =
        noisy_probability_series(&step, &psi0, 6, &noise, ExecutionMode::DensityMatrix).unwrap();
    let tr = noisy_probability_series(
        &step,
        &psi0,
        6,
        &noise,
        ExecutionMode::Trajectories {
            n_traj: 20_000,
            seed: 1,
        },
    )
    .unwrap();
    for (a, b) in dm.iter().zip(&tr) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 0.02);
        }
    }
}
