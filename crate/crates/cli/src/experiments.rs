//! The four jobs. Each returns a [`CsvTable`] (or a text report) and never
//! touches the filesystem.
//!
//! Realizations and sweep points run on the rayon pool; every parallel map is
//! collected in index order and reduced sequentially, so the output does not
//! depend on thread scheduling.

use rayon::prelude::*;
use spinchain_core::observables::{bitstring, sample_from_probabilities};
use spinchain_core::rng::derive_seed;
use spinchain_core::verify::{run_identity_suite, Report};
use spinchain_core::{
    basis_probabilities, cnot_count, initial_state, ms_from_counts, ms_from_probabilities,
    noisy_probability_series, sample_disorder, trotter_evolve, trotter_step_circuit, ChainSpec,
    DisorderSpec, ExactPropagator, ExecutionMode, NoiseModel, SchemeKind, TrotterPlan,
};

use crate::config::{
    ConfigError, ExperimentConfig, Mode, DEFAULT_COMPARE_STEPS, DEFAULT_EVOLVE_STEPS,
};
use crate::csv::{Cell, CsvTable};
use crate::CliError;

/// Probability columns are only written up to this many sites.
pub const MAX_PROBABILITY_COLUMN_SITES: usize = 4;

/// Sub-stream indices under a realization seed.
const STREAM_DISORDER: u64 = 0;
const STREAM_NOISE: u64 = 1;
const STREAM_SHOTS: u64 = 2;

type Rows = Vec<Vec<f64>>;

/// Disorder realizations actually run. Without disorder every realization
/// is the same chain, so one suffices.
pub fn realizations_to_run(cfg: &ExperimentConfig) -> usize {
    if cfg.explicit_fields.is_some() || cfg.disorder_bound == 0.0 {
        1
    } else {
        cfg.realizations
    }
}

fn realization_seed(cfg: &ExperimentConfig, r: usize) -> u64 {
    derive_seed(cfg.seed, r as u64)
}

/// The chain of realization `r`: explicit fields, or fields sampled from
/// a seed derived from the master seed and `r`.
pub fn realization_chain(cfg: &ExperimentConfig, r: usize) -> Result<ChainSpec, CliError> {
    let fields = match &cfg.explicit_fields {
        Some(f) => f.clone(),
        None => {
            let seed = derive_seed(realization_seed(cfg, r), STREAM_DISORDER);
            sample_disorder(&DisorderSpec::new(cfg.disorder_bound, seed)?, cfg.sites)
        }
    };
    Ok(ChainSpec::new(cfg.g_xy, fields, cfg.boundary.into())?)
}

fn times(dt: f64, n_steps: usize) -> Vec<f64> {
    (0..=n_steps).map(|j| j as f64 * dt).collect()
}

fn exact_rows(chain: &ChainSpec, cfg: &ExperimentConfig, n_steps: usize) -> Result<Rows, CliError> {
    let psi0 = initial_state(&cfg.initial_state.0, cfg.sites)?;
    let prop = ExactPropagator::new(chain)?;
    times(cfg.dt, n_steps)
        .into_iter()
        .map(|t| Ok(basis_probabilities(&prop.evolve(&psi0, t)?)))
        .collect()
}

fn trotter_rows(
    chain: &ChainSpec,
    cfg: &ExperimentConfig,
    n_steps: usize,
    scheme: SchemeKind,
) -> Result<Rows, CliError> {
    let psi0 = initial_state(&cfg.initial_state.0, cfg.sites)?;
    let plan = TrotterPlan::new(cfg.dt, n_steps, scheme)?;
    Ok(trotter_evolve(chain, &psi0, &plan, 1)?
        .iter()
        .map(|(_, psi)| basis_probabilities(psi))
        .collect())
}

fn noisy_rows(
    chain: &ChainSpec,
    cfg: &ExperimentConfig,
    n_steps: usize,
    scheme: SchemeKind,
    mode: Mode,
    seed: u64,
) -> Result<Rows, CliError> {
    let psi0 = initial_state(&cfg.initial_state.0, cfg.sites)?;
    let plan = TrotterPlan::new(cfg.dt, n_steps, scheme)?;
    let step = trotter_step_circuit(chain, &plan)?;
    let noise = NoiseModel::new(cfg.noise.p2, cfg.noise.p1)?;
    let exec = match mode {
        Mode::Trajectories => ExecutionMode::Trajectories {
            n_traj: cfg.trajectories,
            seed,
        },
        _ => ExecutionMode::DensityMatrix,
    };
    Ok(noisy_probability_series(
        &step, &psi0, n_steps, &noise, exec,
    )?)
}

fn ms_series(rows: &Rows, m: usize) -> Vec<f64> {
    rows.iter().map(|p| ms_from_probabilities(p, m)).collect()
}

/// Per-realization results of one `evolve` run.
struct Realization {
    ms_trotter: Vec<f64>,
    ms_exact: Vec<f64>,
    ms_noisy: Option<Vec<f64>>,
    ms_shots: Option<Vec<f64>>,
    primary: Rows,
}

fn run_realization(
    cfg: &ExperimentConfig,
    r: usize,
    n_steps: usize,
) -> Result<Realization, CliError> {
    let m = cfg.sites;
    let chain = realization_chain(cfg, r)?;
    let seed = realization_seed(cfg, r);
    let scheme: SchemeKind = cfg.scheme.into();
    let trotter = trotter_rows(&chain, cfg, n_steps, scheme)?;
    let exact = exact_rows(&chain, cfg, n_steps)?;
    let noisy = if cfg.mode.is_noisy() {
        let s = derive_seed(seed, STREAM_NOISE);
        Some(noisy_rows(&chain, cfg, n_steps, scheme, cfg.mode, s)?)
    } else {
        None
    };
    let ms_trotter = ms_series(&trotter, m);
    let ms_exact = ms_series(&exact, m);
    let ms_noisy = noisy.as_ref().map(|rows| ms_series(rows, m));
    let primary = match cfg.mode {
        Mode::Ideal => trotter,
        Mode::Exact => exact,
        Mode::Density | Mode::Trajectories => noisy.expect("noisy rows computed"),
    };
    let ms_shots = match cfg.shots {
        None => None,
        Some(shots) => {
            let base = derive_seed(seed, STREAM_SHOTS);
            let series = primary
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    let counts =
                        sample_from_probabilities(p, m, shots, derive_seed(base, j as u64))?;
                    ms_from_counts(&counts)
                })
                .collect::<Result<Vec<f64>, _>>()?;
            Some(series)
        }
    };
    Ok(Realization {
        ms_trotter,
        ms_exact,
        ms_noisy,
        ms_shots,
        primary,
    })
}

fn run_realizations(cfg: &ExperimentConfig, n_steps: usize) -> Result<Vec<Realization>, CliError> {
    (0..realizations_to_run(cfg))
        .into_par_iter()
        .map(|r| run_realization(cfg, r, n_steps))
        .collect()
}

/// Sequential mean of equally long series.
fn mean_series<'a>(series: impl IntoIterator<Item = &'a Vec<f64>>) -> Vec<f64> {
    let mut acc: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for s in series {
        if acc.is_empty() {
            acc = vec![0.0; s.len()];
        }
        for (a, v) in acc.iter_mut().zip(s) {
            *a += v;
        }
        count += 1;
    }
    let w = 1.0 / count.max(1) as f64;
    acc.iter().map(|a| a * w).collect()
}

fn checked(cfg: &ExperimentConfig) -> Result<(), CliError> {
    cfg.validate()?;
    Ok(())
}

/// `t, ms_trotter, ms_exact[, ms_noisy][, ms_shots][, p_<bits>...]`.
///
/// `ms_noisy` appears in the density and trajectory modes, `ms_shots` when
/// `shots` is set. The probability columns come from the evolution selected
/// by `mode` and are written for chains of up to four sites.
pub fn run_evolve(cfg: &ExperimentConfig) -> Result<CsvTable, CliError> {
    checked(cfg)?;
    let m = cfg.sites;
    let n_steps = cfg.n_steps.unwrap_or(DEFAULT_EVOLVE_STEPS);
    let results = run_realizations(cfg, n_steps)?;

    let ms_trotter = mean_series(results.iter().map(|r| &r.ms_trotter));
    let ms_exact = mean_series(results.iter().map(|r| &r.ms_exact));
    let ms_noisy = cfg
        .mode
        .is_noisy()
        .then(|| mean_series(results.iter().filter_map(|r| r.ms_noisy.as_ref())));
    let ms_shots = cfg
        .shots
        .map(|_| mean_series(results.iter().filter_map(|r| r.ms_shots.as_ref())));
    let with_probs = m <= MAX_PROBABILITY_COLUMN_SITES;
    let dim = 1usize << m;
    let probs: Rows = if with_probs {
        (0..=n_steps)
            .map(|j| mean_series(results.iter().map(|r| &r.primary[j])))
            .collect()
    } else {
        Vec::new()
    };

    let mut header: Vec<String> = vec!["t".into(), "ms_trotter".into(), "ms_exact".into()];
    if ms_noisy.is_some() {
        header.push("ms_noisy".into());
    }
    if ms_shots.is_some() {
        header.push("ms_shots".into());
    }
    if with_probs {
        header.extend((0..dim).map(|i| format!("p_{}", bitstring(i, m))));
    }
    let mut table = CsvTable::new(header);
    for (j, t) in times(cfg.dt, n_steps).into_iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into(), ms_trotter[j].into(), ms_exact[j].into()];
        if let Some(s) = &ms_noisy {
            row.push(s[j].into());
        }
        if let Some(s) = &ms_shots {
            row.push(s[j].into());
        }
        if with_probs {
            row.extend(probs[j].iter().map(|&p| Cell::from(p)));
        }
        table.push(row);
    }
    Ok(table)
}

/// Disorder-averaged `M_s(t)` of the evolution selected by `mode`.
fn primary_ms_series(cfg: &ExperimentConfig, n_steps: usize) -> Result<Vec<f64>, CliError> {
    let m = cfg.sites;
    let series = (0..realizations_to_run(cfg))
        .into_par_iter()
        .map(|r| -> Result<Vec<f64>, CliError> {
            let chain = realization_chain(cfg, r)?;
            let scheme: SchemeKind = cfg.scheme.into();
            let rows = match cfg.mode {
                Mode::Exact => exact_rows(&chain, cfg, n_steps)?,
                Mode::Ideal => trotter_rows(&chain, cfg, n_steps, scheme)?,
                mode => {
                    let s = derive_seed(realization_seed(cfg, r), STREAM_NOISE);
                    noisy_rows(&chain, cfg, n_steps, scheme, mode, s)?
                }
            };
            Ok(ms_series(&rows, m))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(mean_series(&series))
}

/// Column name for one sweep point, e.g. `ms_h0.5`.
pub fn sweep_column(h: f64) -> String {
    format!("ms_h{h}")
}

/// `t, ms_h<h>...` with one disorder-averaged column per bound in
/// `h_values`, followed by a `mean` row holding each column's average over
/// all time points.
pub fn run_disorder_sweep(cfg: &ExperimentConfig, h_values: &[f64]) -> Result<CsvTable, CliError> {
    checked(cfg)?;
    if h_values.is_empty() {
        return Err(ConfigError::Invalid {
            field: "h_values",
            message: "at least one disorder bound is required".into(),
        }
        .into());
    }
    if let Some(bad) = h_values.iter().find(|h| !(h.is_finite() && **h >= 0.0)) {
        return Err(ConfigError::Invalid {
            field: "h_values",
            message: format!("bounds must be finite and >= 0, got {bad}"),
        }
        .into());
    }
    if cfg.explicit_fields.is_some() {
        return Err(ConfigError::Invalid {
            field: "explicit_fields",
            message: "a sweep samples its own fields; remove explicit_fields".into(),
        }
        .into());
    }
    let n_steps = cfg.n_steps.unwrap_or(DEFAULT_EVOLVE_STEPS);
    let columns = h_values
        .par_iter()
        .map(|&h| {
            let point = ExperimentConfig {
                disorder_bound: h,
                ..cfg.clone()
            };
            primary_ms_series(&point, n_steps)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["t".to_string()];
    header.extend(h_values.iter().map(|&h| sweep_column(h)));
    let mut table = CsvTable::new(header);
    for (j, t) in times(cfg.dt, n_steps).into_iter().enumerate() {
        let mut row = vec![Cell::from(t)];
        row.extend(columns.iter().map(|c| Cell::from(c[j])));
        table.push(row);
    }
    let mut summary = vec![Cell::from("mean")];
    summary.extend(
        columns
            .iter()
            .map(|c| Cell::from(c.iter().sum::<f64>() / c.len() as f64)),
    );
    table.push(summary);
    Ok(table)
}

/// `t, ms_ideal, ms_naive4_noisy, ms_opt2_noisy, cnots_naive4, cnots_opt2`.
///
/// Both schemes run under the configured noise. The trajectory mode is used
/// when `mode = "trajectories"`; every other mode uses the density matrix.
/// CNOT columns are cumulative counts after `j` steps.
pub fn run_compare_schemes(cfg: &ExperimentConfig) -> Result<CsvTable, CliError> {
    checked(cfg)?;
    let m = cfg.sites;
    let n_steps = cfg.n_steps.unwrap_or(DEFAULT_COMPARE_STEPS);
    let noisy_mode = match cfg.mode {
        Mode::Trajectories => Mode::Trajectories,
        _ => Mode::Density,
    };
    if noisy_mode == Mode::Density && m > spinchain_core::gates::MAX_DENSITY_QUBITS {
        return Err(ConfigError::Invalid {
            field: "mode",
            message: format!("scheme comparison on {m} sites needs mode = \"trajectories\""),
        }
        .into());
    }
    let per_realization = (0..realizations_to_run(cfg))
        .into_par_iter()
        .map(|r| -> Result<[Vec<f64>; 3], CliError> {
            let chain = realization_chain(cfg, r)?;
            let seed = derive_seed(realization_seed(cfg, r), STREAM_NOISE);
            let ideal = trotter_rows(&chain, cfg, n_steps, SchemeKind::Optimized2Cnot)?;
            let naive = noisy_rows(
                &chain,
                cfg,
                n_steps,
                SchemeKind::Naive4Cnot,
                noisy_mode,
                seed,
            )?;
            let opt = noisy_rows(
                &chain,
                cfg,
                n_steps,
                SchemeKind::Optimized2Cnot,
                noisy_mode,
                seed,
            )?;
            Ok([
                ms_series(&ideal, m),
                ms_series(&naive, m),
                ms_series(&opt, m),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let column = |k: usize| mean_series(per_realization.iter().map(|s| &s[k]));
    let (ideal, naive, opt) = (column(0), column(1), column(2));

    let chain = realization_chain(cfg, 0)?;
    let step_cnots = |scheme| -> Result<u64, CliError> {
        let plan = TrotterPlan::new(cfg.dt, n_steps, scheme)?;
        Ok(cnot_count(&trotter_step_circuit(&chain, &plan)?) as u64)
    };
    let naive_per_step = step_cnots(SchemeKind::Naive4Cnot)?;
    let opt_per_step = step_cnots(SchemeKind::Optimized2Cnot)?;

    let header = [
        "t",
        "ms_ideal",
        "ms_naive4_noisy",
        "ms_opt2_noisy",
        "cnots_naive4",
        "cnots_opt2",
    ];
    let mut table = CsvTable::new(header.iter().map(|s| s.to_string()).collect());
    for (j, t) in times(cfg.dt, n_steps).into_iter().enumerate() {
        let steps = j as u64;
        table.push(vec![
            t.into(),
            ideal[j].into(),
            naive[j].into(),
            opt[j].into(),
            (steps * naive_per_step).into(),
            (steps * opt_per_step).into(),
        ]);
    }
    Ok(table)
}

/// Runs the identity suite, adding `perturbation` to every synthesized block
/// angle. Zero gives the production check.
pub fn run_verify(perturbation: f64) -> Report {
    run_identity_suite(perturbation)
}
