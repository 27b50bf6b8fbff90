use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinchain::config::{BoundaryName, InitialStateName};
use spinchain::{
    run_compare_schemes, run_disorder_sweep, run_evolve, run_verify, CliError, CsvTable,
    ExperimentConfig, Mode, SchemeName,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;

#[derive(Parser)]
#[command(
    name = "spinchain",
    version,
    about = "Disordered XX spin chain experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configuration and write M_s(t) and probabilities.
    Evolve(JobArgs),
    /// Disorder-averaged M_s(t) for several disorder bounds.
    Sweep {
        #[command(flatten)]
        job: JobArgs,
        /// Comma-separated disorder bounds.
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1")]
        h_values: Vec<f64>,
    },
    /// Noisy 4-CNOT vs 2-CNOT Trotter circuits against the ideal run.
    CompareSchemes(JobArgs),
    /// Run the gate and synthesis identity suite.
    Verify {
        /// Angle offset added to every synthesized block (negative control).
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
    },
}

#[derive(Args)]
struct JobArgs {
    /// JSON configuration file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    g_xy: Option<f64>,
    #[arg(long, value_parser = parse_boundary)]
    boundary: Option<BoundaryName>,
    #[arg(long)]
    disorder_bound: Option<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    /// `neel`, `domain_wall` or a bitstring.
    #[arg(long, value_parser = parse_initial)]
    initial_state: Option<InitialStateName>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<SchemeName>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    trajectories: Option<usize>,
}

fn parse_json_enum<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_boundary(s: &str) -> Result<BoundaryName, String> {
    parse_json_enum(s)
}

fn parse_initial(s: &str) -> Result<InitialStateName, String> {
    parse_json_enum(s)
}

fn parse_scheme(s: &str) -> Result<SchemeName, String> {
    parse_json_enum(s)
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    parse_json_enum(s)
}

impl JobArgs {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),* $(,)?) => {
                $(if let Some(v) = &self.$flag { cfg.$($field).+ = v.clone(); })*
            };
        }
        set!(
            seed => seed, sites => sites, g_xy => g_xy, boundary => boundary,
            disorder_bound => disorder_bound, realizations => realizations,
            initial_state => initial_state, dt => dt, scheme => scheme, mode => mode,
            p2 => noise.p2, p1 => noise.p1, trajectories => trajectories,
        );
        if self.n_steps.is_some() {
            cfg.n_steps = self.n_steps;
        }
        if self.shots.is_some() {
            cfg.shots = self.shots;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn write(&self, table: &CsvTable) -> Result<(), CliError> {
        let text = table.render();
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            }),
            None => {
                let mut stdout = std::io::stdout().lock();
                match stdout
                    .write_all(text.as_bytes())
                    .and_then(|()| stdout.flush())
                {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
                        path: "<stdout>".into(),
                        source: e,
                    }),
                    _ => Ok(()),
                }
            }
        }
    }
}

fn run_job(
    job: &JobArgs,
    f: impl FnOnce(&ExperimentConfig) -> Result<CsvTable, CliError>,
) -> ExitCode {
    let result = job
        .load()
        .and_then(|cfg| f(&cfg))
        .and_then(|t| job.write(&t));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Evolve(job) => run_job(&job, run_evolve),
        Command::Sweep { job, h_values } => run_job(&job, |cfg| run_disorder_sweep(cfg, &h_values)),
        Command::CompareSchemes(job) => run_job(&job, run_compare_schemes),
        Command::Verify { perturb } => {
            let report = run_verify(perturb);
            print!("{report}");
            println!("worst deviation {:.3e}", report.worst_deviation());
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
    }
}
