//! Command-line front end: argument parsing, dispatch and output.

use std::io::Write;
use std::path::{Path, PathBuf};

use accel_entanglement::bogoliubov::{
    fermion_coefficients, mu_squared, r_from_acceleration, scalar_coefficients, FieldConfig, Statistics,
    SCALAR_R_MAX,
};
use accel_entanglement::curves::{
    default_fermion_grid, default_scalar_grid, default_v_tilde_grid, figure, linspace, pairs_scan,
    packet_grid, schmidt_curve, spectra_curve, SweepSpec, Table, DEFAULT_PACKET_POINTS, DEFAULT_POINTS,
    DEFAULT_V_TILDE_MAX, FIGURE_IDS,
};
use accel_entanglement::entanglement::Scenario;
use accel_entanglement::fock::{build_bell_out, ModeSpec};
use accel_entanglement::packets::{Sign, TwoBodyParams};
use accel_entanglement::{Error, DEFAULT_EPSILON};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable naming the default output directory for `figures`.
pub const OUT_DIR_ENV: &str = "ACCEL_ENT_OUT_DIR";
const DEFAULT_FIGURE_DIR: &str = "figures";

#[derive(Debug, Parser)]
#[command(name = "accel-ent", version, about = "Entanglement of accelerated particle pairs")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write data to this file (a directory for `figures`) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsArg {
    Scalar,
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    One,
    Both,
    All,
}

impl ScenarioArg {
    fn scenarios(self) -> Vec<Scenario> {
        match self {
            ScenarioArg::One => vec![Scenario::OneAccelerated],
            ScenarioArg::Both => vec![Scenario::BothAccelerated],
            ScenarioArg::All => vec![Scenario::OneAccelerated, Scenario::BothAccelerated],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bogoliubov coefficients and squeezing parameter.
    Bogoliubov {
        #[arg(long)]
        mass: f64,
        #[arg(long)]
        accel: f64,
        #[arg(long, value_enum)]
        stats: StatsArg,
    },
    /// Accelerated-particle and Unruh spectra.
    Spectrum {
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, required_unless_present = "grid")]
        accel: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Sweep the acceleration over [0.2, 10] instead.
        #[arg(long, conflicts_with = "accel")]
        grid: bool,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
    /// Schmidt numbers of the two-body packet states.
    Schmidt {
        #[arg(long, required_unless_present = "grid")]
        vtilde: Option<f64>,
        #[arg(long, conflicts_with = "vtilde")]
        grid: bool,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_V_TILDE_MAX)]
        max: f64,
    },
    /// |Psi(x, y, t)| of the two-body packet on a square grid.
    Packet(PacketArgs),
    /// Fermion log-negativities.
    FermionLn {
        #[command(flatten)]
        accel: AccelArgs,
        /// Squeezing parameter r_f in [0, pi/2].
        #[arg(long)]
        rf: Option<f64>,
        #[arg(long, value_enum, default_value_t = ScenarioArg::All)]
        scenario: ScenarioArg,
    },
    /// Scalar log-negativities.
    ScalarLn {
        #[command(flatten)]
        accel: AccelArgs,
        /// Squeezing parameter r in [0, asinh 1].
        #[arg(long)]
        r: Option<f64>,
        /// Restrict to at most this many produced pairs.
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ScenarioArg::All)]
        scenario: ScenarioArg,
    },
    /// LN_sp and LN_sa against the pair restriction M.
    PairsScan {
        #[arg(long, default_value_t = 10)]
        max_m: usize,
        #[arg(long, default_value_t = SCALAR_R_MAX)]
        r: f64,
    },
    /// Write figure tables as CSV files.
    Figures {
        /// `all` or one figure id.
        which: String,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
    },
    /// Amplitude table of the out-basis Bell state.
    DumpState {
        /// Mode spec for omega: inertial, fermion:R, scalar:R[:EPS] or restricted:R:M.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "inertial")]
        s_spec: String,
    },
}

#[derive(Debug, Args)]
pub struct AccelArgs {
    /// Sweep a uniform grid of `--points` values over the full range.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    #[arg(long, requires = "accel")]
    mass: Option<f64>,
    #[arg(long, requires = "mass")]
    accel: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PacketArgs {
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    v1: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    v2: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    a1: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    a2: f64,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    #[arg(long, default_value_t = 0.0)]
    time: f64,
    /// Points per axis.
    #[arg(long, default_value_t = DEFAULT_PACKET_POINTS)]
    grid: usize,
    /// Lower edge of both axes (defaults to the packet window).
    #[arg(long, requires = "hi", allow_hyphen_values = true)]
    lo: Option<f64>,
    #[arg(long, requires = "lo", allow_hyphen_values = true)]
    hi: Option<f64>,
}

/// Failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numeric() { EXIT_NUMERIC } else { EXIT_USAGE };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: msg.into(),
    }
}

/// The parameter grid chosen by `--r`/`--rf`, `--mass --accel` or `--grid`.
fn resolve_grid(
    direct: Option<f64>,
    accel: &AccelArgs,
    stats: Statistics,
    default_grid: fn() -> Vec<f64>,
    hi: f64,
    err: &mut dyn Write,
) -> Result<Vec<f64>, Failure> {
    let from_accel = match (accel.mass, accel.accel) {
        (Some(m), Some(a)) => Some((m, a)),
        _ => None,
    };
    if let Some(r) = direct {
        if from_accel.is_some() {
            let _ = writeln!(err, "warning: both a direct squeezing parameter and --mass/--accel were given; using the direct value");
        }
        if accel.grid {
            return Err(usage("give either a single parameter value or --grid, not both"));
        }
        return Ok(vec![r]);
    }
    if let Some((m, a)) = from_accel {
        if accel.grid {
            return Err(usage("give either --mass/--accel or --grid, not both"));
        }
        return Ok(vec![r_from_acceleration(m, a, stats)?]);
    }
    if accel.grid {
        if accel.points == DEFAULT_POINTS {
            return Ok(default_grid());
        }
        if accel.points == 0 {
            return Err(usage("--points must be positive"));
        }
        return Ok(linspace(0.0, hi, accel.points));
    }
    Err(usage("no parameter given: use a direct value, --mass/--accel, or --grid"))
}

fn bogoliubov_table(mass: f64, accel: f64, stats: StatsArg) -> Result<Table, Failure> {
    let cfg = FieldConfig::from_acceleration(mass, accel)?;
    let mu2 = mu_squared(&cfg);
    let (name, columns, row) = match stats {
        StatsArg::Scalar => {
            let c = scalar_coefficients(mu2)?;
            let unit = c.alpha_mod * c.alpha_mod - c.beta_mod * c.beta_mod - 1.0;
            ("bogoliubov_scalar", ["mu2", "alpha_mod", "beta_mod", "r", "unitarity_residual"], vec![mu2, c.alpha_mod, c.beta_mod, c.r, unit.abs()])
        }
        StatsArg::Fermion => {
            let c = fermion_coefficients(mu2)?;
            let unit = c.alpha_mod * c.alpha_mod + c.beta_mod * c.beta_mod - 1.0;
            ("bogoliubov_fermion", ["mu2", "alpha_mod", "beta_mod", "r_f", "unitarity_residual"], vec![mu2, c.alpha_mod, c.beta_mod, c.r_f, unit.abs()])
        }
    };
    let mut t = Table::new(name, columns.iter().map(|s| s.to_string()).collect())
        .meta("mass", mass)
        .meta("accel", accel)
        .meta("field", cfg.field());
    t.rows.push(row);
    Ok(t)
}

fn dump_state(spec: &str, s_spec: &str) -> Result<Table, Failure> {
    let w: ModeSpec = spec.parse()?;
    let s: ModeSpec = s_spec.parse()?;
    let state = build_bell_out(&s, &w)?;
    let mut t = Table::new("state", ["s_p", "s_a", "w_p", "w_a", "amplitude"].iter().map(|c| c.to_string()).collect())
        .meta("s_spec", s_spec)
        .meta("spec", spec)
        .meta("terms", state.len())
        .meta("truncation_tail", state.truncation_tail());
    for e in state.amplitude_table() {
        let mut row: Vec<f64> = e.occupations.iter().map(|&n| n as f64).collect();
        row.push(e.amplitude);
        t.rows.push(row);
    }
    Ok(t)
}

fn encode(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table.to_json()).expect("table serialises");
            s.push('\n');
            s
        }
    }
}

fn emit(table: &Table, cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let text = encode(table, cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write output: {e}"))),
    }
}

fn figures(which: &str, eps: f64, dir: &Path, err: &mut dyn Write) -> Result<(), Failure> {
    let ids: Vec<&str> = if which == "all" {
        FIGURE_IDS.to_vec()
    } else if FIGURE_IDS.contains(&which) {
        vec![which]
    } else {
        return Err(usage(format!("unknown figure '{which}'; expected all or one of {}", FIGURE_IDS.join(", "))));
    };
    std::fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    for id in ids {
        let table = figure(id, eps)?;
        let path = dir.join(format!("{id}.csv"));
        table
            .write_csv(&path)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        let _ = writeln!(err, "wrote {}", path.display());
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let table = match &cli.command {
        Command::Bogoliubov { mass, accel, stats } => bogoliubov_table(*mass, *accel, *stats)?,
        Command::Spectrum {
            mass,
            accel,
            omega,
            grid,
            points,
        } => {
            let accels = if *grid { linspace(0.2, 10.0, *points) } else { vec![accel.expect("clap requires accel")] };
            spectra_curve(*mass, *omega, &accels)?
                .meta("S_accelerated", "exp(-pi m / a)")
                .meta("S_unruh", "1 / (exp(2 pi omega / a) - 1)")
        }
        Command::Schmidt {
            vtilde,
            grid,
            points,
            max,
        } => {
            let g = match (vtilde, grid) {
                (Some(v), _) => vec![*v],
                (None, _) if *points == DEFAULT_POINTS && *max == DEFAULT_V_TILDE_MAX => default_v_tilde_grid(),
                (None, _) => linspace(0.0, *max, *points),
            };
            schmidt_curve(&g)?
        }
        Command::Packet(p) => {
            let params = TwoBodyParams {
                mass: p.mass,
                b: p.b,
                x0: p.x0,
                v1: p.v1,
                v2: p.v2,
                a1: p.a1,
                a2: p.a2,
                sign: match p.sign {
                    SignArg::Plus => Sign::Plus,
                    SignArg::Minus => Sign::Minus,
                },
            };
            let range = p.lo.zip(p.hi);
            packet_grid(params, p.time, p.grid, range)?
        }
        Command::FermionLn { accel, rf, scenario } => {
            let grid = resolve_grid(*rf, accel, Statistics::Fermion, default_fermion_grid, std::f64::consts::FRAC_PI_2, err)?;
            SweepSpec {
                statistics: Statistics::Fermion,
                scenarios: scenario.scenarios(),
                grid,
                epsilon: DEFAULT_EPSILON,
                restriction: None,
            }
            .run()?
        }
        Command::ScalarLn {
            accel,
            r,
            pairs,
            eps,
            scenario,
        } => {
            let grid = resolve_grid(*r, accel, Statistics::Scalar, default_scalar_grid, SCALAR_R_MAX, err)?;
            SweepSpec {
                statistics: Statistics::Scalar,
                scenarios: scenario.scenarios(),
                grid,
                epsilon: *eps,
                restriction: *pairs,
            }
            .run()?
        }
        Command::PairsScan { max_m, r } => {
            if *max_m == 0 {
                return Err(usage("--max-m must be at least 1"));
            }
            pairs_scan(&(1..=*max_m).collect::<Vec<_>>(), *r)?
        }
        Command::Figures { which, eps } => {
            let dir = cli
                .out
                .clone()
                .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_FIGURE_DIR));
            return figures(which, *eps, &dir, err);
        }
        Command::DumpState { spec, s_spec } => dump_state(spec, s_spec)?,
    };
    emit(&table, cli, out)
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code. Data goes to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
