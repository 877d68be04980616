//! `twolevel`: regenerates the figure data of the two-level Rabi kinetics
//! model as CSV, and fits cavity flopping traces.
//!
//! Exit status: 0 on success, 2 for invalid arguments or input, 3 when a
//! quadrature or ODE integration cannot reach its tolerance, 1 for I/O
//! failures.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twolevel::dynamics::{
    b_coefficient_monochromatic, b_coefficient_thermal, cavity_curve, thermal_p21,
};
use twolevel::fitting::{
    fit_cavity_a, load_trace, synthetic_trace, CavityFixed, Coupling, FitOptions, FlopTrace,
};
use twolevel::kinetics::{run_kinetics, FieldKind, InitialState, KineticsParams};
use twolevel::presets;
use twolevel::radiation::{
    b0_coefficient, cavity_decay_rate, einstein_a, rabi_frequency_cavity,
    rabi_frequency_free_space, TwoLevelSystem,
};
use twolevel::series::{uniform_grid, TimeSeries};
use twolevel::specfun::{envelope_j0, j0};
use twolevel::Error;

#[derive(Parser, Debug)]
#[command(
    name = "twolevel",
    version,
    about = "Rabi-flopping kinetics of a two-level system in radiation fields",
    subcommand_required = true
)]
struct Cli {
    /// Write the CSV here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// B(t)/B0 = |J0(tau)| for thermal radiation with its envelope.
    Fig1(Fig1Args),
    /// Monochromatic B(t)/B0 = (3/pi)|sin(Omega t)|.
    #[command(name = "fig1-inset")]
    Fig1Inset(Fig1InsetArgs),
    /// Cavity vacuum Rabi flopping for the Rydberg cavity experiment.
    Fig1b(CavityArgs),
    /// Level probabilities in a thermal field against Einstein's solution.
    Fig2(FigKineticsArgs),
    /// Level probabilities in a resonant monochromatic field.
    Fig2a(FigKineticsArgs),
    /// Entropy in thermal and monochromatic fields against Einstein's.
    Fig3(FigKineticsArgs),
    /// Time-dependent B coefficient in SI units for a given atom and temperature.
    Bcoeff(BcoeffArgs),
    /// Every kinetics channel for arbitrary parameters.
    Kinetics(KineticsArgs),
    /// Cavity emission probability as a trace (`t_seconds,p2`).
    Cavity(CavityArgs),
    /// Fit the decay rate A to a cavity flopping trace.
    Fit(FitArgs),
}

#[derive(Args, Debug)]
struct Fig1Args {
    /// Largest omega_gamma t.
    #[arg(long, allow_negative_numbers = true, default_value_t = 80.0)]
    tau_max: f64,
    /// Number of samples in (0, tau-max].
    #[arg(long, default_value_t = 2000)]
    points: usize,
}

#[derive(Args, Debug)]
struct Fig1InsetArgs {
    /// Largest Omega t.
    #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
    tau_max: f64,
    /// Number of samples in [0, tau-max].
    #[arg(long, default_value_t = 1000)]
    points: usize,
}

#[derive(Args, Debug)]
struct CavityArgs {
    /// Cavity quality factor.
    #[arg(long = "Q", allow_negative_numbers = true, default_value_t = presets::BRUNE_Q)]
    q: f64,
    /// Decay rate A used in the cavity linewidth, 1/s.
    #[arg(long = "A", allow_negative_numbers = true, default_value_t = presets::BRUNE_A_FITTED)]
    a_rate: f64,
    /// Temperature, K.
    #[arg(long = "T", allow_negative_numbers = true, default_value_t = presets::BRUNE_TEMPERATURE)]
    temperature: f64,
    /// Bohr angular frequency, rad/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = presets::BRUNE_OMEGA0)]
    omega0: f64,
    /// Transition dipole, C m; defaults to the value whose free-space A is 0.5536116e6/s.
    #[arg(long, allow_negative_numbers = true)]
    mu12: Option<f64>,
    /// Last time sample, s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 90e-6)]
    t_max: f64,
    /// Number of samples in [0, t-max].
    #[arg(long, default_value_t = 901)]
    points: usize,
    /// Absolute quadrature tolerance, in (0, 1e-4].
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-6)]
    quad_tol: f64,
}

#[derive(Args, Debug)]
struct FigKineticsArgs {
    /// A / omega_gamma.
    #[arg(long, allow_negative_numbers = true, default_value_t = presets::NA_A_OVER_OMEGA_GAMMA)]
    a: f64,
    /// |R(0)| / omega_gamma.
    #[arg(long, allow_negative_numbers = true, default_value_t = presets::NA_R_OVER_OMEGA_GAMMA)]
    r: f64,
    /// Largest omega_gamma t.
    #[arg(long, allow_negative_numbers = true, default_value_t = 125.0)]
    tau_max: f64,
    /// Number of samples in [0, tau-max].
    #[arg(long, default_value_t = 1251)]
    points: usize,
    /// Level occupied at t = 0.
    #[arg(long, value_enum, default_value_t = Initial::Ground)]
    initial: Initial,
}

#[derive(Args, Debug)]
struct BcoeffArgs {
    /// Transition dipole, C m.
    #[arg(long, allow_negative_numbers = true, default_value_t = presets::NA_D1_DIPOLE)]
    mu12: f64,
    /// Bohr angular frequency, rad/s; defaults to the sodium D1 line.
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<f64>,
    /// Temperature, K.
    #[arg(long = "T", allow_negative_numbers = true, default_value_t = presets::NA_TEMPERATURE)]
    temperature: f64,
    /// Largest omega_gamma t.
    #[arg(long, allow_negative_numbers = true, default_value_t = 80.0)]
    tau_max: f64,
    /// Number of samples in [0, tau-max].
    #[arg(long, default_value_t = 2001)]
    points: usize,
}

#[derive(Args, Debug)]
struct KineticsArgs {
    #[command(flatten)]
    base: FigKineticsArgs,
    /// Time profile of the stimulated rate.
    #[arg(long, value_enum, default_value_t = Field::Thermal)]
    field: Field,
    /// Rabi frequency, rad/s; adds a `t_seconds` column.
    #[arg(long, allow_negative_numbers = true)]
    omega_gamma: Option<f64>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Trace to fit (`t_seconds,p2[,sigma]`).
    #[arg(long, value_name = "PATH", required_unless_present = "self_test", conflicts_with = "self_test")]
    input: Option<PathBuf>,
    /// Fit a seeded synthetic trace generated with the given A.
    #[arg(long)]
    self_test: bool,
    /// Save the synthetic trace used by --self-test.
    #[arg(long, value_name = "PATH", requires = "self_test")]
    save_trace: Option<PathBuf>,
    /// Cavity quality factor.
    #[arg(long = "Q", allow_negative_numbers = true, default_value_t = presets::BRUNE_Q)]
    q: f64,
    /// True decay rate of the synthetic trace, 1/s.
    #[arg(long = "A", allow_negative_numbers = true, default_value_t = presets::BRUNE_A_FITTED)]
    a_rate: f64,
    /// Starting value of the fitted A, 1/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = presets::BRUNE_A_NATURAL)]
    a_init: f64,
    /// Temperature, K.
    #[arg(long = "T", allow_negative_numbers = true, default_value_t = presets::BRUNE_TEMPERATURE)]
    temperature: f64,
    /// Bohr angular frequency, rad/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = presets::BRUNE_OMEGA0)]
    omega0: f64,
    /// Transition dipole, C m; defaults to the value whose free-space A is 0.5536116e6/s.
    #[arg(long, allow_negative_numbers = true)]
    mu12: Option<f64>,
    /// Gaussian noise of the synthetic trace.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.02)]
    noise: f64,
    /// Seed of the synthetic noise.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of synthetic samples in [0, t-max].
    #[arg(long, default_value_t = 60)]
    points: usize,
    /// Last synthetic time sample, s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 90e-6)]
    t_max: f64,
    /// Absolute quadrature tolerance, in (0, 1e-4].
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-10)]
    quad_tol: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Initial {
    Ground,
    Excited,
}

impl From<Initial> for InitialState {
    fn from(v: Initial) -> Self {
        match v {
            Initial::Ground => InitialState::Ground,
            Initial::Excited => InitialState::Excited,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Field {
    Thermal,
    Monochromatic,
    Static,
}

impl From<Field> for FieldKind {
    fn from(v: Field) -> Self {
        match v {
            Field::Thermal => FieldKind::Thermal,
            Field::Monochromatic => FieldKind::Monochromatic,
            Field::Static => FieldKind::Static,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Quadrature { .. } | Error::Ode { .. } => CliError::Numerical(msg),
            Error::Io(_) => CliError::Io(msg),
            _ => CliError::Usage(msg),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twolevel: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let ts = match &cli.command {
        Command::Fig1(args) => fig1(args)?,
        Command::Fig1Inset(args) => fig1_inset(args)?,
        Command::Fig1b(args) => fig1b(args)?,
        Command::Fig2(args) => fig2(args, FieldKind::Thermal, "fig2")?,
        Command::Fig2a(args) => fig2(args, FieldKind::Monochromatic, "fig2a")?,
        Command::Fig3(args) => fig3(args)?,
        Command::Bcoeff(args) => bcoeff(args)?,
        Command::Kinetics(args) => kinetics(args)?,
        Command::Cavity(args) => cavity(args)?,
        Command::Fit(args) => fit(args)?,
    };
    emit(&ts, cli.output.as_deref())
}

fn emit(ts: &TimeSeries, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            ts.write_csv(&mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            ts.write_csv(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn new_series(command: &str, axis: &str, grid: Vec<f64>) -> CliResult<TimeSeries> {
    let mut ts = TimeSeries::new(axis, grid)?;
    ts.set_meta("command", command);
    ts.set_meta("version", env!("CARGO_PKG_VERSION"));
    Ok(ts)
}

fn require_positive(key: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{key} must be finite and > 0, got {v}")))
    }
}

fn require_points(points: usize) -> CliResult<()> {
    if points >= 2 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--points must be at least 2, got {points}")))
    }
}

fn fig1(args: &Fig1Args) -> CliResult<TimeSeries> {
    require_positive("tau-max", args.tau_max)?;
    require_points(args.points)?;
    // the envelope diverges at 0, so the grid starts one step in
    let step = args.tau_max / args.points as f64;
    let grid = uniform_grid(step, args.tau_max, args.points)?;
    let b: Vec<f64> = grid.iter().map(|&t| j0(t).abs()).collect();
    let env = grid.iter().map(|&t| envelope_j0(t)).collect::<Result<Vec<_>, _>>()?;
    let mut ts = new_series("fig1", "tau", grid)?;
    ts.set_meta("tau_max", args.tau_max);
    ts.set_meta("points", args.points);
    ts.push_channel("B_over_B0", b)?;
    ts.push_channel("envelope", env)?;
    Ok(ts)
}

fn fig1_inset(args: &Fig1InsetArgs) -> CliResult<TimeSeries> {
    require_positive("tau-max", args.tau_max)?;
    require_points(args.points)?;
    let grid = uniform_grid(0.0, args.tau_max, args.points)?;
    let b = grid
        .iter()
        .map(|&t| b_coefficient_monochromatic(t, 1.0, 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ts = new_series("fig1-inset", "tau", grid)?;
    ts.set_meta("tau_max", args.tau_max);
    ts.set_meta("points", args.points);
    ts.push_channel("B_over_B0", b)?;
    Ok(ts)
}

fn cavity_system(omega0: f64, mu12: Option<f64>) -> CliResult<TwoLevelSystem> {
    require_positive("omega0", omega0)?;
    let sys = match mu12 {
        Some(mu) => TwoLevelSystem::new(omega0, mu)?,
        None => TwoLevelSystem::from_einstein_a(omega0, presets::BRUNE_A_NATURAL)?,
    };
    Ok(sys)
}

struct CavitySetup {
    sys: TwoLevelSystem,
    grid: Vec<f64>,
    omega_gamma: f64,
    gamma: f64,
}

fn cavity_setup(args: &CavityArgs) -> CliResult<CavitySetup> {
    require_positive("Q", args.q)?;
    require_positive("t-max", args.t_max)?;
    require_points(args.points)?;
    let sys = cavity_system(args.omega0, args.mu12)?;
    let omega_gamma = rabi_frequency_cavity(&sys, args.temperature, args.q, args.a_rate)?;
    let gamma = cavity_decay_rate(&sys, args.q, args.a_rate)?;
    sys.check_rotating_wave(omega_gamma);
    let grid = uniform_grid(0.0, args.t_max, args.points)?;
    Ok(CavitySetup {
        sys,
        grid,
        omega_gamma,
        gamma,
    })
}

fn echo_cavity(ts: &mut TimeSeries, args: &CavityArgs, setup: &CavitySetup) {
    ts.set_meta("Q", args.q);
    ts.set_meta("A", args.a_rate);
    ts.set_meta("T", args.temperature);
    ts.set_meta("omega0", setup.sys.omega0);
    ts.set_meta("mu12", setup.sys.mu12);
    ts.set_meta("t_max", args.t_max);
    ts.set_meta("points", args.points);
    ts.set_meta("quad_tol", args.quad_tol);
    ts.set_meta("omega_gamma", setup.omega_gamma);
    ts.set_meta("Gamma", setup.gamma);
}

fn fig1b(args: &CavityArgs) -> CliResult<TimeSeries> {
    let setup = cavity_setup(args)?;
    let a_natural = einstein_a(&setup.sys);
    let wg_natural = rabi_frequency_cavity(&setup.sys, args.temperature, args.q, a_natural)?;
    let gamma_natural = cavity_decay_rate(&setup.sys, args.q, a_natural)?;
    let wg_free = rabi_frequency_free_space(&setup.sys, args.temperature)?;

    let fitted = cavity_curve(&setup.grid, setup.omega_gamma, setup.gamma, args.quad_tol)?;
    let natural = cavity_curve(&setup.grid, wg_natural, gamma_natural, args.quad_tol)?;
    let free = setup
        .grid
        .iter()
        .map(|&t| thermal_p21(wg_free * t))
        .collect::<Result<Vec<_>, _>>()?;

    let mut ts = new_series("fig1b", "t_seconds", setup.grid.clone())?;
    echo_cavity(&mut ts, args, &setup);
    ts.set_meta("A_natural", a_natural);
    ts.set_meta("omega_gamma_natural", wg_natural);
    ts.set_meta("omega_gamma_free", wg_free);
    ts.push_channel("p2_cavity", fitted)?;
    ts.push_channel("p2_free", free)?;
    ts.push_channel("p2_cavity_natural", natural)?;
    Ok(ts)
}

fn cavity(args: &CavityArgs) -> CliResult<TimeSeries> {
    let setup = cavity_setup(args)?;
    let p = cavity_curve(&setup.grid, setup.omega_gamma, setup.gamma, args.quad_tol)?;
    let mut ts = new_series("cavity", "t_seconds", setup.grid.clone())?;
    echo_cavity(&mut ts, args, &setup);
    ts.push_channel("p2", p)?;
    Ok(ts)
}

fn kinetics_run(
    args: &FigKineticsArgs,
    field: FieldKind,
    omega_gamma: f64,
) -> CliResult<(KineticsParams, TimeSeries)> {
    require_positive("tau-max", args.tau_max)?;
    require_points(args.points)?;
    let params = KineticsParams::new(args.a, args.r, omega_gamma, field, args.initial.into())?;
    let grid = uniform_grid(0.0, args.tau_max, args.points)?;
    let ts = run_kinetics(&params, &grid)?;
    Ok((params, ts))
}

fn echo_kinetics(ts: &mut TimeSeries, args: &FigKineticsArgs, field: &str) {
    ts.set_meta("a", args.a);
    ts.set_meta("r", args.r);
    ts.set_meta("field", field);
    ts.set_meta(
        "initial",
        match args.initial {
            Initial::Ground => "ground",
            Initial::Excited => "excited",
        },
    );
    ts.set_meta("tau_max", args.tau_max);
    ts.set_meta("points", args.points);
}

fn copy_channels(from: &TimeSeries, to: &mut TimeSeries, names: &[(&str, &str)]) -> CliResult<()> {
    for (src, dst) in names {
        let values = from
            .channel(src)
            .ok_or_else(|| CliError::Numerical(format!("missing channel {src}")))?;
        to.push_channel(*dst, values.to_vec())?;
    }
    Ok(())
}

fn fig2(args: &FigKineticsArgs, field: FieldKind, command: &str) -> CliResult<TimeSeries> {
    let (_, run) = kinetics_run(args, field, 1.0)?;
    let mut ts = new_series(command, "tau", run.grid().to_vec())?;
    let name = if field == FieldKind::Thermal { "thermal" } else { "monochromatic" };
    echo_kinetics(&mut ts, args, name);
    copy_channels(
        &run,
        &mut ts,
        &[
            ("P1", "P1"),
            ("P2", "P2"),
            ("P1_einstein", "P1_einstein"),
            ("P2_einstein", "P2_einstein"),
        ],
    )?;
    Ok(ts)
}

fn fig3(args: &FigKineticsArgs) -> CliResult<TimeSeries> {
    let (_, thermal) = kinetics_run(args, FieldKind::Thermal, 1.0)?;
    let (_, mono) = kinetics_run(args, FieldKind::Monochromatic, 1.0)?;
    let mut ts = new_series("fig3", "tau", thermal.grid().to_vec())?;
    echo_kinetics(&mut ts, args, "thermal,monochromatic");
    copy_channels(&thermal, &mut ts, &[("S", "S"), ("S_einstein", "S_einstein")])?;
    copy_channels(&mono, &mut ts, &[("S", "S_monochromatic")])?;
    Ok(ts)
}

fn kinetics(args: &KineticsArgs) -> CliResult<TimeSeries> {
    let omega_gamma = args.omega_gamma.unwrap_or(1.0);
    require_positive("omega-gamma", omega_gamma)?;
    let field = FieldKind::from(args.field);
    let (_, run) = kinetics_run(&args.base, field, omega_gamma)?;
    let mut ts = new_series("kinetics", "tau", run.grid().to_vec())?;
    let name = match args.field {
        Field::Thermal => "thermal",
        Field::Monochromatic => "monochromatic",
        Field::Static => "static",
    };
    echo_kinetics(&mut ts, &args.base, name);
    ts.set_meta("omega_gamma", omega_gamma);
    if args.omega_gamma.is_some() {
        let secs = run.grid().iter().map(|t| t / omega_gamma).collect();
        ts.push_channel("t_seconds", secs)?;
    }
    let names: Vec<String> = run.channel_names().map(str::to_owned).collect();
    for name in &names {
        copy_channels(&run, &mut ts, &[(name, name)])?;
    }
    Ok(ts)
}

fn bcoeff(args: &BcoeffArgs) -> CliResult<TimeSeries> {
    require_positive("tau-max", args.tau_max)?;
    require_points(args.points)?;
    let omega0 = args.omega0.unwrap_or_else(|| presets::sodium_d1().omega0);
    require_positive("omega0", omega0)?;
    require_positive("mu12", args.mu12)?;
    let sys = TwoLevelSystem::new(omega0, args.mu12)?;
    let wg = rabi_frequency_free_space(&sys, args.temperature)?;
    sys.check_rotating_wave(wg);
    let b0 = b0_coefficient(&sys);
    let grid = uniform_grid(0.0, args.tau_max, args.points)?;
    let secs: Vec<f64> = grid.iter().map(|t| t / wg).collect();
    let thermal = secs
        .iter()
        .map(|&t| b_coefficient_thermal(t, wg, b0))
        .collect::<Result<Vec<_>, _>>()?;
    let mono = secs
        .iter()
        .map(|&t| b_coefficient_monochromatic(t, wg, b0))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ts = new_series("bcoeff", "tau", grid)?;
    ts.set_meta("mu12", args.mu12);
    ts.set_meta("omega0", omega0);
    ts.set_meta("T", args.temperature);
    ts.set_meta("tau_max", args.tau_max);
    ts.set_meta("points", args.points);
    ts.set_meta("omega_gamma", wg);
    ts.set_meta("B0", b0);
    ts.push_channel("t_seconds", secs)?;
    ts.push_channel("B_thermal", thermal)?;
    ts.push_channel("B_monochromatic", mono)?;
    Ok(ts)
}

fn fit(args: &FitArgs) -> CliResult<TimeSeries> {
    require_positive("Q", args.q)?;
    require_positive("a-init", args.a_init)?;
    let sys = cavity_system(args.omega0, args.mu12)?;
    let fixed = CavityFixed {
        omega0: sys.omega0,
        q: args.q,
        temperature: args.temperature,
        coupling: Coupling::DipoleMoment(sys.mu12),
    };
    let options = FitOptions {
        quad_tol: args.quad_tol,
        ..FitOptions::default()
    };
    let trace: FlopTrace = if args.self_test {
        require_positive("A", args.a_rate)?;
        require_positive("t-max", args.t_max)?;
        require_points(args.points)?;
        if !(args.noise >= 0.0 && args.noise.is_finite()) {
            return Err(CliError::Usage(format!("--noise must be >= 0, got {}", args.noise)));
        }
        let times = uniform_grid(0.0, args.t_max, args.points)?;
        let noise = (args.noise > 0.0).then_some((args.noise, args.seed));
        let trace = synthetic_trace(&fixed, args.a_rate, &times, noise, args.quad_tol)?;
        if let Some(path) = &args.save_trace {
            let file = File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            trace.write_csv(&mut out)?;
            out.flush()?;
        }
        trace
    } else {
        let path = args.input.as_ref().expect("clap enforces --input");
        load_trace(path).map_err(|e| match e {
            Error::Io(io) => CliError::Io(format!("cannot read {}: {io}", path.display())),
            other => other.into(),
        })?
    };

    let result = fit_cavity_a(&trace, &fixed, args.a_init, &options)?;
    let times = trace.times();
    let (wg, gamma) = fixed.rates(result.a_hat)?;
    let model: Vec<f64> = cavity_curve(&times, wg, gamma, args.quad_tol)?
        .into_iter()
        .map(|p| result.scale_hat * p + result.offset_hat)
        .collect();
    let data: Vec<f64> = trace.points().iter().map(|p| p.p).collect();
    let residual: Vec<f64> = data.iter().zip(&model).map(|(d, m)| d - m).collect();

    let mut ts = new_series("fit", "t_seconds", times)?;
    ts.set_meta("source", trace.source());
    ts.set_meta("Q", args.q);
    ts.set_meta("T", args.temperature);
    ts.set_meta("omega0", sys.omega0);
    ts.set_meta("mu12", sys.mu12);
    ts.set_meta("a_init", args.a_init);
    ts.set_meta("quad_tol", args.quad_tol);
    if args.self_test {
        ts.set_meta("A_true", args.a_rate);
        ts.set_meta("noise", args.noise);
        ts.set_meta("seed", args.seed);
        ts.set_meta("points", args.points);
        ts.set_meta("t_max", args.t_max);
        ts.set_meta("A_relative_error", (result.a_hat - args.a_rate) / args.a_rate);
    }
    ts.set_meta("A_hat", result.a_hat);
    ts.set_meta("A_stddev", result.covariance[0][0].sqrt());
    ts.set_meta("scale_hat", result.scale_hat);
    ts.set_meta("offset_hat", result.offset_hat);
    ts.set_meta("residual_rms", result.residual_rms);
    ts.set_meta("iterations", result.iterations);
    ts.set_meta("converged", result.converged);
    ts.set_meta("gradient_norm", result.gradient_norm);
    ts.set_meta("omega_gamma_hat", wg);
    ts.set_meta("flop_period_hat", 2.0 * PI / wg);
    if !result.converged {
        eprintln!("twolevel: fit did not converge; reporting the best point");
    }
    ts.push_channel("p2", data)?;
    ts.push_channel("model", model)?;
    ts.push_channel("residual", residual)?;
    Ok(ts)
}
