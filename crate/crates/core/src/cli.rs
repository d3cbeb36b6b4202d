//! Command-line surface: JSON in, JSON or CSV out.
//!
//! Exit codes: 0 success, 2 usage, 3 validation, 4 I/O.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::density::{collapse, pure_density, DensityMatrix};
use crate::functional::{gleason_pure_search, GleasonReport};
use crate::paths::{enumerate_paths, marginal_at, WalkSpec};
use crate::simplex::ProbDist;
use crate::sphere::{angles_to_wavefunction, born_decode, encode, sqrt_encode, EulerAngles, WaveFunction};
use crate::transform::{apply_to_wavefunction, clock_rotation, is_deterministic, OrthogonalTransform};
use crate::{algebra, ScalarAlgebra, TOLERANCE};

/// Overrides the tolerance used to validate results before they are printed.
pub const TOLERANCE_ENV: &str = "PSIPARAM_TOLERANCE";

#[derive(Debug, Parser)]
#[command(name = "psiparam", version, about = "Wave-function parametrization of discrete probability distributions")]
pub struct Cli {
    /// Input JSON: a file path, "-" for stdin, or an inline object.
    #[arg(short, long, global = true)]
    pub input: Option<String>,

    /// Output file; stdout when omitted.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distribution {"p": [...]} to Euler angles and wave-function.
    Encode,
    /// Wave-function, angles or density matrix to its distribution.
    Decode,
    /// CSV samples of the two-state probability clock.
    Clock {
        #[arg(long, allow_negative_numbers = true)]
        t_start: f64,
        #[arg(long, allow_negative_numbers = true)]
        t_end: f64,
        #[arg(long)]
        samples: usize,
    },
    /// Density matrix (or wave-function) to its collapsed diagonal.
    Collapse,
    /// Whether an orthogonal/unitary matrix maps events to events.
    CheckDet,
    /// Grid search for a pure 2-D state matching two projection traces.
    Gleason {
        #[arg(long, default_value_t = 100_000)]
        grid: usize,
        #[arg(long, default_value_t = 0.5)]
        target_a: f64,
        #[arg(long, default_value_t = 0.5)]
        target_b: f64,
    },
    /// Path distribution of a ±1 random walk, or its position marginal.
    Walk {
        #[arg(long)]
        steps: Option<usize>,
        /// Up-probabilities, one value or one per step.
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<f64>>,
        /// Emit the position distribution after this many steps instead.
        #[arg(long)]
        marginal: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Tolerance from [`TOLERANCE_ENV`], defaulting to [`TOLERANCE`].
pub fn display_tolerance(raw: Option<&str>) -> Result<f64, CliError> {
    match raw {
        None => Ok(TOLERANCE),
        Some(s) => match s.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(CliError::Usage(format!("{TOLERANCE_ENV} must be a positive number, got {s:?}"))),
        },
    }
}

fn check(what: &str, deviation: f64, tol: f64) -> Result<(), CliError> {
    if deviation <= tol {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{what}: deviation {deviation:e} exceeds tolerance {tol:e}")))
    }
}

fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Validation(format!("malformed JSON: {e}")))
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Validation(format!("invalid {what}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("finite values serialize");
    s.push('\n');
    s
}

fn has_key(value: &Value, key: &str) -> bool {
    value.get(key).is_some()
}

/// Output of `encode`.
#[derive(Serialize)]
struct Encoded {
    angles: EulerAngles,
    wavefunction: WaveFunction,
}

/// Output of `collapse`.
#[derive(Serialize)]
struct Collapsed {
    #[serde(flatten)]
    density: DensityMatrix,
    #[serde(flatten)]
    dist: ProbDist,
}

fn run_encode(input: Value, tol: f64) -> Result<String, CliError> {
    let dist: ProbDist = from_value(input, "distribution")?;
    let angles = encode(&dist);
    let wavefunction = sqrt_encode(&dist);
    check("angle route vs square-root route", angles_to_wavefunction(&angles).max_abs_diff(&wavefunction), tol)?;
    check("Born round trip", born_decode(&wavefunction)?.max_abs_diff(&dist), tol)?;
    Ok(to_json(&Encoded { angles, wavefunction }))
}

fn run_decode(input: Value) -> Result<String, CliError> {
    let dist = if has_key(&input, "amplitudes") {
        let psi: WaveFunction = from_value(input, "wave-function")?;
        match psi.algebra() {
            ScalarAlgebra::Real => born_decode(&psi)?,
            _ => algebra::marginal_born(&psi)?,
        }
    } else if has_key(&input, "theta") {
        born_decode(&angles_to_wavefunction(&from_value(input, "angles")?))?
    } else if has_key(&input, "matrix") {
        from_value::<DensityMatrix>(input, "density matrix")?.probabilities()?
    } else {
        return Err(CliError::Validation(
            "expected an object with \"amplitudes\", \"theta\" or \"matrix\"".into(),
        ));
    };
    Ok(to_json(&dist))
}

fn run_clock(t_start: f64, t_end: f64, samples: usize, tol: f64) -> Result<String, CliError> {
    if samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
    }
    if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
        return Err(CliError::Usage(format!("need finite --t-end > --t-start, got [{t_start}, {t_end}]")));
    }
    let origin = WaveFunction::basis(2, 1)?;
    let step = (t_end - t_start) / (samples - 1) as f64;
    let mut csv = String::from("t,p1,p2,psi1,psi2\n");
    for i in 0..samples {
        let t = if i == samples - 1 { t_end } else { t_start + step * i as f64 };
        let psi = apply_to_wavefunction(&clock_rotation(t), &origin)?;
        let p = born_decode(&psi)?;
        let (s, c) = t.sin_cos();
        check("clock probability p1", (p[0] - c * c).abs(), tol)?;
        check("clock probability p2", (p[1] - s * s).abs(), tol)?;
        let [psi1, psi2] = [psi.coords()[0], psi.coords()[1]];
        writeln!(csv, "{t},{},{},{psi1},{psi2}", p[0], p[1]).expect("writing to a String");
    }
    Ok(csv)
}

fn run_collapse(input: Value, tol: f64) -> Result<String, CliError> {
    let rho = if has_key(&input, "amplitudes") {
        pure_density(&from_value::<WaveFunction>(input, "wave-function")?)?
    } else {
        from_value::<DensityMatrix>(input, "density matrix")?
    };
    let collapsed = collapse(&rho);
    check("collapse trace", (collapsed.trace() - rho.trace()).abs(), tol)?;
    check("collapse idempotence", collapse(&collapsed).matrix().sub(collapsed.matrix())?.max_abs(), tol)?;
    let dist = collapsed.probabilities()?;
    Ok(to_json(&Collapsed { density: collapsed, dist }))
}

fn run_check_det(input: Value) -> Result<String, CliError> {
    let u: OrthogonalTransform = from_value(input, "transform")?;
    Ok(to_json(&is_deterministic(&u)))
}

fn run_gleason(grid: usize, a: f64, b: f64) -> Result<String, CliError> {
    for (flag, v) in [("--target-a", a), ("--target-b", b)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::Usage(format!("{flag} must lie in [0, 1], got {v}")));
        }
    }
    let report: GleasonReport = gleason_pure_search(a, b, grid).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(to_json(&report))
}

fn run_walk(input: Option<Value>, steps: Option<usize>, q: Option<Vec<f64>>, marginal: Option<usize>) -> Result<String, CliError> {
    let spec = match (input, steps, q) {
        (Some(v), None, None) => from_value::<WalkSpec>(v, "walk")?,
        (None, Some(steps), q) => WalkSpec::new(steps, q.unwrap_or_else(|| vec![0.5]))?,
        (None, None, _) => return Err(CliError::Usage("walk needs --steps or an input {\"steps\", \"q\"}".into())),
        (Some(_), _, _) => return Err(CliError::Usage("walk takes either --input or --steps/--q, not both".into())),
    };
    match marginal {
        Some(t) => Ok(to_json(&marginal_at(&spec, t)?)),
        None => Ok(to_json(&enumerate_paths(&spec)?)),
    }
}

fn read_input(source: &str, stdin: &mut dyn Read) -> Result<String, CliError> {
    if source.trim_start().starts_with('{') {
        return Ok(source.to_string());
    }
    let mut text = String::new();
    if source == "-" {
        stdin.read_to_string(&mut text).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(source).map_err(|e| CliError::Io(format!("{source}: {e}")))?;
    }
    Ok(text)
}

/// Computes the text a command prints. Commands that consume JSON read it
/// from `--input`, defaulting to `stdin`.
pub fn render(cli: &Cli, stdin: &mut dyn Read, tol: f64) -> Result<String, CliError> {
    let mut load = || -> Result<Value, CliError> { parse_json(&read_input(cli.input.as_deref().unwrap_or("-"), stdin)?) };
    let no_input = |name: &str| match cli.input {
        Some(_) => Err(CliError::Usage(format!("{name} does not read --input"))),
        None => Ok(()),
    };
    match &cli.command {
        Command::Encode => run_encode(load()?, tol),
        Command::Decode => run_decode(load()?),
        Command::Clock { t_start, t_end, samples } => {
            no_input("clock")?;
            run_clock(*t_start, *t_end, *samples, tol)
        }
        Command::Collapse => run_collapse(load()?, tol),
        Command::CheckDet => run_check_det(load()?),
        Command::Gleason { grid, target_a, target_b } => {
            no_input("gleason")?;
            run_gleason(*grid, *target_a, *target_b)
        }
        Command::Walk { steps, q, marginal } => {
            let input = match cli.input {
                Some(_) => Some(load()?),
                None => None,
            };
            run_walk(input, *steps, q.clone(), *marginal)
        }
    }
}

/// Parses `args`, runs the command against the process streams and returns
/// the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = display_tolerance(std::env::var(TOLERANCE_ENV).ok().as_deref())
        .and_then(|tol| render(&cli, &mut std::io::stdin().lock(), tol))
        .and_then(|text| match &cli.output {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}"))),
        });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("psiparam: {e}");
            e.exit_code()
        }
    }
}
