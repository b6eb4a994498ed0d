//! Command-line front end. `run` executes one invocation in-process and returns
//! the exit status with everything that would go to stdout and stderr.

mod commands;
mod input;
mod report;

pub use input::{parse_pants_document, PantsDocument, SCHEMA_VERSION};
pub use report::{fmt_num, ColumnType, Report, Table, Value, REPORT_HEADER};

use crate::error::{Error, Result};
use crate::qc_bounds::UniversalConstants;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

/// Environment variable naming a TOML file with default β₀, β₁.
pub const CONSTANTS_ENV: &str = "AUGTEICH_CONSTANTS";

#[derive(Debug, Parser)]
#[command(name = "augteich", version, about = "Collar geometry, standard quasiconformal maps and convergence checks in augmented Teichmüller space")]
pub struct Cli {
    /// Write the report to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a special function
    Special {
        #[arg(value_enum)]
        function: SpecialFn,
        #[arg(allow_negative_numbers = true)]
        x: f64,
    },
    /// Evaluate a quasiconformal bound (k-eps, k-tilde, k-hat) or extension:r
    Bounds(BoundsArgs),
    /// Report on the surface described by a pants file
    Surface {
        file: PathBuf,
        #[arg(value_enum)]
        action: SurfaceAction,
    },
    /// Check the convergence criterion on the sequence block of a pants file
    Converge(ConvergeArgs),
    /// Distortion sweeps of the standard maps
    #[command(subcommand)]
    Distortion(DistortionCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecialFn {
    Mu,
    MuInverse,
    Lambda,
    AnnulusMod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceAction {
    Lengths,
    HolonomyTraces,
    Collars,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long = "K", default_value_t = 1.0, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b1: Option<f64>,
    /// k-eps | k-tilde | k-hat | extension:<r>
    pub which: String,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    pub file: PathBuf,
    /// Largest grid resolution per chart dimension
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Starting resolution of the refinement
    #[arg(long, default_value_t = 16)]
    pub start_grid: usize,
    /// Absolute tolerance on coordinate residuals
    #[arg(long, default_value_t = 0.1)]
    pub tol: f64,
    /// Required last/first ratio of the metric deviations
    #[arg(long, default_value_t = 0.1)]
    pub metric_tol: f64,
    /// Exhaustion indices j of the compacts F_j
    #[arg(long, value_delimiter = ',', default_values_t = vec![2.0, 4.0, 8.0])]
    pub exhaustion: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum DistortionCmd {
    /// σ_a(ϑ) from A_t(ℓ) to A_t(ℓ̃), one row per target length
    Annulus {
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        to: Vec<f64>,
        /// twist in turns
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// σ(Θ) between the pants with the given boundary lengths
    Pants {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        from: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        to: Vec<f64>,
        /// twists in turns
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = vec![0.0, 0.0, 0.0])]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// depth cut for cusp collars
        #[arg(long, default_value_t = 8.0)]
        cusp_cut: f64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Where β₀, β₁ came from.
#[derive(Debug, Clone)]
pub(crate) struct ConstantsSource {
    pub constants: UniversalConstants,
    pub origin: String,
}

pub(crate) fn load_constants(file: Option<&Path>, b0: Option<f64>, b1: Option<f64>) -> Result<ConstantsSource> {
    let def = UniversalConstants::default();
    let (mut v0, mut v1, mut origin) = (def.b0(), def.b1(), "default".to_string());
    if let Some(path) = file {
        let ctx = format!("{CONSTANTS_ENV}={}", path.display());
        let src = std::fs::read_to_string(path).map_err(|e| Error::schema(&ctx, format!("cannot read: {e}")))?;
        let t: toml::Table = src.parse().map_err(|e: toml::de::Error| Error::schema(&ctx, e.message().to_string()))?;
        if let Some(k) = t.keys().find(|k| !["schema_version", "b0", "b1"].contains(&k.as_str())) {
            return Err(Error::schema(format!("{ctx}:{k}"), "unknown field"));
        }
        match t.get("schema_version") {
            Some(toml::Value::Integer(SCHEMA_VERSION)) => {}
            Some(_) => return Err(Error::schema(format!("{ctx}:schema_version"), "unsupported version")),
            None => return Err(Error::schema(format!("{ctx}:schema_version"), "missing field")),
        }
        let num = |k: &str| -> Result<Option<f64>> {
            match t.get(k) {
                None => Ok(None),
                Some(toml::Value::Float(f)) => Ok(Some(*f)),
                Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
                Some(_) => Err(Error::schema(format!("{ctx}:{k}"), "expected a number")),
            }
        };
        if let Some(x) = num("b0")? {
            v0 = x;
        }
        if let Some(x) = num("b1")? {
            v1 = x;
        }
        origin = format!("file {}", path.display());
    }
    if b0.is_some() || b1.is_some() {
        origin = "flags".into();
    }
    Ok(ConstantsSource { constants: UniversalConstants::new(b0.unwrap_or(v0), b1.unwrap_or(v1))?, origin })
}

/// Runs one invocation; `constants_file` stands in for the environment variable.
pub fn run<I, T>(args: I, constants_file: Option<&Path>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let rendered = commands::execute(&cli.command, constants_file).and_then(|rep| {
        let body = match cli.format {
            Format::Table => rep.to_text(),
            Format::Csv => rep.to_csv(),
        };
        match &cli.out {
            Some(path) => {
                std::fs::write(path, &body).map_err(|e| Error::schema(format!("--out {}", path.display()), e.to_string()))?;
                Ok(String::new())
            }
            None => Ok(body),
        }
    });
    match rendered {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Process entry point: reads the arguments and the constants variable, prints, exits.
pub fn main_entry() -> i32 {
    let file = std::env::var_os(CONSTANTS_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let out = run(std::env::args_os(), file.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
