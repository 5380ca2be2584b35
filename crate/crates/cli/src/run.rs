use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use thiserror::Error;

use fockbell::bell::{
    bell_verdict, correlation_tensor, critical_visibility, FourPartyRegister, PhaseSettings,
};
use fockbell::postselect::{Pipeline, Scheme};
use fockbell::{oracle, Error as CoreError, SchemeResult64};

use crate::circuit_file::{parse_circuit_file, ParseError};
use crate::report::{BellSection, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Ghz,
    Superposition,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Ghz => Scheme::Ghz,
            SchemeArg::Superposition => Scheme::Superposition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Units {
    #[default]
    Rad,
    Deg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Default, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["scheme", "circuit"]))]
pub struct RunArgs {
    /// Built-in generation scheme.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Circuit description file.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Analyzer phases as `p1a,p1b;p2a,p2b;p3a,p3b;p4a,p4b`.
    #[arg(long, conflicts_with = "bell_default", allow_hyphen_values = true)]
    pub phases: Option<String>,
    #[arg(long, value_enum, default_value_t = Units::Rad)]
    pub units: Units,
    /// Bell analysis at φ₁ ∈ {0, π/2}, φ₂,₃,₄ ∈ {-π/4, π/4}.
    #[arg(long)]
    pub bell_default: bool,
    /// Re-check invariants of the computed report.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    EmptyPostselection(CoreError),
    #[error("invariant check failed: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::EmptyPostselection(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

fn core_error(e: CoreError) -> CliError {
    match e {
        CoreError::EmptyPostselection { .. } => CliError::EmptyPostselection(e),
        CoreError::Mode(_) | CoreError::PartyCount { .. } | CoreError::Settings(_) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Invariant(other.to_string()),
    }
}

/// Parses `a,b;c,d;e,f;g,h` into per-party phase pairs in radians.
pub fn parse_phases(text: &str, units: Units) -> Result<[[f64; 2]; 4], CliError> {
    let groups: Vec<&str> = text.split(';').collect();
    if groups.len() != 4 {
        return Err(CliError::Usage(format!(
            "--phases needs 4 `;`-separated parties, got {}",
            groups.len()
        )));
    }
    let mut pairs = [[0.0; 2]; 4];
    for (x, group) in groups.iter().enumerate() {
        let values: Vec<&str> = group.split(',').map(str::trim).collect();
        if values.len() != 2 {
            return Err(CliError::Usage(format!(
                "party {} needs two phases, got `{group}`",
                x + 1
            )));
        }
        for (k, v) in values.iter().enumerate() {
            let phase: f64 = v
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid phase `{v}` for party {}", x + 1)))?;
            pairs[x][k] = match units {
                Units::Rad => phase,
                Units::Deg => phase.to_radians(),
            };
        }
    }
    Ok(pairs)
}

fn load_pipeline(path: &Path) -> Result<(String, Pipeline<f64>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file = parse_circuit_file(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    let name = path.file_stem().map_or_else(
        || "circuit".to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    Ok((name, file.pipeline().map_err(core_error)?))
}

fn bell_section(
    result: &SchemeResult64,
    settings: &PhaseSettings<f64>,
) -> Result<BellSection, CliError> {
    let state = FourPartyRegister::new(result.register.clone()).map_err(core_error)?;
    let tensor = correlation_tensor(&state, settings);
    let verdict = bell_verdict(&tensor);
    let critical_visibility = match critical_visibility(&tensor) {
        Ok(v) => Some(v),
        Err(CoreError::DegenerateTensor) => None,
        Err(e) => return Err(core_error(e)),
    };
    Ok(BellSection {
        tensor,
        verdict,
        critical_visibility,
    })
}

fn verify(
    scheme: Option<Scheme>,
    result: &SchemeResult64,
    bell: Option<&BellSection>,
) -> Result<(), CliError> {
    let tol = 1e-12;
    if (result.register.norm_sqr() - 1.0).abs() > tol {
        return Err(CliError::Invariant("register is not normalized".into()));
    }
    if !(0.0..=1.0).contains(&result.success_probability) {
        return Err(CliError::Invariant(
            "success probability outside [0, 1]".into(),
        ));
    }
    if let Some(b) = bell {
        let err = b.tensor.round_trip_error();
        if err >= tol {
            return Err(CliError::Invariant(format!(
                "tensor round trip error {err:e}"
            )));
        }
    }
    if let Some(scheme) = scheme {
        let reference = oracle::scheme_success_probability::<f64>(scheme == Scheme::Superposition);
        if (reference - result.success_probability).abs() >= tol {
            return Err(CliError::Invariant(format!(
                "oracle probability {reference} disagrees with {}",
                result.success_probability
            )));
        }
    }
    Ok(())
}

/// Executes the requested pipeline and analysis.
pub fn run_report(args: &RunArgs) -> Result<Report, CliError> {
    let (name, pipeline, scheme) = match (&args.scheme, &args.circuit) {
        (Some(s), None) => {
            let scheme = Scheme::from(*s);
            (
                scheme.name().to_string(),
                scheme.pipeline::<f64>(),
                Some(scheme),
            )
        }
        (None, Some(path)) => {
            let (name, pipeline) = load_pipeline(path)?;
            (name, pipeline, None)
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --scheme or --circuit".into(),
            ))
        }
    };

    let result = pipeline.run().map_err(core_error)?;

    let settings = match (&args.phases, args.bell_default) {
        (Some(text), false) => {
            Some(PhaseSettings::new(parse_phases(text, args.units)?).map_err(core_error)?)
        }
        (None, true) => Some(PhaseSettings::standard()),
        (None, false) => None,
        (Some(_), true) => {
            return Err(CliError::Usage(
                "--phases conflicts with --bell-default".into(),
            ))
        }
    };
    let bell = settings.map(|s| bell_section(&result, &s)).transpose()?;

    if args.verify {
        verify(scheme, &result, bell.as_ref())?;
    }
    Ok(Report::new(&name, &result, bell.as_ref()))
}

/// Runs and renders; returns the rendered report or the error with its exit code.
pub fn execute(args: &RunArgs) -> Result<String, (CliError, i32)> {
    match run_report(args) {
        Ok(report) => Ok(match args.output {
            OutputFormat::Json => report.to_json(),
            OutputFormat::Text => report.to_text(),
        }),
        Err(e) => {
            let code = e.exit_code();
            Err((e, code))
        }
    }
}
