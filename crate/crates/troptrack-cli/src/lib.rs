//! Command-line frontend for `troptrack`.
//!
//! Every command prints one canonical JSON document (sorted keys, exact
//! rationals as `"p/q"` strings) except `fan export --format dot`. Module
//! errors exit with status 1 and parse errors with status 2; both print
//! `{"error": {"code", "message"}}` on stderr.
//!
//! Inputs are JSON files, or `bundled:<name>` for the shipped fixtures
//! (`sphere4`, `sphere5`, `torus`, `torus2`, `torus-lr`, `torus-finite`).
//! When `TROPTRACK_CACHE_DIR` is set, fan exports and stability reports are
//! stored there under a hash of their inputs and replayed byte for byte.

mod cache;
mod commands;
mod input;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use troptrack::Error;

/// Exit status and printed text of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "troptrack", version, about = "Train tracks, tropical coordinates and mutation loops")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Triangulated surfaces.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Flip one arc, optionally carrying a point along.
    Flip {
        tri: String,
        #[arg(long)]
        arc: String,
        /// A or X point in the chart of `tri`.
        #[arg(long)]
        point: Option<String>,
    },
    /// Exchange matrix of a triangulation.
    Bmatrix { tri: String },
    /// Tropical potential.
    #[command(subcommand)]
    Potential(PotentialCmd),
    /// Suited and complete train tracks.
    #[command(subcommand)]
    Tracks(TracksCmd),
    /// Mutation loops.
    #[command(subcommand)]
    Loop(LoopCmd),
    /// Fan of complete-track cones.
    #[command(subcommand)]
    Fan(FanCmd),
}

#[derive(Subcommand, Debug)]
pub enum SurfaceCmd {
    /// Validate a triangulation and print it canonically.
    Build { tri: String },
}

#[derive(Subcommand, Debug)]
pub enum PotentialCmd {
    /// Per-puncture min-expressions, and values at a point when given.
    Eval {
        tri: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Full-dimensional linearity domains.
    Domains {
        tri: String,
        /// Restrict to the zero locus of the potential.
        #[arg(long)]
        on_v: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum TracksCmd {
    /// Suited tracks, or complete tracks with `--complete`.
    Enumerate {
        tri: String,
        #[arg(long)]
        complete: bool,
    },
    /// Cone of transverse measures.
    Cone { tri: String, track: String },
    /// An elementary move; lists the available sites without `--kind`.
    Move {
        tri: String,
        track: String,
        /// left-split, right-split, central-split, fold or shift.
        #[arg(long, requires = "branch")]
        kind: Option<String>,
        #[arg(long)]
        branch: Option<usize>,
    },
    /// Related complete tracks across a flip.
    Lambda {
        tri: String,
        track: String,
        #[arg(long)]
        arc: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct LoopInput {
    #[arg(name = "loop")]
    pub lp: String,
    /// Triangulation a loop may name as its base.
    #[arg(long)]
    pub base: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct StabilityArgs {
    #[arg(long, default_value_t = 30)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    /// Also try powers of the loop up to this exponent.
    #[arg(long, default_value_t = 1)]
    pub max_power: usize,
    /// X-point samples; unit vectors when absent.
    #[arg(long = "sample")]
    pub samples: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum LoopCmd {
    /// Validate a loop.
    Check(LoopInput),
    /// Signs of the path along an orbit.
    Signs {
        #[command(flatten)]
        input: LoopInput,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
    },
    /// Sign-stability report.
    Stability {
        #[command(flatten)]
        input: LoopInput,
        #[command(flatten)]
        opts: StabilityArgs,
    },
    /// Entropy summary of a sign-stable loop.
    Entropy {
        #[command(flatten)]
        input: LoopInput,
        #[command(flatten)]
        opts: StabilityArgs,
    },
    /// A complete track carried into itself by the loop.
    InvariantTrack {
        #[command(flatten)]
        input: LoopInput,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FanFormat {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum FanCmd {
    /// Complete-track cones and their facet adjacency.
    Export {
        tri: String,
        #[arg(long, value_enum, default_value_t = FanFormat::Json)]
        format: FanFormat,
    },
}

/// Failure of a command, before rendering.
#[derive(Debug)]
pub enum Failure {
    Module(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Module(Error::Parse(_)) | Failure::Usage(_) => 2,
            Failure::Module(_) | Failure::Io(_) => 1,
        }
    }

    fn render(&self) -> String {
        let (code, message) = match self {
            Failure::Module(e) => (e.code(), e.to_string()),
            Failure::Io(m) => ("IoError", m.clone()),
            Failure::Usage(m) => ("UsageError", m.clone()),
        };
        let v = json!({"error": {"code": code, "message": message}});
        format!("{}\n", troptrack::json::to_canonical(&v))
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => {
                    let f = Failure::Usage(e.to_string().trim_end().to_string());
                    Outcome { code: f.code(), stdout: String::new(), stderr: f.render() }
                }
            };
        }
    };
    match commands::execute(&cli.command) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(f) => Outcome { code: f.code(), stdout: String::new(), stderr: f.render() },
    }
}
