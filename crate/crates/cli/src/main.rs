//! `mnv`: sample, verify and mesh the Moutard-transformed potentials.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a numerical acceptance check
//! failed, 3 I/O error. Errors are reported on stderr as one JSON object.

mod commands;
mod config;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{parse_coefficients, parse_grid, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "mnv", version, about = "Blow-up solutions of the modified Novikov-Veselov equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample U and V on a grid and write CSV
    Field,
    /// Finite-difference residuals of the equation and its constraint (JSON)
    Verify {
        /// Verify values read from a CSV written by --dump-csv
        #[arg(long)]
        from_csv: Option<PathBuf>,
        /// Write every sampled stencil value as CSV
        #[arg(long)]
        dump_csv: Option<PathBuf>,
    },
    /// Integral of U^2 over the plane at each time (JSON)
    Conserve,
    /// Weierstrass surface mesh (OBJ)
    Surface,
    /// Inverted deformed surface mesh (OBJ)
    Invert,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Blow-up time
    #[arg(long = "C", global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Sample time (repeatable)
    #[arg(long = "t", global = true, allow_negative_numbers = true)]
    t: Vec<f64>,
    /// Output path (stdout if omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Quadrature tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Spatial finite-difference step
    #[arg(long, global = true)]
    h: Option<f64>,
    /// XMIN,XMAX,YMIN,YMAX,NX,NY
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_grid)]
    grid: Option<mnv_core::Grid>,
    /// Coefficients of p as re:im, constant term first
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_coefficients)]
    spinor_p: Option<config::Coefficients>,
    /// Coefficients of q as re:im, constant term first
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_coefficients)]
    spinor_q: Option<config::Coefficients>,
}

impl Common {
    fn into_config(self) -> Result<RunConfig, Failure> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(c) = self.c {
            cfg.c = c;
        }
        if !self.t.is_empty() {
            cfg.times = self.t;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(h) = self.h {
            cfg.h = h;
        }
        if let Some(g) = self.grid {
            cfg.grid = g;
        }
        if let Some(p) = self.spinor_p {
            cfg.spinor_p = p.0;
        }
        if let Some(q) = self.spinor_q {
            cfg.spinor_q = q.0;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Validation,
    Acceptance,
    Io,
}

#[derive(Debug)]
pub struct Failure {
    kind: FailureKind,
    tag: &'static str,
    message: String,
}

impl Failure {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self {
            kind: FailureKind::Validation,
            tag: "InvalidArgument",
            message: msg.into(),
        }
    }

    pub fn acceptance(msg: impl Into<String>) -> Self {
        Self {
            kind: FailureKind::Acceptance,
            tag: "AcceptanceFailure",
            message: msg.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self {
            kind: FailureKind::Io,
            tag: "Io",
            message: format!("{}: {e}", path.display()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self.kind {
            FailureKind::Validation => 1,
            FailureKind::Acceptance => 2,
            FailureKind::Io => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tag, self.message)
    }
}

impl From<mnv_core::Error> for Failure {
    fn from(e: mnv_core::Error) -> Self {
        use mnv_core::Error as E;
        let kind = match e {
            E::ToleranceNotMet { .. } | E::QuadratureFailure { .. } => FailureKind::Acceptance,
            _ => FailureKind::Validation,
        };
        Self {
            kind,
            tag: e.kind(),
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::validation(e.to_string().trim().to_string());
            eprintln!("{}", json!({ "error": f.tag, "message": f.message, "exit_code": f.exit_code() }));
            return ExitCode::from(f.exit_code());
        }
    };
    let result = cli.common.into_config().and_then(|cfg| match cli.command {
        Command::Field => commands::field(&cfg),
        Command::Verify { from_csv, dump_csv } => commands::verify(&cfg, from_csv.as_deref(), dump_csv.as_deref()),
        Command::Conserve => commands::conserve(&cfg),
        Command::Surface => commands::surface(&cfg),
        Command::Invert => commands::invert(&cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let body = json!({ "error": f.tag, "message": f.message, "exit_code": f.exit_code() });
            eprintln!("{body}");
            ExitCode::from(f.exit_code())
        }
    }
}
