//! Command-line front end: JSON configs in, CSV/SVG and text reports out.
//!
//! Every failure maps to a distinct process exit code and a single
//! machine-readable stderr line, `h2cruise: error kind=<kind> code=<n>: <msg>`.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{load_config, RunConfig};

pub mod exit {
    pub const OK: u8 = 0;
    /// Some sweep points failed, or a non-envelope validate check failed.
    pub const PARTIAL: u8 = 1;
    pub const NO_SOLUTION: u8 = 2;
    pub const INFEASIBLE: u8 = 3;
    pub const CONFIG: u8 = 4;
    pub const RANGE_EXCEEDED: u8 = 5;
    pub const SHOOTING_DIVERGED: u8 = 6;
    pub const IO: u8 = 7;
    pub const DOMAIN: u8 = 8;
    pub const USAGE: u8 = 64;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Solver(#[from] h2cruise::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use h2cruise::Error as E;
        match self {
            Self::Config(_) => "config",
            Self::Io { .. } => "io",
            Self::Solver(e) => match e {
                E::NoSolution { .. } => "no-solution",
                E::Infeasible(_) => "infeasible",
                E::RangeExceeded { .. } => "range-exceeded",
                E::ShootingDiverged { .. } => "shooting-diverged",
                E::InvalidParameter { .. } | E::OutOfRange { .. } => "config",
                E::Domain(_) => "domain",
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "no-solution" => exit::NO_SOLUTION,
            "infeasible" => exit::INFEASIBLE,
            "config" => exit::CONFIG,
            "range-exceeded" => exit::RANGE_EXCEEDED,
            "shooting-diverged" => exit::SHOOTING_DIVERGED,
            "io" => exit::IO,
            _ => exit::DOMAIN,
        }
    }

    /// The single stderr line printed before exiting.
    pub fn diagnostic(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("h2cruise: error kind={} code={}: {msg}", self.kind(), self.exit_code())
    }
}
