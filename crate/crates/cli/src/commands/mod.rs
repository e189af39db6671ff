//! Subcommand implementations and their shared plumbing.
//!
//! Every command builds its complete output in memory and writes it in
//! one go, so identical inputs yield byte-identical files. Reports and
//! summaries go to standard error, never into the data stream.

mod ingest;
mod plots;
mod tables;

pub use ingest::{cmd_ingest, IngestInput};
pub use plots::{cmd_diffusion, cmd_pairs, cmd_release_pairs, DiffusionArgs};
pub use tables::{cmd_accuracy, cmd_recommend, cmd_stats};

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use sugraph_core::{NodeId, Universe, UnknownNode, UnknownProject};

use crate::ingest::universe_file::parse_universe_file;
use crate::ingest::{build_universe, IngestError};
use crate::time::TimeParseError;

/// Exit code 1: IO trouble. 2: unreadable or invalid input. 3: the
/// input was fine but named an entity the universe does not contain.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    Unknown(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Syntax(_) => 2,
            CliError::Unknown(_) => 3,
        }
    }
}

impl From<IngestError> for CliError {
    fn from(err: IngestError) -> CliError {
        match err {
            IngestError::Io(io) => CliError::Io(io),
            fatal @ IngestError::FatalSyntax { .. } => CliError::Syntax(fatal.to_string()),
        }
    }
}

impl From<UnknownNode> for CliError {
    fn from(err: UnknownNode) -> CliError {
        CliError::Unknown(err.to_string())
    }
}

impl From<UnknownProject> for CliError {
    fn from(err: UnknownProject) -> CliError {
        CliError::Unknown(err.to_string())
    }
}

impl From<TimeParseError> for CliError {
    fn from(err: TimeParseError) -> CliError {
        CliError::Syntax(err.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

/// Loads a universe snapshot for querying. Snapshots are machine
/// written, so parsing is strict; build-stage warnings still surface
/// on stderr.
pub fn load_universe(path: &Path) -> Result<Universe, CliError> {
    let file = File::open(path)?;
    let (records, _) = parse_universe_file(BufReader::new(file), true)?;
    let (universe, report) = build_universe(records);
    for warning in &report.warnings {
        eprintln!("warning: {}: {}", warning.locator, warning.reason);
    }
    Ok(universe)
}

/// Writes the finished output to `path`, or stdout when absent.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let mut file = File::create(path)?;
            file.write_all(bytes)?;
        }
        None => {
            std::io::stdout().write_all(bytes)?;
        }
    }
    Ok(())
}

/// `name@release` selector to node id.
pub(crate) fn resolve_release(universe: &Universe, selector: &str) -> Result<NodeId, CliError> {
    let Some((name, release)) = selector.rsplit_once('@') else {
        return Err(CliError::Syntax(format!(
            "release selector {selector:?} is not in name@release form"
        )));
    };
    Ok(universe.resolve(name, release)?)
}

pub(crate) fn node_key(universe: &Universe, id: NodeId) -> String {
    let node = universe.node(id);
    format!("{}@{}", node.name, node.release)
}
