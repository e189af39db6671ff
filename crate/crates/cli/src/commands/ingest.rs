//! The `ingest` subcommand: normalize input into a universe snapshot.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::ingest::build_universe;
use crate::ingest::pom::load_pom_dir;
use crate::ingest::universe_file::{parse_universe_file, write_universe};

use super::{write_output, CliError};

pub enum IngestInput<'a> {
    /// A universe manifest file, re-emitted in canonical form.
    Universe(&'a Path),
    /// A directory tree of POM files.
    PomDir {
        dir: &'a Path,
        time_index: Option<&'a Path>,
    },
}

pub fn cmd_ingest(
    input: IngestInput<'_>,
    output: Option<&Path>,
    strict: bool,
) -> Result<(), CliError> {
    let (records, parse_report) = match input {
        IngestInput::Universe(path) => {
            let file = File::open(path)?;
            parse_universe_file(BufReader::new(file), strict)?
        }
        IngestInput::PomDir { dir, time_index } => {
            if !dir.is_dir() {
                return Err(CliError::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("{} is not a directory", dir.display()),
                )));
            }
            load_pom_dir(dir, time_index, strict)?
        }
    };
    let (universe, mut report) = build_universe(records);
    report.fold_parse_stage(parse_report);

    let mut snapshot = Vec::new();
    write_universe(&universe, &mut snapshot)?;
    write_output(output, &snapshot)?;
    eprint!("{report}");
    Ok(())
}
