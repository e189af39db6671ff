//! The line-oriented universe manifest format.
//!
//! UTF-8, one JSON object per line: `{"name": ..., "release": ...,
//! "time": ISO-8601, "deps": ["name@release", ...]}`. Lines starting
//! with `#` and blank lines are ignored. The same format doubles as
//! the snapshot a built universe is written back to, in canonical node
//! order, which makes parse -> serialize -> parse a fixed point.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sugraph_core::Universe;

use super::{DepRef, IngestError, IngestReport, ManifestRecord};
use crate::time::{format_timestamp, parse_timestamp};

/// Bumped when the line schema changes incompatibly.
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    name: String,
    release: String,
    time: String,
    deps: Vec<String>,
}

/// Parses the universe format.
///
/// With `strict` set, any malformed line aborts with
/// [`IngestError::FatalSyntax`]; otherwise problems become warnings and
/// the line is skipped.
pub fn parse_universe_file(
    reader: impl BufRead,
    strict: bool,
) -> Result<(Vec<ManifestRecord>, IngestReport), IngestError> {
    let mut records = Vec::new();
    let mut report = IngestReport::default();

    for (number, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        let locator = format!("line {}", number + 1);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            check_version_header(comment, &locator)?;
            continue;
        }
        match parse_line(line, &locator, &mut report) {
            Ok(record) => {
                records.push(record);
                report.records_read += 1;
            }
            Err(message) => {
                if strict {
                    return Err(IngestError::FatalSyntax { locator, message });
                }
                report.warn(locator, message);
            }
        }
    }
    Ok((records, report))
}

fn check_version_header(comment: &str, locator: &str) -> Result<(), IngestError> {
    let comment = comment.trim();
    if let Some(version) = comment.strip_prefix("universe format v") {
        if version.trim() != FORMAT_VERSION.to_string() {
            return Err(IngestError::FatalSyntax {
                locator: locator.to_string(),
                message: format!(
                    "unsupported universe format v{}, this build reads v{FORMAT_VERSION}",
                    version.trim()
                ),
            });
        }
    }
    Ok(())
}

fn parse_line(
    line: &str,
    locator: &str,
    report: &mut IngestReport,
) -> Result<ManifestRecord, String> {
    let raw: RawLine = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    if raw.name.is_empty() || raw.release.is_empty() {
        return Err("name and release must be non-empty".to_string());
    }
    let time = parse_timestamp(&raw.time).map_err(|e| e.to_string())?;

    let mut deps = Vec::with_capacity(raw.deps.len());
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for dep in &raw.deps {
        let Some((name, release)) = dep.rsplit_once('@') else {
            return Err(format!("dependency {dep:?} is not in name@release form"));
        };
        if name.is_empty() || release.is_empty() {
            return Err(format!("dependency {dep:?} has an empty name or release"));
        }
        if seen.insert((name.to_string(), release.to_string())) {
            deps.push(DepRef {
                name: name.to_string(),
                release: release.to_string(),
            });
        } else {
            report.warn(locator, format!("duplicate dependency {dep} removed"));
        }
    }
    Ok(ManifestRecord {
        name: raw.name,
        release: raw.release,
        time,
        deps,
    })
}

/// Writes a universe back out in canonical form: one line per node in
/// canonical node order, dependencies in stored adjacency order.
pub fn write_universe(universe: &Universe, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "# universe format v{FORMAT_VERSION}")?;
    for id in universe.ids() {
        let node = universe.node(id);
        let raw = RawLine {
            name: node.name.clone(),
            release: node.release.clone(),
            time: format_timestamp(node.time),
            deps: universe
                .depend(id)
                .iter()
                .map(|&d| {
                    let target = universe.node(d);
                    format!("{}@{}", target.name, target.release)
                })
                .collect(),
        };
        let json = serde_json::to_string(&raw).expect("plain strings always serialize");
        writeln!(out, "{json}")?;
    }
    Ok(())
}
