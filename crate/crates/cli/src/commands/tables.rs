//! Table-producing subcommands: recommend, accuracy, stats.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;
use sugraph_core::{
    aggregate, codependency_rank, cross_repo_report, reuse, RecommendError, SystemProfile,
};

use crate::export::csv_bytes;
use crate::time::format_timestamp;

use super::{load_universe, write_output, CliError};

impl From<RecommendError> for CliError {
    fn from(err: RecommendError) -> CliError {
        CliError::Syntax(err.to_string())
    }
}

pub fn cmd_recommend(
    universe_path: &Path,
    anchor: &str,
    k: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let universe = load_universe(universe_path)?;
    let view = aggregate(&universe);
    let list = codependency_rank(&view, view.resolve(anchor)?, k)?;
    let rows = list
        .entries
        .iter()
        .enumerate()
        .map(|(i, &(project, score))| {
            vec![
                (i + 1).to_string(),
                view.label(project).to_string(),
                score.to_string(),
            ]
        });
    let bytes = csv_bytes(&["rank", "project", "score"], rows);
    write_output(output, &bytes)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    system: String,
    libraries: Vec<String>,
}

/// Reads system profiles: one JSON object per line, `#` comments and
/// blank lines ignored.
pub fn read_profiles(path: &Path) -> Result<Vec<SystemProfile>, CliError> {
    let file = File::open(path)?;
    let mut profiles = Vec::new();
    for (number, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let raw: RawProfile = serde_json::from_str(line).map_err(|e| {
            CliError::Syntax(format!("{}: line {}: {e}", path.display(), number + 1))
        })?;
        profiles.push(SystemProfile::new(raw.system, raw.libraries));
    }
    Ok(profiles)
}

pub fn cmd_accuracy(
    universe_path: &Path,
    profiles_path: &Path,
    k: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let universe = load_universe(universe_path)?;
    let view = aggregate(&universe);
    let profiles = read_profiles(profiles_path)?;
    let report = cross_repo_report(&view, &profiles, k)?;

    let rows = report
        .rows
        .iter()
        .map(|(system, accuracy)| vec![system.clone(), accuracy.to_string()]);
    let bytes = csv_bytes(&["system", "accuracy"], rows);
    write_output(output, &bytes)?;

    if let Some(summary) = report.summary {
        eprintln!(
            "accuracy over {} systems: min {} / q1 {} / median {} / q3 {} / max {}",
            report.rows.len(),
            summary.min,
            summary.q1,
            summary.median,
            summary.q3,
            summary.max
        );
    } else {
        eprintln!("accuracy: no systems evaluated");
    }
    Ok(())
}

pub fn cmd_stats(universe_path: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let universe = load_universe(universe_path)?;
    let view = aggregate(&universe);
    let times: Vec<_> = universe.ids().map(|id| universe.node(id).time).collect();

    let mut rows = vec![
        vec!["nodes".to_string(), universe.node_count().to_string()],
        vec!["projects".to_string(), view.project_count().to_string()],
        vec![
            "dependency_edges".to_string(),
            universe.dep_edge_count().to_string(),
        ],
        vec![
            "update_edges".to_string(),
            universe.up_edge_count().to_string(),
        ],
        vec!["reuse".to_string(), reuse(&universe).to_string()],
    ];
    if let (Some(&first), Some(&last)) = (times.iter().min(), times.iter().max()) {
        rows.push(vec!["first_release".to_string(), format_timestamp(first)]);
        rows.push(vec!["last_release".to_string(), format_timestamp(last)]);
    }
    let bytes = csv_bytes(&["metric", "value"], rows);
    write_output(output, &bytes)
}
