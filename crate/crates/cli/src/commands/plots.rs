//! Plot-producing subcommands: diffusion, project pairs, release pairs.

use std::path::Path;

use sugraph_core::{
    aggregate, diffusion_series, intensity, release_pair_matrix, superseding_point, variety_at,
    MetricKind, NodeId, ProjectId, ProjectView, Timestamp,
};

use crate::export::csv_bytes;
use crate::export::svg::{self, Marker, ReleaseGrid, SeriesLine};
use crate::time::format_timestamp;

use super::{load_universe, node_key, resolve_release, write_output, CliError, OutputFormat};

pub struct DiffusionArgs<'a> {
    pub universe: &'a Path,
    /// `name@release` selectors, charted in the order given.
    pub releases: &'a [String],
    /// Project labels; expands to every release of the project.
    pub projects: &'a [String],
    /// Metric drawn in SVG output (CSV always carries both).
    pub kind: MetricKind,
    pub from: Option<Timestamp>,
    pub to: Option<Timestamp>,
    pub format: OutputFormat,
    pub output: Option<&'a Path>,
}

pub fn cmd_diffusion(args: &DiffusionArgs<'_>) -> Result<(), CliError> {
    if let (Some(from), Some(to)) = (args.from, args.to) {
        if from >= to {
            return Err(CliError::Syntax(
                "window start must precede window end".to_string(),
            ));
        }
    }
    let universe = load_universe(args.universe)?;
    let view = aggregate(&universe);

    let mut subjects: Vec<NodeId> = Vec::new();
    for selector in args.releases {
        subjects.push(resolve_release(&universe, selector)?);
    }
    for label in args.projects {
        let project = view.resolve(label)?;
        subjects.extend(view.members(project).iter().copied());
    }
    if subjects.is_empty() {
        return Err(CliError::Syntax(
            "select at least one --release or --project".to_string(),
        ));
    }
    subjects.dedup();

    let in_window =
        |t: Timestamp| args.from.is_none_or(|from| t >= from) && args.to.is_none_or(|to| t <= to);

    match args.format {
        OutputFormat::Csv => {
            let mut rows = Vec::new();
            for &subject in &subjects {
                let key = node_key(&universe, subject);
                let series = diffusion_series(&universe, subject, MetricKind::Popularity);
                for &(t, pop) in series.samples.iter().filter(|&&(t, _)| in_window(t)) {
                    rows.push(vec![
                        format_timestamp(t),
                        key.clone(),
                        pop.to_string(),
                        variety_at(&universe, subject, t).to_string(),
                    ]);
                }
            }
            let bytes = csv_bytes(&["time", "release", "popularity", "variety"], rows);
            write_output(args.output, &bytes)
        }
        OutputFormat::Svg => {
            let lines: Vec<SeriesLine> = subjects
                .iter()
                .map(|&subject| SeriesLine {
                    label: node_key(&universe, subject),
                    samples: diffusion_series(&universe, subject, args.kind)
                        .samples
                        .into_iter()
                        .filter(|&(t, _)| in_window(t))
                        .collect(),
                })
                .collect();
            // mark where a selected release overtakes its selected predecessor
            let mut markers = Vec::new();
            for &a in &subjects {
                let Some(b) = universe.update_next(a).filter(|b| subjects.contains(b)) else {
                    continue;
                };
                if let Some(point) = superseding_point(&universe, a, b, args.kind)
                    .expect("chain-adjacent subjects share a project")
                {
                    if in_window(point.time) {
                        let value = match args.kind {
                            MetricKind::Popularity => {
                                sugraph_core::popularity_at(&universe, b, point.time)
                            }
                            MetricKind::Variety => variety_at(&universe, b, point.time),
                        };
                        markers.push(Marker {
                            time: point.time,
                            value,
                        });
                    }
                }
            }
            let title = format!("{} over time", args.kind);
            let bytes = svg::render_diffusion(&title, &lines, &markers);
            write_output(args.output, bytes.as_bytes())
        }
    }
}

fn resolve_selection(
    view: &ProjectView,
    labels: &[String],
    minimum: usize,
) -> Result<Vec<ProjectId>, CliError> {
    let mut selection = Vec::with_capacity(labels.len());
    for label in labels {
        let id = view.resolve(label)?;
        if selection.contains(&id) {
            return Err(CliError::Syntax(format!(
                "project {label} selected more than once"
            )));
        }
        selection.push(id);
    }
    if selection.len() < minimum {
        return Err(CliError::Syntax(format!(
            "select at least {minimum} distinct projects"
        )));
    }
    Ok(selection)
}

pub fn cmd_pairs(
    universe_path: &Path,
    projects: &[String],
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let universe = load_universe(universe_path)?;
    let view = aggregate(&universe);
    let selection = resolve_selection(&view, projects, 2)?;

    let matrix: Vec<Vec<Option<f64>>> = selection
        .iter()
        .map(|&row| {
            selection
                .iter()
                .map(|&col| {
                    (row != col).then(|| {
                        intensity(&view, row, col, &selection)
                            .expect("selection is distinct and contains both members")
                    })
                })
                .collect()
        })
        .collect();
    let labels: Vec<String> = selection
        .iter()
        .map(|&p| view.label(p).to_string())
        .collect();

    match format {
        OutputFormat::Csv => {
            let mut header = vec!["project"];
            header.extend(labels.iter().map(String::as_str));
            let rows = labels.iter().zip(&matrix).map(|(label, row)| {
                let mut cells = vec![label.clone()];
                cells.extend(row.iter().map(|cell| match cell {
                    Some(v) => v.to_string(),
                    None => String::new(),
                }));
                cells
            });
            let bytes = csv_bytes(&header, rows);
            write_output(output, &bytes)
        }
        OutputFormat::Svg => {
            let svg = svg::render_heatmap("co-dependency intensity", &labels, &matrix);
            write_output(output, svg.as_bytes())
        }
    }
}

pub fn cmd_release_pairs(
    universe_path: &Path,
    projects: &[String],
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let universe = load_universe(universe_path)?;
    let view = aggregate(&universe);
    if projects.len() != 2 {
        return Err(CliError::Syntax(
            "release-pairs needs exactly two --project selections".to_string(),
        ));
    }
    let selection = resolve_selection(&view, projects, 2)?;
    let matrix = release_pair_matrix(&universe, &view, selection[0], selection[1])
        .expect("selection is two distinct projects");

    match format {
        OutputFormat::Csv => {
            let mut rows = Vec::new();
            for (i, &x) in matrix.axis_x.iter().enumerate() {
                for (j, &y) in matrix.axis_y.iter().enumerate() {
                    rows.push(vec![
                        "pair".to_string(),
                        node_key(&universe, x),
                        node_key(&universe, y),
                        matrix.counts[i][j].to_string(),
                        matrix.intensity[i][j].to_string(),
                    ]);
                }
            }
            for (i, &x) in matrix.axis_x.iter().enumerate() {
                rows.push(vec![
                    "outside_x".to_string(),
                    node_key(&universe, x),
                    String::new(),
                    matrix.outside_x[i].to_string(),
                    String::new(),
                ]);
            }
            for (j, &y) in matrix.axis_y.iter().enumerate() {
                rows.push(vec![
                    "outside_y".to_string(),
                    String::new(),
                    node_key(&universe, y),
                    matrix.outside_y[j].to_string(),
                    String::new(),
                ]);
            }
            let bytes = csv_bytes(
                &["kind", "x_release", "y_release", "popularity", "intensity"],
                rows,
            );
            write_output(output, &bytes)
        }
        OutputFormat::Svg => {
            let x_labels: Vec<String> = matrix
                .axis_x
                .iter()
                .map(|&n| universe.node(n).release.clone())
                .collect();
            let y_labels: Vec<String> = matrix
                .axis_y
                .iter()
                .map(|&n| universe.node(n).release.clone())
                .collect();
            let title = format!(
                "{} vs {} release pairs",
                view.label(selection[0]),
                view.label(selection[1])
            );
            let svg = svg::render_release_grid(&ReleaseGrid {
                title: &title,
                x_labels: &x_labels,
                y_labels: &y_labels,
                counts: &matrix.counts,
                intensity: &matrix.intensity,
                outside_x: &matrix.outside_x,
                outside_y: &matrix.outside_y,
            });
            write_output(output, svg.as_bytes())
        }
    }
}
