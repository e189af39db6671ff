//! Building universes from external data.
//!
//! Two front ends feed the same pipeline: the line-oriented universe
//! manifest format ([`universe_file`]) and a subset parser for Maven
//! POM files ([`pom`]). Both produce [`ManifestRecord`]s;
//! [`build_universe`] folds records into a graph and accounts for
//! everything it had to skip in an [`IngestReport`].

pub mod pom;
pub mod universe_file;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use sugraph_core::{BuildError, NodeId, Timestamp, Universe};

/// A reference to another release, as declared by a manifest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepRef {
    pub name: String,
    pub release: String,
}

impl fmt::Display for DepRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.release)
    }
}

/// One release and its declared dependencies, normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestRecord {
    pub name: String,
    pub release: String,
    pub time: Timestamp,
    pub deps: Vec<DepRef>,
}

/// A non-fatal problem, attached to the input location it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub locator: String,
    pub reason: String,
}

/// What happened during an ingestion run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub records_read: usize,
    pub nodes_created: usize,
    pub dep_edges_created: usize,
    pub up_edges_created: usize,
    pub skipped_implicit_versions: usize,
    pub skipped_unresolvable: usize,
    pub warnings: Vec<Warning>,
}

impl IngestReport {
    pub fn warn(&mut self, locator: impl Into<String>, reason: impl Into<String>) {
        self.warnings.push(Warning {
            locator: locator.into(),
            reason: reason.into(),
        });
    }

    /// Folds the parse-stage report into this build report.
    ///
    /// The records the builder read are exactly the records parsing
    /// produced, so `records_read` is not summed; parse warnings come
    /// first because they happened first.
    pub fn fold_parse_stage(&mut self, parse: IngestReport) {
        debug_assert_eq!(self.records_read, parse.records_read);
        self.skipped_implicit_versions += parse.skipped_implicit_versions;
        self.skipped_unresolvable += parse.skipped_unresolvable;
        let mut warnings = parse.warnings;
        warnings.append(&mut self.warnings);
        self.warnings = warnings;
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "records read: {}, nodes: {}, dependency edges: {}, update edges: {}",
            self.records_read, self.nodes_created, self.dep_edges_created, self.up_edges_created
        )?;
        writeln!(
            f,
            "skipped: {} implicit versions, {} unresolvable references",
            self.skipped_implicit_versions, self.skipped_unresolvable
        )?;
        for w in &self.warnings {
            writeln!(f, "warning: {}: {}", w.locator, w.reason)?;
        }
        Ok(())
    }
}

/// Fatal ingestion failures. Everything recoverable lands in the
/// report instead.
#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{locator}: {message}")]
    FatalSyntax { locator: String, message: String },
}

/// Numeric-aware ordering on version strings, used only to break
/// equal-timestamp ties when inferring update chains.
///
/// Digit runs compare as integers, other runs as text, and exact
/// string comparison settles anything still equal (so `"1.0"` and
/// `"1.00"` order deterministically).
pub fn compare_releases(a: &str, b: &str) -> Ordering {
    let mut left = segments(a);
    let mut right = segments(b);
    loop {
        match (left.next(), right.next()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) => {
                let ord = match (x, y) {
                    (Segment::Number(x), Segment::Number(y)) => compare_digits(x, y),
                    (Segment::Text(x), Segment::Text(y)) => x.cmp(y),
                    (Segment::Number(_), Segment::Text(_)) => Ordering::Less,
                    (Segment::Text(_), Segment::Number(_)) => Ordering::Greater,
                };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Segment<'a> {
    Number(&'a str),
    Text(&'a str),
}

fn segments(s: &str) -> impl Iterator<Item = Segment<'_>> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    std::iter::from_fn(move || {
        if pos >= bytes.len() {
            return None;
        }
        let start = pos;
        let numeric = bytes[pos].is_ascii_digit();
        while pos < bytes.len() && bytes[pos].is_ascii_digit() == numeric {
            pos += 1;
        }
        let run = &s[start..pos];
        Some(if numeric {
            Segment::Number(run)
        } else {
            Segment::Text(run)
        })
    })
}

fn compare_digits(a: &str, b: &str) -> Ordering {
    let a = a.trim_start_matches('0');
    let b = b.trim_start_matches('0');
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Canonical record order: by name, then time, then release (numeric-
/// aware). This is the node order of every built universe, so ingestion
/// results do not depend on input order.
fn canonical_cmp(a: &ManifestRecord, b: &ManifestRecord) -> Ordering {
    a.name
        .cmp(&b.name)
        .then_with(|| a.time.cmp(&b.time))
        .then_with(|| compare_releases(&a.release, &b.release))
}

/// Folds records into a universe.
///
/// Duplicate `(name, release)` keys keep the first occurrence.
/// Dependency references without a matching record are dropped and
/// counted, not materialized as stub nodes. Update chains link
/// consecutive releases of each name in time order.
pub fn build_universe(records: Vec<ManifestRecord>) -> (Universe, IngestReport) {
    let mut report = IngestReport {
        records_read: records.len(),
        ..IngestReport::default()
    };

    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut unique: Vec<ManifestRecord> = Vec::with_capacity(records.len());
    for record in records {
        if seen.insert((record.name.clone(), record.release.clone())) {
            unique.push(record);
        } else {
            report.warn(
                format!("{}@{}", record.name, record.release),
                "duplicate record key, first occurrence wins",
            );
        }
    }
    unique.sort_by(canonical_cmp);

    let mut universe = Universe::new();
    let mut node_ids: Vec<Option<NodeId>> = Vec::with_capacity(unique.len());
    for record in &unique {
        match universe.add_node(record.name.clone(), record.release.clone(), record.time) {
            Ok(id) => {
                report.nodes_created += 1;
                node_ids.push(Some(id));
            }
            Err(err) => {
                report.warn(
                    format!("{}@{}", record.name, record.release),
                    format!("record skipped: {err}"),
                );
                node_ids.push(None);
            }
        }
    }

    for (record, id) in unique.iter().zip(&node_ids) {
        let Some(from) = *id else { continue };
        let locator = format!("{}@{}", record.name, record.release);
        for dep in &record.deps {
            let Some(to) = universe.get(&dep.name, &dep.release) else {
                report.skipped_unresolvable += 1;
                report.warn(&locator, format!("unresolvable dependency {dep}"));
                continue;
            };
            match universe.add_dependency(from, to) {
                Ok(()) => report.dep_edges_created += 1,
                Err(BuildError::SelfDependency) => {
                    report.warn(&locator, "self-dependency dropped");
                }
                Err(err) => report.warn(&locator, format!("dependency {dep} dropped: {err}")),
            }
        }
    }

    // Nodes are in canonical order, so each name forms a contiguous,
    // time-sorted run; linking neighbours yields the update chains.
    let survivors: Vec<NodeId> = node_ids.into_iter().flatten().collect();
    for window in survivors.windows(2) {
        let (a, b) = (window[0], window[1]);
        if universe.node(a).name == universe.node(b).name {
            universe
                .add_update(a, b)
                .expect("canonical order makes chain links valid");
            report.up_edges_created += 1;
        }
    }

    (universe, report)
}
