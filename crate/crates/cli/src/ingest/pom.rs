//! Subset parser for Maven-style POM files.
//!
//! Supported elements: `project` coordinates, one level of `parent`
//! inheritance, `dependencies`, and `dependencyManagement`. Profiles,
//! property interpolation, and imported BOM scopes are out of scope;
//! dependencies whose version is a `${...}` placeholder, `SNAPSHOT`,
//! `latest`, or absent after management lookup are skipped and
//! counted.

use std::collections::HashMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use sugraph_core::Timestamp;
use walkdir::WalkDir;

use super::{DepRef, IngestError, IngestReport, ManifestRecord};
use crate::time::parse_timestamp;

/// Fully qualified coordinates of a POM, as used in `<parent>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PomCoords {
    pub group_id: String,
    pub artifact_id: String,
    pub version: String,
}

/// One `<dependency>` entry, before filtering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawDependency {
    pub group_id: String,
    pub artifact_id: String,
    pub version: Option<String>,
}

/// A POM as written, before parent resolution and filtering.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawPom {
    pub group_id: Option<String>,
    pub artifact_id: Option<String>,
    pub version: Option<String>,
    pub parent: Option<PomCoords>,
    pub dependencies: Vec<RawDependency>,
    pub dependency_management: Vec<RawDependency>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PomError {
    #[error("malformed xml: {0}")]
    MalformedXml(String),
    #[error("missing coordinates: no {0}")]
    MissingCoordinates(&'static str),
    #[error("declared parent does not match the supplied pom")]
    ParentMismatch,
}

/// Parses one POM document into its raw form.
pub fn parse_pom_raw(xml: &str) -> Result<RawPom, PomError> {
    let doc = roxmltree::Document::parse(xml).map_err(|e| PomError::MalformedXml(e.to_string()))?;
    let project = doc.root_element();
    if project.tag_name().name() != "project" {
        return Err(PomError::MalformedXml(format!(
            "expected <project> root, found <{}>",
            project.tag_name().name()
        )));
    }

    let mut pom = RawPom::default();
    for child in project.children().filter(|c| c.is_element()) {
        match child.tag_name().name() {
            "groupId" => pom.group_id = text_of(child),
            "artifactId" => pom.artifact_id = text_of(child),
            "version" => pom.version = text_of(child),
            "parent" => {
                let group_id = child_text(child, "groupId");
                let artifact_id = child_text(child, "artifactId");
                let version = child_text(child, "version");
                match (group_id, artifact_id, version) {
                    (Some(group_id), Some(artifact_id), Some(version)) => {
                        pom.parent = Some(PomCoords {
                            group_id,
                            artifact_id,
                            version,
                        })
                    }
                    _ => {
                        return Err(PomError::MalformedXml(
                            "parent needs groupId, artifactId and version".to_string(),
                        ))
                    }
                }
            }
            "dependencies" => pom.dependencies.extend(parse_dependencies(child)?),
            "dependencyManagement" => {
                for grandchild in child.children().filter(|c| c.is_element()) {
                    if grandchild.tag_name().name() == "dependencies" {
                        pom.dependency_management
                            .extend(parse_dependencies(grandchild)?);
                    }
                }
            }
            _ => {}
        }
    }
    Ok(pom)
}

fn parse_dependencies(node: roxmltree::Node) -> Result<Vec<RawDependency>, PomError> {
    let mut out = Vec::new();
    for dep in node.children().filter(|c| c.is_element()) {
        if dep.tag_name().name() != "dependency" {
            continue;
        }
        let group_id = child_text(dep, "groupId").ok_or(PomError::MalformedXml(
            "dependency without groupId".to_string(),
        ))?;
        let artifact_id = child_text(dep, "artifactId").ok_or(PomError::MalformedXml(
            "dependency without artifactId".to_string(),
        ))?;
        out.push(RawDependency {
            group_id,
            artifact_id,
            version: child_text(dep, "version"),
        });
    }
    Ok(out)
}

fn text_of(node: roxmltree::Node) -> Option<String> {
    node.text()
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
}

fn child_text(node: roxmltree::Node, name: &str) -> Option<String> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == name)
        .and_then(text_of)
}

/// Applies one level of parent inheritance.
///
/// The child's missing `groupId`/`version` come from the parent, the
/// parent's `dependencyManagement` entries are appended after the
/// child's own, and dependency versions the child omits are filled in
/// from that merged management section.
pub fn resolve_parent(child: &RawPom, parent: &RawPom) -> Result<RawPom, PomError> {
    let declared = child.parent.as_ref().ok_or(PomError::ParentMismatch)?;
    let matches = parent.group_id.as_deref() == Some(declared.group_id.as_str())
        && parent.artifact_id.as_deref() == Some(declared.artifact_id.as_str())
        && parent.version.as_deref() == Some(declared.version.as_str());
    if !matches {
        return Err(PomError::ParentMismatch);
    }

    let mut merged = child.clone();
    merged.group_id = merged.group_id.or_else(|| parent.group_id.clone());
    merged.version = merged.version.or_else(|| parent.version.clone());
    merged
        .dependency_management
        .extend(parent.dependency_management.iter().cloned());
    for dep in &mut merged.dependencies {
        if dep.version.is_none() {
            dep.version = managed_version(&merged.dependency_management, dep);
        }
    }
    Ok(merged)
}

fn managed_version(management: &[RawDependency], dep: &RawDependency) -> Option<String> {
    management
        .iter()
        .find(|m| m.group_id == dep.group_id && m.artifact_id == dep.artifact_id)
        .and_then(|m| m.version.clone())
}

fn is_implicit(version: &str) -> bool {
    let lowered = version.to_ascii_lowercase();
    version.contains("${")
        || lowered == "snapshot"
        || lowered == "latest"
        || lowered == "release"
        || lowered.ends_with("-snapshot")
}

/// Turns a (possibly parent-resolved) raw POM into a manifest record.
///
/// `name` is `groupId:artifactId`; `release` is the project version;
/// `time` must be supplied by the caller (upload index or file mtime).
/// Dependencies are filtered here, with skips and dropped duplicates
/// accounted to `report` under `locator`.
pub fn finish_pom(
    raw: &RawPom,
    artifact_time: Timestamp,
    locator: &str,
    report: &mut IngestReport,
) -> Result<ManifestRecord, PomError> {
    let group_id = raw
        .group_id
        .as_deref()
        .ok_or(PomError::MissingCoordinates("groupId"))?;
    let artifact_id = raw
        .artifact_id
        .as_deref()
        .ok_or(PomError::MissingCoordinates("artifactId"))?;
    let version = raw
        .version
        .as_deref()
        .ok_or(PomError::MissingCoordinates("version"))?;
    if is_implicit(version) {
        return Err(PomError::MissingCoordinates("explicit project version"));
    }

    let mut deps = Vec::new();
    let mut seen: HashMap<(String, String), String> = HashMap::new();
    for dep in &raw.dependencies {
        let coordinate = format!("{}:{}", dep.group_id, dep.artifact_id);
        let version = dep
            .version
            .clone()
            .or_else(|| managed_version(&raw.dependency_management, dep));
        let Some(version) = version else {
            report.skipped_implicit_versions += 1;
            report.warn(
                locator,
                format!("dependency {coordinate} has no explicit version"),
            );
            continue;
        };
        if is_implicit(&version) {
            report.skipped_implicit_versions += 1;
            report.warn(
                locator,
                format!("dependency {coordinate}@{version} references an implicit version"),
            );
            continue;
        }
        match seen.entry((dep.group_id.clone(), dep.artifact_id.clone())) {
            std::collections::hash_map::Entry::Occupied(first) => {
                report.warn(
                    locator,
                    format!(
                        "dependency {coordinate} declared again with version {version}, keeping {}",
                        first.get()
                    ),
                );
            }
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(version.clone());
                deps.push(DepRef {
                    name: coordinate,
                    release: version,
                });
            }
        }
    }

    Ok(ManifestRecord {
        name: format!("{group_id}:{artifact_id}"),
        release: version.to_string(),
        time: artifact_time,
        deps,
    })
}

/// One-call form for a self-contained POM document.
pub fn parse_pom(
    xml: &str,
    artifact_time: Timestamp,
    locator: &str,
    report: &mut IngestReport,
) -> Result<ManifestRecord, PomError> {
    let raw = parse_pom_raw(xml)?;
    finish_pom(&raw, artifact_time, locator, report)
}

/// Walks `dir` for `pom.xml` / `*.pom` files and turns them into
/// records.
///
/// Timestamps come from the sidecar index (CSV lines of
/// `path,ISO-timestamp`, paths relative to `dir`) when given, falling
/// back to file modification time with a warning. Parent POMs are
/// matched among the walked files by their declared coordinates.
pub fn load_pom_dir(
    dir: &Path,
    time_index: Option<&Path>,
    strict: bool,
) -> Result<(Vec<ManifestRecord>, IngestReport), IngestError> {
    let mut report = IngestReport::default();
    let index = match time_index {
        Some(path) => load_time_index(path)?,
        None => HashMap::new(),
    };

    let mut files: Vec<PathBuf> = WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .filter_map(|entry| entry.ok())
        .filter(|entry| entry.file_type().is_file())
        .map(|entry| entry.into_path())
        .filter(|path| {
            path.file_name().is_some_and(|n| n == "pom.xml")
                || path.extension().is_some_and(|e| e == "pom")
        })
        .collect();
    files.sort();

    struct Parsed {
        raw: RawPom,
        locator: String,
        time: Timestamp,
    }

    let mut parsed: Vec<Parsed> = Vec::new();
    let mut by_coords: HashMap<PomCoords, usize> = HashMap::new();
    for path in &files {
        let locator = path.display().to_string();
        let xml = fs::read_to_string(path)?;
        let raw = match parse_pom_raw(&xml) {
            Ok(raw) => raw,
            Err(err) => {
                if strict {
                    return Err(IngestError::FatalSyntax {
                        locator,
                        message: err.to_string(),
                    });
                }
                report.warn(locator, err.to_string());
                continue;
            }
        };
        let time = match timestamp_for(path, dir, &index) {
            Some(time) => time,
            None => {
                report.warn(
                    &locator,
                    "no upload timestamp, using file modification time",
                );
                mtime_of(path)?
            }
        };
        if let (Some(g), Some(a), Some(v)) = (&raw.group_id, &raw.artifact_id, &raw.version) {
            by_coords.insert(
                PomCoords {
                    group_id: g.clone(),
                    artifact_id: a.clone(),
                    version: v.clone(),
                },
                parsed.len(),
            );
        }
        parsed.push(Parsed { raw, locator, time });
    }

    let mut records = Vec::new();
    for i in 0..parsed.len() {
        let mut raw = parsed[i].raw.clone();
        if let Some(declared) = raw.parent.clone() {
            match by_coords.get(&declared) {
                Some(&j) => {
                    raw = resolve_parent(&raw, &parsed[j].raw)
                        .expect("coordinate-matched parent cannot mismatch");
                }
                None => report.warn(
                    &parsed[i].locator,
                    format!(
                        "parent {}:{}:{} not found among walked files",
                        declared.group_id, declared.artifact_id, declared.version
                    ),
                ),
            }
        }
        match finish_pom(&raw, parsed[i].time, &parsed[i].locator, &mut report) {
            Ok(record) => {
                records.push(record);
                report.records_read += 1;
            }
            Err(err) => {
                if strict {
                    return Err(IngestError::FatalSyntax {
                        locator: parsed[i].locator.clone(),
                        message: err.to_string(),
                    });
                }
                report.warn(&parsed[i].locator, format!("pom skipped: {err}"));
            }
        }
    }
    Ok((records, report))
}

fn load_time_index(path: &Path) -> Result<HashMap<String, Timestamp>, IngestError> {
    let file = fs::File::open(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(BufReader::new(file));
    let mut index = HashMap::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| IngestError::FatalSyntax {
            locator: format!("{}:{}", path.display(), i + 1),
            message: e.to_string(),
        })?;
        let (Some(key), Some(stamp)) = (row.get(0), row.get(1)) else {
            return Err(IngestError::FatalSyntax {
                locator: format!("{}:{}", path.display(), i + 1),
                message: "expected path,timestamp".to_string(),
            });
        };
        let time = parse_timestamp(stamp.trim()).map_err(|e| IngestError::FatalSyntax {
            locator: format!("{}:{}", path.display(), i + 1),
            message: e.to_string(),
        })?;
        index.insert(key.trim().to_string(), time);
    }
    Ok(index)
}

fn timestamp_for(
    path: &Path,
    root: &Path,
    index: &HashMap<String, Timestamp>,
) -> Option<Timestamp> {
    if index.is_empty() {
        return None;
    }
    let relative = path.strip_prefix(root).unwrap_or(path);
    let normalized = relative.to_string_lossy().replace('\\', "/");
    index
        .get(&normalized)
        .or_else(|| index.get(&path.display().to_string()))
        .copied()
}

fn mtime_of(path: &Path) -> Result<Timestamp, IngestError> {
    let modified = fs::metadata(path)?.modified()?;
    let millis = modified
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| i64::try_from(d.as_millis()).unwrap_or(i64::MAX))
        .unwrap_or(0);
    Ok(Timestamp(millis))
}
