//! Project-level aggregation of a universe.
//!
//! A *project* is an equivalence class of releases connected by the
//! update relation. [`ProjectView`] collapses each class to a single
//! node, keeps one merged dependency edge per ordered project pair, and
//! drops update edges entirely.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};

use crate::universe::{NodeId, Universe};

/// Dense handle for a project inside one [`ProjectView`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectId(u32);

impl ProjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn from_index(index: usize) -> ProjectId {
        ProjectId(u32::try_from(index).expect("project count exceeds u32 range"))
    }
}

/// Lookup failure for a project label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownProject {
    pub label: String,
}

impl fmt::Display for UnknownProject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown project {}", self.label)
    }
}

impl core::error::Error for UnknownProject {}

/// The project-level view of a universe.
///
/// Node ids stored here refer to the universe the view was aggregated
/// from; keep that universe around for release-level queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectView {
    labels: Vec<String>,
    members: Vec<Vec<NodeId>>,
    node_project: Vec<ProjectId>,
    label_index: HashMap<String, ProjectId>,
    dep_out: Vec<Vec<ProjectId>>,
    dep_in: Vec<Vec<ProjectId>>,
    dep_edge_count: usize,
}

impl ProjectView {
    pub fn project_count(&self) -> usize {
        self.labels.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = ProjectId> + '_ {
        (0..self.labels.len()).map(ProjectId::from_index)
    }

    /// Human-readable project identifier.
    ///
    /// Normally the shared release name. When a universe contains
    /// several unlinked chains under one name, each class is suffixed
    /// `#1`, `#2`, ... in order of first appearance, so no class
    /// silently shadows another.
    pub fn label(&self, p: ProjectId) -> &str {
        &self.labels[p.index()]
    }

    pub fn get(&self, label: &str) -> Option<ProjectId> {
        self.label_index.get(label).copied()
    }

    pub fn resolve(&self, label: &str) -> Result<ProjectId, UnknownProject> {
        self.get(label).ok_or_else(|| UnknownProject {
            label: String::from(label),
        })
    }

    /// Member releases in chain order.
    pub fn members(&self, p: ProjectId) -> &[NodeId] {
        &self.members[p.index()]
    }

    /// Project containing node `n` of the source universe.
    pub fn project_of(&self, n: NodeId) -> ProjectId {
        self.node_project[n.index()]
    }

    /// Merged dependency targets, deduplicated, without self-loops.
    pub fn depend(&self, p: ProjectId) -> &[ProjectId] {
        &self.dep_out[p.index()]
    }

    /// Projects with at least one release depending on `p`.
    pub fn rev_depend(&self, p: ProjectId) -> &[ProjectId] {
        &self.dep_in[p.index()]
    }

    pub fn dep_edge_count(&self) -> usize {
        self.dep_edge_count
    }
}

/// Collapses update chains into projects and merges dependency edges.
pub fn aggregate(universe: &Universe) -> ProjectView {
    // Classes are found by walking to each node's chain head; heads are
    // encountered in node order, so project numbering is deterministic.
    let mut head_project: HashMap<NodeId, ProjectId> = HashMap::new();
    let mut heads: Vec<NodeId> = Vec::new();
    let mut node_project: Vec<ProjectId> = Vec::with_capacity(universe.node_count());
    for id in universe.ids() {
        let head = universe.chain_head(id);
        let project = *head_project.entry(head).or_insert_with(|| {
            heads.push(head);
            ProjectId::from_index(heads.len() - 1)
        });
        node_project.push(project);
    }

    let members: Vec<Vec<NodeId>> = heads
        .iter()
        .map(|&head| universe.project_of(head))
        .collect();

    // Shared name, with a positional suffix when one name spans several
    // disconnected chains.
    let mut name_total: HashMap<&str, usize> = HashMap::new();
    for &head in &heads {
        *name_total
            .entry(universe.node(head).name.as_str())
            .or_insert(0) += 1;
    }
    let mut name_seen: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::with_capacity(heads.len());
    for &head in &heads {
        let name = universe.node(head).name.as_str();
        let seen = name_seen.entry(name).or_insert(0);
        *seen += 1;
        if name_total[name] == 1 {
            labels.push(String::from(name));
        } else {
            labels.push(format!("{name}#{seen}"));
        }
    }

    let mut label_index = HashMap::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        label_index.insert(label.clone(), ProjectId::from_index(i));
    }

    let mut dep_out: Vec<Vec<ProjectId>> = alloc::vec![Vec::new(); heads.len()];
    let mut dep_in: Vec<Vec<ProjectId>> = alloc::vec![Vec::new(); heads.len()];
    let mut seen_pairs: HashSet<(ProjectId, ProjectId)> = HashSet::new();
    let mut dep_edge_count = 0;
    for (from, to) in universe.dep_edges() {
        let pf = node_project[from.index()];
        let pt = node_project[to.index()];
        if pf == pt {
            continue; // intra-project dependency, dropped
        }
        if seen_pairs.insert((pf, pt)) {
            dep_out[pf.index()].push(pt);
            dep_in[pt.index()].push(pf);
            dep_edge_count += 1;
        }
    }

    ProjectView {
        labels,
        members,
        node_project,
        label_index,
        dep_out,
        dep_in,
        dep_edge_count,
    }
}
