//! The release-level universe graph.
//!
//! A [`Universe`] holds one node per project release (a `<name, release,
//! time>` triple) and two edge families: *dependency* edges between
//! arbitrary releases and *update* edges linking consecutive releases of
//! the same project into a linear chain. Construction is single-writer;
//! once built, a universe is immutable and can be queried from any number
//! of threads.
//!
//! Nodes are addressed by dense [`NodeId`] handles. String keys enter the
//! graph exactly once, through [`Universe::resolve`] or
//! [`Universe::get`]; every query below that boundary works on ids.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};

/// Milliseconds since the Unix epoch, UTC.
///
/// Day-precision inputs map to midnight UTC; comparisons always happen at
/// millisecond precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(pub i64);

impl Timestamp {
    pub const MIN: Timestamp = Timestamp(i64::MIN);
    pub const MAX: Timestamp = Timestamp(i64::MAX);

    pub fn millis(self) -> i64 {
        self.0
    }
}

/// Dense handle for a node inside one [`Universe`].
///
/// Ids are only meaningful for the universe that issued them; in
/// particular [`Universe::timed_subgraph`] renumbers nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn from_index(index: usize) -> NodeId {
        NodeId(u32::try_from(index).expect("node count exceeds u32 range"))
    }
}

/// One project release.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReleaseNode {
    /// Project identifier. Opaque; equality is exact string equality.
    pub name: String,
    /// Version identifier. Opaque; `"1.0"` and `"1.0.0"` are distinct.
    pub release: String,
    /// Release timestamp.
    pub time: Timestamp,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct NodeKey {
    name: String,
    release: String,
}

/// Lookup failure for a `(name, release)` key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownNode {
    pub name: String,
    pub release: String,
}

impl fmt::Display for UnknownNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown node {}@{}", self.name, self.release)
    }
}

impl core::error::Error for UnknownNode {}

/// Rejected mutations during universe construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    /// Node name or release was empty.
    EmptyAttribute,
    /// A node with the same `(name, release)` key already exists.
    DuplicateNode { name: String, release: String },
    /// A node may not depend on itself.
    SelfDependency,
    /// At most one dependency edge per ordered node pair.
    DuplicateEdge,
    /// Update edges require both endpoints to share a name.
    NameMismatch,
    /// Update edges must not run backwards in time.
    TimeOrderViolation,
    /// An endpoint already has the corresponding update slot filled, or
    /// the edge would close a cycle.
    ChainConflict,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::EmptyAttribute => write!(f, "node name and release must be non-empty"),
            BuildError::DuplicateNode { name, release } => {
                write!(f, "node {name}@{release} already exists")
            }
            BuildError::SelfDependency => write!(f, "a node cannot depend on itself"),
            BuildError::DuplicateEdge => write!(f, "dependency edge already exists"),
            BuildError::NameMismatch => write!(f, "update edge endpoints must share a name"),
            BuildError::TimeOrderViolation => {
                write!(f, "update edge must not decrease in time")
            }
            BuildError::ChainConflict => write!(f, "update slot already occupied"),
        }
    }
}

impl core::error::Error for BuildError {}

/// The software universe graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    nodes: Vec<ReleaseNode>,
    index: HashMap<NodeKey, NodeId>,
    dep_out: Vec<Vec<NodeId>>,
    dep_in: Vec<Vec<NodeId>>,
    up_next: Vec<Option<NodeId>>,
    up_prev: Vec<Option<NodeId>>,
    dep_edge_count: usize,
    up_edge_count: usize,
}

impl Universe {
    pub fn new() -> Universe {
        Universe::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dep_edge_count(&self) -> usize {
        self.dep_edge_count
    }

    pub fn up_edge_count(&self) -> usize {
        self.up_edge_count
    }

    /// All node ids in insertion order.
    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId::from_index)
    }

    pub fn node(&self, id: NodeId) -> &ReleaseNode {
        &self.nodes[id.index()]
    }

    /// O(1) amortized key lookup.
    pub fn get(&self, name: &str, release: &str) -> Option<NodeId> {
        // Borrowed lookup would need a custom key type; an owned probe key
        // keeps the map simple and this is not a hot path.
        let key = NodeKey {
            name: String::from(name),
            release: String::from(release),
        };
        self.index.get(&key).copied()
    }

    pub fn resolve(&self, name: &str, release: &str) -> Result<NodeId, UnknownNode> {
        self.get(name, release).ok_or_else(|| UnknownNode {
            name: String::from(name),
            release: String::from(release),
        })
    }

    /// Adds a node. Edges are untouched.
    pub fn add_node(
        &mut self,
        name: impl Into<String>,
        release: impl Into<String>,
        time: Timestamp,
    ) -> Result<NodeId, BuildError> {
        let name = name.into();
        let release = release.into();
        if name.is_empty() || release.is_empty() {
            return Err(BuildError::EmptyAttribute);
        }
        let key = NodeKey {
            name: name.clone(),
            release: release.clone(),
        };
        if self.index.contains_key(&key) {
            return Err(BuildError::DuplicateNode { name, release });
        }
        let id = NodeId::from_index(self.nodes.len());
        self.index.insert(key, id);
        self.nodes.push(ReleaseNode {
            name,
            release,
            time,
        });
        self.dep_out.push(Vec::new());
        self.dep_in.push(Vec::new());
        self.up_next.push(None);
        self.up_prev.push(None);
        Ok(id)
    }

    /// Adds a dependency edge `from -> to`.
    ///
    /// Parallel edges and self-loops are rejected. Dependencies between
    /// two releases of the same project are allowed at node level; they
    /// disappear during [`aggregate`](crate::project::ProjectView).
    pub fn add_dependency(&mut self, from: NodeId, to: NodeId) -> Result<(), BuildError> {
        if from == to {
            return Err(BuildError::SelfDependency);
        }
        if self.dep_out[from.index()].contains(&to) {
            return Err(BuildError::DuplicateEdge);
        }
        self.dep_out[from.index()].push(to);
        self.dep_in[to.index()].push(from);
        self.dep_edge_count += 1;
        Ok(())
    }

    /// Adds an update edge `from => to`, marking `to` as the immediate
    /// successor release of `from`.
    ///
    /// Endpoints must share a name, `from` must not be newer than `to`,
    /// and neither slot may already be taken, so chains stay linear.
    /// Equal timestamps are accepted; callers that infer chains order
    /// ties deterministically before linking.
    pub fn add_update(&mut self, from: NodeId, to: NodeId) -> Result<(), BuildError> {
        if from == to {
            return Err(BuildError::ChainConflict);
        }
        if self.nodes[from.index()].name != self.nodes[to.index()].name {
            return Err(BuildError::NameMismatch);
        }
        if self.nodes[from.index()].time > self.nodes[to.index()].time {
            return Err(BuildError::TimeOrderViolation);
        }
        if self.up_next[from.index()].is_some() || self.up_prev[to.index()].is_some() {
            return Err(BuildError::ChainConflict);
        }
        // With equal timestamps permitted, a time check alone cannot rule
        // out cycles; walk the successor chain from `to`.
        let mut cursor = self.up_next[to.index()];
        while let Some(next) = cursor {
            if next == from {
                return Err(BuildError::ChainConflict);
            }
            cursor = self.up_next[next.index()];
        }
        self.up_next[from.index()] = Some(to);
        self.up_prev[to.index()] = Some(from);
        self.up_edge_count += 1;
        Ok(())
    }

    /// Direct dependency targets of `n`, in insertion order. No
    /// transitive closure.
    pub fn depend(&self, n: NodeId) -> &[NodeId] {
        &self.dep_out[n.index()]
    }

    /// Direct dependents of `n` (reverse dependencies), in insertion
    /// order.
    pub fn rev_depend(&self, n: NodeId) -> &[NodeId] {
        &self.dep_in[n.index()]
    }

    pub fn update_next(&self, n: NodeId) -> Option<NodeId> {
        self.up_next[n.index()]
    }

    pub fn update_prev(&self, n: NodeId) -> Option<NodeId> {
        self.up_prev[n.index()]
    }

    /// First release of `n`'s update chain (possibly `n` itself).
    ///
    /// Two nodes belong to the same project exactly when their chain
    /// heads coincide.
    pub fn chain_head(&self, n: NodeId) -> NodeId {
        let mut cursor = n;
        while let Some(prev) = self.up_prev[cursor.index()] {
            cursor = prev;
        }
        cursor
    }

    /// All members of `n`'s project, i.e. the reflexive-transitive
    /// closure of the update relation, in chain order.
    pub fn project_of(&self, n: NodeId) -> Vec<NodeId> {
        let mut members = Vec::new();
        let mut cursor = Some(self.chain_head(n));
        while let Some(id) = cursor {
            members.push(id);
            cursor = self.up_next[id.index()];
        }
        members
    }

    /// Number of distinct projects represented in `s`.
    pub fn project_count(&self, s: impl IntoIterator<Item = NodeId>) -> usize {
        let mut heads = HashSet::new();
        for id in s {
            heads.insert(self.chain_head(id));
        }
        heads.len()
    }

    /// The state of the universe at time `t`: every node released at or
    /// before `t`, plus all edges whose endpoints both survive.
    ///
    /// The result is a fresh universe with renumbered ids.
    pub fn timed_subgraph(&self, t: Timestamp) -> Universe {
        let mut sub = Universe::new();
        let mut remap: Vec<Option<NodeId>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            if node.time <= t {
                let id = sub
                    .add_node(node.name.clone(), node.release.clone(), node.time)
                    .expect("source universe holds unique non-empty keys");
                remap.push(Some(id));
            } else {
                remap.push(None);
            }
        }
        for (from, to) in self.dep_edges() {
            if let (Some(f), Some(t)) = (remap[from.index()], remap[to.index()]) {
                sub.add_dependency(f, t)
                    .expect("edges of a valid universe stay valid");
            }
        }
        for (from, to) in self.up_edges() {
            if let (Some(f), Some(t)) = (remap[from.index()], remap[to.index()]) {
                sub.add_update(f, t)
                    .expect("update chains of a valid universe stay valid");
            }
        }
        sub
    }

    /// Every dependency edge as `(from, to)`, grouped by source node.
    pub fn dep_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.dep_out
            .iter()
            .enumerate()
            .flat_map(|(i, targets)| targets.iter().map(move |&to| (NodeId::from_index(i), to)))
    }

    /// Every update edge as `(from, to)`.
    pub fn up_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.up_next
            .iter()
            .enumerate()
            .filter_map(|(i, next)| next.map(|to| (NodeId::from_index(i), to)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ts(v: i64) -> Timestamp {
        Timestamp(v)
    }

    #[test]
    fn add_node_base_cases() {
        let mut u = Universe::new();
        let a1 = u.add_node("a", "1", ts(10)).unwrap();
        assert_eq!(u.node_count(), 1);
        assert_eq!(u.dep_edge_count(), 0);
        assert_eq!(
            u.add_node("a", "1", ts(99)),
            Err(BuildError::DuplicateNode {
                name: "a".into(),
                release: "1".into()
            })
        );
        u.add_node("a", "2", ts(20)).unwrap();
        assert_eq!(u.node_count(), 2);
        assert_eq!(u.node(a1).release, "1");
    }

    #[test]
    fn add_node_rejects_empty_attributes() {
        let mut u = Universe::new();
        assert_eq!(u.add_node("", "1", ts(0)), Err(BuildError::EmptyAttribute));
        assert_eq!(u.add_node("a", "", ts(0)), Err(BuildError::EmptyAttribute));
    }

    #[test]
    fn dependency_edges() {
        let mut u = Universe::new();
        let a1 = u.add_node("a", "1", ts(10)).unwrap();
        let x1 = u.add_node("x", "1", ts(5)).unwrap();
        u.add_dependency(a1, x1).unwrap();
        assert_eq!(u.depend(a1), &[x1]);
        assert_eq!(u.rev_depend(x1), &[a1]);
        assert_eq!(u.add_dependency(a1, a1), Err(BuildError::SelfDependency));
        assert_eq!(u.add_dependency(a1, x1), Err(BuildError::DuplicateEdge));
        assert_eq!(u.dep_edge_count(), 1);
    }

    #[test]
    fn update_chain_growth() {
        let mut u = Universe::new();
        let q1 = u.add_node("q", "1", ts(1)).unwrap();
        let q2 = u.add_node("q", "2", ts(2)).unwrap();
        let q3 = u.add_node("q", "3", ts(3)).unwrap();
        u.add_update(q1, q2).unwrap();
        u.add_update(q2, q3).unwrap();
        assert_eq!(u.project_of(q2), vec![q1, q2, q3]);
        assert_eq!(u.chain_head(q3), q1);
        assert_eq!(u.up_edge_count(), 2);
    }

    #[test]
    fn update_rejections() {
        let mut u = Universe::new();
        let a1 = u.add_node("a", "1", ts(1)).unwrap();
        let x1 = u.add_node("x", "1", ts(2)).unwrap();
        let q1 = u.add_node("q", "1", ts(1)).unwrap();
        let q2 = u.add_node("q", "2", ts(2)).unwrap();
        assert_eq!(u.add_update(a1, x1), Err(BuildError::NameMismatch));
        assert_eq!(u.add_update(q2, q1), Err(BuildError::TimeOrderViolation));
        u.add_update(q1, q2).unwrap();
        // both slots along q1 => q2 are now occupied
        let q3 = u.add_node("q", "3", ts(3)).unwrap();
        let q0 = u.add_node("q", "0", ts(0)).unwrap();
        assert_eq!(u.add_update(q1, q3), Err(BuildError::ChainConflict));
        assert_eq!(u.add_update(q0, q2), Err(BuildError::ChainConflict));
    }

    #[test]
    fn update_equal_times_never_cycle() {
        let mut u = Universe::new();
        let r1 = u.add_node("r", "1", ts(7)).unwrap();
        let r2 = u.add_node("r", "2", ts(7)).unwrap();
        u.add_update(r1, r2).unwrap();
        assert_eq!(u.add_update(r2, r1), Err(BuildError::ChainConflict));
    }

    #[test]
    fn isolated_node_queries() {
        let mut u = Universe::new();
        let a1 = u.add_node("a", "1", ts(1)).unwrap();
        assert!(u.depend(a1).is_empty());
        assert!(u.rev_depend(a1).is_empty());
        assert_eq!(u.project_of(a1), vec![a1]);
        assert_eq!(u.project_count([a1]), 1);
        assert_eq!(u.project_count([]), 0);
    }

    #[test]
    fn resolve_reports_unknown_keys() {
        let mut u = Universe::new();
        u.add_node("a", "1", ts(1)).unwrap();
        assert!(u.resolve("a", "1").is_ok());
        assert_eq!(
            u.resolve("a", "2"),
            Err(UnknownNode {
                name: "a".into(),
                release: "2".into()
            })
        );
    }

    #[test]
    fn timed_subgraph_boundaries() {
        let mut u = Universe::new();
        let a1 = u.add_node("a", "1", ts(10)).unwrap();
        let a2 = u.add_node("a", "2", ts(20)).unwrap();
        let x1 = u.add_node("x", "1", ts(5)).unwrap();
        u.add_dependency(a1, x1).unwrap();
        u.add_dependency(a2, x1).unwrap();
        u.add_update(a1, a2).unwrap();

        let before = u.timed_subgraph(ts(4));
        assert!(before.is_empty());

        let full = u.timed_subgraph(Timestamp::MAX);
        assert_eq!(full, u);

        let mid = u.timed_subgraph(ts(10));
        assert_eq!(mid.node_count(), 2);
        assert_eq!(mid.dep_edge_count(), 1);
        assert_eq!(mid.up_edge_count(), 0);
        assert!(mid.get("a", "2").is_none());
    }
}
