//! Shared fixture: the canonical three-project universe.
//!
//! Projects `a` (a1 => a2 => a3), `q` (q1 => q2 => q3), `x` (x1 => x2);
//! dependencies a1 -> x1, q1 -> x1, q2 -> x1, a3 -> x2. The node a3 and
//! everything attached to it arrive after `CUTOFF`, so the subgraph at
//! `CUTOFF` is the seven-node universe the older queries expect.

use sugraph_core::{NodeId, Timestamp, Universe};

pub const CUTOFF: Timestamp = Timestamp(80);

pub struct Fixture {
    pub universe: Universe,
    pub a1: NodeId,
    pub a2: NodeId,
    pub a3: NodeId,
    pub q1: NodeId,
    pub q2: NodeId,
    pub q3: NodeId,
    pub x1: NodeId,
    pub x2: NodeId,
}

pub fn canonical() -> Fixture {
    let mut u = Universe::new();
    let x1 = u.add_node("x", "1", Timestamp(10)).unwrap();
    let a1 = u.add_node("a", "1", Timestamp(20)).unwrap();
    let q1 = u.add_node("q", "1", Timestamp(30)).unwrap();
    let q2 = u.add_node("q", "2", Timestamp(40)).unwrap();
    let a2 = u.add_node("a", "2", Timestamp(50)).unwrap();
    let q3 = u.add_node("q", "3", Timestamp(60)).unwrap();
    let x2 = u.add_node("x", "2", Timestamp(70)).unwrap();
    let a3 = u.add_node("a", "3", Timestamp(90)).unwrap();
    u.add_dependency(a1, x1).unwrap();
    u.add_dependency(q1, x1).unwrap();
    u.add_dependency(q2, x1).unwrap();
    u.add_dependency(a3, x2).unwrap();
    u.add_update(a1, a2).unwrap();
    u.add_update(a2, a3).unwrap();
    u.add_update(q1, q2).unwrap();
    u.add_update(q2, q3).unwrap();
    u.add_update(x1, x2).unwrap();
    Fixture {
        universe: u,
        a1,
        a2,
        a3,
        q1,
        q2,
        q3,
        x1,
        x2,
    }
}
