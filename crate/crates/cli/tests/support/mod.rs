// Not every test binary uses the whole module.
#![allow(dead_code)]

//! Shared machinery for the acceptance suite: a seeded universe
//! generator and a naive oracle.
//!
//! The oracle reads nothing but the raw node list and edge lists; every
//! quantity is recomputed with plain scans and union-find, so it shares
//! no code path with the adjacency-based implementation it checks.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Output;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use sugraph_core::{NodeId, Timestamp, Universe};

// ---------------------------------------------------------------------
// generation
// ---------------------------------------------------------------------

/// Random universe with at most 50 nodes and at most 8 projects.
///
/// Every same-name release joins one chain (time order, insertion
/// order on ties), so names and projects coincide, as they do for
/// ingested data.
pub fn random_universe(rng: &mut ChaCha8Rng) -> Universe {
    let node_count = rng.gen_range(1..=50);
    let name_count = rng.gen_range(1..=8usize);
    let mut u = Universe::new();
    let mut ids: Vec<NodeId> = Vec::with_capacity(node_count);
    let mut specs: Vec<(usize, i64)> = Vec::with_capacity(node_count);
    for i in 0..node_count {
        let name = rng.gen_range(0..name_count);
        let time = rng.gen_range(0..240i64);
        let id = u
            .add_node(format!("lib{name}"), format!("v{i}"), Timestamp(time))
            .unwrap();
        ids.push(id);
        specs.push((name, time));
    }

    let mut by_name: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(name, _)) in specs.iter().enumerate() {
        by_name.entry(name).or_default().push(i);
    }
    for group in by_name.values_mut() {
        group.sort_by_key(|&i| (specs[i].1, i));
        for w in group.windows(2) {
            u.add_update(ids[w[0]], ids[w[1]]).unwrap();
        }
    }

    let edge_attempts = rng.gen_range(0..=2 * node_count);
    for _ in 0..edge_attempts {
        let from = rng.gen_range(0..node_count);
        let to = rng.gen_range(0..node_count);
        if from != to {
            let _ = u.add_dependency(ids[from], ids[to]);
        }
    }
    u
}

// ---------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------

/// Flat copy of a universe plus everything the oracle derives from the
/// raw edge lists up front: reverse-dependency sets by edge scan and
/// project classes by union-find.
pub struct Raw {
    pub names: Vec<String>,
    pub times: Vec<i64>,
    pub deps: Vec<(usize, usize)>,
    pub revs: Vec<BTreeSet<usize>>,
    pub classes: Vec<BTreeSet<usize>>,
    pub class_of: Vec<usize>,
}

impl Raw {
    pub fn of(u: &Universe) -> Raw {
        let names: Vec<String> = u.ids().map(|i| u.node(i).name.clone()).collect();
        let times: Vec<i64> = u.ids().map(|i| u.node(i).time.millis()).collect();
        let deps: Vec<(usize, usize)> =
            u.dep_edges().map(|(a, b)| (a.index(), b.index())).collect();
        let ups: Vec<(usize, usize)> = u.up_edges().map(|(a, b)| (a.index(), b.index())).collect();
        let n = names.len();

        let mut revs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(from, to) in &deps {
            revs[to].insert(from);
        }

        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &ups {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut grouped: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            grouped.entry(root).or_default().insert(i);
        }
        let classes: Vec<BTreeSet<usize>> = grouped.into_values().collect();
        let mut class_of = vec![usize::MAX; n];
        for (c, class) in classes.iter().enumerate() {
            for &i in class {
                class_of[i] = c;
            }
        }

        Raw {
            names,
            times,
            deps,
            revs,
            classes,
            class_of,
        }
    }

    pub fn popularity(&self, n: usize) -> usize {
        self.revs[n].len()
    }

    pub fn variety(&self, n: usize) -> usize {
        self.revs[n]
            .iter()
            .map(|&d| self.class_of[d])
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn project_count(&self, set: &BTreeSet<usize>) -> usize {
        set.iter()
            .map(|&n| self.class_of[n])
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn pair_popularity(&self, x: usize, y: usize) -> usize {
        self.revs[x].intersection(&self.revs[y]).count()
    }

    /// Popularity within the sub-universe at time `t`: an edge counts
    /// once both endpoints exist.
    pub fn popularity_at(&self, n: usize, t: i64) -> usize {
        if self.times[n] > t {
            return 0;
        }
        self.deps
            .iter()
            .filter(|&&(from, to)| to == n && self.times[from] <= t)
            .count()
    }

    pub fn variety_at(&self, n: usize, t: i64) -> usize {
        if self.times[n] > t {
            return 0;
        }
        self.deps
            .iter()
            .filter(|&&(from, to)| to == n && self.times[from] <= t)
            .map(|&(from, _)| self.class_of[from])
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// `reuse` by the formula route: union every reverse-dependency
    /// set, then count projects in the union.
    pub fn reuse(&self) -> usize {
        let mut union: BTreeSet<usize> = BTreeSet::new();
        for rev in &self.revs {
            union.extend(rev.iter().copied());
        }
        self.project_count(&union)
    }

    /// Project-level reverse dependencies: which classes use class `c`.
    pub fn project_rev_depend(&self, c: usize) -> BTreeSet<usize> {
        self.deps
            .iter()
            .filter(|&&(from, to)| self.class_of[to] == c && self.class_of[from] != c)
            .map(|&(from, _)| self.class_of[from])
            .collect()
    }

    pub fn project_pair_popularity(&self, a: usize, b: usize) -> usize {
        self.project_rev_depend(a)
            .intersection(&self.project_rev_depend(b))
            .count()
    }

    /// Shared name of a class (the generator guarantees one class per
    /// name), used as the independent ranking label.
    pub fn class_label(&self, c: usize) -> String {
        let member = *self.classes[c].iter().next().unwrap();
        self.names[member].clone()
    }

    /// Brute-force top-k ranking by pair score, ties by label.
    pub fn rank(&self, anchor_class: usize, k: usize) -> Vec<(String, usize)> {
        let mut scored: Vec<(String, usize)> = (0..self.classes.len())
            .filter(|&c| c != anchor_class)
            .filter_map(|c| {
                let score = self.project_pair_popularity(anchor_class, c);
                (score >= 1).then(|| (self.class_label(c), score))
            })
            .collect();
        scored.sort_by(|(la, sa), (lb, sb)| sb.cmp(sa).then_with(|| la.cmp(lb)));
        scored.truncate(k);
        scored
    }
}

// ---------------------------------------------------------------------
// CLI harness
// ---------------------------------------------------------------------

pub fn sugraph(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_sugraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn sugraph_ok(args: &[&str]) -> String {
    let out = sugraph(args);
    assert!(
        out.status.success(),
        "sugraph {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}
