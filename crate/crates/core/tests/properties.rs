//! Property tests over randomly generated universes.
//!
//! Projects are recovered two ways: the implementation walks update
//! chains, while the oracle here runs union-find over the raw edge
//! list. The two must always agree.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use proptest::prelude::*;
use sugraph_core::{
    aggregate, diffusion_series, intensity, pair_popularity, popularity, popularity_at,
    project_pair_popularity, reuse, variety, variety_at, MetricKind, NodeId, Timestamp, Universe,
};

/// Blueprint for one random universe: up to 8 names, up to 50 nodes.
#[derive(Clone, Debug)]
struct UniverseSpec {
    nodes: Vec<(u8, i64)>,
    deps: Vec<(usize, usize)>,
    links: Vec<bool>,
}

fn universe_spec() -> impl Strategy<Value = UniverseSpec> {
    (1usize..=50).prop_flat_map(|n| {
        (
            proptest::collection::vec((0u8..8, 0i64..120), n),
            proptest::collection::vec((0..n, 0..n), 0..=2 * n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(nodes, deps, links)| UniverseSpec { nodes, deps, links })
    })
}

fn build(spec: &UniverseSpec) -> Universe {
    let mut u = Universe::new();
    let ids: Vec<NodeId> = spec
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &(name, time))| {
            u.add_node(format!("p{name}"), format!("r{i}"), Timestamp(time))
                .unwrap()
        })
        .collect();

    let mut by_name: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
    for (i, &(name, _)) in spec.nodes.iter().enumerate() {
        by_name.entry(name).or_default().push(i);
    }
    let mut link_cursor = 0usize;
    for group in by_name.values_mut() {
        group.sort_by_key(|&i| (spec.nodes[i].1, i));
        for w in group.windows(2) {
            if spec.links[link_cursor % spec.links.len()] {
                u.add_update(ids[w[0]], ids[w[1]]).unwrap();
            }
            link_cursor += 1;
        }
    }
    for &(from, to) in &spec.deps {
        if from != to {
            // duplicates are rejected; that is fine here
            let _ = u.add_dependency(ids[from], ids[to]);
        }
    }
    u
}

/// Union-find over the raw update-edge list.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn oracle_classes(u: &Universe) -> BTreeSet<BTreeSet<usize>> {
    let mut uf = UnionFind::new(u.node_count());
    for (from, to) in u.up_edges() {
        uf.union(from.index(), to.index());
    }
    let mut classes: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..u.node_count() {
        classes.entry(uf.find(i)).or_default().insert(i);
    }
    classes.into_values().collect()
}

proptest! {
    #[test]
    fn depend_rev_depend_duality(spec in universe_spec()) {
        let u = build(&spec);
        for a in u.ids() {
            for &b in u.depend(a) {
                prop_assert!(u.rev_depend(b).contains(&a));
            }
            for &b in u.rev_depend(a) {
                prop_assert!(u.depend(b).contains(&a));
            }
        }
    }

    #[test]
    fn project_of_is_an_equivalence(spec in universe_spec()) {
        let u = build(&spec);
        for n in u.ids() {
            let class = u.project_of(n);
            prop_assert!(class.contains(&n));
            let name = &u.node(n).name;
            for &m in &class {
                prop_assert_eq!(&u.node(m).name, name);
                prop_assert_eq!(u.project_of(m), class.clone());
            }
        }
    }

    #[test]
    fn projects_match_union_find_oracle(spec in universe_spec()) {
        let u = build(&spec);
        let actual: BTreeSet<BTreeSet<usize>> = {
            let pv = aggregate(&u);
            pv.ids()
                .map(|p| pv.members(p).iter().map(|id| id.index()).collect())
                .collect()
        };
        prop_assert_eq!(actual, oracle_classes(&u));
    }

    #[test]
    fn chain_walk_visits_members_in_time_order(spec in universe_spec()) {
        let u = build(&spec);
        let mut visited: HashSet<NodeId> = HashSet::new();
        for head in u.ids().filter(|&n| u.update_prev(n).is_none()) {
            let members = u.project_of(head);
            prop_assert_eq!(members[0], head);
            for w in members.windows(2) {
                prop_assert!(u.node(w[0]).time <= u.node(w[1]).time);
                if u.node(w[0]).time == u.node(w[1]).time {
                    // ties are broken by insertion order in the builder
                    prop_assert!(w[0] < w[1]);
                }
            }
            for m in members {
                prop_assert!(visited.insert(m), "node visited twice");
            }
        }
        prop_assert_eq!(visited.len(), u.node_count());
    }

    #[test]
    fn timed_subgraphs_are_subset_ordered(spec in universe_spec(), t1 in 0i64..130, t2 in 0i64..130) {
        let u = build(&spec);
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let sub_lo = u.timed_subgraph(Timestamp(lo));
        let sub_hi = u.timed_subgraph(Timestamp(hi));
        let node_keys = |s: &Universe| -> BTreeSet<(String, String)> {
            s.ids().map(|i| {
                let n = s.node(i);
                (n.name.clone(), n.release.clone())
            }).collect()
        };
        let edge_keys = |s: &Universe, up: bool| -> BTreeSet<((String, String), (String, String))> {
            let pairs: Vec<_> = if up { s.up_edges().collect() } else { s.dep_edges().collect() };
            pairs.into_iter().map(|(a, b)| {
                let (na, nb) = (s.node(a), s.node(b));
                ((na.name.clone(), na.release.clone()), (nb.name.clone(), nb.release.clone()))
            }).collect()
        };
        prop_assert!(node_keys(&sub_lo).is_subset(&node_keys(&sub_hi)));
        prop_assert!(edge_keys(&sub_lo, false).is_subset(&edge_keys(&sub_hi, false)));
        prop_assert!(edge_keys(&sub_lo, true).is_subset(&edge_keys(&sub_hi, true)));
    }

    #[test]
    fn subgraph_projects_refine_full_partition(spec in universe_spec(), t in 0i64..130) {
        let u = build(&spec);
        let sub = u.timed_subgraph(Timestamp(t));
        for id in sub.ids() {
            let node = sub.node(id);
            let full_id = u.resolve(&node.name, &node.release).unwrap();
            let full_class: BTreeSet<(String, String)> = u
                .project_of(full_id)
                .into_iter()
                .map(|m| (u.node(m).name.clone(), u.node(m).release.clone()))
                .collect();
            for member in sub.project_of(id) {
                let m = sub.node(member);
                prop_assert!(full_class.contains(&(m.name.clone(), m.release.clone())));
            }
        }
    }

    #[test]
    fn popularity_dominates_variety(spec in universe_spec()) {
        let u = build(&spec);
        for n in u.ids() {
            let pop = popularity(&u, n);
            let var = variety(&u, n);
            prop_assert!(pop >= var);
            let distinct_projects = u.project_count(u.rev_depend(n).iter().copied());
            let all_distinct = distinct_projects == u.rev_depend(n).len();
            prop_assert_eq!(pop == var, all_distinct);
        }
    }

    #[test]
    fn popularity_at_is_monotone(spec in universe_spec(), times in proptest::collection::vec(0i64..130, 20)) {
        let u = build(&spec);
        let mut sorted = times;
        sorted.sort_unstable();
        for n in u.ids() {
            let mut prev = 0usize;
            for &t in &sorted {
                let now = popularity_at(&u, n, Timestamp(t));
                prop_assert!(now >= prev);
                prev = now;
            }
            prop_assert!(popularity_at(&u, n, Timestamp::MAX) == popularity(&u, n));
        }
    }

    #[test]
    fn pair_popularity_bounds_and_symmetry(spec in universe_spec()) {
        let u = build(&spec);
        let ids: Vec<NodeId> = u.ids().collect();
        for (i, &x) in ids.iter().enumerate() {
            for &y in &ids[i + 1..] {
                let xy = pair_popularity(&u, x, y).unwrap();
                let yx = pair_popularity(&u, y, x).unwrap();
                prop_assert_eq!(xy, yx);
                prop_assert!(xy <= popularity(&u, x).min(popularity(&u, y)));
            }
        }
    }

    #[test]
    fn series_end_at_the_whole_universe_metric(spec in universe_spec()) {
        let u = build(&spec);
        for n in u.ids() {
            let pop = diffusion_series(&u, n, MetricKind::Popularity);
            let var = diffusion_series(&u, n, MetricKind::Variety);
            prop_assert_eq!(pop.final_value(), popularity(&u, n));
            prop_assert_eq!(var.final_value(), variety(&u, n));
            for series in [&pop, &var] {
                for w in series.samples.windows(2) {
                    prop_assert!(w[0].0 < w[1].0);
                    prop_assert!(w[0].1 < w[1].1);
                }
            }
            // pointwise agreement with direct evaluation
            for &(t, value) in &pop.samples {
                prop_assert_eq!(value, popularity_at(&u, n, t));
            }
            for &(t, value) in &var.samples {
                prop_assert_eq!(value, variety_at(&u, n, t));
            }
        }
    }

    #[test]
    fn intensity_attains_one_at_the_argmax(spec in universe_spec()) {
        let u = build(&spec);
        let pv = aggregate(&u);
        let projects: Vec<_> = pv.ids().collect();
        if projects.len() < 2 {
            return Ok(());
        }
        let mut any_positive = false;
        let mut max_intensity = 0.0f64;
        for (i, &a) in projects.iter().enumerate() {
            for &b in &projects[i + 1..] {
                if project_pair_popularity(&pv, a, b).unwrap() > 0 {
                    any_positive = true;
                }
                let v = intensity(&pv, a, b, &projects).unwrap();
                prop_assert!((0.0..=1.0).contains(&v));
                max_intensity = max_intensity.max(v);
            }
        }
        if any_positive {
            prop_assert_eq!(max_intensity, 1.0);
        } else {
            prop_assert_eq!(max_intensity, 0.0);
        }
    }

    #[test]
    fn reuse_equals_union_oracle(spec in universe_spec()) {
        let u = build(&spec);
        // independent route: union every dependent set, then count
        // distinct oracle classes among the union
        let classes = oracle_classes(&u);
        let mut union: BTreeSet<usize> = BTreeSet::new();
        for n in u.ids() {
            union.extend(u.rev_depend(n).iter().map(|d| d.index()));
        }
        let expected = classes
            .iter()
            .filter(|class| class.iter().any(|i| union.contains(i)))
            .count();
        prop_assert_eq!(reuse(&u), expected);
    }
}
