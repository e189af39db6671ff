//! Popularity, variety, diffusion, and co-dependency pairing metrics.
//!
//! Everything here is a pure read over an immutable [`Universe`] /
//! [`ProjectView`]; calls may run in parallel without restriction.
//!
//! Temporal metrics follow step-function semantics: a value changes only
//! when a dependent release appears, and an edge becomes visible once
//! both of its endpoints exist. A release that postdates the queried
//! time always scores zero.

use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;

use crate::project::{ProjectId, ProjectView};
use crate::universe::{NodeId, Timestamp, Universe};

/// Which of the two per-release counts a series or crossing refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Number of dependent releases.
    Popularity,
    /// Number of distinct dependent projects.
    Variety,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Popularity => write!(f, "popularity"),
            MetricKind::Variety => write!(f, "variety"),
        }
    }
}

/// Precondition violations for pairing and superseding queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricsError {
    /// A pair needs two distinct members.
    SamePairMember,
    /// The two releases belong to the same project.
    SameProject,
    /// Superseding is only defined within one project.
    NotSameProject,
    /// The predecessor must come before the successor on the chain.
    NotSuccessor,
    /// Both pair members must be drawn from the candidate set.
    PairNotInSet,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            MetricsError::SamePairMember => "pair members must be distinct",
            MetricsError::SameProject => "releases must belong to different projects",
            MetricsError::NotSameProject => "releases do not share a project",
            MetricsError::NotSuccessor => "predecessor does not precede successor on the chain",
            MetricsError::PairNotInSet => "pair members must be inside the candidate set",
        };
        write!(f, "{msg}")
    }
}

impl core::error::Error for MetricsError {}

/// Number of releases that depend on `n`.
pub fn popularity(universe: &Universe, n: NodeId) -> usize {
    universe.rev_depend(n).len()
}

/// Number of distinct projects with at least one release depending on
/// `n`.
pub fn variety(universe: &Universe, n: NodeId) -> usize {
    universe.project_count(universe.rev_depend(n).iter().copied())
}

/// Popularity of `n` within the universe as of time `t`; zero when `n`
/// itself postdates `t`.
///
/// Equivalent to `popularity` on `timed_subgraph(t)` without building
/// the subgraph.
pub fn popularity_at(universe: &Universe, n: NodeId, t: Timestamp) -> usize {
    if universe.node(n).time > t {
        return 0;
    }
    universe
        .rev_depend(n)
        .iter()
        .filter(|&&d| universe.node(d).time <= t)
        .count()
}

/// Variety of `n` as of time `t`; zero when `n` postdates `t`.
pub fn variety_at(universe: &Universe, n: NodeId, t: Timestamp) -> usize {
    if universe.node(n).time > t {
        return 0;
    }
    // Time cutoffs keep a prefix of every update chain (chain time is
    // non-decreasing), so full-universe chain heads classify projects in
    // the timed subgraph too.
    universe.project_count(
        universe
            .rev_depend(n)
            .iter()
            .copied()
            .filter(|&d| universe.node(d).time <= t),
    )
}

/// Step-function samples of one metric for one release.
///
/// Sample timestamps are strictly increasing and the value holds until
/// the next sample; before the first sample the value is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeSeries {
    pub subject: NodeId,
    pub kind: MetricKind,
    pub samples: Vec<(Timestamp, usize)>,
}

impl TimeSeries {
    /// Value of the step function at `t`.
    pub fn value_at(&self, t: Timestamp) -> usize {
        match self.samples.partition_point(|&(time, _)| time <= t) {
            0 => 0,
            i => self.samples[i - 1].1,
        }
    }

    /// Value after the last event, i.e. the whole-universe metric.
    pub fn final_value(&self) -> usize {
        self.samples.last().map_or(0, |&(_, v)| v)
    }
}

/// Event-time series of `kind` for `n`: one sample per timestamp at
/// which the value changes.
pub fn diffusion_series(universe: &Universe, n: NodeId, kind: MetricKind) -> TimeSeries {
    let subject_time = universe.node(n).time;
    // An edge from dependent d appears once both endpoints exist.
    let mut events: Vec<(Timestamp, NodeId)> = universe
        .rev_depend(n)
        .iter()
        .map(|&d| (universe.node(d).time.max(subject_time), d))
        .collect();
    events.sort_unstable_by_key(|&(t, d)| (t, d));

    let mut samples: Vec<(Timestamp, usize)> = Vec::new();
    match kind {
        MetricKind::Popularity => {
            let mut count = 0usize;
            for &(t, _) in &events {
                count += 1;
                match samples.last_mut() {
                    Some(last) if last.0 == t => last.1 = count,
                    _ => samples.push((t, count)),
                }
            }
        }
        MetricKind::Variety => {
            let mut heads: HashSet<NodeId> = HashSet::new();
            for &(t, d) in &events {
                if !heads.insert(universe.chain_head(d)) {
                    continue;
                }
                let value = heads.len();
                match samples.last_mut() {
                    Some(last) if last.0 == t => last.1 = value,
                    _ => samples.push((t, value)),
                }
            }
        }
    }
    TimeSeries {
        subject: n,
        kind,
        samples,
    }
}

/// The moment a successor release strictly overtakes its predecessor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupersedingPoint {
    pub predecessor: NodeId,
    pub successor: NodeId,
    pub kind: MetricKind,
    pub time: Timestamp,
}

fn require_chain_order(
    universe: &Universe,
    predecessor: NodeId,
    successor: NodeId,
) -> Result<(), MetricsError> {
    if universe.chain_head(predecessor) != universe.chain_head(successor) {
        return Err(MetricsError::NotSameProject);
    }
    let mut cursor = universe.update_next(predecessor);
    while let Some(id) = cursor {
        if id == successor {
            return Ok(());
        }
        cursor = universe.update_next(id);
    }
    Err(MetricsError::NotSuccessor)
}

/// Earliest time at which `successor` strictly exceeds `predecessor` in
/// `kind`, or `None` if it never does.
pub fn superseding_point(
    universe: &Universe,
    predecessor: NodeId,
    successor: NodeId,
    kind: MetricKind,
) -> Result<Option<SupersedingPoint>, MetricsError> {
    require_chain_order(universe, predecessor, successor)?;
    // The predecessor's value never decreases, so the first strict
    // crossing can only happen when the successor's value steps up.
    let series = diffusion_series(universe, successor, kind);
    for &(t, value) in &series.samples {
        let reference = match kind {
            MetricKind::Popularity => popularity_at(universe, predecessor, t),
            MetricKind::Variety => variety_at(universe, predecessor, t),
        };
        if value > reference {
            return Ok(Some(SupersedingPoint {
                predecessor,
                successor,
                kind,
                time: t,
            }));
        }
    }
    Ok(None)
}

/// Every time the strict ordering flips from "not overtaken" to
/// "overtaken", in chronological order. The first entry matches
/// [`superseding_point`].
pub fn superseding_crossings(
    universe: &Universe,
    predecessor: NodeId,
    successor: NodeId,
    kind: MetricKind,
) -> Result<Vec<SupersedingPoint>, MetricsError> {
    require_chain_order(universe, predecessor, successor)?;
    let mut times: Vec<Timestamp> = diffusion_series(universe, predecessor, kind)
        .samples
        .iter()
        .chain(diffusion_series(universe, successor, kind).samples.iter())
        .map(|&(t, _)| t)
        .collect();
    times.sort_unstable();
    times.dedup();

    let mut crossings = Vec::new();
    let mut overtaken = false;
    for t in times {
        let (succ, pred) = match kind {
            MetricKind::Popularity => (
                popularity_at(universe, successor, t),
                popularity_at(universe, predecessor, t),
            ),
            MetricKind::Variety => (
                variety_at(universe, successor, t),
                variety_at(universe, predecessor, t),
            ),
        };
        let now = succ > pred;
        if now && !overtaken {
            crossings.push(SupersedingPoint {
                predecessor,
                successor,
                kind,
                time: t,
            });
        }
        overtaken = now;
    }
    Ok(crossings)
}

/// Number of common dependents of two distinct releases. Pairs scoring
/// at least one are co-dependency pairs.
pub fn pair_popularity(universe: &Universe, x: NodeId, y: NodeId) -> Result<usize, MetricsError> {
    if x == y {
        return Err(MetricsError::SamePairMember);
    }
    Ok(common_dependents(universe, x, y))
}

fn common_dependents(universe: &Universe, x: NodeId, y: NodeId) -> usize {
    let left: HashSet<NodeId> = universe.rev_depend(x).iter().copied().collect();
    universe
        .rev_depend(y)
        .iter()
        .filter(|&&d| left.contains(&d))
        .count()
}

/// Summed pair popularity of `x` against every release outside both
/// `x`'s and `y`'s projects.
///
/// Gauges how much of `x`'s co-dependency mass lies in alternative
/// combinations. Asymmetric by definition; compute both margins when
/// comparing a release pair.
pub fn outside(universe: &Universe, x: NodeId, y: NodeId) -> Result<usize, MetricsError> {
    let head_x = universe.chain_head(x);
    let head_y = universe.chain_head(y);
    if head_x == head_y {
        return Err(MetricsError::SameProject);
    }
    Ok(outside_sum(universe, x, head_x, head_y))
}

fn outside_sum(universe: &Universe, x: NodeId, head_x: NodeId, head_y: NodeId) -> usize {
    let dependents_of_x: HashSet<NodeId> = universe.rev_depend(x).iter().copied().collect();
    universe
        .ids()
        .filter(|&n| {
            let head = universe.chain_head(n);
            head != head_x && head != head_y
        })
        .map(|n| {
            universe
                .rev_depend(n)
                .iter()
                .filter(|&&d| dependents_of_x.contains(&d))
                .count()
        })
        .sum()
}

/// Number of distinct projects that use at least one other release,
/// i.e. the project count of the union of all reverse-dependency sets.
pub fn reuse(universe: &Universe) -> usize {
    universe.project_count(universe.ids().filter(|&n| !universe.depend(n).is_empty()))
}

/// Number of distinct projects depending on both `px` and `py` at the
/// project level.
pub fn project_pair_popularity(
    view: &ProjectView,
    px: ProjectId,
    py: ProjectId,
) -> Result<usize, MetricsError> {
    if px == py {
        return Err(MetricsError::SamePairMember);
    }
    let left: HashSet<_> = view.rev_depend(px).iter().copied().collect();
    Ok(view
        .rev_depend(py)
        .iter()
        .filter(|&&p| left.contains(&p))
        .count())
}

/// Pair popularity of `(px, py)` normalized by the strongest pair in
/// the candidate set `set`.
///
/// Yields 1.0 for the maximal pair, values in `[0, 1]` elsewhere, and
/// 0.0 everywhere when no pair in the set has a common dependent.
pub fn intensity(
    view: &ProjectView,
    px: ProjectId,
    py: ProjectId,
    set: &[ProjectId],
) -> Result<f64, MetricsError> {
    if px == py {
        return Err(MetricsError::SamePairMember);
    }
    if !set.contains(&px) || !set.contains(&py) {
        return Err(MetricsError::PairNotInSet);
    }
    let mut candidates: Vec<_> = set.to_vec();
    candidates.sort_unstable();
    candidates.dedup();

    let mut max = 0usize;
    for (i, &a) in candidates.iter().enumerate() {
        for &b in &candidates[i + 1..] {
            max = max.max(project_pair_popularity(view, a, b)?);
        }
    }
    if max == 0 {
        return Ok(0.0);
    }
    let count = project_pair_popularity(view, px, py)?;
    Ok(count as f64 / max as f64)
}

/// Release-by-release pairing grid for two projects.
///
/// Axes hold each project's releases in chain order. `counts[i][j]` is
/// the pair popularity of `axis_x[i]` with `axis_y[j]`; `intensity`
/// normalizes by the grid maximum. `outside_x[i]` sums `axis_x[i]`'s
/// pairings beyond the two projects (`outside_y` likewise).
#[derive(Clone, Debug, PartialEq)]
pub struct PairMatrix {
    pub axis_x: Vec<NodeId>,
    pub axis_y: Vec<NodeId>,
    pub counts: Vec<Vec<usize>>,
    pub intensity: Vec<Vec<f64>>,
    pub outside_x: Vec<usize>,
    pub outside_y: Vec<usize>,
}

/// Builds the release pair grid for two distinct projects of `view`.
pub fn release_pair_matrix(
    universe: &Universe,
    view: &ProjectView,
    px: ProjectId,
    py: ProjectId,
) -> Result<PairMatrix, MetricsError> {
    if px == py {
        return Err(MetricsError::SamePairMember);
    }
    let axis_x: Vec<NodeId> = view.members(px).to_vec();
    let axis_y: Vec<NodeId> = view.members(py).to_vec();
    let head_x = universe.chain_head(axis_x[0]);
    let head_y = universe.chain_head(axis_y[0]);

    let counts: Vec<Vec<usize>> = axis_x
        .iter()
        .map(|&x| {
            axis_y
                .iter()
                .map(|&y| common_dependents(universe, x, y))
                .collect()
        })
        .collect();
    let max = counts
        .iter()
        .flat_map(|row| row.iter().copied())
        .max()
        .unwrap_or(0);
    let intensity: Vec<Vec<f64>> = counts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&c| if max == 0 { 0.0 } else { c as f64 / max as f64 })
                .collect()
        })
        .collect();
    let outside_x = axis_x
        .iter()
        .map(|&x| outside_sum(universe, x, head_x, head_y))
        .collect();
    let outside_y = axis_y
        .iter()
        .map(|&y| outside_sum(universe, y, head_y, head_x))
        .collect();

    Ok(PairMatrix {
        axis_x,
        axis_y,
        counts,
        intensity,
        outside_x,
        outside_y,
    })
}
