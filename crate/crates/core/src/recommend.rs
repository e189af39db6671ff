//! Co-dependency ranking and cross-repository accuracy.
//!
//! Ranking works at project level: systems declare their dependencies
//! by library name, and project labels are the join key between a
//! reference universe and foreign system profiles. The ranking score of
//! a candidate is its project pair popularity with the anchor.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;

use crate::project::{ProjectId, ProjectView};

/// One foreign system and the set of libraries it depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemProfile {
    pub system: String,
    pub libraries: BTreeSet<String>,
}

impl SystemProfile {
    pub fn new(system: impl Into<String>, libraries: impl IntoIterator<Item = String>) -> Self {
        SystemProfile {
            system: system.into(),
            libraries: libraries.into_iter().collect(),
        }
    }
}

/// Top-k co-dependency candidates for one anchor project.
///
/// Entries are sorted by score descending, ties broken by label
/// ascending; every score is at least one and the list never exceeds
/// `k`, even when ties straddle the cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedList {
    pub anchor: ProjectId,
    pub entries: Vec<(ProjectId, usize)>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecommendError {
    /// k must be at least one.
    ZeroK,
    /// Accuracy over an empty library set is undefined.
    EmptyProfile,
    /// The ranked list's anchor is not part of the profile.
    AnchorNotInProfile,
}

impl fmt::Display for RecommendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            RecommendError::ZeroK => "k must be at least 1",
            RecommendError::EmptyProfile => "profile has no libraries",
            RecommendError::AnchorNotInProfile => "anchor is not one of the profile's libraries",
        };
        write!(f, "{msg}")
    }
}

impl core::error::Error for RecommendError {}

/// Ranks every project sharing at least one dependent with `anchor`.
pub fn codependency_rank(
    view: &ProjectView,
    anchor: ProjectId,
    k: usize,
) -> Result<RankedList, RecommendError> {
    if k == 0 {
        return Err(RecommendError::ZeroK);
    }
    let anchor_users: HashSet<ProjectId> = view.rev_depend(anchor).iter().copied().collect();
    let mut entries: Vec<(ProjectId, usize)> = view
        .ids()
        .filter(|&candidate| candidate != anchor)
        .filter_map(|candidate| {
            let score = view
                .rev_depend(candidate)
                .iter()
                .filter(|&&user| anchor_users.contains(&user))
                .count();
            (score >= 1).then_some((candidate, score))
        })
        .collect();
    entries.sort_by(|(ca, sa), (cb, sb)| {
        sb.cmp(sa)
            .then_with(|| view.label(*ca).cmp(view.label(*cb)))
    });
    entries.truncate(k);
    Ok(RankedList { anchor, entries, k })
}

/// Whether any recommended candidate is another of the system's own
/// libraries. The anchor itself never counts as a hit.
pub fn sys_match(
    view: &ProjectView,
    list: &RankedList,
    profile: &SystemProfile,
) -> Result<bool, RecommendError> {
    let anchor_label = view.label(list.anchor);
    if !profile.libraries.contains(anchor_label) {
        return Err(RecommendError::AnchorNotInProfile);
    }
    Ok(list.entries.iter().any(|&(candidate, _)| {
        let label = view.label(candidate);
        label != anchor_label && profile.libraries.contains(label)
    }))
}

/// Share of the profile's libraries whose top-k list contains another
/// profile member, as a percentage.
///
/// Libraries absent from the reference view contribute a miss; they
/// stay in the denominator.
pub fn accuracy(
    view: &ProjectView,
    profile: &SystemProfile,
    k: usize,
) -> Result<f64, RecommendError> {
    if k == 0 {
        return Err(RecommendError::ZeroK);
    }
    if profile.libraries.is_empty() {
        return Err(RecommendError::EmptyProfile);
    }
    let mut hits = 0usize;
    for library in &profile.libraries {
        let Some(anchor) = view.get(library) else {
            continue;
        };
        let list = codependency_rank(view, anchor, k)?;
        if sys_match(view, &list, profile).expect("anchor drawn from the profile") {
            hits += 1;
        }
    }
    Ok(hits as f64 / profile.libraries.len() as f64 * 100.0)
}

/// Five-number summary of a set of accuracy percentages.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distribution {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Per-system accuracies plus their distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyReport {
    /// `(system, accuracy)` in input order.
    pub rows: Vec<(String, f64)>,
    /// Absent when no profiles were given.
    pub summary: Option<Distribution>,
}

/// Evaluates every profile against the reference view.
pub fn cross_repo_report(
    view: &ProjectView,
    profiles: &[SystemProfile],
    k: usize,
) -> Result<AccuracyReport, RecommendError> {
    let mut rows = Vec::with_capacity(profiles.len());
    for profile in profiles {
        rows.push((profile.system.clone(), accuracy(view, profile, k)?));
    }
    let summary = distribution(rows.iter().map(|&(_, a)| a));
    Ok(AccuracyReport { rows, summary })
}

/// Quartiles with linear interpolation between order statistics.
pub fn distribution(values: impl IntoIterator<Item = f64>) -> Option<Distribution> {
    let mut sorted: Vec<f64> = values.into_iter().collect();
    if sorted.is_empty() {
        return None;
    }
    sorted.sort_unstable_by(f64::total_cmp);
    Some(Distribution {
        min: quartile(&sorted, 0),
        q1: quartile(&sorted, 1),
        median: quartile(&sorted, 2),
        q3: quartile(&sorted, 3),
        max: quartile(&sorted, 4),
    })
}

fn quartile(sorted: &[f64], quarter: usize) -> f64 {
    // Position in quarter-steps keeps the interpolation in integer
    // arithmetic; no_std projects don't get f64::floor for free.
    let pos4 = quarter * (sorted.len() - 1);
    let lo = pos4 / 4;
    let frac = (pos4 % 4) as f64 / 4.0;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac
    }
}
