//! Model of a software "universe": every release a super repository
//! hosts, the dependency edges between releases, and the update chains
//! within each project.
//!
//! The crate is split along the lifecycle of an analysis:
//!
//! - [`universe`] — the release-level graph and its closure queries,
//! - [`project`] — aggregation of update chains into project nodes,
//! - [`metrics`] — popularity, variety, diffusion series, superseding
//!   points, and pairing metrics,
//! - [`recommend`] — top-k co-dependency recommendation and the
//!   cross-repository accuracy measure.
//!
//! The crate is `no_std` + `alloc`; disable the default `std` feature
//! for freestanding use. IO, file formats, and the command line live in
//! the companion CLI crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod metrics;
pub mod project;
pub mod recommend;
pub mod universe;

pub use metrics::{
    diffusion_series, intensity, outside, pair_popularity, popularity, popularity_at,
    project_pair_popularity, release_pair_matrix, reuse, superseding_crossings, superseding_point,
    variety, variety_at, MetricKind, MetricsError, PairMatrix, SupersedingPoint, TimeSeries,
};
pub use project::{aggregate, ProjectId, ProjectView, UnknownProject};
pub use recommend::{
    accuracy, codependency_rank, cross_repo_report, distribution, sys_match, AccuracyReport,
    Distribution, RankedList, RecommendError, SystemProfile,
};
pub use universe::{BuildError, NodeId, ReleaseNode, Timestamp, Universe, UnknownNode};
