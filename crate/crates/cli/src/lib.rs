//! IO companion to `sugraph-core`: manifest and POM ingestion, the
//! universe snapshot format, CSV/SVG emission, and the subcommand
//! implementations behind the `sugraph` binary.

pub mod commands;
pub mod export;
pub mod ingest;
pub mod time;
