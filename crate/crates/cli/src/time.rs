//! ISO-8601 parsing and canonical formatting for node timestamps.
//!
//! Inputs may be a date (`2012-11-14`), a naive datetime, or an RFC
//! 3339 datetime with offset; everything is normalized to millisecond
//! UTC. Formatting picks the shortest form that round-trips, so
//! day-granular data stays day-granular on disk.

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use sugraph_core::Timestamp;

const DAY_MS: i64 = 86_400_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid timestamp {input:?}: expected ISO-8601 date or datetime")]
pub struct TimeParseError {
    pub input: String,
}

pub fn parse_timestamp(input: &str) -> Result<Timestamp, TimeParseError> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(input) {
        return Ok(Timestamp(dt.timestamp_millis()));
    }
    if let Ok(dt) = NaiveDateTime::parse_from_str(input, "%Y-%m-%dT%H:%M:%S%.f") {
        return Ok(Timestamp(dt.and_utc().timestamp_millis()));
    }
    if let Ok(date) = NaiveDate::parse_from_str(input, "%Y-%m-%d") {
        let midnight = date.and_hms_opt(0, 0, 0).expect("midnight is valid");
        return Ok(Timestamp(midnight.and_utc().timestamp_millis()));
    }
    Err(TimeParseError {
        input: input.to_string(),
    })
}

pub fn format_timestamp(t: Timestamp) -> String {
    let dt = DateTime::<Utc>::from_timestamp_millis(t.millis())
        .expect("timestamps stay within chrono's range");
    if t.millis().rem_euclid(DAY_MS) == 0 {
        dt.format("%Y-%m-%d").to_string()
    } else if t.millis().rem_euclid(1000) == 0 {
        dt.format("%Y-%m-%dT%H:%M:%SZ").to_string()
    } else {
        dt.format("%Y-%m-%dT%H:%M:%S%.3fZ").to_string()
    }
}
