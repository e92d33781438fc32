//! Timestamp parsing and canonical formatting.

use chrono::{DateTime, FixedOffset, NaiveDateTime, TimeZone, Utc};

use crate::model::CdfTimestamp;

/// The sentinel timestamp text for a missing time.
pub const SENTINEL_TIME: &str = "1900-01-01 00:00:00+00:00";

const NAIVE_FORMATS: &[&str] = &["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"];
const OFFSET_FORMATS: &[&str] = &[
    "%Y-%m-%dT%H:%M:%S%.f%:z",
    "%Y-%m-%d %H:%M:%S%.f%:z",
    "%Y-%m-%dT%H:%M:%S%.f%z",
    "%Y-%m-%d %H:%M:%S%.f%z",
    "%Y-%m-%dT%H:%M:%S%.f%#z",
    "%Y-%m-%d %H:%M:%S%.f%#z",
];

/// Parses ISO-8601 text with a `T` or space separator, with or without a
/// UTC offset (`Z`, `+HH:MM`, `+HHMM`, `+HH`). Offset-less text is UTC.
/// Returns `None` for unparseable text.
pub fn parse_timestamp(text: &str) -> Option<CdfTimestamp> {
    let trimmed = text.trim();
    let body = trimmed.strip_suffix('Z').or_else(|| trimmed.strip_suffix('z'));
    if let Some(body) = body {
        return parse_naive(body).map(|i| CdfTimestamp::new(i, text));
    }
    if let Some(instant) = parse_naive(trimmed) {
        return Some(CdfTimestamp::new(instant, text));
    }
    OFFSET_FORMATS.iter().find_map(|fmt| {
        DateTime::<FixedOffset>::parse_from_str(trimmed, fmt)
            .ok()
            .map(|dt| CdfTimestamp::new(dt.with_timezone(&Utc), text))
    })
}

fn parse_naive(text: &str) -> Option<DateTime<Utc>> {
    NAIVE_FORMATS.iter().find_map(|fmt| {
        NaiveDateTime::parse_from_str(text, fmt)
            .ok()
            .map(|n| Utc.from_utc_datetime(&n))
    })
}

/// Canonical text: `YYYY-MM-DDTHH:MM:SS[.fff]`, no offset, read as UTC.
pub fn format_cdf_time(instant: &DateTime<Utc>) -> String {
    instant.format("%Y-%m-%dT%H:%M:%S%.f").to_string()
}

pub fn is_sentinel_time(ts: &CdfTimestamp) -> bool {
    ts.instant() == sentinel_instant()
}

fn sentinel_instant() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(1900, 1, 1, 0, 0, 0).single().expect("valid date")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn utc(text: &str) -> DateTime<Utc> {
        parse_timestamp(text).unwrap().instant()
    }

    #[test]
    fn accepts_both_separators_and_offsets() {
        let want = Utc.with_ymd_and_hms(2024, 8, 29, 14, 0, 0).unwrap();
        for text in [
            "2024-08-29T14:00:00",
            "2024-08-29 14:00:00",
            "2024-08-29T14:00:00Z",
            "2024-08-29T14:00:00+00:00",
            "2024-08-29 16:00:00+02:00",
            "2024-08-29T15:00:00+0100",
            "2024-08-29T12:00:00-02",
        ] {
            assert_eq!(utc(text), want, "{text}");
        }
    }

    #[test]
    fn fractional_seconds() {
        let ts = parse_timestamp("2024-08-29T14:00:00.040").unwrap();
        assert_eq!(ts.canonical(), "2024-08-29T14:00:00.040");
        assert_eq!(parse_timestamp(&ts.canonical()).unwrap(), ts);
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "yesterday", "2024-13-01T00:00:00", "2024-08-29", "14:00:00"] {
            assert!(parse_timestamp(text).is_none(), "{text}");
        }
    }

    #[test]
    fn sentinel_is_recognised() {
        assert!(is_sentinel_time(&parse_timestamp(SENTINEL_TIME).unwrap()));
        assert!(!is_sentinel_time(&parse_timestamp("1900-01-01T00:00:01").unwrap()));
    }

    #[test]
    fn two_hour_gap() {
        let a = parse_timestamp("2024-08-29T14:00:00").unwrap();
        let b = parse_timestamp("2024-08-29T16:00:00").unwrap();
        assert_eq!(b.seconds_since(&a), 7200.0);
    }

    #[test]
    fn canonical_form_round_trips() {
        let ts = parse_timestamp("2024-08-29 14:01:03+00:00").unwrap();
        assert_eq!(ts.canonical(), "2024-08-29T14:01:03");
    }
}
