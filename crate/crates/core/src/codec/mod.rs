//! Reading and writing CDF documents (JSON) and streams (JSON Lines).
//!
//! Decoding is total: once the bytes are valid UTF-8 and a JSON object,
//! every recognised key is bound into the typed model, unknown keys are kept
//! in the `extras` map of their object, and anything of the wrong shape
//! becomes a finding plus a [`Field::Invalid`] carrying the raw value.
//!
//! Writing is deterministic: keys follow schema order, known keys first and
//! extras after, measurement floats are rounded half-to-even to three
//! decimals and missing values are written per [`MissingPolicy`].

mod decode;
mod emit;
mod encode;
mod stream;
pub mod time;

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{CdfError, Result};
use crate::model::{CdfTimestamp, EventRecord, Field, MatchMeta, MatchSheet, SkeletonFrame};
use crate::model::{TrackingFrame, VideoMeta};
use crate::report::{Component, Report};
use crate::rules::catalog::{self, Structural};

pub use decode::Decoder;
pub use encode::Encoder;
pub use stream::{
    decode_line, read_line_stream, write_line_stream, LineStream, LiveLineBuffer, StreamCursor, StreamItem,
    StreamMode, StreamOptions,
};
pub use time::{format_cdf_time, SENTINEL_TIME};

/// How missing values are written, and which spellings are read as missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Only `null` is missing.
    Null,
    /// Type sentinels (`"None"`, `-9999.0`, `-9999`, the 1900 timestamp).
    Sentinel,
    /// Either convention; writes `null`.
    #[default]
    AcceptBoth,
}

impl MissingPolicy {
    pub fn accepts_sentinels(self) -> bool {
        !matches!(self, MissingPolicy::Null)
    }

    pub fn writes_sentinels(self) -> bool {
        matches!(self, MissingPolicy::Sentinel)
    }
}

impl FromStr for MissingPolicy {
    type Err = CdfError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "null" => Ok(MissingPolicy::Null),
            "sentinel" => Ok(MissingPolicy::Sentinel),
            "accept_both" | "accept-both" | "both" => Ok(MissingPolicy::AcceptBoth),
            _ => Err(CdfError::UnknownName {
                what: "missing-value policy",
                value: s.to_owned(),
            }),
        }
    }
}

impl fmt::Display for MissingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MissingPolicy::Null => "null",
            MissingPolicy::Sentinel => "sentinel",
            MissingPolicy::AcceptBoth => "accept_both",
        })
    }
}

/// Primitive type a field is declared with; selects its sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclaredType {
    Text,
    Float,
    Integer,
    Boolean,
    Timestamp,
    Object,
    Array,
}

impl DeclaredType {
    /// The sentinel for this type, if it has one.
    pub fn sentinel(self) -> Option<Value> {
        match self {
            DeclaredType::Text => Some(Value::from(crate::model::vocab::NONE_TEXT)),
            DeclaredType::Float => Some(Value::from(-9999.0)),
            DeclaredType::Integer | DeclaredType::Boolean => Some(Value::from(-9999)),
            DeclaredType::Timestamp => Some(Value::from(SENTINEL_TIME)),
            DeclaredType::Object | DeclaredType::Array => None,
        }
    }

    pub fn is_sentinel(self, raw: &Value) -> bool {
        match (self, raw) {
            (DeclaredType::Text, Value::String(s)) => s == crate::model::vocab::NONE_TEXT,
            (DeclaredType::Float | DeclaredType::Integer | DeclaredType::Boolean, Value::Number(n)) => {
                n.as_f64() == Some(-9999.0)
            }
            (DeclaredType::Timestamp, Value::String(s)) => {
                time::parse_timestamp(s).is_some_and(|t| time::is_sentinel_time(&t))
            }
            _ => false,
        }
    }
}

/// Result of [`decode_missing`].
#[derive(Debug, Clone, PartialEq)]
pub enum Decoded<'a> {
    Missing,
    Value(&'a Value),
    /// A sentinel under the null-only policy: kept as a value, but flagged.
    SentinelPassthrough(&'a Value),
}

/// Classifies a raw value as missing or present. `null` is always missing;
/// sentinels are missing unless the policy is null-only.
pub fn decode_missing(raw: &Value, ty: DeclaredType, policy: MissingPolicy) -> Decoded<'_> {
    if raw.is_null() {
        return Decoded::Missing;
    }
    if ty.is_sentinel(raw) {
        return if policy.accepts_sentinels() {
            Decoded::Missing
        } else {
            Decoded::SentinelPassthrough(raw)
        };
    }
    Decoded::Value(raw)
}

/// Parses a timestamp field value. Sentinel handling follows `policy`;
/// unparseable text is reported and read as missing.
pub fn parse_cdf_time(text: &str, policy: MissingPolicy) -> (Field<CdfTimestamp>, Report) {
    let mut report = Report::new(Component::Bundle);
    let field = match time::parse_timestamp(text) {
        Some(ts) if time::is_sentinel_time(&ts) && policy.accepts_sentinels() => Field::Missing,
        Some(ts) => {
            if time::is_sentinel_time(&ts) {
                report.push(
                    catalog::structural(Component::Bundle, Structural::SentinelUnderNull),
                    "",
                    "sentinel-like value under null policy",
                );
            }
            Field::Value(ts)
        }
        None => {
            report.push(
                catalog::structural(Component::Bundle, Structural::InvalidTimestamp),
                "",
                format!("invalid timestamp `{text}`"),
            );
            Field::Missing
        }
    };
    (field, report)
}

/// The three JSON document kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DocKind {
    MatchSheet,
    Meta,
    VideoMeta,
}

/// The three JSON Lines stream kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamKind {
    Event,
    TrackingCom,
    TrackingSkeletal,
}

impl DocKind {
    pub fn component(self) -> Component {
        match self {
            DocKind::MatchSheet => Component::MatchSheet,
            DocKind::Meta => Component::Meta,
            DocKind::VideoMeta => Component::Video,
        }
    }
}

impl StreamKind {
    pub fn component(self) -> Component {
        match self {
            StreamKind::Event => Component::Events,
            StreamKind::TrackingCom => Component::Tracking,
            StreamKind::TrackingSkeletal => Component::Skeletal,
        }
    }
}

impl FromStr for DocKind {
    type Err = CdfError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "match_sheet" => Ok(DocKind::MatchSheet),
            "meta" => Ok(DocKind::Meta),
            "video_meta" | "video" => Ok(DocKind::VideoMeta),
            _ => Err(CdfError::UnknownName { what: "document kind", value: s.to_owned() }),
        }
    }
}

impl FromStr for StreamKind {
    type Err = CdfError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "event" | "events" => Ok(StreamKind::Event),
            "tracking_com" | "tracking" => Ok(StreamKind::TrackingCom),
            "tracking_skeletal" | "skeletal" => Ok(StreamKind::TrackingSkeletal),
            _ => Err(CdfError::UnknownName { what: "stream kind", value: s.to_owned() }),
        }
    }
}

mod sealed {
    use serde_json::{Map, Value};

    pub trait Codec: Sized {
        fn bind(d: &mut super::Decoder<'_>, map: &Map<String, Value>) -> Self;
        fn emit(&self, e: &mut super::Encoder) -> Map<String, Value>;
    }
}

/// A top-level CDF object: a document or one stream record.
pub trait CdfRecord: sealed::Codec + Clone + PartialEq + fmt::Debug + Default + Send + 'static {
    const COMPONENT: Component;
}

impl CdfRecord for MatchSheet {
    const COMPONENT: Component = Component::MatchSheet;
}
impl CdfRecord for MatchMeta {
    const COMPONENT: Component = Component::Meta;
}
impl CdfRecord for VideoMeta {
    const COMPONENT: Component = Component::Video;
}
impl CdfRecord for EventRecord {
    const COMPONENT: Component = Component::Events;
}
impl CdfRecord for TrackingFrame {
    const COMPONENT: Component = Component::Tracking;
}
impl CdfRecord for SkeletonFrame {
    const COMPONENT: Component = Component::Skeletal;
}

/// A decoded JSON document of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    MatchSheet(MatchSheet),
    Meta(MatchMeta),
    VideoMeta(VideoMeta),
}

/// Binds an already-parsed JSON value. Non-objects are reported.
pub fn decode_value<T: CdfRecord>(value: &Value, policy: MissingPolicy, report: &mut Report) -> Option<T> {
    match value {
        Value::Object(map) => {
            let mut d = Decoder::new(policy, report);
            Some(T::bind(&mut d, map))
        }
        _ => {
            report.push(
                catalog::structural(report.component(), Structural::NotAnObject),
                "",
                "top-level JSON value is not an object",
            );
            None
        }
    }
}

/// Parses bytes as one JSON object: UTF-8 check, JSON syntax, object shape.
pub(crate) fn parse_object_bytes(bytes: &[u8], report: &mut Report) -> Option<Value> {
    let component = report.component();
    if let Err(e) = std::str::from_utf8(bytes) {
        report.push(
            catalog::structural(component, Structural::InvalidUtf8),
            "",
            format!("{} (byte offset {})", CdfError::Encoding { offset: e.valid_up_to() }, e.valid_up_to()),
        );
        return None;
    }
    match serde_json::from_slice::<Value>(bytes) {
        Ok(v) => Some(v),
        Err(e) => {
            report.push(
                catalog::structural(component, Structural::MalformedJson),
                "",
                format!("malformed JSON: {e}"),
            );
            None
        }
    }
}

/// Decodes a JSON document of type `T`, returning decode findings only
/// (encoding, syntax, primitive types). Use [`crate::rules`] for the rest.
pub fn decode_document<T: CdfRecord>(bytes: &[u8], policy: MissingPolicy) -> (Option<T>, Report) {
    let mut report = Report::new(T::COMPONENT);
    let model = parse_object_bytes(bytes, &mut report).and_then(|v| decode_value::<T>(&v, policy, &mut report));
    (model, report)
}

/// Reads a document of the given kind. The report holds decode findings and
/// missing-mandatory-field findings.
pub fn read_document(bytes: &[u8], kind: DocKind, policy: MissingPolicy) -> (Option<Document>, Report) {
    fn go<T: CdfRecord>(bytes: &[u8], policy: MissingPolicy, wrap: fn(T) -> Document) -> (Option<Document>, Report) {
        let (model, mut report) = decode_document::<T>(bytes, policy);
        if let Some(m) = &model {
            report.absorb(crate::rules::presence::check_record(m));
        }
        (model.map(wrap), report)
    }
    match kind {
        DocKind::MatchSheet => go(bytes, policy, Document::MatchSheet),
        DocKind::Meta => go(bytes, policy, Document::Meta),
        DocKind::VideoMeta => go(bytes, policy, Document::VideoMeta),
    }
}

/// Output settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WriteOptions {
    pub policy: MissingPolicy,
    /// Decimal places for measurement floats; `None` keeps them as-is.
    pub decimals: Option<u32>,
    pub pretty: bool,
}

impl Default for WriteOptions {
    fn default() -> Self {
        WriteOptions {
            policy: MissingPolicy::Null,
            decimals: Some(crate::scalar::CDF_DECIMALS),
            pretty: false,
        }
    }
}

impl WriteOptions {
    pub fn with_policy(mut self, policy: MissingPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_decimals(mut self, decimals: Option<u32>) -> Self {
        self.decimals = decimals;
        self
    }

    pub fn pretty(mut self, pretty: bool) -> Self {
        self.pretty = pretty;
        self
    }
}

/// Encodes a record as a JSON object value.
pub fn encode_value<T: CdfRecord>(record: &T, opts: &WriteOptions) -> Result<Map<String, Value>> {
    let mut e = Encoder::new(*opts);
    let map = record.emit(&mut e);
    e.finish().map(|()| map)
}

/// Encodes without failing on non-finite floats (written as `null`).
/// Used to inspect the shape of programmatically built models.
pub(crate) fn encode_shape<T: CdfRecord>(record: &T) -> Map<String, Value> {
    let mut e = Encoder::new(WriteOptions::default().with_decimals(None));
    record.emit(&mut e)
}

/// Encodes without failing; also returns the paths of non-finite floats,
/// which are written as `null`.
pub(crate) fn encode_lenient<T: CdfRecord>(record: &T, opts: &WriteOptions) -> (Map<String, Value>, Vec<String>) {
    let mut e = Encoder::new(*opts);
    let map = record.emit(&mut e);
    (map, e.take_non_finite())
}

/// Serializes one record. Documents get a trailing newline.
pub fn write_record<T: CdfRecord>(record: &T, opts: &WriteOptions) -> Result<Vec<u8>> {
    let map = encode_value(record, opts)?;
    let value = Value::Object(map);
    let mut out = if opts.pretty {
        serde_json::to_vec_pretty(&value)?
    } else {
        serde_json::to_vec(&value)?
    };
    out.push(b'\n');
    Ok(out)
}

pub fn write_document(doc: &Document, opts: &WriteOptions) -> Result<Vec<u8>> {
    match doc {
        Document::MatchSheet(m) => write_record(m, opts),
        Document::Meta(m) => write_record(m, opts),
        Document::VideoMeta(m) => write_record(m, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn missing_values_by_policy() {
        let none = json!("None");
        assert_eq!(decode_missing(&none, DeclaredType::Text, MissingPolicy::AcceptBoth), Decoded::Missing);
        let f = json!(-9999.0);
        assert_eq!(decode_missing(&f, DeclaredType::Float, MissingPolicy::AcceptBoth), Decoded::Missing);
        assert_eq!(
            decode_missing(&f, DeclaredType::Float, MissingPolicy::Null),
            Decoded::SentinelPassthrough(&f)
        );
        let i = json!(-9999);
        assert_eq!(decode_missing(&i, DeclaredType::Boolean, MissingPolicy::Sentinel), Decoded::Missing);
        assert_eq!(decode_missing(&Value::Null, DeclaredType::Text, MissingPolicy::Null), Decoded::Missing);
        let t = json!(SENTINEL_TIME);
        assert_eq!(decode_missing(&t, DeclaredType::Timestamp, MissingPolicy::Sentinel), Decoded::Missing);
        let ok = json!("pass");
        assert_eq!(decode_missing(&ok, DeclaredType::Text, MissingPolicy::Sentinel), Decoded::Value(&ok));
        // A text field holding -9999 is not a text sentinel.
        assert_eq!(decode_missing(&i, DeclaredType::Text, MissingPolicy::AcceptBoth), Decoded::Value(&i));
    }

    #[test]
    fn parse_time_examples() {
        let (f, r) = parse_cdf_time("2024-08-29T14:00:00", MissingPolicy::AcceptBoth);
        assert_eq!(f.value().unwrap().canonical(), "2024-08-29T14:00:00");
        assert!(r.is_empty());
        let (f, _) = parse_cdf_time(SENTINEL_TIME, MissingPolicy::Sentinel);
        assert!(f.is_missing());
        let (f, r) = parse_cdf_time(SENTINEL_TIME, MissingPolicy::Null);
        assert!(f.value().is_some());
        assert_eq!(r.counts().warning, 1);
        let (f, r) = parse_cdf_time("half time", MissingPolicy::AcceptBoth);
        assert!(f.is_missing());
        assert_eq!(r.counts().error, 1);
    }

    #[test]
    fn policy_names() {
        for p in [MissingPolicy::Null, MissingPolicy::Sentinel, MissingPolicy::AcceptBoth] {
            assert_eq!(p.to_string().parse::<MissingPolicy>().unwrap(), p);
        }
        assert!("maybe".parse::<MissingPolicy>().is_err());
    }
}
