//! Typed CDF data model.
//!
//! Every field in a document is a [`Field`], which separates a key that was
//! never written ([`Field::Absent`]) from an explicitly missing value
//! ([`Field::Missing`], i.e. `null` or a sentinel) and from a value of the
//! wrong primitive type ([`Field::Invalid`], kept verbatim so it can be
//! re-emitted). Enumerated text is held as a [`Code`] so that values outside
//! the closed vocabularies survive decoding and are reported by the rules.

mod common;
mod event;
mod match_sheet;
mod meta;
mod tracking;
mod video;
pub mod vocab;

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde_json::Value;

use crate::error::CdfError;
use crate::scalar::Scalar;

pub use common::*;
pub use event::*;
pub use match_sheet::*;
pub use meta::*;
pub use tracking::*;
pub use video::*;
pub use vocab::*;

/// Unknown keys of an object, re-emitted after the known ones.
pub type Extras = serde_json::Map<String, Value>;

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Field<T> {
    #[default]
    Absent,
    Missing,
    Value(T),
    Invalid(Value),
}

impl<T> Field<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Field::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn value_mut(&mut self) -> Option<&mut T> {
        match self {
            Field::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn into_value(self) -> Option<T> {
        match self {
            Field::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Field::Absent)
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Field::Missing)
    }

    /// The key exists in the document (with any value, including `null`).
    pub fn is_present(&self) -> bool {
        !self.is_absent()
    }

    pub fn as_ref(&self) -> Field<&T> {
        match self {
            Field::Absent => Field::Absent,
            Field::Missing => Field::Missing,
            Field::Value(v) => Field::Value(v),
            Field::Invalid(raw) => Field::Invalid(raw.clone()),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Field<U> {
        match self {
            Field::Absent => Field::Absent,
            Field::Missing => Field::Missing,
            Field::Value(v) => Field::Value(f(v)),
            Field::Invalid(raw) => Field::Invalid(raw),
        }
    }
}

impl<T> From<T> for Field<T> {
    fn from(v: T) -> Self {
        Field::Value(v)
    }
}

impl<T> From<Option<T>> for Field<T> {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Missing, Field::Value)
    }
}

impl<T: Copy> Field<T> {
    pub fn get(&self) -> Option<T> {
        self.value().copied()
    }
}

/// A boolean encoded as an integer. Only `0` and `1` are valid; anything
/// else is kept so the rules can report it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flag(pub i64);

impl Flag {
    pub const TRUE: Flag = Flag(1);
    pub const FALSE: Flag = Flag(0);

    pub fn as_bool(self) -> Option<bool> {
        match self.0 {
            0 => Some(false),
            1 => Some(true),
            _ => None,
        }
    }

    pub fn is_valid(self) -> bool {
        self.as_bool().is_some()
    }
}

impl From<bool> for Flag {
    fn from(b: bool) -> Self {
        Flag(i64::from(b))
    }
}

impl Field<Flag> {
    /// `Some(true|false)` only for a valid flag value.
    pub fn truth(&self) -> Option<bool> {
        self.get().and_then(Flag::as_bool)
    }

    pub fn is_set(&self) -> bool {
        self.truth() == Some(true)
    }
}

/// A closed set of text values.
pub trait Vocabulary: Copy + Eq + fmt::Debug + 'static {
    const ALL: &'static [Self];
    /// Whether the literal text `"None"` is itself a member (event
    /// sub-types). Such fields decode `"None"` to missing under any policy.
    const NONE_IS_MEMBER: bool = false;

    fn as_str(self) -> &'static str;

    fn parse(text: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|v| v.as_str() == text)
    }

    fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|v| v.as_str()).collect()
    }
}

/// Enumerated text: a recognised member or the raw unrecognised text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Code<E> {
    Known(E),
    Unknown(String),
}

impl<E: Vocabulary> Code<E> {
    pub fn from_text(text: &str) -> Self {
        E::parse(text).map_or_else(|| Code::Unknown(text.to_owned()), Code::Known)
    }

    pub fn known(&self) -> Option<E> {
        match self {
            Code::Known(e) => Some(*e),
            Code::Unknown(_) => None,
        }
    }

    pub fn text(&self) -> &str {
        match self {
            Code::Known(e) => e.as_str(),
            Code::Unknown(s) => s,
        }
    }
}

impl<E> From<E> for Code<E> {
    fn from(e: E) -> Self {
        Code::Known(e)
    }
}

impl<E: Vocabulary> Field<Code<E>> {
    pub fn known(&self) -> Option<E> {
        self.value().and_then(Code::known)
    }
}

/// Non-empty identifier without surrounding whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(value: impl Into<String>) -> Result<Self, CdfError> {
        let value = value.into();
        if value.is_empty() || value.trim() != value {
            return Err(CdfError::InvalidId(value));
        }
        Ok(EntityId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for EntityId {
    type Err = CdfError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityId::new(s)
    }
}

impl PartialEq<str> for EntityId {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for EntityId {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

impl Field<EntityId> {
    pub fn id_str(&self) -> Option<&str> {
        self.value().map(EntityId::as_str)
    }
}

/// A UTC instant plus the text it was read from. Equality, ordering and
/// hashing look only at the instant.
#[derive(Debug, Clone)]
pub struct CdfTimestamp {
    instant: DateTime<Utc>,
    original_text: String,
}

impl CdfTimestamp {
    pub fn new(instant: DateTime<Utc>, original_text: impl Into<String>) -> Self {
        CdfTimestamp {
            instant,
            original_text: original_text.into(),
        }
    }

    pub fn from_instant(instant: DateTime<Utc>) -> Self {
        let text = crate::codec::time::format_cdf_time(&instant);
        CdfTimestamp::new(instant, text)
    }

    pub fn instant(&self) -> DateTime<Utc> {
        self.instant
    }

    pub fn original_text(&self) -> &str {
        &self.original_text
    }

    /// Canonical offset-less text (interpreted as UTC).
    pub fn canonical(&self) -> String {
        crate::codec::time::format_cdf_time(&self.instant)
    }

    /// Signed difference `self - earlier` in seconds (fractional).
    pub fn seconds_since(&self, earlier: &CdfTimestamp) -> f64 {
        let d = self.instant - earlier.instant;
        d.num_milliseconds() as f64 / 1000.0
    }
}

impl PartialEq for CdfTimestamp {
    fn eq(&self, other: &Self) -> bool {
        self.instant == other.instant
    }
}

impl Eq for CdfTimestamp {}

impl PartialOrd for CdfTimestamp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CdfTimestamp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.instant.cmp(&other.instant)
    }
}

impl std::hash::Hash for CdfTimestamp {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.instant.hash(state);
    }
}

/// Pitch length (along X) and width (along Y) in meters; either may be
/// unknown.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PitchGeometry<T = f64> {
    pub length: Option<T>,
    pub width: Option<T>,
}

impl<T: Scalar> PitchGeometry<T> {
    pub const MAX_LENGTH: f64 = 130.0;
    pub const MAX_WIDTH: f64 = 100.0;

    pub fn new(length: T, width: T) -> Self {
        PitchGeometry {
            length: Some(length),
            width: Some(width),
        }
    }

    pub fn unknown() -> Self {
        PitchGeometry {
            length: None,
            width: None,
        }
    }

    pub fn is_known(&self) -> bool {
        self.length.is_some() && self.width.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entity_id_rules() {
        assert!(EntityId::new("74e6661c").is_ok());
        assert!(EntityId::new("").is_err());
        assert!(EntityId::new(" a").is_err());
        assert!(EntityId::new("a\t").is_err());
        assert!(EntityId::new("a b").is_ok());
    }

    #[test]
    fn flags() {
        assert_eq!(Flag(1).as_bool(), Some(true));
        assert_eq!(Flag(0).as_bool(), Some(false));
        assert_eq!(Flag(2).as_bool(), None);
        assert_eq!(Flag(-9999).as_bool(), None);
        let f: Field<Flag> = Field::Value(Flag(1));
        assert!(f.is_set());
        assert!(!Field::<Flag>::Missing.is_set());
    }

    #[test]
    fn codes_keep_unknown_text() {
        let c = Code::<CardType>::from_text("orange_card");
        assert_eq!(c, Code::Unknown("orange_card".into()));
        assert_eq!(c.text(), "orange_card");
        assert_eq!(Code::<CardType>::from_text("red_card").known(), Some(CardType::RedCard));
    }

    #[test]
    fn field_states() {
        let f: Field<i64> = Field::Absent;
        assert!(!f.is_present());
        assert!(Field::<i64>::Missing.is_present());
        assert_eq!(Field::Value(3).get(), Some(3));
        assert_eq!(Field::<i64>::Invalid(Value::Bool(true)).get(), None);
    }
}
