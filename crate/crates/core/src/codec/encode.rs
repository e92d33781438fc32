use serde_json::{Map, Value};

use super::{DeclaredType, WriteOptions};
use crate::error::{CdfError, Result};
use crate::model::{CdfTimestamp, Code, EntityId, Extras, Field, Flag, Period, PeriodSpelling};
use crate::model::Vocabulary;
use crate::report::pointer_escape;
use crate::scalar::round_half_even;

type Obj = Map<String, Value>;

/// Writes model fields into JSON objects in the order they are put.
pub struct Encoder {
    opts: WriteOptions,
    path: String,
    error: Option<CdfError>,
    non_finite: Vec<String>,
}

impl Encoder {
    pub(crate) fn new(opts: WriteOptions) -> Self {
        Encoder {
            opts,
            path: String::new(),
            error: None,
            non_finite: Vec::new(),
        }
    }

    /// Every path where a non-finite float was replaced by `null`.
    pub(crate) fn take_non_finite(&mut self) -> Vec<String> {
        std::mem::take(&mut self.non_finite)
    }

    pub(crate) fn finish(self) -> Result<()> {
        self.error.map_or(Ok(()), Err)
    }

    fn missing(&self, ty: DeclaredType) -> Value {
        if self.opts.policy.writes_sentinels() {
            ty.sentinel().unwrap_or(Value::Null)
        } else {
            Value::Null
        }
    }

    fn put<T>(&mut self, m: &mut Obj, key: &str, field: &Field<T>, ty: DeclaredType, f: impl FnOnce(&mut Self, &T) -> Value) {
        let value = match field {
            Field::Absent => return,
            Field::Missing => self.missing(ty),
            Field::Invalid(raw) => raw.clone(),
            Field::Value(v) => {
                let mark = self.path.len();
                self.path.push('/');
                self.path.push_str(&pointer_escape(key));
                let out = f(self, v);
                self.path.truncate(mark);
                out
            }
        };
        m.insert(key.to_owned(), value);
    }

    fn number(&mut self, v: f64, round: bool) -> Value {
        if !v.is_finite() {
            if self.error.is_none() {
                self.error = Some(CdfError::NonFinite { path: self.path.clone() });
            }
            self.non_finite.push(self.path.clone());
            return Value::Null;
        }
        let v = match self.opts.decimals {
            Some(d) if round => round_half_even(v, d),
            _ => v,
        };
        serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
    }

    pub fn text(&mut self, m: &mut Obj, key: &str, field: &Field<String>) {
        self.put(m, key, field, DeclaredType::Text, |_, s| Value::from(s.as_str()));
    }

    pub fn id(&mut self, m: &mut Obj, key: &str, field: &Field<EntityId>) {
        self.put(m, key, field, DeclaredType::Text, |_, id| Value::from(id.as_str()));
    }

    pub fn int(&mut self, m: &mut Obj, key: &str, field: &Field<i64>) {
        self.put(m, key, field, DeclaredType::Integer, |_, i| Value::from(*i));
    }

    pub fn flag(&mut self, m: &mut Obj, key: &str, field: &Field<Flag>) {
        self.put(m, key, field, DeclaredType::Boolean, |_, f| Value::from(f.0));
    }

    /// A measurement, rounded to the configured precision.
    pub fn float(&mut self, m: &mut Obj, key: &str, field: &Field<f64>) {
        self.put(m, key, field, DeclaredType::Float, |e, v| e.number(*v, true));
    }

    /// A float kept at full precision (geodetic coordinates).
    pub fn float_exact(&mut self, m: &mut Obj, key: &str, field: &Field<f64>) {
        self.put(m, key, field, DeclaredType::Float, |e, v| e.number(*v, false));
    }

    pub fn time(&mut self, m: &mut Obj, key: &str, field: &Field<CdfTimestamp>) {
        self.put(m, key, field, DeclaredType::Timestamp, |_, t| Value::from(t.canonical()));
    }

    pub fn code<E: Vocabulary>(&mut self, m: &mut Obj, key: &str, field: &Field<Code<E>>) {
        self.put(m, key, field, DeclaredType::Text, |_, c| Value::from(c.text()));
    }

    pub fn period(&mut self, m: &mut Obj, key: &str, field: &Field<Code<Period>>, spelling: PeriodSpelling) {
        self.put(m, key, field, DeclaredType::Text, |_, c| period_text(c, spelling));
    }

    pub fn periods(&mut self, m: &mut Obj, key: &str, field: &Field<Vec<Field<Code<Period>>>>, spelling: PeriodSpelling) {
        let missing = self.missing(DeclaredType::Text);
        self.put(m, key, field, DeclaredType::Array, |_, items| {
            Value::Array(
                items
                    .iter()
                    .filter_map(|p| match p {
                        Field::Absent => None,
                        Field::Missing => Some(missing.clone()),
                        Field::Invalid(raw) => Some(raw.clone()),
                        Field::Value(c) => Some(period_text(c, spelling)),
                    })
                    .collect(),
            )
        });
    }

    pub fn json(&mut self, m: &mut Obj, key: &str, field: &Field<Value>) {
        self.put(m, key, field, DeclaredType::Object, |_, v| v.clone());
    }

    pub fn object<T>(&mut self, m: &mut Obj, key: &str, field: &Field<T>, f: impl FnOnce(&mut Self, &T) -> Obj) {
        self.put(m, key, field, DeclaredType::Object, |e, v| Value::Object(f(e, v)));
    }

    pub fn objects<T>(&mut self, m: &mut Obj, key: &str, field: &Field<Vec<T>>, mut f: impl FnMut(&mut Self, &T) -> Obj) {
        self.put(m, key, field, DeclaredType::Array, |e, items| {
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let mark = e.path.len();
                e.path.push('/');
                e.path.push_str(&i.to_string());
                out.push(Value::Object(f(e, item)));
                e.path.truncate(mark);
            }
            Value::Array(out)
        });
    }

    /// Appends unknown keys after the known ones.
    pub fn extras(&mut self, m: &mut Obj, extras: &Extras) {
        for (k, v) in extras {
            if !m.contains_key(k) {
                m.insert(k.clone(), v.clone());
            }
        }
    }
}

fn period_text(c: &Code<Period>, spelling: PeriodSpelling) -> Value {
    match c {
        Code::Known(p) => Value::from(p.name(spelling)),
        Code::Unknown(s) => Value::from(s.as_str()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::MissingPolicy;

    #[test]
    fn rounding_missing_and_order() {
        let mut e = Encoder::new(WriteOptions::default().with_policy(MissingPolicy::Sentinel));
        let mut m = Obj::new();
        e.float(&mut m, "x", &Field::Value(0.123456));
        e.float_exact(&mut m, "lat", &Field::Value(51.123456));
        e.text(&mut m, "body_part_2", &Field::Missing);
        e.float(&mut m, "y", &Field::Missing);
        e.int(&mut m, "n", &Field::Absent);
        e.finish().unwrap();
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"x":0.123,"lat":51.123456,"body_part_2":"None","y":-9999.0}"#
        );
    }

    #[test]
    fn non_finite_is_an_error() {
        let mut e = Encoder::new(WriteOptions::default());
        let mut m = Obj::new();
        e.object(&mut m, "ball", &Field::Value(()), |e, _| {
            let mut b = Obj::new();
            e.float(&mut b, "z", &Field::Value(f64::NAN));
            b
        });
        match e.finish() {
            Err(CdfError::NonFinite { path }) => assert_eq!(path, "/ball/z"),
            other => panic!("{other:?}"),
        }
    }
}
