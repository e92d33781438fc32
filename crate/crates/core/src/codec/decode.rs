use serde_json::{Map, Value};

use super::{decode_missing, DeclaredType, Decoded, MissingPolicy};
use crate::model::{CdfTimestamp, Code, EntityId, Extras, Field, Flag, Period, PeriodSpelling};
use crate::model::Vocabulary;
use crate::report::{pointer_escape, Component, Report};
use crate::rules::catalog::{self, Structural};

type Obj = Map<String, Value>;

/// Binds JSON values into model fields, recording findings at the current
/// document path.
pub struct Decoder<'r> {
    policy: MissingPolicy,
    report: &'r mut Report,
    component: Component,
    path: String,
}

impl<'r> Decoder<'r> {
    pub(crate) fn new(policy: MissingPolicy, report: &'r mut Report) -> Self {
        let component = report.component();
        Decoder {
            policy,
            report,
            component,
            path: String::new(),
        }
    }

    pub(crate) fn finding(&mut self, kind: Structural, message: impl Into<String>) {
        let rule = catalog::structural(self.component, kind);
        self.report.push(rule, self.path.clone(), message);
    }

    fn enter(&mut self, segment: &str) -> usize {
        let mark = self.path.len();
        self.path.push('/');
        self.path.push_str(&pointer_escape(segment));
        mark
    }

    fn leave(&mut self, mark: usize) {
        self.path.truncate(mark);
    }

    /// Runs `f` on the value under `key` with the path extended.
    pub(super) fn at<T>(&mut self, m: &Obj, key: &str, f: impl FnOnce(&mut Self, &Value) -> Field<T>) -> Field<T> {
        match m.get(key) {
            None => Field::Absent,
            Some(v) => {
                let mark = self.enter(key);
                let out = f(self, v);
                self.leave(mark);
                out
            }
        }
    }

    /// `None` for a missing value; warns on a sentinel kept under the
    /// null-only policy.
    pub(super) fn present<'v>(&mut self, v: &'v Value, ty: DeclaredType) -> Option<&'v Value> {
        match decode_missing(v, ty, self.policy) {
            Decoded::Missing => None,
            Decoded::Value(v) => Some(v),
            Decoded::SentinelPassthrough(v) => {
                self.finding(Structural::SentinelUnderNull, "sentinel-like value under null policy");
                Some(v)
            }
        }
    }

    pub(super) fn wrong_type<T>(&mut self, expected: &str, v: &Value) -> Field<T> {
        self.finding(
            Structural::WrongType,
            format!("expected {expected}, found {}", json_type(v)),
        );
        Field::Invalid(v.clone())
    }

    /// Unknown keys of `m`, warning when one differs from a known key only
    /// by letter case.
    pub fn extras(&mut self, m: &Obj, known: &[&str]) -> Extras {
        let mut extras = Extras::new();
        for (k, v) in m {
            if known.contains(&k.as_str()) {
                continue;
            }
            if let Some(reserved) = known.iter().find(|r| r.eq_ignore_ascii_case(k)) {
                let mark = self.enter(k);
                self.finding(
                    Structural::KeyCollision,
                    format!("unknown key `{k}` collides with reserved name `{reserved}`"),
                );
                self.leave(mark);
            }
            extras.insert(k.clone(), v.clone());
        }
        extras
    }

    pub fn note_noncanonical(&mut self, key: &str, message: impl Into<String>) {
        let mark = self.enter(key);
        self.finding(Structural::NonCanonical, message);
        self.leave(mark);
    }

    pub fn text(&mut self, m: &Obj, key: &str) -> Field<String> {
        self.at(m, key, |d, v| match d.present(v, DeclaredType::Text) {
            None => Field::Missing,
            Some(Value::String(s)) => Field::Value(s.clone()),
            Some(other) => d.wrong_type("string", other),
        })
    }

    pub fn id(&mut self, m: &Obj, key: &str) -> Field<EntityId> {
        self.at(m, key, |d, v| match d.present(v, DeclaredType::Text) {
            None => Field::Missing,
            Some(Value::String(s)) => match EntityId::new(s.as_str()) {
                Ok(id) => Field::Value(id),
                Err(e) => {
                    d.finding(Structural::MalformedId, e.to_string());
                    Field::Invalid(v.clone())
                }
            },
            Some(other) => d.wrong_type("string identifier", other),
        })
    }

    fn integer(&mut self, v: &Value, ty: DeclaredType) -> Field<i64> {
        match self.present(v, ty) {
            None => Field::Missing,
            Some(Value::Number(n)) => match n.as_i64().or_else(|| integral(n.as_f64()?)) {
                Some(i) => Field::Value(i),
                None => self.wrong_type("integer", v),
            },
            Some(other) => self.wrong_type("integer", other),
        }
    }

    pub fn int(&mut self, m: &Obj, key: &str) -> Field<i64> {
        self.at(m, key, |d, v| d.integer(v, DeclaredType::Integer))
    }

    pub fn flag(&mut self, m: &Obj, key: &str) -> Field<Flag> {
        self.at(m, key, |d, v| d.integer(v, DeclaredType::Boolean).map(Flag))
    }

    pub fn float(&mut self, m: &Obj, key: &str) -> Field<f64> {
        self.at(m, key, |d, v| match d.present(v, DeclaredType::Float) {
            None => Field::Missing,
            Some(Value::Number(n)) => match n.as_f64() {
                Some(f) => Field::Value(f),
                None => d.wrong_type("number", v),
            },
            Some(other) => d.wrong_type("number", other),
        })
    }

    /// A float that may also be written as the text `unknown`.
    pub fn float_or_unknown(&mut self, m: &Obj, key: &str) -> Field<f64> {
        if matches!(m.get(key), Some(Value::String(s)) if s.eq_ignore_ascii_case("unknown")) {
            return Field::Missing;
        }
        self.float(m, key)
    }

    pub fn time(&mut self, m: &Obj, key: &str) -> Field<CdfTimestamp> {
        self.at(m, key, |d, v| match d.present(v, DeclaredType::Timestamp) {
            None => Field::Missing,
            Some(Value::String(s)) => match super::time::parse_timestamp(s) {
                Some(ts) => Field::Value(ts),
                None => {
                    d.finding(Structural::InvalidTimestamp, format!("invalid timestamp `{s}`"));
                    Field::Invalid(v.clone())
                }
            },
            Some(other) => d.wrong_type("timestamp string", other),
        })
    }

    fn code_value<E: Vocabulary>(&mut self, v: &Value) -> Field<Code<E>> {
        if E::NONE_IS_MEMBER && v.as_str() == Some(crate::model::vocab::NONE_TEXT) {
            return Field::Missing;
        }
        match self.present(v, DeclaredType::Text) {
            None => Field::Missing,
            Some(Value::String(s)) => Field::Value(Code::from_text(s)),
            Some(other) => self.wrong_type("string", other),
        }
    }

    pub fn code<E: Vocabulary>(&mut self, m: &Obj, key: &str) -> Field<Code<E>> {
        self.at(m, key, |d, v| d.code_value(v))
    }

    /// A period name, noting the other table's spelling when used.
    fn period_value(&mut self, v: &Value, spelling: PeriodSpelling) -> Field<Code<Period>> {
        if let Some((p, false)) = v.as_str().and_then(|s| Period::parse_spelled(s, spelling)) {
            self.finding(
                Structural::NonCanonical,
                format!("period spelling accepted; canonical is `{}`", p.name(spelling)),
            );
        }
        self.code_value(v)
    }

    pub fn period(&mut self, m: &Obj, key: &str, spelling: PeriodSpelling) -> Field<Code<Period>> {
        self.at(m, key, |d, v| d.period_value(v, spelling))
    }

    pub fn json(&mut self, m: &Obj, key: &str) -> Field<Value> {
        self.at(m, key, |_, v| match v {
            Value::Null => Field::Missing,
            other => Field::Value(other.clone()),
        })
    }

    pub fn object<T>(&mut self, m: &Obj, key: &str, f: impl FnOnce(&mut Self, &Obj) -> T) -> Field<T> {
        self.at(m, key, |d, v| match v {
            Value::Null => Field::Missing,
            Value::Object(inner) => Field::Value(f(d, inner)),
            other => d.wrong_type("object", other),
        })
    }

    /// An array of objects. Elements that are not objects are reported and
    /// dropped.
    pub fn objects<T>(&mut self, m: &Obj, key: &str, mut f: impl FnMut(&mut Self, &Obj) -> T) -> Field<Vec<T>> {
        self.at(m, key, |d, v| match v {
            Value::Null => Field::Missing,
            Value::Array(items) => {
                let mut out = Vec::with_capacity(items.len());
                for (i, item) in items.iter().enumerate() {
                    let mark = d.enter(&i.to_string());
                    match item {
                        Value::Object(inner) => out.push(f(d, inner)),
                        other => {
                            d.wrong_type::<()>("object", other);
                        }
                    }
                    d.leave(mark);
                }
                Field::Value(out)
            }
            other => d.wrong_type("array", other),
        })
    }

    /// An array of period names.
    pub fn periods(&mut self, m: &Obj, key: &str, spelling: PeriodSpelling) -> Field<Vec<Field<Code<Period>>>> {
        self.at(m, key, |d, v| match v {
            Value::Null => Field::Missing,
            Value::Array(items) => {
                let mut out = Vec::with_capacity(items.len());
                for (i, item) in items.iter().enumerate() {
                    let mark = d.enter(&i.to_string());
                    out.push(d.period_value(item, spelling));
                    d.leave(mark);
                }
                Field::Value(out)
            }
            other => d.wrong_type("array", other),
        })
    }
}

fn integral(f: f64) -> Option<i64> {
    (f.fract() == 0.0 && f.abs() < 9.0e15).then_some(f as i64)
}

pub(crate) fn json_type(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CardType;
    use serde_json::json;

    fn obj(v: Value) -> Obj {
        v.as_object().unwrap().clone()
    }

    #[test]
    fn readers_bind_and_report() {
        let m = obj(json!({
            "s": "x", "n": "None", "i": 3, "fi": 4.0, "bad": 1.5, "f": 2, "flag": 2,
            "t": "2024-08-29T14:00:00", "tb": "noon", "c": "orange_card", "o": 5
        }));
        let mut r = Report::new(Component::MatchSheet);
        let mut d = Decoder::new(MissingPolicy::AcceptBoth, &mut r);
        assert_eq!(d.text(&m, "s"), Field::Value("x".into()));
        assert_eq!(d.text(&m, "n"), Field::Missing);
        assert_eq!(d.text(&m, "absent"), Field::Absent);
        assert_eq!(d.int(&m, "i"), Field::Value(3));
        assert_eq!(d.int(&m, "fi"), Field::Value(4));
        assert!(matches!(d.int(&m, "bad"), Field::Invalid(_)));
        assert_eq!(d.float(&m, "f"), Field::Value(2.0));
        assert_eq!(d.flag(&m, "flag"), Field::Value(Flag(2)));
        assert!(d.time(&m, "t").value().is_some());
        assert!(matches!(d.time(&m, "tb"), Field::Invalid(_)));
        assert_eq!(d.code::<CardType>(&m, "c"), Field::Value(Code::Unknown("orange_card".into())));
        assert!(matches!(d.object(&m, "o", |_, _| ()), Field::Invalid(_)));
        let paths: Vec<_> = r.findings().iter().map(|f| (f.rule_id, f.path.as_str())).collect();
        assert_eq!(paths, vec![("MS-083", "/bad"), ("MS-084", "/tb"), ("MS-083", "/o")]);
    }

    #[test]
    fn null_policy_passes_sentinels_through() {
        let m = obj(json!({"x": -9999.0, "s": "None"}));
        let mut r = Report::new(Component::Events);
        let mut d = Decoder::new(MissingPolicy::Null, &mut r);
        assert_eq!(d.float(&m, "x"), Field::Value(-9999.0));
        assert_eq!(d.text(&m, "s"), Field::Value("None".into()));
        assert_eq!(r.count_rule("EV-085"), 2);
    }

    #[test]
    fn case_collisions_warn() {
        let m = obj(json!({"ID": "a", "vendor_metric": 1}));
        let mut r = Report::new(Component::Tracking);
        let mut d = Decoder::new(MissingPolicy::AcceptBoth, &mut r);
        let extras = d.extras(&m, &["id"]);
        assert_eq!(extras.len(), 2);
        assert_eq!(r.count_rule("TR-086"), 1);
        assert_eq!(r.findings()[0].path, "/ID");
    }

    #[test]
    fn array_elements_must_be_objects() {
        let m = obj(json!({"a": [{"k": 1}, 7, {"k": 2}]}));
        let mut r = Report::new(Component::Meta);
        let mut d = Decoder::new(MissingPolicy::AcceptBoth, &mut r);
        let items = d.objects(&m, "a", |d, o| d.int(o, "k"));
        assert_eq!(items.value().unwrap().len(), 2);
        assert_eq!(r.findings()[0].path, "/a/1");
    }
}
