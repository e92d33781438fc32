//! Mandatory-field presence, driven by one pattern table per component.
//!
//! Presence is checked on the encoded shape of a model, so models built in
//! code are checked exactly like decoded ones. Pattern segments:
//!
//! * a plain key, or `{a,b}` for each of several keys. These expand even
//!   when the parent is absent, so a missing object also reports its
//!   mandatory children.
//! * `*` for each element of an array.
//! * `+` for each object-valued member of an object (skeletal limbs).
//!
//! Children are never checked below a value that is `null` or of the wrong
//! type; those cases are covered by other rules.

use std::sync::OnceLock;

use serde_json::Value;

use super::catalog::{self, Structural};
use crate::codec::{encode_shape, CdfRecord};
use crate::report::{pointer_escape, Component, Report, Rule, Severity};

/// One mandatory field.
#[derive(Debug, Clone, Copy)]
pub struct Presence {
    pub rule: Rule,
    pub pattern: &'static str,
    /// Only mandatory when the flag at this pointer is 1.
    pub when: Option<&'static str>,
    /// Present but `null` is also reported: identifying fields.
    pub required_value: bool,
}

macro_rules! p {
    ($sev:ident $id:literal $pattern:literal $(, $opt:ident $($cond:literal)?)*) => {{
        #[allow(unused_mut)]
        let mut entry = Presence {
            rule: Rule {
                id: $id,
                severity: Severity::$sev,
                summary: concat!("mandatory field missing: ", $pattern),
            },
            pattern: $pattern,
            when: None,
            required_value: false,
        };
        $(p!(@opt entry, $opt $($cond)?);)*
        entry
    }};
    (@opt $e:ident, required) => { $e.required_value = true; };
    (@opt $e:ident, when $cond:literal) => { $e.when = Some($cond); };
}


static MATCH_SHEET: &[Presence] = &[
    p!(Error "MS-001" "/match"),
    p!(Error "MS-002" "/match/id", required),
    p!(Error "MS-003" "/match/status"),
    p!(Error "MS-004" "/match/status/is_neutral"),
    p!(Error "MS-005" "/match/status/has_extratime"),
    p!(Error "MS-006" "/match/status/has_shootout"),
    p!(Error "MS-007" "/match/result"),
    p!(Error "MS-008" "/match/result/final"),
    p!(Error "MS-009" "/match/result/final/{home,away}"),
    p!(Error "MS-010" "/match/result/final/winning_team_id"),
    p!(Error "MS-011" "/match/result/first_half"),
    p!(Error "MS-012" "/match/result/first_half/{home,away}"),
    p!(Error "MS-013" "/match/result/second_half"),
    p!(Error "MS-014" "/match/result/second_half/{home,away}"),
    p!(Error "MS-015" "/match/result/first_extratime", when "/match/status/has_extratime"),
    p!(Error "MS-016" "/match/result/first_extratime/{home,away}", when "/match/status/has_extratime"),
    p!(Error "MS-017" "/match/result/second_extratime", when "/match/status/has_extratime"),
    p!(Error "MS-018" "/match/result/second_extratime/{home,away}", when "/match/status/has_extratime"),
    p!(Error "MS-019" "/match/result/shootout", when "/match/status/has_shootout"),
    p!(Error "MS-020" "/match/result/shootout/{home,away}", when "/match/status/has_shootout"),
    p!(Error "MS-021" "/teams"),
    p!(Error "MS-022" "/teams/{home,away}"),
    p!(Error "MS-023" "/teams/{home,away}/id", required),
    p!(Error "MS-024" "/teams/{home,away}/players"),
    p!(Error "MS-025" "/teams/{home,away}/players/*/id", required),
    p!(Error "MS-026" "/teams/{home,away}/players/*/team_id"),
    p!(Error "MS-027" "/teams/{home,away}/players/*/jersey_number"),
    p!(Error "MS-028" "/teams/{home,away}/players/*/is_starter"),
    p!(Error "MS-029" "/referees"),
    p!(Error "MS-030" "/referees/*/id", required),
    p!(Error "MS-031" "/events"),
    p!(Error "MS-032" "/events/goals"),
    p!(Error "MS-033" "/events/goals/*/goal_time"),
    p!(Error "MS-034" "/events/goals/*/goal_player_id"),
    p!(Error "MS-035" "/events/goals/*/goal_assist_id"),
    p!(Error "MS-036" "/events/goals/*/is_own_goal"),
    p!(Error "MS-037" "/events/goals/*/is_penalty"),
    p!(Error "MS-038" "/events/substitutions"),
    p!(Error "MS-039" "/events/substitutions/*/in_time"),
    p!(Error "MS-040" "/events/substitutions/*/in_player_id"),
    p!(Error "MS-041" "/events/substitutions/*/out_time"),
    p!(Error "MS-042" "/events/substitutions/*/out_player_id"),
    p!(Error "MS-043" "/events/cards"),
    p!(Error "MS-044" "/events/cards/*/card_time"),
    p!(Error "MS-045" "/events/cards/*/card_player_id"),
    p!(Error "MS-046" "/events/cards/*/card_type"),
    p!(Error "MS-047" "/meta"),
    p!(Error "MS-048" "/meta/vendor"),
];

static META: &[Presence] = &[
    p!(Error "MD-001" "/competition"),
    p!(Error "MD-002" "/competition/id", required),
    p!(Error "MD-003" "/season"),
    p!(Error "MD-004" "/season/id", required),
    p!(Error "MD-005" "/match"),
    p!(Error "MD-006" "/match/id", required),
    p!(Error "MD-007" "/match/kickoff_time"),
    p!(Error "MD-008" "/match/periods"),
    p!(Error "MD-009" "/match/result"),
    p!(Error "MD-010" "/match/result/final"),
    p!(Error "MD-011" "/match/result/final/{home,away}"),
    p!(Error "MD-012" "/match/result/final/winning_team_id"),
    p!(Error "MD-013" "/match/result/extratime", when "/match/status/has_extratime"),
    p!(Error "MD-014" "/match/result/extratime/{home,away}", when "/match/status/has_extratime"),
    p!(Error "MD-015" "/match/result/shootout", when "/match/status/has_shootout"),
    p!(Error "MD-016" "/match/result/shootout/{home,away}", when "/match/status/has_shootout"),
    p!(Error "MD-017" "/match/status"),
    p!(Error "MD-018" "/match/status/is_neutral"),
    p!(Error "MD-019" "/match/status/has_extratime"),
    p!(Error "MD-020" "/match/status/has_shootout"),
    p!(Error "MD-021" "/match/whistles"),
    p!(Error "MD-022" "/match/whistles/*/type"),
    p!(Error "MD-023" "/match/whistles/*/sub_type"),
    p!(Error "MD-024" "/match/whistles/*/time"),
    p!(Error "MD-025" "/teams"),
    p!(Error "MD-026" "/teams/{home,away}"),
    p!(Error "MD-027" "/teams/{home,away}/id", required),
    p!(Error "MD-028" "/teams/{home,away}/players"),
    p!(Error "MD-029" "/teams/{home,away}/players/*/id", required),
    p!(Error "MD-030" "/teams/{home,away}/players/*/team_id"),
    p!(Error "MD-031" "/teams/{home,away}/players/*/jersey_number"),
    p!(Error "MD-032" "/teams/{home,away}/players/*/is_starter"),
    p!(Error "MD-033" "/stadium"),
    p!(Error "MD-034" "/stadium/id"),
    p!(Error "MD-035" "/stadium/pitch_length"),
    p!(Error "MD-036" "/stadium/pitch_width"),
    p!(Error "MD-037" "/meta"),
    p!(Error "MD-038" "/meta/fps_tracking"),
    p!(Error "MD-039" "/meta/limb_tracking"),
    p!(Error "MD-040" "/meta/limb_nodes", when "/meta/limb_tracking"),
    p!(Error "MD-041" "/meta/source_type"),
    p!(Error "MD-042" "/meta/perspective"),
    p!(Error "MD-043" "/meta/version"),
    p!(Error "MD-044" "/meta/version/cdf"),
    p!(Error "MD-045" "/meta/version/event"),
    p!(Error "MD-046" "/meta/version/tracking"),
    p!(Error "MD-047" "/meta/vendors"),
    p!(Error "MD-048" "/meta/vendors/event"),
    p!(Error "MD-049" "/meta/vendors/tracking"),
    p!(Error "MD-050" "/meta/vendors/video"),
    p!(Error "MD-051" "/meta/id_space"),
    p!(Error "MD-052" "/meta/id_space/match_data"),
    p!(Error "MD-053" "/meta/id_space/event"),
    p!(Error "MD-054" "/meta/id_space/tracking"),
];

static VIDEO: &[Presence] = &[
    p!(Warning "VD-001" "/match_id"),
    p!(Warning "VD-002" "/fps"),
    p!(Warning "VD-003" "/resolution"),
    p!(Warning "VD-004" "/operation_type"),
    p!(Warning "VD-005" "/perspective"),
    p!(Warning "VD-006" "/whistles"),
    p!(Warning "VD-007" "/whistles/*/type"),
    p!(Warning "VD-008" "/whistles/*/sub_type"),
    p!(Warning "VD-009" "/whistles/*/time"),
];

static EVENT: &[Presence] = &[
    p!(Error "EV-001" "/match"),
    p!(Error "EV-002" "/match/id", required),
    p!(Error "EV-003" "/meta"),
    p!(Error "EV-004" "/meta/is_synced"),
    p!(Error "EV-005" "/event"),
    p!(Error "EV-006" "/event/id", required),
    p!(Error "EV-007" "/event/time", required),
    p!(Error "EV-008" "/event/period", required),
    p!(Error "EV-009" "/event/type", required),
    p!(Error "EV-010" "/event/sub_type"),
    p!(Error "EV-011" "/event/outcome"),
    p!(Error "EV-012" "/event/outcome_detailed"),
    p!(Error "EV-013" "/event/player_id_1"),
    p!(Error "EV-014" "/event/team_id_1"),
    p!(Error "EV-015" "/event/player_id_2"),
    p!(Error "EV-016" "/event/team_id_2"),
    p!(Error "EV-017" "/event/x_1"),
    p!(Error "EV-018" "/event/y_1"),
    p!(Error "EV-019" "/event/x_2"),
    p!(Error "EV-020" "/event/y_2"),
    p!(Error "EV-021" "/event/body_part_1"),
    p!(Error "EV-022" "/event/body_part_2"),
];

static TRACKING: &[Presence] = &[
    p!(Error "TR-001" "/frame_id", required),
    p!(Error "TR-002" "/period", required),
    p!(Error "TR-003" "/match"),
    p!(Error "TR-004" "/match/id", required),
    p!(Error "TR-005" "/teams"),
    p!(Error "TR-006" "/teams/{home,away}"),
    p!(Error "TR-007" "/teams/{home,away}/id", required),
    p!(Error "TR-008" "/teams/{home,away}/players"),
    p!(Error "TR-009" "/teams/{home,away}/players/*/id", required),
    p!(Error "TR-010" "/teams/{home,away}/players/*/team_id"),
    p!(Error "TR-011" "/teams/{home,away}/players/*/x"),
    p!(Error "TR-012" "/teams/{home,away}/players/*/y"),
    p!(Error "TR-013" "/ball"),
    p!(Error "TR-014" "/ball/x"),
    p!(Error "TR-015" "/ball/y"),
    p!(Error "TR-016" "/ball/z"),
];

static SKELETAL: &[Presence] = &[
    p!(Error "SK-001" "/frame_id", required),
    p!(Error "SK-002" "/period", required),
    p!(Error "SK-003" "/match"),
    p!(Error "SK-004" "/match/id", required),
    p!(Error "SK-005" "/teams"),
    p!(Error "SK-006" "/teams/{home,away}"),
    p!(Error "SK-007" "/teams/{home,away}/id", required),
    p!(Error "SK-008" "/teams/{home,away}/players"),
    p!(Error "SK-009" "/teams/{home,away}/players/*/team_id"),
    p!(Error "SK-010" "/teams/{home,away}/players/*/id", required),
    p!(Error "SK-011" "/teams/{home,away}/players/*/+/x"),
    p!(Error "SK-012" "/teams/{home,away}/players/*/+/y"),
    p!(Error "SK-013" "/teams/{home,away}/players/*/+/z"),
];


/// The presence table of a component (empty for the bundle).
pub fn table(component: Component) -> &'static [Presence] {
    match component {
        Component::Bundle => &[],
        Component::MatchSheet => MATCH_SHEET,
        Component::Meta => META,
        Component::Video => VIDEO,
        Component::Events => EVENT,
        Component::Tracking => TRACKING,
        Component::Skeletal => SKELETAL,
    }
}

pub(crate) fn presence_rules() -> impl Iterator<Item = &'static Rule> {
    [MATCH_SHEET, META, VIDEO, EVENT, TRACKING, SKELETAL]
        .into_iter()
        .flatten()
        .map(|p| &p.rule)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Key(String),
    Alt(Vec<String>),
    Each,
    Members,
}

/// Splits a pattern into segments.
pub fn parse_pattern(pattern: &str) -> Vec<Segment> {
    pattern
        .split('/')
        .skip(1)
        .map(|s| match s {
            "*" => Segment::Each,
            "+" => Segment::Members,
            _ if s.starts_with('{') && s.ends_with('}') => {
                Segment::Alt(s[1..s.len() - 1].split(',').map(str::to_owned).collect())
            }
            _ => Segment::Key(s.to_owned()),
        })
        .collect()
}

struct Compiled {
    entry: &'static Presence,
    segments: Vec<Segment>,
}

fn compiled(component: Component) -> &'static [Compiled] {
    static CACHE: OnceLock<Vec<Vec<Compiled>>> = OnceLock::new();
    const ORDER: [Component; 7] = [
        Component::Bundle,
        Component::MatchSheet,
        Component::Meta,
        Component::Video,
        Component::Events,
        Component::Tracking,
        Component::Skeletal,
    ];
    let all = CACHE.get_or_init(|| {
        ORDER
            .iter()
            .map(|&c| {
                table(c)
                    .iter()
                    .map(|entry| Compiled { entry, segments: parse_pattern(entry.pattern) })
                    .collect()
            })
            .collect()
    });
    &all[ORDER.iter().position(|&c| c == component).expect("listed")]
}

/// Calls `visit` with the concrete path of every location the pattern
/// names, and the value there (`None` when absent).
pub fn expand<'v>(segments: &[Segment], root: &'v Value, visit: &mut dyn FnMut(&str, Option<&'v Value>)) {
    let mut path = String::new();
    walk(segments, &mut path, Some(root), visit);
}

fn walk<'v>(segments: &[Segment], path: &mut String, at: Option<&'v Value>, visit: &mut dyn FnMut(&str, Option<&'v Value>)) {
    let Some((first, rest)) = segments.split_first() else {
        visit(path, at);
        return;
    };
    let mark = path.len();
    let key = |path: &mut String, k: &str, visit: &mut dyn FnMut(&str, Option<&'v Value>)| {
        let child = match at {
            None => None,
            Some(Value::Object(m)) => m.get(k),
            Some(_) => return,
        };
        path.push('/');
        path.push_str(&pointer_escape(k));
        walk(rest, path, child, visit);
        path.truncate(mark);
    };
    match first {
        Segment::Key(k) => key(path, k, visit),
        Segment::Alt(keys) => {
            for k in keys {
                key(path, k, visit);
            }
        }
        Segment::Each => {
            if let Some(Value::Array(items)) = at {
                for (i, item) in items.iter().enumerate() {
                    path.push('/');
                    path.push_str(&i.to_string());
                    walk(rest, path, Some(item), visit);
                    path.truncate(mark);
                }
            }
        }
        Segment::Members => {
            if let Some(Value::Object(m)) = at {
                for (k, v) in m.iter().filter(|(_, v)| v.is_object()) {
                    path.push('/');
                    path.push_str(&pointer_escape(k));
                    walk(rest, path, Some(v), visit);
                    path.truncate(mark);
                }
            }
        }
    }
}

fn satisfied(segments: &[Segment], at: Option<&Value>, non_null: bool) -> bool {
    let Some((first, rest)) = segments.split_first() else {
        return match at {
            None => false,
            Some(Value::Null) => !non_null,
            Some(_) => true,
        };
    };
    let key = |k: &str| match at {
        None => satisfied(rest, None, non_null),
        Some(Value::Object(m)) => satisfied(rest, m.get(k), non_null),
        Some(_) => true,
    };
    match first {
        Segment::Key(k) => key(k),
        Segment::Alt(keys) => keys.iter().all(|k| key(k)),
        Segment::Each => match at {
            Some(Value::Array(items)) => items.iter().all(|v| satisfied(rest, Some(v), non_null)),
            _ => true,
        },
        Segment::Members => match at {
            Some(Value::Object(m)) => m.values().filter(|v| v.is_object()).all(|v| satisfied(rest, Some(v), non_null)),
            _ => true,
        },
    }
}

fn flag_set(root: &Value, pointer: &str) -> bool {
    root.pointer(pointer).and_then(Value::as_i64) == Some(1)
}

/// Checks an encoded record against a component's presence table.
pub fn check_value(component: Component, root: &Value) -> Report {
    let mut report = Report::new(component);
    check_value_into(component, root, &mut report);
    report
}

pub(crate) fn check_value_into(component: Component, root: &Value, report: &mut Report) {
    let required = catalog::structural(component, Structural::RequiredValue);
    for c in compiled(component) {
        if c.entry.when.is_some_and(|w| !flag_set(root, w)) {
            continue;
        }
        // paths are only built for the rare records that fail
        if satisfied(&c.segments, Some(root), c.entry.required_value) {
            continue;
        }
        expand(&c.segments, root, &mut |path, v| match v {
            None => report.push(&c.entry.rule, path, format!("mandatory field `{}` is missing", path)),
            Some(Value::Null) if c.entry.required_value => {
                report.push(required, path, format!("`{path}` must have a value"))
            }
            _ => {}
        });
    }
}

/// Presence findings for a model.
pub fn check_record<T: CdfRecord>(record: &T) -> Report {
    let shape = Value::Object(encode_shape(record));
    check_value(T::COMPONENT, &shape)
}

pub(crate) fn check_record_into<T: CdfRecord>(record: &T, report: &mut Report) {
    let shape = Value::Object(encode_shape(record));
    check_value_into(T::COMPONENT, &shape, report);
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn paths(pattern: &str, v: &Value) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        expand(&parse_pattern(pattern), v, &mut |p, v| out.push((p.to_owned(), v.is_some())));
        out
    }

    #[test]
    fn patterns_parse() {
        assert_eq!(
            parse_pattern("/teams/{home,away}/players/*/+/x"),
            vec![
                Segment::Key("teams".into()),
                Segment::Alt(vec!["home".into(), "away".into()]),
                Segment::Key("players".into()),
                Segment::Each,
                Segment::Members,
                Segment::Key("x".into()),
            ]
        );
    }

    #[test]
    fn absent_parents_cascade_but_arrays_do_not() {
        let v = json!({});
        assert_eq!(
            paths("/teams/{home,away}/id", &v),
            vec![("/teams/home/id".into(), false), ("/teams/away/id".into(), false)]
        );
        assert!(paths("/teams/{home,away}/players/*/id", &v).is_empty());
    }

    #[test]
    fn null_parent_stops_descent() {
        let v = json!({"teams": null});
        assert!(paths("/teams/home", &v).is_empty());
    }

    #[test]
    fn members_visit_object_values_only() {
        let v = json!({"p": {"id": "a", "head": {"x": 1}, "knee_left": {}}});
        assert_eq!(
            paths("/p/+/x", &v),
            vec![("/p/head/x".into(), true), ("/p/knee_left/x".into(), false)]
        );
    }

    #[test]
    fn conditional_entries() {
        let base = json!({"match": {"id": "m", "status": {"has_extratime": 0, "has_shootout": 1}}});
        let r = check_value(Component::MatchSheet, &base);
        assert!(!r.has_rule("MS-015"));
        assert!(r.has_rule("MS-019"));
    }

    #[test]
    fn required_values() {
        let v = json!({"frame_id": null});
        let r = check_value(Component::Tracking, &v);
        assert!(r.has_rule("TR-070"));
        assert!(!r.has_rule("TR-001"));
    }

    #[test]
    fn empty_match_sheet() {
        let r = check_value(Component::MatchSheet, &json!({}));
        for (id, path) in [("MS-002", "/match/id"), ("MS-008", "/match/result/final"), ("MS-021", "/teams")] {
            assert!(r.findings().iter().any(|f| f.rule_id == id && f.path == path), "{id}");
        }
    }

    #[test]
    fn patterns_are_unique_per_rule() {
        let mut ids = std::collections::HashSet::new();
        for p in presence_rules() {
            assert!(ids.insert(p.id));
        }
    }
}
