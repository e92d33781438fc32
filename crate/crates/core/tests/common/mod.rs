//! Shared by the golden tests and the acceptance binary.
#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::Value;

use cdf_core::bundle::{validate_bundle, BundleManifest, BundleOptions, MatchBundle, StreamCheck};
use cdf_core::codec::{read_document, DocKind, Document, MissingPolicy, StreamKind};
use cdf_core::model::{Field, MatchMeta, MatchSheet, Score, SubType};
use cdf_core::rules::{self, presence};
use cdf_core::skeleton::{t_pose_positions, validate_hierarchy};
use cdf_core::{bundle, Component, Report};

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn golden_bytes(name: &str) -> Vec<u8> {
    std::fs::read(golden_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn golden_json(name: &str) -> Value {
    serde_json::from_slice(&golden_bytes(name)).unwrap()
}

fn golden_lines(name: &str) -> Vec<Value> {
    golden_bytes(name)
        .split(|b| *b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect()
}

pub fn golden_bundle() -> MatchBundle {
    MatchBundle::load(&BundleManifest::discover(&golden_dir()), MissingPolicy::default()).unwrap()
}

/// Document decode plus document rules, as the command line runs them.
pub fn check_document(bytes: &[u8], kind: DocKind) -> (Option<Document>, Report) {
    let (doc, mut report) = read_document(bytes, kind, MissingPolicy::default());
    match &doc {
        Some(Document::MatchSheet(s)) => {
            report.absorb(rules::validate_match_sheet(s));
            report.absorb(bundle::reconcile_result(s));
        }
        Some(Document::Meta(m)) => report.absorb(rules::validate_meta(m)),
        Some(Document::VideoMeta(v)) => report.absorb(rules::validate_video_meta(v)),
        None => {}
    }
    (doc, report)
}

pub fn check_stream(bytes: &[u8], kind: StreamKind, meta: Option<&MatchMeta>) -> Report {
    let mut check = StreamCheck::new(kind, meta, &BundleOptions::default());
    check.read(bytes).unwrap();
    check.finish().report
}

fn score(f: &Field<Score>) -> Option<(i64, i64)> {
    f.value().and_then(|s| Some((s.home.get()?, s.away.get()?)))
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T, out: &mut Vec<String>) {
    if got != want {
        out.push(format!("{what}: got {got:?}, want {want:?}"));
    }
}

/// Every expected value of the golden set that differs, plus any error
/// finding the golden set produces.
pub fn golden_failures() -> Vec<String> {
    let mut out = Vec::new();

    let (sheet, r) = check_document(&golden_bytes("match_sheet.json"), DocKind::MatchSheet);
    expect("match sheet errors", r.error_count(), 0, &mut out);
    let sheet: MatchSheet = match sheet {
        Some(Document::MatchSheet(s)) => s,
        other => {
            out.push(format!("match sheet did not decode: {other:?}"));
            return out;
        }
    };
    let result = sheet.result().cloned().unwrap_or_default();
    expect("final", score(&result.final_result), Some((2, 2)), &mut out);
    expect("shootout", score(&result.shootout), Some((4, 5)), &mut out);
    expect(
        "winner",
        result.final_result.value().and_then(|s| s.winning_team_id.value()).map(|id| id.as_str().to_owned()),
        Some("3f029694".to_owned()),
        &mut out,
    );
    expect("match id", sheet.match_id().map(|id| id.as_str().to_owned()), Some("74e6661c".to_owned()), &mut out);

    let (meta, r) = check_document(&golden_bytes("meta.json"), DocKind::Meta);
    expect("meta errors", r.error_count(), 0, &mut out);
    let meta: MatchMeta = match meta {
        Some(Document::Meta(m)) => m,
        other => {
            out.push(format!("meta did not decode: {other:?}"));
            return out;
        }
    };
    expect("fps_tracking", meta.fps_tracking(), Some(25), &mut out);
    let pitch = meta.pitch();
    expect("pitch", (pitch.length, pitch.width), (Some(105.0), Some(68.0)), &mut out);
    let vendors = meta.info().and_then(|i| i.vendors.value()).cloned().unwrap_or_default();
    expect("event vendor", vendors.event.value().map(String::as_str), Some("company_a"), &mut out);
    expect("limb tracking", meta.limb_tracking(), false, &mut out);

    let events = golden_bytes("events.jsonl");
    let r = check_stream(&events, StreamKind::Event, Some(&meta));
    expect("event errors", r.error_count(), 0, &mut out);
    let first = events.split(|b| *b == b'\n').next().unwrap();
    let (e, _) = cdf_core::codec::decode_document::<cdf_core::model::EventRecord>(first, MissingPolicy::default());
    let body = e.as_ref().and_then(|e| e.body()).cloned().unwrap_or_default();
    expect("event id", body.id.value().map(|i| i.as_str().to_owned()), Some("7230efg1".to_owned()), &mut out);
    expect("event sub_type", body.sub_type.known(), Some(SubType::KickOff), &mut out);
    expect("event outcome", body.outcome.truth(), Some(true), &mut out);

    let tracking = golden_bytes("tracking.jsonl");
    let r = check_stream(&tracking, StreamKind::TrackingCom, Some(&meta));
    expect("tracking errors", r.error_count(), 0, &mut out);
    let first = tracking.split(|b| *b == b'\n').next().unwrap();
    let (f, _) = cdf_core::codec::decode_document::<cdf_core::model::TrackingFrame>(first, MissingPolicy::default());
    let f = f.unwrap_or_default();
    expect("frame id", f.frame_id.get(), Some(0), &mut out);
    let ball = f.ball.value().cloned().unwrap_or_default();
    expect("ball", (ball.x.get(), ball.y.get(), ball.z.get()), (Some(0.01), Some(23.10), Some(0.33)), &mut out);

    let bundle = validate_bundle(&golden_bundle(), &BundleOptions::default()).unwrap();
    expect("bundle errors", bundle.error_count(), 0, &mut out);

    out.extend(hierarchy_failures(&golden_json("limb_nodes.json")));
    out
}

/// The limb hierarchy validates with root `hip` and the expected rest pose.
pub fn hierarchy_failures(raw: &Value) -> Vec<String> {
    let mut out = Vec::new();
    let (h, r) = validate_hierarchy(raw);
    expect("hierarchy errors", r.error_count(), 0, &mut out);
    let Some(h) = h else {
        out.push("hierarchy did not build".to_owned());
        return out;
    };
    expect("root", h.root_node().name.as_str(), "hip", &mut out);
    let pose = t_pose_positions(&h);
    for (name, want) in [("spine", [0.0, 1.0, 0.0]), ("head", [0.0, 2.0, 0.0]), ("leg_left", [-2.0, -1.0, 0.0])] {
        let got = pose.get(name).map(|p| [p.x, p.y, p.z]);
        expect(name, got, Some(want), &mut out);
    }
    out
}

/// Concrete pointers for a presence pattern: `*` becomes the first
/// element and one brace group is expanded. Patterns over object members
/// are left out.
fn concrete(pattern: &str) -> Vec<String> {
    if pattern.contains('+') {
        return Vec::new();
    }
    let p = pattern.replace('*', "0");
    match (p.find('{'), p.find('}')) {
        (Some(a), Some(b)) => p[a + 1..b].split(',').map(|k| format!("{}{}{}", &p[..a], k, &p[b + 1..])).collect(),
        _ => vec![p],
    }
}

fn remove(root: &mut Value, pointer: &str) -> bool {
    let (parent, key) = pointer.rsplit_once('/').unwrap();
    root.pointer_mut(parent).and_then(Value::as_object_mut).is_some_and(|o| o.remove(key).is_some())
}

/// Deletes each mandatory field present in the golden set, one at a time,
/// and checks that its presence rule fires. Returns how many deletions
/// were tried and the ones that went unreported.
pub fn deletion_failures() -> (usize, Vec<String>) {
    let meta = match check_document(&golden_bytes("meta.json"), DocKind::Meta).0 {
        Some(Document::Meta(m)) => m,
        _ => panic!("golden meta decodes"),
    };
    let mut tried = 0;
    let mut out = Vec::new();
    type Check<'a> = Box<dyn Fn(Vec<Value>) -> Report + 'a>;
    let doc = |kind: DocKind| -> Check<'_> {
        Box::new(move |vals: Vec<Value>| check_document(&serde_json::to_vec(&vals[0]).unwrap(), kind).1)
    };
    let stream = |kind: StreamKind| -> Check<'_> {
        let meta = &meta;
        Box::new(move |vals: Vec<Value>| {
            let mut bytes = Vec::new();
            for v in vals {
                serde_json::to_writer(&mut bytes, &v).unwrap();
                bytes.push(b'\n');
            }
            check_stream(&bytes, kind, Some(meta))
        })
    };
    let sets: [(Component, Vec<Value>, Check); 4] = [
        (Component::MatchSheet, vec![golden_json("match_sheet.json")], doc(DocKind::MatchSheet)),
        (Component::Meta, vec![golden_json("meta.json")], doc(DocKind::Meta)),
        (Component::Events, golden_lines("events.jsonl"), stream(StreamKind::Event)),
        (Component::Tracking, golden_lines("tracking.jsonl"), stream(StreamKind::TrackingCom)),
    ];
    for (component, values, check) in sets {
        for entry in presence::table(component) {
            if entry.when.is_some() {
                continue;
            }
            for pointer in concrete(entry.pattern) {
                let mut vals = values.clone();
                if !remove(&mut vals[0], &pointer) {
                    continue;
                }
                tried += 1;
                if !check(vals).has_rule(entry.rule.id) {
                    out.push(format!("{} {pointer}: {} not reported", component.as_str(), entry.rule.id));
                }
            }
        }
    }
    (tried, out)
}
