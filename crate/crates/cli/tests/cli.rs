use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use cdf_core::bundle::{validate_bundle, BundleOptions};
use cdf_core::model::{Period, Vocabulary};
use cdf_core::fixtures::{catalog, generate, mutate, FixtureSpec};
use cdf_core::report::Severity;
use serde_json::Value;
use tempfile::TempDir;

fn cdf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdf"))
        .args(args)
        .env_remove("CDF_MISSING_POLICY")
        .env_remove("CDF_CONFIG")
        .output()
        .expect("cdf runs")
}

fn cdf_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cdf"))
        .args(args)
        .env_remove("CDF_MISSING_POLICY")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("cdf runs");
    let mut stdin = child.stdin.take().unwrap();
    let bytes = input.to_vec();
    // small writes so the reader sees partial lines
    let feeder = std::thread::spawn(move || {
        for chunk in bytes.chunks(777) {
            stdin.write_all(chunk).unwrap();
            stdin.flush().unwrap();
        }
    });
    let out = child.wait_with_output().unwrap();
    feeder.join().unwrap();
    out
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fixture_dir(args: &[&str]) -> TempDir {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b");
    let mut all = vec!["gen-fixture", "--minutes", "1", "--fps", "5", "--events", "40", "--out", s(&out)];
    all.extend_from_slice(args);
    let o = cdf(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    dir
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn generated_bundle_validates_clean() {
    let dir = fixture_dir(&["--seed", "3"]);
    let b = dir.path().join("b");
    let o = cdf(&["validate", s(&b), "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["counts"]["error"], 0);
    let o = cdf(&["validate", s(&b.join("tracking.jsonl")), "--meta", s(&b.join("meta.json"))]);
    assert_eq!(code(&o), 0);
}

#[test]
fn summary_histogram_sums_to_event_count() {
    let dir = fixture_dir(&["--seed", "5", "--extratime", "1", "--shootout", "1"]);
    let o = cdf(&["summarize", s(&dir.path().join("b")), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let total: u64 = v["events"].as_object().unwrap().values().map(|n| n.as_u64().unwrap()).sum();
    assert_eq!(total, 40);
    assert!(v["result"].as_str().unwrap().contains("pens"));
    assert_eq!(v["fps_consistent"], true);
    let frames: Vec<u64> = v["frames"].as_array().unwrap().iter().map(|p| p["frames"].as_u64().unwrap()).collect();
    assert_eq!(frames, vec![300, 300, 300, 300, 300]);
}

#[test]
fn empty_event_stream_has_zero_histogram() {
    let dir = fixture_dir(&["--events", "0"]);
    let v = json(&cdf(&["summarize", s(&dir.path().join("b")), "--format", "json"]));
    let h = v["events"].as_object().unwrap();
    assert!(!h.is_empty());
    assert!(h.values().all(|n| n == 0));
}

/// The exit code follows the worst finding the library reports.
#[test]
fn exit_codes_follow_every_mutation() {
    let base = generate(&FixtureSpec::small(21)).unwrap();
    let dir = TempDir::new().unwrap();
    for m in catalog() {
        let f = mutate(&base, m.id).unwrap();
        let out = dir.path().join(m.id);
        f.write_dir(&out).unwrap();
        let report = validate_bundle(&f.to_bundle().unwrap(), &BundleOptions::default()).unwrap();
        let expected = match report.max_severity() {
            Some(Severity::Error) => 2,
            Some(Severity::Warning) => 1,
            _ => 0,
        };
        let o = cdf(&["validate", s(&out), "--strict-warnings", "--format", "json"]);
        assert_eq!(code(&o), expected, "{}", m.id);
        let v = json(&o);
        let rules: Vec<&str> = v["targets"][0]["report"]["findings"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| f["rule_id"].as_str().unwrap())
            .collect();
        assert!(rules.contains(&m.rule), "{}: {rules:?}", m.id);
        let relaxed = cdf(&["validate", s(&out)]);
        assert_eq!(code(&relaxed), if expected == 2 { 2 } else { 0 }, "{}", m.id);
    }
}

#[test]
fn drop_meta_gives_one_availability_error() {
    let dir = fixture_dir(&["--mutation", "drop-meta"]);
    let o = cdf(&["validate", s(&dir.path().join("b")), "--format", "json"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    let findings = v["targets"][0]["report"]["findings"].as_array().unwrap();
    let xb: Vec<&Value> = findings.iter().filter(|f| f["rule_id"].as_str().unwrap().starts_with("XB-")).collect();
    assert_eq!(xb.len(), 1, "{findings:?}");
    assert_eq!(xb[0]["rule_id"], "XB-002");
}

#[test]
fn empty_stdin_is_clean() {
    let o = cdf_stdin(&["validate", "--stdin", "--kind", "tracking_com", "--format", "json"], b"");
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["targets"][0]["records"], 0);
}

#[test]
fn live_pipe_matches_batch() {
    let dir = fixture_dir(&["--seed", "8", "--mutation", "frame-skip", "--mutation", "duplicate-player"]);
    let b = dir.path().join("b");
    let meta = b.join("meta.json");
    for (kind, file) in [("tracking_com", "tracking.jsonl"), ("event", "events.jsonl")] {
        let path = b.join(file);
        let batch = cdf(&["validate", s(&path), "--kind", kind, "--meta", s(&meta), "--format", "json"]);
        let live = cdf_stdin(
            &["validate", "--stdin", "--kind", kind, "--meta", s(&meta), "--format", "json"],
            &std::fs::read(&path).unwrap(),
        );
        assert_eq!(code(&live), code(&batch));
        let (a, b) = (json(&batch), json(&live));
        assert_eq!(a["targets"][0]["report"], b["targets"][0]["report"], "{kind}");
        assert_eq!(a["targets"][0]["records"], b["targets"][0]["records"]);
    }
}

#[test]
fn unreadable_and_usage_failures_exit_3() {
    assert_eq!(code(&cdf(&["validate", "/definitely/not/here"])), 3);
    assert_eq!(code(&cdf(&["validate", "--no-such-flag"])), 3);
    assert_eq!(code(&cdf(&["validate"])), 3);
    assert_eq!(code(&cdf(&["--help"])), 0);
}

#[test]
fn normalize_round_trips_sentinels_and_is_idempotent() {
    let dir = fixture_dir(&["--seed", "13"]);
    let b = dir.path().join("b");
    let events = b.join("events.jsonl");
    let sentinel = dir.path().join("sentinel.jsonl");
    let back = dir.path().join("back.jsonl");
    assert_eq!(code(&cdf(&["normalize", s(&events), "--missing", "sentinel", "-o", s(&sentinel)])), 0);
    let text = std::fs::read_to_string(&sentinel).unwrap();
    assert!(text.contains("\"None\""));
    assert_eq!(code(&cdf(&["normalize", s(&sentinel), "--kind", "event", "-o", s(&back)])), 0);
    assert_eq!(std::fs::read(&back).unwrap(), std::fs::read(&events).unwrap());
    for doc in ["meta.json", "match_sheet.json", "video.json"] {
        let once = cdf(&["normalize", s(&b.join(doc))]);
        assert_eq!(code(&once), 0);
        assert_eq!(once.stdout, std::fs::read(b.join(doc)).unwrap(), "{doc}");
    }
}

#[test]
fn null_policy_from_env_rejects_sentinels() {
    let dir = fixture_dir(&["--seed", "14"]);
    let sentinel = dir.path().join("s.jsonl");
    cdf(&["normalize", s(&dir.path().join("b/events.jsonl")), "--missing", "sentinel", "-o", s(&sentinel)]);
    assert_eq!(code(&cdf(&["validate", s(&sentinel), "--kind", "event"])), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_cdf"))
        .args(["validate", s(&sentinel), "--kind", "event"])
        .env("CDF_MISSING_POLICY", "null")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    // flags beat the environment
    let o = Command::new(env!("CARGO_BIN_EXE_cdf"))
        .args(["validate", s(&sentinel), "--kind", "event", "--policy", "sentinel"])
        .env("CDF_MISSING_POLICY", "null")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn config_file_sets_defaults() {
    let dir = fixture_dir(&["--seed", "15"]);
    let conf = dir.path().join("cdf.conf");
    std::fs::write(&conf, "format = json\n").unwrap();
    let o = cdf(&["--config", s(&conf), "validate", s(&dir.path().join("b"))]);
    assert_eq!(json(&o)["counts"]["error"], 0);
    let o = cdf(&["--config", s(&conf), "validate", s(&dir.path().join("b")), "--format", "text"]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("=="));
    std::fs::write(&conf, "colour = blue\n").unwrap();
    assert_eq!(code(&cdf(&["--config", s(&conf), "validate", s(&dir.path().join("b"))])), 3);
}

#[test]
fn normalize_blocks_on_errors_unless_forced() {
    let dir = fixture_dir(&["--seed", "16", "--mutation", "event-type-enum"]);
    let events = dir.path().join("b/events.jsonl");
    let out = dir.path().join("n.jsonl");
    let o = cdf(&["normalize", s(&events), "-o", s(&out)]);
    assert_eq!(code(&o), 2);
    assert_eq!(std::fs::metadata(&out).map(|m| m.len()).unwrap_or(0), 0);
    assert_eq!(code(&cdf(&["normalize", s(&events), "-o", s(&out), "--force"])), 0);
    assert!(std::fs::metadata(&out).unwrap().len() > 0);
}

#[test]
fn actual_sides_flip_periods_where_home_plays_right() {
    let dir = fixture_dir(&["--seed", "17"]);
    let b = dir.path().join("b");
    let out = dir.path().join("actual");
    assert_eq!(code(&cdf(&["normalize", s(&b), "--out", s(&out), "--sides", "actual"])), 0);
    let meta: Value = serde_json::from_slice(&std::fs::read(b.join("meta.json")).unwrap()).unwrap();
    let home = meta["teams"]["home"]["id"].as_str().unwrap().to_owned();
    let period = |v: &Value| Period::parse(v.as_str().unwrap()).unwrap();
    let flipped: Vec<Period> = meta["periods"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["right_team_id"] == home.as_str())
        .map(|p| period(&p["type"]))
        .collect();
    assert!(!flipped.is_empty());
    let read = |p: &Path| -> Vec<Value> {
        std::fs::read_to_string(p).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
    };
    let (orig, conv) = (read(&b.join("tracking.jsonl")), read(&out.join("tracking.jsonl")));
    assert_eq!(orig.len(), conv.len());
    let mut saw_flip = false;
    for (a, c) in orig.iter().zip(&conv) {
        let (ax, cx) = (a["ball"]["x"].as_f64().unwrap(), c["ball"]["x"].as_f64().unwrap());
        if flipped.contains(&period(&a["period"])) {
            saw_flip = true;
            assert_eq!(cx, -ax);
        } else {
            assert_eq!(cx, ax);
        }
    }
    assert!(saw_flip, "fixture should have a period with home on the right");
}

#[test]
fn golden_bundle_validates_and_summarizes() {
    let golden = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/golden");
    let o = cdf(&["validate", golden, "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["counts"]["error"], 0);
    let o = cdf(&["summarize", golden, "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["result"], "2–2 (4–5 pens)");
    assert_eq!(v["winner"], "3f029694");
    assert_eq!(v["match_id"], "74e6661c");
}
