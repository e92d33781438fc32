//! Acceptance suite: one PASS or FAIL line per criterion.
//!
//! Runs without the libtest harness so it can print a table and re-invoke
//! itself as an isolated memory probe (`--probe <scale>`).

mod common;

use std::collections::BTreeSet;
use std::io::Cursor;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdf_core::bundle::{validate_bundle, validate_bundle_detailed, BundleOptions, StreamCheck};
use cdf_core::codec::{decode_document, write_record, CdfRecord, MissingPolicy, StreamKind, WriteOptions};
use cdf_core::fixtures::{catalog, generate, mutate, Fixture, FixtureSpec};
use cdf_core::model::{EntityId, Field, Period, TrackingFrame};
use cdf_core::positions::{enumerate_valid_label_sets, validate_lineup, Band, Formation, LineupAssignment};
use cdf_core::representation::{canonicalize_precision, to_actual_sides, to_cdf_sides, Oriented, SideAssignment};
use cdf_core::{round_half_even, Report};

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_few(failures: &[String]) -> String {
    let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
    format!("{} failure(s): {}", failures.len(), shown.join("; "))
}

fn bundle_report(f: &Fixture) -> Report {
    validate_bundle(&f.to_bundle().unwrap(), &BundleOptions::default()).unwrap()
}

// 1
fn golden() -> Outcome {
    let mut failures = common::golden_failures();
    let (tried, deletions) = common::deletion_failures();
    failures.extend(deletions);
    ensure(failures.is_empty(), || first_few(&failures))?;
    Ok(format!("values exact, 0 errors, {tried} mandatory-field deletions reported"))
}

// 2
fn mutations() -> Outcome {
    let cat = catalog();
    ensure(cat.len() >= 25, || format!("catalog has {} entries", cat.len()))?;
    let base = generate(&FixtureSpec::small(5)).unwrap();
    let clean = bundle_report(&base);
    ensure(clean.error_count() == 0, || format!("base fixture has {} errors", clean.error_count()))?;

    // Every defect class is represented.
    let rules: BTreeSet<&str> = cat.iter().map(|m| m.rule).collect();
    for prefix in ["MS", "MD", "VD", "EV", "TR", "SK"] {
        ensure(cat.iter().any(|m| m.id.starts_with("drop-") && m.rule.starts_with(prefix)), || {
            format!("no mandatory-field mutation for {prefix}")
        })?;
    }
    ensure(cat.iter().filter(|m| m.id.ends_with("-enum")).count() >= 3, || "too few enum mutations".into())?;
    for (class, ids) in [
        ("ordering", &["TR-104", "TR-105", "TR-106"][..]),
        ("availability", &["XB-001", "XB-002"][..]),
        ("reconciliation", &["XB-005", "XB-006"][..]),
    ] {
        ensure(ids.iter().all(|id| rules.contains(id)), || format!("{class} mutations incomplete"))?;
    }

    let mut failures = Vec::new();
    for m in cat {
        if clean.has_rule(m.rule) {
            failures.push(format!("{} fires on the clean fixture", m.rule));
        }
        if !bundle_report(&mutate(&base, m.id).unwrap()).has_rule(m.rule) {
            failures.push(format!("{} did not yield {}", m.id, m.rule));
        }
    }
    ensure(failures.is_empty(), || first_few(&failures))?;
    Ok(format!("{}/{} mutations detected, clean base", cat.len(), cat.len()))
}

fn reread<T: CdfRecord>(record: &T, opts: &WriteOptions) -> Result<(), String> {
    let bytes = write_record(record, opts).map_err(|e| e.to_string())?;
    let (back, _) = decode_document::<T>(&bytes, MissingPolicy::default());
    let back = back.ok_or("record did not decode")?;
    ensure(back == *record, || format!("{} changed on reread", T::COMPONENT.as_str()))?;
    let again = write_record(&back, opts).map_err(|e| e.to_string())?;
    ensure(again == bytes, || format!("{} bytes changed on rewrite", T::COMPONENT.as_str()))
}

fn round_trip_one(seed: u64) -> Result<(), String> {
    let mut spec = FixtureSpec::small(seed);
    if seed % 3 == 1 {
        spec = spec.with_extratime(0.5);
    }
    if seed % 3 == 2 {
        spec = spec.with_extratime(0.5).with_shootout(0.5);
    }
    let f = generate(&spec).unwrap();
    let g = generate(&spec).unwrap();
    ensure(f.encode().unwrap() == g.encode().unwrap(), || format!("seed {seed}: bytes differ between runs"))?;

    let doc = WriteOptions::default().pretty(true);
    let line = WriteOptions::default();
    reread(f.match_sheet.as_ref().unwrap(), &doc)?;
    reread(f.meta.as_ref().unwrap(), &doc)?;
    if let Some(v) = &f.video_meta {
        reread(v, &doc)?;
    }
    for e in f.events.iter().flatten() {
        reread(e, &line)?;
    }
    for t in f.tracking_frames() {
        reread(&t, &line)?;
    }
    for s in f.skeletal_frames() {
        reread(&s, &line)?;
    }
    Ok(())
}

// 3
fn round_trip() -> Outcome {
    let failures: Vec<String> = (0..200).filter_map(|s| round_trip_one(s).err()).collect();
    ensure(failures.is_empty(), || first_few(&failures))?;
    Ok("200/200 fixtures reread equal and byte-stable".into())
}

// 4
fn availability() -> Outcome {
    let full = generate(&FixtureSpec::small(9)).unwrap();
    let mut failures = Vec::new();
    for mask in 0u8..16 {
        let (sheet, meta, events, tracking) = (mask & 1 != 0, mask & 2 != 0, mask & 4 != 0, mask & 8 != 0);
        let mut f = full.clone();
        f.skeletal = None;
        f.video_meta = None;
        if !sheet {
            f.match_sheet = None;
        }
        if !meta {
            f.meta = None;
        }
        if !events {
            f.events = None;
        }
        if !tracking {
            f.tracking = None;
        }
        let r = bundle_report(&f);
        let mut want = BTreeSet::new();
        if !sheet {
            want.insert("XB-001");
        }
        if !meta && (events || tracking) {
            want.insert("XB-002");
        }
        let got: BTreeSet<&str> =
            r.findings().iter().map(|x| x.rule_id).filter(|id| matches!(*id, "XB-001" | "XB-002")).collect();
        let once = want.iter().all(|id| r.count_rule(id) == 1);
        if got != want || !once {
            failures.push(format!("sheet={sheet} meta={meta} events={events} tracking={tracking}: got {got:?}, want {want:?}"));
        }
    }
    ensure(failures.is_empty(), || first_few(&failures))?;
    Ok("16/16 combinations classified".into())
}

/// A frame shaped like `template` with every coordinate drawn at random,
/// then canonicalized.
fn random_frame(template: &TrackingFrame, rng: &mut ChaCha8Rng) -> TrackingFrame {
    let mut f = template.clone();
    let mut draw = |x: &mut Field<f64>, y: &mut Field<f64>| {
        *x = Field::Value(rng.gen_range(-60.0..60.0));
        *y = Field::Value(rng.gen_range(-40.0..40.0));
    };
    if let Some(teams) = f.teams.value_mut() {
        for team in [&mut teams.home, &mut teams.away] {
            for p in team.value_mut().and_then(|t| t.players.value_mut()).into_iter().flatten() {
                draw(&mut p.x, &mut p.y);
            }
        }
    }
    if let Some(b) = f.ball.value_mut() {
        draw(&mut b.x, &mut b.y);
    }
    canonicalize_precision(&f).0
}

fn planar(f: &TrackingFrame) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = f.players().filter_map(|p| Some((p.x.get()?, p.y.get()?))).collect();
    if let Some(b) = f.ball.value() {
        out.extend(b.x.get().zip(b.y.get()));
    }
    out
}

fn distances(points: &[(f64, f64)]) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            out.push(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt());
        }
    }
    out
}

/// Half-to-even rounding of `k / 10^4` to three places, in integers.
fn grid_oracle(k: i64) -> f64 {
    let (q, r) = (k.div_euclid(10), k.rem_euclid(10));
    let q = match r {
        0..=4 => q,
        5 if q % 2 == 0 => q,
        _ => q + 1,
    };
    q as f64 / 1000.0
}

// 5
fn representation() -> Outcome {
    let fixture = generate(&FixtureSpec::small(21)).unwrap();
    let template = fixture.tracking_frames().next().unwrap();
    let home = EntityId::new("home").unwrap();
    let away = EntityId::new("away").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let f = random_frame(&template, &mut rng);
        let mut flipped = f.clone();
        flipped.flip();
        let mut twice = flipped.clone();
        twice.flip();
        if twice != f {
            failures.push(format!("frame {i}: flip is not an involution"));
        }
        if canonicalize_precision(&flipped).0 != flipped {
            failures.push(format!("frame {i}: flipped frame is not canonical"));
        }
        if distances(&planar(&f)) != distances(&planar(&flipped)) {
            failures.push(format!("frame {i}: distances changed"));
        }
        for (left, right) in [(&home, &away), (&away, &home)] {
            let sides = SideAssignment::new(Period::FirstHalf, left.clone(), right.clone()).unwrap();
            let actual = to_actual_sides(&f, &sides, &home).unwrap();
            if to_cdf_sides(&actual, &sides, &home).unwrap() != f {
                failures.push(format!("frame {i}: side conversion does not round trip"));
            }
        }
    }
    let mut grid = 0u64;
    for k in -600_000i64..=600_000 {
        let v = k as f64 / 10_000.0;
        let once = round_half_even(v, 3);
        if once != grid_oracle(k) || round_half_even(once, 3) != once {
            failures.push(format!("rounding {v}: got {once}, want {}", grid_oracle(k)));
        }
        grid += 1;
    }
    ensure(failures.is_empty(), || first_few(&failures))?;
    Ok(format!("1000 frames, {grid} grid points"))
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return if (1..=5).contains(&total) { vec![vec![total]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=5.min(total) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn subsets<T: Copy>(pool: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if pool.len() < k {
        return Vec::new();
    }
    let mut out = subsets(&pool[1..], k - 1);
    for s in &mut out {
        s.insert(0, pool[0]);
    }
    out.extend(subsets(&pool[1..], k));
    out
}

// 6
fn positions() -> Outcome {
    let defence = Band::Defence.labels();
    let attack = Band::Attack.labels();
    let middle: Vec<_> = [Band::DefensiveMidfield, Band::Midfield, Band::AttackingMidfield]
        .iter()
        .flat_map(|b| b.labels())
        .copied()
        .collect();
    let outfield: Vec<_> = defence.iter().chain(&middle).chain(attack).copied().collect();
    let gk = Band::Goal.labels()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut formations, mut compared, mut disagreements) = (0, 0u64, Vec::new());
    for parts in 2..=4 {
        for lines in compositions(10, parts) {
            let formation = Formation::new(lines.clone()).unwrap();
            let valid = enumerate_valid_label_sets(&formation);
            let (d, a) = (lines[0], lines[lines.len() - 1]);
            let mut candidates: Vec<Vec<_>> = Vec::new();
            for back in subsets(defence, d) {
                for mid in subsets(&middle, 10 - d - a) {
                    for front in subsets(attack, a) {
                        candidates.push([vec![gk], back.clone(), mid.clone(), front].concat());
                    }
                }
            }
            // Off-band draws exercise line membership.
            for _ in 0..500 {
                let mut c: Vec<_> = outfield.choose_multiple(&mut rng, 10).copied().collect();
                c.push(gk);
                candidates.push(c);
            }
            for mut c in candidates {
                let set: BTreeSet<_> = c.iter().copied().collect();
                c.shuffle(&mut rng);
                let accepted = !validate_lineup(&LineupAssignment::from_labels(&c), &formation).has_errors();
                if accepted != valid.contains(&set) {
                    disagreements.push(format!("{formation}: {c:?} validator {accepted}"));
                }
                compared += 1;
            }
            formations += 1;
        }
    }
    ensure(disagreements.is_empty(), || first_few(&disagreements))?;
    Ok(format!("{formations} formations, {compared} lineups, 0 disagreements"))
}

// 7
fn skeleton() -> Outcome {
    use cdf_core::skeleton::validate_hierarchy;
    use serde_json::json;
    let nodes = common::golden_json("limb_nodes.json");
    let failures = common::hierarchy_failures(&nodes);
    ensure(failures.is_empty(), || first_few(&failures))?;

    let mut cycle = nodes.clone();
    cycle[1]["children"] = json!([0]);
    let mut multi_root = nodes.clone();
    multi_root.as_array_mut().unwrap().push(json!({"name": "prop", "children": [10]}));
    multi_root.as_array_mut().unwrap().push(json!({"name": "prop_tip"}));
    let mut quat = nodes.clone();
    quat[2]["rotation"] = json!([0.0, 0.0, 0.5, 1.0]);
    for (name, raw, rule) in [("cycle", cycle, "SK-104"), ("multi-root", multi_root, "SK-105"), ("quaternion", quat, "SK-106")] {
        let (_, r) = validate_hierarchy(&raw);
        ensure(r.has_rule(rule), || format!("{name} variant did not yield {rule}: {}", r.to_text()))?;
    }
    Ok("root hip, rest pose exact, SK-104/105/106 on injected variants".into())
}

fn vm_hwm_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

/// Child process: validates a full match stretched by `scale` and prints
/// `frames seconds peak_kib`.
fn probe(scale: f64) -> ExitCode {
    let spec = FixtureSpec::new(8).with_minutes(45.0 * scale);
    let fixture = generate(&spec).unwrap();
    let bundle = fixture.to_bundle().unwrap();
    let opts = BundleOptions { cap: Some(100), ..BundleOptions::default() };
    let start = Instant::now();
    let v = validate_bundle_detailed(&bundle, &opts).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let frames = v.records.iter().find(|(k, _)| *k == StreamKind::TrackingCom).map_or(0, |r| r.1);
    println!("{frames} {secs:.2} {} {}", vm_hwm_kib().unwrap_or(0), v.report.error_count());
    ExitCode::SUCCESS
}

fn run_probe(scale: f64) -> Result<(u64, f64, u64, u64), String> {
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let out = Command::new(exe).args(["--probe", &scale.to_string()]).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("probe x{scale} failed: {}", String::from_utf8_lossy(&out.stderr)))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let f: Vec<&str> = text.split_whitespace().collect();
    let parse = |i: usize| f.get(i).and_then(|s| s.parse::<f64>().ok()).ok_or(format!("probe output `{text}`"));
    Ok((parse(0)? as u64, parse(1)?, parse(2)? as u64, parse(3)? as u64))
}

/// Allowed growth of the peak over the 1× run.
fn ceiling(base_kib: u64) -> u64 {
    base_kib + (base_kib / 10).max(8 * 1024)
}

// 8
fn throughput() -> Outcome {
    let (frames, secs, base, errors) = run_probe(1.0)?;
    ensure(frames == 135_000, || format!("{frames} frames validated"))?;
    ensure(errors == 0, || format!("{errors} errors on the synthetic match"))?;
    ensure(secs <= 60.0, || format!("135000 frames took {secs:.1} s"))?;
    let (long_frames, long_secs, peak, _) = run_probe(10.0)?;
    ensure(long_frames == 1_350_000, || format!("{long_frames} frames in the 10x run"))?;
    ensure(peak <= ceiling(base), || format!("peak {peak} KiB at 10x exceeds ceiling {} KiB", ceiling(base)))?;
    Ok(format!(
        "135000 frames in {secs:.1} s; peak {} MiB at 1x, {} MiB at 10x ({long_secs:.0} s)",
        base / 1024,
        peak / 1024
    ))
}

fn stream_bytes(f: &Fixture) -> Vec<(StreamKind, Vec<u8>)> {
    let files = f.encode().unwrap();
    [("events.jsonl", StreamKind::Event), ("tracking.jsonl", StreamKind::TrackingCom), ("skeletal.jsonl", StreamKind::TrackingSkeletal)]
        .into_iter()
        .filter_map(|(name, kind)| Some((kind, files.get(name)?.clone())))
        .collect()
}

// 9
fn live_equivalence() -> Outcome {
    let cat = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    let mut streams = 0;
    for seed in 0..50u64 {
        let mut spec = FixtureSpec::small(100 + seed);
        // Most fixtures carry one defect so reports are not all empty.
        if seed % 5 != 0 {
            let m = &cat[seed as usize % cat.len()];
            if !matches!(m.rule, "XB-001" | "XB-002") {
                spec = spec.with_mutation(m.id);
            }
        }
        let f = generate(&spec).unwrap();
        let opts = BundleOptions::default();
        for (kind, bytes) in stream_bytes(&f) {
            let mut batch = StreamCheck::new(kind, f.meta.as_ref(), &opts);
            batch.read(Cursor::new(&bytes)).unwrap();
            let batch = batch.finish();
            let mut live = StreamCheck::new(kind, f.meta.as_ref(), &opts);
            let mut rest = bytes.as_slice();
            while !rest.is_empty() {
                let n = rng.gen_range(1..=4096).min(rest.len());
                live.push(&rest[..n]);
                rest = &rest[n..];
            }
            let live = live.finish();
            if live.report != batch.report || live.records != batch.records {
                failures.push(format!("seed {seed} {kind:?}: live and batch reports differ"));
            }
            streams += 1;
        }
    }
    ensure(failures.is_empty(), || first_few(&failures))?;
    Ok(format!("50 fixtures, {streams} streams identical"))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if let Some(i) = args.iter().position(|a| a == "--probe") {
        let scale = args.get(i + 1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
        return probe(scale);
    }
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("golden-file conformance", golden),
        ("mutation completeness", mutations),
        ("round trip and determinism", round_trip),
        ("availability matrix", availability),
        ("representation properties", representation),
        ("position-label oracle", positions),
        ("skeleton checks", skeleton),
        ("throughput and memory", throughput),
        ("stream/batch equivalence", live_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
