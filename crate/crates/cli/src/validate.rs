use std::io::Read;
use std::path::Path;

use anyhow::{Context, Result};
use cdf_core::bundle::{validate_bundle, BundleOptions, MatchBundle, StreamCheck};
use cdf_core::codec::{decode_document, read_document, Document, MissingPolicy, StreamKind};
use cdf_core::model::{MatchMeta, MatchSheet};
use cdf_core::positions::{validate_lineup, Formation, LineupAssignment};
use cdf_core::report::{Counts, Report, Severity};
use cdf_core::rules::catalog::lookup;
use cdf_core::{bundle, rules};
use serde_json::{json, Value};

use crate::input::{Kind, Target};
use crate::Format;

/// Shared settings of one validation run.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub opts: BundleOptions,
    pub formation: Option<Formations>,
    /// Context for streams validated on their own.
    pub meta: Option<MatchMeta>,
}

/// The report for one input.
#[derive(Debug, Clone)]
pub struct Checked {
    pub label: String,
    pub kind: &'static str,
    pub records: Option<u64>,
    pub report: Report,
}

pub fn load_meta(path: &Path, policy: MissingPolicy) -> Result<MatchMeta> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let (meta, report) = decode_document::<MatchMeta>(&bytes, policy);
    meta.with_context(|| format!("{} is not a usable meta document:\n{}", path.display(), report.to_text()))
}

/// Decode findings plus every document rule.
pub fn check_document(bytes: &[u8], kind: cdf_core::codec::DocKind, settings: &Settings) -> Report {
    let (doc, mut report) = read_document(bytes, kind, settings.opts.policy);
    match &doc {
        Some(Document::MatchSheet(s)) => {
            report.absorb(rules::validate_match_sheet(s));
            report.absorb(bundle::reconcile_result(s));
        }
        Some(Document::Meta(m)) => report.absorb(rules::validate_meta(m)),
        Some(Document::VideoMeta(v)) => report.absorb(rules::validate_video_meta(v)),
        None => {}
    }
    if let (Some(Document::MatchSheet(s)), Some(f)) = (&doc, &settings.formation) {
        report.absorb(check_lineups(s, f));
    }
    report.sorted()
}

/// Formations for `--positions`: one for both teams, or `home,away`.
#[derive(Debug, Clone, PartialEq)]
pub struct Formations {
    pub home: Formation,
    pub away: Formation,
}

impl std::str::FromStr for Formations {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (home, away) = s.split_once(',').unwrap_or((s, s));
        Ok(Formations { home: home.trim().parse()?, away: away.trim().parse()? })
    }
}

fn check_lineups(sheet: &MatchSheet, formations: &Formations) -> Report {
    let mut report = Report::new(cdf_core::Component::MatchSheet);
    let Some(teams) = sheet.teams() else { return report };
    for (side, team, formation) in [("home", &teams.home, &formations.home), ("away", &teams.away, &formations.away)] {
        let Some(team) = team.value() else { continue };
        let lineup = validate_lineup(&LineupAssignment::starters(team), formation);
        // lineup findings index the starters; say which team they belong to
        for f in lineup.findings() {
            let rule = lookup(f.rule_id).expect("catalogued rule");
            report.push_as(rule, f.severity, format!("/teams/{side}/lineup{}", f.path), format!("{formation}: {}", f.message));
        }
    }
    report
}

pub fn check_stream(reader: impl std::io::BufRead, kind: StreamKind, settings: &Settings) -> Result<(Report, u64)> {
    let mut check = StreamCheck::new(kind, settings.meta.as_ref(), &settings.opts);
    check.read(reader)?;
    let out = check.finish();
    Ok((out.report.sorted(), out.records))
}

/// Validates a stream as it arrives, in whatever chunks the pipe delivers.
pub fn check_live(mut reader: impl Read, kind: StreamKind, settings: &Settings) -> Result<(Report, u64)> {
    let mut check = StreamCheck::new(kind, settings.meta.as_ref(), &settings.opts);
    let mut buf = vec![0u8; 64 * 1024];
    loop {
        let n = match reader.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e).context("reading standard input"),
        };
        check.push(&buf[..n]);
    }
    let out = check.finish();
    Ok((out.report.sorted(), out.records))
}

pub fn check_target(target: &Target, settings: &Settings) -> Result<Checked> {
    let label = target.path().display().to_string();
    match target {
        Target::Bundle(_, manifest) => {
            let bundle = MatchBundle::load(manifest, settings.opts.policy)?;
            let mut report = validate_bundle(&bundle, &settings.opts)?;
            if let (Some(s), Some(f)) = (&bundle.match_sheet, &settings.formation) {
                report.absorb(check_lineups(s, f));
                report.sort();
            }
            Ok(Checked { label, kind: "bundle", records: None, report })
        }
        Target::File(path, Kind::Doc(kind)) => {
            let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let report = check_document(&bytes, *kind, settings);
            Ok(Checked { label, kind: Kind::Doc(*kind).name(), records: None, report })
        }
        Target::File(path, Kind::Stream(kind)) => {
            let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let (report, n) = check_stream(std::io::BufReader::new(file), *kind, settings)?;
            Ok(Checked { label, kind: Kind::Stream(*kind).name(), records: Some(n), report })
        }
    }
}

pub fn totals(checks: &[Checked]) -> Counts {
    let mut c = Counts::default();
    for r in checks.iter().map(|c| c.report.counts()) {
        c.error += r.error;
        c.warning += r.warning;
        c.info += r.info;
    }
    c
}

pub fn max_severity(checks: &[Checked]) -> Option<Severity> {
    checks.iter().filter_map(|c| c.report.max_severity()).max_by_key(|s| match s {
        Severity::Info => 0,
        Severity::Warning => 1,
        Severity::Error => 2,
    })
}

pub fn render(checks: &[Checked], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for c in checks {
                out.push_str(&format!("== {} ({})", c.label, c.kind));
                if let Some(n) = c.records {
                    out.push_str(&format!(", {n} record(s)"));
                }
                out.push('\n');
                out.push_str(&c.report.to_text());
            }
            out
        }
        Format::Json => {
            let targets: Vec<Value> = checks
                .iter()
                .map(|c| {
                    let mut v = json!({ "path": c.label, "kind": c.kind });
                    if let Some(n) = c.records {
                        v["records"] = json!(n);
                    }
                    v["report"] = c.report.to_json();
                    v
                })
                .collect();
            let t = totals(checks);
            let doc = json!({ "targets": targets, "counts": { "error": t.error, "warning": t.warning, "info": t.info } });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}
