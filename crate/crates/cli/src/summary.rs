use std::collections::BTreeMap;

use anyhow::Result;
use cdf_core::bundle::{validate_bundle_detailed, BundleOptions, MatchBundle};
use cdf_core::model::{Field, PeriodSpelling, Score, Teams};
use cdf_core::report::Counts;
use serde_json::{json, Value};

use crate::Format;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodLine {
    pub period: String,
    pub frames: u64,
    pub expected: Option<u64>,
}

/// Headline facts of one bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub match_id: Option<String>,
    pub home: Option<String>,
    pub away: Option<String>,
    pub result: Option<String>,
    pub winner: Option<String>,
    pub events: Option<BTreeMap<String, u64>>,
    pub frames: Option<Vec<PeriodLine>>,
    /// `None` when there is no tracking stream to judge.
    pub fps_consistent: Option<bool>,
    pub counts: Counts,
}

/// `2–2 (4–5 pens)` style result line.
pub fn result_line(final_result: &Field<Score>, shootout: &Field<Score>) -> Option<String> {
    let (h, a) = final_result.value().and_then(Score::pair)?;
    let mut s = format!("{h}\u{2013}{a}");
    if let Some((sh, sa)) = shootout.value().and_then(Score::pair) {
        s.push_str(&format!(" ({sh}\u{2013}{sa} pens)"));
    }
    Some(s)
}

fn winner(final_result: &Field<Score>, shootout: &Field<Score>) -> Option<String> {
    [shootout, final_result]
        .into_iter()
        .find_map(|s| s.value().and_then(|s| s.winning_team_id.value()))
        .map(|id| id.to_string())
}

fn team_label(teams: Option<&Teams>, home: bool) -> Option<String> {
    let team = if home { teams?.home.value()? } else { teams?.away.value()? };
    let id = team.id.value().map(|i| i.to_string());
    match (id, team.name.value()) {
        (Some(id), Some(name)) => Some(format!("{id} ({name})")),
        (id, name) => id.or_else(|| name.cloned()),
    }
}

pub fn summarize(bundle: &MatchBundle, opts: &BundleOptions) -> Result<Summary> {
    let v = validate_bundle_detailed(bundle, opts)?;
    let sheet = bundle.match_sheet.as_ref();
    let meta = bundle.meta.as_ref();
    let match_id = sheet
        .and_then(|s| s.match_id())
        .or_else(|| meta.and_then(|m| m.match_id()))
        .map(|i| i.to_string());
    let teams = sheet.and_then(|s| s.teams()).or_else(|| meta.and_then(|m| m.teams()));
    let result = sheet.and_then(|s| s.result()).map(|r| (&r.final_result, &r.shootout)).or_else(|| {
        let r = meta?.match_info.value()?.result.value()?;
        Some((&r.final_result, &r.shootout))
    });
    let frames = v.tracking.as_ref().map(|t| {
        t.periods
            .iter()
            .map(|(p, f)| {
                let expected = meta.and_then(|m| {
                    let (start, end) = m.period_window(*p)?;
                    let fps = m.fps_tracking().filter(|f| *f > 0)?;
                    Some((end.seconds_since(&start) * fps as f64).round() as u64)
                });
                PeriodLine { period: p.name(PeriodSpelling::Stream).to_owned(), frames: f.count(), expected }
            })
            .collect()
    });
    let fps_consistent = v
        .tracking
        .as_ref()
        .map(|_| !v.report.has_rule("XB-012") && !v.report.has_rule("XB-013"));
    Ok(Summary {
        match_id,
        home: team_label(teams, true),
        away: team_label(teams, false),
        result: result.and_then(|(f, s)| result_line(f, s)),
        winner: result.and_then(|(f, s)| winner(f, s)),
        events: v.event_types,
        frames,
        fps_consistent,
        counts: v.report.counts(),
    })
}

pub fn render(s: &Summary, format: Format) -> String {
    let dash = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".to_owned());
    match format {
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("match    {}\n", dash(&s.match_id)));
            out.push_str(&format!("home     {}\n", dash(&s.home)));
            out.push_str(&format!("away     {}\n", dash(&s.away)));
            out.push_str(&format!("result   {}\n", dash(&s.result)));
            out.push_str(&format!("winner   {}\n", dash(&s.winner)));
            match &s.events {
                Some(h) => {
                    out.push_str(&format!("events   {}\n", h.values().sum::<u64>()));
                    for (t, n) in h {
                        out.push_str(&format!("  {t:<22} {n}\n"));
                    }
                }
                None => out.push_str("events   -\n"),
            }
            match &s.frames {
                Some(ps) => {
                    out.push_str(&format!("frames   {}\n", ps.iter().map(|p| p.frames).sum::<u64>()));
                    for p in ps {
                        let expected = p.expected.map_or(String::new(), |e| format!(" (expected {e})"));
                        out.push_str(&format!("  {:<22} {}{expected}\n", p.period, p.frames));
                    }
                }
                None => out.push_str("frames   -\n"),
            }
            let fps = match s.fps_consistent {
                Some(true) => "consistent",
                Some(false) => "inconsistent",
                None => "-",
            };
            out.push_str(&format!("fps      {fps}\n"));
            let c = s.counts;
            out.push_str(&format!("findings {} error(s), {} warning(s), {} info\n", c.error, c.warning, c.info));
            out
        }
        Format::Json => {
            let frames: Option<Vec<Value>> = s.frames.as_ref().map(|ps| {
                ps.iter().map(|p| json!({ "period": p.period, "frames": p.frames, "expected": p.expected })).collect()
            });
            let doc = json!({
                "match_id": s.match_id,
                "home": s.home,
                "away": s.away,
                "result": s.result,
                "winner": s.winner,
                "events": s.events,
                "frames": frames,
                "fps_consistent": s.fps_consistent,
                "counts": { "error": s.counts.error, "warning": s.counts.warning, "info": s.counts.info },
            });
            let mut out = serde_json::to_string_pretty(&doc).expect("summary serializes");
            out.push('\n');
            out
        }
    }
}
