//! Whole-match validation across the files of a bundle.
//!
//! Streams are read once each. Tracking frames are reduced to per-period
//! runs of frame ids ([`TrackingSummary`]) so that event frame references
//! can be resolved without retaining frames.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Cursor};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::codec::{decode_line, read_line_stream, LiveLineBuffer, StreamItem, StreamKind, StreamOptions};
use crate::codec::{decode_document, CdfRecord, MissingPolicy};
use crate::error::{CdfError, Result};
use crate::model::{
    CdfTimestamp, EntityId, EventRecord, EventType, Vocabulary, Field, MatchMeta, MatchSheet, MatchStatus, Period, Score, SkeletonFrame,
    Teams, TrackingFrame, VideoMeta,
};
use crate::report::{Component, Report};
use crate::rules::catalog::xb;
use crate::rules::{self, FrameOrderState, MetaContext};

/// Tolerance around a period's whistle window for event times, seconds.
pub const WINDOW_MARGIN_SECS: f64 = 5.0;
/// Allowed relative deviation of a period's frame count from duration × fps.
pub const FRAME_BUDGET_TOLERANCE: f64 = 0.01;

/// Opens a fresh reader over a stream that is produced on demand.
pub type ReaderFactory = Arc<dyn Fn() -> Box<dyn BufRead + Send> + Send + Sync>;

/// Where a stream's bytes come from.
#[derive(Clone)]
pub enum StreamSource {
    Path(PathBuf),
    Bytes(Vec<u8>),
    /// Generated lines, never held in memory as a whole.
    Generated(ReaderFactory),
}

impl fmt::Debug for StreamSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamSource::Path(p) => f.debug_tuple("Path").field(p).finish(),
            StreamSource::Bytes(b) => write!(f, "Bytes({} bytes)", b.len()),
            StreamSource::Generated(_) => f.write_str("Generated"),
        }
    }
}

impl StreamSource {
    pub fn open(&self) -> Result<Box<dyn BufRead + Send + '_>> {
        Ok(match self {
            StreamSource::Path(p) => Box::new(BufReader::new(File::open(p).map_err(|e| CdfError::io(p, e))?)),
            StreamSource::Bytes(b) => Box::new(Cursor::new(b.as_slice())),
            StreamSource::Generated(make) => make(),
        })
    }
}

/// The files of one match. Documents are decoded up front; streams are
/// read during validation.
#[derive(Debug, Clone, Default)]
pub struct MatchBundle {
    pub match_sheet: Option<MatchSheet>,
    pub meta: Option<MatchMeta>,
    pub video_meta: Option<VideoMeta>,
    pub events: Option<StreamSource>,
    pub tracking: Option<StreamSource>,
    pub skeletal: Option<StreamSource>,
    /// Decode findings of the documents.
    pub load_report: Report,
}

/// File paths of a bundle's components.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleManifest {
    pub match_sheet: Option<PathBuf>,
    pub meta: Option<PathBuf>,
    #[serde(alias = "video_meta")]
    pub video: Option<PathBuf>,
    pub events: Option<PathBuf>,
    pub tracking: Option<PathBuf>,
    pub skeletal: Option<PathBuf>,
}

impl BundleManifest {
    /// File names looked for by [`BundleManifest::discover`].
    pub const CONVENTION: [(&'static str, &'static str); 6] = [
        ("match_sheet", "match_sheet.json"),
        ("meta", "meta.json"),
        ("video", "video.json"),
        ("events", "events.jsonl"),
        ("tracking", "tracking.jsonl"),
        ("skeletal", "skeletal.jsonl"),
    ];

    /// Parses a manifest; relative paths resolve against `base`.
    pub fn parse(bytes: &[u8], base: &Path) -> Result<Self> {
        let mut m: BundleManifest =
            serde_json::from_slice(bytes).map_err(|e| CdfError::Manifest(e.to_string()))?;
        for slot in m.slots_mut() {
            if let Some(p) = slot.as_mut().filter(|p| p.is_relative()) {
                *p = base.join(&*p);
            }
        }
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| CdfError::io(path, e))?;
        BundleManifest::parse(&bytes, path.parent().unwrap_or(Path::new(".")))
    }

    /// Components found under the conventional names in `dir`.
    pub fn discover(dir: &Path) -> Self {
        let find = |name: &str| Some(dir.join(name)).filter(|p| p.is_file());
        BundleManifest {
            match_sheet: find("match_sheet.json"),
            meta: find("meta.json"),
            video: find("video.json"),
            events: find("events.jsonl"),
            tracking: find("tracking.jsonl"),
            skeletal: find("skeletal.jsonl"),
        }
    }

    /// A manifest file, or directory discovery when `path` is a directory.
    pub fn locate(path: &Path) -> Result<Self> {
        if path.is_dir() {
            let manifest = path.join("manifest.json");
            if manifest.is_file() {
                BundleManifest::read(&manifest)
            } else {
                Ok(BundleManifest::discover(path))
            }
        } else {
            BundleManifest::read(path)
        }
    }

    fn slots_mut(&mut self) -> [&mut Option<PathBuf>; 6] {
        [
            &mut self.match_sheet,
            &mut self.meta,
            &mut self.video,
            &mut self.events,
            &mut self.tracking,
            &mut self.skeletal,
        ]
    }
}

fn load_doc<T: CdfRecord>(path: &Option<PathBuf>, policy: MissingPolicy, report: &mut Report) -> Result<Option<T>> {
    let Some(p) = path else { return Ok(None) };
    let bytes = std::fs::read(p).map_err(|e| CdfError::io(p, e))?;
    let (doc, r) = decode_document::<T>(&bytes, policy);
    report.absorb(r);
    Ok(doc)
}

impl MatchBundle {
    /// Decodes the documents named by `manifest`. Only I/O failures are
    /// errors; undecodable documents are left out and reported.
    pub fn load(manifest: &BundleManifest, policy: MissingPolicy) -> Result<Self> {
        let mut load_report = Report::new(Component::Bundle);
        let stream = |p: &Option<PathBuf>| -> Result<Option<StreamSource>> {
            match p {
                Some(p) if !p.is_file() => Err(CdfError::io(p, std::io::Error::from(std::io::ErrorKind::NotFound))),
                Some(p) => Ok(Some(StreamSource::Path(p.clone()))),
                None => Ok(None),
            }
        };
        Ok(MatchBundle {
            match_sheet: load_doc(&manifest.match_sheet, policy, &mut load_report)?,
            meta: load_doc(&manifest.meta, policy, &mut load_report)?,
            video_meta: load_doc(&manifest.video, policy, &mut load_report)?,
            events: stream(&manifest.events)?,
            tracking: stream(&manifest.tracking)?,
            skeletal: stream(&manifest.skeletal)?,
            load_report,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BundleOptions {
    pub policy: MissingPolicy,
    /// Findings kept per rule; the rest are only counted.
    pub cap: Option<usize>,
    /// Streams validated at once.
    pub jobs: usize,
}

impl Default for BundleOptions {
    fn default() -> Self {
        BundleOptions { policy: MissingPolicy::default(), cap: Some(1000), jobs: 3 }
    }
}

/// Frame ids seen in one period, as sorted disjoint runs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PeriodFrames {
    runs: Vec<(i64, i64)>,
    count: u64,
}

impl PeriodFrames {
    pub fn observe(&mut self, id: i64) {
        self.count += 1;
        match self.runs.last_mut() {
            Some(last) if id == last.1 + 1 => last.1 = id,
            Some(last) if id > last.1 + 1 => self.runs.push((id, id)),
            None => self.runs.push((id, id)),
            Some(_) => {
                // Out of order; rules report it, the summary stays exact.
                if !self.contains(id) {
                    let at = self.runs.partition_point(|r| r.1 < id);
                    self.runs.insert(at, (id, id));
                    self.merge();
                }
            }
        }
    }

    fn merge(&mut self) {
        let mut merged: Vec<(i64, i64)> = Vec::with_capacity(self.runs.len());
        for r in self.runs.drain(..) {
            match merged.last_mut() {
                Some(last) if r.0 <= last.1 + 1 => last.1 = last.1.max(r.1),
                _ => merged.push(r),
            }
        }
        self.runs = merged;
    }

    pub fn contains(&self, id: i64) -> bool {
        let at = self.runs.partition_point(|r| r.1 < id);
        self.runs.get(at).is_some_and(|r| r.0 <= id)
    }

    /// Frames observed, including repeats.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn min(&self) -> Option<i64> {
        self.runs.first().map(|r| r.0)
    }

    pub fn max(&self) -> Option<i64> {
        self.runs.last().map(|r| r.1)
    }

    pub fn is_contiguous(&self) -> bool {
        self.runs.len() <= 1
    }
}

/// Per-period frame id summaries of a tracking stream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrackingSummary {
    pub periods: BTreeMap<Period, PeriodFrames>,
}

impl TrackingSummary {
    pub fn observe(&mut self, period: Period, frame_id: i64) {
        self.periods.entry(period).or_default().observe(frame_id);
    }

    pub fn contains(&self, period: Period, frame_id: i64) -> bool {
        self.periods.get(&period).is_some_and(|p| p.contains(frame_id))
    }

    pub fn from_frames<'a>(frames: impl IntoIterator<Item = &'a TrackingFrame>) -> Self {
        let mut s = TrackingSummary::default();
        for f in frames {
            if let (Some(p), Some(id)) = (f.period.known(), f.frame_id.get()) {
                s.observe(p, id);
            }
        }
        s
    }
}

/// What the sync checks need from one event.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLink {
    pub line: u64,
    pub period: Option<Period>,
    pub time: Option<CdfTimestamp>,
    pub is_synced: Option<bool>,
    /// `(key, frame id)` for `frame_id_1` and `frame_id_2`.
    pub frames: Vec<(&'static str, i64)>,
}

impl EventLink {
    pub fn from_record(line: u64, e: &EventRecord) -> Self {
        let mut frames = Vec::new();
        if let Some(t) = e.tracking.value() {
            for (key, f) in [("frame_id_1", &t.frame_id_1), ("frame_id_2", &t.frame_id_2)] {
                if let Some(id) = f.get() {
                    frames.push((key, id));
                }
            }
        }
        EventLink {
            line,
            period: e.period(),
            time: e.body().and_then(|b| b.time.value().cloned()),
            is_synced: e.is_synced(),
            frames,
        }
    }
}

/// Recounts the final result from the goal list: each goal counts for its
/// scorer's team, or for the other team when it is an own goal.
pub fn reconcile_result(sheet: &MatchSheet) -> Report {
    let mut report = Report::new(Component::Bundle);
    let r = &mut report;
    let (Some(teams), Some(goals)) = (sheet.teams(), sheet.events.value().and_then(|e| e.goals.value())) else {
        return report;
    };
    let (Some(home), Some(away)) = (teams.home_id(), teams.away_id()) else { return report };
    let Some(final_pair) = sheet.result().and_then(|res| rules::score_pair(&res.final_result)) else {
        return report;
    };
    let roster: HashMap<&str, &str> = teams
        .players()
        .filter_map(|p| Some((p.id.id_str()?, p.team_id.id_str()?)))
        .collect();
    let mut tally = (0_i64, 0_i64);
    for (i, g) in goals.iter().enumerate() {
        let Some(scorer) = g.goal_player_id.id_str() else { continue };
        let Some(team) = roster.get(scorer).filter(|t| **t == home.as_str() || **t == away.as_str()) else {
            r.push(&xb::GOAL_UNATTRIBUTED, format!("/match_sheet/events/goals/{i}/goal_player_id"), format!("`{scorer}` is not on either roster"));
            continue;
        };
        let for_home = (*team == home.as_str()) != g.is_own_goal.is_set();
        if for_home {
            tally.0 += 1;
        } else {
            tally.1 += 1;
        }
    }
    if tally != final_pair {
        r.push(
            &xb::GOAL_TALLY,
            "/match_sheet/match/result/final",
            format!("goals add up to {}-{}, final result is {}-{}", tally.0, tally.1, final_pair.0, final_pair.1),
        );
    }
    report
}

/// Frame references of events against the tracking stream, and event
/// times against their period's whistle window.
pub fn check_sync_references(events: &[EventLink], tracking: Option<&TrackingSummary>, meta: &MatchMeta) -> Report {
    let mut report = Report::new(Component::Bundle);
    let mut windows: HashMap<Period, Option<(CdfTimestamp, CdfTimestamp)>> = HashMap::new();
    let mut unsynced = 0_u64;
    for e in events {
        let mut r = Report::for_line(Component::Events, e.line);
        if e.is_synced == Some(false) {
            unsynced += 1;
            if !e.frames.is_empty() {
                r.push(&xb::UNSYNCED_FRAME_REF, "/tracking", "is_synced is 0 but frames are referenced");
            }
        }
        if let (Some(t), Some(p)) = (tracking, e.period) {
            for (key, id) in &e.frames {
                if *id >= 0 && !t.contains(p, *id) {
                    r.push(&xb::DANGLING_FRAME, format!("/tracking/{key}"), format!("frame {id} is not in the {p} tracking"));
                }
            }
        }
        if let (Some(p), Some(time)) = (e.period, &e.time) {
            if let Some((start, end)) = windows.entry(p).or_insert_with(|| meta.period_window(p)) {
                let before = start.seconds_since(time);
                let after = time.seconds_since(end);
                if before > WINDOW_MARGIN_SECS || after > WINDOW_MARGIN_SECS {
                    r.push(
                        &xb::EVENT_WINDOW,
                        "/event/time",
                        format!("{} is outside {p} ({} to {})", time.canonical(), start.canonical(), end.canonical()),
                    );
                }
            }
        }
        report.absorb(r);
    }
    if tracking.is_some() && unsynced > 0 {
        report.push(&xb::UNSYNCED, "/events", format!("{unsynced} event(s) have is_synced = 0"));
    }
    report
}

/// Frame count of each period against its whistle duration times the
/// tracking frame rate.
pub fn check_frame_budget(tracking: &TrackingSummary, meta: &MatchMeta) -> Report {
    let mut report = Report::new(Component::Bundle);
    for (period, frames) in &tracking.periods {
        let path = format!("/tracking/{}", period.name(crate::model::PeriodSpelling::Stream));
        let (Some((start, end)), Some(fps)) = (meta.period_window(*period), meta.fps_tracking().filter(|f| *f > 0)) else {
            report.push(&xb::FRAME_BUDGET_SKIPPED, path, "whistle window or fps_tracking unknown");
            continue;
        };
        let expected = end.seconds_since(&start) * fps as f64;
        if expected <= 0.0 {
            report.push(&xb::FRAME_BUDGET_SKIPPED, path, "end whistle is not after start whistle");
            continue;
        }
        let observed = frames.count() as f64;
        if ((observed - expected) / expected).abs() > FRAME_BUDGET_TOLERANCE {
            report.push(
                &xb::FRAME_BUDGET,
                path,
                format!("{period}: expected {} frames, observed {}", expected.round(), frames.count()),
            );
        }
    }
    report
}

fn same_score(a: &Field<Score>, b: &Field<Score>) -> bool {
    match (a.value(), b.value()) {
        (Some(x), Some(y)) => x.pair() == y.pair() && x.winning_team_id == y.winning_team_id,
        (None, None) => true,
        _ => a.is_absent() || b.is_absent(),
    }
}

fn compare_documents(sheet: &MatchSheet, meta: &MatchMeta, r: &mut Report) {
    if let (Some(s), Some(m)) = (sheet.teams(), meta.teams()) {
        compare_teams(s, m, r);
    }
    let sheet_result = sheet.result();
    let meta_result = meta.match_info.value().and_then(|m| m.result.value());
    if let (Some(s), Some(m)) = (sheet_result, meta_result) {
        for (name, a, b) in [("final", &s.final_result, &m.final_result), ("shootout", &s.shootout, &m.shootout)] {
            if !same_score(a, b) {
                let show = |f: &Field<Score>| f.value().and_then(Score::pair).map_or("?".to_owned(), |(h, a)| format!("{h}-{a}"));
                r.push(&xb::RESULT, format!("/meta/match/result/{name}"), format!("match sheet {} vs meta {}", show(a), show(b)));
            }
        }
    }
    if let (Some(s), Some(m)) = (sheet.status(), meta.status()) {
        let flags = |st: &MatchStatus| [st.is_neutral.truth(), st.has_extratime.truth(), st.has_shootout.truth()];
        for (k, (a, b)) in ["is_neutral", "has_extratime", "has_shootout"].iter().zip(flags(s).into_iter().zip(flags(m))) {
            if let (Some(a), Some(b)) = (a, b) {
                if a != b {
                    r.push(&xb::STATUS, format!("/meta/match/status/{k}"), format!("match sheet {} vs meta {}", u8::from(a), u8::from(b)));
                }
            }
        }
    }
}

fn compare_teams(sheet: &Teams, meta: &Teams, r: &mut Report) {
    for (side, s, m) in [("home", &sheet.home, &meta.home), ("away", &sheet.away, &meta.away)] {
        let (Some(s), Some(m)) = (s.value(), m.value()) else { continue };
        if let (Some(a), Some(b)) = (s.id.id_str(), m.id.id_str()) {
            if a != b {
                r.push(&xb::TEAMS, format!("/meta/teams/{side}/id"), format!("match sheet `{a}` vs meta `{b}`"));
            }
        }
        let (Some(sp), Some(mp)) = (s.players.value(), m.players.value()) else { continue };
        let ids = |ps: &[crate::model::Player]| -> BTreeSet<String> { ps.iter().filter_map(|p| p.id.id_str().map(str::to_owned)).collect() };
        let (a, b) = (ids(sp), ids(mp));
        if a != b {
            let only_sheet: Vec<&str> = a.difference(&b).map(String::as_str).collect();
            let only_meta: Vec<&str> = b.difference(&a).map(String::as_str).collect();
            r.push(
                &xb::ROSTER,
                format!("/meta/teams/{side}/players"),
                format!("only in match sheet: [{}]; only in meta: [{}]", only_sheet.join(", "), only_meta.join(", ")),
            );
        }
    }
}

/// What one stream contributes to bundle validation.
#[derive(Debug, Clone)]
pub struct StreamOutcome {
    pub kind: StreamKind,
    pub report: Report,
    /// Known periods the stream's records use.
    pub periods: BTreeSet<Period>,
    /// Frame ids seen, for tracking streams.
    pub summary: TrackingSummary,
    /// Frame references, for event streams.
    pub links: Vec<EventLink>,
    /// Records per event type, every known type included.
    pub event_types: BTreeMap<String, u64>,
    pub records: u64,
}

/// Incremental validation of one JSON Lines stream. Feed lines from a
/// reader or from live chunks; both give the same report for the same bytes.
pub struct StreamCheck {
    kind: StreamKind,
    policy: MissingPolicy,
    ctx: Option<MetaContext>,
    /// Whether the bundle has tracking data; `None` when validating a
    /// stream on its own.
    pub tracking_present: Option<bool>,
    state: FrameOrderState,
    outcome: StreamOutcome,
    live: LiveLineBuffer,
}

impl StreamCheck {
    pub fn new(kind: StreamKind, meta: Option<&MatchMeta>, opts: &BundleOptions) -> Self {
        StreamCheck::with_context(kind, meta.map(MetaContext::new), opts)
    }

    fn with_context(kind: StreamKind, ctx: Option<MetaContext>, opts: &BundleOptions) -> Self {
        let mut report = Report::new(kind.component());
        if let Some(cap) = opts.cap {
            report = report.with_cap(cap);
        }
        StreamCheck {
            kind,
            policy: opts.policy,
            ctx,
            tracking_present: None,
            state: FrameOrderState::new(),
            outcome: StreamOutcome {
                kind,
                report,
                periods: BTreeSet::new(),
                summary: TrackingSummary::default(),
                links: Vec::new(),
                event_types: if kind == StreamKind::Event {
                    EventType::ALL.iter().map(|t| (t.as_str().to_owned(), 0)).collect()
                } else {
                    BTreeMap::new()
                },
                records: 0,
            },
            live: LiveLineBuffer::new(),
        }
    }

    /// Checks one line (without its terminator).
    pub fn line(&mut self, bytes: &[u8], number: u64, offset: u64) {
        match self.kind {
            StreamKind::Event => {
                let item = decode_line::<EventRecord>(bytes, number, offset, self.policy);
                self.event(item);
            }
            StreamKind::TrackingCom => {
                let item = decode_line::<TrackingFrame>(bytes, number, offset, self.policy);
                self.tracking(item);
            }
            StreamKind::TrackingSkeletal => {
                let item = decode_line::<SkeletonFrame>(bytes, number, offset, self.policy);
                self.skeletal(item);
            }
        }
    }

    /// Reads a whole stream.
    pub fn read(&mut self, reader: impl BufRead) -> Result<()> {
        let opts = StreamOptions { policy: self.policy, ..StreamOptions::default() };
        match self.kind {
            StreamKind::Event => {
                for item in read_line_stream::<_, EventRecord>(reader, opts) {
                    self.event(item?);
                }
            }
            StreamKind::TrackingCom => {
                for item in read_line_stream::<_, TrackingFrame>(reader, opts) {
                    self.tracking(item?);
                }
            }
            StreamKind::TrackingSkeletal => {
                for item in read_line_stream::<_, SkeletonFrame>(reader, opts) {
                    self.skeletal(item?);
                }
            }
        }
        Ok(())
    }

    /// Feeds an arbitrary chunk of a live stream. Incomplete trailing
    /// lines wait for the next chunk.
    pub fn push(&mut self, chunk: &[u8]) {
        let mut live = std::mem::take(&mut self.live);
        live.push(chunk, |line, n, off| self.line(line, n, off));
        self.live = live;
    }

    pub fn records(&self) -> u64 {
        self.outcome.records
    }

    /// Ends the stream; an unterminated tail counts as a final line.
    pub fn finish(mut self) -> StreamOutcome {
        let live = std::mem::take(&mut self.live);
        live.finish(|line, n, off| self.line(line, n, off));
        self.outcome
    }

    fn event(&mut self, item: StreamItem<EventRecord>) {
        let mut r = item.report;
        if let Some(e) = &item.record {
            self.outcome.records += 1;
            rules::check_event_into(e, self.ctx.as_ref(), &mut r);
            if let Some(t) = e.body().and_then(|b| b.event_type.value()) {
                *self.outcome.event_types.entry(t.text().to_owned()).or_default() += 1;
            }
            if let Some(p) = e.body().and_then(|b| b.period.known()) {
                self.outcome.periods.insert(p);
            }
            if e.is_synced() == Some(true) && self.tracking_present == Some(false) {
                r.push(&xb::SYNCED_WITHOUT_TRACKING, "/meta/is_synced", "no tracking component in the bundle");
            }
            self.outcome.links.push(EventLink::from_record(item.line, e));
        }
        self.outcome.report.absorb(r);
    }

    fn tracking(&mut self, item: StreamItem<TrackingFrame>) {
        let mut r = item.report;
        if let Some(f) = &item.record {
            self.outcome.records += 1;
            rules::check_tracking_into(f, self.ctx.as_ref(), &mut self.state, &mut r);
            if let Some(p) = f.period.known() {
                self.outcome.periods.insert(p);
                if let Some(id) = f.frame_id.get() {
                    self.outcome.summary.observe(p, id);
                }
            }
        }
        self.outcome.report.absorb(r);
    }

    fn skeletal(&mut self, item: StreamItem<SkeletonFrame>) {
        let mut r = item.report;
        if let Some(f) = &item.record {
            self.outcome.records += 1;
            rules::check_skeleton_into(f, self.ctx.as_ref(), &mut self.state, &mut r);
            if let Some(p) = f.period.known() {
                self.outcome.periods.insert(p);
            }
        }
        self.outcome.report.absorb(r);
    }
}

/// A bundle report plus what was learned from the streams on the way.
#[derive(Debug, Clone)]
pub struct BundleValidation {
    pub report: Report,
    pub tracking: Option<TrackingSummary>,
    pub event_types: Option<BTreeMap<String, u64>>,
    /// Decoded records per stream present.
    pub records: Vec<(StreamKind, u64)>,
}

/// Validates every component and their agreement. Never fails on content;
/// errors are I/O problems reading a stream.
pub fn validate_bundle(bundle: &MatchBundle, opts: &BundleOptions) -> Result<Report> {
    validate_bundle_detailed(bundle, opts).map(|v| v.report)
}

/// [`validate_bundle`], keeping the stream summaries.
pub fn validate_bundle_detailed(bundle: &MatchBundle, opts: &BundleOptions) -> Result<BundleValidation> {
    let mut report = Report::new(Component::Bundle);
    if let Some(cap) = opts.cap {
        report = report.with_cap(cap);
    }
    report.absorb(bundle.load_report.clone());
    let meta = bundle.meta.as_ref();
    let has_streams = bundle.events.is_some() || bundle.tracking.is_some() || bundle.skeletal.is_some();

    match &bundle.match_sheet {
        None => report.push(&xb::MATCH_SHEET_MISSING, "/match_sheet", "a bundle must include the match sheet"),
        Some(sheet) => {
            report.absorb(rules::validate_match_sheet(sheet));
            report.absorb(reconcile_result(sheet));
        }
    }
    if has_streams && meta.is_none() {
        report.push(&xb::AVAILABILITY, "/meta", "event or tracking data requires the match meta");
    }
    if let Some(m) = meta {
        report.absorb(rules::validate_meta(m));
    }
    if let Some(v) = &bundle.video_meta {
        report.absorb(rules::validate_video_meta(v));
    }

    let ids: Vec<(&str, Option<&EntityId>)> = vec![
        ("match_sheet", bundle.match_sheet.as_ref().and_then(MatchSheet::match_id)),
        ("meta", meta.and_then(MatchMeta::match_id)),
        ("video", bundle.video_meta.as_ref().and_then(|v| v.match_id.value())),
    ];
    let mut reference: Option<(&str, &EntityId)> = None;
    for (name, id) in ids {
        let Some(id) = id else { continue };
        match reference {
            None => reference = Some((name, id)),
            Some((first, expected)) if expected != id => {
                report.push(&xb::MATCH_ID, format!("/{name}/match/id"), format!("`{id}` but {first} has `{expected}`"));
            }
            _ => {}
        }
    }
    if let (Some(s), Some(m)) = (&bundle.match_sheet, meta) {
        compare_documents(s, m, &mut report);
    }

    if bundle.skeletal.is_some() && meta.is_some_and(|m| !m.limb_tracking()) {
        report.push(&xb::SKELETAL_UNDECLARED, "/meta/meta/limb_tracking", "skeletal stream present but limb_tracking is not 1");
    }

    let ctx = meta.map(MetaContext::new);
    let tracking_present = bundle.tracking.is_some();
    let tasks: Vec<(StreamKind, &StreamSource)> = [
        (StreamKind::Event, &bundle.events),
        (StreamKind::TrackingCom, &bundle.tracking),
        (StreamKind::TrackingSkeletal, &bundle.skeletal),
    ]
    .into_iter()
    .filter_map(|(k, s)| Some((k, s.as_ref()?)))
    .collect();
    let run = |(kind, src): &(StreamKind, &StreamSource)| -> Result<StreamOutcome> {
        let mut check = StreamCheck::with_context(*kind, ctx.clone(), opts);
        check.tracking_present = Some(tracking_present);
        check.read(src.open()?)?;
        Ok(check.finish())
    };
    let mut outcomes = Vec::with_capacity(tasks.len());
    for group in tasks.chunks(opts.jobs.max(1)) {
        if group.len() == 1 {
            outcomes.push(run(&group[0])?);
            continue;
        }
        let results: Vec<Result<StreamOutcome>> = std::thread::scope(|scope| {
            let handles: Vec<_> = group.iter().map(|t| scope.spawn(|| run(t))).collect();
            handles.into_iter().map(|h| h.join().expect("stream worker panicked")).collect()
        });
        for r in results {
            outcomes.push(r?);
        }
    }

    let declared = meta.map(MatchMeta::played_periods).unwrap_or_default();
    let mut links = Vec::new();
    let mut summary = None;
    let mut event_types = None;
    let mut records = Vec::new();
    for outcome in outcomes {
        records.push((outcome.kind, outcome.records));
        let component = outcome.kind.component();
        let path = format!("/{}", component.as_str());
        for period in &outcome.periods {
            if !declared.is_empty() && !declared.contains(period) {
                report.push(&xb::PERIOD_UNDECLARED, &path, format!("{period} is not in the meta's periods"));
            }
            if meta.is_some_and(|m| m.period_window(*period).is_none()) {
                report.push(&xb::PERIOD_WHISTLES, &path, format!("no start and end whistles for {period}"));
            }
        }
        report.absorb(outcome.report);
        match outcome.kind {
            StreamKind::Event => {
                links = outcome.links;
                event_types = Some(outcome.event_types);
            }
            StreamKind::TrackingCom => summary = Some(outcome.summary),
            StreamKind::TrackingSkeletal => {}
        }
    }

    if let Some(m) = meta {
        if bundle.events.is_some() {
            report.absorb(check_sync_references(&links, summary.as_ref(), m));
        }
        if let Some(s) = &summary {
            report.absorb(check_frame_budget(s, m));
        }
    }
    report.sort();
    Ok(BundleValidation { report, tracking: summary, event_types, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_frames_runs() {
        let mut p = PeriodFrames::default();
        for id in [0, 1, 2, 5, 6, 3] {
            p.observe(id);
        }
        assert!(p.contains(0) && p.contains(3) && p.contains(6));
        assert!(!p.contains(4) && !p.contains(7) && !p.contains(-1));
        assert_eq!((p.min(), p.max(), p.count()), (Some(0), Some(6), 6));
        assert!(!p.is_contiguous());
        p.observe(4);
        assert!(p.is_contiguous());
    }

    #[test]
    fn manifest_paths_resolve() {
        let m = BundleManifest::parse(br#"{"match_sheet": "ms.json", "events": "/abs/e.jsonl"}"#, Path::new("/data")).unwrap();
        assert_eq!(m.match_sheet, Some(PathBuf::from("/data/ms.json")));
        assert_eq!(m.events, Some(PathBuf::from("/abs/e.jsonl")));
        assert!(matches!(BundleManifest::parse(br#"{"matchsheet": "x"}"#, Path::new(".")), Err(CdfError::Manifest(_))));
    }

    #[test]
    fn empty_bundle_lacks_match_sheet() {
        let r = validate_bundle(&MatchBundle::default(), &BundleOptions::default()).unwrap();
        assert!(r.has_rule("XB-001"));
        assert!(!r.has_rule("XB-002"));
    }

    #[test]
    fn live_chunks_match_batch() {
        let text = b"{\"match\":{\"id\":\"m\"},\"event\":{\"id\":\"e1\"}}\n{broken\n\n{\"event\":{}}";
        let opts = BundleOptions::default();
        let mut batch = StreamCheck::new(StreamKind::Event, None, &opts);
        batch.read(&text[..]).unwrap();
        let batch = batch.finish();
        for size in [1, 2, 7, 64] {
            let mut live = StreamCheck::new(StreamKind::Event, None, &opts);
            for chunk in text.chunks(size) {
                live.push(chunk);
            }
            let live = live.finish();
            assert_eq!(live.report, batch.report, "chunk size {size}");
            assert_eq!(live.records, batch.records);
        }
        assert_eq!(batch.records, 2);
    }
}
