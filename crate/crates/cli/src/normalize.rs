use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use cdf_core::bundle::{validate_bundle, BundleManifest, MatchBundle};
use cdf_core::codec::{
    read_document, read_line_stream, write_document, write_record, CdfRecord, DocKind, Document, StreamKind,
    StreamOptions, WriteOptions,
};
use cdf_core::model::{EntityId, EventRecord, MatchMeta, Period, SkeletonFrame, TrackingFrame};
use cdf_core::report::Report;
use cdf_core::representation::{to_actual_sides, Oriented, SideAssignment};

use crate::validate::{check_document, check_stream, Settings};

/// Per-period side table for `--sides actual`.
#[derive(Debug, Clone)]
pub struct Sides {
    home: EntityId,
    periods: HashMap<Period, SideAssignment>,
}

impl Sides {
    pub fn from_meta(meta: &MatchMeta) -> Result<Self> {
        let teams = meta.teams().ok_or_else(|| anyhow!("meta has no teams; cannot convert sides"))?;
        let home = teams.home_id().ok_or_else(|| anyhow!("meta has no home team id"))?.clone();
        let away = teams.away_id().ok_or_else(|| anyhow!("meta has no away team id"))?.clone();
        let mut periods = HashMap::new();
        for s in SideAssignment::from_meta(meta)? {
            s.check_teams(&home, &away)?;
            periods.insert(s.period, s);
        }
        if periods.is_empty() {
            bail!("meta lists no period sides (left_team_id / right_team_id)");
        }
        Ok(Sides { home, periods })
    }

    fn apply<R: Oriented>(&self, record: &R, period: Option<Period>) -> Result<R> {
        let Some(period) = period else { return Ok(record.clone()) };
        let sides = self
            .periods
            .get(&period)
            .ok_or_else(|| anyhow!("meta gives no sides for {period}"))?;
        Ok(to_actual_sides(record, sides, &self.home)?)
    }
}

trait Periodic {
    fn known_period(&self) -> Option<Period>;
}

impl Periodic for EventRecord {
    fn known_period(&self) -> Option<Period> {
        self.period()
    }
}

impl Periodic for TrackingFrame {
    fn known_period(&self) -> Option<Period> {
        self.period.known()
    }
}

impl Periodic for SkeletonFrame {
    fn known_period(&self) -> Option<Period> {
        self.period.known()
    }
}

#[derive(Debug, Clone)]
pub struct Normalizer {
    pub read: Settings,
    pub write: WriteOptions,
    pub sides: Option<Sides>,
    pub force: bool,
}

/// Result of normalizing one input. Output is withheld when validation
/// found errors and `force` is off.
#[derive(Debug)]
pub struct Normalized {
    pub report: Report,
    pub written: bool,
}

impl Normalizer {
    fn blocked(&self, report: &Report) -> bool {
        report.has_errors() && !self.force
    }

    pub fn document(&self, bytes: &[u8], kind: DocKind, sink: &mut dyn Write) -> Result<Normalized> {
        let report = check_document(bytes, kind, &self.read);
        if self.blocked(&report) {
            return Ok(Normalized { report, written: false });
        }
        let (doc, _) = read_document(bytes, kind, self.read.opts.policy);
        let doc = doc.ok_or_else(|| anyhow!("document could not be decoded"))?;
        sink.write_all(&write_document(&doc, &self.write.pretty(true))?)?;
        Ok(Normalized { report, written: true })
    }

    /// Validates the stream, then rewrites it line by line.
    pub fn stream(&self, path: &Path, kind: StreamKind, sink: &mut dyn Write) -> Result<Normalized> {
        let open = || -> Result<BufReader<File>> {
            Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
        };
        let (report, _) = check_stream(open()?, kind, &self.read)?;
        if self.blocked(&report) {
            return Ok(Normalized { report, written: false });
        }
        match kind {
            StreamKind::Event => self.rewrite::<EventRecord>(open()?, sink)?,
            StreamKind::TrackingCom => self.rewrite::<TrackingFrame>(open()?, sink)?,
            StreamKind::TrackingSkeletal => self.rewrite::<SkeletonFrame>(open()?, sink)?,
        }
        Ok(Normalized { report, written: true })
    }

    fn rewrite<T: CdfRecord + Oriented + Periodic>(&self, reader: BufReader<File>, sink: &mut dyn Write) -> Result<()> {
        let opts = StreamOptions { policy: self.read.opts.policy, ..StreamOptions::default() };
        let write = self.write.pretty(false);
        let mut dropped = 0u64;
        for item in read_line_stream::<_, T>(reader, opts) {
            let item = item?;
            let Some(record) = item.record else {
                dropped += 1;
                continue;
            };
            let record = match &self.sides {
                Some(s) => s.apply(&record, record.known_period()).with_context(|| format!("line {}", item.line))?,
                None => record,
            };
            sink.write_all(&write_record(&record, &write)?)?;
        }
        if dropped > 0 {
            log::warn!("{dropped} undecodable line(s) left out");
        }
        sink.flush()?;
        Ok(())
    }

    /// Normalizes every component of a bundle into `out` under the
    /// conventional file names.
    pub fn bundle(&self, manifest: &BundleManifest, out: &Path) -> Result<Normalized> {
        let bundle = MatchBundle::load(manifest, self.read.opts.policy)?;
        let report = validate_bundle(&bundle, &self.read.opts)?;
        if self.blocked(&report) {
            return Ok(Normalized { report, written: false });
        }
        std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
        let name = |key: &str| {
            let file = BundleManifest::CONVENTION.iter().find(|(k, _)| *k == key).expect("conventional key").1;
            out.join(file)
        };
        let docs = [
            ("match_sheet", bundle.match_sheet.clone().map(Document::MatchSheet)),
            ("meta", bundle.meta.clone().map(Document::Meta)),
            ("video", bundle.video_meta.clone().map(Document::VideoMeta)),
        ];
        for (key, doc) in docs {
            if let Some(doc) = doc {
                std::fs::write(name(key), write_document(&doc, &self.write.pretty(true))?)?;
            }
        }
        let mut stream_self = self.clone();
        stream_self.read.meta = bundle.meta.clone();
        stream_self.force = true;
        for (key, path, kind) in [
            ("events", &manifest.events, StreamKind::Event),
            ("tracking", &manifest.tracking, StreamKind::TrackingCom),
            ("skeletal", &manifest.skeletal, StreamKind::TrackingSkeletal),
        ] {
            let Some(path) = path else { continue };
            let target = name(key);
            if target == *path {
                bail!("refusing to overwrite {} in place", path.display());
            }
            let mut sink = std::io::BufWriter::new(File::create(&target).with_context(|| format!("creating {}", target.display()))?);
            stream_self.stream(path, kind, &mut sink)?;
        }
        Ok(Normalized { report, written: true })
    }
}
