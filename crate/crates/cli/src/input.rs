use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use cdf_core::bundle::BundleManifest;
use cdf_core::codec::{DocKind, StreamKind};

/// What a single input holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Doc(DocKind),
    Stream(StreamKind),
}

impl std::str::FromStr for Kind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(d) = s.parse::<DocKind>() {
            return Ok(Kind::Doc(d));
        }
        if let Ok(k) = s.parse::<StreamKind>() {
            return Ok(Kind::Stream(k));
        }
        bail!("unknown kind `{s}` (match_sheet, meta, video_meta, event, tracking_com, tracking_skeletal)")
    }
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Doc(DocKind::MatchSheet) => "match_sheet",
            Kind::Doc(DocKind::Meta) => "meta",
            Kind::Doc(DocKind::VideoMeta) => "video_meta",
            Kind::Stream(StreamKind::Event) => "event",
            Kind::Stream(StreamKind::TrackingCom) => "tracking_com",
            Kind::Stream(StreamKind::TrackingSkeletal) => "tracking_skeletal",
        }
    }

    /// Guesses from a file name such as `events.jsonl` or `match_sheet.json`.
    pub fn from_name(path: &Path) -> Option<Kind> {
        let name = path.file_name()?.to_str()?.to_ascii_lowercase();
        let stream = name.ends_with(".jsonl") || name.ends_with(".ndjson");
        if stream {
            if name.contains("skelet") || name.contains("limb") {
                Some(Kind::Stream(StreamKind::TrackingSkeletal))
            } else if name.contains("track") {
                Some(Kind::Stream(StreamKind::TrackingCom))
            } else if name.contains("event") {
                Some(Kind::Stream(StreamKind::Event))
            } else {
                None
            }
        } else if name.ends_with(".json") {
            if name.contains("sheet") {
                Some(Kind::Doc(DocKind::MatchSheet))
            } else if name.contains("video") {
                Some(Kind::Doc(DocKind::VideoMeta))
            } else if name.contains("meta") {
                Some(Kind::Doc(DocKind::Meta))
            } else {
                None
            }
        } else {
            None
        }
    }
}

#[derive(Debug, Clone)]
pub enum Target {
    Bundle(PathBuf, BundleManifest),
    File(PathBuf, Kind),
}

impl Target {
    pub fn path(&self) -> &Path {
        match self {
            Target::Bundle(p, _) | Target::File(p, _) => p,
        }
    }
}

/// Decides how to treat `path`: directories and `manifest.json` files are
/// bundles, other files need a recognizable name or an explicit kind.
pub fn classify(path: &Path, kind: Option<Kind>) -> Result<Target> {
    if !path.exists() {
        bail!("{}: no such file or directory", path.display());
    }
    let is_manifest = path.file_name().is_some_and(|n| n == "manifest.json");
    if path.is_dir() || (is_manifest && kind.is_none()) {
        return Ok(Target::Bundle(path.to_path_buf(), BundleManifest::locate(path)?));
    }
    match kind.or_else(|| Kind::from_name(path)) {
        Some(k) => Ok(Target::File(path.to_path_buf(), k)),
        None => bail!("{}: cannot tell what this file holds; pass --kind", path.display()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        let k = |s: &str| Kind::from_name(Path::new(s));
        assert_eq!(k("events.jsonl"), Some(Kind::Stream(StreamKind::Event)));
        assert_eq!(k("a/tracking.jsonl"), Some(Kind::Stream(StreamKind::TrackingCom)));
        assert_eq!(k("skeletal.jsonl"), Some(Kind::Stream(StreamKind::TrackingSkeletal)));
        assert_eq!(k("match_sheet.json"), Some(Kind::Doc(DocKind::MatchSheet)));
        assert_eq!(k("video.json"), Some(Kind::Doc(DocKind::VideoMeta)));
        assert_eq!(k("match_7_meta.json"), Some(Kind::Doc(DocKind::Meta)));
        assert_eq!(k("data.json"), None);
    }

    #[test]
    fn kind_names_round_trip() {
        for s in ["match_sheet", "meta", "video_meta", "event", "tracking_com", "tracking_skeletal"] {
            assert_eq!(s.parse::<Kind>().unwrap().name(), s);
        }
        assert!("frames".parse::<Kind>().is_err());
    }
}
