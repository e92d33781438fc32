use std::collections::{BTreeSet, HashMap};

use crate::geometry::Interval;
use crate::model::{MatchMeta, Period};
use crate::report::{Report, Rule, Severity};
use crate::representation::coordinate_domain;
use crate::skeleton::{self, SkeletonHierarchy};

/// Distance beyond each pitch edge tolerated before a bounds warning.
pub const BOUNDS_MARGIN: f64 = 5.0;

/// What stream validators need from the match meta, computed once.
#[derive(Debug, Clone, Default)]
pub struct MetaContext {
    pub match_id: Option<String>,
    pub home_id: Option<String>,
    pub away_id: Option<String>,
    /// Player id to team id, when both rosters are listed.
    pub roster: Option<HashMap<String, String>>,
    /// Pitch domain widened by [`BOUNDS_MARGIN`]; `None` when unknown.
    pub bounds: Option<(Interval<f64>, Interval<f64>)>,
    pub hierarchy: Option<SkeletonHierarchy>,
    pub periods: Vec<Period>,
    /// Whether event ids share the match data id space.
    pub event_ids_aligned: bool,
    pub tracking_ids_aligned: bool,
}

impl MetaContext {
    pub fn new(meta: &MatchMeta) -> Self {
        let teams = meta.teams();
        let roster = teams.and_then(|t| {
            let both = t.home.value()?.players.value().is_some() && t.away.value()?.players.value().is_some();
            both.then(|| {
                t.players()
                    .filter_map(|p| Some((p.id.id_str()?.to_owned(), p.team_id.id_str()?.to_owned())))
                    .collect()
            })
        });
        let bounds = coordinate_domain(&meta.pitch()).map(|(x, y)| (x.widen(BOUNDS_MARGIN), y.widen(BOUNDS_MARGIN)));
        let hierarchy = meta
            .info()
            .filter(|_| meta.limb_tracking())
            .and_then(|i| i.limb_nodes.value())
            .and_then(|raw| {
                let (h, report) = skeleton::validate_hierarchy(raw);
                if report.has_errors() {
                    None
                } else {
                    h
                }
            });
        let ids = meta.id_space();
        MetaContext {
            match_id: meta.match_id().map(|i| i.to_string()),
            home_id: teams.and_then(|t| t.home_id()).map(|i| i.to_string()),
            away_id: teams.and_then(|t| t.away_id()).map(|i| i.to_string()),
            roster,
            bounds,
            hierarchy,
            periods: meta.played_periods(),
            event_ids_aligned: ids.is_none_or(|s| s.aligned(&s.event)),
            tracking_ids_aligned: ids.is_none_or(|s| s.aligned(&s.tracking)),
        }
    }

    pub fn is_team(&self, id: &str) -> bool {
        self.home_id.as_deref() == Some(id) || self.away_id.as_deref() == Some(id)
    }

    pub fn knows_teams(&self) -> bool {
        self.home_id.is_some() && self.away_id.is_some()
    }

    pub fn in_bounds(&self, x: f64, y: f64) -> bool {
        self.bounds.is_none_or(|(bx, by)| bx.contains(x) && by.contains(y))
    }

    pub fn limb_names(&self) -> Option<BTreeSet<&str>> {
        self.hierarchy.as_ref().map(|h| h.names().collect())
    }

    pub(crate) fn push_ref(&self, report: &mut Report, rule: &Rule, aligned: bool, path: impl Into<String>, msg: impl Into<String>) {
        let severity = if aligned { rule.severity } else { Severity::Warning };
        report.push_as(rule, severity, path, msg);
    }
}

/// Rule ids used by [`FrameOrderState`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct OrderRules {
    pub start: &'static Rule,
    pub order: &'static Rule,
    pub gap: &'static Rule,
    pub regression: &'static Rule,
}

/// Frame ordering across one stream: every period starts at frame 0 and
/// frame ids strictly increase within a period.
#[derive(Debug, Clone, Default)]
pub struct FrameOrderState {
    current: Option<(Period, i64)>,
    finished: BTreeSet<Period>,
    pub(crate) noted_possession: bool,
    pub(crate) noted_hierarchy: bool,
}

impl FrameOrderState {
    pub fn new() -> Self {
        Self::default()
    }

    /// The period and frame id of the last frame observed.
    pub fn last(&self) -> Option<(Period, i64)> {
        self.current
    }

    pub(crate) fn observe(&mut self, period: Period, frame_id: i64, rules: OrderRules, report: &mut Report) {
        match self.current {
            Some((p, prev)) if p == period => {
                if frame_id <= prev {
                    report.push(rules.order, "/frame_id", format!("frame {frame_id} follows frame {prev} in {period}"));
                    return;
                } else if frame_id > prev + 1 {
                    report.push(rules.gap, "/frame_id", format!("frame {frame_id} follows frame {prev} in {period}"));
                }
            }
            current => {
                let regressed = self.finished.contains(&period) || current.is_some_and(|(p, _)| period < p);
                if let Some((p, _)) = current {
                    self.finished.insert(p);
                }
                if regressed {
                    report.push(rules.regression, "/period", format!("{period} resumes after a later period"));
                }
                if frame_id != 0 {
                    report.push(rules.start, "/frame_id", format!("{period} starts at frame {frame_id}, must start at 0"));
                }
            }
        }
        self.current = Some((period, frame_id));
    }
}
