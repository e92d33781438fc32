use serde_json::Value;

use super::{CdfTimestamp, Code, DataPerspective, EntityId, Extras, Field, Flag, Period};
use super::{MatchStatus, PitchGeometry, Score, SourceType, Teams, TrackingSystemType, Whistle};

/// Match context and provenance: competition, schedule, periods, rosters,
/// pitch, and how and by whom the data was collected.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchMeta {
    pub competition: Field<Competition>,
    pub season: Field<Season>,
    pub match_info: Field<MetaMatch>,
    pub teams: Field<Teams>,
    pub stadium: Field<Stadium>,
    pub meta: Field<MetaInfo>,
    pub periods: Field<Vec<PeriodInfo>>,
    pub extras: Extras,
}

impl MatchMeta {
    pub fn match_id(&self) -> Option<&EntityId> {
        self.match_info.value().and_then(|m| m.id.value())
    }

    pub fn status(&self) -> Option<&MatchStatus> {
        self.match_info.value().and_then(|m| m.status.value())
    }

    pub fn teams(&self) -> Option<&Teams> {
        self.teams.value()
    }

    pub fn info(&self) -> Option<&MetaInfo> {
        self.meta.value()
    }

    pub fn whistles(&self) -> &[Whistle] {
        self.match_info
            .value()
            .and_then(|m| m.whistles.value())
            .map_or(&[], Vec::as_slice)
    }

    pub fn played_periods(&self) -> Vec<Period> {
        self.match_info
            .value()
            .and_then(|m| m.periods.value())
            .map(|ps| ps.iter().filter_map(|p| p.known()).collect())
            .unwrap_or_default()
    }

    pub fn pitch(&self) -> PitchGeometry {
        let stadium = self.stadium.value();
        PitchGeometry {
            length: stadium.and_then(|s| s.pitch_length.get()),
            width: stadium.and_then(|s| s.pitch_width.get()),
        }
    }

    pub fn fps_tracking(&self) -> Option<i64> {
        self.info().and_then(|m| m.fps_tracking.get())
    }

    pub fn limb_tracking(&self) -> bool {
        self.info().is_some_and(|m| m.limb_tracking.is_set())
    }

    pub fn id_space(&self) -> Option<&IdSpace> {
        self.info().and_then(|m| m.id_space.value())
    }

    /// Start and end whistle times of a period, when both are recorded.
    pub fn period_window(&self, period: Period) -> Option<(CdfTimestamp, CdfTimestamp)> {
        use super::WhistleSubType::{End, Start};
        let find = |sub| {
            self.whistles().iter().find_map(|w| {
                let is_period = w.whistle_type.known().and_then(|t| t.period()) == Some(period);
                (is_period && w.sub_type.known() == Some(sub))
                    .then(|| w.time.value().cloned())
                    .flatten()
            })
        };
        Some((find(Start)?, find(End)?))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Competition {
    pub id: Field<EntityId>,
    pub name: Field<String>,
    pub format: Field<String>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Season {
    pub id: Field<EntityId>,
    pub name: Field<String>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetaMatch {
    pub id: Field<EntityId>,
    pub kickoff_time: Field<CdfTimestamp>,
    pub periods: Field<Vec<Field<Code<Period>>>>,
    pub result: Field<MetaResult>,
    pub status: Field<MatchStatus>,
    pub whistles: Field<Vec<Whistle>>,
    pub round: Field<Round>,
    pub scheduled_kickoff_time: Field<CdfTimestamp>,
    pub local_kickoff_time: Field<String>,
    pub misc: Field<MatchMisc>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetaResult {
    pub final_result: Field<Score>,
    pub extratime: Field<Score>,
    pub shootout: Field<Score>,
    pub extras: Extras,
}

/// Match round: a number or a name such as `final`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Round {
    Number(i64),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchMisc {
    pub country: Field<String>,
    pub city: Field<String>,
    pub precipitation: Field<String>,
    pub open_roof: Field<Flag>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Stadium {
    pub id: Field<EntityId>,
    pub pitch_length: Field<f64>,
    pub pitch_width: Field<f64>,
    pub name: Field<String>,
    pub turf: Field<String>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetaInfo {
    pub fps_tracking: Field<i64>,
    pub limb_tracking: Field<Flag>,
    /// Raw skeletal hierarchy; see [`crate::skeleton::validate_hierarchy`].
    pub limb_nodes: Field<Value>,
    pub source_type: Field<Code<SourceType>>,
    pub perspective: Field<Code<DataPerspective>>,
    pub version: Field<Versions>,
    pub vendors: Field<Vendors>,
    pub id_space: Field<IdSpace>,
    pub fps_ball: Field<i64>,
    pub system: Field<SystemInfo>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Versions {
    pub cdf: Field<String>,
    pub event: Field<String>,
    pub tracking: Field<String>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vendors {
    pub event: Field<String>,
    pub tracking: Field<String>,
    pub video: Field<String>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IdSpace {
    pub match_data: Field<String>,
    pub event: Field<String>,
    pub tracking: Field<String>,
    pub extras: Extras,
}

impl IdSpace {
    /// Whether ids in `other` are expected to line up with the match data
    /// ids. Unknown spaces are assumed to agree.
    pub fn aligned(&self, other: &Field<String>) -> bool {
        match (self.match_data.value(), other.value()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SystemInfo {
    pub tracking_type: Field<Code<TrackingSystemType>>,
    pub tracking_version: Field<String>,
    pub event_type: Field<String>,
    pub event_version: Field<String>,
    pub ball_status_type: Field<String>,
    pub ball_possession_type: Field<String>,
    pub extras: Extras,
}

/// Per-period timing and actual side assignment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeriodInfo {
    pub period_type: Field<Code<Period>>,
    pub time_start: Field<CdfTimestamp>,
    pub time_end: Field<CdfTimestamp>,
    pub frame_id_start: Field<i64>,
    pub frame_id_end: Field<i64>,
    pub left_team_id: Field<EntityId>,
    pub right_team_id: Field<EntityId>,
    pub extras: Extras,
}
