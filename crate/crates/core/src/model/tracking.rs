use super::{Code, EntityId, Extras, Field, Flag, MatchRef, Period};

/// One center-of-mass tracking frame.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrackingFrame {
    pub frame_id: Field<i64>,
    pub period: Field<Code<Period>>,
    pub match_ref: Field<MatchRef>,
    pub teams: Field<FrameTeams>,
    pub ball: Field<Ball>,
    pub ball_status: Field<Flag>,
    pub ball_poss_team_id: Field<EntityId>,
    pub vendor: Field<FrameVendor>,
    pub referees: Field<Vec<FrameReferee>>,
    pub extras: Extras,
}

impl TrackingFrame {
    pub fn match_id(&self) -> Option<&EntityId> {
        self.match_ref.value().and_then(|m| m.id.value())
    }

    pub fn players(&self) -> impl Iterator<Item = &FramePlayer> {
        self.teams.value().into_iter().flat_map(|t| {
            [&t.home, &t.away]
                .into_iter()
                .filter_map(|team| team.value())
                .flat_map(|team| team.players.value().into_iter().flatten())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameTeams {
    pub home: Field<FrameTeam>,
    pub away: Field<FrameTeam>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameTeam {
    pub id: Field<EntityId>,
    pub players: Field<Vec<FramePlayer>>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FramePlayer {
    pub id: Field<EntityId>,
    pub team_id: Field<EntityId>,
    pub x: Field<f64>,
    pub y: Field<f64>,
    pub z: Field<f64>,
    pub dist: Field<f64>,
    pub acc: Field<f64>,
    pub vel: Field<f64>,
    pub is_visible: Field<Flag>,
    pub lat: Field<f64>,
    pub long: Field<f64>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ball {
    pub x: Field<f64>,
    pub y: Field<f64>,
    pub z: Field<f64>,
    pub dist: Field<f64>,
    pub acc: Field<f64>,
    pub vel: Field<f64>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameVendor {
    pub event: Field<String>,
    pub tracking: Field<String>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameReferee {
    pub id: Field<EntityId>,
    pub x: Field<f64>,
    pub y: Field<f64>,
    pub z: Field<f64>,
    pub extras: Extras,
}

/// One skeletal tracking frame: per-player limb coordinates relative to
/// the player's origin.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SkeletonFrame {
    pub frame_id: Field<i64>,
    pub period: Field<Code<Period>>,
    pub match_ref: Field<MatchRef>,
    pub teams: Field<SkeletonTeams>,
    pub extras: Extras,
}

impl SkeletonFrame {
    pub fn match_id(&self) -> Option<&EntityId> {
        self.match_ref.value().and_then(|m| m.id.value())
    }

    pub fn players(&self) -> impl Iterator<Item = &SkeletonPlayer> {
        self.teams.value().into_iter().flat_map(|t| {
            [&t.home, &t.away]
                .into_iter()
                .filter_map(|team| team.value())
                .flat_map(|team| team.players.value().into_iter().flatten())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SkeletonTeams {
    pub home: Field<SkeletonTeam>,
    pub away: Field<SkeletonTeam>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SkeletonTeam {
    pub id: Field<EntityId>,
    pub players: Field<Vec<SkeletonPlayer>>,
    pub extras: Extras,
}

/// A player's limbs in document order. Any object-valued key other than
/// the fixed ones is a limb.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SkeletonPlayer {
    pub id: Field<EntityId>,
    pub team_id: Field<EntityId>,
    pub limbs: Vec<Limb>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Limb {
    pub name: String,
    pub x: Field<f64>,
    pub y: Field<f64>,
    pub z: Field<f64>,
    pub extras: Extras,
}
