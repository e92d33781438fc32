use super::{CdfTimestamp, Code, EntityId, Extras, Field, Flag, Foot, PositionLabel};
use super::{WhistleSubType, WhistleType};

/// `{"id": ...}` under the `match` key of streamed records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchRef {
    pub id: Field<EntityId>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchStatus {
    pub is_neutral: Field<Flag>,
    pub has_extratime: Field<Flag>,
    pub has_shootout: Field<Flag>,
    pub extras: Extras,
}

/// One result component. `winning_team_id` is only read and written for
/// the `final` component.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Score {
    pub home: Field<i64>,
    pub away: Field<i64>,
    pub winning_team_id: Field<EntityId>,
    pub extras: Extras,
}

impl Score {
    pub fn new(home: i64, away: i64) -> Self {
        Score {
            home: Field::Value(home),
            away: Field::Value(away),
            ..Score::default()
        }
    }

    pub fn with_winner(mut self, winner: Option<EntityId>) -> Self {
        self.winning_team_id = winner.into();
        self
    }

    pub fn pair(&self) -> Option<(i64, i64)> {
        Some((self.home.get()?, self.away.get()?))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Teams {
    pub home: Field<Team>,
    pub away: Field<Team>,
    pub extras: Extras,
}

impl Teams {
    pub fn home_id(&self) -> Option<&EntityId> {
        self.home.value().and_then(|t| t.id.value())
    }

    pub fn away_id(&self) -> Option<&EntityId> {
        self.away.value().and_then(|t| t.id.value())
    }

    /// `(side, team)` for each team entry present.
    pub fn sides(&self) -> impl Iterator<Item = (&'static str, &Team)> {
        [("home", &self.home), ("away", &self.away)]
            .into_iter()
            .filter_map(|(side, t)| t.value().map(|t| (side, t)))
    }

    pub fn players(&self) -> impl Iterator<Item = &Player> {
        self.sides().flat_map(|(_, t)| t.players.value().into_iter().flatten())
    }

    pub fn find_player(&self, id: &str) -> Option<&Player> {
        self.players().find(|p| p.id.id_str() == Some(id))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Team {
    pub id: Field<EntityId>,
    pub name: Field<String>,
    pub short_name: Field<String>,
    pub jersey_colour: Field<String>,
    pub players: Field<Vec<Player>>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Player {
    pub id: Field<EntityId>,
    pub team_id: Field<EntityId>,
    pub jersey_number: Field<i64>,
    pub is_starter: Field<Flag>,
    pub alternative_id: Field<String>,
    pub first_name: Field<String>,
    pub last_name: Field<String>,
    pub short_name: Field<String>,
    pub position_group: Field<String>,
    pub position: Field<Code<PositionLabel>>,
    pub is_captain: Field<Flag>,
    pub date_of_birth: Field<String>,
    pub height: Field<i64>,
    pub foot: Field<Code<Foot>>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Whistle {
    pub whistle_type: Field<Code<WhistleType>>,
    pub sub_type: Field<Code<WhistleSubType>>,
    pub time: Field<CdfTimestamp>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Referee {
    pub id: Field<EntityId>,
    pub first_name: Field<String>,
    pub last_name: Field<String>,
    pub short_name: Field<String>,
    pub extras: Extras,
}
