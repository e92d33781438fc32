use super::{CardType, CdfTimestamp, Code, EntityId, Extras, Field, Flag};
use super::{MatchStatus, Referee, Score, Teams};

/// Official match record: lineups, result, goals, substitutions and cards.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchSheet {
    pub match_info: Field<SheetMatch>,
    pub teams: Field<Teams>,
    pub referees: Field<Vec<Referee>>,
    pub coaches: Field<Vec<Coach>>,
    pub events: Field<SheetEvents>,
    pub meta: Field<SheetMeta>,
    pub extras: Extras,
}

impl MatchSheet {
    pub fn match_id(&self) -> Option<&EntityId> {
        self.match_info.value().and_then(|m| m.id.value())
    }

    pub fn status(&self) -> Option<&MatchStatus> {
        self.match_info.value().and_then(|m| m.status.value())
    }

    pub fn result(&self) -> Option<&ResultBreakdown> {
        self.match_info.value().and_then(|m| m.result.value())
    }

    pub fn teams(&self) -> Option<&Teams> {
        self.teams.value()
    }

    pub fn goals(&self) -> &[Goal] {
        self.events
            .value()
            .and_then(|e| e.goals.value())
            .map_or(&[], Vec::as_slice)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SheetMatch {
    pub id: Field<EntityId>,
    pub status: Field<MatchStatus>,
    pub result: Field<ResultBreakdown>,
    pub extras: Extras,
}

/// Cumulative results after each phase, plus the shootout on its own.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultBreakdown {
    pub final_result: Field<Score>,
    pub first_half: Field<Score>,
    pub second_half: Field<Score>,
    pub first_extratime: Field<Score>,
    pub second_extratime: Field<Score>,
    pub shootout: Field<Score>,
    pub extras: Extras,
}

impl ResultBreakdown {
    /// The cumulative phases in playing order, with their key names.
    pub fn phases(&self) -> [(&'static str, &Field<Score>); 4] {
        [
            ("first_half", &self.first_half),
            ("second_half", &self.second_half),
            ("first_extratime", &self.first_extratime),
            ("second_extratime", &self.second_extratime),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Coach {
    pub coach_id: Field<EntityId>,
    pub first_name: Field<String>,
    pub last_name: Field<String>,
    pub short_name: Field<String>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SheetEvents {
    pub goals: Field<Vec<Goal>>,
    pub substitutions: Field<Vec<Substitution>>,
    pub cards: Field<Vec<Card>>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Goal {
    pub goal_time: Field<CdfTimestamp>,
    pub goal_player_id: Field<EntityId>,
    pub goal_assist_id: Field<EntityId>,
    pub is_own_goal: Field<Flag>,
    pub is_penalty: Field<Flag>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Substitution {
    pub in_time: Field<CdfTimestamp>,
    pub in_player_id: Field<EntityId>,
    pub out_time: Field<CdfTimestamp>,
    pub out_player_id: Field<EntityId>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Card {
    pub card_time: Field<CdfTimestamp>,
    pub card_player_id: Field<EntityId>,
    pub card_type: Field<Code<CardType>>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SheetMeta {
    pub vendor: Field<String>,
    pub extras: Extras,
}
