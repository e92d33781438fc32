use super::{BodyPart, CdfTimestamp, Code, EntityId, EventType, Extras, Field, Flag};
use super::{MatchRef, OutcomeDetailed, Period, SubType};

/// One line of an event stream.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventRecord {
    pub match_ref: Field<MatchRef>,
    pub meta: Field<EventMeta>,
    pub event: Field<EventBody>,
    pub tracking: Field<EventTracking>,
    pub extras: Extras,
}

impl EventRecord {
    pub fn body(&self) -> Option<&EventBody> {
        self.event.value()
    }

    pub fn match_id(&self) -> Option<&EntityId> {
        self.match_ref.value().and_then(|m| m.id.value())
    }

    pub fn period(&self) -> Option<Period> {
        self.body().and_then(|b| b.period.known())
    }

    pub fn event_type(&self) -> Option<EventType> {
        self.body().and_then(|b| b.event_type.known())
    }

    pub fn is_synced(&self) -> Option<bool> {
        self.meta.value().and_then(|m| m.is_synced.truth())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventMeta {
    pub is_synced: Field<Flag>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventBody {
    pub id: Field<EntityId>,
    pub time: Field<CdfTimestamp>,
    pub period: Field<Code<Period>>,
    pub event_type: Field<Code<EventType>>,
    /// `Missing` is the `None` sub-type.
    pub sub_type: Field<Code<SubType>>,
    pub outcome: Field<Flag>,
    pub outcome_detailed: Field<Code<OutcomeDetailed>>,
    pub player_id_1: Field<EntityId>,
    pub team_id_1: Field<EntityId>,
    pub player_id_2: Field<EntityId>,
    pub team_id_2: Field<EntityId>,
    pub x_1: Field<f64>,
    pub y_1: Field<f64>,
    pub x_2: Field<f64>,
    pub y_2: Field<f64>,
    pub body_part_1: Field<Code<BodyPart>>,
    pub body_part_2: Field<Code<BodyPart>>,
    pub metrics: Field<EventMetrics>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventMetrics {
    pub xg: Field<f64>,
    pub xpass: Field<f64>,
    pub packing_traditional: Field<i64>,
    pub packing_horizontal: Field<i64>,
    pub extras: Extras,
}

/// Links from an event into the tracking stream.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventTracking {
    pub frame_id_1: Field<i64>,
    pub frame_id_2: Field<i64>,
    pub x_player_1: Field<f64>,
    pub y_player_1: Field<f64>,
    pub x_player_2: Field<f64>,
    pub y_player_2: Field<f64>,
    pub extras: Extras,
}
