//! Single-defect mutations of a fixture, each tied to the rule that must
//! report it.

use serde_json::{json, Value};

use super::motion::{FrameEdit, StreamDefect};
use super::{Fixture, SkeletalPlan, TrackingPlan};
use crate::error::{CdfError, Result};
use crate::model::*;

/// One catalog entry.
#[derive(Debug, Clone, Copy)]
pub struct Mutation {
    pub id: &'static str,
    /// Rule id that must appear once the mutation is applied.
    pub rule: &'static str,
    pub summary: &'static str,
    /// Only applicable to fixtures with a skeletal stream.
    pub needs_skeletal: bool,
    apply: fn(&mut Fixture) -> Result<()>,
}

fn missing(what: &str) -> CdfError {
    CdfError::FixtureSpec(format!("fixture has no {what}"))
}

fn sheet(f: &mut Fixture) -> Result<&mut MatchSheet> {
    f.match_sheet.as_mut().ok_or_else(|| missing("match sheet"))
}

fn sheet_match(f: &mut Fixture) -> Result<&mut SheetMatch> {
    sheet(f)?.match_info.value_mut().ok_or_else(|| missing("match sheet match block"))
}

fn sheet_result(f: &mut Fixture) -> Result<&mut ResultBreakdown> {
    sheet_match(f)?.result.value_mut().ok_or_else(|| missing("match sheet result"))
}

fn sheet_events(f: &mut Fixture) -> Result<&mut SheetEvents> {
    sheet(f)?.events.value_mut().ok_or_else(|| missing("match sheet events"))
}

fn meta(f: &mut Fixture) -> Result<&mut MatchMeta> {
    f.meta.as_mut().ok_or_else(|| missing("meta"))
}

fn meta_match(f: &mut Fixture) -> Result<&mut MetaMatch> {
    meta(f)?.match_info.value_mut().ok_or_else(|| missing("meta match block"))
}

fn meta_info(f: &mut Fixture) -> Result<&mut MetaInfo> {
    meta(f)?.meta.value_mut().ok_or_else(|| missing("meta info block"))
}

fn event(f: &mut Fixture) -> Result<&mut EventBody> {
    events(f)?.first_mut().and_then(|e| e.event.value_mut()).ok_or_else(|| missing("events"))
}

fn events(f: &mut Fixture) -> Result<&mut Vec<EventRecord>> {
    f.events.as_mut().ok_or_else(|| missing("event stream"))
}

fn tracking(f: &mut Fixture) -> Result<&mut TrackingPlan> {
    f.tracking.as_mut().ok_or_else(|| missing("tracking stream"))
}

fn skeletal(f: &mut Fixture) -> Result<&mut SkeletalPlan> {
    f.skeletal.as_mut().ok_or_else(|| missing("skeletal stream"))
}

/// Adds a defect in the middle of the first period.
fn frame_edit(f: &mut Fixture, edit: FrameEdit) -> Result<()> {
    let t = tracking(f)?;
    let frame = t.periods[0].1 / 2;
    t.defects.push(StreamDefect::Edit { period: 0, frame, edit });
    Ok(())
}

fn other_team(f: &mut Fixture, id: Option<&EntityId>) -> Result<EntityId> {
    let teams = sheet(f)?.teams().ok_or_else(|| missing("teams"))?;
    let (home, away) = (teams.home_id().cloned(), teams.away_id().cloned());
    let (home, away) = home.zip(away).ok_or_else(|| missing("team ids"))?;
    Ok(if id == Some(&home) { away } else { home })
}

fn limb_nodes(f: &mut Fixture) -> Result<&mut Vec<Value>> {
    if f.skeletal.is_none() {
        return Err(missing("skeletal stream"));
    }
    match meta_info(f)?.limb_nodes.value_mut() {
        Some(Value::Array(a)) => Ok(a),
        _ => Err(missing("limb hierarchy")),
    }
}

macro_rules! m {
    ($id:literal, $rule:literal, $summary:literal, $skel:literal, $apply:expr) => {
        Mutation { id: $id, rule: $rule, summary: $summary, needs_skeletal: $skel, apply: $apply }
    };
}

static CATALOG: &[Mutation] = &[
    // Mandatory fields.
    m!("drop-match-id", "MS-002", "match sheet without match.id", false, |f| {
        sheet_match(f)?.id = Field::Absent;
        Ok(())
    }),
    m!("drop-status-flag", "MS-006", "match sheet status without has_shootout", false, |f| {
        if let Some(s) = sheet_match(f)?.status.value_mut() {
            s.has_shootout = Field::Absent;
        }
        Ok(())
    }),
    m!("drop-final-result", "MS-008", "match sheet without the final result", false, |f| {
        sheet_result(f)?.final_result = Field::Absent;
        Ok(())
    }),
    m!("drop-jersey-number", "MS-027", "match sheet player without jersey_number", false, |f| {
        let teams = sheet(f)?.teams.value_mut().ok_or_else(|| missing("teams"))?;
        let p = teams.home.value_mut().and_then(|t| t.players.value_mut()).and_then(|p| p.first_mut());
        p.ok_or_else(|| missing("players"))?.jersey_number = Field::Absent;
        Ok(())
    }),
    m!("drop-goal-time", "MS-033", "goal without goal_time", false, |f| {
        let goals = sheet_events(f)?.goals.value_mut().and_then(|g| g.first_mut());
        goals.ok_or_else(|| missing("goals"))?.goal_time = Field::Absent;
        Ok(())
    }),
    m!("drop-card-type", "MS-046", "card without card_type", false, |f| {
        let card = sheet_events(f)?.cards.value_mut().and_then(|c| c.first_mut());
        card.ok_or_else(|| missing("cards"))?.card_type = Field::Absent;
        Ok(())
    }),
    m!("drop-sheet-vendor", "MS-048", "match sheet meta without vendor", false, |f| {
        let m = sheet(f)?.meta.value_mut().ok_or_else(|| missing("match sheet meta"))?;
        m.vendor = Field::Absent;
        Ok(())
    }),
    m!("drop-kickoff-time", "MD-007", "meta without kickoff_time", false, |f| {
        meta_match(f)?.kickoff_time = Field::Absent;
        Ok(())
    }),
    m!("drop-fps-tracking", "MD-038", "meta without fps_tracking", false, |f| {
        meta_info(f)?.fps_tracking = Field::Absent;
        Ok(())
    }),
    m!("drop-pitch-length", "MD-035", "stadium without pitch_length", false, |f| {
        let s = meta(f)?.stadium.value_mut().ok_or_else(|| missing("stadium"))?;
        s.pitch_length = Field::Absent;
        Ok(())
    }),
    m!("drop-whistle-time", "MD-024", "whistle without time", false, |f| {
        let w = meta_match(f)?.whistles.value_mut().and_then(|w| w.first_mut());
        w.ok_or_else(|| missing("whistles"))?.time = Field::Absent;
        Ok(())
    }),
    m!("drop-cdf-version", "MD-044", "meta version without cdf", false, |f| {
        let v = meta_info(f)?.version.value_mut().ok_or_else(|| missing("version"))?;
        v.cdf = Field::Absent;
        Ok(())
    }),
    m!("drop-id-space", "MD-051", "meta without id_space", false, |f| {
        meta_info(f)?.id_space = Field::Absent;
        Ok(())
    }),
    m!("drop-video-fps", "VD-002", "video meta without fps", false, |f| {
        f.video_meta.as_mut().ok_or_else(|| missing("video meta"))?.fps = Field::Absent;
        Ok(())
    }),
    m!("drop-event-id", "EV-006", "event without id", false, |f| {
        event(f)?.id = Field::Absent;
        Ok(())
    }),
    m!("drop-is-synced", "EV-004", "event meta without is_synced", false, |f| {
        let e = events(f)?.first_mut().ok_or_else(|| missing("events"))?;
        e.meta.value_mut().ok_or_else(|| missing("event meta"))?.is_synced = Field::Absent;
        Ok(())
    }),
    m!("drop-event-x1", "EV-017", "event without x_1", false, |f| {
        event(f)?.x_1 = Field::Absent;
        Ok(())
    }),
    m!("drop-ball-z", "TR-016", "tracking frame ball without z", false, |f| frame_edit(f, FrameEdit::DropBallZ)),
    m!("drop-player-x", "TR-011", "tracked player without x", false, |f| frame_edit(f, FrameEdit::DropPlayerX)),
    m!("drop-frame-match", "TR-003", "tracking frame without match", false, |f| frame_edit(f, FrameEdit::DropMatch)),
    m!("drop-limb-z", "SK-013", "skeletal limb without z", true, |f| {
        skeletal(f)?.defects.push(StreamDefect::Edit { period: 0, frame: 0, edit: FrameEdit::DropLimbZ });
        Ok(())
    }),
    // Enumerations.
    m!("card-enum", "MS-101", "card_type outside the card set", false, |f| {
        let card = sheet_events(f)?.cards.value_mut().and_then(|c| c.first_mut());
        card.ok_or_else(|| missing("cards"))?.card_type = Code::Unknown("green_card".into()).into();
        Ok(())
    }),
    m!("flag-range", "MS-100", "is_neutral set to 2", false, |f| {
        if let Some(s) = sheet_match(f)?.status.value_mut() {
            s.is_neutral = Flag(2).into();
        }
        Ok(())
    }),
    m!("event-type-enum", "EV-102", "event type outside the type set", false, |f| {
        event(f)?.event_type = Code::Unknown("tackle_attempt".into()).into();
        Ok(())
    }),
    m!("subtype-mismatch", "EV-103", "pass with a penalty_kick sub-type", false, |f| {
        let es = events(f)?;
        let pass = es.iter_mut().filter_map(|e| e.event.value_mut()).find(|b| b.event_type.known() == Some(EventType::Pass));
        pass.ok_or_else(|| missing("pass events"))?.sub_type = Code::Known(SubType::PenaltyKick).into();
        Ok(())
    }),
    m!("body-part-enum", "EV-106", "body_part_1 outside the body part set", false, |f| {
        event(f)?.body_part_1 = Code::Unknown("knee".into()).into();
        Ok(())
    }),
    m!("period-enum", "TR-101", "tracking frame with an unknown period", false, |f| frame_edit(f, FrameEdit::UnknownPeriod)),
    m!("source-type-enum", "MD-116", "source_type outside the source set", false, |f| {
        meta_info(f)?.source_type = Code::Unknown("scraped".into()).into();
        Ok(())
    }),
    m!("operation-type-enum", "VD-102", "video operation_type outside the set", false, |f| {
        f.video_meta.as_mut().ok_or_else(|| missing("video meta"))?.operation_type = Code::Unknown("hybrid".into()).into();
        Ok(())
    }),
    // Frame ordering.
    m!("frame-skip", "TR-105", "one frame id skipped", false, |f| {
        let t = tracking(f)?;
        let frame = t.periods[0].1 / 2 + 1;
        t.defects.push(StreamDefect::Skip { period: 0, frame });
        Ok(())
    }),
    m!("frame-repeat", "TR-104", "one frame emitted twice", false, |f| {
        let t = tracking(f)?;
        let frame = t.periods[0].1 / 2;
        t.defects.push(StreamDefect::Repeat { period: 0, frame });
        Ok(())
    }),
    m!("period-start", "TR-103", "second period does not start at frame 0", false, |f| {
        tracking(f)?.defects.push(StreamDefect::Skip { period: 1, frame: 0 });
        Ok(())
    }),
    m!("period-regression", "TR-106", "a first period frame after the second period starts", false, |f| {
        tracking(f)?.defects.push(StreamDefect::Regress { period: 1 });
        Ok(())
    }),
    m!("duplicate-player", "TR-107", "player listed twice in a frame", false, |f| {
        frame_edit(f, FrameEdit::DuplicatePlayer)
    }),
    m!("ball-below-ground", "TR-111", "ball with negative z", false, |f| frame_edit(f, FrameEdit::BallBelowGround)),
    m!("foreign-player", "TR-115", "tracked player not on the rosters", false, |f| {
        frame_edit(f, FrameEdit::ForeignPlayer)
    }),
    // Availability.
    m!("drop-meta", "XB-002", "bundle without the match meta", false, |f| {
        f.meta = None;
        Ok(())
    }),
    m!("drop-match-sheet", "XB-001", "bundle without the match sheet", false, |f| {
        f.match_sheet = None;
        Ok(())
    }),
    m!("drop-tracking", "XB-008", "synced events without tracking", false, |f| {
        f.tracking = None;
        Ok(())
    }),
    m!("skeletal-undeclared", "XB-015", "skeletal stream with limb_tracking 0", true, |f| {
        skeletal(f)?;
        let info = meta_info(f)?;
        info.limb_tracking = Flag(0).into();
        info.limb_nodes = Field::Absent;
        Ok(())
    }),
    // Reconciliation.
    m!("result-desync", "XB-005", "meta final result differs from the match sheet", false, |f| {
        let r = meta_match(f)?.result.value_mut().and_then(|r| r.final_result.value_mut());
        let r = r.ok_or_else(|| missing("meta final result"))?;
        let away = r.away.get().unwrap_or(0);
        r.away = (away + 1).into();
        Ok(())
    }),
    m!("goal-tally", "XB-006", "a goal removed from the match sheet", false, |f| {
        let goals = sheet_events(f)?.goals.value_mut().ok_or_else(|| missing("goals"))?;
        goals.pop().ok_or_else(|| missing("goals"))?;
        Ok(())
    }),
    m!("match-id-mismatch", "XB-003", "meta carries another match id", false, |f| {
        meta_match(f)?.id = EntityId::new("another-match").expect("valid id").into();
        Ok(())
    }),
    m!("roster-mismatch", "XB-004", "a substitute missing from the meta roster", false, |f| {
        let teams = meta(f)?.teams.value_mut().ok_or_else(|| missing("meta teams"))?;
        let players = teams.away.value_mut().and_then(|t| t.players.value_mut()).ok_or_else(|| missing("players"))?;
        if players.len() < 12 {
            return Err(missing("bench players"));
        }
        players.pop();
        Ok(())
    }),
    m!("winner-inconsistent", "MS-107", "winning_team_id names the wrong team", false, |f| {
        let current = sheet_result(f)?.final_result.value().and_then(|s| s.winning_team_id.value().cloned());
        let other = other_team(f, current.as_ref())?;
        let r = sheet_result(f)?.final_result.value_mut().ok_or_else(|| missing("final result"))?;
        r.winning_team_id = other.into();
        Ok(())
    }),
    // Synchronization.
    m!("dangling-frame", "XB-009", "event references a frame that was never tracked", false, |f| {
        let e = events(f)?.first_mut().ok_or_else(|| missing("events"))?;
        e.tracking.value_mut().ok_or_else(|| missing("event tracking block"))?.frame_id_1 = 10_000_000.into();
        Ok(())
    }),
    m!("event-window", "XB-010", "event an hour outside its period", false, |f| {
        let b = event(f)?;
        let t = b.time.value().ok_or_else(|| missing("event time"))?;
        b.time = CdfTimestamp::from_instant(t.instant() + chrono::Duration::hours(1)).into();
        Ok(())
    }),
    m!("frame-budget", "XB-012", "first period cut to 90% of its frames", false, |f| {
        let t = tracking(f)?;
        let keep = t.periods[0].1 * 9 / 10;
        t.defects.push(StreamDefect::Truncate { period: 0, keep });
        Ok(())
    }),
    // Skeletal hierarchy.
    m!("hierarchy-cycle", "SK-104", "limb hierarchy with a cycle", true, |f| {
        let nodes = limb_nodes(f)?;
        nodes[2]["children"] = json!([1]);
        nodes[1]["children"] = json!([2, 3, 4]);
        nodes[0]["children"] = json!([5, 6]);
        Ok(())
    }),
    m!("hierarchy-multi-root", "SK-105", "limb hierarchy with two branching roots", true, |f| {
        let nodes = limb_nodes(f)?;
        let n = nodes.len();
        nodes.push(json!({"name": "tail", "children": [n + 1]}));
        nodes.push(json!({"name": "tail_tip"}));
        Ok(())
    }),
    m!("non-unit-quaternion", "SK-106", "limb rotation that is not a unit quaternion", true, |f| {
        limb_nodes(f)?[1]["rotation"] = json!([0.0, 0.0, 0.0, 2.0]);
        Ok(())
    }),
];

/// The documented mutations, in catalog order.
pub fn catalog() -> &'static [Mutation] {
    CATALOG
}

pub fn find_mutation(id: &str) -> Result<&'static Mutation> {
    CATALOG.iter().find(|m| m.id == id).ok_or_else(|| CdfError::UnknownMutation(id.to_owned()))
}

/// A copy of `fixture` with one mutation applied.
pub fn mutate(fixture: &Fixture, id: &str) -> Result<Fixture> {
    let m = find_mutation(id)?;
    if m.needs_skeletal && fixture.skeletal.is_none() {
        return Err(CdfError::FixtureSpec(format!("mutation `{id}` needs a skeletal stream")));
    }
    let mut out = fixture.clone();
    (m.apply)(&mut out)?;
    out.applied.push(m.id);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn catalog_ids_are_unique() {
        let ids: HashSet<&str> = CATALOG.iter().map(|m| m.id).collect();
        assert_eq!(ids.len(), CATALOG.len());
        assert!(CATALOG.len() >= 25);
        assert!(matches!(find_mutation("nope"), Err(CdfError::UnknownMutation(_))));
    }
}
