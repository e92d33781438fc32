use super::catalog::ev;
use super::common;
use super::context::MetaContext;
use super::presence;
use crate::model::{
    implied_success, outcome_allowed, subtype_allowed, Code, EntityId, EventRecord, EventType, Field, MatchMeta, Vocabulary,
};
use crate::report::{Component, Report};

/// Validates one event record, cross-checked against the match meta when
/// given.
pub fn validate_event(record: &EventRecord, meta: Option<&MatchMeta>) -> Report {
    let ctx = meta.map(MetaContext::new);
    validate_event_with(record, ctx.as_ref())
}

/// [`validate_event`] with a precomputed context, for streams.
pub fn validate_event_with(record: &EventRecord, ctx: Option<&MetaContext>) -> Report {
    let mut report = Report::new(Component::Events);
    check_event_into(record, ctx, &mut report);
    report
}

pub(crate) fn check_event_into(record: &EventRecord, ctx: Option<&MetaContext>, r: &mut Report) {
    presence::check_record_into(record, r);
    if let Some(m) = record.meta.value() {
        common::flag(r, &ev::FLAG_RANGE, "/meta/is_synced", &m.is_synced);
    }
    if let Some(body) = record.body() {
        common::flag(r, &ev::FLAG_RANGE, "/event/outcome", &body.outcome);
        common::code(r, &ev::PERIOD, "/event/period", &body.period);
        common::code(r, &ev::TYPE, "/event/type", &body.event_type);
        common::code(r, &ev::BODY_PART_1, "/event/body_part_1", &body.body_part_1);
        common::code(r, &ev::BODY_PART_2, "/event/body_part_2", &body.body_part_2);
        let event_type = body.event_type.known();

        match (&body.sub_type, event_type) {
            (Field::Value(Code::Unknown(_)), _) => common::code(r, &ev::SUB_TYPE, "/event/sub_type", &body.sub_type),
            (Field::Value(Code::Known(s)), Some(t)) if !subtype_allowed(t, Some(*s)) => {
                r.push(&ev::SUB_TYPE, "/event/sub_type", format!("`{}` is not a sub-type of {t}", s.as_str()));
            }
            (Field::Missing, Some(t)) if !subtype_allowed(t, None) => {
                r.push(&ev::SUB_TYPE_MISSING, "/event/sub_type", format!("{t} events need a sub-type"));
            }
            _ => {}
        }

        match (&body.outcome_detailed, event_type) {
            (Field::Value(Code::Unknown(_)), _) => {
                common::code(r, &ev::OUTCOME_DETAILED, "/event/outcome_detailed", &body.outcome_detailed)
            }
            (Field::Value(Code::Known(o)), Some(t)) => {
                if t == EventType::Referee {
                    r.push(&ev::OUTCOME_DETAILED, "/event/outcome_detailed", "referee events have no detailed outcome");
                } else if !outcome_allowed(t, *o) {
                    r.push(&ev::OUTCOME_DETAILED, "/event/outcome_detailed", format!("`{}` is not an outcome of {t}", o.as_str()));
                } else if let (Some(implied), Some(actual)) = (implied_success(t, *o), body.outcome.truth()) {
                    if implied != actual {
                        r.push(
                            &ev::OUTCOME_CONSISTENCY,
                            "/event/outcome",
                            format!("outcome {} but outcome_detailed is `{}`", u8::from(actual), o.as_str()),
                        );
                    }
                }
            }
            _ => {}
        }

        if let Some(ctx) = ctx {
            for (n, x, y, rule) in [("1", &body.x_1, &body.y_1, &ev::LOCATION_1), ("2", &body.x_2, &body.y_2, &ev::LOCATION_2)] {
                if let (Some(x), Some(y)) = (x.get(), y.get()) {
                    if !ctx.in_bounds(x, y) {
                        r.push(rule, format!("/event/x_{n}"), format!("({x}, {y}) is outside the pitch"));
                    }
                }
            }
        }

        if let Some(m) = body.metrics.value() {
            for (key, f, rule) in [("xg", &m.xg, &ev::XG_RANGE), ("xpass", &m.xpass, &ev::XPASS_RANGE)] {
                if let Some(v) = f.get().filter(|v| !(0.0..=1.0).contains(v)) {
                    r.push(rule, format!("/event/metrics/{key}"), format!("{key} {v} is outside [0, 1]"));
                }
            }
            for (key, f) in [("packing_traditional", &m.packing_traditional), ("packing_horizontal", &m.packing_horizontal)] {
                if let Some(v) = f.get().filter(|v| *v < 0) {
                    r.push(&ev::PACKING, format!("/event/metrics/{key}"), format!("{key} is {v}"));
                }
            }
        }

        if let Some(ctx) = ctx {
            let aligned = ctx.event_ids_aligned;
            for (n, team, player) in [("1", &body.team_id_1, &body.player_id_1), ("2", &body.team_id_2, &body.player_id_2)] {
                let team = team.id_str();
                if let Some(t) = team.filter(|t| ctx.knows_teams() && !ctx.is_team(t)) {
                    ctx.push_ref(r, &ev::TEAM_UNKNOWN, aligned, format!("/event/team_id_{n}"), format!("`{t}` is neither team"));
                }
                let (Some(roster), Some(p)) = (&ctx.roster, player.id_str()) else { continue };
                match roster.get(p) {
                    None => ctx.push_ref(r, &ev::PLAYER_UNKNOWN, aligned, format!("/event/player_id_{n}"), format!("`{p}` is not on either roster")),
                    Some(listed) if team.is_some_and(|t| t != listed) => ctx.push_ref(
                        r,
                        &ev::PLAYER_TEAM,
                        aligned,
                        format!("/event/team_id_{n}"),
                        format!("player `{p}` belongs to `{listed}`"),
                    ),
                    _ => {}
                }
            }
        }
    }

    if let Some(t) = record.tracking.value() {
        for (key, f) in [("frame_id_1", &t.frame_id_1), ("frame_id_2", &t.frame_id_2)] {
            if let Some(v) = f.get().filter(|v| *v < 0) {
                r.push(&ev::FRAME_NEGATIVE, format!("/tracking/{key}"), format!("frame id {v}"));
            }
        }
        if let Some(ctx) = ctx {
            for (n, x, y) in [("1", &t.x_player_1, &t.y_player_1), ("2", &t.x_player_2, &t.y_player_2)] {
                if let (Some(x), Some(y)) = (x.get(), y.get()) {
                    if !ctx.in_bounds(x, y) {
                        r.push(&ev::TRACKING_LOCATION, format!("/tracking/x_player_{n}"), format!("({x}, {y}) is outside the pitch"));
                    }
                }
            }
        }
    }

    if let (Some(ctx), Some(id)) = (ctx, record.match_id()) {
        mismatch(r, ctx, id, ctx.event_ids_aligned);
    }
}

fn mismatch(r: &mut Report, ctx: &MetaContext, id: &EntityId, aligned: bool) {
    if let Some(expected) = ctx.match_id.as_deref().filter(|m| *m != id.as_str()) {
        ctx.push_ref(r, &ev::MATCH_MISMATCH, aligned, "/match/id", format!("`{id}` but the meta says `{expected}`"));
    }
}

