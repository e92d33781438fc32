use std::collections::HashSet;

use super::catalog::{sk, tr};
use super::common;
use super::context::{FrameOrderState, MetaContext, OrderRules};
use super::presence;
use crate::model::{Field, MatchMeta, SkeletonFrame, TrackingFrame};
use crate::report::{pointer_escape, Component, Report};
use crate::skeleton::{self, is_conventional_name};

const TR_ORDER: OrderRules = OrderRules {
    start: &tr::PERIOD_START,
    order: &tr::FRAME_ORDER,
    gap: &tr::FRAME_GAP,
    regression: &tr::PERIOD_ORDER,
};

const SK_ORDER: OrderRules = OrderRules {
    start: &sk::PERIOD_START,
    order: &sk::FRAME_ORDER,
    gap: &sk::FRAME_GAP,
    regression: &sk::FRAME_ORDER,
};

/// Validates one tracking frame. `state` carries frame ordering across
/// the stream.
pub fn validate_tracking_frame(frame: &TrackingFrame, meta: Option<&MatchMeta>, state: &mut FrameOrderState) -> Report {
    let ctx = meta.map(MetaContext::new);
    validate_tracking_frame_with(frame, ctx.as_ref(), state)
}

pub fn validate_tracking_frame_with(
    frame: &TrackingFrame,
    ctx: Option<&MetaContext>,
    state: &mut FrameOrderState,
) -> Report {
    let mut report = Report::new(Component::Tracking);
    check_tracking_into(frame, ctx, state, &mut report);
    report
}

pub(crate) fn check_tracking_into(
    frame: &TrackingFrame,
    ctx: Option<&MetaContext>,
    state: &mut FrameOrderState,
    r: &mut Report,
) {
    presence::check_record_into(frame, r);
    common::code(r, &tr::PERIOD, "/period", &frame.period);
    let frame_id = frame.frame_id.get();
    if let Some(id) = frame_id.filter(|id| *id < 0) {
        r.push(&tr::FRAME_NEGATIVE, "/frame_id", format!("frame id {id}"));
    }
    if let (Some(p), Some(id)) = (frame.period.known(), frame_id.filter(|id| *id >= 0)) {
        state.observe(p, id, TR_ORDER, r);
    }
    common::flag(r, &tr::FLAG_RANGE, "/ball_status", &frame.ball_status);

    let aligned = ctx.is_none_or(|c| c.tracking_ids_aligned);
    let mut frame_teams: Vec<&str> = Vec::new();
    if let Some(teams) = frame.teams.value() {
        let home = teams.home.value().and_then(|t| t.id.id_str());
        let away = teams.away.value().and_then(|t| t.id.id_str());
        if let (Some(h), Some(a)) = (home, away) {
            if h == a {
                r.push(&tr::SAME_TEAMS, "/teams/away/id", format!("home and away are both `{h}`"));
            }
        }
        let mut seen = HashSet::new();
        for (side, team) in [("home", &teams.home), ("away", &teams.away)] {
            let Some(team) = team.value() else { continue };
            let base = format!("/teams/{side}");
            let team_id = team.id.id_str();
            if let Some(t) = team_id {
                frame_teams.push(t);
                if let Some(c) = ctx.filter(|c| c.knows_teams() && !c.is_team(t)) {
                    c.push_ref(r, &tr::TEAM_UNKNOWN, aligned, format!("{base}/id"), format!("`{t}` is neither team of the meta"));
                }
            }
            for (i, p) in team.players.value().into_iter().flatten().enumerate() {
                let pp = format!("{base}/players/{i}");
                common::flag(r, &tr::FLAG_RANGE, &format!("{pp}/is_visible"), &p.is_visible);
                if let Some(id) = p.id.id_str() {
                    if !seen.insert(id) {
                        r.push(&tr::PLAYER_DUPLICATE, format!("{pp}/id"), format!("player `{id}` appears twice"));
                    }
                    if let Some((c, roster)) = ctx.and_then(|c| c.roster.as_ref().map(|ro| (c, ro))) {
                        if !roster.contains_key(id) {
                            c.push_ref(r, &tr::PLAYER_UNKNOWN, aligned, format!("{pp}/id"), format!("`{id}` is not on either roster"));
                        }
                    }
                }
                if let (Some(pt), Some(t)) = (p.team_id.id_str(), team_id) {
                    if pt != t {
                        r.push(&tr::PLAYER_TEAM_BLOCK, format!("{pp}/team_id"), format!("`{pt}` listed under {side} team `{t}`"));
                    }
                }
                if let (Some(c), Some(x), Some(y)) = (ctx, p.x.get(), p.y.get()) {
                    if !c.in_bounds(x, y) {
                        r.push(&tr::PLAYER_BOUNDS, format!("{pp}/x"), format!("({x}, {y}) is outside the pitch"));
                    }
                }
                kinematics(r, &pp, &p.vel, &p.dist);
                for (key, f, limit) in [("lat", &p.lat, 90.0), ("long", &p.long, 180.0)] {
                    if let Some(v) = f.get().filter(|v| v.abs() > limit) {
                        r.push(&tr::GEO_RANGE, format!("{pp}/{key}"), format!("{key} {v} is outside [-{limit}, {limit}]"));
                    }
                }
            }
        }
    }

    if let Some(ball) = frame.ball.value() {
        if let (Some(c), Some(x), Some(y)) = (ctx, ball.x.get(), ball.y.get()) {
            if !c.in_bounds(x, y) {
                r.push(&tr::BALL_BOUNDS, "/ball/x", format!("({x}, {y}) is outside the pitch"));
            }
        }
        if let Some(z) = ball.z.get().filter(|z| *z < 0.0) {
            r.push(&tr::BALL_BELOW_GROUND, "/ball/z", format!("z is {z}"));
        }
        kinematics(r, "/ball", &ball.vel, &ball.dist);
    }

    let possession_given = frame.ball_status.value().is_some() && frame.ball_poss_team_id.is_present();
    if !possession_given && !state.noted_possession {
        state.noted_possession = true;
        r.push(&tr::POSSESSION_ABSENT, "/ball_poss_team_id", "not provided; noted once per stream");
    }
    if let Some(t) = frame.ball_poss_team_id.id_str() {
        if !frame_teams.is_empty() && !frame_teams.contains(&t) {
            r.push(&tr::POSSESSION_TEAM, "/ball_poss_team_id", format!("`{t}` is neither team of the frame"));
        }
    }

    if let (Some(c), Some(id)) = (ctx, frame.match_id()) {
        if let Some(expected) = c.match_id.as_deref().filter(|m| *m != id.as_str()) {
            c.push_ref(r, &tr::MATCH_MISMATCH, aligned, "/match/id", format!("`{id}` but the meta says `{expected}`"));
        }
    }
}

fn kinematics(r: &mut Report, base: &str, vel: &Field<f64>, dist: &Field<f64>) {
    for (key, f) in [("vel", vel), ("dist", dist)] {
        if let Some(v) = f.get().filter(|v| *v < 0.0) {
            r.push(&tr::NEGATIVE_KINEMATICS, format!("{base}/{key}"), format!("{key} is {v}"));
        }
    }
}

/// Validates one skeletal frame against the hierarchy declared in the meta.
pub fn validate_skeleton_frame(frame: &SkeletonFrame, meta: Option<&MatchMeta>, state: &mut FrameOrderState) -> Report {
    let ctx = meta.map(MetaContext::new);
    validate_skeleton_frame_with(frame, ctx.as_ref(), state)
}

pub fn validate_skeleton_frame_with(
    frame: &SkeletonFrame,
    ctx: Option<&MetaContext>,
    state: &mut FrameOrderState,
) -> Report {
    let mut report = Report::new(Component::Skeletal);
    check_skeleton_into(frame, ctx, state, &mut report);
    report
}

pub(crate) fn check_skeleton_into(
    frame: &SkeletonFrame,
    ctx: Option<&MetaContext>,
    state: &mut FrameOrderState,
    r: &mut Report,
) {
    presence::check_record_into(frame, r);
    common::code(r, &sk::PERIOD, "/period", &frame.period);
    let frame_id = frame.frame_id.get();
    if let Some(id) = frame_id.filter(|id| *id < 0) {
        r.push(&sk::FRAME_NEGATIVE, "/frame_id", format!("frame id {id}"));
    }
    if let (Some(p), Some(id)) = (frame.period.known(), frame_id.filter(|id| *id >= 0)) {
        state.observe(p, id, SK_ORDER, r);
    }

    let declared = ctx.and_then(MetaContext::limb_names);
    if declared.is_none() && !state.noted_hierarchy {
        state.noted_hierarchy = true;
        r.push(&sk::NO_HIERARCHY, "/teams", "the match meta declares no valid limb hierarchy");
    }

    let Some(teams) = frame.teams.value() else { return };
    let mut seen = HashSet::new();
    for (side, team) in [("home", &teams.home), ("away", &teams.away)] {
        let Some(team) = team.value() else { continue };
        for (i, p) in team.players.value().into_iter().flatten().enumerate() {
            let pp = format!("/teams/{side}/players/{i}");
            if let Some(id) = p.id.id_str() {
                if !seen.insert(id) {
                    r.push(&sk::PLAYER_DUPLICATE, format!("{pp}/id"), format!("player `{id}` appears twice"));
                }
            }
            if let Some(d) = &declared {
                skeleton::player_limbs(d, p, &pp, r);
            } else {
                for limb in p.limbs.iter().filter(|l| !is_conventional_name(&l.name)) {
                    r.push(&sk::LIMB_NAME, format!("{pp}/{}", pointer_escape(&limb.name)), format!("`{}`", limb.name));
                }
            }
        }
    }
}
