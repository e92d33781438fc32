use std::collections::HashSet;

use super::catalog::{md, vd};
use super::common::{self, RosterRules, WhistleRules, WinnerRules};
use super::presence;
use crate::model::{Field, MatchMeta, Period, PitchGeometry, VideoMeta, WhistleSubType};
use crate::report::{Component, Report};
use crate::skeleton;

const ROSTER: RosterRules = RosterRules {
    flag: &md::FLAG_RANGE,
    same_teams: &md::SAME_TEAMS,
    team_unknown: &md::PLAYER_TEAM_UNKNOWN,
    team_block: &md::PLAYER_TEAM_BLOCK,
    jersey_range: &md::JERSEY_RANGE,
    jersey_duplicate: &md::JERSEY_DUPLICATE,
    starter_count: &md::STARTER_COUNT,
    player_duplicate: &md::PLAYER_DUPLICATE,
    position_unknown: &md::POSITION_UNKNOWN,
    position_duplicate: &md::POSITION_DUPLICATE,
    foot: &md::FOOT,
    height: None,
    jersey_colour: Some(&md::JERSEY_COLOUR),
};

/// `major.minor[.patch...]`, all parts numeric.
pub(crate) fn is_dotted_version(text: &str) -> bool {
    let parts: Vec<&str> = text.split('.').collect();
    parts.len() >= 2 && parts.iter().all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
}

/// Validates a match meta document on its own.
pub fn validate_meta(meta: &MatchMeta) -> Report {
    let mut report = Report::new(Component::Meta);
    presence::check_record_into(meta, &mut report);
    let r = &mut report;

    let status = meta.status();
    if let Some(s) = status {
        for (key, f) in [
            ("is_neutral", &s.is_neutral),
            ("has_extratime", &s.has_extratime),
            ("has_shootout", &s.has_shootout),
        ] {
            common::flag(r, &md::FLAG_RANGE, &format!("/match/status/{key}"), f);
        }
    }
    let extratime = status.and_then(|s| s.has_extratime.truth());
    let shootout = status.and_then(|s| s.has_shootout.truth());

    if let Some(m) = meta.match_info.value() {
        if let Some(periods) = m.periods.value() {
            let mut seen = HashSet::new();
            for (i, p) in periods.iter().enumerate() {
                common::code(r, &md::PERIOD_NAME, &format!("/match/periods/{i}"), p);
                if let Some(p) = p.known() {
                    if !seen.insert(p) {
                        r.push(&md::PERIOD_DUPLICATE, format!("/match/periods/{i}"), format!("{p} listed twice"));
                    }
                }
            }
            let has = |p: Period| seen.contains(&p);
            if let Some(flag) = extratime {
                let listed = [Period::FirstHalfExtratime, Period::SecondHalfExtratime].map(has);
                if listed != [flag, flag] {
                    r.push(
                        &md::EXTRATIME_PERIODS,
                        "/match/periods",
                        format!("has_extratime is {} but extra-time periods listed: {:?}", u8::from(flag), listed),
                    );
                }
            }
            if let Some(flag) = shootout {
                if has(Period::Shootout) != flag {
                    r.push(&md::SHOOTOUT_PERIOD, "/match/periods", format!("has_shootout is {}", u8::from(flag)));
                }
            }
            let whistles = meta.whistles();
            for p in seen.iter().copied().collect::<std::collections::BTreeSet<_>>() {
                let find = |sub| {
                    whistles.iter().position(|w| {
                        w.whistle_type.known().and_then(|t| t.period()) == Some(p) && w.sub_type.known() == Some(sub)
                    })
                };
                match (find(WhistleSubType::Start), find(WhistleSubType::End)) {
                    (Some(s), Some(e)) => {
                        if let (Some(ts), Some(te)) = (whistles[s].time.value(), whistles[e].time.value()) {
                            if te < ts {
                                r.push(&md::WHISTLE_ORDER, format!("/match/whistles/{e}/time"), format!("{p} ends before it starts"));
                            }
                        }
                    }
                    _ => r.push(&md::WHISTLE_COVERAGE, "/match/whistles", format!("{p} lacks a start or end whistle")),
                }
            }
        }
        if let Some(w) = m.whistles.value() {
            common::whistles(r, WhistleRules { type_rule: &md::WHISTLE_TYPE, sub_type_rule: &md::WHISTLE_SUB_TYPE }, "/match/whistles", w);
        }
        if let Some(misc) = m.misc.value() {
            common::flag(r, &md::FLAG_RANGE, "/match/misc/open_roof", &misc.open_roof);
        }
        if let Some(res) = m.result.value() {
            let base = "/match/result";
            for (name, f) in [("final", &res.final_result), ("extratime", &res.extratime), ("shootout", &res.shootout)] {
                common::negative_goals(r, &md::NEGATIVE_GOALS, &format!("{base}/{name}"), f);
            }
            for (name, f, flag) in [("extratime", &res.extratime, extratime), ("shootout", &res.shootout, shootout)] {
                if flag == Some(false) && matches!(f, Field::Value(_) | Field::Invalid(_)) {
                    r.push(&md::RESULT_UNEXPECTED, format!("{base}/{name}"), format!("{name} result present but its flag is 0"));
                }
            }
            common::winner(
                r,
                WinnerRules { unknown: &md::WINNER_UNKNOWN, inconsistent: &md::WINNER_INCONSISTENT },
                &format!("{base}/final"),
                &res.final_result,
                &res.shootout,
                meta.teams(),
            );
        }
    }

    if let Some(teams) = meta.teams() {
        common::roster(r, &ROSTER, teams);
    }

    if let Some(s) = meta.stadium.value() {
        let _ = s;
        pitch(r, meta.pitch());
    }

    if let Some(info) = meta.info() {
        common::flag(r, &md::FLAG_RANGE, "/meta/limb_tracking", &info.limb_tracking);
        if let Some(fps) = info.fps_tracking.get().filter(|f| *f <= 0) {
            r.push(&md::FPS_TRACKING, "/meta/fps_tracking", format!("fps_tracking is {fps}"));
        }
        if let Some(fps) = info.fps_ball.get().filter(|f| *f <= 0) {
            r.push(&md::FPS_BALL, "/meta/fps_ball", format!("fps_ball is {fps}"));
        }
        match (info.limb_tracking.truth(), &info.limb_nodes) {
            (Some(false), Field::Value(_)) => {
                r.push(&md::LIMB_NODES_UNEXPECTED, "/meta/limb_nodes", "limb_tracking is 0");
            }
            (Some(true), Field::Value(raw)) => {
                skeleton::hierarchy_findings(raw, "/meta/limb_nodes", r);
            }
            _ => {}
        }
        common::code(r, &md::SOURCE_TYPE, "/meta/source_type", &info.source_type);
        common::code(r, &md::PERSPECTIVE, "/meta/perspective", &info.perspective);
        if let Some(v) = info.version.value() {
            for (key, f) in [("cdf", &v.cdf), ("event", &v.event), ("tracking", &v.tracking)] {
                if let Some(text) = f.value().filter(|t| !is_dotted_version(t)) {
                    r.push(&md::VERSION, format!("/meta/version/{key}"), format!("`{text}` is not a dotted numeric version"));
                }
            }
        }
        if let Some(sys) = info.system.value() {
            common::code(r, &md::TRACKING_TYPE, "/meta/system/tracking_type", &sys.tracking_type);
        }
    }

    if let Some(periods) = meta.periods.value() {
        let home = meta.teams().and_then(|t| t.home_id()).map(|i| i.as_str());
        let away = meta.teams().and_then(|t| t.away_id()).map(|i| i.as_str());
        for (i, p) in periods.iter().enumerate() {
            let base = format!("/periods/{i}");
            common::code(r, &md::PERIOD_NAME, &format!("{base}/type"), &p.period_type);
            if let (Some(s), Some(e)) = (p.time_start.value(), p.time_end.value()) {
                if s >= e {
                    r.push(&md::PERIOD_TIMES, format!("{base}/time_end"), "time_start is not before time_end");
                }
            }
            if let (Some(s), Some(e)) = (p.frame_id_start.get(), p.frame_id_end.get()) {
                if s > e {
                    r.push(&md::PERIOD_FRAMES, format!("{base}/frame_id_end"), format!("frame_id_start {s} > frame_id_end {e}"));
                }
            }
            let left = p.left_team_id.id_str();
            let right = p.right_team_id.id_str();
            if let (Some(h), Some(a)) = (home, away) {
                let teams = [h, a];
                for (key, side) in [("left_team_id", left), ("right_team_id", right)] {
                    if let Some(t) = side.filter(|t| !teams.contains(t)) {
                        r.push(&md::PERIOD_SIDES, format!("{base}/{key}"), format!("`{t}` is not a roster team"));
                    }
                }
            }
            if let (Some(l), Some(rt)) = (left, right) {
                if l == rt {
                    r.push(&md::PERIOD_SIDES, format!("{base}/right_team_id"), "left and right are the same team");
                }
            }
        }
    }
    report
}

fn pitch(r: &mut Report, geometry: PitchGeometry) {
    for (key, value, max) in [
        ("pitch_length", geometry.length, PitchGeometry::<f64>::MAX_LENGTH),
        ("pitch_width", geometry.width, PitchGeometry::<f64>::MAX_WIDTH),
    ] {
        let Some(v) = value else { continue };
        if v <= 0.0 {
            r.push(&md::PITCH_POSITIVE, format!("/stadium/{key}"), format!("{key} is {v}"));
        } else if v > max {
            r.push(&md::PITCH_SANITY, format!("/stadium/{key}"), format!("{key} {v} exceeds {max}"));
        }
    }
}

/// `<digits>x<digits>`.
pub(crate) fn is_resolution(text: &str) -> bool {
    let Some((w, h)) = text.split_once('x') else { return false };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    digits(w) && digits(h)
}

/// Validates a video footage meta document.
pub fn validate_video_meta(video: &VideoMeta) -> Report {
    let mut report = Report::new(Component::Video);
    presence::check_record_into(video, &mut report);
    let r = &mut report;
    if let Some(fps) = video.fps.get().filter(|f| *f <= 0) {
        r.push(&vd::FPS, "/fps", format!("fps is {fps}"));
    }
    if let Some(res) = video.resolution.value().filter(|t| !is_resolution(t)) {
        r.push(&vd::RESOLUTION, "/resolution", format!("`{res}` is not <width>x<height>"));
    }
    common::code(r, &vd::OPERATION_TYPE, "/operation_type", &video.operation_type);
    common::code(r, &vd::PERSPECTIVE, "/perspective", &video.perspective);
    if let Some(w) = video.whistles.value() {
        common::whistles(r, WhistleRules { type_rule: &vd::WHISTLE_TYPE, sub_type_rule: &vd::WHISTLE_SUB_TYPE }, "/whistles", w);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn versions() {
        assert!(is_dotted_version("0.0.1"));
        assert!(is_dotted_version("1.2"));
        assert!(!is_dotted_version("1"));
        assert!(!is_dotted_version("v1.2"));
        assert!(!is_dotted_version("1..2"));
    }

    #[test]
    fn resolutions() {
        assert!(is_resolution("1920x1080"));
        assert!(!is_resolution("1920X1080"));
        assert!(!is_resolution("x1080"));
        assert!(!is_resolution("1920 x 1080"));
    }

    #[test]
    fn video_checks() {
        let v = VideoMeta {
            fps: Field::Value(0),
            resolution: Field::Value("hd".into()),
            ..VideoMeta::default()
        };
        let r = validate_video_meta(&v);
        assert!(r.has_rule("VD-100") && r.has_rule("VD-101") && r.has_rule("VD-001"));
        assert_eq!(r.findings().iter().find(|f| f.rule_id == "VD-001").unwrap().severity, crate::Severity::Warning);
    }
}
