use std::collections::HashMap;

use super::catalog::ms;
use super::common::{self, RosterRules, WinnerRules};
use super::presence;
use crate::model::{Field, MatchSheet, Score};
use crate::report::{Component, Report};

const ROSTER: RosterRules = RosterRules {
    flag: &ms::FLAG_RANGE,
    same_teams: &ms::SAME_TEAMS,
    team_unknown: &ms::PLAYER_TEAM_UNKNOWN,
    team_block: &ms::PLAYER_TEAM_BLOCK,
    jersey_range: &ms::JERSEY_RANGE,
    jersey_duplicate: &ms::JERSEY_DUPLICATE,
    starter_count: &ms::STARTER_COUNT,
    player_duplicate: &ms::PLAYER_DUPLICATE,
    position_unknown: &ms::POSITION_UNKNOWN,
    position_duplicate: &ms::POSITION_DUPLICATE,
    foot: &ms::FOOT,
    height: Some(&ms::HEIGHT),
    jersey_colour: None,
};

/// Validates a match sheet on its own.
pub fn validate_match_sheet(sheet: &MatchSheet) -> Report {
    let mut report = Report::new(Component::MatchSheet);
    presence::check_record_into(sheet, &mut report);
    let r = &mut report;

    if let Some(status) = sheet.status() {
        for (key, f) in [
            ("is_neutral", &status.is_neutral),
            ("has_extratime", &status.has_extratime),
            ("has_shootout", &status.has_shootout),
        ] {
            common::flag(r, &ms::FLAG_RANGE, &format!("/match/status/{key}"), f);
        }
    }
    let status = sheet.status();
    let extratime = status.and_then(|s| s.has_extratime.truth());
    let shootout = status.and_then(|s| s.has_shootout.truth());

    if let Some(result) = sheet.result() {
        let base = "/match/result";
        common::negative_goals(r, &ms::NEGATIVE_GOALS, &format!("{base}/final"), &result.final_result);
        common::negative_goals(r, &ms::NEGATIVE_GOALS, &format!("{base}/shootout"), &result.shootout);
        let mut previous: Option<(&str, (i64, i64))> = None;
        for (name, field) in result.phases() {
            common::negative_goals(r, &ms::NEGATIVE_GOALS, &format!("{base}/{name}"), field);
            if let Some(pair) = common::score_pair(field) {
                if let Some((prev_name, prev)) = previous {
                    if pair.0 < prev.0 || pair.1 < prev.1 {
                        r.push(
                            &ms::RESULT_MONOTONIC,
                            format!("{base}/{name}"),
                            format!("{name} {}-{} is below {prev_name} {}-{}", pair.0, pair.1, prev.0, prev.1),
                        );
                    }
                }
                previous = Some((name, pair));
            }
        }
        if extratime == Some(false) {
            for (name, field) in [("first_extratime", &result.first_extratime), ("second_extratime", &result.second_extratime)] {
                if is_given(field) {
                    r.push(&ms::EXTRATIME_UNEXPECTED, format!("{base}/{name}"), "has_extratime is 0");
                }
            }
        }
        if shootout == Some(false) && is_given(&result.shootout) {
            r.push(&ms::SHOOTOUT_UNEXPECTED, format!("{base}/shootout"), "has_shootout is 0");
        }
        common::winner(
            r,
            WinnerRules { unknown: &ms::WINNER_UNKNOWN, inconsistent: &ms::WINNER_INCONSISTENT },
            &format!("{base}/final"),
            &result.final_result,
            &result.shootout,
            sheet.teams(),
        );
    }

    let players = sheet.teams().and_then(|t| common::roster(r, &ROSTER, t));
    if let Some(events) = sheet.events.value() {
        let known = |id: &str| players.as_ref().is_none_or(|p: &HashMap<String, String>| p.contains_key(id));
        let refer = |r: &mut Report, path: String, field: &Field<crate::model::EntityId>| {
            if let Some(id) = field.id_str() {
                if !known(id) {
                    r.push(&ms::UNKNOWN_PLAYER, path, format!("player `{id}` is not on either roster"));
                }
            }
        };
        for (i, g) in events.goals.value().into_iter().flatten().enumerate() {
            let p = format!("/events/goals/{i}");
            common::flag(r, &ms::FLAG_RANGE, &format!("{p}/is_own_goal"), &g.is_own_goal);
            common::flag(r, &ms::FLAG_RANGE, &format!("{p}/is_penalty"), &g.is_penalty);
            refer(r, format!("{p}/goal_player_id"), &g.goal_player_id);
            refer(r, format!("{p}/goal_assist_id"), &g.goal_assist_id);
        }
        for (i, s) in events.substitutions.value().into_iter().flatten().enumerate() {
            let p = format!("/events/substitutions/{i}");
            refer(r, format!("{p}/in_player_id"), &s.in_player_id);
            refer(r, format!("{p}/out_player_id"), &s.out_player_id);
        }
        for (i, c) in events.cards.value().into_iter().flatten().enumerate() {
            let p = format!("/events/cards/{i}");
            common::code(r, &ms::CARD_TYPE, &format!("{p}/card_type"), &c.card_type);
            refer(r, format!("{p}/card_player_id"), &c.card_player_id);
        }
    }
    report
}

fn is_given(field: &Field<Score>) -> bool {
    matches!(field, Field::Value(_) | Field::Invalid(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    fn team(id: &str, prefix: &str) -> Team {
        Team {
            id: EntityId::new(id).unwrap().into(),
            players: Field::Value(
                (1..=11)
                    .map(|n| Player {
                        id: EntityId::new(format!("{prefix}{n}")).unwrap().into(),
                        team_id: EntityId::new(id).unwrap().into(),
                        jersey_number: Field::Value(n),
                        is_starter: Field::Value(Flag::TRUE),
                        ..Player::default()
                    })
                    .collect(),
            ),
            ..Team::default()
        }
    }

    fn sheet() -> MatchSheet {
        let id = |s: &str| Field::Value(EntityId::new(s).unwrap());
        MatchSheet {
            match_info: Field::Value(SheetMatch {
                id: id("m"),
                status: Field::Value(MatchStatus {
                    is_neutral: Field::Value(Flag::FALSE),
                    has_extratime: Field::Value(Flag::FALSE),
                    has_shootout: Field::Value(Flag::FALSE),
                    ..MatchStatus::default()
                }),
                result: Field::Value(ResultBreakdown {
                    final_result: Score::new(1, 0).with_winner(Some(EntityId::new("H").unwrap())).into(),
                    first_half: Score::new(0, 0).into(),
                    second_half: Score::new(1, 0).into(),
                    ..ResultBreakdown::default()
                }),
                ..SheetMatch::default()
            }),
            teams: Field::Value(Teams { home: team("H", "h").into(), away: team("A", "a").into(), ..Teams::default() }),
            referees: Field::Value(vec![Referee { id: id("r"), ..Referee::default() }]),
            events: Field::Value(SheetEvents {
                goals: Field::Value(vec![Goal {
                    goal_time: Field::Value(crate::codec::time::parse_timestamp("2024-08-29T14:30:00").unwrap()),
                    goal_player_id: id("h9"),
                    goal_assist_id: Field::Missing,
                    is_own_goal: Field::Value(Flag::FALSE),
                    is_penalty: Field::Value(Flag::FALSE),
                    ..Goal::default()
                }]),
                substitutions: Field::Value(vec![]),
                cards: Field::Value(vec![]),
                ..SheetEvents::default()
            }),
            meta: Field::Value(SheetMeta { vendor: Field::Value("v".into()), ..SheetMeta::default() }),
            ..MatchSheet::default()
        }
    }

    #[test]
    fn built_sheet_is_clean() {
        let r = validate_match_sheet(&sheet());
        assert!(r.is_empty(), "{}", r.to_text());
    }

    #[test]
    fn orange_card() {
        let mut s = sheet();
        if let Field::Value(e) = &mut s.events {
            e.cards = Field::Value(vec![Card {
                card_time: Field::Value(crate::codec::time::parse_timestamp("2024-08-29T14:40:00").unwrap()),
                card_player_id: EntityId::new("a3").unwrap().into(),
                card_type: Field::Value(Code::from_text("orange_card")),
                ..Card::default()
            }]);
        }
        let r = validate_match_sheet(&s);
        assert_eq!(r.findings().len(), 1);
        assert_eq!(r.findings()[0].rule_id, "MS-101");
        assert_eq!(r.findings()[0].path, "/events/cards/0/card_type");
    }

    #[test]
    fn shootout_flag_without_result() {
        let mut s = sheet();
        if let Field::Value(m) = &mut s.match_info {
            if let Field::Value(st) = &mut m.status {
                st.has_shootout = Field::Value(Flag::TRUE);
            }
        }
        let r = validate_match_sheet(&s);
        assert!(r.has_rule("MS-019"));
        assert!(r.has_errors());
    }

    #[test]
    fn flags_and_monotonicity() {
        let mut s = sheet();
        if let Field::Value(m) = &mut s.match_info {
            if let Field::Value(st) = &mut m.status {
                st.is_neutral = Field::Value(Flag(2));
            }
            if let Field::Value(res) = &mut m.result {
                res.first_half = Score::new(2, 0).into();
            }
        }
        let r = validate_match_sheet(&s);
        assert!(r.has_rule("MS-100"));
        assert!(r.has_rule("MS-103"));
    }

    #[test]
    fn winner_must_match_result() {
        let mut s = sheet();
        if let Field::Value(m) = &mut s.match_info {
            if let Field::Value(res) = &mut m.result {
                res.final_result = Score::new(1, 0).with_winner(Some(EntityId::new("A").unwrap())).into();
            }
        }
        assert!(validate_match_sheet(&s).has_rule("MS-107"));
    }

    #[test]
    fn unknown_scorer() {
        let mut s = sheet();
        if let Field::Value(e) = &mut s.events {
            if let Field::Value(g) = &mut e.goals {
                g[0].goal_player_id = EntityId::new("ghost").unwrap().into();
            }
        }
        assert!(validate_match_sheet(&s).has_rule("MS-114"));
    }
}
