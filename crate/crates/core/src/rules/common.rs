//! Checks shared by the match sheet and match meta validators.

use std::collections::{HashMap, HashSet};

use crate::model::{Code, EntityId, Field, Flag, Score, Teams, Vocabulary, Whistle};
use crate::report::{Report, Rule};

pub(crate) fn flag(report: &mut Report, rule: &Rule, path: &str, field: &Field<Flag>) {
    if let Field::Value(f) = field {
        if !f.is_valid() {
            report.push(rule, path, format!("flag is {}, must be 0 or 1", f.0));
        }
    }
}

pub(crate) fn code<E: Vocabulary>(report: &mut Report, rule: &Rule, path: &str, field: &Field<Code<E>>) {
    if let Field::Value(Code::Unknown(text)) = field {
        report.push(rule, path, format!("`{text}` is not one of {}", E::names().join(", ")));
    }
}

pub(crate) fn score_pair(field: &Field<Score>) -> Option<(i64, i64)> {
    field.value().and_then(Score::pair)
}

pub(crate) fn negative_goals(report: &mut Report, rule: &Rule, path: &str, field: &Field<Score>) {
    if let Some(s) = field.value() {
        for (side, v) in [("home", s.home.get()), ("away", s.away.get())] {
            if let Some(g) = v.filter(|g| *g < 0) {
                report.push(rule, format!("{path}/{side}"), format!("goal count {g} is negative"));
            }
        }
    }
}

/// The team that must be named the winner: the side ahead in `final`, or
/// the shootout winner when `final` is level. `None` for a draw.
pub(crate) fn expected_winner<'t>(
    final_score: (i64, i64),
    shootout: Option<(i64, i64)>,
    home: &'t str,
    away: &'t str,
) -> Option<&'t str> {
    let pick = |(h, a): (i64, i64)| match h.cmp(&a) {
        std::cmp::Ordering::Greater => Some(home),
        std::cmp::Ordering::Less => Some(away),
        std::cmp::Ordering::Equal => None,
    };
    pick(final_score).or_else(|| shootout.and_then(pick))
}

pub(crate) struct WinnerRules {
    pub unknown: &'static Rule,
    pub inconsistent: &'static Rule,
}

pub(crate) fn winner(
    report: &mut Report,
    rules: WinnerRules,
    path: &str,
    final_field: &Field<Score>,
    shootout: &Field<Score>,
    teams: Option<&Teams>,
) {
    let Some(fin) = final_field.value() else { return };
    let (Some(home), Some(away)) = (teams.and_then(Teams::home_id), teams.and_then(Teams::away_id)) else {
        return;
    };
    let winner_path = format!("{path}/winning_team_id");
    if let Some(w) = fin.winning_team_id.id_str() {
        if w != home.as_str() && w != away.as_str() {
            report.push(rules.unknown, &winner_path, format!("`{w}` is not a team of the match"));
            return;
        }
    }
    let Some(pair) = fin.pair() else { return };
    let expected = expected_winner(pair, score_pair(shootout), home.as_str(), away.as_str());
    let actual = match &fin.winning_team_id {
        Field::Value(id) => Some(id.as_str()),
        Field::Missing => None,
        Field::Absent | Field::Invalid(_) => return,
    };
    if expected != actual {
        report.push(
            rules.inconsistent,
            &winner_path,
            format!(
                "result {}-{} implies winner {}, found {}",
                pair.0,
                pair.1,
                expected.unwrap_or("none (draw)"),
                actual.unwrap_or("none")
            ),
        );
    }
}

pub(crate) struct RosterRules {
    pub flag: &'static Rule,
    pub same_teams: &'static Rule,
    pub team_unknown: &'static Rule,
    pub team_block: &'static Rule,
    pub jersey_range: &'static Rule,
    pub jersey_duplicate: &'static Rule,
    pub starter_count: &'static Rule,
    pub player_duplicate: &'static Rule,
    pub position_unknown: &'static Rule,
    pub position_duplicate: &'static Rule,
    pub foot: &'static Rule,
    pub height: Option<&'static Rule>,
    pub jersey_colour: Option<&'static Rule>,
}

pub(crate) fn is_hex_colour(text: &str) -> bool {
    text.len() == 7 && text.starts_with('#') && text[1..].chars().all(|c| c.is_ascii_hexdigit())
}

/// Team and roster checks. Returns player id to team id for the players
/// listed, when both teams list their players.
pub(crate) fn roster(report: &mut Report, rules: &RosterRules, teams: &Teams) -> Option<HashMap<String, String>> {
    let home = teams.home_id().map(EntityId::as_str);
    let away = teams.away_id().map(EntityId::as_str);
    if let (Some(h), Some(a)) = (home, away) {
        if h == a {
            report.push(rules.same_teams, "/teams/away/id", format!("home and away are both `{h}`"));
        }
    }
    let mut seen_ids = HashSet::new();
    let mut players = HashMap::new();
    let mut both_listed = true;
    for (side, team) in [("home", &teams.home), ("away", &teams.away)] {
        let Some(team) = team.value() else {
            both_listed = false;
            continue;
        };
        let base = format!("/teams/{side}");
        if let (Some(rule), Some(colour)) = (rules.jersey_colour, team.jersey_colour.value()) {
            if !is_hex_colour(colour) {
                report.push(rule, format!("{base}/jersey_colour"), format!("`{colour}` is not #RRGGBB"));
            }
        }
        let Some(list) = team.players.value() else {
            both_listed = false;
            continue;
        };
        let team_id = team.id.id_str();
        let mut jerseys = HashSet::new();
        let mut positions = HashSet::new();
        let mut starters = 0;
        let mut starters_known = true;
        for (i, p) in list.iter().enumerate() {
            let pp = format!("{base}/players/{i}");
            flag(report, rules.flag, &format!("{pp}/is_starter"), &p.is_starter);
            flag(report, rules.flag, &format!("{pp}/is_captain"), &p.is_captain);
            if let Some(id) = p.id.id_str() {
                if !seen_ids.insert(id.to_owned()) {
                    report.push(rules.player_duplicate, format!("{pp}/id"), format!("player `{id}` listed twice"));
                }
                if let Some(t) = p.team_id.id_str() {
                    players.insert(id.to_owned(), t.to_owned());
                }
            }
            if let Some(t) = p.team_id.id_str() {
                if home.is_some() && away.is_some() && Some(t) != home && Some(t) != away {
                    report.push(rules.team_unknown, format!("{pp}/team_id"), format!("`{t}` is neither team"));
                } else if team_id.is_some_and(|tid| tid != t) {
                    report.push(
                        rules.team_block,
                        format!("{pp}/team_id"),
                        format!("`{t}` listed under {side} team `{}`", team_id.unwrap_or_default()),
                    );
                }
            }
            if let Some(n) = p.jersey_number.get() {
                if n < 1 {
                    report.push(rules.jersey_range, format!("{pp}/jersey_number"), format!("jersey number {n}"));
                } else if !jerseys.insert(n) {
                    report.push(rules.jersey_duplicate, format!("{pp}/jersey_number"), format!("jersey number {n} used twice"));
                }
            }
            match p.is_starter.truth() {
                Some(true) => {
                    starters += 1;
                    if let Some(label) = p.position.known() {
                        if !positions.insert(label) {
                            report.push(
                                rules.position_duplicate,
                                format!("{pp}/position"),
                                format!("{} used by more than one starter", label.as_str()),
                            );
                        }
                    }
                }
                Some(false) => {}
                None => starters_known = false,
            }
            code(report, rules.position_unknown, &format!("{pp}/position"), &p.position);
            code(report, rules.foot, &format!("{pp}/foot"), &p.foot);
            if let (Some(rule), Some(h)) = (rules.height, p.height.get()) {
                if h <= 0 {
                    report.push(rule, format!("{pp}/height"), format!("height {h}"));
                }
            }
        }
        if starters_known && !list.is_empty() && starters != 11 {
            report.push(rules.starter_count, format!("{base}/players"), format!("{starters} starters"));
        }
    }
    both_listed.then_some(players)
}

pub(crate) struct WhistleRules {
    pub type_rule: &'static Rule,
    pub sub_type_rule: &'static Rule,
}

pub(crate) fn whistles(report: &mut Report, rules: WhistleRules, base: &str, list: &[Whistle]) {
    for (i, w) in list.iter().enumerate() {
        code(report, rules.type_rule, &format!("{base}/{i}/type"), &w.whistle_type);
        code(report, rules.sub_type_rule, &format!("{base}/{i}/sub_type"), &w.sub_type);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winners() {
        assert_eq!(expected_winner((2, 2), Some((4, 5)), "h", "a"), Some("a"));
        assert_eq!(expected_winner((1, 0), None, "h", "a"), Some("h"));
        assert_eq!(expected_winner((1, 1), None, "h", "a"), None);
    }

    #[test]
    fn hex_colours() {
        assert!(is_hex_colour("#FFC107"));
        assert!(is_hex_colour("#ffc107"));
        assert!(!is_hex_colour("FFC107"));
        assert!(!is_hex_colour("#FFC10"));
        assert!(!is_hex_colour("#GGC107"));
    }
}
