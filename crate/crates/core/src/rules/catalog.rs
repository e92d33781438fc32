//! The rule catalog. Ids are `<PREFIX>-<NNN>` and never reused.
//!
//! Numbering per prefix: `001`-`069` field presence (see
//! [`super::presence`]), `070`-`099` structural decoding problems, `100`
//! and up semantic checks.

use crate::report::{Component, Rule, Severity};

/// Decoding problems shared by every component. Each prefix has its own
/// copy of these rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structural {
    RequiredValue,
    InvalidUtf8,
    MalformedJson,
    NotAnObject,
    WrongType,
    InvalidTimestamp,
    SentinelUnderNull,
    KeyCollision,
    NonCanonical,
    MalformedId,
    BlankLine,
}

macro_rules! rule_set {
    ($(#[$doc:meta])* $module:ident, $prefix:literal { $($name:ident = $num:literal, $sev:ident, $summary:literal;)* }) => {
        $(#[$doc])*
        pub mod $module {
            use super::*;

            pub static REQUIRED_VALUE: Rule = Rule { id: concat!($prefix, "-070"), severity: Severity::Error, summary: "identifying field is present but its value is missing" };
            pub static INVALID_UTF8: Rule = Rule { id: concat!($prefix, "-080"), severity: Severity::Error, summary: "input is not valid UTF-8" };
            pub static MALFORMED_JSON: Rule = Rule { id: concat!($prefix, "-081"), severity: Severity::Error, summary: "malformed JSON" };
            pub static NOT_AN_OBJECT: Rule = Rule { id: concat!($prefix, "-082"), severity: Severity::Error, summary: "top-level value is not a JSON object" };
            pub static WRONG_TYPE: Rule = Rule { id: concat!($prefix, "-083"), severity: Severity::Error, summary: "value has the wrong primitive type" };
            pub static INVALID_TIMESTAMP: Rule = Rule { id: concat!($prefix, "-084"), severity: Severity::Error, summary: "timestamp cannot be parsed" };
            pub static SENTINEL_UNDER_NULL: Rule = Rule { id: concat!($prefix, "-085"), severity: Severity::Warning, summary: "sentinel-like value under null policy" };
            pub static KEY_COLLISION: Rule = Rule { id: concat!($prefix, "-086"), severity: Severity::Warning, summary: "unknown key differs from a reserved name only by case" };
            pub static NON_CANONICAL: Rule = Rule { id: concat!($prefix, "-087"), severity: Severity::Info, summary: "accepted in a non-canonical spelling or location" };
            pub static MALFORMED_ID: Rule = Rule { id: concat!($prefix, "-088"), severity: Severity::Error, summary: "identifier is empty or has surrounding whitespace" };
            pub static BLANK_LINE: Rule = Rule { id: concat!($prefix, "-090"), severity: Severity::Warning, summary: "blank line in a JSON Lines stream" };

            $(pub static $name: Rule = Rule { id: concat!($prefix, "-", $num), severity: Severity::$sev, summary: $summary };)*

            #[allow(dead_code)]
            pub(crate) static STRUCTURAL: [&Rule; 11] = [
                &REQUIRED_VALUE, &INVALID_UTF8, &MALFORMED_JSON, &NOT_AN_OBJECT, &WRONG_TYPE,
                &INVALID_TIMESTAMP, &SENTINEL_UNDER_NULL, &KEY_COLLISION, &NON_CANONICAL,
                &MALFORMED_ID, &BLANK_LINE,
            ];

            /// Structural and semantic rules of this prefix.
            pub static RULES: &[&Rule] = &[
                &REQUIRED_VALUE, &INVALID_UTF8, &MALFORMED_JSON, &NOT_AN_OBJECT, &WRONG_TYPE,
                &INVALID_TIMESTAMP, &SENTINEL_UNDER_NULL, &KEY_COLLISION, &NON_CANONICAL,
                &MALFORMED_ID, &BLANK_LINE, $(&$name),*
            ];
        }
    };
}

rule_set!(
    /// Match sheet.
    ms, "MS" {
    FLAG_RANGE = "100", Error, "boolean flag outside {0, 1}";
    CARD_TYPE = "101", Error, "card_type outside {yellow_card, red_card, second_yellow_card}";
    NEGATIVE_GOALS = "102", Error, "negative goal count";
    RESULT_MONOTONIC = "103", Error, "cumulative result decreases from one phase to the next";
    EXTRATIME_UNEXPECTED = "104", Error, "extra-time result present although has_extratime is 0";
    SHOOTOUT_UNEXPECTED = "105", Error, "shootout result present although has_shootout is 0";
    WINNER_UNKNOWN = "106", Error, "winning_team_id is neither the home nor the away team";
    WINNER_INCONSISTENT = "107", Error, "winning_team_id disagrees with the result";
    PLAYER_TEAM_UNKNOWN = "108", Error, "player team_id is neither the home nor the away team";
    PLAYER_TEAM_BLOCK = "109", Error, "player team_id differs from the team it is listed under";
    JERSEY_RANGE = "110", Error, "jersey_number below 1";
    JERSEY_DUPLICATE = "111", Error, "jersey_number repeated within a team";
    STARTER_COUNT = "112", Warning, "team does not have exactly 11 starters";
    PLAYER_DUPLICATE = "113", Error, "player id repeated";
    UNKNOWN_PLAYER = "114", Error, "match event references a player not on either roster";
    POSITION_UNKNOWN = "115", Error, "position label outside the closed set";
    POSITION_DUPLICATE = "116", Error, "position label repeated among a team's starters";
    FOOT = "117", Error, "foot outside {left, right, both}";
    HEIGHT = "118", Error, "height is not positive";
    SAME_TEAMS = "119", Error, "home and away team ids are identical";
});

rule_set!(
    /// Match meta.
    md, "MD" {
    FLAG_RANGE = "100", Error, "boolean flag outside {0, 1}";
    PERIOD_NAME = "101", Error, "period name outside the period set";
    WHISTLE_TYPE = "102", Warning, "whistle type outside the documented set";
    WHISTLE_SUB_TYPE = "103", Warning, "whistle sub_type outside {start, end}";
    EXTRATIME_PERIODS = "104", Error, "extra-time periods disagree with has_extratime";
    SHOOTOUT_PERIOD = "105", Error, "shootout period disagrees with has_shootout";
    VERSION = "106", Error, "version is not a dotted numeric version";
    JERSEY_COLOUR = "107", Error, "jersey_colour is not a #RRGGBB hexadecimal colour";
    PERIOD_TIMES = "108", Error, "period time_start is not before time_end";
    PERIOD_SIDES = "109", Error, "left_team_id and right_team_id are not the two roster teams";
    FPS_TRACKING = "110", Error, "fps_tracking is not positive";
    LIMB_NODES_UNEXPECTED = "111", Error, "limb_nodes present although limb_tracking is 0";
    PITCH_SANITY = "112", Warning, "pitch dimension beyond 130 m by 100 m";
    PITCH_POSITIVE = "113", Error, "pitch dimension is not positive";
    NEGATIVE_GOALS = "114", Error, "negative goal count";
    WINNER_UNKNOWN = "115", Error, "winning_team_id is neither the home nor the away team";
    SOURCE_TYPE = "116", Error, "source_type outside {live, post_match}";
    PERSPECTIVE = "117", Warning, "perspective outside the documented set";
    TRACKING_TYPE = "118", Error, "tracking system type outside {mobile, in_stadium, broadcast}";
    WHISTLE_COVERAGE = "119", Warning, "played period lacks a start or end whistle";
    WHISTLE_ORDER = "120", Error, "period end whistle precedes its start whistle";
    FPS_BALL = "121", Error, "fps_ball is not positive";
    PLAYER_TEAM_UNKNOWN = "122", Error, "player team_id is neither the home nor the away team";
    PLAYER_TEAM_BLOCK = "123", Error, "player team_id differs from the team it is listed under";
    JERSEY_RANGE = "124", Error, "jersey_number below 1";
    JERSEY_DUPLICATE = "125", Error, "jersey_number repeated within a team";
    STARTER_COUNT = "126", Warning, "team does not have exactly 11 starters";
    PLAYER_DUPLICATE = "127", Error, "player id repeated";
    POSITION_UNKNOWN = "128", Error, "position label outside the closed set";
    POSITION_DUPLICATE = "129", Error, "position label repeated among a team's starters";
    FOOT = "130", Error, "foot outside {left, right, both}";
    SAME_TEAMS = "131", Error, "home and away team ids are identical";
    PERIOD_FRAMES = "132", Error, "period frame_id_start exceeds frame_id_end";
    RESULT_UNEXPECTED = "133", Error, "extra-time or shootout result present although its flag is 0";
    WINNER_INCONSISTENT = "134", Error, "winning_team_id disagrees with the result";
    PERIOD_DUPLICATE = "135", Error, "period listed more than once";
});

rule_set!(
    /// Video footage meta.
    vd, "VD" {
    FPS = "100", Error, "fps is not positive";
    RESOLUTION = "101", Error, "resolution is not <width>x<height>";
    OPERATION_TYPE = "102", Error, "operation_type outside {manual, automated}";
    PERSPECTIVE = "103", Error, "perspective outside the camera angle set";
    WHISTLE_TYPE = "104", Warning, "whistle type outside the documented set";
    WHISTLE_SUB_TYPE = "105", Warning, "whistle sub_type outside {start, end}";
});

rule_set!(
    /// Event stream records.
    ev, "EV" {
    FLAG_RANGE = "100", Error, "boolean flag outside {0, 1}";
    PERIOD = "101", Error, "period outside the period set";
    TYPE = "102", Error, "type outside {shot, pass, referee, misc}";
    SUB_TYPE = "103", Error, "sub_type not allowed for the event type";
    OUTCOME_DETAILED = "104", Error, "outcome_detailed not allowed for the event type";
    OUTCOME_CONSISTENCY = "105", Error, "outcome disagrees with outcome_detailed";
    BODY_PART_1 = "106", Error, "body_part_1 outside {left_foot, right_foot, foot, head, other}";
    BODY_PART_2 = "107", Error, "body_part_2 outside {left_foot, right_foot, foot, head, other}";
    LOCATION_1 = "108", Warning, "(x_1, y_1) more than 5 m outside the pitch";
    LOCATION_2 = "109", Warning, "(x_2, y_2) more than 5 m outside the pitch";
    XG_RANGE = "110", Error, "metrics.xg outside [0, 1]";
    XPASS_RANGE = "111", Error, "metrics.xpass outside [0, 1]";
    PACKING = "112", Error, "packing value is negative";
    TEAM_UNKNOWN = "113", Error, "team id is not a team of the match";
    PLAYER_UNKNOWN = "114", Error, "player id is not on the match rosters";
    PLAYER_TEAM = "115", Error, "player belongs to a different team than the paired team id";
    SUB_TYPE_MISSING = "116", Warning, "sub_type missing for a type without a None sub-type";
    FRAME_NEGATIVE = "117", Error, "referenced frame id is negative";
    TRACKING_LOCATION = "118", Warning, "tracking-block player position more than 5 m outside the pitch";
    MATCH_MISMATCH = "119", Error, "match id differs from the match meta";
});

rule_set!(
    /// Center-of-mass tracking frames.
    tr, "TR" {
    FLAG_RANGE = "100", Error, "boolean flag outside {0, 1}";
    PERIOD = "101", Error, "period outside the period set";
    FRAME_NEGATIVE = "102", Error, "frame_id is negative";
    PERIOD_START = "103", Error, "period must start at frame 0";
    FRAME_ORDER = "104", Error, "frame_id not strictly increasing within a period";
    FRAME_GAP = "105", Warning, "frame_id skips ahead within a period";
    PERIOD_ORDER = "106", Error, "period returns to an earlier period";
    PLAYER_DUPLICATE = "107", Error, "player id repeated within a frame";
    PLAYER_TEAM_BLOCK = "108", Error, "player team_id differs from the team it is listed under";
    PLAYER_BOUNDS = "109", Warning, "player more than 5 m outside the pitch";
    BALL_BOUNDS = "110", Warning, "ball more than 5 m outside the pitch";
    BALL_BELOW_GROUND = "111", Error, "ball z is negative";
    POSSESSION_ABSENT = "112", Info, "ball_status or ball_poss_team_id not provided";
    POSSESSION_TEAM = "113", Error, "ball_poss_team_id is neither team of the frame";
    TEAM_UNKNOWN = "114", Error, "team id is not a team of the match meta";
    PLAYER_UNKNOWN = "115", Error, "player id is not on the match meta rosters";
    MATCH_MISMATCH = "116", Error, "match id differs from the match meta";
    NEGATIVE_KINEMATICS = "117", Error, "speed or distance is negative";
    GEO_RANGE = "118", Error, "latitude or longitude out of range";
    SAME_TEAMS = "119", Error, "home and away team ids are identical";
});

rule_set!(
    /// Skeletal tracking frames and the skeletal hierarchy.
    sk, "SK" {
    HIERARCHY_SHAPE = "100", Error, "limb_nodes is not an array of node objects";
    NODE_NAME = "101", Error, "node name missing or not text";
    CHILD_RANGE = "102", Error, "child index out of range";
    MULTIPLE_PARENTS = "103", Error, "node has more than one parent";
    CYCLE = "104", Error, "child links form a cycle";
    MULTIPLE_ROOTS = "105", Error, "hierarchy does not have exactly one root";
    QUATERNION = "106", Error, "rotation is not a unit quaternion";
    NAME_CONVENTION = "107", Error, "node name is not snake_case with a left/right suffix";
    NAME_DUPLICATE = "108", Error, "node name repeated";
    SYMMETRY = "109", Warning, "left node lacks a mirrored right sibling";
    NODE_SHAPE = "110", Error, "translation, rotation or children malformed";
    LIMB_NAME = "120", Error, "limb name is not snake_case with a left/right suffix";
    LIMB_MISSING = "121", Error, "declared limb missing for a player";
    LIMB_UNKNOWN = "122", Error, "limb not declared in the hierarchy";
    PERIOD_START = "123", Error, "period must start at frame 0";
    FRAME_ORDER = "124", Error, "frame_id not strictly increasing within a period";
    FRAME_GAP = "125", Warning, "frame_id skips ahead within a period";
    PLAYER_DUPLICATE = "126", Error, "player id repeated within a frame";
    PERIOD = "127", Error, "period outside the period set";
    FRAME_NEGATIVE = "128", Error, "frame_id is negative";
    NO_HIERARCHY = "129", Error, "skeletal data without a declared hierarchy";
    DETACHED_NODE = "130", Warning, "parentless leaf node attached to the root";
});

rule_set!(
    /// Position labels and playing-direction conventions.
    pl, "PL" {
    UNKNOWN_LABEL = "001", Error, "position label outside the closed set";
    DUPLICATE_LABEL = "002", Error, "position label used twice in a lineup";
    GOALKEEPER_COUNT = "003", Error, "lineup does not have exactly one GK";
    LINEUP_SIZE = "004", Error, "lineup does not have 11 players";
    LINE_MEMBERSHIP = "005", Error, "label does not belong to its formation line";
    CENTRAL_IN_EVEN_LINE = "006", Error, "pure central label in a line of 2 or 4";
    PAIR = "007", Error, "two-player line is not a mirrored pair";
    BACK_THREE = "008", Error, "three-player defensive line is not LB, CB, RB";
    FULL_FIVE = "009", Error, "five-player line does not use all five labels";
    BAND_LABELS = "010", Error, "line of 4 or 5 uses DM or AM labels";
    SHOOTOUT_DIRECTION = "050", Warning, "shootout shot not taken towards the right goal";
    NON_FINITE = "060", Error, "non-finite float replaced by a missing value";
});

rule_set!(
    /// Cross-file bundle checks.
    xb, "XB" {
    MATCH_SHEET_MISSING = "001", Error, "bundle has no match sheet";
    AVAILABILITY = "002", Error, "event or tracking data without match meta";
    MATCH_ID = "003", Error, "components carry different match ids";
    ROSTER = "004", Error, "rosters differ between match sheet and meta";
    RESULT = "005", Error, "results differ between match sheet and meta";
    GOAL_TALLY = "006", Error, "goal events do not add up to the final result";
    PERIOD_UNDECLARED = "007", Error, "stream uses a period the meta does not list";
    SYNCED_WITHOUT_TRACKING = "008", Error, "event marked synced but the bundle has no tracking";
    DANGLING_FRAME = "009", Error, "event references a frame missing from the tracking stream";
    EVENT_WINDOW = "010", Warning, "event time outside its period's whistle window";
    UNSYNCED_FRAME_REF = "011", Warning, "unsynced event carries frame references";
    FRAME_BUDGET = "012", Warning, "frame count deviates from duration times fps by over 1%";
    FRAME_BUDGET_SKIPPED = "013", Info, "frame budget not checked";
    UNSYNCED = "014", Warning, "events and tracking both present but events are not synced";
    SKELETAL_UNDECLARED = "015", Error, "skeletal data but meta limb_tracking is not 1";
    TEAMS = "016", Error, "team ids differ between match sheet and meta";
    STATUS = "017", Error, "status flags differ between match sheet and meta";
    GOAL_UNATTRIBUTED = "018", Error, "goal scorer not on either roster";
    PERIOD_WHISTLES = "019", Warning, "stream period has no whistles in the meta";
});

fn set(component: Component) -> &'static [&'static Rule; 11] {
    match component {
        Component::Bundle => &xb::STRUCTURAL,
        Component::MatchSheet => &ms::STRUCTURAL,
        Component::Meta => &md::STRUCTURAL,
        Component::Video => &vd::STRUCTURAL,
        Component::Events => &ev::STRUCTURAL,
        Component::Tracking => &tr::STRUCTURAL,
        Component::Skeletal => &sk::STRUCTURAL,
    }
}

/// The structural rule of `kind` for a component's prefix.
pub fn structural(component: Component, kind: Structural) -> &'static Rule {
    set(component)[kind as usize]
}

/// Every catalogued rule, presence rules included, sorted by id.
pub fn all_rules() -> Vec<&'static Rule> {
    let mut all: Vec<&'static Rule> = [ms::RULES, md::RULES, vd::RULES, ev::RULES, tr::RULES, sk::RULES, pl::RULES, xb::RULES]
        .into_iter()
        .flatten()
        .copied()
        .collect();
    all.extend(super::presence::presence_rules());
    all.sort_by_key(|r| r.id);
    all
}

pub fn lookup(id: &str) -> Option<&'static Rule> {
    all_rules().into_iter().find(|r| r.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_are_unique_and_well_formed() {
        let all = all_rules();
        let mut seen = HashSet::new();
        for r in &all {
            assert!(seen.insert(r.id), "duplicate {}", r.id);
            let (prefix, num) = r.id.split_once('-').unwrap();
            assert!(["MS", "MD", "VD", "EV", "TR", "SK", "PL", "XB"].contains(&prefix));
            assert_eq!(num.len(), 3);
            assert!(num.chars().all(|c| c.is_ascii_digit()));
        }
    }

    #[test]
    fn structural_lookup_uses_prefix() {
        assert_eq!(structural(Component::Events, Structural::BlankLine).id, "EV-090");
        assert_eq!(structural(Component::Meta, Structural::WrongType).id, "MD-083");
        assert_eq!(structural(Component::Bundle, Structural::InvalidTimestamp).id, "XB-084");
        assert_eq!(structural(Component::Skeletal, Structural::RequiredValue).id, "SK-070");
    }
}
