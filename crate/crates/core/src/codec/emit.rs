//! Schema bindings: which keys each object has, in output order.

use serde_json::{Map, Value};

use super::sealed::Codec;
use super::{Decoder, Encoder};
use crate::model::*;

type Obj = Map<String, Value>;

const MATCH_REF: &[&str] = &["id"];
const STATUS: &[&str] = &["is_neutral", "has_extratime", "has_shootout"];
const SCORE: &[&str] = &["home", "away", "winning_team_id"];
const TEAMS: &[&str] = &["home", "away"];
const TEAM: &[&str] = &["id", "name", "short_name", "jersey_colour", "players"];
const PLAYER: &[&str] = &[
    "id",
    "team_id",
    "jersey_number",
    "is_starter",
    "alternative_id",
    "first_name",
    "last_name",
    "short_name",
    "position_group",
    "position",
    "is_captain",
    "date_of_birth",
    "height",
    "foot",
];
const WHISTLE: &[&str] = &["type", "sub_type", "time"];
const REFEREE: &[&str] = &["id", "first_name", "last_name", "short_name"];

const SHEET: &[&str] = &["match", "teams", "referees", "coaches", "events", "meta"];
const SHEET_MATCH: &[&str] = &["id", "status", "result"];
const BREAKDOWN: &[&str] = &[
    "final",
    "first_half",
    "second_half",
    "first_extratime",
    "second_extratime",
    "shootout",
];
const COACH: &[&str] = &["coach_id", "first_name", "last_name", "short_name"];
const SHEET_EVENTS: &[&str] = &["goals", "substitutions", "cards"];
const GOAL: &[&str] = &["goal_time", "goal_player_id", "goal_assist_id", "is_own_goal", "is_penalty"];
const SUBSTITUTION: &[&str] = &["in_time", "in_player_id", "out_time", "out_player_id"];
const CARD: &[&str] = &["card_time", "card_player_id", "card_type"];
const SHEET_META: &[&str] = &["vendor"];

const META: &[&str] = &["competition", "season", "match", "teams", "stadium", "meta", "periods"];
const COMPETITION: &[&str] = &["id", "name", "format"];
const SEASON: &[&str] = &["id", "name"];
const META_MATCH: &[&str] = &[
    "id",
    "kickoff_time",
    "periods",
    "result",
    "status",
    "whistles",
    "round",
    "scheduled_kickoff_time",
    "local_kickoff_time",
    "misc",
];
const META_RESULT: &[&str] = &["final", "extratime", "shootout"];
const MISC: &[&str] = &["country", "city", "precipitation", "open_roof"];
const STADIUM: &[&str] = &["id", "pitch_length", "pitch_width", "name", "turf"];
const META_INFO: &[&str] = &[
    "fps_tracking",
    "limb_tracking",
    "limb_nodes",
    "source_type",
    "perspective",
    "version",
    "vendors",
    "id_space",
    "fps_ball",
    "system",
];
const VERSIONS: &[&str] = &["cdf", "event", "tracking"];
const VENDORS: &[&str] = &["event", "tracking", "video"];
const ID_SPACE: &[&str] = &["match_data", "event", "tracking"];
const SYSTEM: &[&str] = &[
    "tracking_type",
    "tracking_version",
    "event_type",
    "event_version",
    "ball_status_type",
    "ball_possession_type",
];
const PERIOD_INFO: &[&str] = &[
    "type",
    "time_start",
    "time_end",
    "frame_id_start",
    "frame_id_end",
    "left_team_id",
    "right_team_id",
];

const VIDEO: &[&str] = &["match_id", "fps", "resolution", "operation_type", "perspective", "whistles"];

const EVENT: &[&str] = &["match", "meta", "event", "tracking"];
const EVENT_META: &[&str] = &["is_synced"];
const EVENT_BODY: &[&str] = &[
    "id",
    "time",
    "period",
    "type",
    "sub_type",
    "outcome",
    "outcome_detailed",
    "player_id_1",
    "team_id_1",
    "player_id_2",
    "team_id_2",
    "x_1",
    "y_1",
    "x_2",
    "y_2",
    "body_part_1",
    "body_part_2",
    "metrics",
];
const METRICS: &[&str] = &["xg", "xpass", "packing_traditional", "packing_horizontal"];
const EVENT_TRACKING: &[&str] = &[
    "frame_id_1",
    "frame_id_2",
    "x_player_1",
    "y_player_1",
    "x_player_2",
    "y_player_2",
];

const FRAME: &[&str] = &[
    "frame_id",
    "period",
    "match",
    "teams",
    "ball",
    "ball_status",
    "ball_poss_team_id",
    "vendor",
    "referees",
];
const FRAME_TEAM: &[&str] = &["id", "players"];
const FRAME_PLAYER: &[&str] = &["id", "team_id", "x", "y", "z", "dist", "acc", "vel", "is_visible", "lat", "long"];
const BALL: &[&str] = &["x", "y", "z", "dist", "acc", "vel"];
const FRAME_VENDOR: &[&str] = &["event", "tracking"];
const FRAME_REFEREE: &[&str] = &["id", "x", "y", "z"];
const SKELETON_FRAME: &[&str] = &["frame_id", "period", "match", "teams"];
const SKELETON_PLAYER: &[&str] = &["id", "team_id"];
const LIMB: &[&str] = &["x", "y", "z"];

const STREAM: PeriodSpelling = PeriodSpelling::Stream;

// Shared pieces.

fn match_ref(d: &mut Decoder<'_>, m: &Obj) -> MatchRef {
    MatchRef {
        id: d.id(m, "id"),
        extras: d.extras(m, MATCH_REF),
    }
}

fn put_match_ref(e: &mut Encoder, r: &MatchRef) -> Obj {
    let mut m = Obj::new();
    e.id(&mut m, "id", &r.id);
    e.extras(&mut m, &r.extras);
    m
}

fn status(d: &mut Decoder<'_>, m: &Obj) -> MatchStatus {
    MatchStatus {
        is_neutral: d.flag(m, "is_neutral"),
        has_extratime: d.flag(m, "has_extratime"),
        has_shootout: d.flag(m, "has_shootout"),
        extras: d.extras(m, STATUS),
    }
}

fn put_status(e: &mut Encoder, s: &MatchStatus) -> Obj {
    let mut m = Obj::new();
    e.flag(&mut m, "is_neutral", &s.is_neutral);
    e.flag(&mut m, "has_extratime", &s.has_extratime);
    e.flag(&mut m, "has_shootout", &s.has_shootout);
    e.extras(&mut m, &s.extras);
    m
}

fn score(d: &mut Decoder<'_>, m: &Obj) -> Score {
    Score {
        home: d.int(m, "home"),
        away: d.int(m, "away"),
        winning_team_id: d.id(m, "winning_team_id"),
        extras: d.extras(m, SCORE),
    }
}

fn put_score(e: &mut Encoder, s: &Score) -> Obj {
    let mut m = Obj::new();
    e.int(&mut m, "home", &s.home);
    e.int(&mut m, "away", &s.away);
    e.id(&mut m, "winning_team_id", &s.winning_team_id);
    e.extras(&mut m, &s.extras);
    m
}

fn player(d: &mut Decoder<'_>, m: &Obj) -> Player {
    Player {
        id: d.id(m, "id"),
        team_id: d.id(m, "team_id"),
        jersey_number: d.int(m, "jersey_number"),
        is_starter: d.flag(m, "is_starter"),
        alternative_id: d.text(m, "alternative_id"),
        first_name: d.text(m, "first_name"),
        last_name: d.text(m, "last_name"),
        short_name: d.text(m, "short_name"),
        position_group: d.text(m, "position_group"),
        position: d.code(m, "position"),
        is_captain: d.flag(m, "is_captain"),
        date_of_birth: d.text(m, "date_of_birth"),
        height: d.int(m, "height"),
        foot: d.code(m, "foot"),
        extras: d.extras(m, PLAYER),
    }
}

fn put_player(e: &mut Encoder, p: &Player) -> Obj {
    let mut m = Obj::new();
    e.id(&mut m, "id", &p.id);
    e.id(&mut m, "team_id", &p.team_id);
    e.int(&mut m, "jersey_number", &p.jersey_number);
    e.flag(&mut m, "is_starter", &p.is_starter);
    e.text(&mut m, "alternative_id", &p.alternative_id);
    e.text(&mut m, "first_name", &p.first_name);
    e.text(&mut m, "last_name", &p.last_name);
    e.text(&mut m, "short_name", &p.short_name);
    e.text(&mut m, "position_group", &p.position_group);
    e.code(&mut m, "position", &p.position);
    e.flag(&mut m, "is_captain", &p.is_captain);
    e.text(&mut m, "date_of_birth", &p.date_of_birth);
    e.int(&mut m, "height", &p.height);
    e.code(&mut m, "foot", &p.foot);
    e.extras(&mut m, &p.extras);
    m
}

fn team(d: &mut Decoder<'_>, m: &Obj) -> Team {
    Team {
        id: d.id(m, "id"),
        name: d.text(m, "name"),
        short_name: d.text(m, "short_name"),
        jersey_colour: d.text(m, "jersey_colour"),
        players: d.objects(m, "players", player),
        extras: d.extras(m, TEAM),
    }
}

fn put_team(e: &mut Encoder, t: &Team) -> Obj {
    let mut m = Obj::new();
    e.id(&mut m, "id", &t.id);
    e.text(&mut m, "name", &t.name);
    e.text(&mut m, "short_name", &t.short_name);
    e.text(&mut m, "jersey_colour", &t.jersey_colour);
    e.objects(&mut m, "players", &t.players, put_player);
    e.extras(&mut m, &t.extras);
    m
}

fn teams(d: &mut Decoder<'_>, m: &Obj) -> Teams {
    Teams {
        home: d.object(m, "home", team),
        away: d.object(m, "away", team),
        extras: d.extras(m, TEAMS),
    }
}

fn put_teams(e: &mut Encoder, t: &Teams) -> Obj {
    let mut m = Obj::new();
    e.object(&mut m, "home", &t.home, put_team);
    e.object(&mut m, "away", &t.away, put_team);
    e.extras(&mut m, &t.extras);
    m
}

fn whistle(d: &mut Decoder<'_>, m: &Obj) -> Whistle {
    Whistle {
        whistle_type: d.code(m, "type"),
        sub_type: d.code(m, "sub_type"),
        time: d.time(m, "time"),
        extras: d.extras(m, WHISTLE),
    }
}

fn put_whistle(e: &mut Encoder, w: &Whistle) -> Obj {
    let mut m = Obj::new();
    e.code(&mut m, "type", &w.whistle_type);
    e.code(&mut m, "sub_type", &w.sub_type);
    e.time(&mut m, "time", &w.time);
    e.extras(&mut m, &w.extras);
    m
}

fn referee(d: &mut Decoder<'_>, m: &Obj) -> Referee {
    Referee {
        id: d.id(m, "id"),
        first_name: d.text(m, "first_name"),
        last_name: d.text(m, "last_name"),
        short_name: d.text(m, "short_name"),
        extras: d.extras(m, REFEREE),
    }
}

fn put_referee(e: &mut Encoder, r: &Referee) -> Obj {
    let mut m = Obj::new();
    e.id(&mut m, "id", &r.id);
    e.text(&mut m, "first_name", &r.first_name);
    e.text(&mut m, "last_name", &r.last_name);
    e.text(&mut m, "short_name", &r.short_name);
    e.extras(&mut m, &r.extras);
    m
}

// Match sheet.

fn breakdown(d: &mut Decoder<'_>, m: &Obj) -> ResultBreakdown {
    ResultBreakdown {
        final_result: d.object(m, "final", score),
        first_half: d.object(m, "first_half", score),
        second_half: d.object(m, "second_half", score),
        first_extratime: d.object(m, "first_extratime", score),
        second_extratime: d.object(m, "second_extratime", score),
        shootout: d.object(m, "shootout", score),
        extras: d.extras(m, BREAKDOWN),
    }
}

fn put_breakdown(e: &mut Encoder, r: &ResultBreakdown) -> Obj {
    let mut m = Obj::new();
    e.object(&mut m, "final", &r.final_result, put_score);
    e.object(&mut m, "first_half", &r.first_half, put_score);
    e.object(&mut m, "second_half", &r.second_half, put_score);
    e.object(&mut m, "first_extratime", &r.first_extratime, put_score);
    e.object(&mut m, "second_extratime", &r.second_extratime, put_score);
    e.object(&mut m, "shootout", &r.shootout, put_score);
    e.extras(&mut m, &r.extras);
    m
}

fn goal(d: &mut Decoder<'_>, m: &Obj) -> Goal {
    Goal {
        goal_time: d.time(m, "goal_time"),
        goal_player_id: d.id(m, "goal_player_id"),
        goal_assist_id: d.id(m, "goal_assist_id"),
        is_own_goal: d.flag(m, "is_own_goal"),
        is_penalty: d.flag(m, "is_penalty"),
        extras: d.extras(m, GOAL),
    }
}

fn put_goal(e: &mut Encoder, g: &Goal) -> Obj {
    let mut m = Obj::new();
    e.time(&mut m, "goal_time", &g.goal_time);
    e.id(&mut m, "goal_player_id", &g.goal_player_id);
    e.id(&mut m, "goal_assist_id", &g.goal_assist_id);
    e.flag(&mut m, "is_own_goal", &g.is_own_goal);
    e.flag(&mut m, "is_penalty", &g.is_penalty);
    e.extras(&mut m, &g.extras);
    m
}

fn substitution(d: &mut Decoder<'_>, m: &Obj) -> Substitution {
    Substitution {
        in_time: d.time(m, "in_time"),
        in_player_id: d.id(m, "in_player_id"),
        out_time: d.time(m, "out_time"),
        out_player_id: d.id(m, "out_player_id"),
        extras: d.extras(m, SUBSTITUTION),
    }
}

fn put_substitution(e: &mut Encoder, s: &Substitution) -> Obj {
    let mut m = Obj::new();
    e.time(&mut m, "in_time", &s.in_time);
    e.id(&mut m, "in_player_id", &s.in_player_id);
    e.time(&mut m, "out_time", &s.out_time);
    e.id(&mut m, "out_player_id", &s.out_player_id);
    e.extras(&mut m, &s.extras);
    m
}

fn card(d: &mut Decoder<'_>, m: &Obj) -> Card {
    Card {
        card_time: d.time(m, "card_time"),
        card_player_id: d.id(m, "card_player_id"),
        card_type: d.code(m, "card_type"),
        extras: d.extras(m, CARD),
    }
}

fn put_card(e: &mut Encoder, c: &Card) -> Obj {
    let mut m = Obj::new();
    e.time(&mut m, "card_time", &c.card_time);
    e.id(&mut m, "card_player_id", &c.card_player_id);
    e.code(&mut m, "card_type", &c.card_type);
    e.extras(&mut m, &c.extras);
    m
}

impl Codec for MatchSheet {
    fn bind(d: &mut Decoder<'_>, m: &Obj) -> Self {
        let mut match_info = d.object(m, "match", |d, mm| SheetMatch {
            id: d.id(mm, "id"),
            status: d.object(mm, "status", status),
            result: d.object(mm, "result", breakdown),
            extras: d.extras(mm, SHEET_MATCH),
        });
        let mut known: Vec<&str> = SHEET.to_vec();
        // A result block at the top level is accepted and moved under match.
        if let (Some(info), true) = (match_info.value_mut(), m.contains_key("result")) {
            if info.result.is_absent() {
                info.result = d.object(m, "result", breakdown);
                d.note_noncanonical("result", "result accepted at top level; canonical location is /match/result");
                known.push("result");
            }
        }
        if match_info.is_absent() && m.contains_key("result") {
            match_info = Field::Value(SheetMatch {
                result: d.object(m, "result", breakdown),
                ..SheetMatch::default()
            });
            d.note_noncanonical("result", "result accepted at top level; canonical location is /match/result");
            known.push("result");
        }
        MatchSheet {
            match_info,
            teams: d.object(m, "teams", teams),
            referees: d.objects(m, "referees", referee),
            coaches: d.objects(m, "coaches", |d, c| Coach {
                coach_id: d.id(c, "coach_id"),
                first_name: d.text(c, "first_name"),
                last_name: d.text(c, "last_name"),
                short_name: d.text(c, "short_name"),
                extras: d.extras(c, COACH),
            }),
            events: d.object(m, "events", |d, ev| SheetEvents {
                goals: d.objects(ev, "goals", goal),
                substitutions: d.objects(ev, "substitutions", substitution),
                cards: d.objects(ev, "cards", card),
                extras: d.extras(ev, SHEET_EVENTS),
            }),
            meta: d.object(m, "meta", |d, mm| SheetMeta {
                vendor: d.text(mm, "vendor"),
                extras: d.extras(mm, SHEET_META),
            }),
            extras: d.extras(m, &known),
        }
    }

    fn emit(&self, e: &mut Encoder) -> Obj {
        let mut m = Obj::new();
        e.object(&mut m, "match", &self.match_info, |e, mi| {
            let mut o = Obj::new();
            e.id(&mut o, "id", &mi.id);
            e.object(&mut o, "status", &mi.status, put_status);
            e.object(&mut o, "result", &mi.result, put_breakdown);
            e.extras(&mut o, &mi.extras);
            o
        });
        e.object(&mut m, "teams", &self.teams, put_teams);
        e.objects(&mut m, "referees", &self.referees, put_referee);
        e.objects(&mut m, "coaches", &self.coaches, |e, c| {
            let mut o = Obj::new();
            e.id(&mut o, "coach_id", &c.coach_id);
            e.text(&mut o, "first_name", &c.first_name);
            e.text(&mut o, "last_name", &c.last_name);
            e.text(&mut o, "short_name", &c.short_name);
            e.extras(&mut o, &c.extras);
            o
        });
        e.object(&mut m, "events", &self.events, |e, ev| {
            let mut o = Obj::new();
            e.objects(&mut o, "goals", &ev.goals, put_goal);
            e.objects(&mut o, "substitutions", &ev.substitutions, put_substitution);
            e.objects(&mut o, "cards", &ev.cards, put_card);
            e.extras(&mut o, &ev.extras);
            o
        });
        e.object(&mut m, "meta", &self.meta, |e, mm| {
            let mut o = Obj::new();
            e.text(&mut o, "vendor", &mm.vendor);
            e.extras(&mut o, &mm.extras);
            o
        });
        e.extras(&mut m, &self.extras);
        m
    }
}

// Match meta.

fn round(d: &mut Decoder<'_>, m: &Obj) -> Field<Round> {
    d.at(m, "round", |d, v| match v {
        Value::Null => Field::Missing,
        Value::Number(n) => match n.as_i64() {
            Some(i) => Field::Value(Round::Number(i)),
            None => d.wrong_type("integer or text", v),
        },
        Value::String(s) => Field::Value(Round::Name(s.clone())),
        other => d.wrong_type("integer or text", other),
    })
}

fn meta_match(d: &mut Decoder<'_>, m: &Obj) -> MetaMatch {
    MetaMatch {
        id: d.id(m, "id"),
        kickoff_time: d.time(m, "kickoff_time"),
        periods: d.periods(m, "periods", PeriodSpelling::Meta),
        result: d.object(m, "result", |d, r| MetaResult {
            final_result: d.object(r, "final", score),
            extratime: d.object(r, "extratime", score),
            shootout: d.object(r, "shootout", score),
            extras: d.extras(r, META_RESULT),
        }),
        status: d.object(m, "status", status),
        whistles: d.objects(m, "whistles", whistle),
        round: round(d, m),
        scheduled_kickoff_time: d.time(m, "scheduled_kickoff_time"),
        local_kickoff_time: d.text(m, "local_kickoff_time"),
        misc: d.object(m, "misc", |d, x| MatchMisc {
            country: d.text(x, "country"),
            city: d.text(x, "city"),
            precipitation: d.text(x, "precipitation"),
            open_roof: d.flag(x, "open_roof"),
            extras: d.extras(x, MISC),
        }),
        extras: d.extras(m, META_MATCH),
    }
}

fn put_meta_match(e: &mut Encoder, mm: &MetaMatch) -> Obj {
    let mut o = Obj::new();
    e.id(&mut o, "id", &mm.id);
    e.time(&mut o, "kickoff_time", &mm.kickoff_time);
    e.periods(&mut o, "periods", &mm.periods, PeriodSpelling::Meta);
    e.object(&mut o, "result", &mm.result, |e, r| {
        let mut x = Obj::new();
        e.object(&mut x, "final", &r.final_result, put_score);
        e.object(&mut x, "extratime", &r.extratime, put_score);
        e.object(&mut x, "shootout", &r.shootout, put_score);
        e.extras(&mut x, &r.extras);
        x
    });
    e.object(&mut o, "status", &mm.status, put_status);
    e.objects(&mut o, "whistles", &mm.whistles, put_whistle);
    match &mm.round {
        Field::Absent => {}
        Field::Value(Round::Number(n)) => {
            o.insert("round".into(), Value::from(*n));
        }
        Field::Value(Round::Name(s)) => {
            o.insert("round".into(), Value::from(s.as_str()));
        }
        Field::Missing => {
            let mut tmp = Obj::new();
            e.text(&mut tmp, "round", &Field::Missing);
            o.extend(tmp);
        }
        Field::Invalid(raw) => {
            o.insert("round".into(), raw.clone());
        }
    }
    e.time(&mut o, "scheduled_kickoff_time", &mm.scheduled_kickoff_time);
    e.text(&mut o, "local_kickoff_time", &mm.local_kickoff_time);
    e.object(&mut o, "misc", &mm.misc, |e, x| {
        let mut y = Obj::new();
        e.text(&mut y, "country", &x.country);
        e.text(&mut y, "city", &x.city);
        e.text(&mut y, "precipitation", &x.precipitation);
        e.flag(&mut y, "open_roof", &x.open_roof);
        e.extras(&mut y, &x.extras);
        y
    });
    e.extras(&mut o, &mm.extras);
    o
}

fn meta_info(d: &mut Decoder<'_>, m: &Obj) -> MetaInfo {
    MetaInfo {
        fps_tracking: d.int(m, "fps_tracking"),
        limb_tracking: d.flag(m, "limb_tracking"),
        limb_nodes: d.json(m, "limb_nodes"),
        source_type: d.code(m, "source_type"),
        perspective: d.code(m, "perspective"),
        version: d.object(m, "version", |d, v| Versions {
            cdf: d.text(v, "cdf"),
            event: d.text(v, "event"),
            tracking: d.text(v, "tracking"),
            extras: d.extras(v, VERSIONS),
        }),
        vendors: d.object(m, "vendors", |d, v| Vendors {
            event: d.text(v, "event"),
            tracking: d.text(v, "tracking"),
            video: d.text(v, "video"),
            extras: d.extras(v, VENDORS),
        }),
        id_space: d.object(m, "id_space", |d, v| IdSpace {
            match_data: d.text(v, "match_data"),
            event: d.text(v, "event"),
            tracking: d.text(v, "tracking"),
            extras: d.extras(v, ID_SPACE),
        }),
        fps_ball: d.int(m, "fps_ball"),
        system: d.object(m, "system", |d, s| SystemInfo {
            tracking_type: d.code(s, "tracking_type"),
            tracking_version: d.text(s, "tracking_version"),
            event_type: d.text(s, "event_type"),
            event_version: d.text(s, "event_version"),
            ball_status_type: d.text(s, "ball_status_type"),
            ball_possession_type: d.text(s, "ball_possession_type"),
            extras: d.extras(s, SYSTEM),
        }),
        extras: d.extras(m, META_INFO),
    }
}

fn put_meta_info(e: &mut Encoder, mi: &MetaInfo) -> Obj {
    let mut o = Obj::new();
    e.int(&mut o, "fps_tracking", &mi.fps_tracking);
    e.flag(&mut o, "limb_tracking", &mi.limb_tracking);
    e.json(&mut o, "limb_nodes", &mi.limb_nodes);
    e.code(&mut o, "source_type", &mi.source_type);
    e.code(&mut o, "perspective", &mi.perspective);
    e.object(&mut o, "version", &mi.version, |e, v| {
        let mut x = Obj::new();
        e.text(&mut x, "cdf", &v.cdf);
        e.text(&mut x, "event", &v.event);
        e.text(&mut x, "tracking", &v.tracking);
        e.extras(&mut x, &v.extras);
        x
    });
    e.object(&mut o, "vendors", &mi.vendors, |e, v| {
        let mut x = Obj::new();
        e.text(&mut x, "event", &v.event);
        e.text(&mut x, "tracking", &v.tracking);
        e.text(&mut x, "video", &v.video);
        e.extras(&mut x, &v.extras);
        x
    });
    e.object(&mut o, "id_space", &mi.id_space, |e, v| {
        let mut x = Obj::new();
        e.text(&mut x, "match_data", &v.match_data);
        e.text(&mut x, "event", &v.event);
        e.text(&mut x, "tracking", &v.tracking);
        e.extras(&mut x, &v.extras);
        x
    });
    e.int(&mut o, "fps_ball", &mi.fps_ball);
    e.object(&mut o, "system", &mi.system, |e, s| {
        let mut x = Obj::new();
        e.code(&mut x, "tracking_type", &s.tracking_type);
        e.text(&mut x, "tracking_version", &s.tracking_version);
        e.text(&mut x, "event_type", &s.event_type);
        e.text(&mut x, "event_version", &s.event_version);
        e.text(&mut x, "ball_status_type", &s.ball_status_type);
        e.text(&mut x, "ball_possession_type", &s.ball_possession_type);
        e.extras(&mut x, &s.extras);
        x
    });
    e.extras(&mut o, &mi.extras);
    o
}

fn period_info(d: &mut Decoder<'_>, m: &Obj) -> PeriodInfo {
    PeriodInfo {
        period_type: d.period(m, "type", PeriodSpelling::Meta),
        time_start: d.time(m, "time_start"),
        time_end: d.time(m, "time_end"),
        frame_id_start: d.int(m, "frame_id_start"),
        frame_id_end: d.int(m, "frame_id_end"),
        left_team_id: d.id(m, "left_team_id"),
        right_team_id: d.id(m, "right_team_id"),
        extras: d.extras(m, PERIOD_INFO),
    }
}

fn put_period_info(e: &mut Encoder, p: &PeriodInfo) -> Obj {
    let mut o = Obj::new();
    e.period(&mut o, "type", &p.period_type, PeriodSpelling::Meta);
    e.time(&mut o, "time_start", &p.time_start);
    e.time(&mut o, "time_end", &p.time_end);
    e.int(&mut o, "frame_id_start", &p.frame_id_start);
    e.int(&mut o, "frame_id_end", &p.frame_id_end);
    e.id(&mut o, "left_team_id", &p.left_team_id);
    e.id(&mut o, "right_team_id", &p.right_team_id);
    e.extras(&mut o, &p.extras);
    o
}

impl Codec for MatchMeta {
    fn bind(d: &mut Decoder<'_>, m: &Obj) -> Self {
        MatchMeta {
            competition: d.object(m, "competition", |d, c| Competition {
                id: d.id(c, "id"),
                name: d.text(c, "name"),
                format: d.text(c, "format"),
                extras: d.extras(c, COMPETITION),
            }),
            season: d.object(m, "season", |d, s| Season {
                id: d.id(s, "id"),
                name: d.text(s, "name"),
                extras: d.extras(s, SEASON),
            }),
            match_info: d.object(m, "match", meta_match),
            teams: d.object(m, "teams", teams),
            stadium: d.object(m, "stadium", |d, s| Stadium {
                id: d.id(s, "id"),
                pitch_length: d.float_or_unknown(s, "pitch_length"),
                pitch_width: d.float_or_unknown(s, "pitch_width"),
                name: d.text(s, "name"),
                turf: d.text(s, "turf"),
                extras: d.extras(s, STADIUM),
            }),
            meta: d.object(m, "meta", meta_info),
            periods: d.objects(m, "periods", period_info),
            extras: d.extras(m, META),
        }
    }

    fn emit(&self, e: &mut Encoder) -> Obj {
        let mut m = Obj::new();
        e.object(&mut m, "competition", &self.competition, |e, c| {
            let mut o = Obj::new();
            e.id(&mut o, "id", &c.id);
            e.text(&mut o, "name", &c.name);
            e.text(&mut o, "format", &c.format);
            e.extras(&mut o, &c.extras);
            o
        });
        e.object(&mut m, "season", &self.season, |e, s| {
            let mut o = Obj::new();
            e.id(&mut o, "id", &s.id);
            e.text(&mut o, "name", &s.name);
            e.extras(&mut o, &s.extras);
            o
        });
        e.object(&mut m, "match", &self.match_info, put_meta_match);
        e.object(&mut m, "teams", &self.teams, put_teams);
        e.object(&mut m, "stadium", &self.stadium, |e, s| {
            let mut o = Obj::new();
            e.id(&mut o, "id", &s.id);
            e.float(&mut o, "pitch_length", &s.pitch_length);
            e.float(&mut o, "pitch_width", &s.pitch_width);
            e.text(&mut o, "name", &s.name);
            e.text(&mut o, "turf", &s.turf);
            e.extras(&mut o, &s.extras);
            o
        });
        e.object(&mut m, "meta", &self.meta, put_meta_info);
        e.objects(&mut m, "periods", &self.periods, put_period_info);
        e.extras(&mut m, &self.extras);
        m
    }
}

// Video.

impl Codec for VideoMeta {
    fn bind(d: &mut Decoder<'_>, m: &Obj) -> Self {
        VideoMeta {
            match_id: d.id(m, "match_id"),
            fps: d.int(m, "fps"),
            resolution: d.text(m, "resolution"),
            operation_type: d.code(m, "operation_type"),
            perspective: d.code(m, "perspective"),
            whistles: d.objects(m, "whistles", whistle),
            extras: d.extras(m, VIDEO),
        }
    }

    fn emit(&self, e: &mut Encoder) -> Obj {
        let mut m = Obj::new();
        e.id(&mut m, "match_id", &self.match_id);
        e.int(&mut m, "fps", &self.fps);
        e.text(&mut m, "resolution", &self.resolution);
        e.code(&mut m, "operation_type", &self.operation_type);
        e.code(&mut m, "perspective", &self.perspective);
        e.objects(&mut m, "whistles", &self.whistles, put_whistle);
        e.extras(&mut m, &self.extras);
        m
    }
}

// Events.

fn event_body(d: &mut Decoder<'_>, m: &Obj) -> EventBody {
    EventBody {
        id: d.id(m, "id"),
        time: d.time(m, "time"),
        period: d.period(m, "period", STREAM),
        event_type: d.code(m, "type"),
        sub_type: d.code(m, "sub_type"),
        outcome: d.flag(m, "outcome"),
        outcome_detailed: d.code(m, "outcome_detailed"),
        player_id_1: d.id(m, "player_id_1"),
        team_id_1: d.id(m, "team_id_1"),
        player_id_2: d.id(m, "player_id_2"),
        team_id_2: d.id(m, "team_id_2"),
        x_1: d.float(m, "x_1"),
        y_1: d.float(m, "y_1"),
        x_2: d.float(m, "x_2"),
        y_2: d.float(m, "y_2"),
        body_part_1: d.code(m, "body_part_1"),
        body_part_2: d.code(m, "body_part_2"),
        metrics: d.object(m, "metrics", |d, x| EventMetrics {
            xg: d.float(x, "xg"),
            xpass: d.float(x, "xpass"),
            packing_traditional: d.int(x, "packing_traditional"),
            packing_horizontal: d.int(x, "packing_horizontal"),
            extras: d.extras(x, METRICS),
        }),
        extras: d.extras(m, EVENT_BODY),
    }
}

fn put_event_body(e: &mut Encoder, b: &EventBody) -> Obj {
    let mut o = Obj::new();
    e.id(&mut o, "id", &b.id);
    e.time(&mut o, "time", &b.time);
    e.period(&mut o, "period", &b.period, STREAM);
    e.code(&mut o, "type", &b.event_type);
    e.code(&mut o, "sub_type", &b.sub_type);
    e.flag(&mut o, "outcome", &b.outcome);
    e.code(&mut o, "outcome_detailed", &b.outcome_detailed);
    e.id(&mut o, "player_id_1", &b.player_id_1);
    e.id(&mut o, "team_id_1", &b.team_id_1);
    e.id(&mut o, "player_id_2", &b.player_id_2);
    e.id(&mut o, "team_id_2", &b.team_id_2);
    e.float(&mut o, "x_1", &b.x_1);
    e.float(&mut o, "y_1", &b.y_1);
    e.float(&mut o, "x_2", &b.x_2);
    e.float(&mut o, "y_2", &b.y_2);
    e.code(&mut o, "body_part_1", &b.body_part_1);
    e.code(&mut o, "body_part_2", &b.body_part_2);
    e.object(&mut o, "metrics", &b.metrics, |e, x| {
        let mut y = Obj::new();
        e.float(&mut y, "xg", &x.xg);
        e.float(&mut y, "xpass", &x.xpass);
        e.int(&mut y, "packing_traditional", &x.packing_traditional);
        e.int(&mut y, "packing_horizontal", &x.packing_horizontal);
        e.extras(&mut y, &x.extras);
        y
    });
    e.extras(&mut o, &b.extras);
    o
}

impl Codec for EventRecord {
    fn bind(d: &mut Decoder<'_>, m: &Obj) -> Self {
        EventRecord {
            match_ref: d.object(m, "match", match_ref),
            meta: d.object(m, "meta", |d, x| EventMeta {
                is_synced: d.flag(x, "is_synced"),
                extras: d.extras(x, EVENT_META),
            }),
            event: d.object(m, "event", event_body),
            tracking: d.object(m, "tracking", |d, t| EventTracking {
                frame_id_1: d.int(t, "frame_id_1"),
                frame_id_2: d.int(t, "frame_id_2"),
                x_player_1: d.float(t, "x_player_1"),
                y_player_1: d.float(t, "y_player_1"),
                x_player_2: d.float(t, "x_player_2"),
                y_player_2: d.float(t, "y_player_2"),
                extras: d.extras(t, EVENT_TRACKING),
            }),
            extras: d.extras(m, EVENT),
        }
    }

    fn emit(&self, e: &mut Encoder) -> Obj {
        let mut m = Obj::new();
        e.object(&mut m, "match", &self.match_ref, put_match_ref);
        e.object(&mut m, "meta", &self.meta, |e, x| {
            let mut o = Obj::new();
            e.flag(&mut o, "is_synced", &x.is_synced);
            e.extras(&mut o, &x.extras);
            o
        });
        e.object(&mut m, "event", &self.event, put_event_body);
        e.object(&mut m, "tracking", &self.tracking, |e, t| {
            let mut o = Obj::new();
            e.int(&mut o, "frame_id_1", &t.frame_id_1);
            e.int(&mut o, "frame_id_2", &t.frame_id_2);
            e.float(&mut o, "x_player_1", &t.x_player_1);
            e.float(&mut o, "y_player_1", &t.y_player_1);
            e.float(&mut o, "x_player_2", &t.x_player_2);
            e.float(&mut o, "y_player_2", &t.y_player_2);
            e.extras(&mut o, &t.extras);
            o
        });
        e.extras(&mut m, &self.extras);
        m
    }
}

// Tracking.

fn frame_player(d: &mut Decoder<'_>, m: &Obj) -> FramePlayer {
    FramePlayer {
        id: d.id(m, "id"),
        team_id: d.id(m, "team_id"),
        x: d.float(m, "x"),
        y: d.float(m, "y"),
        z: d.float(m, "z"),
        dist: d.float(m, "dist"),
        acc: d.float(m, "acc"),
        vel: d.float(m, "vel"),
        is_visible: d.flag(m, "is_visible"),
        lat: d.float(m, "lat"),
        long: d.float(m, "long"),
        extras: d.extras(m, FRAME_PLAYER),
    }
}

fn put_frame_player(e: &mut Encoder, p: &FramePlayer) -> Obj {
    let mut o = Obj::new();
    e.id(&mut o, "id", &p.id);
    e.id(&mut o, "team_id", &p.team_id);
    e.float(&mut o, "x", &p.x);
    e.float(&mut o, "y", &p.y);
    e.float(&mut o, "z", &p.z);
    e.float(&mut o, "dist", &p.dist);
    e.float(&mut o, "acc", &p.acc);
    e.float(&mut o, "vel", &p.vel);
    e.flag(&mut o, "is_visible", &p.is_visible);
    e.float_exact(&mut o, "lat", &p.lat);
    e.float_exact(&mut o, "long", &p.long);
    e.extras(&mut o, &p.extras);
    o
}

impl Codec for TrackingFrame {
    fn bind(d: &mut Decoder<'_>, m: &Obj) -> Self {
        let frame_team = |d: &mut Decoder<'_>, t: &Obj| FrameTeam {
            id: d.id(t, "id"),
            players: d.objects(t, "players", frame_player),
            extras: d.extras(t, FRAME_TEAM),
        };
        TrackingFrame {
            frame_id: d.int(m, "frame_id"),
            period: d.period(m, "period", STREAM),
            match_ref: d.object(m, "match", match_ref),
            teams: d.object(m, "teams", |d, t| FrameTeams {
                home: d.object(t, "home", frame_team),
                away: d.object(t, "away", frame_team),
                extras: d.extras(t, TEAMS),
            }),
            ball: d.object(m, "ball", |d, b| Ball {
                x: d.float(b, "x"),
                y: d.float(b, "y"),
                z: d.float(b, "z"),
                dist: d.float(b, "dist"),
                acc: d.float(b, "acc"),
                vel: d.float(b, "vel"),
                extras: d.extras(b, BALL),
            }),
            ball_status: d.flag(m, "ball_status"),
            ball_poss_team_id: d.id(m, "ball_poss_team_id"),
            vendor: d.object(m, "vendor", |d, v| FrameVendor {
                event: d.text(v, "event"),
                tracking: d.text(v, "tracking"),
                extras: d.extras(v, FRAME_VENDOR),
            }),
            referees: d.objects(m, "referees", |d, r| FrameReferee {
                id: d.id(r, "id"),
                x: d.float(r, "x"),
                y: d.float(r, "y"),
                z: d.float(r, "z"),
                extras: d.extras(r, FRAME_REFEREE),
            }),
            extras: d.extras(m, FRAME),
        }
    }

    fn emit(&self, e: &mut Encoder) -> Obj {
        let put_frame_team = |e: &mut Encoder, t: &FrameTeam| {
            let mut o = Obj::new();
            e.id(&mut o, "id", &t.id);
            e.objects(&mut o, "players", &t.players, put_frame_player);
            e.extras(&mut o, &t.extras);
            o
        };
        let mut m = Obj::new();
        e.int(&mut m, "frame_id", &self.frame_id);
        e.period(&mut m, "period", &self.period, STREAM);
        e.object(&mut m, "match", &self.match_ref, put_match_ref);
        e.object(&mut m, "teams", &self.teams, |e, t| {
            let mut o = Obj::new();
            e.object(&mut o, "home", &t.home, put_frame_team);
            e.object(&mut o, "away", &t.away, put_frame_team);
            e.extras(&mut o, &t.extras);
            o
        });
        e.object(&mut m, "ball", &self.ball, |e, b| {
            let mut o = Obj::new();
            e.float(&mut o, "x", &b.x);
            e.float(&mut o, "y", &b.y);
            e.float(&mut o, "z", &b.z);
            e.float(&mut o, "dist", &b.dist);
            e.float(&mut o, "acc", &b.acc);
            e.float(&mut o, "vel", &b.vel);
            e.extras(&mut o, &b.extras);
            o
        });
        e.flag(&mut m, "ball_status", &self.ball_status);
        e.id(&mut m, "ball_poss_team_id", &self.ball_poss_team_id);
        e.object(&mut m, "vendor", &self.vendor, |e, v| {
            let mut o = Obj::new();
            e.text(&mut o, "event", &v.event);
            e.text(&mut o, "tracking", &v.tracking);
            e.extras(&mut o, &v.extras);
            o
        });
        e.objects(&mut m, "referees", &self.referees, |e, r| {
            let mut o = Obj::new();
            e.id(&mut o, "id", &r.id);
            e.float(&mut o, "x", &r.x);
            e.float(&mut o, "y", &r.y);
            e.float(&mut o, "z", &r.z);
            e.extras(&mut o, &r.extras);
            o
        });
        e.extras(&mut m, &self.extras);
        m
    }
}

// Skeletal tracking.

fn skeleton_player(d: &mut Decoder<'_>, m: &Obj) -> SkeletonPlayer {
    let mut limbs = Vec::new();
    let mut plain = Obj::new();
    for (k, v) in m {
        if !SKELETON_PLAYER.contains(&k.as_str()) && v.is_object() {
            let limb = d.object(m, k, |d, l| Limb {
                name: k.clone(),
                x: d.float(l, "x"),
                y: d.float(l, "y"),
                z: d.float(l, "z"),
                extras: d.extras(l, LIMB),
            });
            limbs.extend(limb.into_value());
        } else {
            plain.insert(k.clone(), v.clone());
        }
    }
    SkeletonPlayer {
        id: d.id(m, "id"),
        team_id: d.id(m, "team_id"),
        limbs,
        extras: d.extras(&plain, SKELETON_PLAYER),
    }
}

fn put_skeleton_player(e: &mut Encoder, p: &SkeletonPlayer) -> Obj {
    let mut o = Obj::new();
    e.id(&mut o, "id", &p.id);
    e.id(&mut o, "team_id", &p.team_id);
    for limb in &p.limbs {
        let mut l = Obj::new();
        e.float(&mut l, "x", &limb.x);
        e.float(&mut l, "y", &limb.y);
        e.float(&mut l, "z", &limb.z);
        e.extras(&mut l, &limb.extras);
        o.insert(limb.name.clone(), Value::Object(l));
    }
    e.extras(&mut o, &p.extras);
    o
}

impl Codec for SkeletonFrame {
    fn bind(d: &mut Decoder<'_>, m: &Obj) -> Self {
        let team = |d: &mut Decoder<'_>, t: &Obj| SkeletonTeam {
            id: d.id(t, "id"),
            players: d.objects(t, "players", skeleton_player),
            extras: d.extras(t, FRAME_TEAM),
        };
        SkeletonFrame {
            frame_id: d.int(m, "frame_id"),
            period: d.period(m, "period", STREAM),
            match_ref: d.object(m, "match", match_ref),
            teams: d.object(m, "teams", |d, t| SkeletonTeams {
                home: d.object(t, "home", team),
                away: d.object(t, "away", team),
                extras: d.extras(t, TEAMS),
            }),
            extras: d.extras(m, SKELETON_FRAME),
        }
    }

    fn emit(&self, e: &mut Encoder) -> Obj {
        let put_team = |e: &mut Encoder, t: &SkeletonTeam| {
            let mut o = Obj::new();
            e.id(&mut o, "id", &t.id);
            e.objects(&mut o, "players", &t.players, put_skeleton_player);
            e.extras(&mut o, &t.extras);
            o
        };
        let mut m = Obj::new();
        e.int(&mut m, "frame_id", &self.frame_id);
        e.period(&mut m, "period", &self.period, STREAM);
        e.object(&mut m, "match", &self.match_ref, put_match_ref);
        e.object(&mut m, "teams", &self.teams, |e, t| {
            let mut o = Obj::new();
            e.object(&mut o, "home", &t.home, put_team);
            e.object(&mut o, "away", &t.away, put_team);
            e.extras(&mut o, &t.extras);
            o
        });
        e.extras(&mut m, &self.extras);
        m
    }
}
