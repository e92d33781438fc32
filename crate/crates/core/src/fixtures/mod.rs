//! Deterministic generation of conformant match bundles, and a catalog of
//! single-defect mutations for exercising the validators.
//!
//! The same [`FixtureSpec`] always yields the same bytes. Documents and
//! events are built eagerly; tracking and skeletal frames are described by
//! a plan and generated while they are written or read.

mod motion;
mod mutations;

use std::collections::{BTreeMap, HashSet};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub use motion::{anchor, FrameEdit, RecordLines, SkeletalPlan, Slot, StreamDefect, TeamMotion, TrackingFrames, TrackingPlan};
pub use mutations::{catalog, find_mutation, mutate, Mutation};

use motion::r3;

use crate::bundle::{BundleManifest, MatchBundle, StreamSource};
use crate::codec::{write_record, WriteOptions};
use crate::error::{CdfError, Result};
use crate::geometry::Vec3;
use crate::model::vocab::{allowed_outcomes, allowed_subtypes, implied_success};
use crate::model::*;
use crate::report::{Component, Report};
use crate::skeleton::{t_pose_positions, SkeletonHierarchy};

/// Length of one period of play.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodPlan {
    pub period: Period,
    pub minutes: f64,
}

/// What to generate.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSpec {
    pub seed: u64,
    pub fps: i64,
    /// Periods in playing order.
    pub periods: Vec<PeriodPlan>,
    pub has_extratime: bool,
    pub has_shootout: bool,
    /// Players per team, the first 11 starting.
    pub squad_size: usize,
    pub event_count: usize,
    /// Skeletal frames at the start of each period; 0 for no skeletal data.
    pub skeletal_frames: u64,
    /// Catalog ids applied after generation, in order.
    pub mutations: Vec<String>,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            seed: 0,
            fps: 25,
            periods: vec![
                PeriodPlan { period: Period::FirstHalf, minutes: 45.0 },
                PeriodPlan { period: Period::SecondHalf, minutes: 45.0 },
            ],
            has_extratime: false,
            has_shootout: false,
            squad_size: 18,
            event_count: 200,
            skeletal_frames: 0,
            mutations: Vec::new(),
        }
    }
}

impl FixtureSpec {
    /// A full match: two 45 minute halves at 25 fps.
    pub fn new(seed: u64) -> Self {
        FixtureSpec { seed, ..FixtureSpec::default() }
    }

    /// Two 1 minute halves at 5 fps with a short skeletal stream; quick to
    /// validate.
    pub fn small(seed: u64) -> Self {
        FixtureSpec { seed, fps: 5, event_count: 30, skeletal_frames: 3, ..FixtureSpec::default() }
            .with_minutes(1.0)
    }

    /// Sets the length of both regular halves.
    pub fn with_minutes(mut self, minutes: f64) -> Self {
        for p in &mut self.periods {
            if matches!(p.period, Period::FirstHalf | Period::SecondHalf) {
                p.minutes = minutes;
            }
        }
        self
    }

    pub fn with_extratime(mut self, minutes: f64) -> Self {
        self.has_extratime = true;
        self.periods.retain(|p| !p.period.is_extratime());
        let at = self.periods.iter().position(|p| p.period == Period::Shootout).unwrap_or(self.periods.len());
        self.periods.insert(at, PeriodPlan { period: Period::FirstHalfExtratime, minutes });
        self.periods.insert(at + 1, PeriodPlan { period: Period::SecondHalfExtratime, minutes });
        self
    }

    pub fn with_shootout(mut self, minutes: f64) -> Self {
        self.has_shootout = true;
        self.periods.retain(|p| p.period != Period::Shootout);
        self.periods.push(PeriodPlan { period: Period::Shootout, minutes });
        self
    }

    pub fn with_mutation(mut self, id: &str) -> Self {
        self.mutations.push(id.to_owned());
        self
    }

    /// Frames per period, in playing order.
    pub fn frame_counts(&self) -> Vec<(Period, u64)> {
        self.periods
            .iter()
            .map(|p| (p.period, (p.minutes * 60.0 * self.fps as f64).round() as u64))
            .collect()
    }

    pub fn check(&self) -> Result<()> {
        let fail = |m: String| Err(CdfError::FixtureSpec(m));
        if self.fps <= 0 {
            return fail(format!("fps must be positive, got {}", self.fps));
        }
        if !(11..=60).contains(&self.squad_size) {
            return fail(format!("squad size must be 11 to 60, got {}", self.squad_size));
        }
        let order: Vec<Period> = self.periods.iter().map(|p| p.period).collect();
        if !order.windows(2).all(|w| w[0] < w[1]) {
            return fail(format!("periods must be distinct and in playing order: {order:?}"));
        }
        for required in [Period::FirstHalf, Period::SecondHalf] {
            if !order.contains(&required) {
                return fail(format!("period plan lacks {required}"));
            }
        }
        let et = order.iter().filter(|p| p.is_extratime()).count();
        if (self.has_extratime && et != 2) || (!self.has_extratime && et != 0) {
            return fail(format!("has_extratime is {} but the plan has {et} extra-time periods", self.has_extratime));
        }
        if self.has_shootout != order.contains(&Period::Shootout) {
            return fail(format!("has_shootout is {} but the plan disagrees", self.has_shootout));
        }
        if self.has_shootout && !self.has_extratime {
            return fail("a shootout plan requires extra time".to_owned());
        }
        for p in &self.periods {
            if !(p.minutes.is_finite() && p.minutes > 0.0) {
                return fail(format!("{} must last a positive number of minutes", p.period));
            }
            if (p.minutes * 60.0 * self.fps as f64).round() < 1.0 {
                return fail(format!("{} is shorter than one frame", p.period));
            }
        }
        for m in &self.mutations {
            find_mutation(m)?;
        }
        Ok(())
    }
}

/// A generated match. Mutations edit it in place.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub spec: FixtureSpec,
    pub match_sheet: Option<MatchSheet>,
    pub meta: Option<MatchMeta>,
    pub video_meta: Option<VideoMeta>,
    pub events: Option<Vec<EventRecord>>,
    pub tracking: Option<TrackingPlan>,
    pub skeletal: Option<SkeletalPlan>,
    /// Mutations applied, in order.
    pub applied: Vec<&'static str>,
}

/// Conventional file names of a bundle directory.
pub const FILE_NAMES: [&str; 6] =
    ["match_sheet.json", "meta.json", "video.json", "events.jsonl", "tracking.jsonl", "skeletal.jsonl"];

impl Fixture {
    pub fn tracking_frames(&self) -> impl Iterator<Item = TrackingFrame> + '_ {
        self.tracking.iter().flat_map(TrackingPlan::frames)
    }

    pub fn skeletal_frames(&self) -> impl Iterator<Item = SkeletonFrame> + '_ {
        self.skeletal.iter().flat_map(SkeletalPlan::frames)
    }

    /// Every component encoded, keyed by its conventional file name.
    /// Absent components are left out. Streams are materialized, so keep
    /// this to small fixtures.
    pub fn encode(&self) -> Result<BTreeMap<&'static str, Vec<u8>>> {
        let mut out = BTreeMap::new();
        for (i, name) in FILE_NAMES.iter().enumerate() {
            let mut buf = Vec::new();
            if self.write_component(i, &mut buf)? {
                out.insert(*name, buf);
            }
        }
        Ok(out)
    }

    /// Writes component `i` of [`FILE_NAMES`]; false when it is absent.
    fn write_component(&self, i: usize, sink: &mut dyn Write) -> Result<bool> {
        let doc = WriteOptions::default().pretty(true);
        let line = WriteOptions::default();
        let write = |bytes: Vec<u8>, sink: &mut dyn Write| sink.write_all(&bytes).map_err(CdfError::from);
        match i {
            0 => match &self.match_sheet {
                Some(d) => write(write_record(d, &doc)?, sink)?,
                None => return Ok(false),
            },
            1 => match &self.meta {
                Some(d) => write(write_record(d, &doc)?, sink)?,
                None => return Ok(false),
            },
            2 => match &self.video_meta {
                Some(d) => write(write_record(d, &doc)?, sink)?,
                None => return Ok(false),
            },
            3 => match &self.events {
                Some(es) => {
                    for e in es {
                        write(write_record(e, &line)?, sink)?;
                    }
                }
                None => return Ok(false),
            },
            4 => match &self.tracking {
                Some(t) => {
                    for f in t.frames() {
                        write(write_record(&f, &line)?, sink)?;
                    }
                }
                None => return Ok(false),
            },
            _ => match &self.skeletal {
                Some(s) => {
                    for f in s.frames() {
                        write(write_record(&f, &line)?, sink)?;
                    }
                }
                None => return Ok(false),
            },
        }
        Ok(true)
    }

    /// Writes the directory-convention bundle, streaming frames to disk.
    pub fn write_dir(&self, dir: &Path) -> Result<BundleManifest> {
        std::fs::create_dir_all(dir).map_err(|e| CdfError::io(dir, e))?;
        for (i, name) in FILE_NAMES.iter().enumerate() {
            let path = dir.join(name);
            if path.exists() {
                std::fs::remove_file(&path).map_err(|e| CdfError::io(&path, e))?;
            }
            let file = std::fs::File::create(&path).map_err(|e| CdfError::io(&path, e))?;
            let mut sink = BufWriter::new(file);
            let written = self.write_component(i, &mut sink)?;
            sink.flush().map_err(|e| CdfError::io(&path, e))?;
            drop(sink);
            if !written {
                std::fs::remove_file(&path).map_err(|e| CdfError::io(&path, e))?;
            }
        }
        Ok(BundleManifest::discover(dir))
    }

    /// An in-memory bundle; event lines are encoded, frames are generated
    /// each time a stream is opened.
    pub fn to_bundle(&self) -> Result<MatchBundle> {
        let events = match &self.events {
            Some(_) => {
                let mut buf = Vec::new();
                self.write_component(3, &mut buf)?;
                Some(StreamSource::Bytes(buf))
            }
            None => None,
        };
        let tracking = self.tracking.clone().map(|plan| {
            let plan = Arc::new(plan);
            StreamSource::Generated(Arc::new(move || Box::new(plan.lines()) as Box<dyn std::io::BufRead + Send>))
        });
        let skeletal = self.skeletal.clone().map(|plan| {
            let plan = Arc::new(plan);
            StreamSource::Generated(Arc::new(move || {
                let frames: Vec<SkeletonFrame> = plan.frames().collect();
                Box::new(RecordLines::new(frames.into_iter())) as Box<dyn std::io::BufRead + Send>
            }))
        });
        Ok(MatchBundle {
            match_sheet: self.match_sheet.clone(),
            meta: self.meta.clone(),
            video_meta: self.video_meta.clone(),
            events,
            tracking,
            skeletal,
            load_report: Report::new(Component::Bundle),
        })
    }

    /// Events per type, in vocabulary order.
    pub fn event_histogram(&self) -> BTreeMap<EventType, usize> {
        let mut h: BTreeMap<EventType, usize> = EventType::ALL.iter().map(|t| (*t, 0)).collect();
        for e in self.events.iter().flatten() {
            if let Some(t) = e.event_type() {
                *h.entry(t).or_default() += 1;
            }
        }
        h
    }
}

/// Generates the fixture described by `spec`, then applies its mutations.
pub fn generate(spec: &FixtureSpec) -> Result<Fixture> {
    spec.check()?;
    let mut f = Generator::new(spec).run();
    for id in &spec.mutations {
        f = mutate(&f, id)?;
    }
    Ok(f)
}

/// [`generate`] as a [`MatchBundle`].
pub fn generate_bundle(spec: &FixtureSpec) -> Result<MatchBundle> {
    generate(spec)?.to_bundle()
}

/// Formations used for starting lineups, as label lists.
const LINEUPS: [[PositionLabel; 11]; 3] = {
    use PositionLabel::*;
    [
        [GK, LB, LCB, RCB, RB, LM, LCM, RCM, RM, LCF, RCF],
        [GK, LB, LCB, RCB, RB, LCM, CM, RCM, LW, CF, RW],
        [GK, LB, CB, RB, LM, LCM, CM, RCM, RM, LCF, RCF],
    ]
};

/// Hierarchy declared for skeletal fixtures: a hip root with a spine,
/// head, arms and legs.
pub fn fixture_hierarchy() -> Value {
    json!([
        {"name": "hip", "children": [1, 5, 6]},
        {"name": "spine", "translation": [0.0, 0.3, 0.0], "children": [2, 3, 4]},
        {"name": "head", "translation": [0.0, 0.35, 0.0]},
        {"name": "arm_left", "translation": [-0.25, 0.2, 0.0]},
        {"name": "arm_right", "translation": [0.25, 0.2, 0.0]},
        {"name": "leg_left", "translation": [-0.12, -0.9, 0.0]},
        {"name": "leg_right", "translation": [0.12, -0.9, 0.0]}
    ])
}

/// Height of the hip above the ground, meters.
const HIP_HEIGHT: f64 = 1.0;

struct Generator<'s> {
    spec: &'s FixtureSpec,
    rng: ChaCha8Rng,
    used_ids: HashSet<String>,
}

struct PlannedGoal {
    period_index: usize,
    offset_ms: i64,
    for_home: bool,
    own_goal: bool,
    penalty: bool,
}

struct Side {
    team: Team,
    starters: Vec<usize>,
}

impl<'s> Generator<'s> {
    fn new(spec: &'s FixtureSpec) -> Self {
        Generator { spec, rng: ChaCha8Rng::seed_from_u64(spec.seed), used_ids: HashSet::new() }
    }

    fn hex_id(&mut self) -> EntityId {
        loop {
            let s = format!("{:08x}", self.rng.gen::<u32>());
            if self.used_ids.insert(s.clone()) {
                return EntityId::new(s).expect("hex ids are valid");
            }
        }
    }

    fn ts(instant: DateTime<Utc>) -> CdfTimestamp {
        CdfTimestamp::from_instant(instant)
    }

    fn team(&mut self, name: &str, short: &str) -> Side {
        let id = self.hex_id();
        let lineup = LINEUPS[self.rng.gen_range(0..LINEUPS.len())];
        let players = (0..self.spec.squad_size)
            .map(|i| {
                let starter = i < 11;
                Player {
                    id: self.hex_id().into(),
                    team_id: id.clone().into(),
                    jersey_number: (i as i64 + 1).into(),
                    is_starter: Flag::from(starter).into(),
                    first_name: format!("{name} {}", i + 1).into(),
                    last_name: format!("Player{}", i + 1).into(),
                    short_name: format!("{short}{}", i + 1).into(),
                    position: if starter { Field::Value(Code::Known(lineup[i])) } else { Field::Absent },
                    is_captain: Flag::from(i == 1).into(),
                    height: self.rng.gen_range(165..200_i64).into(),
                    foot: Code::Known(if self.rng.gen_bool(0.75) { Foot::Right } else { Foot::Left }).into(),
                    ..Default::default()
                }
            })
            .collect();
        Side {
            team: Team {
                id: id.into(),
                name: format!("{name} FC").into(),
                short_name: short.to_owned().into(),
                jersey_colour: format!("#{:06X}", self.rng.gen_range(0..0x1000000_u32)).into(),
                players: Field::Value(players),
                ..Default::default()
            },
            starters: (0..11).collect(),
        }
    }

    fn run(mut self) -> Fixture {
        let spec = self.spec;
        let tracking_seed: u64 = self.rng.gen();
        let skeletal_seed: u64 = self.rng.gen();
        let match_id = self.hex_id();
        let home = self.team("Home", "HOM");
        let away = self.team("Away", "AWY");
        let home_id = home.team.id.value().cloned().expect("set");
        let away_id = away.team.id.value().cloned().expect("set");
        let player_ids = |s: &Side| -> Vec<EntityId> {
            s.team.players.value().into_iter().flatten().filter_map(|p| p.id.value().cloned()).collect()
        };
        let (home_players, away_players) = (player_ids(&home), player_ids(&away));

        // Timeline.
        let kickoff = Utc.with_ymd_and_hms(2024, 8, 17, 15, 0, 0).single().expect("valid date")
            + Duration::days((spec.seed % 300) as i64);
        let counts = spec.frame_counts();
        let mut windows = Vec::new();
        let mut t = kickoff;
        for (_, n) in &counts {
            let len = Duration::milliseconds(*n as i64 * 1000 / spec.fps);
            windows.push((t, t + len));
            t = t + len + Duration::minutes(10);
        }
        let regular: Vec<usize> = (0..counts.len()).filter(|i| counts[*i].0 != Period::Shootout).collect();

        // Goals and results.
        let mut goals = Vec::new();
        let (home_goals, away_goals) = if spec.has_shootout {
            let k = self.rng.gen_range(1..=2);
            (k, k)
        } else {
            let total = self.rng.gen_range(1..=5);
            let h = self.rng.gen_range(0..=total);
            (h, total - h)
        };
        for i in 0..(home_goals + away_goals) {
            let period_index = regular[self.rng.gen_range(0..regular.len())];
            let (s, e) = windows[period_index];
            goals.push(PlannedGoal {
                period_index,
                offset_ms: self.rng.gen_range(0..(e - s).num_milliseconds().max(1)),
                for_home: i < home_goals,
                own_goal: self.rng.gen_bool(0.1),
                penalty: self.rng.gen_bool(0.15),
            });
        }
        goals.sort_by_key(|g| (g.period_index, g.offset_ms));
        let tally_to = |last: usize| -> (i64, i64) {
            goals.iter().filter(|g| g.period_index <= last).fold((0, 0), |(h, a), g| {
                if g.for_home {
                    (h + 1, a)
                } else {
                    (h, a + 1)
                }
            })
        };
        let index_of = |p: Period| counts.iter().position(|c| c.0 == p);
        let phase = |p: Period| -> Field<Score> {
            match index_of(p) {
                Some(i) => {
                    let (h, a) = tally_to(i);
                    Score::new(h, a).into()
                }
                None => Field::Absent,
            }
        };
        let final_pair = (home_goals, away_goals);
        let shootout_pair = spec.has_shootout.then(|| {
            let winner = self.rng.gen_range(3..=5_i64);
            let loser = self.rng.gen_range(0..winner);
            if self.rng.gen_bool(0.5) {
                (winner, loser)
            } else {
                (loser, winner)
            }
        });
        let winner = match final_pair.0.cmp(&final_pair.1) {
            std::cmp::Ordering::Greater => Some(home_id.clone()),
            std::cmp::Ordering::Less => Some(away_id.clone()),
            std::cmp::Ordering::Equal => match shootout_pair {
                Some((h, a)) if h > a => Some(home_id.clone()),
                Some(_) => Some(away_id.clone()),
                None => None,
            },
        };
        let final_score = Score::new(final_pair.0, final_pair.1).with_winner(winner);
        let shootout_score = shootout_pair.map_or(Field::Absent, |(h, a)| Score::new(h, a).into());

        let starters = |ids: &[EntityId]| ids[..11].to_vec();
        let (home_xi, away_xi) = (starters(&home_players), starters(&away_players));
        let sheet_goals: Vec<Goal> = goals
            .iter()
            .map(|g| {
                let scoring_xi = if g.for_home != g.own_goal { &home_xi } else { &away_xi };
                let scorer = scoring_xi[self.rng.gen_range(1..11)].clone();
                let assist = (!g.own_goal && !g.penalty).then(|| {
                    let mut a = scoring_xi[self.rng.gen_range(1..11)].clone();
                    if a == scorer {
                        a = scoring_xi[0].clone();
                    }
                    a
                });
                Goal {
                    goal_time: Self::ts(windows[g.period_index].0 + Duration::milliseconds(g.offset_ms)).into(),
                    goal_player_id: scorer.into(),
                    goal_assist_id: assist.into(),
                    is_own_goal: Flag::from(g.own_goal).into(),
                    is_penalty: Flag::from(g.penalty).into(),
                    ..Default::default()
                }
            })
            .collect();

        // Substitutions in the second half; the substitute takes over the
        // starter's tracked slot.
        let second = index_of(Period::SecondHalf).expect("checked");
        let bench = spec.squad_size - 11;
        let mut subs = Vec::new();
        let mut slot_subs: Vec<Option<(usize, u64, EntityId)>> = vec![None; 22];
        for (side, ids) in [(0, &home_players), (1, &away_players)] {
            for k in 0..bench.min(3) {
                let slot = 1 + k * 3;
                let frame = counts[second].1 * (k as u64 + 1) / 4;
                let at = windows[second].0 + Duration::milliseconds(frame as i64 * 1000 / spec.fps);
                let time = Self::ts(at);
                subs.push(Substitution {
                    in_time: time.clone().into(),
                    in_player_id: ids[11 + k].clone().into(),
                    out_time: time.into(),
                    out_player_id: ids[slot].clone().into(),
                    ..Default::default()
                });
                slot_subs[side * 11 + slot] = Some((second, frame, ids[11 + k].clone()));
            }
        }
        let cards: Vec<Card> = (0..self.rng.gen_range(1..=4))
            .map(|_| {
                let p = if self.rng.gen_bool(0.5) { &home_xi } else { &away_xi };
                let i = regular[self.rng.gen_range(0..regular.len())];
                let (s, e) = windows[i];
                Card {
                    card_time: Self::ts(s + Duration::milliseconds(self.rng.gen_range(0..(e - s).num_milliseconds().max(1)))).into(),
                    card_player_id: p[self.rng.gen_range(0..11)].clone().into(),
                    card_type: Code::Known(if self.rng.gen_bool(0.85) { CardType::YellowCard } else { CardType::RedCard }).into(),
                    ..Default::default()
                }
            })
            .collect();

        let status = MatchStatus {
            is_neutral: Flag::from(false).into(),
            has_extratime: Flag::from(spec.has_extratime).into(),
            has_shootout: Flag::from(spec.has_shootout).into(),
            ..Default::default()
        };
        let teams = Teams { home: home.team.clone().into(), away: away.team.clone().into(), ..Default::default() };
        let person = |g: &mut Self, role: &str, i: usize| Referee {
            id: g.hex_id().into(),
            first_name: format!("{role}{i}").into(),
            last_name: "Official".to_owned().into(),
            ..Default::default()
        };
        let referees: Vec<Referee> = (0..4).map(|i| person(&mut self, "Ref", i)).collect();
        let coaches: Vec<Coach> = (0..2)
            .map(|i| Coach {
                coach_id: self.hex_id().into(),
                first_name: format!("Coach{i}").into(),
                last_name: "Fixture".to_owned().into(),
                ..Default::default()
            })
            .collect();

        let sheet = MatchSheet {
            match_info: SheetMatch {
                id: match_id.clone().into(),
                status: status.clone().into(),
                result: ResultBreakdown {
                    final_result: final_score.clone().into(),
                    first_half: phase(Period::FirstHalf),
                    second_half: phase(Period::SecondHalf),
                    first_extratime: phase(Period::FirstHalfExtratime),
                    second_extratime: phase(Period::SecondHalfExtratime),
                    shootout: shootout_score.clone(),
                    ..Default::default()
                }
                .into(),
                ..Default::default()
            }
            .into(),
            teams: teams.clone().into(),
            referees: referees.into(),
            coaches: coaches.into(),
            events: SheetEvents {
                goals: sheet_goals.into(),
                substitutions: subs.into(),
                cards: cards.into(),
                ..Default::default()
            }
            .into(),
            meta: SheetMeta { vendor: "fixture".to_owned().into(), ..Default::default() }.into(),
            ..Default::default()
        };

        // Meta.
        let whistles: Vec<Whistle> = counts
            .iter()
            .zip(&windows)
            .flat_map(|((p, _), (s, e))| {
                [(WhistleSubType::Start, *s), (WhistleSubType::End, *e)].map(|(sub, t)| Whistle {
                    whistle_type: Code::Known(WhistleType::Period(*p)).into(),
                    sub_type: Code::Known(sub).into(),
                    time: Self::ts(t).into(),
                    ..Default::default()
                })
            })
            .collect();
        let period_infos: Vec<PeriodInfo> = counts
            .iter()
            .zip(&windows)
            .map(|((p, n), (s, e))| {
                let home_left = matches!(p, Period::FirstHalf | Period::FirstHalfExtratime | Period::Shootout);
                let (l, r) = if home_left { (&home_id, &away_id) } else { (&away_id, &home_id) };
                PeriodInfo {
                    period_type: Code::Known(*p).into(),
                    time_start: Self::ts(*s).into(),
                    time_end: Self::ts(*e).into(),
                    frame_id_start: 0.into(),
                    frame_id_end: (*n as i64 - 1).into(),
                    left_team_id: l.clone().into(),
                    right_team_id: r.clone().into(),
                    ..Default::default()
                }
            })
            .collect();
        let skeletal = spec.skeletal_frames > 0;
        let pitch = (105.0, 68.0);
        let meta = MatchMeta {
            competition: Competition {
                id: self.hex_id().into(),
                name: "Fixture League".to_owned().into(),
                format: "league".to_owned().into(),
                ..Default::default()
            }
            .into(),
            season: Season { id: self.hex_id().into(), name: "2024/2025".to_owned().into(), ..Default::default() }.into(),
            match_info: MetaMatch {
                id: match_id.clone().into(),
                kickoff_time: Self::ts(kickoff).into(),
                periods: counts.iter().map(|(p, _)| Field::Value(Code::Known(*p))).collect::<Vec<_>>().into(),
                result: MetaResult {
                    final_result: final_score.into(),
                    extratime: if spec.has_extratime { Score::new(final_pair.0, final_pair.1).into() } else { Field::Absent },
                    shootout: shootout_score,
                    ..Default::default()
                }
                .into(),
                status: status.into(),
                whistles: whistles.clone().into(),
                round: Round::Number((spec.seed % 34) as i64 + 1).into(),
                ..Default::default()
            }
            .into(),
            teams: teams.into(),
            stadium: Stadium {
                id: self.hex_id().into(),
                pitch_length: pitch.0.into(),
                pitch_width: pitch.1.into(),
                name: "Fixture Park".to_owned().into(),
                turf: "grass".to_owned().into(),
                ..Default::default()
            }
            .into(),
            meta: MetaInfo {
                fps_tracking: spec.fps.into(),
                limb_tracking: Flag::from(skeletal).into(),
                limb_nodes: if skeletal { fixture_hierarchy().into() } else { Field::Absent },
                source_type: Code::Known(SourceType::PostMatch).into(),
                perspective: Code::Known(DataPerspective::InStadium).into(),
                version: Versions {
                    cdf: "1.0.0".to_owned().into(),
                    event: "1.0.0".to_owned().into(),
                    tracking: "1.0.0".to_owned().into(),
                    ..Default::default()
                }
                .into(),
                vendors: Vendors {
                    event: "fixture".to_owned().into(),
                    tracking: "fixture".to_owned().into(),
                    video: "fixture".to_owned().into(),
                    ..Default::default()
                }
                .into(),
                id_space: IdSpace {
                    match_data: "fixture".to_owned().into(),
                    event: "fixture".to_owned().into(),
                    tracking: "fixture".to_owned().into(),
                    ..Default::default()
                }
                .into(),
                fps_ball: spec.fps.into(),
                system: SystemInfo {
                    tracking_type: Code::Known(TrackingSystemType::InStadium).into(),
                    tracking_version: "1.0".to_owned().into(),
                    ..Default::default()
                }
                .into(),
                ..Default::default()
            }
            .into(),
            periods: period_infos.into(),
            ..Default::default()
        };
        let video = VideoMeta {
            match_id: match_id.clone().into(),
            fps: 25.into(),
            resolution: "1920x1080".to_owned().into(),
            operation_type: Code::Known(OperationType::Automated).into(),
            perspective: Code::Known(CameraPerspective::TacticalWide).into(),
            whistles: whistles.into(),
            ..Default::default()
        };

        // Streams.
        let motion = |id: &EntityId, side: &Side, ids: &[EntityId], offset: usize| TeamMotion {
            id: id.clone(),
            slots: side
                .starters
                .iter()
                .map(|i| Slot {
                    label: side.team.players.value().expect("set")[*i].position.known().expect("starter label"),
                    player: ids[*i].clone(),
                    substitute: slot_subs[offset + *i].clone(),
                })
                .collect(),
        };
        let tracking = TrackingPlan {
            seed: tracking_seed,
            match_id: match_id.clone(),
            fps: spec.fps,
            periods: counts.clone(),
            home: motion(&home_id, &home, &home_players, 0),
            away: motion(&away_id, &away, &away_players, 11),
            pitch,
            defects: Vec::new(),
        };
        let events = self.events(&match_id, &tracking, &windows, pitch);
        let skeletal = skeletal.then(|| {
            let h = SkeletonHierarchy::from_value(&fixture_hierarchy()).expect("fixture hierarchy is valid");
            let pose = t_pose_positions(&h);
            SkeletalPlan {
                seed: skeletal_seed,
                match_id: match_id.clone(),
                periods: counts.iter().map(|c| c.0).collect(),
                frames_per_period: spec.skeletal_frames.min(counts.iter().map(|c| c.1).min().unwrap_or(0)),
                home: tracking.home.clone(),
                away: tracking.away.clone(),
                limbs: h
                    .preorder()
                    .into_iter()
                    .map(|i| {
                        let name = h.nodes()[i].name.clone();
                        let p = pose[&name];
                        (name, Vec3::new(p.x, p.z, HIP_HEIGHT + p.y))
                    })
                    .collect(),
                defects: Vec::new(),
            }
        });

        Fixture {
            spec: spec.clone(),
            match_sheet: Some(sheet),
            meta: Some(meta),
            video_meta: Some(video),
            events: Some(events),
            tracking: Some(tracking),
            skeletal,
            applied: Vec::new(),
        }
    }

    fn events(
        &mut self,
        match_id: &EntityId,
        tracking: &TrackingPlan,
        windows: &[(DateTime<Utc>, DateTime<Utc>)],
        pitch: (f64, f64),
    ) -> Vec<EventRecord> {
        let total: u64 = tracking.frame_count();
        let n = self.spec.event_count as u64;
        let fps = self.spec.fps;
        let (hx, hy) = (pitch.0 / 2.0, pitch.1 / 2.0);
        let mut out = Vec::with_capacity(n as usize);
        for k in 0..n {
            // Spread evenly over the match by frame.
            let mut at = (2 * k + 1) * total / (2 * n);
            let mut period_index = 0;
            while at >= tracking.periods[period_index].1 {
                at -= tracking.periods[period_index].1;
                period_index += 1;
            }
            let (period, frames) = tracking.periods[period_index];
            let time = windows[period_index].0 + Duration::milliseconds(at as i64 * 1000 / fps);
            let home_side = self.rng.gen_bool(0.5);
            let team = if home_side { &tracking.home } else { &tracking.away };
            let pick = |rng: &mut ChaCha8Rng| -> EntityId {
                let slot = &team.slots[rng.gen_range(0..team.slots.len())];
                slot.player.clone()
            };
            let event_type = if period == Period::Shootout {
                EventType::Shot
            } else {
                *[EventType::Pass, EventType::Pass, EventType::Pass, EventType::Shot, EventType::Misc, EventType::Referee]
                    .choose(&mut self.rng)
                    .expect("non-empty")
            };
            let sub_type = if period == Period::Shootout {
                Some(SubType::PenaltyKick)
            } else {
                *allowed_subtypes(event_type).choose(&mut self.rng).expect("non-empty")
            };
            let outcome_detailed = allowed_outcomes(event_type).choose(&mut self.rng).copied();
            let outcome = outcome_detailed.and_then(|o| implied_success(event_type, o));
            let player_1 = (event_type != EventType::Referee || self.rng.gen_bool(0.5)).then(|| pick(&mut self.rng));
            let team_1 = player_1.as_ref().map(|_| team.id.clone());
            let receiver = (event_type == EventType::Pass && outcome == Some(true)).then(|| pick(&mut self.rng));
            let xy = |rng: &mut ChaCha8Rng| (r3(rng.gen_range(-hx..hx)), r3(rng.gen_range(-hy..hy)));
            let (x1, y1) = if period == Period::Shootout { (41.5, 0.0) } else { xy(&mut self.rng) };
            let (x2, y2) = xy(&mut self.rng);
            let foot = [BodyPart::LeftFoot, BodyPart::RightFoot, BodyPart::Head];
            let body_part = player_1.as_ref().map(|_| Code::Known(*foot.choose(&mut self.rng).expect("non-empty")));
            let frame_2 = (at + fps as u64 * 2).min(frames - 1);
            let metrics = match event_type {
                EventType::Shot => Field::Value(EventMetrics { xg: r3(self.rng.gen_range(0.0..1.0)).into(), ..Default::default() }),
                EventType::Pass => Field::Value(EventMetrics { xpass: r3(self.rng.gen_range(0.0..1.0)).into(), ..Default::default() }),
                _ => Field::Absent,
            };
            out.push(EventRecord {
                match_ref: MatchRef { id: match_id.clone().into(), ..Default::default() }.into(),
                meta: EventMeta { is_synced: Flag::TRUE.into(), ..Default::default() }.into(),
                event: EventBody {
                    id: EntityId::new(format!("ev{k:06}")).expect("valid id").into(),
                    time: Self::ts(time).into(),
                    period: Code::Known(period).into(),
                    event_type: Code::Known(event_type).into(),
                    sub_type: sub_type.map(Code::Known).into(),
                    outcome: outcome.map(Flag::from).into(),
                    outcome_detailed: outcome_detailed.map(Code::Known).into(),
                    player_id_1: player_1.clone().into(),
                    team_id_1: team_1.into(),
                    player_id_2: receiver.clone().into(),
                    team_id_2: receiver.map(|_| team.id.clone()).into(),
                    x_1: x1.into(),
                    y_1: y1.into(),
                    x_2: x2.into(),
                    y_2: y2.into(),
                    body_part_1: body_part.into(),
                    body_part_2: Field::Missing,
                    metrics,
                    ..Default::default()
                }
                .into(),
                tracking: EventTracking {
                    frame_id_1: (at as i64).into(),
                    frame_id_2: (frame_2 as i64).into(),
                    x_player_1: x1.into(),
                    y_player_1: y1.into(),
                    ..Default::default()
                }
                .into(),
                ..Default::default()
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{validate_bundle, BundleOptions};
    use crate::positions::{validate_lineup, Formation, LineupAssignment};

    #[test]
    fn lineups_are_valid_formations() {
        for (labels, f) in LINEUPS.iter().zip(["4-4-2", "4-3-3", "3-5-2"]) {
            let r = validate_lineup(&LineupAssignment::from_labels(labels), &f.parse::<Formation>().unwrap());
            assert!(r.is_empty(), "{f}: {}", r.to_text());
        }
    }

    #[test]
    fn spec_consistency() {
        assert!(FixtureSpec::small(1).check().is_ok());
        let mut s = FixtureSpec::small(1).with_shootout(5.0);
        assert!(matches!(s.check(), Err(CdfError::FixtureSpec(_))));
        s = s.with_extratime(1.0);
        assert!(s.check().is_ok());
        assert_eq!(
            s.periods.iter().map(|p| p.period).collect::<Vec<_>>(),
            Period::ALL.to_vec()
        );
        let mut bad = FixtureSpec::small(1);
        bad.has_extratime = true;
        assert!(bad.check().is_err());
        assert!(FixtureSpec { fps: 0, ..FixtureSpec::small(1) }.check().is_err());
        assert!(matches!(FixtureSpec::small(1).with_mutation("nope").check(), Err(CdfError::UnknownMutation(_))));
    }

    #[test]
    fn small_fixture_is_clean() {
        let f = generate(&FixtureSpec::small(7)).unwrap();
        assert_eq!(f.tracking_frames().count(), 600);
        let r = validate_bundle(&f.to_bundle().unwrap(), &BundleOptions::default()).unwrap();
        assert_eq!(r.error_count(), 0, "{}", r.to_text());
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = generate(&FixtureSpec::small(3)).unwrap().encode().unwrap();
        let b = generate(&FixtureSpec::small(3)).unwrap().encode().unwrap();
        let c = generate(&FixtureSpec::small(4)).unwrap().encode().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn no_events_is_legal() {
        let spec = FixtureSpec { event_count: 0, ..FixtureSpec::small(2) };
        let f = generate(&spec).unwrap();
        assert_eq!(f.events.as_ref().map(Vec::len), Some(0));
        let r = validate_bundle(&f.to_bundle().unwrap(), &BundleOptions::default()).unwrap();
        assert_eq!(r.error_count(), 0, "{}", r.to_text());
    }
}
