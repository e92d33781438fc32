//! Lazily generated tracking and skeletal streams.
//!
//! Players follow a mean-reverting random walk around an anchor given by
//! their position label, pulled slightly towards the ball and clipped to
//! the pitch. Frames are produced one at a time from a seeded generator, so
//! a stream can be replayed exactly and never has to be held in memory.

use std::collections::VecDeque;
use std::io::{self, BufRead, Read};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{write_record, CdfRecord, WriteOptions};
use crate::geometry::Vec3;
use crate::model::{
    Ball, Code, EntityId, Field, Flag, FramePlayer, FrameTeam, FrameTeams, Limb, MatchRef, Period, PositionLabel,
    SkeletonFrame, SkeletonPlayer, SkeletonTeam, SkeletonTeams, TrackingFrame,
};
use crate::positions::{band_of, lateral, Band};

/// Mean reversion rate of player motion, per second.
const THETA: f64 = 0.6;
/// Noise scale of player motion, meters per square-root second.
const SIGMA: f64 = 2.5;
/// How far the ball pulls a player's anchor.
const BALL_PULL: f64 = 0.25;

/// Three decimals, as written by the codec, so generated records survive a
/// write and read unchanged.
pub(crate) fn r3(v: f64) -> f64 {
    let out = (v * 1000.0).round() / 1000.0;
    if out == 0.0 {
        0.0
    } else {
        out
    }
}

/// Home-orientation anchor for a label: defenders at negative X, the left
/// flank at positive Y.
pub fn anchor(label: PositionLabel) -> (f64, f64) {
    let band = band_of(label);
    let x = match band {
        Band::Goal => -47.0,
        Band::Defence => -33.0,
        Band::DefensiveMidfield => -22.0,
        Band::Midfield => -12.0,
        Band::AttackingMidfield => -2.0,
        Band::Attack => 8.0,
    };
    let n = band.labels().len() as f64;
    let spacing = 60.0 / n.max(1.0);
    let y = ((n - 1.0) / 2.0 - lateral(label) as f64) * spacing;
    (x, y)
}

/// One tracked shirt: who wears it and when a substitute takes over.
#[derive(Debug, Clone, PartialEq)]
pub struct Slot {
    pub label: PositionLabel,
    pub player: EntityId,
    /// `(period index, first frame, substitute)`.
    pub substitute: Option<(usize, u64, EntityId)>,
}

impl Slot {
    fn player_at(&self, period: usize, frame: u64) -> &EntityId {
        match &self.substitute {
            Some((p, f, sub)) if (period, frame) >= (*p, *f) => sub,
            _ => &self.player,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamMotion {
    pub id: EntityId,
    pub slots: Vec<Slot>,
}

/// Frame-level defects injected while generating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameEdit {
    DropBallZ,
    DropPlayerX,
    DropMatch,
    DuplicatePlayer,
    BallBelowGround,
    UnknownPeriod,
    ForeignPlayer,
    DropLimbZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamDefect {
    Skip { period: usize, frame: u64 },
    Repeat { period: usize, frame: u64 },
    /// Keep only the first `keep` frames of the period.
    Truncate { period: usize, keep: u64 },
    /// After frame 0 of `period`, one more frame of the previous period.
    Regress { period: usize },
    Edit { period: usize, frame: u64, edit: FrameEdit },
}

/// Everything needed to replay a tracking stream.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingPlan {
    pub seed: u64,
    pub match_id: EntityId,
    pub fps: i64,
    /// `(period, frame count)` in playing order.
    pub periods: Vec<(Period, u64)>,
    pub home: TeamMotion,
    pub away: TeamMotion,
    pub pitch: (f64, f64),
    pub defects: Vec<StreamDefect>,
}

impl TrackingPlan {
    pub fn frame_count(&self) -> u64 {
        self.periods.iter().map(|p| p.1).sum()
    }

    pub fn frames(&self) -> TrackingFrames {
        TrackingFrames::new(self.clone())
    }

    /// One line per frame, generated as it is read.
    pub fn lines(&self) -> RecordLines<TrackingFrames> {
        RecordLines::new(self.frames())
    }
}

struct Walker {
    pos: Vec<(f64, f64)>,
    dist: Vec<f64>,
    ball: Vec3<f64>,
    ball_vel: (f64, f64),
    rng: ChaCha8Rng,
}

impl Walker {
    fn new(seed: u64, anchors: &[(f64, f64)]) -> Self {
        Walker {
            pos: anchors.to_vec(),
            dist: vec![0.0; anchors.len()],
            ball: Vec3::zero(),
            ball_vel: (0.0, 0.0),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn kickoff(&mut self, anchors: &[(f64, f64)]) {
        self.pos.copy_from_slice(anchors);
        self.ball = Vec3::zero();
        self.ball_vel = (0.0, 0.0);
    }

    fn noise(&mut self) -> f64 {
        // Uniform with unit variance.
        self.rng.gen_range(-1.732..1.732)
    }

    /// Advances one frame; returns per-player speeds.
    fn step(&mut self, anchors: &[(f64, f64)], dt: f64, half: (f64, f64)) -> Vec<f64> {
        let sd = SIGMA * dt.sqrt();
        let (bx, by) = (self.ball.x, self.ball.y);
        let mut speeds = Vec::with_capacity(self.pos.len());
        for i in 0..self.pos.len() {
            let (ax, ay) = anchors[i];
            let target = (ax + BALL_PULL * (bx - ax), ay + BALL_PULL * (by - ay));
            let (x, y) = self.pos[i];
            let nx = (x + THETA * (target.0 - x) * dt + sd * self.noise()).clamp(-half.0, half.0);
            let ny = (y + THETA * (target.1 - y) * dt + sd * self.noise()).clamp(-half.1, half.1);
            let d = ((nx - x).powi(2) + (ny - y).powi(2)).sqrt();
            self.dist[i] += d;
            self.pos[i] = (nx, ny);
            speeds.push(d / dt);
        }
        self.ball_vel.0 = 0.95 * self.ball_vel.0 + 4.0 * self.noise() * dt - 0.05 * self.ball.x * dt;
        self.ball_vel.1 = 0.95 * self.ball_vel.1 + 4.0 * self.noise() * dt - 0.05 * self.ball.y * dt;
        self.ball.x = (self.ball.x + self.ball_vel.0).clamp(-half.0, half.0);
        self.ball.y = (self.ball.y + self.ball_vel.1).clamp(-half.1, half.1);
        self.ball.z = (self.ball.z + 0.2 * self.noise() * dt.sqrt()).clamp(0.0, 3.0);
        speeds
    }
}

fn team_anchors(plan: &TrackingPlan) -> Vec<(f64, f64)> {
    let home = plan.home.slots.iter().map(|s| anchor(s.label));
    let away = plan.away.slots.iter().map(|s| {
        let (x, y) = anchor(s.label);
        (-x, -y)
    });
    home.chain(away).collect()
}

/// Iterator over the frames of a [`TrackingPlan`].
pub struct TrackingFrames {
    plan: TrackingPlan,
    anchors: Vec<(f64, f64)>,
    walker: Walker,
    period: usize,
    frame: u64,
    queue: VecDeque<TrackingFrame>,
    match_ref: Field<MatchRef>,
}

impl TrackingFrames {
    fn new(plan: TrackingPlan) -> Self {
        let anchors = team_anchors(&plan);
        TrackingFrames {
            walker: Walker::new(plan.seed, &anchors),
            match_ref: MatchRef { id: plan.match_id.clone().into(), ..Default::default() }.into(),
            anchors,
            plan,
            period: 0,
            frame: 0,
            queue: VecDeque::new(),
        }
    }

    fn frames_in(&self, period: usize) -> u64 {
        let (_, n) = self.plan.periods[period];
        self.plan
            .defects
            .iter()
            .filter_map(|d| match d {
                StreamDefect::Truncate { period: p, keep } if *p == period => Some(*keep),
                _ => None,
            })
            .fold(n, u64::min)
    }

    fn build(&mut self, period: usize, frame: u64) -> TrackingFrame {
        let dt = 1.0 / self.plan.fps as f64;
        let half = (self.plan.pitch.0 / 2.0, self.plan.pitch.1 / 2.0);
        if frame == 0 {
            self.walker.kickoff(&self.anchors);
        }
        let speeds = self.walker.step(&self.anchors, dt, half);
        let mut nearest = (f64::INFINITY, 0);
        let team = |tm: &TeamMotion, offset: usize, w: &Walker| -> Vec<FramePlayer> {
            tm.slots
                .iter()
                .enumerate()
                .map(|(i, slot)| {
                    let (x, y) = w.pos[offset + i];
                    FramePlayer {
                        id: slot.player_at(period, frame).clone().into(),
                        team_id: tm.id.clone().into(),
                        x: r3(x).into(),
                        y: r3(y).into(),
                        dist: r3(w.dist[offset + i]).into(),
                        vel: r3(speeds[offset + i]).into(),
                        ..Default::default()
                    }
                })
                .collect()
        };
        let home = team(&self.plan.home, 0, &self.walker);
        let away = team(&self.plan.away, self.plan.home.slots.len(), &self.walker);
        for (i, (x, y)) in self.walker.pos.iter().enumerate() {
            let d = (x - self.walker.ball.x).powi(2) + (y - self.walker.ball.y).powi(2);
            if d < nearest.0 {
                nearest = (d, i);
            }
        }
        let poss = if nearest.1 < self.plan.home.slots.len() { &self.plan.home.id } else { &self.plan.away.id };
        let b = self.walker.ball;
        TrackingFrame {
            frame_id: (frame as i64).into(),
            period: Code::Known(self.plan.periods[period].0).into(),
            match_ref: self.match_ref.clone(),
            teams: FrameTeams {
                home: FrameTeam { id: self.plan.home.id.clone().into(), players: home.into(), ..Default::default() }.into(),
                away: FrameTeam { id: self.plan.away.id.clone().into(), players: away.into(), ..Default::default() }.into(),
                ..Default::default()
            }
            .into(),
            ball: Ball { x: r3(b.x).into(), y: r3(b.y).into(), z: r3(b.z).into(), ..Default::default() }.into(),
            ball_status: Flag::TRUE.into(),
            ball_poss_team_id: poss.clone().into(),
            ..Default::default()
        }
    }
}

fn first_player(f: &mut TrackingFrame) -> Option<&mut FramePlayer> {
    f.teams.value_mut()?.home.value_mut()?.players.value_mut()?.first_mut()
}

fn edit_tracking(f: &mut TrackingFrame, edit: FrameEdit) {
    match edit {
        FrameEdit::DropBallZ => {
            if let Some(b) = f.ball.value_mut() {
                b.z = Field::Absent;
            }
        }
        FrameEdit::DropPlayerX => {
            if let Some(p) = first_player(f) {
                p.x = Field::Absent;
            }
        }
        FrameEdit::DropMatch => f.match_ref = Field::Absent,
        FrameEdit::DuplicatePlayer => {
            if let Some(ps) = f.teams.value_mut().and_then(|t| t.home.value_mut()).and_then(|t| t.players.value_mut()) {
                if let Some(p) = ps.first().cloned() {
                    ps.push(p);
                }
            }
        }
        FrameEdit::BallBelowGround => {
            if let Some(b) = f.ball.value_mut() {
                b.z = (-0.5).into();
            }
        }
        FrameEdit::UnknownPeriod => f.period = Code::Unknown("third_half".into()).into(),
        FrameEdit::ForeignPlayer => {
            if let Some(p) = first_player(f) {
                p.id = EntityId::new("not-on-roster").expect("valid id").into();
            }
        }
        FrameEdit::DropLimbZ => {}
    }
}

impl Iterator for TrackingFrames {
    type Item = TrackingFrame;

    fn next(&mut self) -> Option<TrackingFrame> {
        loop {
            if let Some(f) = self.queue.pop_front() {
                return Some(f);
            }
            if self.period >= self.plan.periods.len() {
                return None;
            }
            if self.frame >= self.frames_in(self.period) {
                self.period += 1;
                self.frame = 0;
                continue;
            }
            let (period, frame) = (self.period, self.frame);
            self.frame += 1;
            let mut f = self.build(period, frame);
            if self.plan.defects.contains(&StreamDefect::Skip { period, frame }) {
                continue;
            }
            for d in &self.plan.defects {
                if let StreamDefect::Edit { period: p, frame: n, edit } = d {
                    if (*p, *n) == (period, frame) {
                        edit_tracking(&mut f, *edit);
                    }
                }
            }
            if self.plan.defects.contains(&StreamDefect::Repeat { period, frame }) {
                self.queue.push_back(f.clone());
            }
            if frame == 0 && period > 0 && self.plan.defects.contains(&StreamDefect::Regress { period }) {
                let mut late = f.clone();
                late.period = Code::Known(self.plan.periods[period - 1].0).into();
                late.frame_id = (self.plan.periods[period - 1].1 as i64).into();
                self.queue.push_back(late);
            }
            return Some(f);
        }
    }
}

/// Skeletal frames for the first `frames_per_period` frames of each period.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletalPlan {
    pub seed: u64,
    pub match_id: EntityId,
    pub periods: Vec<Period>,
    pub frames_per_period: u64,
    pub home: TeamMotion,
    pub away: TeamMotion,
    /// Limb name and offset from the player's ground position.
    pub limbs: Vec<(String, Vec3<f64>)>,
    pub defects: Vec<StreamDefect>,
}

impl SkeletalPlan {
    pub fn frames(&self) -> impl Iterator<Item = SkeletonFrame> + '_ {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let match_ref: Field<MatchRef> = MatchRef { id: self.match_id.clone().into(), ..Default::default() }.into();
        self.periods.iter().enumerate().flat_map(move |(pi, period)| {
            (0..self.frames_per_period).map(move |frame| (pi, *period, frame))
        })
        .map(move |(pi, period, frame)| {
            let mut team = |tm: &TeamMotion, sign: f64| -> SkeletonTeam {
                let players = tm
                    .slots
                    .iter()
                    .map(|slot| {
                        let (ax, ay) = anchor(slot.label);
                        let (x, y) = (sign * ax + rng.gen_range(-0.5..0.5), sign * ay + rng.gen_range(-0.5..0.5));
                        SkeletonPlayer {
                            id: slot.player_at(pi, frame).clone().into(),
                            team_id: tm.id.clone().into(),
                            limbs: self
                                .limbs
                                .iter()
                                .map(|(name, o)| Limb {
                                    name: name.clone(),
                                    x: r3(x + o.x).into(),
                                    y: r3(y + o.y).into(),
                                    z: r3(o.z).into(),
                                    ..Default::default()
                                })
                                .collect(),
                            ..Default::default()
                        }
                    })
                    .collect::<Vec<_>>();
                SkeletonTeam { id: tm.id.clone().into(), players: players.into(), ..Default::default() }
            };
            let home = team(&self.home, 1.0);
            let away = team(&self.away, -1.0);
            let mut f = SkeletonFrame {
                frame_id: (frame as i64).into(),
                period: Code::Known(period).into(),
                match_ref: match_ref.clone(),
                teams: SkeletonTeams { home: home.into(), away: away.into(), ..Default::default() }.into(),
                ..Default::default()
            };
            for d in &self.defects {
                if let StreamDefect::Edit { period: p, frame: n, edit: FrameEdit::DropLimbZ } = d {
                    if (*p, *n) == (pi, frame) {
                        let limb = f
                            .teams
                            .value_mut()
                            .and_then(|t| t.home.value_mut())
                            .and_then(|t| t.players.value_mut())
                            .and_then(|ps| ps.first_mut())
                            .and_then(|p| p.limbs.first_mut());
                        if let Some(l) = limb {
                            l.z = Field::Absent;
                        }
                    }
                }
            }
            f
        })
    }

    pub fn lines(&self) -> RecordLines<impl Iterator<Item = SkeletonFrame> + '_> {
        RecordLines::new(self.frames())
    }
}

/// Adapts an iterator of records into a JSON Lines reader.
pub struct RecordLines<I> {
    records: I,
    buf: Vec<u8>,
    pos: usize,
    opts: WriteOptions,
}

impl<I> RecordLines<I> {
    pub fn new(records: I) -> Self {
        RecordLines { records, buf: Vec::new(), pos: 0, opts: WriteOptions::default() }
    }
}

impl<T: CdfRecord, I: Iterator<Item = T>> BufRead for RecordLines<I> {
    fn fill_buf(&mut self) -> io::Result<&[u8]> {
        if self.pos >= self.buf.len() {
            self.buf.clear();
            self.pos = 0;
            if let Some(r) = self.records.next() {
                self.buf = write_record(&r, &self.opts).map_err(io::Error::other)?;
            }
        }
        Ok(&self.buf[self.pos..])
    }

    fn consume(&mut self, amt: usize) {
        self.pos = (self.pos + amt).min(self.buf.len());
    }
}

impl<T: CdfRecord, I: Iterator<Item = T>> Read for RecordLines<I> {
    fn read(&mut self, out: &mut [u8]) -> io::Result<usize> {
        let avail = self.fill_buf()?;
        let n = avail.len().min(out.len());
        out[..n].copy_from_slice(&avail[..n]);
        self.consume(n);
        Ok(n)
    }
}
