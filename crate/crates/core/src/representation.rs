//! Coordinate and precision conventions as transforms.
//!
//! CDF coordinates are meters from the pitch center, X along the sideline
//! and Y along the goal line, with the home team always playing left to
//! right. [`to_actual_sides`] derives the real orientation of a period from
//! its [`SideAssignment`]; the only transform used is a 180 degree turn
//! about the center ([`flip_xy`]), which keeps the handedness of the frame.

use crate::codec::{self, CdfRecord, MissingPolicy, WriteOptions};
use crate::error::{CdfError, Result};
use crate::geometry::{Interval, Vec3};
use crate::model::{EntityId, EventRecord, EventType, Field, MatchMeta, Period, PitchGeometry, SkeletonFrame, TrackingFrame};
use crate::report::{Component, Report};
use crate::rules::catalog::pl;
use crate::scalar::Scalar;

/// Turns a point half a revolution about the pitch center.
pub fn flip_xy<T: Scalar>(p: Vec3<T>) -> Vec3<T> {
    Vec3::new(-p.x, -p.y, p.z)
}

/// The pitch rectangle: `X` in `[-L/2, L/2]`, `Y` in `[-W/2, W/2]`.
/// `None` (no bounds) unless both dimensions are known.
pub fn coordinate_domain<T: Scalar>(pitch: &PitchGeometry<T>) -> Option<(Interval<T>, Interval<T>)> {
    let half = T::lit(0.5);
    Some((Interval::symmetric(pitch.length? * half), Interval::symmetric(pitch.width? * half)))
}

/// Which team occupied the left half in a period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideAssignment {
    pub period: Period,
    pub left_team_id: EntityId,
    pub right_team_id: EntityId,
}

impl SideAssignment {
    pub fn new(period: Period, left_team_id: EntityId, right_team_id: EntityId) -> Result<Self> {
        if left_team_id == right_team_id {
            return Err(CdfError::SideAssignment(format!("`{left_team_id}` on both sides in {period}")));
        }
        Ok(SideAssignment { period, left_team_id, right_team_id })
    }

    /// Assignments listed in the meta's `periods` block, in order.
    pub fn from_meta(meta: &MatchMeta) -> Result<Vec<Self>> {
        let Some(periods) = meta.periods.value() else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        for p in periods {
            if let (Some(period), Some(l), Some(r)) = (p.period_type.known(), p.left_team_id.value(), p.right_team_id.value()) {
                out.push(SideAssignment::new(period, l.clone(), r.clone())?);
            }
        }
        Ok(out)
    }

    /// Checks the assignment against the match's two teams.
    pub fn check_teams(&self, home: &EntityId, away: &EntityId) -> Result<()> {
        for id in [&self.left_team_id, &self.right_team_id] {
            if id != home && id != away {
                return Err(CdfError::SideAssignment(format!("`{id}` is not a team of the match")));
            }
        }
        Ok(())
    }
}

/// Records carrying pitch coordinates.
pub trait Oriented: Clone {
    /// Applies [`flip_xy`] to every planar position.
    fn flip(&mut self);
}

fn flip_pair(x: &mut Field<f64>, y: &mut Field<f64>) {
    for f in [x, y] {
        if let Field::Value(v) = f {
            *v = -*v;
        }
    }
}

impl Oriented for TrackingFrame {
    fn flip(&mut self) {
        if let Some(teams) = self.teams.value_mut() {
            for team in [&mut teams.home, &mut teams.away] {
                for p in team.value_mut().and_then(|t| t.players.value_mut()).into_iter().flatten() {
                    flip_pair(&mut p.x, &mut p.y);
                }
            }
        }
        if let Some(b) = self.ball.value_mut() {
            flip_pair(&mut b.x, &mut b.y);
        }
        for r in self.referees.value_mut().into_iter().flatten() {
            flip_pair(&mut r.x, &mut r.y);
        }
    }
}

impl Oriented for EventRecord {
    fn flip(&mut self) {
        if let Some(b) = self.event.value_mut() {
            flip_pair(&mut b.x_1, &mut b.y_1);
            flip_pair(&mut b.x_2, &mut b.y_2);
        }
        if let Some(t) = self.tracking.value_mut() {
            flip_pair(&mut t.x_player_1, &mut t.y_player_1);
            flip_pair(&mut t.x_player_2, &mut t.y_player_2);
        }
    }
}

impl Oriented for SkeletonFrame {
    fn flip(&mut self) {
        if let Some(teams) = self.teams.value_mut() {
            for team in [&mut teams.home, &mut teams.away] {
                for p in team.value_mut().and_then(|t| t.players.value_mut()).into_iter().flatten() {
                    for limb in &mut p.limbs {
                        flip_pair(&mut limb.x, &mut limb.y);
                    }
                }
            }
        }
    }
}

/// Converts a record from the CDF orientation to the sides actually
/// played. The transform is its own inverse, so the same call converts back.
pub fn to_actual_sides<R: Oriented>(record: &R, sides: &SideAssignment, home_team_id: &EntityId) -> Result<R> {
    let mut out = record.clone();
    if sides.left_team_id == *home_team_id {
        Ok(out)
    } else if sides.right_team_id == *home_team_id {
        out.flip();
        Ok(out)
    } else {
        Err(CdfError::SideAssignment(format!(
            "home team `{home_team_id}` is on neither side in {}",
            sides.period
        )))
    }
}

/// Inverse of [`to_actual_sides`].
pub fn to_cdf_sides<R: Oriented>(record: &R, sides: &SideAssignment, home_team_id: &EntityId) -> Result<R> {
    to_actual_sides(record, sides, home_team_id)
}

/// Shootout shots must be taken towards the right goal (positive X).
/// Findings carry the 1-based position of the event in `events`.
pub fn check_shootout_direction<'a>(events: impl IntoIterator<Item = &'a EventRecord>) -> Report {
    let mut report = Report::new(Component::Events);
    for (i, e) in events.into_iter().enumerate() {
        if e.period() != Some(Period::Shootout) || e.event_type() != Some(EventType::Shot) {
            continue;
        }
        if let Some(x) = e.body().and_then(|b| b.x_1.get()).filter(|x| *x < 0.0) {
            let mut r = Report::for_line(Component::Events, i as u64 + 1);
            r.push(&pl::SHOOTOUT_DIRECTION, "/event/x_1", format!("shootout shot at x = {x}"));
            report.absorb(r);
        }
    }
    report
}

/// Rounds every measurement float to [`crate::CDF_DECIMALS`] places
/// (half to even); geodetic coordinates are kept exact. Non-finite floats
/// become missing and are reported. Idempotent.
pub fn canonicalize_precision<T: CdfRecord>(record: &T) -> (T, Report) {
    canonicalize_with(record, Some(crate::CDF_DECIMALS))
}

pub fn canonicalize_with<T: CdfRecord>(record: &T, decimals: Option<u32>) -> (T, Report) {
    let opts = WriteOptions::default().with_policy(MissingPolicy::Null).with_decimals(decimals);
    let (map, bad) = codec::encode_lenient(record, &opts);
    let mut report = Report::new(T::COMPONENT);
    for path in bad {
        report.push(&pl::NON_FINITE, path, "non-finite float set missing");
    }
    let mut scratch = Report::new(T::COMPONENT);
    let out = codec::decode_value(&serde_json::Value::Object(map), MissingPolicy::Null, &mut scratch)
        .expect("an encoded record is an object");
    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Ball, FramePlayer, FrameTeam, FrameTeams};

    fn id(s: &str) -> EntityId {
        EntityId::new(s).unwrap()
    }

    fn frame() -> TrackingFrame {
        let player = FramePlayer { id: id("p").into(), x: 10.0.into(), y: 5.0.into(), lat: 51.5.into(), ..Default::default() };
        TrackingFrame {
            frame_id: 0.into(),
            teams: FrameTeams {
                home: FrameTeam { id: id("h").into(), players: vec![player].into(), ..Default::default() }.into(),
                ..Default::default()
            }
            .into(),
            ball: Ball { x: 0.01.into(), y: 23.1.into(), z: 0.33.into(), ..Default::default() }.into(),
            ..Default::default()
        }
    }

    #[test]
    fn flips() {
        assert_eq!(flip_xy(Vec3::new(52.5, -34.0, 1.0)), Vec3::new(-52.5, 34.0, 1.0));
        assert_eq!(flip_xy(Vec3::<f32>::zero()), Vec3::zero());
    }

    #[test]
    fn domains() {
        let (x, y) = coordinate_domain(&PitchGeometry::new(105.0, 68.0)).unwrap();
        assert_eq!((x.lo, x.hi, y.lo, y.hi), (-52.5, 52.5, -34.0, 34.0));
        let (x, y) = coordinate_domain(&PitchGeometry::new(100.0_f32, 64.0)).unwrap();
        assert_eq!((x.hi, y.hi), (50.0, 32.0));
        assert!(coordinate_domain(&PitchGeometry::<f64>::unknown()).is_none());
    }

    #[test]
    fn sides() {
        let s = SideAssignment::new(Period::FirstHalf, id("a"), id("h")).unwrap();
        let out = to_actual_sides(&frame(), &s, &id("h")).unwrap();
        let p = out.players().next().unwrap();
        assert_eq!((p.x.get(), p.y.get(), p.lat.get()), (Some(-10.0), Some(-5.0), Some(51.5)));
        assert_eq!(to_cdf_sides(&out, &s, &id("h")).unwrap(), frame());
        let same = SideAssignment::new(Period::FirstHalf, id("h"), id("a")).unwrap();
        assert_eq!(to_actual_sides(&frame(), &same, &id("h")).unwrap(), frame());
        assert!(to_actual_sides(&frame(), &same, &id("x")).is_err());
        assert!(SideAssignment::new(Period::FirstHalf, id("h"), id("h")).is_err());
    }

    #[test]
    fn precision() {
        let mut f = frame();
        f.ball.value_mut().unwrap().x = 23.1049.into();
        f.ball.value_mut().unwrap().y = 0.0005.into();
        f.ball.value_mut().unwrap().z = f64::NAN.into();
        let (once, report) = canonicalize_precision(&f);
        let b = once.ball.value().unwrap();
        assert_eq!((b.x.get(), b.y.get()), (Some(23.105), Some(0.0)));
        assert!(b.z.is_missing());
        assert_eq!(report.count_rule("PL-060"), 1);
        assert_eq!(report.findings()[0].path, "/ball/z");
        let (twice, r2) = canonicalize_precision(&once);
        assert_eq!(twice, once);
        assert!(r2.is_empty());
    }
}
