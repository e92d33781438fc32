//! Closed vocabularies and the event type compatibility tables.

use std::str::FromStr;

use super::Vocabulary;
use crate::error::CdfError;

macro_rules! vocabulary {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl Vocabulary for $name {
            const ALL: &'static [Self] = &[$(Self::$variant),+];

            fn as_str(self) -> &'static str {
                match self {
                    $(Self::$variant => $text),+
                }
            }
        }

        impl FromStr for $name {
            type Err = CdfError;
            fn from_str(s: &str) -> Result<Self, CdfError> {
                <Self as Vocabulary>::parse(s).ok_or_else(|| CdfError::UnknownName {
                    what: stringify!($name),
                    value: s.to_owned(),
                })
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

/// A playing period. Meta documents spell the extra-time halves
/// `*_extratime`, event and tracking streams `*_extra`; both are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Period {
    FirstHalf,
    SecondHalf,
    FirstHalfExtratime,
    SecondHalfExtratime,
    Shootout,
}

/// Which table's spelling to use when writing a [`Period`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodSpelling {
    /// `first_half_extratime` (match meta).
    Meta,
    /// `first_half_extra` (events and tracking).
    Stream,
}

impl Period {
    pub fn name(self, spelling: PeriodSpelling) -> &'static str {
        match (self, spelling) {
            (Period::FirstHalfExtratime, PeriodSpelling::Stream) => "first_half_extra",
            (Period::SecondHalfExtratime, PeriodSpelling::Stream) => "second_half_extra",
            _ => self.as_str(),
        }
    }

    /// Parses either spelling; the flag tells whether the text was the
    /// `spelling` variant.
    pub fn parse_spelled(text: &str, spelling: PeriodSpelling) -> Option<(Period, bool)> {
        let p = <Period as Vocabulary>::parse(text)?;
        Some((p, p.name(spelling) == text))
    }

    pub fn is_extratime(self) -> bool {
        matches!(self, Period::FirstHalfExtratime | Period::SecondHalfExtratime)
    }
}

impl Vocabulary for Period {
    const ALL: &'static [Self] = &[
        Period::FirstHalf,
        Period::SecondHalf,
        Period::FirstHalfExtratime,
        Period::SecondHalfExtratime,
        Period::Shootout,
    ];

    fn as_str(self) -> &'static str {
        match self {
            Period::FirstHalf => "first_half",
            Period::SecondHalf => "second_half",
            Period::FirstHalfExtratime => "first_half_extratime",
            Period::SecondHalfExtratime => "second_half_extratime",
            Period::Shootout => "shootout",
        }
    }

    fn parse(text: &str) -> Option<Self> {
        match text {
            "first_half" => Some(Period::FirstHalf),
            "second_half" => Some(Period::SecondHalf),
            "first_half_extratime" | "first_half_extra" => Some(Period::FirstHalfExtratime),
            "second_half_extratime" | "second_half_extra" => Some(Period::SecondHalfExtratime),
            "shootout" => Some(Period::Shootout),
            _ => None,
        }
    }
}

impl FromStr for Period {
    type Err = CdfError;
    fn from_str(s: &str) -> Result<Self, CdfError> {
        <Period as Vocabulary>::parse(s).ok_or_else(|| CdfError::UnknownName {
            what: "period",
            value: s.to_owned(),
        })
    }
}

impl std::fmt::Display for Period {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

vocabulary!(EventType {
    Shot => "shot",
    Pass => "pass",
    Referee => "referee",
    Misc => "misc",
});

/// Event sub-types. A missing sub-type is the `None` member of the shot and
/// pass sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubType {
    PenaltyKick,
    FreeKick,
    CornerKick,
    ThrowIn,
    GoalKick,
    KickOff,
    Substitution,
    FinalWhistle,
    Foul,
    Caution,
    Offside,
    OtherBallAction,
    ChanceWithoutShot,
    Tackle,
}

impl Vocabulary for SubType {
    const ALL: &'static [Self] = &[
        SubType::PenaltyKick,
        SubType::FreeKick,
        SubType::CornerKick,
        SubType::ThrowIn,
        SubType::GoalKick,
        SubType::KickOff,
        SubType::Substitution,
        SubType::FinalWhistle,
        SubType::Foul,
        SubType::Caution,
        SubType::Offside,
        SubType::OtherBallAction,
        SubType::ChanceWithoutShot,
        SubType::Tackle,
    ];
    const NONE_IS_MEMBER: bool = true;

    fn as_str(self) -> &'static str {
        match self {
            SubType::PenaltyKick => "penalty_kick",
            SubType::FreeKick => "free_kick",
            SubType::CornerKick => "corner_kick",
            SubType::ThrowIn => "throw_in",
            SubType::GoalKick => "goal_kick",
            SubType::KickOff => "kick_off",
            SubType::Substitution => "substitution",
            SubType::FinalWhistle => "final_whistle",
            SubType::Foul => "foul",
            SubType::Caution => "caution",
            SubType::Offside => "offside",
            SubType::OtherBallAction => "other_ball_action",
            SubType::ChanceWithoutShot => "chance_without_shot",
            SubType::Tackle => "tackle",
        }
    }
}

vocabulary!(OutcomeDetailed {
    Successful => "successful",
    Saved => "saved",
    Blocked => "blocked",
    Wide => "wide",
    Woodwork => "woodwork",
    OwnGoal => "own_goal",
    OutOfPlay => "out_of_play",
    Intercepted => "intercepted",
    Unsuccessful => "unsuccessful",
});

/// Text used for the "no sub-type" member of a sub-type set.
pub const NONE_TEXT: &str = "None";

/// Allowed `sub_type` values per event type, `None` included where the
/// type admits it.
pub fn allowed_subtypes(event_type: EventType) -> &'static [Option<SubType>] {
    use SubType::*;
    match event_type {
        EventType::Shot => &[None, Some(PenaltyKick), Some(FreeKick), Some(CornerKick)],
        EventType::Pass => &[
            None,
            Some(ThrowIn),
            Some(FreeKick),
            Some(CornerKick),
            Some(GoalKick),
            Some(KickOff),
        ],
        EventType::Referee => &[
            Some(Substitution),
            Some(FinalWhistle),
            Some(Foul),
            Some(Caution),
            Some(Offside),
        ],
        EventType::Misc => &[Some(OtherBallAction), Some(ChanceWithoutShot), Some(Tackle)],
    }
}

/// Allowed `outcome_detailed` values per event type. Referee events have
/// no detailed outcome.
pub fn allowed_outcomes(event_type: EventType) -> &'static [OutcomeDetailed] {
    use OutcomeDetailed::*;
    match event_type {
        EventType::Shot => &[Successful, Saved, Blocked, Wide, Woodwork, OwnGoal],
        EventType::Pass => &[Successful, OutOfPlay, Intercepted],
        EventType::Referee => &[],
        EventType::Misc => &[Successful, Unsuccessful],
    }
}

/// Name-level form of [`allowed_subtypes`]; `"None"` stands for the empty
/// sub-type.
pub fn allowed_subtype_names(event_type: &str) -> Result<Vec<&'static str>, CdfError> {
    let t: EventType = event_type.parse()?;
    Ok(allowed_subtypes(t)
        .iter()
        .map(|s| s.map_or(NONE_TEXT, SubType::as_str))
        .collect())
}

pub fn allowed_outcome_names(event_type: &str) -> Result<Vec<&'static str>, CdfError> {
    let t: EventType = event_type.parse()?;
    Ok(allowed_outcomes(t).iter().map(|o| o.as_str()).collect())
}

pub fn subtype_allowed(event_type: EventType, sub_type: Option<SubType>) -> bool {
    allowed_subtypes(event_type).contains(&sub_type)
}

pub fn outcome_allowed(event_type: EventType, outcome: OutcomeDetailed) -> bool {
    allowed_outcomes(event_type).contains(&outcome)
}

/// The success bit implied by a detailed outcome, for the event types whose
/// detailed outcomes encode success.
pub fn implied_success(event_type: EventType, outcome: OutcomeDetailed) -> Option<bool> {
    match event_type {
        EventType::Shot | EventType::Pass | EventType::Misc => {
            Some(outcome == OutcomeDetailed::Successful)
        }
        EventType::Referee => None,
    }
}

vocabulary!(BodyPart {
    LeftFoot => "left_foot",
    RightFoot => "right_foot",
    Foot => "foot",
    Head => "head",
    Other => "other",
});

vocabulary!(CardType {
    YellowCard => "yellow_card",
    RedCard => "red_card",
    SecondYellowCard => "second_yellow_card",
});

vocabulary!(Foot {
    Left => "left",
    Right => "right",
    Both => "both",
});

vocabulary!(OperationType {
    Manual => "manual",
    Automated => "automated",
});

vocabulary!(
    /// Video camera angle.
    CameraPerspective {
        TacticalWide => "tactical_wide",
        Camera1 => "camera_1",
        HighBehindRight => "high_behind_right",
        HighBehindLeft => "high_behind_left",
        CableCamera => "cable_camera",
        SixteenMeterRight => "16m_right",
        SixteenMeterLeft => "16m_left",
        Broadcast => "broadcast",
    }
);

vocabulary!(SourceType {
    Live => "live",
    PostMatch => "post_match",
});

vocabulary!(
    /// Data collection perspective. Documented set; unknown values are
    /// reported as warnings.
    DataPerspective {
        InStadium => "in_stadium",
        Broadcast => "broadcast",
        Tactical => "tactical",
        TacticalWide => "tactical_wide",
    }
);

vocabulary!(TrackingSystemType {
    Mobile => "mobile",
    InStadium => "in_stadium",
    Broadcast => "broadcast",
});

/// Whistle types. Period names open and close halves; the rest are
/// interruptions. This is an extensible, documented set: values outside it
/// are reported as warnings, not errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WhistleType {
    Period(Period),
    WeatherDelay,
    HealthDelay,
    PitchInvasion,
    OtherDelay,
}

impl WhistleType {
    pub fn period(self) -> Option<Period> {
        match self {
            WhistleType::Period(p) => Some(p),
            _ => None,
        }
    }
}

impl Vocabulary for WhistleType {
    const ALL: &'static [Self] = &[
        WhistleType::Period(Period::FirstHalf),
        WhistleType::Period(Period::SecondHalf),
        WhistleType::Period(Period::FirstHalfExtratime),
        WhistleType::Period(Period::SecondHalfExtratime),
        WhistleType::Period(Period::Shootout),
        WhistleType::WeatherDelay,
        WhistleType::HealthDelay,
        WhistleType::PitchInvasion,
        WhistleType::OtherDelay,
    ];

    fn as_str(self) -> &'static str {
        match self {
            WhistleType::Period(p) => p.as_str(),
            WhistleType::WeatherDelay => "weather_delay",
            WhistleType::HealthDelay => "health_delay",
            WhistleType::PitchInvasion => "pitch_invasion",
            WhistleType::OtherDelay => "other_delay",
        }
    }

    fn parse(text: &str) -> Option<Self> {
        <Period as Vocabulary>::parse(text).map(WhistleType::Period).or_else(|| {
            Self::ALL[5..].iter().copied().find(|w| w.as_str() == text)
        })
    }
}

vocabulary!(WhistleSubType {
    Start => "start",
    End => "end",
});

vocabulary!(
    /// Position labels.
    PositionLabel {
        GK => "GK",
        LB => "LB",
        LCB => "LCB",
        CB => "CB",
        RCB => "RCB",
        RB => "RB",
        LDM => "LDM",
        CDM => "CDM",
        RDM => "RDM",
        LM => "LM",
        LCM => "LCM",
        CM => "CM",
        RCM => "RCM",
        RM => "RM",
        LAM => "LAM",
        CAM => "CAM",
        RAM => "RAM",
        LW => "LW",
        LCF => "LCF",
        CF => "CF",
        RCF => "RCF",
        RW => "RW",
    }
);

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(v: Vec<&'static str>) -> BTreeSet<&'static str> {
        v.into_iter().collect()
    }

    #[test]
    fn pass_subtypes() {
        assert_eq!(
            set(allowed_subtype_names("pass").unwrap()),
            set(vec!["None", "throw_in", "free_kick", "corner_kick", "goal_kick", "kick_off"])
        );
    }

    #[test]
    fn shot_subtypes() {
        assert_eq!(
            set(allowed_subtype_names("shot").unwrap()),
            set(vec!["None", "penalty_kick", "free_kick", "corner_kick"])
        );
    }

    #[test]
    fn referee_subtypes() {
        assert_eq!(
            set(allowed_subtype_names("referee").unwrap()),
            set(vec!["substitution", "final_whistle", "foul", "caution", "offside"])
        );
    }

    #[test]
    fn misc_subtypes() {
        assert_eq!(
            set(allowed_subtype_names("misc").unwrap()),
            set(vec!["other_ball_action", "chance_without_shot", "tackle"])
        );
    }

    #[test]
    fn outcome_sets() {
        assert_eq!(
            set(allowed_outcome_names("shot").unwrap()),
            set(vec!["successful", "saved", "blocked", "wide", "woodwork", "own_goal"])
        );
        assert_eq!(
            set(allowed_outcome_names("pass").unwrap()),
            set(vec!["successful", "out_of_play", "intercepted"])
        );
        assert_eq!(
            set(allowed_outcome_names("misc").unwrap()),
            set(vec!["successful", "unsuccessful"])
        );
        assert!(allowed_outcome_names("referee").unwrap().is_empty());
    }

    #[test]
    fn unknown_type_is_domain_error() {
        assert!(allowed_subtype_names("tackle").is_err());
        assert!(allowed_outcome_names("Shot").is_err());
    }

    #[test]
    fn period_aliases() {
        assert_eq!("first_half_extra".parse::<Period>().unwrap(), Period::FirstHalfExtratime);
        assert_eq!("second_half_extratime".parse::<Period>().unwrap(), Period::SecondHalfExtratime);
        assert_eq!(Period::FirstHalfExtratime.name(PeriodSpelling::Stream), "first_half_extra");
        assert_eq!(Period::FirstHalfExtratime.name(PeriodSpelling::Meta), "first_half_extratime");
        assert_eq!(
            Period::parse_spelled("first_half_extra", PeriodSpelling::Meta),
            Some((Period::FirstHalfExtratime, false))
        );
        assert!("extra".parse::<Period>().is_err());
    }

    #[test]
    fn whistle_types() {
        assert_eq!(WhistleType::parse("first_half"), Some(WhistleType::Period(Period::FirstHalf)));
        assert_eq!(WhistleType::parse("weather_delay"), Some(WhistleType::WeatherDelay));
        assert_eq!(WhistleType::parse("streak"), None);
    }

    #[test]
    fn vocabularies_are_closed() {
        assert!("orange_card".parse::<CardType>().is_err());
        assert!("knee".parse::<BodyPart>().is_err());
        assert!("16m_left".parse::<CameraPerspective>().is_ok());
        assert_eq!(PositionLabel::ALL.len(), 22);
    }
}
