//! Position labels of a lineup against a declared formation.
//!
//! A formation is its outfield lines from back to front, e.g. `4-4-1-1`.
//! The first line draws from the defensive labels, the last from the
//! attacking ones, and any line in between from the three midfield bands.
//! Within a line, sizes 2 and 4 never use the central label, a line of 2 is
//! a mirrored pair, a back three is `LB, CB, RB`, a line of 5 uses all five
//! labels of its band, and lines of 4 or 5 never use DM or AM labels.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{CdfError, Result};
use crate::model::{Code, EntityId, PositionLabel, Team, Vocabulary};
use crate::report::{Component, Report};
use crate::rules::catalog::pl;

use PositionLabel::*;

/// Horizontal band of the pitch a label belongs to, back to front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Band {
    Goal,
    Defence,
    DefensiveMidfield,
    Midfield,
    AttackingMidfield,
    Attack,
}

impl Band {
    /// Labels of the band, left to right.
    pub fn labels(self) -> &'static [PositionLabel] {
        match self {
            Band::Goal => &[GK],
            Band::Defence => &[LB, LCB, CB, RCB, RB],
            Band::DefensiveMidfield => &[LDM, CDM, RDM],
            Band::Midfield => &[LM, LCM, CM, RCM, RM],
            Band::AttackingMidfield => &[LAM, CAM, RAM],
            Band::Attack => &[LW, LCF, CF, RCF, RW],
        }
    }

    /// The bands with five labels.
    pub fn is_full_width(self) -> bool {
        self.labels().len() == 5
    }
}

pub fn band_of(label: PositionLabel) -> Band {
    [
        Band::Goal,
        Band::Defence,
        Band::DefensiveMidfield,
        Band::Midfield,
        Band::AttackingMidfield,
        Band::Attack,
    ]
    .into_iter()
    .find(|b| b.labels().contains(&label))
    .expect("every label has a band")
}

/// Left-to-right index within the band.
pub(crate) fn lateral(label: PositionLabel) -> usize {
    band_of(label).labels().iter().position(|l| *l == label).unwrap_or(0)
}

fn is_pure_central(label: PositionLabel) -> bool {
    matches!(label, CB | CM | CF)
}

/// Where a line sits in the formation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineRole {
    Defence,
    Middle,
    Attack,
}

impl LineRole {
    pub fn bands(self) -> &'static [Band] {
        match self {
            LineRole::Defence => &[Band::Defence],
            LineRole::Middle => &[Band::DefensiveMidfield, Band::Midfield, Band::AttackingMidfield],
            LineRole::Attack => &[Band::Attack],
        }
    }

    fn admits(self, label: PositionLabel) -> bool {
        self.bands().contains(&band_of(label))
    }
}

/// Outfield line sizes, back to front, summing to 10.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formation {
    lines: Vec<usize>,
}

impl Formation {
    pub fn new(lines: Vec<usize>) -> Result<Self> {
        if lines.len() < 2 || lines.iter().any(|n| !(1..=5).contains(n)) {
            let text = lines.iter().map(usize::to_string).collect::<Vec<_>>().join("-");
            return Err(CdfError::FormationSyntax(text));
        }
        let sum: usize = lines.iter().sum();
        if sum != 10 {
            return Err(CdfError::FormationSum { lines, sum });
        }
        Ok(Formation { lines })
    }

    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    pub fn role(&self, line: usize) -> LineRole {
        if line == 0 {
            LineRole::Defence
        } else if line + 1 == self.lines.len() {
            LineRole::Attack
        } else {
            LineRole::Middle
        }
    }
}

impl FromStr for Formation {
    type Err = CdfError;

    fn from_str(s: &str) -> Result<Self> {
        let lines = s
            .split('-')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| CdfError::FormationSyntax(s.to_owned()))?;
        Formation::new(lines)
    }
}

impl fmt::Display for Formation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lines.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("-"))
    }
}

/// The labels of the players in play for one team.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LineupAssignment {
    pub team_id: Option<EntityId>,
    pub slots: Vec<(EntityId, Code<PositionLabel>)>,
}

impl LineupAssignment {
    /// Starters of a roster that carry a position label.
    pub fn starters(team: &Team) -> Self {
        let slots = team
            .players
            .value()
            .into_iter()
            .flatten()
            .filter(|p| p.is_starter.is_set())
            .filter_map(|p| Some((p.id.value()?.clone(), p.position.value()?.clone())))
            .collect();
        LineupAssignment { team_id: team.id.value().cloned(), slots }
    }

    pub fn from_labels(labels: &[PositionLabel]) -> Self {
        let slots = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (EntityId::new(format!("p{}", i + 1)).expect("non-empty id"), Code::Known(*l)))
            .collect();
        LineupAssignment { team_id: None, slots }
    }
}

/// Findings of one line; members carry their slot index.
fn check_line(role: LineRole, members: &[(usize, PositionLabel)], r: &mut Report) {
    let n = members.len();
    let path = |slot: usize| format!("/{slot}");
    let labels: BTreeSet<PositionLabel> = members.iter().map(|(_, l)| *l).collect();
    let mut members_ok = true;
    for &(slot, label) in members {
        if !role.admits(label) {
            members_ok = false;
            r.push(&pl::LINE_MEMBERSHIP, path(slot), format!("{} does not belong to a {role:?} line", label.as_str()));
        }
    }
    if matches!(n, 2 | 4) {
        for &(slot, label) in members.iter().filter(|(_, l)| is_pure_central(*l)) {
            r.push(&pl::CENTRAL_IN_EVEN_LINE, path(slot), format!("{} in a line of {n}", label.as_str()));
        }
    }
    if matches!(n, 4 | 5) {
        for &(slot, label) in members {
            if matches!(band_of(label), Band::DefensiveMidfield | Band::AttackingMidfield) {
                r.push(&pl::BAND_LABELS, path(slot), format!("{} in a line of {n}", label.as_str()));
            }
        }
    }
    let first = members.first().map_or(0, |m| m.0);
    match n {
        2 => {
            let pair: Vec<PositionLabel> = labels.iter().copied().collect();
            let mirrored = pair.len() == 2
                && band_of(pair[0]) == band_of(pair[1])
                && lateral(pair[0]) + lateral(pair[1]) + 1 == band_of(pair[0]).labels().len();
            if !mirrored {
                r.push(&pl::PAIR, path(first), format!("{} is not a mirrored pair", names(&labels)));
            }
        }
        3 if role == LineRole::Defence => {
            if labels != BTreeSet::from([LB, CB, RB]) {
                r.push(&pl::BACK_THREE, path(first), format!("back three is {}", names(&labels)));
            }
        }
        5 if members_ok => {
            let full = band_of(members[0].1);
            if !(full.is_full_width() && labels.len() == 5 && labels.iter().all(|l| band_of(*l) == full)) {
                r.push(&pl::FULL_FIVE, path(first), format!("line of 5 is {}", names(&labels)));
            }
        }
        _ => {}
    }
}

fn names(labels: &BTreeSet<PositionLabel>) -> String {
    labels.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(", ")
}

fn line_is_valid(role: LineRole, members: &[(usize, PositionLabel)]) -> bool {
    let mut scratch = Report::new(Component::MatchSheet);
    check_line(role, members, &mut scratch);
    let distinct: BTreeSet<_> = members.iter().map(|m| m.1).collect();
    scratch.is_empty() && distinct.len() == members.len()
}

/// Checks a lineup's labels against `formation`. Missing labels are not
/// reported; a lineup where every label is missing is skipped.
pub fn validate_lineup(lineup: &LineupAssignment, formation: &Formation) -> Report {
    let mut report = Report::new(Component::MatchSheet);
    let r = &mut report;
    let mut known: Vec<(usize, PositionLabel)> = Vec::new();
    let mut first_use: HashMap<PositionLabel, usize> = HashMap::new();
    for (i, (_, code)) in lineup.slots.iter().enumerate() {
        match code {
            Code::Unknown(text) => r.push(&pl::UNKNOWN_LABEL, format!("/{i}"), format!("`{text}` is not a position label")),
            Code::Known(label) => {
                if let Some(first) = first_use.insert(*label, i) {
                    first_use.insert(*label, first);
                    r.push(&pl::DUPLICATE_LABEL, format!("/{i}"), format!("{} also used by slot {first}", label.as_str()));
                }
                known.push((i, *label));
            }
        }
    }
    if lineup.slots.is_empty() {
        return report;
    }
    if lineup.slots.len() != 11 {
        r.push(&pl::LINEUP_SIZE, "", format!("{} players in play", lineup.slots.len()));
    }
    let keepers = known.iter().filter(|(_, l)| *l == GK).count();
    if keepers != 1 {
        r.push(&pl::GOALKEEPER_COUNT, "", format!("{keepers} goalkeepers"));
    }
    let outfield: Vec<(usize, PositionLabel)> = known.iter().copied().filter(|(_, l)| *l != GK).collect();
    // Line checks need exactly ten outfield labels.
    if outfield.len() != 10 {
        return report;
    }
    let lines = find_partition(&outfield, formation).unwrap_or_else(|| chunk_by_band(&outfield, formation));
    for (k, members) in lines.iter().enumerate() {
        check_line(formation.role(k), members, r);
    }
    report
}

/// Outfield labels sorted back to front, then left to right, cut into the
/// formation's lines.
fn chunk_by_band(outfield: &[(usize, PositionLabel)], formation: &Formation) -> Vec<Vec<(usize, PositionLabel)>> {
    let mut sorted = outfield.to_vec();
    sorted.sort_by_key(|(slot, l)| (band_of(*l), lateral(*l), *slot));
    let mut out = Vec::new();
    let mut rest = sorted.as_slice();
    for &n in formation.lines() {
        let (line, tail) = rest.split_at(n.min(rest.len()));
        out.push(line.to_vec());
        rest = tail;
    }
    out
}

/// A split of the outfield labels into lines where every line is valid.
fn find_partition(outfield: &[(usize, PositionLabel)], formation: &Formation) -> Option<Vec<Vec<(usize, PositionLabel)>>> {
    let lines = formation.lines();
    let last = lines.len() - 1;
    let by_role = |role: LineRole| -> Vec<(usize, PositionLabel)> {
        outfield.iter().copied().filter(|(_, l)| role.admits(*l)).collect()
    };
    let back = by_role(LineRole::Defence);
    let front = by_role(LineRole::Attack);
    let middle = by_role(LineRole::Middle);
    if back.len() != lines[0] || front.len() != lines[last] || !line_is_valid(LineRole::Defence, &back) || !line_is_valid(LineRole::Attack, &front) {
        return None;
    }
    let mut out = vec![back];
    let mut found = split_middle(&middle, &lines[1..last])?;
    out.append(&mut found);
    out.push(front);
    Some(out)
}

fn split_middle(pool: &[(usize, PositionLabel)], sizes: &[usize]) -> Option<Vec<Vec<(usize, PositionLabel)>>> {
    let Some((&n, rest)) = sizes.split_first() else {
        return pool.is_empty().then(Vec::new);
    };
    if pool.len() < n {
        return None;
    }
    for pick in combinations(pool.len(), n) {
        let line: Vec<_> = pick.iter().map(|&i| pool[i]).collect();
        if !line_is_valid(LineRole::Middle, &line) {
            continue;
        }
        let remaining: Vec<_> = (0..pool.len()).filter(|i| !pick.contains(i)).map(|i| pool[i]).collect();
        if let Some(mut tail) = split_middle(&remaining, rest) {
            let mut out = vec![line];
            out.append(&mut tail);
            return Some(out);
        }
    }
    None
}

/// Index subsets of size `k`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(pick.clone());
        let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else { break };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    out
}

/// Every label set that satisfies the line rules for `formation`, GK
/// included, built line by line from the admissible sets.
pub fn enumerate_valid_label_sets(formation: &Formation) -> BTreeSet<BTreeSet<PositionLabel>> {
    let mut acc: Vec<BTreeSet<PositionLabel>> = vec![BTreeSet::from([GK])];
    for (k, &n) in formation.lines().iter().enumerate() {
        let options = admissible_lines(formation.role(k), n);
        let mut next = Vec::new();
        for base in &acc {
            for line in &options {
                if line.is_disjoint(base) {
                    next.push(base.union(line).copied().collect());
                }
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

/// Constructive form of the line rules.
pub fn admissible_lines(role: LineRole, n: usize) -> Vec<BTreeSet<PositionLabel>> {
    let mut out = Vec::new();
    for &band in role.bands() {
        let labels = band.labels();
        let full = band.is_full_width();
        match n {
            1 => out.extend(labels.iter().map(|l| BTreeSet::from([*l]))),
            2 => {
                for i in 0..labels.len() / 2 {
                    out.push(BTreeSet::from([labels[i], labels[labels.len() - 1 - i]]));
                }
            }
            4 if full => out.push(labels.iter().copied().filter(|l| !is_pure_central(*l)).collect()),
            5 if full => out.push(labels.iter().copied().collect()),
            _ => {}
        }
    }
    if n == 3 {
        if role == LineRole::Defence {
            out.push(BTreeSet::from([LB, CB, RB]));
        } else {
            let pool: Vec<PositionLabel> = role.bands().iter().flat_map(|b| b.labels()).copied().collect();
            for pick in combinations(pool.len(), 3) {
                out.push(pick.iter().map(|&i| pool[i]).collect());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formation {
        s.parse().unwrap()
    }

    #[test]
    fn formations() {
        assert_eq!(f("4-4-1-1").lines(), &[4, 4, 1, 1]);
        assert!(matches!("4-4-3".parse::<Formation>(), Err(CdfError::FormationSum { sum: 11, .. })));
        assert!(matches!("4-x-2".parse::<Formation>(), Err(CdfError::FormationSyntax(_))));
        assert!(matches!("10".parse::<Formation>(), Err(CdfError::FormationSyntax(_))));
        assert_eq!(f("3-5-2").to_string(), "3-5-2");
    }

    #[test]
    fn four_four_one_one() {
        let l = LineupAssignment::from_labels(&[GK, LB, LCB, RCB, RB, LM, LCM, RCM, RM, CAM, CF]);
        let r = validate_lineup(&l, &f("4-4-1-1"));
        assert!(r.is_empty(), "{}", r.to_text());
    }

    #[test]
    fn back_four_with_two_centre_backs() {
        let l = LineupAssignment::from_labels(&[GK, LB, CB, CB, RB, LM, CM, RM, CAM, LCF, RCF]);
        let r = validate_lineup(&l, &f("4-3-1-2"));
        assert!(r.has_rule("PL-002"));
        assert!(r.has_rule("PL-006"));
    }

    #[test]
    fn front_pairs() {
        for pair in [[LCF, RCF], [LW, RW]] {
            let mut labels = vec![GK, LB, LCB, RCB, RB, LM, LCM, RCM, RM];
            labels.extend(pair);
            let r = validate_lineup(&LineupAssignment::from_labels(&labels), &f("4-4-2"));
            assert!(r.is_empty(), "{}", r.to_text());
        }
        let r = validate_lineup(&LineupAssignment::from_labels(&[GK, LB, LCB, RCB, RB, LM, LCM, RCM, RM, LW, RCF]), &f("4-4-2"));
        assert!(r.has_rule("PL-007"));
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_lines(LineRole::Defence, 3), vec![BTreeSet::from([LB, CB, RB])]);
        assert_eq!(admissible_lines(LineRole::Defence, 5), vec![BTreeSet::from([LB, LCB, CB, RCB, RB])]);
        let attack: BTreeSet<_> = admissible_lines(LineRole::Attack, 2).into_iter().collect();
        assert_eq!(attack, BTreeSet::from([BTreeSet::from([LW, RW]), BTreeSet::from([LCF, RCF])]));
    }

    #[test]
    fn dm_labels_in_a_four_line() {
        let l = LineupAssignment::from_labels(&[GK, LB, LCB, RCB, RB, LDM, CDM, RDM, CM, LCF, RCF]);
        let r = validate_lineup(&l, &f("4-4-2"));
        assert!(r.has_rule("PL-010"));
    }

    #[test]
    fn counts_and_unknowns() {
        let mut l = LineupAssignment::from_labels(&[LB, LCB, RCB, RB, LM, LCM, RCM, RM, CAM, CF]);
        l.slots.push((EntityId::new("x").unwrap(), Code::Unknown("SW".into())));
        let r = validate_lineup(&l, &f("4-4-1-1"));
        assert!(r.has_rule("PL-001") && r.has_rule("PL-003"));
        assert!(validate_lineup(&LineupAssignment::default(), &f("4-4-2")).is_empty());
    }

    #[test]
    fn middle_lines_need_search() {
        // Chunking by band would split this into LDM, CDM, LM | RCM, RM.
        let l = LineupAssignment::from_labels(&[GK, LB, LCB, RCB, RB, LDM, CDM, RCM, LM, RM, CF]);
        assert!(validate_lineup(&l, &f("4-3-2-1")).is_empty());
    }

    #[test]
    fn combos() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
