//! Validation findings and the ordered report every checker returns.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which part of a bundle a finding is about. Declaration order is the
/// order findings are merged in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Bundle,
    MatchSheet,
    Meta,
    Video,
    Events,
    Tracking,
    Skeletal,
}

impl Component {
    pub fn as_str(self) -> &'static str {
        match self {
            Component::Bundle => "bundle",
            Component::MatchSheet => "match_sheet",
            Component::Meta => "meta",
            Component::Video => "video",
            Component::Events => "events",
            Component::Tracking => "tracking",
            Component::Skeletal => "skeletal",
        }
    }
}

/// A catalogued check. Rule ids are stable: `<PREFIX>-<NNN>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub id: &'static str,
    pub severity: Severity,
    pub summary: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub rule_id: &'static str,
    pub severity: Severity,
    pub component: Component,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u64>,
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub error: u64,
    pub warning: u64,
    pub info: u64,
}

impl Counts {
    fn bump(&mut self, severity: Severity) {
        match severity {
            Severity::Error => self.error += 1,
            Severity::Warning => self.warning += 1,
            Severity::Info => self.info += 1,
        }
    }

    fn add(&mut self, other: Counts) {
        self.error += other.error;
        self.warning += other.warning;
        self.info += other.info;
    }
}

/// Ordered list of findings plus per-severity counts.
///
/// Counts always include every finding. When a per-rule cap is set, only the
/// first `cap` findings of each rule are retained; the rest are tallied in
/// [`Report::suppressed`]. Long streams use this to keep memory flat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    component: Component,
    line: Option<u64>,
    findings: Vec<Finding>,
    counts: Counts,
    cap: Option<usize>,
    per_rule: HashMap<&'static str, usize>,
    suppressed: BTreeMap<&'static str, u64>,
}

impl Default for Report {
    fn default() -> Self {
        Report::new(Component::Bundle)
    }
}

impl Report {
    pub fn new(component: Component) -> Self {
        Report {
            component,
            line: None,
            findings: Vec::new(),
            counts: Counts::default(),
            cap: None,
            per_rule: HashMap::new(),
            suppressed: BTreeMap::new(),
        }
    }

    pub fn for_line(component: Component, line: u64) -> Self {
        let mut r = Report::new(component);
        r.line = Some(line);
        r
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn line(&self) -> Option<u64> {
        self.line
    }

    pub fn push(&mut self, rule: &Rule, path: impl Into<String>, message: impl Into<String>) {
        self.push_as(rule, rule.severity, path, message);
    }

    /// Records a finding with a severity other than the rule's default
    /// (used when a cross-reference is downgraded).
    pub fn push_as(
        &mut self,
        rule: &Rule,
        severity: Severity,
        path: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.insert(Finding {
            rule_id: rule.id,
            severity,
            component: self.component,
            line: self.line,
            path: path.into(),
            message: message.into(),
        });
    }

    fn insert(&mut self, finding: Finding) {
        self.counts.bump(finding.severity);
        let seen = self.per_rule.entry(finding.rule_id).or_insert(0);
        *seen += 1;
        if self.cap.is_some_and(|cap| *seen > cap) {
            *self.suppressed.entry(finding.rule_id).or_insert(0) += 1;
        } else {
            self.findings.push(finding);
        }
    }

    /// Appends every finding of `other`, keeping their component and line.
    pub fn absorb(&mut self, other: Report) {
        let Report {
            findings,
            counts,
            suppressed,
            ..
        } = other;
        let mut retained = Counts::default();
        for f in findings {
            retained.bump(f.severity);
            self.insert(f);
        }
        // Findings `other` already suppressed are only counted.
        let mut hidden = counts;
        hidden.error -= retained.error;
        hidden.warning -= retained.warning;
        hidden.info -= retained.info;
        self.counts.add(hidden);
        for (rule, n) in suppressed {
            *self.suppressed.entry(rule).or_insert(0) += n;
        }
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn into_findings(self) -> Vec<Finding> {
        self.findings
    }

    pub fn counts(&self) -> Counts {
        self.counts
    }

    pub fn suppressed(&self) -> &BTreeMap<&'static str, u64> {
        &self.suppressed
    }

    pub fn is_empty(&self) -> bool {
        self.counts == Counts::default()
    }

    pub fn has_errors(&self) -> bool {
        self.counts.error > 0
    }

    pub fn error_count(&self) -> u64 {
        self.counts.error
    }

    pub fn max_severity(&self) -> Option<Severity> {
        if self.counts.error > 0 {
            Some(Severity::Error)
        } else if self.counts.warning > 0 {
            Some(Severity::Warning)
        } else if self.counts.info > 0 {
            Some(Severity::Info)
        } else {
            None
        }
    }

    pub fn has_rule(&self, id: &str) -> bool {
        self.findings.iter().any(|f| f.rule_id == id)
            || self.suppressed.contains_key(id)
    }

    pub fn count_rule(&self, id: &str) -> usize {
        self.findings.iter().filter(|f| f.rule_id == id).count()
            + self.suppressed.get(id).copied().unwrap_or(0) as usize
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    /// Puts findings in canonical order: component, stream line, first
    /// occurrence of the path in document order, then rule id.
    pub fn sort(&mut self) {
        let mut first_seen: HashMap<(Component, Option<u64>, &str), usize> = HashMap::new();
        let ranks: Vec<usize> = self
            .findings
            .iter()
            .enumerate()
            .map(|(i, f)| *first_seen.entry((f.component, f.line, f.path.as_str())).or_insert(i))
            .collect();
        let mut keyed: Vec<(usize, Finding)> = ranks.into_iter().zip(self.findings.drain(..)).collect();
        keyed.sort_by(|(ra, a), (rb, b)| {
            (a.component, a.line.unwrap_or(0), *ra, a.rule_id)
                .cmp(&(b.component, b.line.unwrap_or(0), *rb, b.rule_id))
        });
        self.findings = keyed.into_iter().map(|(_, f)| f).collect();
    }

    pub fn sorted(mut self) -> Self {
        self.sort();
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out<'a> {
            findings: &'a [Finding],
            counts: Counts,
            #[serde(skip_serializing_if = "BTreeMap::is_empty")]
            suppressed: &'a BTreeMap<&'static str, u64>,
        }
        serde_json::to_value(Out {
            findings: &self.findings,
            counts: self.counts,
            suppressed: &self.suppressed,
        })
        .expect("report serializes")
    }

    /// Fixed-width text table, one finding per row.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<8} {:<7} {:<24} MESSAGE", "SEVERITY", "RULE", "LOCATION");
        for f in &self.findings {
            let location = match f.line {
                Some(line) => format!("{}:{}{}", f.component.as_str(), line, f.path),
                None => format!("{}{}", f.component.as_str(), f.path),
            };
            let _ = writeln!(
                out,
                "{:<8} {:<7} {:<24} {}",
                f.severity.as_str(),
                f.rule_id,
                location,
                f.message
            );
        }
        for (rule, n) in &self.suppressed {
            let _ = writeln!(out, "({n} further {rule} findings suppressed)");
        }
        let c = self.counts;
        let _ = writeln!(out, "{} error(s), {} warning(s), {} info", c.error, c.warning, c.info);
        out
    }
}

/// JSON pointer segment escaping (`~` and `/`).
pub fn pointer_escape(segment: &str) -> Cow<'_, str> {
    if segment.contains(['~', '/']) {
        Cow::Owned(segment.replace('~', "~0").replace('/', "~1"))
    } else {
        Cow::Borrowed(segment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Rule = Rule { id: "MS-001", severity: Severity::Error, summary: "a" };
    const B: Rule = Rule { id: "MS-002", severity: Severity::Warning, summary: "b" };

    #[test]
    fn counts_and_max_severity() {
        let mut r = Report::new(Component::MatchSheet);
        assert_eq!(r.max_severity(), None);
        r.push(&B, "/x", "w");
        assert_eq!(r.max_severity(), Some(Severity::Warning));
        r.push(&A, "/y", "e");
        assert_eq!(r.counts(), Counts { error: 1, warning: 1, info: 0 });
        assert!(r.has_errors());
    }

    #[test]
    fn sort_orders_by_path_then_rule() {
        let mut r = Report::new(Component::MatchSheet);
        r.push(&B, "/b", "1");
        r.push(&A, "/a", "2");
        r.push(&A, "/b", "3");
        r.sort();
        let order: Vec<_> = r.findings().iter().map(|f| (f.path.as_str(), f.rule_id)).collect();
        assert_eq!(order, vec![("/b", "MS-001"), ("/b", "MS-002"), ("/a", "MS-001")]);
    }

    #[test]
    fn cap_suppresses_but_counts() {
        let mut r = Report::new(Component::Tracking).with_cap(2);
        for _ in 0..5 {
            r.push(&A, "/p", "x");
        }
        assert_eq!(r.findings().len(), 2);
        assert_eq!(r.counts().error, 5);
        assert_eq!(r.suppressed()["MS-001"], 3);
        assert_eq!(r.count_rule("MS-001"), 5);
    }

    #[test]
    fn absorb_respects_cap_and_counts() {
        let mut total = Report::new(Component::Bundle).with_cap(1);
        for line in 1..=3 {
            let mut r = Report::for_line(Component::Tracking, line);
            r.push(&B, "/frame_id", "gap");
            total.absorb(r);
        }
        assert_eq!(total.findings().len(), 1);
        assert_eq!(total.findings()[0].line, Some(1));
        assert_eq!(total.counts().warning, 3);
    }

    #[test]
    fn json_shape() {
        let mut r = Report::for_line(Component::Events, 4);
        r.push(&A, "/event/id", "missing");
        let v = r.to_json();
        assert_eq!(v["findings"][0]["rule_id"], "MS-001");
        assert_eq!(v["findings"][0]["line"], 4);
        assert_eq!(v["counts"]["error"], 1);
    }

    #[test]
    fn pointer_escaping() {
        assert_eq!(pointer_escape("a/b~c"), "a~1b~0c");
    }
}
