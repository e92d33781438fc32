use cdf_core::bundle::{validate_bundle, BundleOptions};
use cdf_core::fixtures::{catalog, generate, mutate, Fixture, FixtureSpec};
use cdf_core::Report;

fn report(f: &Fixture) -> Report {
    validate_bundle(&f.to_bundle().unwrap(), &BundleOptions::default()).unwrap()
}

#[test]
fn base_fixtures_have_no_findings_above_info() {
    for spec in [FixtureSpec::small(11), FixtureSpec::small(12).with_extratime(1.0).with_shootout(1.0)] {
        let r = report(&generate(&spec).unwrap());
        let loud: Vec<_> = r.findings().iter().filter(|f| f.severity > cdf_core::Severity::Info).collect();
        assert!(loud.is_empty(), "{}", r.to_text());
    }
}

#[test]
fn every_mutation_is_detected_and_only_when_applied() {
    let base = generate(&FixtureSpec::small(5)).unwrap();
    let clean = report(&base);
    assert_eq!(clean.error_count(), 0, "{}", clean.to_text());
    let mut failures = Vec::new();
    for m in catalog() {
        assert!(!clean.has_rule(m.rule), "{} already reported on the clean fixture", m.rule);
        let mutated = mutate(&base, m.id).unwrap();
        if !report(&mutated).has_rule(m.rule) {
            failures.push(format!("{} did not yield {}", m.id, m.rule));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn mutations_listed_in_the_spec_are_applied() {
    let f = generate(&FixtureSpec::small(5).with_mutation("drop-meta")).unwrap();
    assert_eq!(f.applied, ["drop-meta"]);
    assert!(f.meta.is_none());
}
