mod common;

use cdf_core::skeleton::validate_hierarchy;
use common::*;

#[test]
fn golden_values_and_zero_errors() {
    let failures = golden_failures();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn every_deleted_mandatory_field_is_reported() {
    let (tried, failures) = deletion_failures();
    assert!(tried > 60, "only {tried} deletions tried");
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn golden_hierarchy_shape() {
    let (h, _) = validate_hierarchy(&golden_json("limb_nodes.json"));
    let h = h.unwrap();
    assert_eq!(h.len(), 9);
    assert_eq!(h.depth(), 2);
    assert_eq!(h.edge_count(), 8);
    let names: Vec<_> = h.preorder().into_iter().map(|i| h.nodes()[i].name.clone()).collect();
    assert_eq!(names[0], "hip");
}
