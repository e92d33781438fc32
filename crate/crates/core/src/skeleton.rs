//! Skeletal hierarchy declared under `meta/limb_nodes`: a glTF-style node
//! list where each node names a joint, gives its translation and rotation
//! relative to its parent, and lists child indices.
//!
//! Translations are direction indicators in a Y-up frame, so
//! [`t_pose_positions`] is a topological layout of the declared T-pose, not
//! an anthropometric one.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::Value;

use crate::error::{CdfError, Result};
use crate::geometry::{Quat, Vec3};
use crate::model::SkeletonPlayer;
use crate::report::{Component, Report};
use crate::rules::catalog::sk;
use crate::scalar::Scalar;

/// Allowed distance of a rotation's norm from 1.
pub const QUATERNION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LimbNode<T = f64> {
    pub name: String,
    pub translation: Vec3<T>,
    pub rotation: Quat<T>,
    pub children: Vec<usize>,
}

/// A validated hierarchy: one root, every other node reachable from it
/// exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonHierarchy<T = f64> {
    nodes: Vec<LimbNode<T>>,
    root: usize,
    /// Parentless leaves hung off the root.
    detached: Vec<usize>,
}

impl<T: Scalar> SkeletonHierarchy<T> {
    /// Builds a hierarchy from nodes, failing on any error-level finding.
    pub fn from_nodes(nodes: Vec<LimbNode<T>>) -> Result<Self> {
        let mut report = Report::new(Component::Skeletal);
        if let Some(bad) = nodes.iter().flat_map(|n| &n.children).find(|c| **c >= nodes.len()) {
            return Err(CdfError::InvalidHierarchy(format!("child index {bad} with {} nodes", nodes.len())));
        }
        let shape = check_nodes(&nodes, "", &mut report);
        match shape {
            Some((root, detached)) if !report.has_errors() => Ok(SkeletonHierarchy { nodes, root, detached }),
            _ => Err(first_error(&report)),
        }
    }

    /// Parses and validates a raw `limb_nodes` array.
    pub fn from_value(raw: &Value) -> Result<Self> {
        let (h, report) = validate_hierarchy_as::<T>(raw);
        h.ok_or_else(|| first_error(&report))
    }

    pub fn nodes(&self) -> &[LimbNode<T>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn root_node(&self) -> &LimbNode<T> {
        &self.nodes[self.root]
    }

    /// Nodes that declared no parent but are treated as children of the root.
    pub fn detached(&self) -> &[usize] {
        &self.detached
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.name.as_str())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    /// Children of `i`, including detached nodes for the root.
    pub fn children_of(&self, i: usize) -> Vec<usize> {
        let mut out = self.nodes[i].children.clone();
        if i == self.root {
            out.extend_from_slice(&self.detached);
        }
        out
    }

    /// Parent/child links, detached nodes counted as root children.
    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).sum::<usize>() + self.detached.len()
    }

    /// Nodes in depth-first pre-order from the root.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(i) = stack.pop() {
            out.push(i);
            stack.extend(self.children_of(i).into_iter().rev());
        }
        out
    }

    /// Longest root-to-leaf path, in links.
    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root, 0)];
        while let Some((i, d)) = stack.pop() {
            best = best.max(d);
            stack.extend(self.children_of(i).into_iter().map(|c| (c, d + 1)));
        }
        best
    }
}

fn first_error(report: &Report) -> CdfError {
    let why = report
        .errors()
        .next()
        .map(|f| format!("{} at `{}`: {}", f.rule_id, f.path, f.message))
        .unwrap_or_else(|| "empty hierarchy".into());
    CdfError::InvalidHierarchy(why)
}

/// Root at the origin; each node sits at its parent plus its translation
/// rotated by the accumulated rotation of its ancestors. With identity
/// rotations this is the sum of translations along the root path.
pub fn t_pose_positions<T: Scalar>(h: &SkeletonHierarchy<T>) -> BTreeMap<String, Vec3<T>> {
    let mut out = BTreeMap::new();
    let root = h.root_node();
    let mut stack = vec![(h.root, Vec3::zero(), root.rotation)];
    while let Some((i, at, frame)) = stack.pop() {
        out.insert(h.nodes[i].name.clone(), at);
        for c in h.children_of(i) {
            let child = &h.nodes[c];
            stack.push((c, at + frame.rotate(child.translation), frame * child.rotation));
        }
    }
    out
}

/// snake_case, where `left` and `right` may appear only as the last token
/// and never alone.
pub fn is_conventional_name(name: &str) -> bool {
    let tokens: Vec<&str> = name.split('_').collect();
    let well_formed = tokens.iter().all(|t| {
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
    }) && name.as_bytes().first().is_some_and(u8::is_ascii_lowercase);
    if !well_formed {
        return false;
    }
    let side = |t: &&str| *t == "left" || *t == "right";
    let (last, rest) = tokens.split_last().expect("split yields a token");
    !rest.iter().any(side) && !(side(last) && rest.is_empty())
}

/// Validates a raw `limb_nodes` value; findings have paths relative to it.
pub fn validate_hierarchy(raw: &Value) -> (Option<SkeletonHierarchy>, Report) {
    validate_hierarchy_as::<f64>(raw)
}

pub fn validate_hierarchy_as<T: Scalar>(raw: &Value) -> (Option<SkeletonHierarchy<T>>, Report) {
    let mut report = Report::new(Component::Skeletal);
    let h = analyse(raw, "", &mut report);
    (h, report)
}

/// Hierarchy findings recorded into `report` under `base`.
pub(crate) fn hierarchy_findings(raw: &Value, base: &str, report: &mut Report) {
    let _ = analyse::<f64>(raw, base, report);
}

fn analyse<T: Scalar>(raw: &Value, base: &str, r: &mut Report) -> Option<SkeletonHierarchy<T>> {
    let start = r.error_count();
    let Some(list) = raw.as_array() else {
        r.push(&sk::HIERARCHY_SHAPE, base, "limb_nodes must be an array");
        return None;
    };
    let mut nodes = Vec::with_capacity(list.len());
    let mut ok = true;
    for (i, item) in list.iter().enumerate() {
        match parse_node::<T>(item, &format!("{base}/{i}"), list.len(), r) {
            Some(n) => nodes.push(n),
            None => ok = false,
        }
    }
    if !ok {
        return None;
    }
    let (root, detached) = check_nodes(&nodes, base, r)?;
    (r.error_count() == start).then_some(SkeletonHierarchy { nodes, root, detached })
}

/// Names, rotations, symmetry and tree shape of parsed nodes.
fn check_nodes<T: Scalar>(nodes: &[LimbNode<T>], base: &str, r: &mut Report) -> Option<(usize, Vec<usize>)> {
    let mut seen = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        let path = format!("{base}/{i}/name");
        if !is_conventional_name(&n.name) {
            r.push(&sk::NAME_CONVENTION, &path, format!("`{}`", n.name));
        }
        if let Some(first) = seen.insert(n.name.as_str(), i) {
            r.push(&sk::NAME_DUPLICATE, &path, format!("`{}` also names node {first}", n.name));
        }
        let norm = n.rotation.norm().to_f64().unwrap_or(f64::NAN);
        if !((norm - 1.0).abs() <= QUATERNION_TOLERANCE) {
            r.push(&sk::QUATERNION, format!("{base}/{i}/rotation"), format!("norm {norm}"));
        }
    }
    symmetry(nodes, base, r);
    structure(nodes, base, r)
}

fn numbers<T: Scalar>(v: Option<&Value>, n: usize) -> Option<Option<Vec<T>>> {
    let Some(v) = v else { return Some(None) };
    let a = v.as_array().filter(|a| a.len() == n)?;
    a.iter().map(|x| x.as_f64().map(T::lit)).collect::<Option<Vec<T>>>().map(Some)
}

fn parse_node<T: Scalar>(item: &Value, path: &str, len: usize, r: &mut Report) -> Option<LimbNode<T>> {
    let Some(obj) = item.as_object() else {
        r.push(&sk::HIERARCHY_SHAPE, path, "node must be an object");
        return None;
    };
    let name = match obj.get("name").and_then(Value::as_str) {
        Some(n) => n.to_owned(),
        None => {
            r.push(&sk::NODE_NAME, format!("{path}/name"), "name must be text");
            return None;
        }
    };
    let mut ok = true;
    // Absent members take the glTF defaults.
    let translation = match numbers::<T>(obj.get("translation"), 3) {
        Some(Some(t)) => Vec3::new(t[0], t[1], t[2]),
        Some(None) => Vec3::zero(),
        None => {
            r.push(&sk::NODE_SHAPE, format!("{path}/translation"), "translation must be 3 numbers");
            ok = false;
            Vec3::zero()
        }
    };
    let rotation = match numbers::<T>(obj.get("rotation"), 4) {
        Some(Some(q)) => Quat::new(q[0], q[1], q[2], q[3]),
        Some(None) => Quat::identity(),
        None => {
            r.push(&sk::NODE_SHAPE, format!("{path}/rotation"), "rotation must be 4 numbers [x, y, z, w]");
            ok = false;
            Quat::identity()
        }
    };
    let mut children = Vec::new();
    match obj.get("children") {
        None => {}
        Some(Value::Array(items)) => {
            for (k, c) in items.iter().enumerate() {
                match c.as_u64() {
                    Some(c) if (c as usize) < len => children.push(c as usize),
                    Some(c) => {
                        r.push(&sk::CHILD_RANGE, format!("{path}/children/{k}"), format!("index {c} with {len} nodes"));
                        ok = false;
                    }
                    None => {
                        r.push(&sk::NODE_SHAPE, format!("{path}/children/{k}"), "child index must be a non-negative integer");
                        ok = false;
                    }
                }
            }
        }
        Some(_) => {
            r.push(&sk::NODE_SHAPE, format!("{path}/children"), "children must be an array");
            ok = false;
        }
    }
    ok.then_some(LimbNode { name, translation, rotation, children })
}

/// Parent links, cycles and roots. Returns the root and detached leaves.
fn structure<T: Scalar>(nodes: &[LimbNode<T>], base: &str, r: &mut Report) -> Option<(usize, Vec<usize>)> {
    if nodes.is_empty() {
        r.push(&sk::MULTIPLE_ROOTS, base, "hierarchy has no nodes");
        return None;
    }
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, n) in nodes.iter().enumerate() {
        for &c in &n.children {
            if c < nodes.len() {
                parents[c].push(i);
            }
        }
    }
    let mut sound = true;
    for (c, ps) in parents.iter().enumerate() {
        if ps.len() > 1 {
            r.push(&sk::MULTIPLE_PARENTS, format!("{base}/{c}"), format!("`{}` is a child of nodes {ps:?}", nodes[c].name));
            sound = false;
        }
    }
    if let Some(at) = find_cycle(nodes) {
        r.push(&sk::CYCLE, format!("{base}/{at}/children"), format!("`{}` reaches itself", nodes[at].name));
        sound = false;
    }
    let parentless: Vec<usize> = (0..nodes.len()).filter(|&i| parents[i].is_empty()).collect();
    let branching: Vec<usize> = parentless.iter().copied().filter(|&i| !nodes[i].children.is_empty()).collect();
    let root = match (parentless.as_slice(), branching.as_slice()) {
        ([only], _) => *only,
        (_, [only]) => *only,
        ([], _) => {
            r.push(&sk::MULTIPLE_ROOTS, base, "every node has a parent");
            return None;
        }
        _ => {
            let names: Vec<&str> = parentless.iter().map(|&i| nodes[i].name.as_str()).collect();
            r.push(&sk::MULTIPLE_ROOTS, base, format!("several roots: {}", names.join(", ")));
            return None;
        }
    };
    let detached: Vec<usize> = parentless.into_iter().filter(|&i| i != root).collect();
    for &d in &detached {
        r.push(
            &sk::DETACHED_NODE,
            format!("{base}/{d}"),
            format!("`{}` has no parent; treated as a child of `{}`", nodes[d].name, nodes[root].name),
        );
    }
    sound.then_some((root, detached))
}

fn find_cycle<T>(nodes: &[LimbNode<T>]) -> Option<usize> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; nodes.len()];
    for start in 0..nodes.len() {
        if mark[start] != Mark::New {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        mark[start] = Mark::Open;
        while let Some(&mut (i, ref mut k)) = stack.last_mut() {
            if let Some(&c) = nodes[i].children.get(*k) {
                *k += 1;
                if c >= nodes.len() {
                    continue;
                }
                match mark[c] {
                    Mark::Open => return Some(c),
                    Mark::New => {
                        mark[c] = Mark::Open;
                        stack.push((c, 0));
                    }
                    Mark::Done => {}
                }
            } else {
                mark[i] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

fn symmetry<T: Scalar>(nodes: &[LimbNode<T>], base: &str, r: &mut Report) {
    for (i, n) in nodes.iter().enumerate() {
        let Some(stem) = n.name.strip_suffix("_left") else { continue };
        let twin = format!("{stem}_right");
        let t = n.translation;
        let mirrored = nodes
            .iter()
            .any(|m| m.name == twin && m.translation == Vec3::new(-t.x, t.y, t.z));
        if !mirrored {
            r.push(&sk::SYMMETRY, format!("{base}/{i}"), format!("no `{twin}` with mirrored translation"));
        }
    }
}

/// Limb set of one player against the declared names.
pub(crate) fn player_limbs(declared: &BTreeSet<&str>, player: &SkeletonPlayer, path: &str, r: &mut Report) {
    let mut names = BTreeSet::new();
    for limb in &player.limbs {
        let name = limb.name.as_str();
        names.insert(name);
        let at = format!("{path}/{}", crate::report::pointer_escape(name));
        if !is_conventional_name(name) {
            r.push(&sk::LIMB_NAME, at, format!("`{name}`"));
        } else if !declared.contains(name) {
            r.push(&sk::LIMB_UNKNOWN, at, format!("`{name}` is not in the hierarchy"));
        }
    }
    let missing: Vec<&str> = declared.difference(&names).copied().collect();
    if !missing.is_empty() {
        r.push(&sk::LIMB_MISSING, path, format!("missing limbs: {}", missing.join(", ")));
    }
}

/// Compares every player's limbs in `frame` with the hierarchy's names.
pub fn cross_check_limbs<T: Scalar>(h: &SkeletonHierarchy<T>, frame: &crate::model::SkeletonFrame) -> Report {
    let mut report = Report::new(Component::Skeletal);
    let declared: BTreeSet<&str> = h.names().collect();
    let Some(teams) = frame.teams.value() else { return report };
    for (side, team) in [("home", &teams.home), ("away", &teams.away)] {
        for (i, p) in team.value().and_then(|t| t.players.value()).into_iter().flatten().enumerate() {
            player_limbs(&declared, p, &format!("/teams/{side}/players/{i}"), &mut report);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    pub(crate) fn sample_hierarchy() -> Value {
        let node = |name: &str, t: [i32; 3], children: &[usize]| {
            json!({"name": name, "translation": t, "rotation": [0.0, 0.0, 0.0, 1.0], "children": children})
        };
        json!([
            node("hip", [0, 0, 0], &[1, 2, 3]),
            node("spine", [0, 1, 0], &[4]),
            node("hip_left", [-1, 0, 0], &[5]),
            node("hip_right", [1, 0, 0], &[6]),
            node("head", [0, 1, 0], &[]),
            node("leg_left", [-1, -1, 0], &[]),
            node("leg_right", [1, -1, 0], &[]),
            node("arm_left", [-1, 1, 0], &[]),
            node("arm_right", [1, 1, 0], &[]),
        ])
    }

    #[test]
    fn names() {
        for ok in ["hip", "hip_left", "thumb_right", "upper_arm_left", "c7"] {
            assert!(is_conventional_name(ok), "{ok}");
        }
        for bad in ["LeftKnee", "left_hip", "left", "hip__left", "_hip", "hip_", "Hip", "hip-left", "7c", ""] {
            assert!(!is_conventional_name(bad), "{bad}");
        }
    }

    #[test]
    fn sample_hierarchy_validates() {
        let (h, report) = validate_hierarchy(&sample_hierarchy());
        let h = h.expect("valid");
        assert!(!report.has_errors(), "{}", report.to_text());
        assert_eq!(h.root_node().name, "hip");
        assert_eq!(h.depth(), 2);
        assert_eq!(h.len(), h.edge_count() + 1);
        assert_eq!(report.count_rule("SK-130"), 2);
        assert!(!report.has_rule("SK-109"));
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let mut raw = sample_hierarchy();
        raw[1]["children"] = json!([1, 4]);
        let (h, report) = validate_hierarchy(&raw);
        assert!(h.is_none());
        assert!(report.has_rule("SK-104"));
    }

    #[test]
    fn two_bare_roots() {
        let raw = json!([{"name": "a", "children": []}, {"name": "b", "children": []}]);
        let (h, report) = validate_hierarchy(&raw);
        assert!(h.is_none());
        assert!(report.has_rule("SK-105"));
    }

    #[test]
    fn shape_errors() {
        let (_, r) = validate_hierarchy(&json!({"name": "hip"}));
        assert!(r.has_rule("SK-100"));
        let (_, r) = validate_hierarchy(&json!([{"name": "hip", "children": [3]}]));
        assert!(r.has_rule("SK-102"));
        let (_, r) = validate_hierarchy(&json!([{"name": "hip", "rotation": [0, 0, 0]}]));
        assert!(r.has_rule("SK-110"));
        let (_, r) = validate_hierarchy(&json!([{"name": "hip", "rotation": [0, 0, 0, 2]}]));
        assert!(r.has_rule("SK-106"));
        let (_, r) = validate_hierarchy(&json!([{"translation": [0, 0, 0]}]));
        assert!(r.has_rule("SK-101"));
    }

    #[test]
    fn single_node_at_origin() {
        let h: SkeletonHierarchy = SkeletonHierarchy::from_value(&json!([{"name": "root", "translation": [3, 4, 5]}])).unwrap();
        let pose = t_pose_positions(&h);
        assert_eq!(pose.len(), 1);
        assert_eq!(pose["root"], Vec3::zero());
    }

    #[test]
    fn rotated_parent_turns_child() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let raw = json!([
            {"name": "base", "rotation": [0.0, 0.0, h, h], "children": [1]},
            {"name": "tip", "translation": [1, 0, 0]}
        ]);
        let sk = SkeletonHierarchy::<f64>::from_value(&raw).unwrap();
        let tip = t_pose_positions(&sk)["tip"];
        assert!(tip.x.abs() < 1e-12 && (tip.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn domain_error_for_invalid() {
        let err = SkeletonHierarchy::<f32>::from_value(&json!([])).unwrap_err();
        assert!(matches!(err, CdfError::InvalidHierarchy(_)));
    }
}
