use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::path::{NamedPath, RelationStep};

/// A pattern node: a named entity or an underspecified one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClaimNode {
    Grounded(String),
    Variable {
        index: usize,
        type_name: Option<String>,
    },
}

impl ClaimNode {
    pub fn entity(name: impl Into<String>) -> Self {
        ClaimNode::Grounded(name.into())
    }

    pub fn var(index: usize) -> Self {
        ClaimNode::Variable {
            index,
            type_name: None,
        }
    }

    pub fn typed_var(index: usize, type_name: impl Into<String>) -> Self {
        ClaimNode::Variable {
            index,
            type_name: Some(type_name.into()),
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, ClaimNode::Variable { .. })
    }

    pub fn grounded(&self) -> Option<&str> {
        match self {
            ClaimNode::Grounded(name) => Some(name),
            ClaimNode::Variable { .. } => None,
        }
    }
}

/// Directed relation edge between two nodes, by node position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClaimEdge {
    pub src: usize,
    #[serde(rename = "rel")]
    pub relation: String,
    pub dst: usize,
    #[serde(rename = "neg", default)]
    pub negated: bool,
}

impl ClaimEdge {
    pub fn new(src: usize, relation: impl Into<String>, dst: usize) -> Self {
        ClaimEdge {
            src,
            relation: relation.into(),
            dst,
            negated: false,
        }
    }

    pub fn negated(mut self) -> Self {
        self.negated = true;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReasoningType {
    OneHop,
    Conjunction,
    Existence,
    MultiHop,
    Negation,
}

impl ReasoningType {
    pub const ALL: [ReasoningType; 5] = [
        ReasoningType::OneHop,
        ReasoningType::Conjunction,
        ReasoningType::Existence,
        ReasoningType::MultiHop,
        ReasoningType::Negation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReasoningType::OneHop => "One-hop",
            ReasoningType::Conjunction => "Conjunction",
            ReasoningType::Existence => "Existence",
            ReasoningType::MultiHop => "Multi-hop",
            ReasoningType::Negation => "Negation",
        }
    }

    /// Bucket rank: higher wins when a claim carries several tags.
    fn precedence(self) -> u8 {
        match self {
            ReasoningType::OneHop => 0,
            ReasoningType::Conjunction => 1,
            ReasoningType::Existence => 2,
            ReasoningType::MultiHop => 3,
            ReasoningType::Negation => 4,
        }
    }
}

impl fmt::Display for ReasoningType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReasoningType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReasoningType::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Pattern(format!("unknown reasoning type {s:?}")))
    }
}

impl Serialize for ReasoningType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ReasoningType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Set of reasoning tags on a claim.
pub type ReasoningTags = BTreeSet<ReasoningType>;

/// Tag used for per-type statistics.
pub fn primary_tag(tags: &ReasoningTags) -> Option<ReasoningType> {
    tags.iter().copied().max_by_key(|t| t.precedence())
}

/// Small graph of grounded and variable nodes joined by relation edges.
///
/// `inverted` flips the verdict of the whole pattern; it encodes claims
/// wrapped in a label-inverting frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimPattern {
    nodes: Vec<ClaimNode>,
    edges: Vec<ClaimEdge>,
    inverted: bool,
}

/// Structural kind of a pattern, ignoring negation.
fn shape_kind(nodes: &[ClaimNode], edges: &[ClaimEdge]) -> ReasoningType {
    let has_var = nodes.iter().any(ClaimNode::is_variable);
    match (has_var, edges.len()) {
        (false, 1) => ReasoningType::OneHop,
        (false, _) => ReasoningType::Conjunction,
        (true, 1) => ReasoningType::Existence,
        (true, _) => ReasoningType::MultiHop,
    }
}

/// Validates and assembles a pattern.
///
/// `kind`, when given, must be among the tags the shape produces.
pub fn build_pattern(
    nodes: Vec<ClaimNode>,
    edges: Vec<ClaimEdge>,
    kind: Option<ReasoningType>,
) -> Result<ClaimPattern> {
    let pattern = ClaimPattern {
        nodes,
        edges,
        inverted: false,
    };
    pattern.validate()?;
    if let Some(kind) = kind {
        let tags = pattern.reasoning_tags();
        if !tags.contains(&kind) {
            return Err(Error::Pattern(format!(
                "kind {kind} does not match pattern shape {}",
                shape_kind(&pattern.nodes, &pattern.edges)
            )));
        }
    }
    Ok(pattern)
}

impl ClaimPattern {
    /// Conjunction of grounded triples, nodes in first-mention order.
    pub fn from_triples<S: AsRef<str>>(triples: &[[S; 3]]) -> Result<Self> {
        let mut nodes: Vec<ClaimNode> = Vec::new();
        let mut node_of = |name: &str| -> usize {
            match nodes.iter().position(|n| n.grounded() == Some(name)) {
                Some(i) => i,
                None => {
                    nodes.push(ClaimNode::entity(name));
                    nodes.len() - 1
                }
            }
        };
        let mut edges = Vec::new();
        for [h, r, t] in triples {
            let src = node_of(h.as_ref());
            let dst = node_of(t.as_ref());
            edges.push(ClaimEdge::new(src, r.as_ref(), dst));
        }
        build_pattern(nodes, edges, None)
    }

    pub fn nodes(&self) -> &[ClaimNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[ClaimEdge] {
        &self.edges
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    pub fn with_inverted(mut self, inverted: bool) -> Self {
        self.inverted = inverted;
        self
    }

    pub fn variable_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_variable()).count()
    }

    pub fn has_negation(&self) -> bool {
        self.edges.iter().any(|e| e.negated)
    }

    pub fn shape(&self) -> ReasoningType {
        shape_kind(&self.nodes, &self.edges)
    }

    /// Reasoning tags: the structural kind plus `Negation` when any edge is negated.
    pub fn reasoning_tags(&self) -> ReasoningTags {
        let mut tags = ReasoningTags::from([self.shape()]);
        if self.has_negation() {
            tags.insert(ReasoningType::Negation);
        }
        tags
    }

    pub fn grounded_entities(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().filter_map(ClaimNode::grounded)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.src == node || e.dst == node)
            .count()
    }

    /// Returns a copy with node `at` replaced; shape is re-validated.
    pub fn replace_node(&self, at: usize, node: ClaimNode) -> Result<Self> {
        let mut nodes = self.nodes.clone();
        nodes[at] = node;
        let pattern = ClaimPattern {
            nodes,
            edges: self.edges.clone(),
            inverted: self.inverted,
        };
        pattern.validate()?;
        Ok(pattern)
    }

    /// Returns a copy where the listed edges have their negation flag set to `negated`.
    pub fn with_negation(&self, edge_ids: &[usize], negated: bool) -> Self {
        let mut out = self.clone();
        for &i in edge_ids {
            out.edges[i].negated = negated;
        }
        out
    }

    pub fn with_relation(&self, edge: usize, relation: &str) -> Self {
        let mut out = self.clone();
        out.edges[edge].relation = relation.to_string();
        out
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if self.edges.is_empty() {
            return Err(Error::Pattern("pattern has no edges".into()));
        }
        for e in &self.edges {
            if e.src >= n || e.dst >= n {
                return Err(Error::Pattern(format!(
                    "dangling node ref in edge {}->{}",
                    e.src, e.dst
                )));
            }
            if e.src == e.dst {
                return Err(Error::Pattern(format!("self-loop on node {}", e.src)));
            }
            if e.relation.is_empty() {
                return Err(Error::Pattern("empty relation".into()));
            }
        }
        let mut var_indexes: Vec<usize> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                ClaimNode::Variable { index, .. } => Some(*index),
                ClaimNode::Grounded(_) => None,
            })
            .collect();
        var_indexes.sort_unstable();
        if var_indexes.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::Pattern(
                "variable indexes must be dense and unique from 0".into(),
            ));
        }
        if var_indexes.len() == n {
            return Err(Error::Pattern("pattern has no grounded entity".into()));
        }
        if self.edges.len() == 1 && var_indexes.len() > 1 {
            return Err(Error::Pattern(
                "single-edge pattern with two variable endpoints".into(),
            ));
        }
        if !self.is_connected() {
            return Err(Error::Pattern("disconnected pattern".into()));
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                let other = if e.src == v {
                    e.dst
                } else if e.dst == v {
                    e.src
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Gold evidence: for each grounded entity, the relation paths that walk
    /// pattern edges through variable nodes until they reach another grounded
    /// entity or a variable dead end.
    pub fn evidence_paths(&self) -> BTreeMap<String, Vec<NamedPath>> {
        let mut out: BTreeMap<String, Vec<NamedPath>> = BTreeMap::new();
        for (start, node) in self.nodes.iter().enumerate() {
            let Some(name) = node.grounded() else {
                continue;
            };
            let mut paths = Vec::new();
            let mut visited = vec![false; self.nodes.len()];
            visited[start] = true;
            self.walk(start, &mut visited, &mut Vec::new(), &mut paths);
            let entry = out.entry(name.to_string()).or_default();
            entry.extend(paths);
            entry.sort();
            entry.dedup();
        }
        out
    }

    fn walk(
        &self,
        at: usize,
        visited: &mut [bool],
        prefix: &mut NamedPath,
        out: &mut Vec<NamedPath>,
    ) {
        for e in &self.edges {
            let (next, step) = if e.src == at {
                (e.dst, RelationStep::forward(e.relation.clone()))
            } else if e.dst == at {
                (e.src, RelationStep::backward(e.relation.clone()))
            } else {
                continue;
            };
            if visited[next] {
                continue;
            }
            prefix.push(step);
            if self.nodes[next].is_variable() {
                visited[next] = true;
                let before = out.len();
                self.walk(next, visited, prefix, out);
                if out.len() == before {
                    out.push(prefix.clone());
                }
                visited[next] = false;
            } else {
                out.push(prefix.clone());
            }
            prefix.pop();
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NodeRepr {
    Entity(String),
    Var {
        var: usize,
        #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
        type_name: Option<String>,
    },
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    nodes: Vec<NodeRepr>,
    edges: Vec<ClaimEdge>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    inverted: bool,
}

impl Serialize for ClaimPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PatternRepr {
            nodes: self
                .nodes
                .iter()
                .map(|n| match n {
                    ClaimNode::Grounded(name) => NodeRepr::Entity(name.clone()),
                    ClaimNode::Variable { index, type_name } => NodeRepr::Var {
                        var: *index,
                        type_name: type_name.clone(),
                    },
                })
                .collect(),
            edges: self.edges.clone(),
            inverted: self.inverted,
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClaimPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PatternRepr::deserialize(deserializer)?;
        let nodes = repr
            .nodes
            .into_iter()
            .map(|n| match n {
                NodeRepr::Entity(name) => ClaimNode::Grounded(name),
                NodeRepr::Var { var, type_name } => ClaimNode::Variable {
                    index: var,
                    type_name,
                },
            })
            .collect();
        let pattern = build_pattern(nodes, repr.edges, None).map_err(serde::de::Error::custom)?;
        Ok(pattern.with_inverted(repr.inverted))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(ts: &[ReasoningType]) -> ReasoningTags {
        ts.iter().copied().collect()
    }

    fn multihop() -> ClaimPattern {
        build_pattern(
            vec![
                ClaimNode::entity("AIDAstella"),
                ClaimNode::typed_var(0, "Company"),
                ClaimNode::entity("Papenburg"),
            ],
            vec![
                ClaimEdge::new(0, "shipBuilder", 1),
                ClaimEdge::new(1, "location", 2),
            ],
            Some(ReasoningType::MultiHop),
        )
        .unwrap()
    }

    #[test]
    fn one_hop_ok() {
        let p = build_pattern(
            vec![
                ClaimNode::entity("AIDAstella"),
                ClaimNode::entity("Meyer_Werft"),
            ],
            vec![ClaimEdge::new(0, "shipBuilder", 1)],
            Some(ReasoningType::OneHop),
        )
        .unwrap();
        assert_eq!(p.reasoning_tags(), tags(&[ReasoningType::OneHop]));
        let neg = p.with_negation(&[0], true);
        assert_eq!(
            neg.reasoning_tags(),
            tags(&[ReasoningType::OneHop, ReasoningType::Negation])
        );
    }

    #[test]
    fn disconnected_rejected() {
        let err = build_pattern(
            vec![
                ClaimNode::entity("a"),
                ClaimNode::entity("b"),
                ClaimNode::entity("c"),
            ],
            vec![ClaimEdge::new(0, "r", 1)],
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("disconnected"));
    }

    #[test]
    fn shape_errors() {
        let two = || vec![ClaimNode::entity("a"), ClaimNode::entity("b")];
        assert!(build_pattern(two(), vec![ClaimEdge::new(0, "r", 2)], None).is_err());
        assert!(build_pattern(two(), vec![ClaimEdge::new(0, "r", 0)], None).is_err());
        assert!(build_pattern(two(), vec![], None).is_err());
        assert!(build_pattern(
            two(),
            vec![ClaimEdge::new(0, "r", 1)],
            Some(ReasoningType::Conjunction)
        )
        .is_err());
        assert!(build_pattern(
            vec![ClaimNode::var(0), ClaimNode::var(1)],
            vec![ClaimEdge::new(0, "r", 1)],
            None
        )
        .is_err());
        assert!(build_pattern(
            vec![ClaimNode::entity("a"), ClaimNode::var(1)],
            vec![ClaimEdge::new(0, "r", 1)],
            None
        )
        .is_err());
    }

    #[test]
    fn aidastella_multihop_shape() {
        let p = multihop();
        assert_eq!(p.reasoning_tags(), tags(&[ReasoningType::MultiHop]));
        let neg = p.with_negation(&[1], true);
        assert_eq!(
            neg.reasoning_tags(),
            tags(&[ReasoningType::MultiHop, ReasoningType::Negation])
        );
        assert_eq!(
            primary_tag(&neg.reasoning_tags()),
            Some(ReasoningType::Negation)
        );
    }

    #[test]
    fn existence_shape() {
        let p = build_pattern(
            vec![ClaimNode::entity("Meyer_Werft"), ClaimNode::var(0)],
            vec![ClaimEdge::new(0, "parentCompany", 1)],
            Some(ReasoningType::Existence),
        )
        .unwrap();
        assert_eq!(p.reasoning_tags(), tags(&[ReasoningType::Existence]));
    }

    #[test]
    fn classification_ignores_order() {
        let a = ClaimPattern::from_triples(&[
            ["AIDAstella", "shipOperator", "AIDA_Cruises"],
            ["AIDAstella", "shipBuilder", "Meyer_Werft"],
        ])
        .unwrap();
        let b = ClaimPattern::from_triples(&[
            ["AIDAstella", "shipBuilder", "Meyer_Werft"],
            ["AIDAstella", "shipOperator", "AIDA_Cruises"],
        ])
        .unwrap();
        assert_eq!(a.reasoning_tags(), b.reasoning_tags());
        assert_eq!(a.reasoning_tags(), tags(&[ReasoningType::Conjunction]));
    }

    #[test]
    fn evidence_matches_gold_format() {
        let ev = multihop().evidence_paths();
        let render = |ps: &Vec<NamedPath>| -> Vec<Vec<String>> {
            ps.iter()
                .map(|p| p.iter().map(|s| s.to_string()).collect())
                .collect()
        };
        assert_eq!(
            render(&ev["AIDAstella"]),
            vec![vec!["shipBuilder", "location"]]
        );
        assert_eq!(
            render(&ev["Papenburg"]),
            vec![vec!["~location", "~shipBuilder"]]
        );
    }

    #[test]
    fn existence_evidence_stops_at_variable() {
        let p = build_pattern(
            vec![ClaimNode::entity("Obama"), ClaimNode::var(0)],
            vec![ClaimEdge::new(0, "spouse", 1)],
            None,
        )
        .unwrap();
        let ev = p.evidence_paths();
        assert_eq!(ev["Obama"], vec![vec![RelationStep::forward("spouse")]]);
    }

    #[test]
    fn pattern_json_round_trip() {
        let p = multihop().with_negation(&[0], true).with_inverted(true);
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains(r#"{"var":0,"type":"Company"}"#), "{json}");
        let back: ClaimPattern = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn invalid_pattern_json_rejected() {
        let json = r#"{"nodes":["a","b","c"],"edges":[{"src":0,"rel":"r","dst":1,"neg":false}]}"#;
        assert!(serde_json::from_str::<ClaimPattern>(json).is_err());
    }
}
