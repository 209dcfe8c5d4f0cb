//! Dataset rows and their JSON-lines encoding.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::pattern::{primary_tag, ClaimPattern, ReasoningTags, ReasoningType};
use crate::error::{Error, Result};
use crate::path::NamedPath;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Supported,
    Refuted,
}

impl Label {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Label::Supported
        } else {
            Label::Refuted
        }
    }

    pub fn is_supported(self) -> bool {
        self == Label::Supported
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Supported => Label::Refuted,
            Label::Refuted => Label::Supported,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Supported => "Supported",
            Label::Refuted => "Refuted",
        })
    }
}

/// Surface style of a claim's text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Style {
    #[serde(rename = "written")]
    Written,
    #[serde(rename = "colloquial-presup")]
    ColloquialPresup,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Written => "written",
            Style::ColloquialPresup => "colloquial-presup",
        })
    }
}

/// One dataset row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub id: String,
    pub text: String,
    pub label: Label,
    pub types: ReasoningTags,
    pub style: Style,
    /// Grounded entity -> gold relation paths from it.
    pub entities: BTreeMap<String, Vec<NamedPath>>,
    pub pattern: ClaimPattern,
    pub source_triples: Vec<[String; 3]>,
}

impl ClaimRecord {
    /// Builds a record whose tags and evidence are derived from the pattern.
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        pattern: ClaimPattern,
        label: Label,
        style: Style,
        source_triples: Vec<[String; 3]>,
    ) -> Self {
        ClaimRecord {
            id: id.into(),
            text: text.into(),
            label,
            types: pattern.reasoning_tags(),
            style,
            entities: pattern.evidence_paths(),
            pattern,
            source_triples,
        }
    }

    pub fn primary_type(&self) -> ReasoningType {
        primary_tag(&self.types).unwrap_or_else(|| self.pattern.shape())
    }

    /// Entity names of the claim, in evidence-key order.
    pub fn claim_entities(&self) -> Vec<&str> {
        self.entities.keys().map(String::as_str).collect()
    }
}

/// Writes one JSON object per line.
pub fn write_records<'a, W, I>(records: I, mut out: W) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a ClaimRecord>,
{
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn records_to_string(records: &[ClaimRecord]) -> String {
    let mut buf = Vec::new();
    write_records(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("json is utf-8")
}

/// Parses one line; the pattern is validated on the way in.
pub fn parse_record(line: &str) -> std::result::Result<ClaimRecord, serde_json::Error> {
    serde_json::from_str(line)
}

/// Reads every record, failing on the first malformed line.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    for (i, entry) in read_records_lenient(input)? {
        out.push(entry.map_err(|e| Error::parse(i, e.to_string()))?);
    }
    Ok(out)
}

/// Reads every non-blank line, keeping per-line parse results.
/// Line numbers are 1-based.
pub fn read_records_lenient<R: BufRead>(
    input: R,
) -> Result<Vec<(usize, std::result::Result<ClaimRecord, serde_json::Error>)>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push((i + 1, parse_record(&line)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::claim::pattern::{build_pattern, ClaimEdge, ClaimNode};
    use proptest::prelude::*;

    fn sample() -> ClaimRecord {
        let pattern = build_pattern(
            vec![
                ClaimNode::entity("AIDAstella"),
                ClaimNode::typed_var(0, "Company"),
                ClaimNode::entity("Papenburg"),
            ],
            vec![
                ClaimEdge::new(0, "shipBuilder", 1),
                ClaimEdge::new(1, "location", 2),
            ],
            None,
        )
        .unwrap();
        ClaimRecord::new(
            "s1",
            "AIDAstella was built by a company in Papenburg.",
            pattern,
            Label::Supported,
            Style::Written,
            vec![
                [
                    "AIDAstella".into(),
                    "shipBuilder".into(),
                    "Meyer_Werft".into(),
                ],
                ["Meyer_Werft".into(), "location".into(), "Papenburg".into()],
            ],
        )
    }

    #[test]
    fn line_schema() {
        let s = records_to_string(&[sample()]);
        let v: serde_json::Value = serde_json::from_str(s.trim()).unwrap();
        assert_eq!(v["label"], "Supported");
        assert_eq!(v["types"], serde_json::json!(["Multi-hop"]));
        assert_eq!(v["style"], "written");
        assert_eq!(
            v["entities"]["Papenburg"],
            serde_json::json!([["~location", "~shipBuilder"]])
        );
        assert_eq!(v["pattern"]["edges"][0]["rel"], "shipBuilder");
        assert_eq!(v["source_triples"][1][2], "Papenburg");
        assert_eq!(s.lines().count(), 1);
    }

    #[test]
    fn empty_list_is_empty_stream() {
        assert_eq!(records_to_string(&[]), "");
        assert!(read_records("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn malformed_line_numbered() {
        let good = records_to_string(&[sample()]);
        let text = format!("{good}\n{{not json}}\n");
        match read_records(text.as_bytes()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lenient_reader_keeps_good_lines() {
        let good = records_to_string(&[sample()]);
        let text = format!("garbage\n{good}");
        let rows = read_records_lenient(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].1.is_err());
        assert!(rows[1].1.is_ok());
    }

    fn arb_record() -> impl Strategy<Value = ClaimRecord> {
        let name = "[A-Za-z][A-Za-z0-9_ é\"]{0,12}";
        (
            proptest::collection::vec(name, 2..5),
            proptest::collection::vec(("[a-z][A-Za-z]{0,8}", any::<bool>()), 1..4),
            any::<bool>(),
            any::<bool>(),
            any::<bool>(),
            ".{0,40}",
        )
            .prop_map(|(mut names, rels, var_mid, supported, presup, text)| {
                names.sort();
                names.dedup();
                if names.len() < 2 {
                    names.push(format!("{}_x", names[0]));
                }
                let mut nodes: Vec<ClaimNode> =
                    names.iter().cloned().map(ClaimNode::Grounded).collect();
                if var_mid && nodes.len() > 2 && rels.len() > 1 {
                    nodes[1] = ClaimNode::typed_var(0, "Company");
                }
                // chain through nodes, wrapping to stay within bounds
                let edges: Vec<ClaimEdge> = rels
                    .iter()
                    .enumerate()
                    .map(|(i, (r, neg))| {
                        let src = i % (nodes.len() - 1);
                        ClaimEdge {
                            src,
                            relation: r.clone(),
                            dst: src + 1,
                            negated: *neg,
                        }
                    })
                    .collect();
                let used = rels.len().min(nodes.len() - 1) + 1;
                nodes.truncate(used);
                let pattern = build_pattern(nodes, edges, None).unwrap();
                let triples = pattern
                    .edges()
                    .iter()
                    .map(|e| ["h".to_string(), e.relation.clone(), "t".to_string()])
                    .collect();
                ClaimRecord::new(
                    "",
                    text,
                    pattern.with_inverted(presup),
                    Label::from_bool(supported),
                    if presup {
                        Style::ColloquialPresup
                    } else {
                        Style::Written
                    },
                    triples,
                )
            })
    }

    proptest! {
        #[test]
        fn records_round_trip(records in proptest::collection::vec(arb_record(), 0..4)) {
            let text = records_to_string(&records);
            let back = read_records(text.as_bytes()).unwrap();
            prop_assert_eq!(back, records);
        }
    }
}
