//! Worked examples on the AIDAstella graph with their published labels.

use kgfact_core::claim::{build_pattern, ClaimEdge, ClaimNode, ClaimPattern, Label};
use kgfact_core::demo::AIDASTELLA_TSV;
use kgfact_core::kg::{ingest_str, GraphConfig, TripleFormat};
use kgfact_core::KnowledgeGraph;

pub struct Fixture {
    pub name: &'static str,
    /// Triples added to the base graph.
    pub extra: &'static str,
    pub pattern: ClaimPattern,
    pub label: Label,
}

impl Fixture {
    pub fn graph(&self) -> KnowledgeGraph {
        let text = format!("{AIDASTELLA_TSV}{}", self.extra);
        ingest_str(&text, TripleFormat::Tsv, GraphConfig::default()).unwrap()
    }
}

fn chain(a: &str, r1: &str, m: &str, r2: &str, b: &str, neg: [bool; 2]) -> ClaimPattern {
    let mut first = ClaimEdge::new(0, r1, 1);
    first.negated = neg[0];
    let mut second = ClaimEdge::new(1, r2, 2);
    second.negated = neg[1];
    let mid = if let Some(ty) = m.strip_prefix('?') {
        ClaimNode::typed_var(0, ty)
    } else {
        ClaimNode::entity(m)
    };
    build_pattern(
        vec![ClaimNode::entity(a), mid, ClaimNode::entity(b)],
        vec![first, second],
        None,
    )
    .unwrap()
}

fn fx(name: &'static str, pattern: ClaimPattern, label: Label) -> Fixture {
    Fixture {
        name,
        extra: "",
        pattern,
        label,
    }
}

use Label::{Refuted, Supported};

pub fn reasoning_types() -> Vec<Fixture> {
    let one_hop =
        ClaimPattern::from_triples(&[["AIDAstella", "shipBuilder", "Meyer_Werft"]]).unwrap();
    let conjunction = ClaimPattern::from_triples(&[
        ["AIDAstella", "shipOperator", "AIDA_Cruises"],
        ["AIDAstella", "shipBuilder", "Meyer_Werft"],
    ])
    .unwrap();
    let existence = build_pattern(
        vec![ClaimNode::entity("Meyer_Werft"), ClaimNode::var(0)],
        vec![ClaimEdge::new(0, "parentCompany", 1)],
        None,
    )
    .unwrap();
    vec![
        fx("reasoning/one-hop", one_hop, Supported),
        fx("reasoning/conjunction", conjunction, Supported),
        fx("reasoning/existence", existence, Supported),
        fx(
            "reasoning/multi-hop",
            chain(
                "AIDAstella",
                "shipBuilder",
                "?Company",
                "location",
                "Papenburg",
                [false, false],
            ),
            Supported,
        ),
        fx(
            "reasoning/negation",
            chain(
                "AIDAstella",
                "shipBuilder",
                "Meyer_Werft",
                "location",
                "Papenburg",
                [true, false],
            ),
            Refuted,
        ),
    ]
}

fn negation_table(
    prefix: &'static [&'static str; 5],
    m: &str,
    end: &str,
    labels: [Label; 5],
) -> Vec<Fixture> {
    let rows = [
        ("AIDAstella", "Papenburg", [false, false]),
        ("AIDAstella", end, [false, false]),
        ("AIDAstella", end, [true, false]),
        ("AIDAstella", end, [false, true]),
        ("AIDAstella", end, [true, true]),
    ];
    rows.iter()
        .zip(labels)
        .enumerate()
        .map(|(i, (&(a, b, neg), label))| {
            // the substituted entity only appears from the second row on
            let mid = if i == 0 { "Meyer_Werft" } else { m };
            fx(
                prefix[i],
                chain(a, "shipBuilder", mid, "location", b, neg),
                label,
            )
        })
        .collect()
}

/// Conjunctions with New York substituted for Papenburg.
pub fn new_york_substitution() -> Vec<Fixture> {
    negation_table(
        &[
            "new-york/1",
            "new-york/2",
            "new-york/3",
            "new-york/4",
            "new-york/5",
        ],
        "Meyer_Werft",
        "New_York",
        [Supported, Refuted, Refuted, Supported, Refuted],
    )
}

/// Conjunctions with Samsung substituted for Meyer Werft.
pub fn samsung_substitution() -> Vec<Fixture> {
    negation_table(
        &[
            "samsung/1",
            "samsung/2",
            "samsung/3",
            "samsung/4",
            "samsung/5",
        ],
        "Samsung_Heavy_Industries",
        "Papenburg",
        [Supported, Refuted, Refuted, Refuted, Supported],
    )
}

/// Multi-hop rows with a definite label.
pub fn multihop_rows() -> Vec<Fixture> {
    vec![
        fx(
            "multihop/1",
            chain(
                "AIDAstella",
                "shipBuilder",
                "?Company",
                "location",
                "Papenburg",
                [false, false],
            ),
            Supported,
        ),
        fx(
            "multihop/2",
            chain(
                "AIDAstella",
                "shipBuilder",
                "?Company",
                "location",
                "New_York",
                [false, false],
            ),
            Refuted,
        ),
    ]
}

/// Multi-hop with a negated second edge, before and after a second location appears.
pub fn multihop_negation() -> Vec<Fixture> {
    let p = chain(
        "AIDAstella",
        "shipBuilder",
        "?Company",
        "location",
        "Papenburg",
        [false, true],
    );
    vec![
        fx("multihop-negation/single-location", p.clone(), Refuted),
        Fixture {
            name: "multihop-negation/second-location",
            extra: "Meyer_Werft\tlocation\tHamburg\n",
            pattern: p,
            label: Supported,
        },
    ]
}

pub fn all() -> Vec<Fixture> {
    let mut out = reasoning_types();
    out.extend(new_york_substitution());
    out.extend(samsung_substitution());
    out.extend(multihop_rows());
    out.extend(multihop_negation());
    out
}
