use super::*;
use crate::claim::{ClaimPattern, ClaimRecord, Label, Style};
use crate::demo;
use crate::rng::seeded;

fn ctx(rels: &[&str], n: usize) -> RetrievalContext {
    RetrievalContext::new(rels.iter().map(|r| r.parse().unwrap()), n)
}

#[test]
fn enumeration_small_cases() {
    let e = enumerate_sequences(&ctx(&["r"], 2), usize::MAX);
    assert_eq!(e.sequences.len(), 2);
    assert_eq!(e.sequences[1].len(), 2);
    let e = enumerate_sequences(&ctx(&["a", "b"], 2), usize::MAX);
    let shown: Vec<String> = e
        .sequences
        .iter()
        .map(|s| {
            s.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    assert_eq!(shown, ["a", "b", "a,a", "a,b", "b,a", "b,b"]);
    let e = enumerate_sequences(&ctx(&["a", "b", "c", "d", "e"], 3), 100);
    assert_eq!(e.sequences.len(), 100);
    assert!(e.truncated);
    assert!(enumerate_sequences(&ctx(&[], 3), 10).sequences.is_empty());
}

fn multihop_record() -> ClaimRecord {
    let pattern = ClaimPattern::from_triples(&[
        ["AIDAstella", "shipBuilder", "Meyer_Werft"],
        ["Meyer_Werft", "location", "Papenburg"],
    ])
    .unwrap()
    .replace_node(1, crate::claim::ClaimNode::typed_var(0, "Company"))
    .unwrap();
    ClaimRecord::new(
        "m",
        "AIDAstella was built by a company located in Papenburg.",
        pattern,
        Label::Supported,
        Style::Written,
        vec![],
    )
}

#[test]
fn oracle_reaches_papenburg() {
    let kg = demo::aidastella();
    let r = retrieve(
        &kg,
        &multihop_record(),
        &OraclePredictor,
        &RetrieveConfig::default(),
        &mut seeded(0),
    );
    assert!(r.reached());
    let from_ship: Vec<&EvidencePath> =
        r.paths.iter().filter(|p| p.start == "AIDAstella").collect();
    assert_eq!(from_ship.len(), 1);
    assert_eq!(
        serialize_triples(&from_ship[0].triples),
        "AIDAstella shipBuilder Meyer_Werft <SEP> Meyer_Werft location Papenburg"
    );
    assert_eq!(from_ship[0].end, "Papenburg");
}

#[test]
fn single_entity_falls_back_to_one_walk() {
    let kg = demo::aidastella();
    let pattern = ClaimPattern::from_triples(&[["AIDAstella", "shipBuilder", "Meyer_Werft"]])
        .unwrap()
        .replace_node(1, crate::claim::ClaimNode::var(0))
        .unwrap();
    let record = ClaimRecord::new(
        "e",
        "AIDAstella had a ship builder.",
        pattern,
        Label::Supported,
        Style::Written,
        vec![],
    );
    let r = retrieve(
        &kg,
        &record,
        &OraclePredictor,
        &RetrieveConfig::default(),
        &mut seeded(0),
    );
    assert_eq!(r.paths.len(), 1);
    assert!(!r.paths[0].reached_other_claim_entity);
    assert_eq!(r.paths[0].end, "Meyer_Werft");
}

#[test]
fn lexical_predictor_matches_words() {
    let kg = demo::aidastella();
    let p = LexicalPredictor::new(&kg, 2);
    let record = ClaimRecord::new(
        "l",
        "The ship builder of AIDAstella has its location in Papenburg.",
        multihop_record().pattern,
        Label::Supported,
        Style::Written,
        vec![],
    );
    let c = p.predict(&record, "AIDAstella");
    let names: Vec<String> = c.relations.iter().map(ToString::to_string).collect();
    assert_eq!(
        names,
        ["location", "~location", "shipBuilder", "~shipBuilder"]
    );
    let r = retrieve(&kg, &record, &p, &RetrieveConfig::default(), &mut seeded(0));
    assert!(r.reached());
}

#[test]
fn budget_flags_partial_result() {
    let kg = demo::aidastella();
    let config = RetrieveConfig {
        expansion_budget: 1,
        ..RetrieveConfig::default()
    };
    let r = retrieve(
        &kg,
        &multihop_record(),
        &OraclePredictor,
        &config,
        &mut seeded(0),
    );
    assert!(r.truncated());
}

#[test]
fn evidence_round_trip() {
    assert_eq!(serialize_evidence(&[]), "");
    let p = EvidencePath {
        start: "a".into(),
        sequence: vec![],
        triples: vec![
            ["a".into(), "r".into(), "b".into()],
            ["c".into(), "s".into(), "b".into()],
        ],
        end: "c".into(),
        reached_other_claim_entity: true,
    };
    let text = serialize_evidence(&[p.clone(), p.clone()]);
    assert_eq!(text, "a r b <SEP> c s b\na r b <SEP> c s b");
    assert_eq!(
        parse_evidence(&text).unwrap(),
        vec![p.triples.clone(), p.triples]
    );
    assert!(parse_evidence("a r").is_err());
}
