//! Template tables transcribed by hand, and a checker for the bundled catalog.

use std::collections::BTreeSet;

use kgfact_core::claim::{ExistenceSide, TemplateCatalog};

pub const HEAD_RELATIONS: [&str; 17] = [
    "successor",
    "spouse",
    "children",
    "parentCompany",
    "capital",
    "garrison",
    "nickname",
    "mascot",
    "youthclubs",
    "predecessor",
    "child",
    "precededBy",
    "religion",
    "awards",
    "award",
    "college",
    "university",
];

pub const TAIL_RELATIONS: [&str; 5] = [
    "president",
    "primeMinister",
    "vicepresident",
    "primeminister",
    "vicePresident",
];

pub const FACTIVE: [&str; 8] = [
    "I forgot that {claim}.",
    "I realized that {claim}.",
    "I wasn’t aware that {claim}.",
    "I didn’t know that {claim}.",
    "I remembered that {claim}.",
    "I explained that {claim}.",
    "I emphasized that {claim}.",
    "I understand that {claim}.",
];

pub const NON_FACTIVE: [&str; 3] = [
    "I imagined that {claim}.",
    "I wish that {claim}.",
    "If only {claim}.",
];

pub const GROUPS: [(&str, &str, &[&[&str]]); 4] = [
    (
        "person",
        "person",
        &[
            &["child", "children"],
            &["successor"],
            &["parent"],
            &["predecessor", "precededBy"],
            &["spouse"],
            &["vicePresident", "vicepresident"],
            &["primeminister", "primeMinister"],
        ],
    ),
    (
        "person",
        "team",
        &[
            &["currentteam", "currentclub", "team"],
            &["debutTeam", "formerTeam"],
        ],
    ),
    (
        "non-person",
        "person",
        &[
            &["chairperson", "chairman", "leader", "leaderName"],
            &["manager"],
            &["founder"],
            &["director"],
            &["crewMembers"],
            &["producer"],
            &["discoverer"],
            &["creator"],
            &["editor"],
            &["writer"],
            &["coach"],
            &["starring"],
            &["dean"],
        ],
    ),
    (
        "non-person",
        "non-person",
        &[
            &["owningCompany", "parentCompany", "owner"],
            &["headquarter"],
            &["builder"],
        ],
    ),
];

/// (side, entity, relation, negated, expected sentence)
pub const EXISTENCE_SAMPLES: [(ExistenceSide, &str, &str, bool, &str); 5] = [
    (
        ExistenceSide::Head,
        "Obama",
        "spouse",
        false,
        "Obama had a spouse.",
    ),
    (
        ExistenceSide::Head,
        "Apple",
        "parentCompany",
        true,
        "Apple did not have a parent company.",
    ),
    (
        ExistenceSide::Head,
        "Obama",
        "university",
        false,
        "Obama attended university.",
    ),
    (
        ExistenceSide::Head,
        "Obama",
        "college",
        true,
        "Obama did not attend college.",
    ),
    (
        ExistenceSide::Tail,
        "Obama",
        "vicePresident",
        true,
        "Obama was not a vice president.",
    ),
];

/// Every mismatch between the bundled catalog and the tables above.
pub fn catalog_mismatches(c: &TemplateCatalog) -> Vec<String> {
    let mut out = Vec::new();
    let set = |v: &[&str]| {
        v.iter()
            .map(|s| s.to_string())
            .collect::<BTreeSet<String>>()
    };
    for (side, want) in [
        (ExistenceSide::Head, &HEAD_RELATIONS[..]),
        (ExistenceSide::Tail, &TAIL_RELATIONS[..]),
    ] {
        let got = set(&c.existence_relations(side));
        if got != set(want) {
            out.push(format!("{side:?} existence relations: {got:?}"));
        }
        for r in want {
            for negated in [false, true] {
                if c.render_existence(side, "X", r, negated).is_none() {
                    out.push(format!("no {side:?} template for {r} (negated: {negated})"));
                }
            }
        }
    }
    for (side, entity, relation, negated, want) in EXISTENCE_SAMPLES {
        let got = c.render_existence(side, entity, relation, negated);
        if got.as_deref() != Some(want) {
            out.push(format!("{want:?} rendered as {got:?}"));
        }
    }
    if c.factive != FACTIVE {
        out.push(format!("factive templates: {:?}", c.factive));
    }
    if c.non_factive != NON_FACTIVE {
        out.push(format!("non-factive templates: {:?}", c.non_factive));
    }
    if c.relation_groups.len() != GROUPS.len() {
        out.push(format!("{} relation groups", c.relation_groups.len()));
    }
    for (g, (head, tail, classes)) in c.relation_groups.iter().zip(GROUPS) {
        let want: Vec<Vec<String>> = classes
            .iter()
            .map(|k| k.iter().map(|s| s.to_string()).collect())
            .collect();
        if g.head_type != head || g.tail_type != tail || g.classes != want {
            out.push(format!("group {head}->{tail}: {:?}", g.classes));
        }
    }
    out
}
