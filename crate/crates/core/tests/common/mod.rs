//! Brute-force oracles and random case generators shared by integration tests.
#![allow(dead_code)]

pub mod fixtures;
pub mod tables;

use std::collections::{BTreeSet, HashSet};

use kgfact_core::claim::{build_pattern, ClaimEdge, ClaimNode, ClaimPattern, Label, ReasoningType};
use kgfact_core::kg::{GraphBuilder, KnowledgeGraph};
use rand::Rng;

pub const TYPE_REL: &str = "rdf:type";

/// Evaluates the per-kind formulas by enumerating every assignment of
/// graph entities to variables. Works purely on names.
pub fn brute_force_label(
    kg: &KnowledgeGraph,
    p: &ClaimPattern,
    distinct: bool,
    enforce_types: bool,
) -> Label {
    let names: Vec<&str> = kg.entities().map(|e| kg.entity_name(e)).collect();
    let facts: HashSet<(&str, &str, &str)> = kg
        .triples()
        .map(|t| {
            (
                kg.entity_name(t.head),
                kg.relation_name(t.relation),
                kg.entity_name(t.tail),
            )
        })
        .collect();
    let exists = |h: &str, r: &str, t: &str| facts.contains(&(h, r, t));
    let vars = p.variable_count();
    let node_name = |node: usize, asg: &[usize]| -> &str {
        match &p.nodes()[node] {
            ClaimNode::Grounded(n) => n.as_str(),
            ClaimNode::Variable { index, .. } => names[asg[*index]],
        }
    };
    let types_ok = |asg: &[usize]| -> bool {
        !enforce_types
            || p.nodes().iter().all(|n| match n {
                ClaimNode::Variable {
                    index,
                    type_name: Some(t),
                } => exists(names[asg[*index]], TYPE_REL, t),
                _ => true,
            })
    };

    let holds = if vars == 0 {
        p.edges().iter().all(|e| {
            let found = exists(node_name(e.src, &[]), &e.relation, node_name(e.dst, &[]));
            found != e.negated
        })
    } else if p.shape() == ReasoningType::Existence {
        let e = &p.edges()[0];
        let any = (0..names.len()).any(|i| {
            let asg = [i];
            types_ok(&asg) && exists(node_name(e.src, &asg), &e.relation, node_name(e.dst, &asg))
        });
        any != e.negated
    } else {
        let total = names.len().pow(vars as u32);
        (0..total).any(|code| {
            let mut asg = vec![0; vars];
            let mut c = code;
            for slot in asg.iter_mut() {
                *slot = c % names.len();
                c /= names.len();
            }
            types_ok(&asg)
                && p.edges().iter().all(|e| {
                    let (h, t) = (node_name(e.src, &asg), node_name(e.dst, &asg));
                    if !e.negated {
                        exists(h, &e.relation, t)
                    } else if distinct {
                        names.iter().any(|&z| z != t && exists(h, &e.relation, z))
                    } else {
                        !exists(h, &e.relation, t)
                    }
                })
        })
    };
    Label::from_bool(holds != p.is_inverted())
}

pub struct RandomGraph {
    pub kg: KnowledgeGraph,
    pub triples: Vec<[String; 3]>,
    pub entities: Vec<String>,
    pub relations: Vec<String>,
    pub types: Vec<String>,
}

/// Up to `max_entities` entities and `max_triples` triples over four
/// relations, plus type edges to two type entities.
pub fn random_graph<R: Rng>(rng: &mut R, max_entities: usize, max_triples: usize) -> RandomGraph {
    let n = rng.gen_range(2..=max_entities.max(2));
    let entities: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let relations: Vec<String> = (0..4).map(|i| format!("r{i}")).collect();
    let types = vec!["T0".to_string(), "T1".to_string()];
    let mut set = BTreeSet::new();
    let m = rng.gen_range(0..=max_triples);
    for _ in 0..m * 4 {
        if set.len() >= m {
            break;
        }
        let h = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if rng.gen_bool(0.15) {
            set.insert([
                entities[h].clone(),
                TYPE_REL.to_string(),
                types[rng.gen_range(0..2)].clone(),
            ]);
        } else {
            set.insert([
                entities[h].clone(),
                relations[rng.gen_range(0..4)].clone(),
                entities[t].clone(),
            ]);
        }
    }
    let triples: Vec<[String; 3]> = set.into_iter().collect();
    let mut b = GraphBuilder::default();
    for e in &entities {
        b.add_entity(e);
    }
    for [h, r, t] in &triples {
        b.add(h, r, t);
    }
    RandomGraph {
        kg: b.finish(),
        triples,
        entities,
        relations,
        types,
    }
}

/// Random valid pattern with up to `max_edges` edges and `max_vars` variables.
/// Occasionally names an entity or relation absent from the graph.
pub fn random_pattern<R: Rng>(
    rng: &mut R,
    g: &RandomGraph,
    max_edges: usize,
    max_vars: usize,
) -> ClaimPattern {
    loop {
        let n_nodes = rng.gen_range(2..=max_edges + 1);
        let n_vars = rng.gen_range(0..=max_vars.min(n_nodes - 1));
        let mut nodes = Vec::new();
        let mut used = HashSet::new();
        for i in 0..n_nodes {
            if i < n_vars {
                let node = if rng.gen_bool(0.4) {
                    ClaimNode::typed_var(i, g.types[rng.gen_range(0..2)].clone())
                } else {
                    ClaimNode::var(i)
                };
                nodes.push(node);
            } else {
                let name = if rng.gen_bool(0.05) {
                    "ghost".to_string()
                } else {
                    g.entities[rng.gen_range(0..g.entities.len())].clone()
                };
                if !used.insert(name.clone()) {
                    continue;
                }
                nodes.push(ClaimNode::entity(name));
            }
        }
        if nodes.len() < 2 {
            continue;
        }
        // shuffle so variables are not always first
        for i in (1..nodes.len()).rev() {
            let j = rng.gen_range(0..=i);
            nodes.swap(i, j);
        }
        let k = nodes.len();
        let mut edges = Vec::new();
        let relation = |rng: &mut R| {
            if rng.gen_bool(0.03) {
                "ghostRel".to_string()
            } else {
                g.relations[rng.gen_range(0..g.relations.len())].clone()
            }
        };
        for i in 1..k {
            let j = rng.gen_range(0..i);
            let (s, d) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
            let mut e = ClaimEdge::new(s, relation(rng), d);
            e.negated = rng.gen_bool(0.3);
            edges.push(e);
        }
        while edges.len() < max_edges && rng.gen_bool(0.3) {
            let s = rng.gen_range(0..k);
            let d = rng.gen_range(0..k);
            if s == d {
                continue;
            }
            let mut e = ClaimEdge::new(s, relation(rng), d);
            e.negated = rng.gen_bool(0.3);
            edges.push(e);
        }
        if edges.len() > max_edges {
            continue;
        }
        if let Ok(p) = build_pattern(nodes, edges, None) {
            return p.with_inverted(rng.gen_bool(0.1));
        }
    }
}

/// All walks from `start` of length 1..=n whose steps come from `steps`
/// (relation name, inverse flag); returns end entity and step sequence.
pub fn all_walks(
    kg: &KnowledgeGraph,
    triples: &[[String; 3]],
    start: &str,
    steps: &[(String, bool)],
    n: usize,
) -> Vec<(String, Vec<(String, bool)>)> {
    let _ = kg;
    let mut out = Vec::new();
    let mut frontier = vec![(start.to_string(), Vec::<(String, bool)>::new())];
    for _ in 0..n {
        let mut next = Vec::new();
        for (at, seq) in &frontier {
            for (rel, inverse) in steps {
                for [h, r, t] in triples {
                    if r != rel {
                        continue;
                    }
                    let to = match (inverse, h == at, t == at) {
                        (false, true, _) => t,
                        (true, _, true) => h,
                        _ => continue,
                    };
                    let mut s = seq.clone();
                    s.push((rel.clone(), *inverse));
                    next.push((to.clone(), s));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
