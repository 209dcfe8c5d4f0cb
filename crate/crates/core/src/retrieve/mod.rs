//! Evidence retrieval by relation sequences.
//!
//! For every claim entity a predictor proposes a relation set `R` and a hop
//! bound `n`. All ordered sequences over `R` of length `1..=n` are walked
//! from the entity. Walks ending at another claim entity are kept; when no
//! walk does, one realized walk is picked uniformly at random.

mod evidence;
mod predict;

pub use evidence::{parse_evidence, serialize_evidence, serialize_triples, SEP};
pub use predict::{ContextPredictor, LexicalPredictor, OraclePredictor};

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::claim::ClaimRecord;
use crate::kg::{EntityId, KnowledgeGraph};
use crate::path::{DirectedRelation, NamedPath, RelationStep};

/// Relation set and hop bound for one search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetrievalContext {
    /// Sorted, without duplicates.
    pub relations: Vec<RelationStep>,
    pub max_hops: usize,
}

impl RetrievalContext {
    pub fn new(relations: impl IntoIterator<Item = RelationStep>, max_hops: usize) -> Self {
        let relations: BTreeSet<RelationStep> = relations.into_iter().collect();
        RetrievalContext {
            relations: relations.into_iter().collect(),
            max_hops: max_hops.max(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub sequences: Vec<NamedPath>,
    pub truncated: bool,
}

/// Every ordered sequence over the context's relations, with repetition,
/// of length 1 to `max_hops`: shorter first, then lexicographic. Stops
/// after `cap` sequences.
pub fn enumerate_sequences(ctx: &RetrievalContext, cap: usize) -> Enumeration {
    let r = ctx.relations.len();
    let mut sequences = Vec::new();
    if r == 0 {
        return Enumeration {
            sequences,
            truncated: false,
        };
    }
    for len in 1..=ctx.max_hops {
        let mut digits = vec![0usize; len];
        loop {
            if sequences.len() == cap {
                return Enumeration {
                    sequences,
                    truncated: true,
                };
            }
            sequences.push(digits.iter().map(|&d| ctx.relations[d].clone()).collect());
            // odometer increment, last position fastest
            let mut pos = len;
            let exhausted = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < r {
                    break false;
                }
                digits[pos] = 0;
            };
            if exhausted {
                break;
            }
        }
    }
    Enumeration {
        sequences,
        truncated: false,
    }
}

/// A realized walk from a claim entity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidencePath {
    pub start: String,
    pub sequence: NamedPath,
    /// Graph triples in walk order; inverse steps appear in stored orientation.
    pub triples: Vec<[String; 3]>,
    pub end: String,
    pub reached_other_claim_entity: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetrieveConfig {
    pub sequence_cap: usize,
    /// Walk expansions allowed per entity.
    pub expansion_budget: u64,
}

impl Default for RetrieveConfig {
    fn default() -> Self {
        RetrieveConfig {
            sequence_cap: 10_000,
            expansion_budget: 100_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityReport {
    pub entity: String,
    pub relations: usize,
    pub max_hops: usize,
    pub sequences_tried: usize,
    pub sequences_truncated: bool,
    pub paths_realized: usize,
    pub paths_reaching: usize,
    pub budget_exceeded: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Retrieval {
    pub paths: Vec<EvidencePath>,
    pub entities: Vec<EntityReport>,
}

impl Retrieval {
    pub fn reached(&self) -> bool {
        self.paths.iter().any(|p| p.reached_other_claim_entity)
    }

    pub fn truncated(&self) -> bool {
        self.entities
            .iter()
            .any(|e| e.budget_exceeded || e.sequences_truncated)
    }
}

struct Walker<'a> {
    kg: &'a KnowledgeGraph,
    targets: &'a BTreeSet<EntityId>,
    start: EntityId,
    budget: u64,
    expansions: u64,
    exceeded: bool,
    realized: usize,
    reaching: Vec<Vec<(EntityId, DirectedRelation, EntityId)>>,
    sample: Option<Vec<(EntityId, DirectedRelation, EntityId)>>,
}

impl Walker<'_> {
    fn walk<R: Rng + ?Sized>(
        &mut self,
        at: EntityId,
        steps: &[DirectedRelation],
        prefix: &mut Vec<(EntityId, DirectedRelation, EntityId)>,
        rng: &mut R,
    ) {
        let Some((&step, rest)) = steps.split_first() else {
            self.realized += 1;
            if at != self.start && self.targets.contains(&at) {
                self.reaching.push(prefix.clone());
            } else if rng.gen_range(0..self.realized) == 0 {
                // reservoir over realized walks
                self.sample = Some(prefix.clone());
            }
            return;
        };
        let next: Vec<EntityId> = self.kg.step(at, step).collect();
        for n in next {
            if self.expansions >= self.budget {
                self.exceeded = true;
                return;
            }
            self.expansions += 1;
            prefix.push((at, step, n));
            self.walk(n, rest, prefix, rng);
            prefix.pop();
        }
    }
}

fn render(
    kg: &KnowledgeGraph,
    start: &str,
    walk: &[(EntityId, DirectedRelation, EntityId)],
    reached: bool,
) -> EvidencePath {
    let triples = walk
        .iter()
        .map(|&(from, step, to)| {
            let (h, t) = if step.inverse { (to, from) } else { (from, to) };
            [
                kg.entity_name(h).to_string(),
                kg.relation_name(step.relation).to_string(),
                kg.entity_name(t).to_string(),
            ]
        })
        .collect();
    EvidencePath {
        start: start.to_string(),
        sequence: walk.iter().map(|&(_, s, _)| kg.render_step(s)).collect(),
        triples,
        end: walk
            .last()
            .map(|&(_, _, e)| kg.entity_name(e).to_string())
            .unwrap_or_default(),
        reached_other_claim_entity: reached,
    }
}

/// Retrieves evidence paths for every claim entity of `claim`.
pub fn retrieve<R: Rng + ?Sized>(
    kg: &KnowledgeGraph,
    claim: &ClaimRecord,
    predictor: &dyn ContextPredictor,
    config: &RetrieveConfig,
    rng: &mut R,
) -> Retrieval {
    let names = claim.claim_entities();
    let targets: BTreeSet<EntityId> = names.iter().filter_map(|n| kg.entity_id(n)).collect();
    let mut out = Retrieval::default();
    for name in names {
        let ctx = predictor.predict(claim, name);
        let mut report = EntityReport {
            entity: name.to_string(),
            relations: ctx.relations.len(),
            max_hops: ctx.max_hops,
            ..EntityReport::default()
        };
        let Some(start) = kg.entity_id(name) else {
            out.entities.push(report);
            continue;
        };
        let seqs = enumerate_sequences(&ctx, config.sequence_cap);
        report.sequences_tried = seqs.sequences.len();
        report.sequences_truncated = seqs.truncated;
        let mut walker = Walker {
            kg,
            targets: &targets,
            start,
            budget: config.expansion_budget,
            expansions: 0,
            exceeded: false,
            realized: 0,
            reaching: Vec::new(),
            sample: None,
        };
        for seq in &seqs.sequences {
            let Some(path) = kg.resolve_path(seq) else {
                continue;
            };
            walker.walk(start, path.steps(), &mut Vec::new(), rng);
            if walker.exceeded {
                break;
            }
        }
        report.paths_realized = walker.realized;
        report.paths_reaching = walker.reaching.len();
        report.budget_exceeded = walker.exceeded;
        if walker.reaching.is_empty() {
            out.paths
                .extend(walker.sample.map(|w| render(kg, name, &w, false)));
        } else {
            out.paths
                .extend(walker.reaching.iter().map(|w| render(kg, name, w, true)));
        }
        out.entities.push(report);
    }
    out
}

#[cfg(test)]
mod tests;
