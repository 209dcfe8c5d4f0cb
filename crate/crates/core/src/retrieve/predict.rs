use std::collections::BTreeSet;

use crate::claim::text::relation_tokens;
use crate::claim::ClaimRecord;
use crate::kg::KnowledgeGraph;
use crate::path::RelationStep;

use super::RetrievalContext;

/// Predicts the relation set and hop bound to search from one claim entity.
pub trait ContextPredictor: Sync {
    fn name(&self) -> &'static str;
    fn predict(&self, claim: &ClaimRecord, entity: &str) -> RetrievalContext;
}

/// Reads the gold evidence of the record: the steps of the entity's gold
/// paths, bounded by the longest of them.
#[derive(Clone, Copy, Debug, Default)]
pub struct OraclePredictor;

impl ContextPredictor for OraclePredictor {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn predict(&self, claim: &ClaimRecord, entity: &str) -> RetrievalContext {
        let paths = claim.entities.get(entity).map(Vec::as_slice).unwrap_or(&[]);
        let relations: Vec<RelationStep> = paths.iter().flatten().cloned().collect();
        let max_hops = paths.iter().map(Vec::len).max().unwrap_or(1).max(1);
        RetrievalContext::new(relations, max_hops)
    }
}

/// Relations whose camel-case tokens all occur as words of the claim text,
/// in both directions.
#[derive(Clone, Debug)]
pub struct LexicalPredictor {
    relations: Vec<(String, Vec<String>)>,
    pub max_hops: usize,
}

impl LexicalPredictor {
    pub fn new(kg: &KnowledgeGraph, max_hops: usize) -> Self {
        let type_relation = kg.type_relation().map(|r| kg.relation_name(r));
        let relations = kg
            .relation_names()
            .filter(|r| Some(*r) != type_relation)
            .map(|r| (r.to_string(), relation_tokens(r)))
            .filter(|(_, tokens)| !tokens.is_empty())
            .collect();
        LexicalPredictor {
            relations,
            max_hops: max_hops.max(1),
        }
    }
}

impl ContextPredictor for LexicalPredictor {
    fn name(&self) -> &'static str {
        "lexical"
    }

    fn predict(&self, claim: &ClaimRecord, _entity: &str) -> RetrievalContext {
        let words: BTreeSet<String> = relation_tokens(&claim.text).into_iter().collect();
        let relations: Vec<RelationStep> = self
            .relations
            .iter()
            .filter(|(_, tokens)| tokens.iter().all(|t| words.contains(t)))
            .flat_map(|(r, _)| {
                [
                    RelationStep::forward(r.clone()),
                    RelationStep::backward(r.clone()),
                ]
            })
            .collect();
        RetrievalContext::new(relations, self.max_hops)
    }
}
