use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{SeedPair, Skip, SynthConfig};
use crate::claim::text::{
    article, capitalize_sentences, humanize, mentions, replace_mention, replace_mentions_with,
    surface_form,
};
use crate::claim::{
    build_pattern, ClaimEdge, ClaimNode, ClaimPattern, ClaimRecord, ExistenceSide, Label,
    ReasoningType, Style, TemplateCatalog,
};
use crate::error::Error;
use crate::kg::{EntityId, KnowledgeGraph};
use crate::verify::{Verifier, VerifyConfig};

type Outcome = std::result::Result<ClaimRecord, Skip>;

/// Chooses the type an entity stands for: the class of a multi-hop
/// variable and of entity substitution candidates.
pub trait TypePicker: Sync {
    fn pick(&self, kg: &KnowledgeGraph, entity: EntityId) -> Option<String>;
}

/// The entity's type with the fewest members; ties broken by name.
#[derive(Clone, Copy, Debug, Default)]
pub struct MostSpecificType;

impl TypePicker for MostSpecificType {
    fn pick(&self, kg: &KnowledgeGraph, entity: EntityId) -> Option<String> {
        kg.entity_types(entity)
            .into_iter()
            .min_by_key(|t| (kg.entities_of_type(t).len(), *t))
            .map(str::to_string)
    }
}

/// Accepts or rejects generated text relative to the record it came from.
pub trait TextFilter: Sync {
    fn keep(&self, source: &ClaimRecord, generated: &ClaimRecord) -> bool;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PassThrough;

impl TextFilter for PassThrough {
    fn keep(&self, _: &ClaimRecord, _: &ClaimRecord) -> bool {
        true
    }
}

/// Negated edges of a one- or two-edge pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    First,
    Second,
    Both,
}

impl Placement {
    fn edges(self, arity: usize) -> Option<&'static [usize]> {
        match (self, arity) {
            (Placement::First, 1 | 2) => Some(&[0]),
            (Placement::Second, 2) => Some(&[1]),
            (Placement::Both, 2) => Some(&[0, 1]),
            _ => None,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Placement::First => "neg1",
            Placement::Second => "neg2",
            Placement::Both => "neg12",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresupKind {
    /// Label preserved.
    Factive,
    /// Label inverted.
    NonFactive,
    /// Question form, label preserved; one-hop and existence claims only.
    Structural,
}

/// Graph, catalog and configuration shared by every generation step.
pub struct SynthContext<'a> {
    pub kg: &'a KnowledgeGraph,
    pub catalog: &'a TemplateCatalog,
    pub config: SynthConfig,
    verifier: Verifier<'a>,
    type_picker: Box<dyn TypePicker + 'a>,
    filter: Box<dyn TextFilter + 'a>,
}

fn entity_of(node: &ClaimNode) -> Option<&str> {
    node.grounded()
}

impl<'a> SynthContext<'a> {
    pub fn new(kg: &'a KnowledgeGraph, catalog: &'a TemplateCatalog, config: SynthConfig) -> Self {
        SynthContext {
            kg,
            catalog,
            config,
            verifier: Verifier::new(kg, VerifyConfig::default()),
            type_picker: Box::new(MostSpecificType),
            filter: Box::new(PassThrough),
        }
    }

    pub fn with_verify_config(mut self, config: VerifyConfig) -> Self {
        self.verifier = Verifier::new(self.kg, config);
        self
    }

    pub fn with_type_picker(mut self, picker: impl TypePicker + 'a) -> Self {
        self.type_picker = Box::new(picker);
        self
    }

    pub fn with_text_filter(mut self, filter: impl TextFilter + 'a) -> Self {
        self.filter = Box::new(filter);
        self
    }

    pub fn verifier(&self) -> &Verifier<'a> {
        &self.verifier
    }

    fn label(&self, pattern: &ClaimPattern) -> std::result::Result<Label, Skip> {
        match self.verifier.verify(pattern) {
            Ok(v) => Ok(v.label),
            Err(Error::Budget { .. } | Error::PatternTooLarge { .. }) => Err(Skip::SearchLimit),
            Err(_) => Err(Skip::SeedInvalid),
        }
    }

    fn derived(
        &self,
        source: &ClaimRecord,
        suffix: &str,
        text: String,
        pattern: ClaimPattern,
        style: Style,
        expect: Option<Label>,
    ) -> Outcome {
        let label = self.label(&pattern)?;
        if expect.is_some_and(|e| e != label) {
            return Err(Skip::LabelMismatch);
        }
        let id = format!("{}+{suffix}", source.id);
        let record = ClaimRecord::new(
            id,
            text,
            pattern,
            label,
            style,
            source.source_triples.clone(),
        );
        if !self.filter.keep(source, &record) {
            return Err(Skip::Filtered);
        }
        Ok(record)
    }

    /// Renders a pattern as plain sentences, one per edge. Variables read as
    /// "a(n) {type}" on first mention and "the {type}" after.
    pub fn render(&self, pattern: &ClaimPattern) -> String {
        if pattern.shape() == ReasoningType::Existence {
            let e = &pattern.edges()[0];
            let (side, entity) = match &pattern.nodes()[e.dst] {
                ClaimNode::Variable { .. } => (ExistenceSide::Head, &pattern.nodes()[e.src]),
                ClaimNode::Grounded(_) => (ExistenceSide::Tail, &pattern.nodes()[e.dst]),
            };
            if let Some(text) = entity_of(entity).and_then(|name| {
                self.catalog
                    .render_existence(side, name, &e.relation, e.negated)
            }) {
                return text;
            }
        }
        let mut seen = vec![false; pattern.nodes().len()];
        let mut phrase = |node: usize| -> String {
            match &pattern.nodes()[node] {
                ClaimNode::Grounded(name) => name.clone(),
                ClaimNode::Variable { type_name, .. } => {
                    let noun = type_name
                        .as_deref()
                        .map(humanize)
                        .unwrap_or_else(|| "something".into());
                    let first = !std::mem::replace(&mut seen[node], true);
                    match (type_name.is_some(), first) {
                        (false, _) => noun,
                        (true, true) => format!("{} {noun}", article(&noun)),
                        (true, false) => format!("the {noun}"),
                    }
                }
            }
        };
        let sentences: Vec<String> = pattern
            .edges()
            .iter()
            .map(|e| {
                let head = phrase(e.src);
                let tail = phrase(e.dst);
                self.catalog
                    .render_statement(&head, &e.relation, &tail, e.negated)
            })
            .collect();
        capitalize_sentences(&sentences.join(" "))
    }

    /// Written record of a seed: one-hop for one triple, conjunction otherwise.
    /// The seed text is kept when it mentions every entity; otherwise the
    /// triples are rendered from statement templates.
    pub fn base_record(&self, seed: &SeedPair) -> Outcome {
        let pattern = seed.pattern().map_err(|_| Skip::SeedInvalid)?;
        if self.label(&pattern)? != Label::Supported {
            return Err(Skip::SeedNotSupported);
        }
        let text = if pattern.grounded_entities().all(|e| mentions(&seed.text, e)) {
            seed.text.clone()
        } else {
            self.render(&pattern)
        };
        Ok(ClaimRecord::new(
            seed.id.clone(),
            text,
            pattern,
            Label::Supported,
            Style::Written,
            seed.triples.clone(),
        ))
    }

    /// Conjunction record of a multi-triple seed.
    pub fn make_conjunction(&self, seed: &SeedPair) -> Outcome {
        if seed.triples.len() < 2 {
            return Err(Skip::NotAConjunction);
        }
        self.base_record(seed)
    }

    fn source_entities(&self, record: &ClaimRecord) -> Vec<EntityId> {
        let names: BTreeSet<&str> = record
            .source_triples
            .iter()
            .flat_map(|[h, _, t]| [h.as_str(), t.as_str()])
            .chain(record.pattern.grounded_entities())
            .collect();
        names
            .into_iter()
            .filter_map(|n| self.kg.entity_id(n))
            .collect()
    }

    /// Replaces one grounded entity with a same-type entity farther than the
    /// configured radius from every entity of the source; Refuted.
    pub fn substitute_entity<R: Rng + ?Sized>(&self, record: &ClaimRecord, rng: &mut R) -> Outcome {
        let excluded = self
            .kg
            .within_hops_of(&self.source_entities(record), self.config.radius);
        let pattern = &record.pattern;
        let mut nodes: Vec<usize> = (0..pattern.nodes().len())
            .filter(|&i| !pattern.nodes()[i].is_variable())
            .collect();
        nodes.shuffle(rng);
        let mut reason = Skip::NoCandidate;
        let mut attempts = 0;
        for i in nodes {
            let name = entity_of(&pattern.nodes()[i]).expect("grounded");
            let Some(id) = self.kg.entity_id(name) else {
                continue;
            };
            if !mentions(&record.text, name) {
                reason = Skip::NoMention;
                continue;
            }
            let Some(type_name) = self.type_picker.pick(self.kg, id) else {
                reason = Skip::UntypedEntity;
                continue;
            };
            while attempts < self.config.max_attempts {
                attempts += 1;
                let Some(sub) = self
                    .kg
                    .sample_entity(&type_name, |c| !excluded.contains(&c), rng)
                else {
                    reason = Skip::NoCandidate;
                    break;
                };
                let sub_name = self.kg.entity_name(sub);
                let Ok(candidate) = pattern.replace_node(i, ClaimNode::entity(sub_name)) else {
                    continue;
                };
                if self.label(&candidate)? != Label::Refuted {
                    reason = Skip::LabelMismatch;
                    continue;
                }
                let text = replace_mention(&record.text, name, &surface_form(sub_name))
                    .ok_or(Skip::NoMention)?;
                return self.derived(
                    record,
                    "ent",
                    text,
                    candidate,
                    record.style,
                    Some(Label::Refuted),
                );
            }
        }
        Err(reason)
    }

    /// Swaps the relation of a one-hop record for one from another class of
    /// its substitution group whose triple is absent; Refuted.
    pub fn substitute_relation<R: Rng + ?Sized>(
        &self,
        record: &ClaimRecord,
        rng: &mut R,
    ) -> Outcome {
        let pattern = &record.pattern;
        if pattern.shape() != ReasoningType::OneHop || pattern.has_negation() {
            return Err(Skip::NotInGroup);
        }
        let e = &pattern.edges()[0];
        let mut subs = self
            .catalog
            .substitutes(&e.relation)
            .ok_or(Skip::NotInGroup)?;
        subs.shuffle(rng);
        let head = entity_of(&pattern.nodes()[e.src]).expect("grounded");
        let tail = entity_of(&pattern.nodes()[e.dst]).expect("grounded");
        let relation = subs
            .into_iter()
            .find(|r| !self.kg.contains_named(head, r, tail))
            .ok_or(Skip::SwappedTripleExists)?;
        let swapped = pattern.with_relation(0, relation);
        let text = self.render(&swapped);
        self.derived(
            record,
            "rel",
            text,
            swapped,
            record.style,
            Some(Label::Refuted),
        )
    }

    /// Existence claims from edge `edge` of a grounded record: the true
    /// {entity, relation} pair (Supported) and the same entity with another
    /// catalog relation it lacks (Refuted).
    pub fn make_existence<R: Rng + ?Sized>(
        &self,
        record: &ClaimRecord,
        edge: usize,
        rng: &mut R,
    ) -> Vec<Outcome> {
        let pattern = &record.pattern;
        let e = &pattern.edges()[edge];
        let Some(side) = self.catalog.existence_side(&e.relation) else {
            return vec![Err(Skip::NotCatalogRelation)];
        };
        let keep = match side {
            ExistenceSide::Head => e.src,
            ExistenceSide::Tail => e.dst,
        };
        let Some(entity) = entity_of(&pattern.nodes()[keep]) else {
            return vec![Err(Skip::NotCatalogRelation)];
        };
        let build = |relation: &str| -> ClaimPattern {
            let (nodes, edge) = match side {
                ExistenceSide::Head => (
                    vec![ClaimNode::entity(entity), ClaimNode::var(0)],
                    ClaimEdge::new(0, relation, 1),
                ),
                ExistenceSide::Tail => (
                    vec![ClaimNode::var(0), ClaimNode::entity(entity)],
                    ClaimEdge::new(0, relation, 1),
                ),
            };
            build_pattern(nodes, vec![edge], None).expect("existence shape")
        };
        let suffix = format!("ex{edge}");
        let supported = build(&e.relation);
        let mut out = vec![self.derived(
            record,
            &suffix,
            self.render(&supported),
            supported,
            Style::Written,
            Some(Label::Supported),
        )];

        let mut candidates: Vec<&str> = self
            .catalog
            .existence_relations(side)
            .into_iter()
            .filter(|r| *r != e.relation)
            .collect();
        candidates.shuffle(rng);
        let refuted = candidates
            .into_iter()
            .map(build)
            .find(|p| self.label(p) == Ok(Label::Refuted));
        out.push(match refuted {
            Some(p) => self.derived(
                record,
                &format!("{suffix}r"),
                self.render(&p),
                p,
                Style::Written,
                Some(Label::Refuted),
            ),
            None => Err(Skip::NoAbsentRelation),
        });
        out
    }

    /// Replaces an internal entity (two or more incident edges) of a
    /// grounded multi-edge record by a typed variable; Supported.
    pub fn make_multihop<R: Rng + ?Sized>(&self, record: &ClaimRecord, rng: &mut R) -> Outcome {
        let pattern = &record.pattern;
        if pattern.edges().len() < 2 || pattern.variable_count() > 0 || pattern.has_negation() {
            return Err(Skip::NotAConjunction);
        }
        let mut internal: Vec<usize> = (0..pattern.nodes().len())
            .filter(|&i| pattern.degree(i) >= 2)
            .collect();
        if internal.is_empty() {
            return Err(Skip::NoInternalNode);
        }
        internal.shuffle(rng);
        for i in internal {
            let name = entity_of(&pattern.nodes()[i]).expect("grounded");
            let Some(type_name) = self
                .kg
                .entity_id(name)
                .and_then(|id| self.type_picker.pick(self.kg, id))
            else {
                continue;
            };
            let candidate = pattern
                .replace_node(i, ClaimNode::typed_var(0, type_name.clone()))
                .map_err(|_| Skip::NoInternalNode)?;
            let noun = humanize(&type_name);
            let first = format!("{} {noun}", article(&noun));
            let text = replace_mentions_with(&record.text, name, |n| {
                if n == 0 {
                    first.clone()
                } else {
                    format!("the {noun}")
                }
            })
            .map(|t| capitalize_sentences(&t))
            .unwrap_or_else(|| self.render(&candidate));
            return self.derived(
                record,
                "mh",
                text,
                candidate,
                record.style,
                Some(Label::Supported),
            );
        }
        Err(Skip::NoInternalNode)
    }

    /// Negates the edges at `placement`; the label comes from the verifier.
    pub fn negate(&self, record: &ClaimRecord, placement: Placement) -> Outcome {
        let pattern = &record.pattern;
        if pattern.has_negation() {
            return Err(Skip::AlreadyNegated);
        }
        if record.style != Style::Written || pattern.is_inverted() {
            return Err(Skip::AlreadyWrapped);
        }
        let edges = placement
            .edges(pattern.edges().len())
            .ok_or(Skip::UnsupportedPlacement)?;
        let negated = pattern.with_negation(edges, true);
        let text = self.render(&negated);
        self.derived(
            record,
            placement.suffix(),
            text,
            negated,
            record.style,
            None,
        )
    }

    /// Wraps a written record in a presupposition frame.
    pub fn wrap_presupposition<R: Rng + ?Sized>(
        &self,
        record: &ClaimRecord,
        kind: PresupKind,
        rng: &mut R,
    ) -> Outcome {
        if record.style != Style::Written || record.pattern.is_inverted() {
            return Err(Skip::AlreadyWrapped);
        }
        let style = Style::ColloquialPresup;
        match kind {
            PresupKind::Factive => {
                let t = self
                    .catalog
                    .factive
                    .choose(rng)
                    .ok_or(Skip::NoStructuralTemplate)?;
                let text = TemplateCatalog::wrap(t, &record.text);
                self.derived(
                    record,
                    "fac",
                    text,
                    record.pattern.clone(),
                    style,
                    Some(record.label),
                )
            }
            PresupKind::NonFactive => {
                let t = self
                    .catalog
                    .non_factive
                    .choose(rng)
                    .ok_or(Skip::NoStructuralTemplate)?;
                let text = TemplateCatalog::wrap(t, &record.text);
                let inverted = record.pattern.clone().with_inverted(true);
                self.derived(
                    record,
                    "nonfac",
                    text,
                    inverted,
                    style,
                    Some(record.label.flip()),
                )
            }
            PresupKind::Structural => {
                let pattern = &record.pattern;
                if pattern.has_negation() {
                    return Err(Skip::NoStructuralTemplate);
                }
                let e = &pattern.edges()[0];
                let head = entity_of(&pattern.nodes()[e.src]);
                let tail = entity_of(&pattern.nodes()[e.dst]);
                let templates = match pattern.shape() {
                    ReasoningType::OneHop => self.catalog.structural_one_hop(&e.relation),
                    ReasoningType::Existence => {
                        let side = if tail.is_none() {
                            ExistenceSide::Head
                        } else {
                            ExistenceSide::Tail
                        };
                        self.catalog.structural_existence(side, &e.relation)
                    }
                    _ => None,
                }
                .ok_or(Skip::NoStructuralTemplate)?;
                let t = templates.choose(rng).ok_or(Skip::NoStructuralTemplate)?;
                let text = TemplateCatalog::fill_question(t, head, &e.relation, tail);
                self.derived(
                    record,
                    "struct",
                    text,
                    pattern.clone(),
                    style,
                    Some(record.label),
                )
            }
        }
    }
}
