//! In-memory triple store.
//!
//! Triples are interned into dense `u32` handles and stored twice, once
//! sorted by `(head, relation, tail)` and once by `(tail, relation, head)`,
//! each with a per-entity offset table. Existence checks and one-step
//! traversals are binary searches inside an entity's slice. The graph is
//! frozen after [`GraphBuilder::finish`] and can be shared across threads.

mod ingest;
mod snapshot;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::Rng;

use crate::path::{DirectedRelation, RelationPath, RelationStep};

pub use ingest::{ingest_str, ingest_triples, TripleFormat};
pub use snapshot::SNAPSHOT_MAGIC;

/// Default name of the relation that links an entity to its type.
pub const DEFAULT_TYPE_RELATION: &str = "rdf:type";
/// Default hard cap for hop-bounded traversal.
pub const DEFAULT_MAX_HOPS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntityId(pub(crate) u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationId(pub(crate) u32);

impl EntityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl RelationId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// A resolved triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub head: EntityId,
    pub relation: RelationId,
    pub tail: EntityId,
}

/// Bijective string table.
#[derive(Clone, Debug, Default)]
pub(crate) struct Interner {
    names: Vec<Box<str>>,
    index: HashMap<Box<str>, u32>,
}

impl Interner {
    pub(crate) fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = u32::try_from(self.names.len()).expect("more than u32::MAX symbols");
        self.names.push(name.into());
        self.index.insert(name.into(), id);
        id
    }

    pub(crate) fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub(crate) fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub(crate) fn len(&self) -> usize {
        self.names.len()
    }

    pub(crate) fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| &**s)
    }
}

#[derive(Clone, Debug)]
pub struct GraphConfig {
    /// Relation whose tails name the head's types.
    pub type_relation: String,
    /// Upper bound applied to every hop-bounded query.
    pub max_hops: usize,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            type_relation: DEFAULT_TYPE_RELATION.to_string(),
            max_hops: DEFAULT_MAX_HOPS,
        }
    }
}

/// Accumulates raw triples; duplicates are dropped at [`finish`](Self::finish).
#[derive(Debug, Default)]
pub struct GraphBuilder {
    entities: Interner,
    relations: Interner,
    triples: Vec<(u32, u32, u32)>,
    config: GraphConfig,
}

impl GraphBuilder {
    pub fn new(config: GraphConfig) -> Self {
        GraphBuilder {
            config,
            ..Default::default()
        }
    }

    pub fn add(&mut self, head: &str, relation: &str, tail: &str) {
        let h = self.entities.intern(head);
        let r = self.relations.intern(relation);
        let t = self.entities.intern(tail);
        self.triples.push((h, r, t));
    }

    /// Interns an entity that may not take part in any triple.
    pub fn add_entity(&mut self, name: &str) -> EntityId {
        EntityId(self.entities.intern(name))
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn finish(self) -> KnowledgeGraph {
        KnowledgeGraph::from_parts(self.entities, self.relations, self.triples, self.config)
    }
}

/// Frozen, doubly indexed triple store.
#[derive(Debug)]
pub struct KnowledgeGraph {
    entities: Interner,
    relations: Interner,
    config: GraphConfig,
    type_relation: Option<RelationId>,
    out_offsets: Vec<u32>,
    out_edges: Vec<(RelationId, EntityId)>,
    in_offsets: Vec<u32>,
    in_edges: Vec<(RelationId, EntityId)>,
    relation_heads: Vec<Vec<EntityId>>,
    relation_tails: Vec<Vec<EntityId>>,
}

fn offsets(keys: impl Iterator<Item = u32>, n: usize) -> Vec<u32> {
    let mut offsets = vec![0u32; n + 1];
    for k in keys {
        offsets[k as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    offsets
}

impl KnowledgeGraph {
    fn from_parts(
        entities: Interner,
        relations: Interner,
        mut triples: Vec<(u32, u32, u32)>,
        config: GraphConfig,
    ) -> Self {
        triples.sort_unstable();
        triples.dedup();

        let n = entities.len();
        let out_offsets = offsets(triples.iter().map(|t| t.0), n);
        let out_edges = triples
            .iter()
            .map(|&(_, r, t)| (RelationId(r), EntityId(t)))
            .collect();

        let mut relation_heads = vec![Vec::new(); relations.len()];
        let mut relation_tails = vec![Vec::new(); relations.len()];
        for &(h, r, t) in &triples {
            relation_heads[r as usize].push(EntityId(h));
            relation_tails[r as usize].push(EntityId(t));
        }
        for list in relation_heads.iter_mut().chain(relation_tails.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }

        let mut reversed: Vec<(u32, u32, u32)> =
            triples.into_iter().map(|(h, r, t)| (t, r, h)).collect();
        reversed.sort_unstable();
        let in_offsets = offsets(reversed.iter().map(|t| t.0), n);
        let in_edges = reversed
            .into_iter()
            .map(|(_, r, h)| (RelationId(r), EntityId(h)))
            .collect();

        let type_relation = relations.get(&config.type_relation).map(RelationId);
        KnowledgeGraph {
            entities,
            relations,
            config,
            type_relation,
            out_offsets,
            out_edges,
            in_offsets,
            in_edges,
            relation_heads,
            relation_tails,
        }
    }

    pub fn empty() -> Self {
        GraphBuilder::default().finish()
    }

    pub fn config(&self) -> &GraphConfig {
        &self.config
    }

    pub fn triple_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn entity_id(&self, name: &str) -> Option<EntityId> {
        self.entities.get(name).map(EntityId)
    }

    pub fn relation_id(&self, name: &str) -> Option<RelationId> {
        self.relations.get(name).map(RelationId)
    }

    pub fn entity_name(&self, id: EntityId) -> &str {
        self.entities.name(id.0)
    }

    pub fn relation_name(&self, id: RelationId) -> &str {
        self.relations.name(id.0)
    }

    pub fn type_relation(&self) -> Option<RelationId> {
        self.type_relation
    }

    pub fn entities(&self) -> impl Iterator<Item = EntityId> + '_ {
        (0..self.entities.len() as u32).map(EntityId)
    }

    pub fn relations(&self) -> impl Iterator<Item = RelationId> + '_ {
        (0..self.relations.len() as u32).map(RelationId)
    }

    pub fn relation_names(&self) -> impl Iterator<Item = &str> {
        self.relations.names()
    }

    /// All triples in `(head, relation, tail)` handle order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        (0..self.entities.len()).flat_map(move |h| {
            let head = EntityId(h as u32);
            self.out_slice(head)
                .iter()
                .map(move |&(relation, tail)| Triple {
                    head,
                    relation,
                    tail,
                })
        })
    }

    fn out_slice(&self, e: EntityId) -> &[(RelationId, EntityId)] {
        let i = e.index();
        if i + 1 >= self.out_offsets.len() {
            return &[];
        }
        &self.out_edges[self.out_offsets[i] as usize..self.out_offsets[i + 1] as usize]
    }

    fn in_slice(&self, e: EntityId) -> &[(RelationId, EntityId)] {
        let i = e.index();
        if i + 1 >= self.in_offsets.len() {
            return &[];
        }
        &self.in_edges[self.in_offsets[i] as usize..self.in_offsets[i + 1] as usize]
    }

    fn relation_range(
        edges: &[(RelationId, EntityId)],
        r: RelationId,
    ) -> &[(RelationId, EntityId)] {
        let lo = edges.partition_point(|&(rel, _)| rel < r);
        let hi = lo + edges[lo..].partition_point(|&(rel, _)| rel == r);
        &edges[lo..hi]
    }

    pub fn triple_exists(&self, head: EntityId, relation: RelationId, tail: EntityId) -> bool {
        self.out_slice(head)
            .binary_search(&(relation, tail))
            .is_ok()
    }

    /// Confirms a triple through the backward index only.
    pub fn triple_exists_backward(
        &self,
        head: EntityId,
        relation: RelationId,
        tail: EntityId,
    ) -> bool {
        self.in_slice(tail).binary_search(&(relation, head)).is_ok()
    }

    /// Tails of `(head, relation, _)`, ascending.
    pub fn tails(
        &self,
        head: EntityId,
        relation: RelationId,
    ) -> impl Iterator<Item = EntityId> + '_ {
        Self::relation_range(self.out_slice(head), relation)
            .iter()
            .map(|&(_, t)| t)
    }

    /// Heads of `(_, relation, tail)`, ascending.
    pub fn heads(
        &self,
        relation: RelationId,
        tail: EntityId,
    ) -> impl Iterator<Item = EntityId> + '_ {
        Self::relation_range(self.in_slice(tail), relation)
            .iter()
            .map(|&(_, h)| h)
    }

    pub fn has_tail_for(&self, head: EntityId, relation: RelationId) -> bool {
        !Self::relation_range(self.out_slice(head), relation).is_empty()
    }

    pub fn has_head_for(&self, relation: RelationId, tail: EntityId) -> bool {
        !Self::relation_range(self.in_slice(tail), relation).is_empty()
    }

    /// Entities appearing as head of at least one `relation` triple.
    pub fn heads_of_relation(&self, relation: RelationId) -> &[EntityId] {
        self.relation_heads
            .get(relation.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Entities appearing as tail of at least one `relation` triple.
    pub fn tails_of_relation(&self, relation: RelationId) -> &[EntityId] {
        self.relation_tails
            .get(relation.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Outgoing `(relation, tail)` pairs of an entity.
    pub fn outgoing(&self, head: EntityId) -> &[(RelationId, EntityId)] {
        self.out_slice(head)
    }

    /// Incoming `(relation, head)` pairs of an entity.
    pub fn incoming(&self, tail: EntityId) -> &[(RelationId, EntityId)] {
        self.in_slice(tail)
    }

    /// One traversal step; inverse steps read the backward index.
    pub fn step(
        &self,
        from: EntityId,
        step: DirectedRelation,
    ) -> impl Iterator<Item = EntityId> + '_ {
        let edges = if step.inverse {
            self.in_slice(from)
        } else {
            self.out_slice(from)
        };
        Self::relation_range(edges, step.relation)
            .iter()
            .map(|&(_, e)| e)
    }

    /// Entities reached from `start` by consuming `path` left to right, ascending.
    pub fn follow_path(&self, start: EntityId, path: &RelationPath) -> Vec<EntityId> {
        let mut frontier = vec![start];
        for &step in path.steps() {
            let mut next: Vec<EntityId> =
                frontier.iter().flat_map(|&e| self.step(e, step)).collect();
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                return next;
            }
            frontier = next;
        }
        frontier
    }

    /// Resolves named steps; `None` if any relation is unknown to this graph.
    pub fn resolve_path(&self, steps: &[RelationStep]) -> Option<RelationPath> {
        steps
            .iter()
            .map(|s| {
                self.relation_id(&s.relation)
                    .map(|relation| DirectedRelation {
                        relation,
                        inverse: s.inverse,
                    })
            })
            .collect::<Option<Vec<_>>>()
            .map(RelationPath)
    }

    pub fn render_step(&self, step: DirectedRelation) -> RelationStep {
        RelationStep {
            relation: self.relation_name(step.relation).to_string(),
            inverse: step.inverse,
        }
    }

    fn is_type_edge(&self, r: RelationId) -> bool {
        Some(r) == self.type_relation
    }

    /// Undirected neighbours, excluding type-relation edges.
    fn neighbours(&self, e: EntityId) -> impl Iterator<Item = EntityId> + '_ {
        self.out_slice(e)
            .iter()
            .chain(self.in_slice(e))
            .filter(move |(r, _)| !self.is_type_edge(*r))
            .map(|&(_, n)| n)
    }

    /// Breadth-first expansion from several sources at once, bounded by `k`
    /// (clamped to the configured hop cap). Type edges are not traversed.
    pub fn within_hops_of(&self, sources: &[EntityId], k: usize) -> HashSet<EntityId> {
        let k = k.min(self.config.max_hops);
        let mut seen: HashSet<EntityId> = sources.iter().copied().collect();
        let mut frontier: Vec<EntityId> = seen.iter().copied().collect();
        for _ in 0..k {
            let mut next = Vec::new();
            for &e in &frontier {
                for n in self.neighbours(e) {
                    if seen.insert(n) {
                        next.push(n);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        seen
    }

    /// Entities at undirected hop distance at most `k` from `e`, `e` included.
    pub fn within_hops(&self, e: EntityId, k: usize) -> HashSet<EntityId> {
        self.within_hops_of(&[e], k)
    }

    /// Undirected shortest-path length when it does not exceed `cap`.
    pub fn hop_distance(&self, a: EntityId, b: EntityId, cap: usize) -> Option<usize> {
        if a == b {
            return Some(0);
        }
        let cap = cap.min(self.config.max_hops);
        let mut dist: HashMap<EntityId, usize> = HashMap::from([(a, 0)]);
        let mut queue = VecDeque::from([a]);
        while let Some(e) = queue.pop_front() {
            let d = dist[&e];
            if d == cap {
                continue;
            }
            for n in self.neighbours(e) {
                if n == b {
                    return Some(d + 1);
                }
                if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(n) {
                    slot.insert(d + 1);
                    queue.push_back(n);
                }
            }
        }
        None
    }

    /// Type names of `e`, sorted by name.
    pub fn entity_types(&self, e: EntityId) -> Vec<&str> {
        let Some(tr) = self.type_relation else {
            return Vec::new();
        };
        let mut names: Vec<&str> = self.tails(e, tr).map(|t| self.entity_name(t)).collect();
        names.sort_unstable();
        names
    }

    pub fn has_type(&self, e: EntityId, type_name: &str) -> bool {
        match (self.type_relation, self.entity_id(type_name)) {
            (Some(tr), Some(t)) => self.triple_exists(e, tr, t),
            _ => false,
        }
    }

    /// Members of a type in ascending handle order.
    pub fn entities_of_type(&self, type_name: &str) -> Vec<EntityId> {
        match (self.type_relation, self.entity_id(type_name)) {
            (Some(tr), Some(t)) => self.heads(tr, t).collect(),
            _ => Vec::new(),
        }
    }

    /// Uniformly random member of `type_name` accepted by `keep`.
    pub fn sample_entity<R, F>(&self, type_name: &str, mut keep: F, rng: &mut R) -> Option<EntityId>
    where
        R: Rng + ?Sized,
        F: FnMut(EntityId) -> bool,
    {
        let members = self.entities_of_type(type_name);
        if members.is_empty() {
            return None;
        }
        // Rejection sampling keeps the draw uniform over accepted members;
        // fall back to an exact filter when acceptance is rare.
        for _ in 0..32 {
            let e = members[rng.gen_range(0..members.len())];
            if keep(e) {
                return Some(e);
            }
        }
        let accepted: Vec<EntityId> = members.into_iter().filter(|&e| keep(e)).collect();
        if accepted.is_empty() {
            None
        } else {
            Some(accepted[rng.gen_range(0..accepted.len())])
        }
    }

    /// Name form of a resolved triple.
    pub fn triple_names(&self, t: Triple) -> (&str, &str, &str) {
        (
            self.entity_name(t.head),
            self.relation_name(t.relation),
            self.entity_name(t.tail),
        )
    }

    /// Resolves a named triple when every part is known.
    pub fn resolve_triple(&self, head: &str, relation: &str, tail: &str) -> Option<Triple> {
        Some(Triple {
            head: self.entity_id(head)?,
            relation: self.relation_id(relation)?,
            tail: self.entity_id(tail)?,
        })
    }

    pub fn contains_named(&self, head: &str, relation: &str, tail: &str) -> bool {
        self.resolve_triple(head, relation, tail)
            .is_some_and(|t| self.triple_exists(t.head, t.relation, t.tail))
    }
}
