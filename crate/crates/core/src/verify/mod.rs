//! Supported/Refuted decisions for claim patterns.
//!
//! Semantics by pattern shape:
//!
//! * all grounded (one-hop, conjunction): every edge must be satisfied; a
//!   plain edge by its triple existing, a negated edge by its triple being
//!   absent.
//! * existence (one edge, one variable endpoint): Supported iff some entity
//!   completes the triple; with the edge negated, iff none does.
//! * anything else with variables: Supported iff some assignment satisfies
//!   every edge. A negated edge `(u, r, v)` is satisfied when `u` has some
//!   `r`-tail other than `v` ([`NegationSemantics::DistinctWitness`]), or,
//!   under [`NegationSemantics::Absent`], when `(u, r, v)` is missing.
//!
//! An inverted pattern flips the final label.
//!
//! Variables are searched in index order, each over ascending entity
//! handles, so the witness is the lexicographically smallest assignment.

mod explain;

pub use explain::explain;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::claim::{ClaimNode, ClaimPattern, Label, ReasoningType};
use crate::error::{Error, Result};
use crate::kg::{EntityId, KnowledgeGraph, RelationId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegationSemantics {
    /// Negated `(u, r, v)`: some `(u, r, z)` exists with `z != v`.
    #[default]
    DistinctWitness,
    /// Negated `(u, r, v)`: the triple is absent.
    Absent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Require typed variables to carry their type in the graph.
    pub enforce_types: bool,
    pub negation: NegationSemantics,
    /// Maximum candidate bindings tried before giving up.
    pub search_budget: u64,
    pub max_edges: usize,
    pub max_variables: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            enforce_types: true,
            negation: NegationSemantics::DistinctWitness,
            search_budget: 1_000_000,
            max_edges: 16,
            max_variables: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub variable: usize,
    pub entity: EntityId,
    pub name: String,
}

/// Total map from variable index to entity, ordered by variable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Assignment {
    pub bindings: Vec<Binding>,
}

impl Assignment {
    pub fn get(&self, variable: usize) -> Option<EntityId> {
        self.bindings
            .iter()
            .find(|b| b.variable == variable)
            .map(|b| b.entity)
    }

    pub fn entities(&self) -> Vec<EntityId> {
        self.bindings.iter().map(|b| b.entity).collect()
    }
}

/// One pattern edge as evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedEdge {
    pub head: String,
    pub relation: String,
    pub tail: String,
    pub negated: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub label: Label,
    pub witness: Option<Assignment>,
    pub checked_edges: Vec<CheckedEdge>,
    pub inverted: bool,
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    /// Grounded node; `None` when the name is unknown to the graph.
    Entity(Option<EntityId>),
    Var(usize),
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    src: usize,
    relation: Option<RelationId>,
    dst: usize,
    negated: bool,
}

/// Type requirement of a variable.
#[derive(Clone, Copy, Debug)]
enum TypeReq {
    Any,
    /// Type name unknown to the graph: nothing qualifies.
    Impossible,
    Member(EntityId),
}

struct Resolved {
    slots: Vec<Slot>,
    edges: Vec<Edge>,
    var_types: Vec<TypeReq>,
}

fn resolve(kg: &KnowledgeGraph, pattern: &ClaimPattern, enforce_types: bool) -> Resolved {
    let mut var_types = vec![TypeReq::Any; pattern.variable_count()];
    let slots = pattern
        .nodes()
        .iter()
        .map(|n| match n {
            ClaimNode::Grounded(name) => {
                let id = kg.entity_id(name);
                if id.is_none() {
                    debug!("entity {name:?} not in graph");
                }
                Slot::Entity(id)
            }
            ClaimNode::Variable { index, type_name } => {
                if let (true, Some(t)) = (enforce_types, type_name) {
                    var_types[*index] = match (kg.type_relation(), kg.entity_id(t)) {
                        (Some(_), Some(t)) => TypeReq::Member(t),
                        _ => TypeReq::Impossible,
                    };
                }
                Slot::Var(*index)
            }
        })
        .collect();
    let edges = pattern
        .edges()
        .iter()
        .map(|e| {
            let relation = kg.relation_id(&e.relation);
            if relation.is_none() {
                debug!("relation {:?} not in graph", e.relation);
            }
            Edge {
                src: e.src,
                relation,
                dst: e.dst,
                negated: e.negated,
            }
        })
        .collect();
    Resolved {
        slots,
        edges,
        var_types,
    }
}

fn intersect(a: &[EntityId], b: &[EntityId]) -> Vec<EntityId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Evaluates claim patterns against one graph.
pub struct Verifier<'g> {
    kg: &'g KnowledgeGraph,
    config: VerifyConfig,
}

impl<'g> Verifier<'g> {
    pub fn new(kg: &'g KnowledgeGraph, config: VerifyConfig) -> Self {
        Verifier { kg, config }
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.config
    }

    fn check_limits(&self, pattern: &ClaimPattern) -> Result<()> {
        if pattern.edges().len() > self.config.max_edges {
            return Err(Error::PatternTooLarge {
                what: "edges",
                found: pattern.edges().len(),
                limit: self.config.max_edges,
            });
        }
        if pattern.variable_count() > self.config.max_variables {
            return Err(Error::PatternTooLarge {
                what: "variables",
                found: pattern.variable_count(),
                limit: self.config.max_variables,
            });
        }
        Ok(())
    }

    pub fn verify(&self, pattern: &ClaimPattern) -> Result<Verdict> {
        self.check_limits(pattern)?;
        let res = resolve(self.kg, pattern, self.config.enforce_types);
        let (holds, witness, distinct) = if pattern.variable_count() == 0 {
            let holds = res.edges.iter().all(|e| {
                self.edge_holds(
                    e,
                    self.slot_value(&res, e.src, &[]),
                    self.slot_value(&res, e.dst, &[]),
                    false,
                )
            });
            (holds, None, false)
        } else if pattern.shape() == ReasoningType::Existence {
            let found = Search::new(self, &res, false, true).run()?;
            let negated = res.edges[0].negated;
            (found.is_some() != negated, found, false)
        } else {
            let distinct = self.config.negation == NegationSemantics::DistinctWitness;
            let found = Search::new(self, &res, distinct, false).run()?;
            (found.is_some(), found, distinct)
        };
        let checked_edges = self.checked_edges(pattern, &res, witness.as_deref(), distinct);
        let witness = witness.map(|values| self.assignment(&values));
        Ok(Verdict {
            label: Label::from_bool(holds != pattern.is_inverted()),
            witness,
            checked_edges,
            inverted: pattern.is_inverted(),
        })
    }

    /// Smallest satisfying assignment of a pattern with variables.
    ///
    /// Existence patterns are searched for a completing entity regardless of
    /// their negation flag.
    pub fn verify_existential(&self, pattern: &ClaimPattern) -> Result<Option<Assignment>> {
        self.check_limits(pattern)?;
        if pattern.variable_count() == 0 {
            return Err(Error::Pattern("pattern has no variables".into()));
        }
        let res = resolve(self.kg, pattern, self.config.enforce_types);
        let found = if pattern.shape() == ReasoningType::Existence {
            Search::new(self, &res, false, true).run()?
        } else {
            let distinct = self.config.negation == NegationSemantics::DistinctWitness;
            Search::new(self, &res, distinct, false).run()?
        };
        Ok(found.map(|values| self.assignment(&values)))
    }

    fn assignment(&self, values: &[EntityId]) -> Assignment {
        Assignment {
            bindings: values
                .iter()
                .enumerate()
                .map(|(variable, &entity)| Binding {
                    variable,
                    entity,
                    name: self.kg.entity_name(entity).to_string(),
                })
                .collect(),
        }
    }

    /// Value of a node: `Some(Some(id))` bound, `Some(None)` unknown grounded
    /// name, `None` unassigned variable.
    fn slot_value(
        &self,
        res: &Resolved,
        node: usize,
        values: &[EntityId],
    ) -> Option<Option<EntityId>> {
        match res.slots[node] {
            Slot::Entity(id) => Some(id),
            Slot::Var(v) => values.get(v).map(|&e| Some(e)),
        }
    }

    fn edge_holds(
        &self,
        e: &Edge,
        src: Option<Option<EntityId>>,
        dst: Option<Option<EntityId>>,
        distinct: bool,
    ) -> bool {
        let (Some(src), Some(dst)) = (src, dst) else {
            return false;
        };
        let exists = match (src, e.relation, dst) {
            (Some(s), Some(r), Some(d)) => self.kg.triple_exists(s, r, d),
            _ => false,
        };
        if !e.negated {
            exists
        } else if !distinct {
            !exists
        } else {
            match (src, e.relation) {
                (Some(s), Some(r)) => self.kg.tails(s, r).any(|z| Some(z) != dst),
                _ => false,
            }
        }
    }

    fn checked_edges(
        &self,
        pattern: &ClaimPattern,
        res: &Resolved,
        values: Option<&[EntityId]>,
        distinct: bool,
    ) -> Vec<CheckedEdge> {
        let values = values.unwrap_or(&[]);
        let name = |node: usize| -> String {
            match (&pattern.nodes()[node], res.slots[node]) {
                (ClaimNode::Grounded(n), _) => n.clone(),
                (_, Slot::Var(v)) => values
                    .get(v)
                    .map(|&e| self.kg.entity_name(e).to_string())
                    .unwrap_or_else(|| format!("?x{v}")),
                (_, Slot::Entity(_)) => unreachable!("variable node resolved as entity"),
            }
        };
        let existence = pattern.shape() == ReasoningType::Existence;
        pattern
            .edges()
            .iter()
            .zip(&res.edges)
            .map(|(pe, e)| {
                let src = self.slot_value(res, e.src, values);
                let dst = self.slot_value(res, e.dst, values);
                let holds = if existence {
                    let positive = Edge {
                        negated: false,
                        ..*e
                    };
                    let found = self.edge_holds(&positive, src, dst, false);
                    found != e.negated
                } else {
                    self.edge_holds(e, src, dst, distinct)
                };
                CheckedEdge {
                    head: name(e.src),
                    relation: pe.relation.clone(),
                    tail: name(e.dst),
                    negated: e.negated,
                    holds,
                }
            })
            .collect()
    }
}

/// Backtracking search over variable bindings.
struct Search<'a, 'g> {
    verifier: &'a Verifier<'g>,
    res: &'a Resolved,
    distinct: bool,
    /// Treat every edge as positive (existence claims).
    positive_only: bool,
    /// Edges whose highest variable is the key; grounded-only edges at `None`.
    closing: Vec<Vec<usize>>,
    grounded_edges: Vec<usize>,
    values: Vec<EntityId>,
    explored: u64,
}

impl<'a, 'g> Search<'a, 'g> {
    fn new(
        verifier: &'a Verifier<'g>,
        res: &'a Resolved,
        distinct: bool,
        positive_only: bool,
    ) -> Self {
        let n_vars = res.var_types.len();
        let mut closing = vec![Vec::new(); n_vars];
        let mut grounded_edges = Vec::new();
        let var_of = |node: usize| match res.slots[node] {
            Slot::Var(v) => Some(v),
            Slot::Entity(_) => None,
        };
        for (i, e) in res.edges.iter().enumerate() {
            match var_of(e.src).max(var_of(e.dst)) {
                Some(v) => closing[v].push(i),
                None => grounded_edges.push(i),
            }
        }
        Search {
            verifier,
            res,
            distinct,
            positive_only,
            closing,
            grounded_edges,
            values: Vec::with_capacity(n_vars),
            explored: 0,
        }
    }

    fn edge(&self, i: usize) -> Edge {
        let e = self.res.edges[i];
        if self.positive_only {
            Edge {
                negated: false,
                ..e
            }
        } else {
            e
        }
    }

    fn holds(&self, i: usize) -> bool {
        let e = self.edge(i);
        let v = self.verifier;
        v.edge_holds(
            &e,
            v.slot_value(self.res, e.src, &self.values),
            v.slot_value(self.res, e.dst, &self.values),
            self.distinct,
        )
    }

    fn run(mut self) -> Result<Option<Vec<EntityId>>> {
        if !self.grounded_edges.iter().all(|&i| self.holds(i)) {
            return Ok(None);
        }
        if self.assign(0)? {
            Ok(Some(self.values))
        } else {
            Ok(None)
        }
    }

    /// Candidate entities for variable `var` given the bindings so far.
    fn domain(&self, var: usize) -> Vec<EntityId> {
        let kg = self.verifier.kg;
        let mut domain: Option<Vec<EntityId>> = None;
        let narrow = |domain: &mut Option<Vec<EntityId>>, list: Vec<EntityId>| {
            *domain = Some(match domain.take() {
                None => list,
                Some(d) => intersect(&d, &list),
            });
        };
        let is_var = |node: usize| matches!(self.res.slots[node], Slot::Var(v) if v == var);

        // Positive edges anchored at a known node.
        let mut loose = Vec::new();
        for i in 0..self.res.edges.len() {
            let e = self.edge(i);
            if e.negated {
                continue;
            }
            let (var_is_src, other) = if is_var(e.src) {
                (true, e.dst)
            } else if is_var(e.dst) {
                (false, e.src)
            } else {
                continue;
            };
            let Some(r) = e.relation else {
                return Vec::new();
            };
            match self.verifier.slot_value(self.res, other, &self.values) {
                Some(None) => return Vec::new(),
                Some(Some(o)) => {
                    let mut list: Vec<EntityId> = if var_is_src {
                        kg.heads(r, o).collect()
                    } else {
                        kg.tails(o, r).collect()
                    };
                    list.dedup();
                    narrow(&mut domain, list);
                }
                None => loose.push((var_is_src, r)),
            }
        }
        if domain.is_none() {
            for (var_is_src, r) in loose {
                let list = if var_is_src {
                    kg.heads_of_relation(r)
                } else {
                    kg.tails_of_relation(r)
                };
                narrow(&mut domain, list.to_vec());
            }
        }
        if domain.is_none() && self.distinct {
            for i in 0..self.res.edges.len() {
                let e = self.edge(i);
                if e.negated && is_var(e.src) {
                    let Some(r) = e.relation else {
                        return Vec::new();
                    };
                    narrow(&mut domain, kg.heads_of_relation(r).to_vec());
                }
            }
        }
        domain.unwrap_or_else(|| kg.entities().collect())
    }

    fn type_ok(&self, var: usize, e: EntityId) -> bool {
        match self.res.var_types[var] {
            TypeReq::Any => true,
            TypeReq::Impossible => false,
            TypeReq::Member(t) => {
                let kg = self.verifier.kg;
                kg.type_relation()
                    .is_some_and(|tr| kg.triple_exists(e, tr, t))
            }
        }
    }

    fn assign(&mut self, var: usize) -> Result<bool> {
        if var == self.res.var_types.len() {
            return Ok(true);
        }
        if matches!(self.res.var_types[var], TypeReq::Impossible) {
            return Ok(false);
        }
        for candidate in self.domain(var) {
            self.explored += 1;
            if self.explored > self.verifier.config.search_budget {
                return Err(Error::Budget {
                    budget: self.verifier.config.search_budget,
                });
            }
            if !self.type_ok(var, candidate) {
                continue;
            }
            self.values.push(candidate);
            if self.closing[var].iter().all(|&i| self.holds(i)) && self.assign(var + 1)? {
                return Ok(true);
            }
            self.values.pop();
        }
        Ok(false)
    }
}

/// Verifies with the default configuration.
pub fn verify(kg: &KnowledgeGraph, pattern: &ClaimPattern) -> Result<Verdict> {
    Verifier::new(kg, VerifyConfig::default()).verify(pattern)
}
