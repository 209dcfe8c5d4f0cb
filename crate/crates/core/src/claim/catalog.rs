//! Template catalog: existence templates, presupposition frames, structural
//! question templates, relation-substitution groups and plain statement
//! templates used to render claims about a single triple.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::text::{embed_claim, fill, humanize, lower_leading_article, placeholders, surface_form};
use crate::error::{Error, Result};

const DEFAULT_CATALOG: &str = include_str!("../../assets/catalog.json");

/// Which endpoint of a triple an existence claim keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExistenceSide {
    /// `{head} had a(an) {relation}.`, tail unspecified.
    Head,
    /// `{tail} was a {relation}.`, head unspecified.
    Tail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarTemplates {
    pub relations: Vec<String>,
    pub positive: String,
    pub negative: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExistenceTemplates {
    pub head: Vec<PolarTemplates>,
    pub tail: Vec<PolarTemplates>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuestionTemplates {
    pub relations: Vec<String>,
    pub templates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuralTemplates {
    pub one_hop: Vec<QuestionTemplates>,
    pub existence_head: Vec<QuestionTemplates>,
    pub existence_tail: Vec<QuestionTemplates>,
}

/// Relations sharing head and tail entity types. Relations in the same class
/// are synonyms; substitution moves to a different class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationGroup {
    pub head_type: String,
    pub tail_type: String,
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatementTemplate {
    pub positive: String,
    pub negative: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemplateCatalog {
    pub existence: ExistenceTemplates,
    pub factive: Vec<String>,
    pub non_factive: Vec<String>,
    pub structural: StructuralTemplates,
    pub relation_groups: Vec<RelationGroup>,
    pub statements: Vec<PolarTemplates>,
    pub fallback_statement: StatementTemplate,
}

fn check_slots(template: &str, required: &[&str], allowed: &[&str]) -> Result<()> {
    let found = placeholders(template);
    for r in required {
        if !found.contains(r) {
            return Err(Error::Catalog(format!("{template:?} lacks {{{r}}}")));
        }
    }
    for f in &found {
        if !allowed.contains(f) {
            return Err(Error::Catalog(format!(
                "{template:?} has unexpected {{{f}}}"
            )));
        }
    }
    Ok(())
}

fn lookup<'a>(entries: &'a [QuestionTemplates], relation: &str) -> Option<&'a [String]> {
    entries
        .iter()
        .find(|e| e.relations.iter().any(|r| r == relation))
        .map(|e| e.templates.as_slice())
}

impl Default for TemplateCatalog {
    fn default() -> Self {
        TemplateCatalog::from_json(DEFAULT_CATALOG).expect("bundled catalog is valid")
    }
}

impl TemplateCatalog {
    pub fn from_json(text: &str) -> Result<Self> {
        let catalog: TemplateCatalog = serde_json::from_str(text)?;
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Checks slot usage of every template and that groups are disjoint.
    pub fn validate(&self) -> Result<()> {
        const HR: &[&str] = &["head", "relation"];
        const TR: &[&str] = &["tail", "relation"];
        for e in &self.existence.head {
            check_slots(&e.positive, HR, HR)?;
            check_slots(&e.negative, HR, HR)?;
        }
        for e in &self.existence.tail {
            check_slots(&e.positive, TR, TR)?;
            check_slots(&e.negative, TR, TR)?;
        }
        for t in self.factive.iter().chain(&self.non_factive) {
            check_slots(t, &["claim"], &["claim"])?;
        }
        let all = &["head", "relation", "tail"];
        for q in &self.structural.one_hop {
            for t in &q.templates {
                check_slots(t, &["head", "tail"], all)?;
            }
        }
        for q in &self.structural.existence_head {
            for t in &q.templates {
                check_slots(t, HR, HR)?;
            }
        }
        for q in &self.structural.existence_tail {
            for t in &q.templates {
                check_slots(t, TR, TR)?;
            }
        }
        for s in &self.statements {
            check_slots(&s.positive, &["head", "tail"], all)?;
            check_slots(&s.negative, &["head", "tail"], all)?;
        }
        check_slots(&self.fallback_statement.positive, all, all)?;
        check_slots(&self.fallback_statement.negative, all, all)?;

        let mut seen = BTreeSet::new();
        for group in &self.relation_groups {
            for relation in group.classes.iter().flatten() {
                if !seen.insert(relation.as_str()) {
                    return Err(Error::Catalog(format!(
                        "relation {relation:?} listed in more than one substitution class"
                    )));
                }
            }
        }
        Ok(())
    }

    fn existence_entries(&self, side: ExistenceSide) -> &[PolarTemplates] {
        match side {
            ExistenceSide::Head => &self.existence.head,
            ExistenceSide::Tail => &self.existence.tail,
        }
    }

    /// Relations usable for existence claims on one side, in catalog order.
    pub fn existence_relations(&self, side: ExistenceSide) -> Vec<&str> {
        self.existence_entries(side)
            .iter()
            .flat_map(|e| e.relations.iter().map(String::as_str))
            .collect()
    }

    /// Which side (if any) an existence claim about `relation` keeps.
    pub fn existence_side(&self, relation: &str) -> Option<ExistenceSide> {
        [ExistenceSide::Head, ExistenceSide::Tail]
            .into_iter()
            .find(|&side| self.existence_template(side, relation).is_some())
    }

    pub fn existence_template(
        &self,
        side: ExistenceSide,
        relation: &str,
    ) -> Option<&PolarTemplates> {
        self.existence_entries(side)
            .iter()
            .find(|e| e.relations.iter().any(|r| r == relation))
    }

    /// `Obama had a spouse.` / `Obama did not have a spouse.`
    pub fn render_existence(
        &self,
        side: ExistenceSide,
        entity: &str,
        relation: &str,
        negated: bool,
    ) -> Option<String> {
        let t = self.existence_template(side, relation)?;
        let template = if negated { &t.negative } else { &t.positive };
        let key = match side {
            ExistenceSide::Head => "head",
            ExistenceSide::Tail => "tail",
        };
        Some(fill(
            template,
            &[
                (key, &surface_form(entity)),
                ("relation", &humanize(relation)),
            ],
        ))
    }

    pub fn statement(&self, relation: &str) -> StatementTemplate {
        self.statements
            .iter()
            .find(|s| s.relations.iter().any(|r| r == relation))
            .map(|s| StatementTemplate {
                positive: s.positive.clone(),
                negative: s.negative.clone(),
            })
            .unwrap_or_else(|| self.fallback_statement.clone())
    }

    /// Declarative sentence for one triple.
    pub fn render_statement(
        &self,
        head: &str,
        relation: &str,
        tail: &str,
        negated: bool,
    ) -> String {
        let t = self.statement(relation);
        let template = if negated { &t.negative } else { &t.positive };
        fill(
            template,
            &[
                ("head", &surface_form(head)),
                ("tail", &surface_form(tail)),
                ("relation", &humanize(relation)),
            ],
        )
    }

    /// Relations a relation may be swapped for: members of the other classes
    /// of its group. `None` when the relation is in no group.
    pub fn substitutes(&self, relation: &str) -> Option<Vec<&str>> {
        for group in &self.relation_groups {
            let Some(own) = group
                .classes
                .iter()
                .position(|c| c.iter().any(|r| r == relation))
            else {
                continue;
            };
            return Some(
                group
                    .classes
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != own)
                    .flat_map(|(_, c)| c.iter().map(String::as_str))
                    .collect(),
            );
        }
        None
    }

    pub fn structural_one_hop(&self, relation: &str) -> Option<&[String]> {
        lookup(&self.structural.one_hop, relation)
    }

    pub fn structural_existence(&self, side: ExistenceSide, relation: &str) -> Option<&[String]> {
        match side {
            ExistenceSide::Head => lookup(&self.structural.existence_head, relation),
            ExistenceSide::Tail => lookup(&self.structural.existence_tail, relation),
        }
    }

    /// Wraps a claim sentence in a presupposition frame.
    pub fn wrap(template: &str, claim_text: &str) -> String {
        fill(
            template,
            &[("claim", &lower_leading_article(embed_claim(claim_text)))],
        )
    }

    pub fn fill_question(
        template: &str,
        head: Option<&str>,
        relation: &str,
        tail: Option<&str>,
    ) -> String {
        let head = head.map(surface_form).unwrap_or_default();
        let tail = tail.map(surface_form).unwrap_or_default();
        fill(
            template,
            &[
                ("head", &head),
                ("tail", &tail),
                ("relation", &humanize(relation)),
            ],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_catalog_loads() {
        let c = TemplateCatalog::default();
        assert_eq!(c.existence_relations(ExistenceSide::Head).len(), 17);
        assert_eq!(c.existence_relations(ExistenceSide::Tail).len(), 5);
    }

    #[test]
    fn existence_rendering() {
        let c = TemplateCatalog::default();
        assert_eq!(
            c.render_existence(ExistenceSide::Head, "Obama", "spouse", false)
                .unwrap(),
            "Obama had a spouse."
        );
        assert_eq!(
            c.render_existence(ExistenceSide::Head, "Apple", "parentCompany", true)
                .unwrap(),
            "Apple did not have a parent company."
        );
        assert_eq!(
            c.render_existence(ExistenceSide::Head, "Obama", "university", false)
                .unwrap(),
            "Obama attended university."
        );
        assert_eq!(
            c.render_existence(ExistenceSide::Tail, "Obama", "vicePresident", true)
                .unwrap(),
            "Obama was not a vice president."
        );
        assert!(c
            .render_existence(ExistenceSide::Head, "Meyer_Werft", "location", false)
            .is_none());
    }

    #[test]
    fn substitution_groups() {
        let c = TemplateCatalog::default();
        let subs = c.substitutes("builder").unwrap();
        assert_eq!(
            subs,
            vec!["owningCompany", "parentCompany", "owner", "headquarter"]
        );
        let subs = c.substitutes("formerTeam").unwrap();
        assert_eq!(subs, vec!["currentteam", "currentclub", "team"]);
        assert!(!c.substitutes("child").unwrap().contains(&"children"));
        assert!(c.substitutes("location").is_none());
    }

    #[test]
    fn structural_question() {
        let c = TemplateCatalog::default();
        let t = &c.structural_one_hop("leader").unwrap()[0];
        assert_eq!(
            TemplateCatalog::fill_question(t, Some("Alderney"), "leader", Some("Elizabeth_II")),
            "When was Elizabeth II a leader of Alderney?"
        );
        assert!(c.structural_one_hop("location").is_none());
    }

    #[test]
    fn wrap_drops_final_period() {
        assert_eq!(
            TemplateCatalog::wrap("I realized that {claim}.", "Obama was president."),
            "I realized that Obama was president."
        );
    }

    #[test]
    fn bad_slots_rejected() {
        let mut c = TemplateCatalog::default();
        c.factive.push("I knew {head}.".into());
        assert!(c.validate().is_err());
        let mut c = TemplateCatalog::default();
        c.relation_groups[0].classes.push(vec!["builder".into()]);
        assert!(c.validate().is_err());
    }
}
