//! Relation steps and relation paths.
//!
//! A step is a relation plus a direction flag. Inverse steps walk an edge
//! from tail to head and render with a leading `~`, so `~location` read from
//! `Papenburg` reaches every entity located there.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::kg::RelationId;

/// Marker prefix for an inverse step.
pub const INVERSE_MARK: char = '~';

/// A relation handle with a traversal direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedRelation {
    pub relation: RelationId,
    pub inverse: bool,
}

impl DirectedRelation {
    pub fn forward(relation: RelationId) -> Self {
        DirectedRelation {
            relation,
            inverse: false,
        }
    }

    pub fn backward(relation: RelationId) -> Self {
        DirectedRelation {
            relation,
            inverse: true,
        }
    }

    pub fn reversed(self) -> Self {
        DirectedRelation {
            relation: self.relation,
            inverse: !self.inverse,
        }
    }
}

/// Ordered sequence of directed relations; its length is the hop count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationPath(pub Vec<DirectedRelation>);

impl RelationPath {
    pub fn new(steps: Vec<DirectedRelation>) -> Self {
        RelationPath(steps)
    }

    pub fn hops(&self) -> usize {
        self.0.len()
    }

    pub fn steps(&self) -> &[DirectedRelation] {
        &self.0
    }

    /// The same walk taken from the far end.
    pub fn reversed(&self) -> Self {
        RelationPath(self.0.iter().rev().map(|s| s.reversed()).collect())
    }

    pub fn concat(&self, other: &RelationPath) -> Self {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&other.0);
        RelationPath(steps)
    }
}

/// A relation step named by its surface string, portable across graphs.
///
/// Serialized as a plain string: `shipBuilder` or `~shipBuilder`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationStep {
    pub relation: String,
    pub inverse: bool,
}

impl RelationStep {
    pub fn forward(relation: impl Into<String>) -> Self {
        RelationStep {
            relation: relation.into(),
            inverse: false,
        }
    }

    pub fn backward(relation: impl Into<String>) -> Self {
        RelationStep {
            relation: relation.into(),
            inverse: true,
        }
    }

    pub fn reversed(&self) -> Self {
        RelationStep {
            relation: self.relation.clone(),
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for RelationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{INVERSE_MARK}{}", self.relation)
        } else {
            f.write_str(&self.relation)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("empty relation step")]
pub struct EmptyStep;

impl FromStr for RelationStep {
    type Err = EmptyStep;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (inverse, name) = match s.strip_prefix(INVERSE_MARK) {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        if name.is_empty() {
            return Err(EmptyStep);
        }
        Ok(RelationStep {
            relation: name.to_string(),
            inverse,
        })
    }
}

impl Serialize for RelationStep {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RelationStep {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A path of named steps, as carried in dataset records.
pub type NamedPath = Vec<RelationStep>;

pub fn reverse_named(path: &[RelationStep]) -> NamedPath {
    path.iter().rev().map(RelationStep::reversed).collect()
}
