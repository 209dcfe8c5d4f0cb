//! Fact verification over knowledge graphs.
//!
//! * [`kg`]: interned, doubly indexed triple store with hop-bounded traversal.
//! * [`claim`]: claim patterns, dataset records and the template catalog.
//! * [`verify`]: Supported/Refuted decisions for claim patterns.
//! * [`synth`]: labeled claim generation and triple-disjoint splits.
//! * [`retrieve`]: relation-sequence evidence retrieval.

pub mod claim;
pub mod demo;
mod error;
pub mod kg;
pub mod path;
pub mod retrieve;
pub mod rng;
pub mod synth;
pub mod verify;

pub use claim::{ClaimPattern, ClaimRecord, Label, ReasoningType, TemplateCatalog};
pub use error::{Error, Result};
pub use kg::{EntityId, KnowledgeGraph, RelationId, Triple};
pub use path::{DirectedRelation, RelationPath, RelationStep};
pub use verify::{verify, Verdict, VerifyConfig};
