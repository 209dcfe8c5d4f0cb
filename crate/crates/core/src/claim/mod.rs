//! Claims as small graph patterns, dataset records and the template catalog.

pub mod catalog;
mod pattern;
mod record;
pub mod text;

pub use catalog::{ExistenceSide, TemplateCatalog};
pub use pattern::{
    build_pattern, primary_tag, ClaimEdge, ClaimNode, ClaimPattern, ReasoningTags, ReasoningType,
};
pub use record::{
    parse_record, read_records, read_records_lenient, records_to_string, write_records,
    ClaimRecord, Label, Style,
};
