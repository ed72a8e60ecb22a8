//! Cycle relations over exponent matrices, their classification, and girth
//! computation both from relations and directly on the Tanner graph.

mod girth;
mod oracle;
mod relation;

pub use girth::{
    classify, classify_sum, girth_conv, girth_exact, girth_qc, CycleClass, CycleKind, Girth,
    GirthReport,
};
pub use oracle::girth_oracle;
pub use relation::{
    cached_relations, cycle_sum, enumerate_relations, CycleRelation, RelationSet, MAX_HALF_LENGTH,
    MIN_HALF_LENGTH,
};
