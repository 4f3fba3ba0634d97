//! Executable Kuhnian-cycle ontology.
//!
//! Scholarly articles are described by typed epistemic assertions (a method,
//! an observation and a conclusion). Each article maps to one scenario code
//! `M{m} N{n} P{p}`, which places it in one of three modular ontologies
//! (formalism, model, paradigm shift) with a merit level. A field's stream
//! of classified articles is folded into its position on the Kuhnian cycle.

pub mod classifier;
pub mod lexicon;
pub mod ontology;
pub mod scenario;
pub mod store;
pub mod tracker;

pub use classifier::{
    classify, code_of_assertion, ArticleRecord, Assertion, AssertionKind, Claim, Classification,
    ClassifyError, ConclusionTag, MethodTag, ObservationTag,
};
pub use lexicon::{extract_assertions, CueLexicon, LexiconError};
pub use ontology::{
    relation_category, tier_of, validate_edge, ClassTier, Edge, EdgeError, EdgeRule, Entity,
    EntityKind, RelationCategory, RelationKind,
};
pub use scenario::{
    choose, enumerate_valid, is_valid, merit_score, module_of, pool_combinations, ElementCode,
    ElementSet, MeritWeights, ModularOntology, ScenarioCode, ScenarioError,
};
pub use store::{build_graph, Corpus, FieldStats, Graph, IngestReport, QueryFilter, StoreError};
pub use tracker::{
    advance, stage_indicator, track, CycleStage, FieldTimeline, TimelineEntry, TrackerConfig,
};
