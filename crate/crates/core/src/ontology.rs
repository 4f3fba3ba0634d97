//! Entity kinds, class tiers and the relation taxonomy shared by the three
//! modular ontologies, plus the endpoint rules every graph edge must obey.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Method,
    Observation,
    Theory,
    CorrelationModel,
    PreviousWork,
    KeyArgument,
    Model,
    Paradigm,
    Article,
    Field,
}

impl EntityKind {
    pub const ALL: [EntityKind; 10] = [
        EntityKind::Method,
        EntityKind::Observation,
        EntityKind::Theory,
        EntityKind::CorrelationModel,
        EntityKind::PreviousWork,
        EntityKind::KeyArgument,
        EntityKind::Model,
        EntityKind::Paradigm,
        EntityKind::Article,
        EntityKind::Field,
    ];

    /// The six tiered content kinds of the formalism ontology.
    pub const CONTENT: [EntityKind; 6] = [
        EntityKind::CorrelationModel,
        EntityKind::PreviousWork,
        EntityKind::KeyArgument,
        EntityKind::Method,
        EntityKind::Observation,
        EntityKind::Theory,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Method => "method",
            EntityKind::Observation => "observation",
            EntityKind::Theory => "theory",
            EntityKind::CorrelationModel => "correlation_model",
            EntityKind::PreviousWork => "previous_work",
            EntityKind::KeyArgument => "key_argument",
            EntityKind::Model => "model",
            EntityKind::Paradigm => "paradigm",
            EntityKind::Article => "article",
            EntityKind::Field => "field",
        }
    }

    pub fn is_content(self) -> bool {
        Self::CONTENT.contains(&self)
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityKind {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| OntologyError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassTier {
    /// Correlation models, previous work and key arguments.
    Extrinsic,
    /// Methods, observations and theories.
    Intrinsic,
    /// Concrete instances of the first two tiers.
    ObjectTier,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("entity kind `{0}` has no class tier in the formalism ontology")]
    UnmappedKind(EntityKind),
    #[error("unknown entity kind `{0}`")]
    UnknownKind(String),
    #[error("unknown relation kind `{0}`")]
    UnknownRelation(String),
    #[error("entity `{0}` has an empty label")]
    EmptyLabel(String),
    #[error("entity id is empty")]
    EmptyId,
}

pub fn tier_of(kind: EntityKind) -> Result<ClassTier, OntologyError> {
    match kind {
        EntityKind::CorrelationModel | EntityKind::PreviousWork | EntityKind::KeyArgument => {
            Ok(ClassTier::Extrinsic)
        }
        EntityKind::Method | EntityKind::Observation | EntityKind::Theory => {
            Ok(ClassTier::Intrinsic)
        }
        EntityKind::Model | EntityKind::Paradigm | EntityKind::Article | EntityKind::Field => {
            Err(OntologyError::UnmappedKind(kind))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    ElementOf,
    LeadsTo,
    Limits,
    Verifies,
    Compares,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationCategory {
    Mathematical,
    Causal,
    Syntactic,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [
        RelationKind::ElementOf,
        RelationKind::LeadsTo,
        RelationKind::Limits,
        RelationKind::Verifies,
        RelationKind::Compares,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::ElementOf => "element_of",
            RelationKind::LeadsTo => "leads_to",
            RelationKind::Limits => "limits",
            RelationKind::Verifies => "verifies",
            RelationKind::Compares => "compares",
        }
    }

    pub fn category(self) -> RelationCategory {
        relation_category(self)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationKind {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| OntologyError::UnknownRelation(s.to_string()))
    }
}

pub fn relation_category(relation: RelationKind) -> RelationCategory {
    match relation {
        RelationKind::ElementOf => RelationCategory::Mathematical,
        RelationKind::LeadsTo | RelationKind::Limits => RelationCategory::Causal,
        RelationKind::Verifies | RelationKind::Compares => RelationCategory::Syntactic,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    pub kind: EntityKind,
    pub label: String,
    #[serde(rename = "field")]
    pub field_id: Option<String>,
}

impl Entity {
    pub fn new(
        id: impl Into<String>,
        kind: EntityKind,
        label: impl Into<String>,
        field_id: Option<String>,
    ) -> Result<Self, OntologyError> {
        let id = id.into();
        let label = label.into();
        if id.is_empty() {
            return Err(OntologyError::EmptyId);
        }
        if label.trim().is_empty() {
            return Err(OntologyError::EmptyLabel(id));
        }
        Ok(Entity {
            id,
            kind,
            label,
            field_id,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: String,
    pub dst: String,
    pub relation: RelationKind,
    pub provenance: Option<String>,
}

impl Edge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, relation: RelationKind) -> Self {
        Edge {
            src: src.into(),
            dst: dst.into(),
            relation,
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, article_id: impl Into<String>) -> Self {
        self.provenance = Some(article_id.into());
        self
    }
}

/// Endpoint rule an edge can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeRule {
    /// Causal relations may not loop back onto their source.
    SelfLoop,
    /// `compares` only relates entities of one kind.
    SameKindRequired,
    SourceKindNotPermitted,
    TargetKindNotPermitted,
}

impl EdgeRule {
    pub fn name(self) -> &'static str {
        match self {
            EdgeRule::SelfLoop => "SelfLoop",
            EdgeRule::SameKindRequired => "SameKindRequired",
            EdgeRule::SourceKindNotPermitted => "SourceKindNotPermitted",
            EdgeRule::TargetKindNotPermitted => "TargetKindNotPermitted",
        }
    }
}

impl fmt::Display for EdgeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeError {
    #[error("edge endpoint `{0}` does not name a known entity")]
    DanglingEndpoint(String),
    #[error("{relation} edge {src_kind} -> {dst_kind} violates {rule}")]
    Violation {
        rule: EdgeRule,
        relation: RelationKind,
        src_kind: EntityKind,
        dst_kind: EntityKind,
    },
}

impl EdgeError {
    /// Name of the violated rule.
    pub fn rule_name(&self) -> &'static str {
        match self {
            EdgeError::DanglingEndpoint(_) => "DanglingEndpoint",
            EdgeError::Violation { rule, .. } => rule.name(),
        }
    }
}

/// Permitted source kinds for a relation; `None` means "any kind" (compares).
fn permitted_sources(relation: RelationKind) -> Option<&'static [EntityKind]> {
    use EntityKind::*;
    match relation {
        // Content kinds into a model or paradigm; articles into their field.
        RelationKind::ElementOf => Some(&[
            CorrelationModel,
            PreviousWork,
            KeyArgument,
            Method,
            Observation,
            Theory,
            Article,
        ]),
        RelationKind::LeadsTo => Some(&[Method, Observation, KeyArgument]),
        RelationKind::Limits => Some(&[Observation, KeyArgument]),
        RelationKind::Verifies => Some(&[Method, Observation]),
        RelationKind::Compares => None,
    }
}

fn permitted_target(relation: RelationKind, src: EntityKind, dst: EntityKind) -> bool {
    use EntityKind::*;
    match relation {
        RelationKind::ElementOf if src == Article => dst == Field,
        RelationKind::ElementOf => matches!(dst, Model | Paradigm),
        RelationKind::LeadsTo => matches!(dst, Observation | Theory | CorrelationModel),
        RelationKind::Limits => matches!(dst, Model | Method | Theory),
        RelationKind::Verifies => matches!(dst, Theory | CorrelationModel),
        RelationKind::Compares => src == dst,
    }
}

/// Checks an edge against its resolved endpoints.
///
/// The endpoints must be the entities named by `edge.src` and `edge.dst`;
/// a mismatch is reported as a dangling endpoint.
pub fn validate_edge(edge: &Edge, src: &Entity, dst: &Entity) -> Result<(), EdgeError> {
    if src.id != edge.src {
        return Err(EdgeError::DanglingEndpoint(edge.src.clone()));
    }
    if dst.id != edge.dst {
        return Err(EdgeError::DanglingEndpoint(edge.dst.clone()));
    }
    let violation = |rule| EdgeError::Violation {
        rule,
        relation: edge.relation,
        src_kind: src.kind,
        dst_kind: dst.kind,
    };
    if edge.relation.category() == RelationCategory::Causal && edge.src == edge.dst {
        return Err(violation(EdgeRule::SelfLoop));
    }
    match permitted_sources(edge.relation) {
        None => {
            if src.kind != dst.kind {
                return Err(violation(EdgeRule::SameKindRequired));
            }
        }
        Some(sources) => {
            if !sources.contains(&src.kind) {
                return Err(violation(EdgeRule::SourceKindNotPermitted));
            }
            if !permitted_target(edge.relation, src.kind, dst.kind) {
                return Err(violation(EdgeRule::TargetKindNotPermitted));
            }
        }
    }
    Ok(())
}

/// Resolves endpoint ids through `lookup` and validates the edge.
pub fn validate_edge_in<'a, F>(edge: &Edge, lookup: F) -> Result<(), EdgeError>
where
    F: Fn(&str) -> Option<&'a Entity>,
{
    let src = lookup(&edge.src).ok_or_else(|| EdgeError::DanglingEndpoint(edge.src.clone()))?;
    let dst = lookup(&edge.dst).ok_or_else(|| EdgeError::DanglingEndpoint(edge.dst.clone()))?;
    validate_edge(edge, src, dst)
}
