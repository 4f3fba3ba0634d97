//! Article records, typed assertions and scenario classification.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::{ElementCode, ElementSet, ModularOntology, ScenarioCode, ScenarioError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssertionKind {
    #[serde(alias = "MethodAssertion")]
    Method,
    #[serde(alias = "ObservationAssertion")]
    Observation,
    #[serde(alias = "ConclusionAssertion")]
    Conclusion,
}

impl AssertionKind {
    pub const ALL: [AssertionKind; 3] = [
        AssertionKind::Method,
        AssertionKind::Observation,
        AssertionKind::Conclusion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AssertionKind::Method => "method",
            AssertionKind::Observation => "observation",
            AssertionKind::Conclusion => "conclusion",
        }
    }

    fn element_set(self) -> ElementSet {
        match self {
            AssertionKind::Method => ElementSet::M,
            AssertionKind::Observation => ElementSet::N,
            AssertionKind::Conclusion => ElementSet::P,
        }
    }
}

impl fmt::Display for AssertionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MethodTag {
    Established,
    Improved,
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObservationTag {
    Confirmatory,
    Anomalous,
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConclusionTag {
    Affirms,
    Extends,
    Questions,
    Criticizes,
    ProposesCorrelation,
    ProposesTheory,
}

/// A closed (kind, label) pair. Labels can only come from their kind's
/// vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    Method(MethodTag),
    Observation(ObservationTag),
    Conclusion(ConclusionTag),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("unknown assertion kind `{0}`")]
    UnknownKind(String),
    #[error("label `{label}` is not in the {kind} vocabulary")]
    UnknownLabel { kind: AssertionKind, label: String },
}

impl Claim {
    /// Every claim in element order: M1..M3, N1..N3, P1..P6.
    pub const ALL: [Claim; 12] = [
        Claim::Method(MethodTag::Established),
        Claim::Method(MethodTag::Improved),
        Claim::Method(MethodTag::New),
        Claim::Observation(ObservationTag::Confirmatory),
        Claim::Observation(ObservationTag::Anomalous),
        Claim::Observation(ObservationTag::New),
        Claim::Conclusion(ConclusionTag::Affirms),
        Claim::Conclusion(ConclusionTag::Extends),
        Claim::Conclusion(ConclusionTag::Questions),
        Claim::Conclusion(ConclusionTag::Criticizes),
        Claim::Conclusion(ConclusionTag::ProposesCorrelation),
        Claim::Conclusion(ConclusionTag::ProposesTheory),
    ];

    pub fn kind(self) -> AssertionKind {
        match self {
            Claim::Method(_) => AssertionKind::Method,
            Claim::Observation(_) => AssertionKind::Observation,
            Claim::Conclusion(_) => AssertionKind::Conclusion,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Claim::Method(MethodTag::Established) => "established",
            Claim::Method(MethodTag::Improved) => "improved",
            Claim::Method(MethodTag::New) => "new",
            Claim::Observation(ObservationTag::Confirmatory) => "confirmatory",
            Claim::Observation(ObservationTag::Anomalous) => "anomalous",
            Claim::Observation(ObservationTag::New) => "new",
            Claim::Conclusion(ConclusionTag::Affirms) => "affirms",
            Claim::Conclusion(ConclusionTag::Extends) => "extends",
            Claim::Conclusion(ConclusionTag::Questions) => "questions",
            Claim::Conclusion(ConclusionTag::Criticizes) => "criticizes",
            Claim::Conclusion(ConclusionTag::ProposesCorrelation) => "proposes_correlation",
            Claim::Conclusion(ConclusionTag::ProposesTheory) => "proposes_theory",
        }
    }

    /// 1-based position of the claim inside its element set.
    pub fn index(self) -> u8 {
        let pos = Claim::ALL.iter().position(|c| *c == self).expect("claim is listed");
        let offset = match self.kind() {
            AssertionKind::Method => 0,
            AssertionKind::Observation => 3,
            AssertionKind::Conclusion => 6,
        };
        (pos - offset + 1) as u8
    }

    pub fn parse(kind: AssertionKind, label: &str) -> Result<Claim, TagError> {
        Claim::ALL
            .into_iter()
            .find(|c| c.kind() == kind && c.label() == label)
            .ok_or_else(|| TagError::UnknownLabel {
                kind,
                label: label.to_string(),
            })
    }

    pub fn parse_kind(kind: &str) -> Result<AssertionKind, TagError> {
        match kind {
            "method" | "MethodAssertion" => Ok(AssertionKind::Method),
            "observation" | "ObservationAssertion" => Ok(AssertionKind::Observation),
            "conclusion" | "ConclusionAssertion" => Ok(AssertionKind::Conclusion),
            other => Err(TagError::UnknownKind(other.to_string())),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind(), self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAssertion", into = "RawAssertion")]
pub struct Assertion {
    pub claim: Claim,
    pub evidence: Option<String>,
}

impl Assertion {
    pub fn new(claim: Claim) -> Self {
        Assertion {
            claim,
            evidence: None,
        }
    }

    pub fn with_evidence(claim: Claim, evidence: impl Into<String>) -> Self {
        Assertion {
            claim,
            evidence: Some(evidence.into()),
        }
    }

    pub fn kind(&self) -> AssertionKind {
        self.claim.kind()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAssertion {
    kind: String,
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    evidence: Option<String>,
}

impl TryFrom<RawAssertion> for Assertion {
    type Error = TagError;

    fn try_from(raw: RawAssertion) -> Result<Self, Self::Error> {
        let kind = Claim::parse_kind(&raw.kind)?;
        Ok(Assertion {
            claim: Claim::parse(kind, &raw.label)?,
            evidence: raw.evidence,
        })
    }
}

impl From<Assertion> for RawAssertion {
    fn from(a: Assertion) -> Self {
        RawAssertion {
            kind: a.claim.kind().as_str().to_string(),
            label: a.claim.label().to_string(),
            evidence: a.evidence,
        }
    }
}

pub fn code_of_assertion(a: &Assertion) -> ElementCode {
    ElementCode::new(a.kind().element_set(), a.claim.index())
        .expect("claim indices stay inside their element set")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub id: String,
    pub title: String,
    pub year: i32,
    #[serde(rename = "field")]
    pub field_id: String,
    pub assertions: Vec<Assertion>,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
}

pub const MIN_YEAR: i32 = 1600;
pub const MAX_YEAR: i32 = 2100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("article id is empty")]
    EmptyId,
    #[error("field id is empty")]
    EmptyField,
    #[error("year {0} outside {MIN_YEAR}..={MAX_YEAR}")]
    YearOutOfRange(i32),
}

impl ArticleRecord {
    pub fn validate(&self) -> Result<(), RecordError> {
        if self.id.trim().is_empty() {
            return Err(RecordError::EmptyId);
        }
        if self.field_id.trim().is_empty() {
            return Err(RecordError::EmptyField);
        }
        if !(MIN_YEAR..=MAX_YEAR).contains(&self.year) {
            return Err(RecordError::YearOutOfRange(self.year));
        }
        Ok(())
    }
}

/// Which assertion won its kind and which were set aside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: AssertionKind,
    pub chosen: Assertion,
    pub discarded: Vec<Assertion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub article_id: String,
    #[serde(rename = "field")]
    pub field_id: String,
    pub year: i32,
    pub scenario: ScenarioCode,
    pub module: ModularOntology,
    pub merit: u32,
    pub diagnostics: Vec<Diagnostic>,
}

impl Classification {
    /// A classification with no diagnostics, for a scenario known by code.
    pub fn from_scenario(
        article_id: impl Into<String>,
        field_id: impl Into<String>,
        year: i32,
        scenario: ScenarioCode,
    ) -> Result<Self, ScenarioError> {
        Ok(Classification {
            article_id: article_id.into(),
            field_id: field_id.into(),
            year,
            module: scenario.module()?,
            merit: scenario.merit()?,
            scenario,
            diagnostics: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("MissingAssertionKind: article has no {0} assertion")]
    MissingAssertionKind(AssertionKind),
    #[error("InvalidScenario: {scenario} ({rule})")]
    InvalidScenario {
        scenario: ScenarioCode,
        rule: &'static str,
    },
}

/// Picks the most disruptive assertion of one kind: highest element index,
/// ties broken by the assertion's own ordering so the result does not depend
/// on input order.
fn select(article: &ArticleRecord, kind: AssertionKind) -> Result<Diagnostic, ClassifyError> {
    let mut of_kind: Vec<&Assertion> =
        article.assertions.iter().filter(|a| a.kind() == kind).collect();
    of_kind.sort_by(|a, b| {
        b.claim
            .index()
            .cmp(&a.claim.index())
            .then_with(|| a.evidence.cmp(&b.evidence))
    });
    let mut iter = of_kind.into_iter().cloned();
    let chosen = iter.next().ok_or(ClassifyError::MissingAssertionKind(kind))?;
    Ok(Diagnostic {
        kind,
        chosen,
        discarded: iter.collect(),
    })
}

pub fn classify(article: &ArticleRecord) -> Result<Classification, ClassifyError> {
    let diagnostics = AssertionKind::ALL
        .into_iter()
        .map(|k| select(article, k))
        .collect::<Result<Vec<_>, _>>()?;
    let idx = |i: usize| diagnostics[i].chosen.claim.index();
    let scenario = ScenarioCode::new(idx(0), idx(1), idx(2))
        .expect("claim indices are in range")
        .validate()
        .map_err(|e| match e {
            ScenarioError::InvalidScenario { scenario, rule } => {
                ClassifyError::InvalidScenario { scenario, rule }
            }
            other => unreachable!("validate only reports invalid scenarios: {other}"),
        })?;
    Ok(Classification {
        article_id: article.id.clone(),
        field_id: article.field_id.clone(),
        year: article.year,
        module: scenario.module().expect("validated"),
        merit: scenario.merit().expect("validated"),
        scenario,
        diagnostics,
    })
}

/// The three assertions whose labels map onto `scenario`.
pub fn assertions_for(scenario: ScenarioCode) -> Vec<Assertion> {
    let pick = |kind: AssertionKind, index: u8| {
        Claim::ALL
            .into_iter()
            .find(|c| c.kind() == kind && c.index() == index)
            .map(Assertion::new)
            .expect("index within set")
    };
    vec![
        pick(AssertionKind::Method, scenario.m()),
        pick(AssertionKind::Observation, scenario.n()),
        pick(AssertionKind::Conclusion, scenario.p()),
    ]
}
