//! Article corpus: ingestion, classification bookkeeping, per-field
//! timelines, statistics, queries, the knowledge graph and on-disk
//! persistence.

mod graph;
mod ingest;
mod persist;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::classifier::{classify, ArticleRecord, Classification, ClassifyError, RecordError};
use crate::scenario::{ModularOntology, ScenarioCode};
use crate::tracker::{track, FieldTimeline, TrackError, TrackerConfig};

pub use graph::{build_graph, multisets, Graph, GraphError};
pub use ingest::{parse_records, IngestReport, RejectReason, Rejection};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("IoFailure: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("UnknownField: no article belongs to field `{0}`")]
    UnknownField(String),
    #[error("corrupt corpus file {file} line {line}: {reason}")]
    Corrupt {
        file: String,
        line: usize,
        reason: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Track(#[from] TrackError),
}

impl StoreError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        StoreError::Io {
            path: path.into(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InsertError {
    #[error("DuplicateId: article `{0}` already exists")]
    DuplicateId(String),
    #[error("InvalidRecord: {0}")]
    InvalidRecord(#[from] RecordError),
}

/// Conjunctive filter; `None` fields match everything. Ranges are inclusive.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryFilter {
    pub field: Option<String>,
    pub module: Option<ModularOntology>,
    pub scenario: Option<ScenarioCode>,
    pub years: Option<(i32, i32)>,
    pub merit: Option<(u32, u32)>,
}

impl QueryFilter {
    pub fn matches(&self, c: &Classification) -> bool {
        self.field.as_ref().is_none_or(|f| *f == c.field_id)
            && self.module.is_none_or(|m| m == c.module)
            && self.scenario.is_none_or(|s| s == c.scenario)
            && self.years.is_none_or(|(lo, hi)| (lo..=hi).contains(&c.year))
            && self.merit.is_none_or(|(lo, hi)| (lo..=hi).contains(&c.merit))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldStats {
    pub field: Option<String>,
    pub classified: usize,
    pub unclassified: usize,
    pub modules: BTreeMap<ModularOntology, usize>,
    pub scenarios: BTreeMap<ScenarioCode, usize>,
    pub merit: BTreeMap<u32, usize>,
}

impl FieldStats {
    fn empty(field: Option<String>) -> Self {
        FieldStats {
            field,
            classified: 0,
            unclassified: 0,
            modules: ModularOntology::ALL.into_iter().map(|m| (m, 0)).collect(),
            scenarios: BTreeMap::new(),
            merit: BTreeMap::new(),
        }
    }

    fn add(&mut self, c: &Classification) {
        self.classified += 1;
        *self.modules.entry(c.module).or_default() += 1;
        *self.scenarios.entry(c.scenario).or_default() += 1;
        *self.merit.entry(c.merit).or_default() += 1;
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    articles: BTreeMap<String, ArticleRecord>,
    classifications: BTreeMap<String, Classification>,
    failures: BTreeMap<String, ClassifyError>,
    timelines: BTreeMap<String, FieldTimeline>,
    config: TrackerConfig,
}

impl Corpus {
    pub fn new(config: TrackerConfig) -> Result<Self, StoreError> {
        config.validate()?;
        Ok(Corpus {
            config,
            ..Corpus::default()
        })
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.config
    }

    /// Replaces the tracker configuration and recomputes every timeline.
    pub fn set_config(&mut self, config: TrackerConfig) -> Result<(), StoreError> {
        config.validate()?;
        self.config = config;
        self.retrack()
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn article(&self, id: &str) -> Option<&ArticleRecord> {
        self.articles.get(id)
    }

    pub fn articles(&self) -> impl Iterator<Item = &ArticleRecord> {
        self.articles.values()
    }

    pub fn classification(&self, id: &str) -> Option<&Classification> {
        self.classifications.get(id)
    }

    /// Stored articles whose classification failed, with the reason.
    pub fn unclassified(&self) -> impl Iterator<Item = (&str, &ClassifyError)> {
        self.failures.iter().map(|(id, e)| (id.as_str(), e))
    }

    pub fn fields(&self) -> BTreeSet<&str> {
        self.articles.values().map(|a| a.field_id.as_str()).collect()
    }

    pub fn timeline(&self, field: &str) -> Option<&FieldTimeline> {
        self.timelines.get(field)
    }

    pub fn timelines(&self) -> impl Iterator<Item = &FieldTimeline> {
        self.timelines.values()
    }

    /// Adds and classifies one record. A classification failure still
    /// stores the article and is returned for reporting. Timelines are not
    /// refreshed; call [`Corpus::retrack`] after a batch.
    pub fn insert(
        &mut self,
        record: ArticleRecord,
    ) -> Result<Option<ClassifyError>, InsertError> {
        record.validate()?;
        if self.articles.contains_key(&record.id) {
            return Err(InsertError::DuplicateId(record.id));
        }
        let outcome = match classify(&record) {
            Ok(c) => {
                self.classifications.insert(record.id.clone(), c);
                None
            }
            Err(e) => {
                self.failures.insert(record.id.clone(), e.clone());
                Some(e)
            }
        };
        self.articles.insert(record.id.clone(), record);
        Ok(outcome)
    }

    /// Classifications of one field ordered by `(year, article id)`.
    pub fn field_stream(&self, field: &str) -> Vec<Classification> {
        let mut stream: Vec<Classification> = self
            .classifications
            .values()
            .filter(|c| c.field_id == field)
            .cloned()
            .collect();
        stream.sort_by(|a, b| (a.year, &a.article_id).cmp(&(b.year, &b.article_id)));
        stream
    }

    /// Timeline of `field` under an arbitrary configuration.
    pub fn track_field(
        &self,
        field: &str,
        config: &TrackerConfig,
    ) -> Result<FieldTimeline, StoreError> {
        if !self.fields().contains(field) {
            return Err(StoreError::UnknownField(field.to_string()));
        }
        let mut timeline = track(&self.field_stream(field), config)?;
        timeline.field_id = field.to_string();
        Ok(timeline)
    }

    pub fn retrack(&mut self) -> Result<(), StoreError> {
        let fields: Vec<String> = self.fields().into_iter().map(str::to_string).collect();
        let mut timelines = BTreeMap::new();
        for field in fields {
            let timeline = self.track_field(&field, &self.config)?;
            timelines.insert(field, timeline);
        }
        self.timelines = timelines;
        Ok(())
    }

    pub fn stats(&self, field: &str) -> Result<FieldStats, StoreError> {
        if !self.fields().contains(field) {
            return Err(StoreError::UnknownField(field.to_string()));
        }
        let mut stats = FieldStats::empty(Some(field.to_string()));
        for c in self.classifications.values().filter(|c| c.field_id == field) {
            stats.add(c);
        }
        stats.unclassified = self
            .failures
            .keys()
            .filter(|id| self.articles[*id].field_id == field)
            .count();
        Ok(stats)
    }

    pub fn stats_all(&self) -> FieldStats {
        let mut stats = FieldStats::empty(None);
        for c in self.classifications.values() {
            stats.add(c);
        }
        stats.unclassified = self.failures.len();
        stats
    }

    /// Matching classifications ordered by `(year, article id)`.
    pub fn query(&self, filter: &QueryFilter) -> Vec<&Classification> {
        let mut out: Vec<&Classification> =
            self.classifications.values().filter(|c| filter.matches(c)).collect();
        out.sort_by(|a, b| (a.year, &a.article_id).cmp(&(b.year, &b.article_id)));
        out
    }

    pub fn graph(&self) -> Graph {
        build_graph(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::assertions_for;
    use crate::scenario::enumerate_valid;

    fn record(id: &str, field: &str, year: i32, code: &str) -> ArticleRecord {
        ArticleRecord {
            id: id.into(),
            title: format!("title {id}"),
            year,
            field_id: field.into(),
            assertions: assertions_for(code.parse().unwrap()),
            abstract_text: None,
        }
    }

    fn corpus48() -> Corpus {
        let mut c = Corpus::default();
        for (i, s) in enumerate_valid(None).into_iter().enumerate() {
            c.insert(record(&format!("s{i:02}"), "syn", 2000 + i as i32 % 5, &s.to_string()))
                .unwrap();
        }
        c.retrack().unwrap();
        c
    }

    #[test]
    fn module_counts_on_synthetic_corpus() {
        let stats = corpus48().stats("syn").unwrap();
        assert_eq!(stats.modules[&ModularOntology::Formalism], 18);
        assert_eq!(stats.modules[&ModularOntology::Model], 12);
        assert_eq!(stats.modules[&ModularOntology::ParadigmShift], 18);
        assert_eq!(stats.classified, 48);
        assert_eq!(stats.merit.len(), 48);
        assert_eq!(stats.scenarios.values().sum::<usize>(), 48);
    }

    #[test]
    fn stats_unknown_and_empty_field() {
        let mut c = Corpus::default();
        assert!(matches!(c.stats("nope"), Err(StoreError::UnknownField(_))));
        let mut bad = record("x", "empty", 2000, "M1 N1 P1");
        bad.assertions.pop();
        assert!(c.insert(bad).unwrap().is_some());
        let stats = c.stats("empty").unwrap();
        assert_eq!(stats.classified, 0);
        assert_eq!(stats.unclassified, 1);
        assert!(stats.modules.values().all(|n| *n == 0));
        assert!(stats.scenarios.is_empty() && stats.merit.is_empty());
    }

    #[test]
    fn repeated_scenario_counts() {
        let mut c = Corpus::default();
        c.insert(record("a", "f", 2000, "M1 N1 P1")).unwrap();
        c.insert(record("b", "f", 2001, "M1 N1 P1")).unwrap();
        let stats = c.stats("f").unwrap();
        assert_eq!(stats.scenarios.len(), 1);
        assert_eq!(stats.scenarios[&"M1 N1 P1".parse().unwrap()], 2);
    }

    #[test]
    fn duplicate_and_invalid_records() {
        let mut c = Corpus::default();
        c.insert(record("a", "f", 2000, "M1 N1 P1")).unwrap();
        assert_eq!(
            c.insert(record("a", "f", 2000, "M1 N1 P2")),
            Err(InsertError::DuplicateId("a".into()))
        );
        assert!(matches!(
            c.insert(record("b", "f", 1200, "M1 N1 P2")),
            Err(InsertError::InvalidRecord(RecordError::YearOutOfRange(1200)))
        ));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn queries() {
        let c = corpus48();
        let q = |f: QueryFilter| c.query(&f).len();
        assert_eq!(q(QueryFilter::default()), 48);
        assert_eq!(
            q(QueryFilter { module: Some(ModularOntology::ParadigmShift), ..Default::default() }),
            18
        );
        let code: ScenarioCode = "M1 N2 P3".parse().unwrap();
        let hits = c.query(&QueryFilter { scenario: Some(code), ..Default::default() });
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].scenario, code);
        assert_eq!(q(QueryFilter { field: Some("other".into()), ..Default::default() }), 0);
        assert_eq!(q(QueryFilter { merit: Some((0, 50)), ..Default::default() }),
            enumerate_valid(None).iter().filter(|s| s.merit().unwrap() <= 50).count());
        let years = c.query(&QueryFilter { years: Some((2001, 2002)), ..Default::default() });
        assert!(years.iter().all(|x| (2001..=2002).contains(&x.year)));
        assert!(years.windows(2).all(|w| (w[0].year, &w[0].article_id) <= (w[1].year, &w[1].article_id)));
        let both = QueryFilter {
            module: Some(ModularOntology::Model),
            merit: Some((0, 60)),
            ..Default::default()
        };
        assert!(c.query(&both).iter().all(|x| x.module == ModularOntology::Model && x.merit <= 60));
    }

    #[test]
    fn unclassified_are_kept() {
        let mut c = Corpus::default();
        assert!(c.insert(record("ok", "f", 2000, "M1 N2 P3")).unwrap().is_none());
        let mut r = record("worse", "f", 2000, "M1 N1 P1");
        r.assertions[2] = assertions_for("M1 N1 P3".parse().unwrap())[2].clone();
        let err = c.insert(r).unwrap().unwrap();
        assert!(matches!(err, ClassifyError::InvalidScenario { .. }));
        assert!(c.article("worse").is_some());
        assert_eq!(c.unclassified().count(), 1);
        assert_eq!(c.query(&QueryFilter::default()).len(), 1);
    }

    #[test]
    fn timelines_follow_year_then_id() {
        let mut c = Corpus::default();
        c.insert(record("b", "f", 2001, "M1 N1 P1")).unwrap();
        c.insert(record("a", "f", 2001, "M1 N1 P1")).unwrap();
        c.insert(record("z", "f", 1999, "M1 N1 P1")).unwrap();
        c.retrack().unwrap();
        let ids: Vec<_> = c.timeline("f").unwrap().entries.iter().map(|e| e.article_id.as_str()).collect();
        assert_eq!(ids, ["z", "a", "b"]);
    }
}
