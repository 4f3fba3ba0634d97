//! Corpus directory layout: `articles.jsonl`, `classifications.jsonl`,
//! `timelines.jsonl` (one JSON document per line, sorted by id) and
//! `graph.json`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::classifier::{classify, ArticleRecord, Classification};
use crate::tracker::{FieldTimeline, TrackerConfig};

use super::{build_graph, Corpus, StoreError};

pub const ARTICLES_FILE: &str = "articles.jsonl";
pub const CLASSIFICATIONS_FILE: &str = "classifications.jsonl";
pub const TIMELINES_FILE: &str = "timelines.jsonl";
pub const GRAPH_FILE: &str = "graph.json";

fn write_lines<'a, T, I>(path: &Path, items: I) -> Result<(), StoreError>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("corpus values serialize"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| StoreError::io(path, e))
}

fn read_lines<T: DeserializeOwned>(dir: &Path, file: &str) -> Result<Vec<T>, StoreError> {
    let path = dir.join(file);
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read_to_string(&path).map_err(|e| StoreError::io(&path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| StoreError::Corrupt {
                file: file.to_string(),
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}

impl Corpus {
    pub fn save(&self, dir: &Path) -> Result<(), StoreError> {
        fs::create_dir_all(dir).map_err(|e| StoreError::io(dir, e))?;
        write_lines(&dir.join(ARTICLES_FILE), self.articles.values())?;
        write_lines(&dir.join(CLASSIFICATIONS_FILE), self.classifications.values())?;
        write_lines(&dir.join(TIMELINES_FILE), self.timelines.values())?;
        let graph = dir.join(GRAPH_FILE);
        fs::write(&graph, build_graph(self).to_json()).map_err(|e| StoreError::io(&graph, e))
    }

    /// Loads a saved corpus. A missing directory loads as an empty corpus.
    /// Classification failures are recomputed from the stored articles.
    pub fn load(dir: &Path, config: TrackerConfig) -> Result<Corpus, StoreError> {
        let mut corpus = Corpus::new(config)?;
        if !dir.exists() {
            return Ok(corpus);
        }
        let corrupt = |file: &str, reason: String| StoreError::Corrupt {
            file: file.to_string(),
            line: 0,
            reason,
        };
        for (i, a) in read_lines::<ArticleRecord>(dir, ARTICLES_FILE)?.into_iter().enumerate() {
            a.validate().map_err(|e| StoreError::Corrupt {
                file: ARTICLES_FILE.into(),
                line: i + 1,
                reason: e.to_string(),
            })?;
            if corpus.articles.insert(a.id.clone(), a).is_some() {
                return Err(corrupt(ARTICLES_FILE, "duplicate article id".into()));
            }
        }
        for c in read_lines::<Classification>(dir, CLASSIFICATIONS_FILE)? {
            if !corpus.articles.contains_key(&c.article_id) {
                return Err(corrupt(
                    CLASSIFICATIONS_FILE,
                    format!("classification for unknown article `{}`", c.article_id),
                ));
            }
            corpus.classifications.insert(c.article_id.clone(), c);
        }
        for a in corpus.articles.values() {
            if !corpus.classifications.contains_key(&a.id) {
                if let Err(e) = classify(a) {
                    corpus.failures.insert(a.id.clone(), e);
                }
            }
        }
        for t in read_lines::<FieldTimeline>(dir, TIMELINES_FILE)? {
            if let Some(e) = t
                .entries
                .iter()
                .find(|e| !corpus.classifications.contains_key(&e.article_id))
            {
                return Err(corrupt(
                    TIMELINES_FILE,
                    format!("timeline entry for unclassified article `{}`", e.article_id),
                ));
            }
            corpus.timelines.insert(t.field_id.clone(), t);
        }
        Ok(corpus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::assertions_for;
    use crate::store::QueryFilter;

    fn sample() -> Corpus {
        let mut c = Corpus::default();
        for (i, code) in ["M1 N1 P1", "M2 N3 P5", "M3 N2 P4", "M1 N1 P2"].iter().enumerate() {
            c.insert(ArticleRecord {
                id: format!("a{i}"),
                title: format!("Article {i}"),
                year: 1990 + i as i32,
                field_id: if i % 2 == 0 { "x".into() } else { "y".into() },
                assertions: assertions_for(code.parse().unwrap()),
                abstract_text: Some("abstract".into()),
            })
            .unwrap();
        }
        let mut broken = c.article("a0").unwrap().clone();
        broken.id = "broken".into();
        broken.assertions.truncate(1);
        c.insert(broken).unwrap();
        c.retrack().unwrap();
        c
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = sample();
        c.save(dir.path()).unwrap();
        let back = Corpus::load(dir.path(), TrackerConfig::default()).unwrap();
        assert_eq!(back.stats("x").unwrap(), c.stats("x").unwrap());
        assert_eq!(back.stats_all(), c.stats_all());
        assert_eq!(back.query(&QueryFilter::default()), c.query(&QueryFilter::default()));
        assert_eq!(back.timeline("y"), c.timeline("y"));
        assert_eq!(back.unclassified().count(), 1);
        assert_eq!(build_graph(&back).to_json(), build_graph(&c).to_json());
        let saved = fs::read_to_string(dir.path().join(GRAPH_FILE)).unwrap();
        assert_eq!(saved, build_graph(&c).to_json());
    }

    #[test]
    fn missing_dir_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let c = Corpus::load(&dir.path().join("nope"), TrackerConfig::default()).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn dangling_classification_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        sample().save(dir.path()).unwrap();
        fs::write(dir.path().join(ARTICLES_FILE), "").unwrap();
        assert!(matches!(
            Corpus::load(dir.path(), TrackerConfig::default()),
            Err(StoreError::Corrupt { .. })
        ));
    }

    #[test]
    fn garbage_line_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        sample().save(dir.path()).unwrap();
        fs::write(dir.path().join(TIMELINES_FILE), "not json\n").unwrap();
        assert!(matches!(
            Corpus::load(dir.path(), TrackerConfig::default()),
            Err(StoreError::Corrupt { line: 1, .. })
        ));
    }
}
