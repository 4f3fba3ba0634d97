use std::path::PathBuf;

use kuhn_core::{enumerate_valid, Corpus, CycleStage, ModularOntology, QueryFilter, TrackerConfig};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn load(name: &str) -> Corpus {
    let mut corpus = Corpus::default();
    let report = corpus.ingest(&fixture(name)).unwrap();
    assert!(report.rejected.is_empty(), "{:?}", report.rejected);
    assert!(report.unclassified.is_empty(), "{:?}", report.unclassified);
    corpus
}

#[test]
fn storyline_matches_frozen_timeline() {
    let corpus = load("storyline.jsonl");
    let timeline = corpus.timeline("fluid-dynamics").unwrap();
    let expected = std::fs::read_to_string(fixture("storyline.expected")).unwrap();
    let expected: Vec<&str> = expected.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(timeline.entries.len(), 40);
    assert_eq!(expected.len(), 40);
    for (entry, line) in timeline.entries.iter().zip(expected) {
        let got = format!(
            "{} {} {} {} {}",
            entry.year, entry.article_id, entry.scenario, entry.indicator, entry.stage
        );
        assert_eq!(got, line);
    }
    use CycleStage::*;
    assert_eq!(
        timeline.stage_path(),
        vec![PreScience, NormalScience, ModelDrift, ModelCrisis, ModelRevolution, ParadigmShift, NormalScience]
    );
}

#[test]
fn scenario_fixture_is_the_valid_set() {
    let corpus = load("scenarios48.jsonl");
    assert_eq!(corpus.len(), 48);
    let mut codes: Vec<_> = corpus.query(&QueryFilter::default()).iter().map(|c| c.scenario).collect();
    codes.sort();
    assert_eq!(codes, enumerate_valid(None));
    let stats = corpus.stats("synthetic").unwrap();
    assert_eq!(stats.modules[&ModularOntology::Formalism], 18);
    assert_eq!(stats.modules[&ModularOntology::Model], 12);
    assert_eq!(stats.modules[&ModularOntology::ParadigmShift], 18);
    let filtered = corpus.query(&QueryFilter {
        module: Some(ModularOntology::ParadigmShift),
        ..Default::default()
    });
    assert_eq!(filtered.len(), 18);
}

#[test]
fn stats_totals_are_conserved() {
    let mut corpus = load("scenarios48.jsonl");
    corpus.ingest(&fixture("storyline.jsonl")).unwrap();
    for field in ["synthetic", "fluid-dynamics"] {
        let s = corpus.stats(field).unwrap();
        assert_eq!(s.modules.values().sum::<usize>(), s.classified);
        assert_eq!(s.scenarios.values().sum::<usize>(), s.classified);
        assert_eq!(s.merit.values().sum::<usize>(), s.classified);
    }
    assert_eq!(corpus.stats_all().classified, 88);
}

#[test]
fn persistence_round_trip_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let mut corpus = load("scenarios48.jsonl");
    corpus.ingest(&fixture("storyline.jsonl")).unwrap();
    corpus.save(dir.path()).unwrap();
    let back = Corpus::load(dir.path(), TrackerConfig::default()).unwrap();
    assert_eq!(back.stats_all(), corpus.stats_all());
    for field in ["synthetic", "fluid-dynamics"] {
        assert_eq!(back.stats(field).unwrap(), corpus.stats(field).unwrap());
        assert_eq!(back.timeline(field), corpus.timeline(field));
    }
    assert_eq!(back.graph().to_json(), corpus.graph().to_json());
}

#[test]
fn tracker_overrides_change_the_timeline() {
    let corpus = load("storyline.jsonl");
    let strict = TrackerConfig { min_establish: 50, ..TrackerConfig::default() };
    let t = corpus.track_field("fluid-dynamics", &strict).unwrap();
    // never establishes normal science, but still reaches the drift stages
    assert!(t.entries.iter().take(10).all(|e| e.stage == CycleStage::PreScience));
    assert!(corpus.track_field("nope", &strict).is_err());
}
