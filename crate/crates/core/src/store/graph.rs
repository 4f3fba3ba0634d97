//! Knowledge-graph construction and its JSON document form.
//!
//! Node ids:
//! - `field:<field>` for each field,
//! - `article:<id>` for each article,
//! - `<kind>:<field>:<label>` for content entities, deduplicated per
//!   (field, kind, label).
//!
//! Edges for a classified article with chosen method `m`, observation `o`
//! and conclusion `c`: `m leads_to o`, `o leads_to c`, then `o verifies c`
//! for P1/P2, `o limits c` for P3/P4 and `m verifies c` for P5/P6. Set-aside
//! assertions are linked to the chosen one of their kind by `compares`.
//! Every article is `element_of` its field.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{Assertion, Claim, ConclusionTag};
use crate::ontology::{validate_edge_in, Edge, EdgeError, Entity, EntityKind, RelationKind};

use super::Corpus;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph document is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("node `{0}` has an empty label")]
    EmptyLabel(String),
    #[error("edge {src} -[{relation}]-> {dst} rejected: {source}")]
    InvalidEdge {
        src: String,
        dst: String,
        relation: RelationKind,
        #[source]
        source: EdgeError,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub nodes: Vec<Entity>,
    pub edges: Vec<Edge>,
}

impl Graph {
    /// Checks node-id uniqueness and every edge against the endpoint table.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut by_id: BTreeMap<&str, &Entity> = BTreeMap::new();
        for n in &self.nodes {
            if n.label.trim().is_empty() {
                return Err(GraphError::EmptyLabel(n.id.clone()));
            }
            if by_id.insert(&n.id, n).is_some() {
                return Err(GraphError::DuplicateNode(n.id.clone()));
            }
        }
        for e in &self.edges {
            validate_edge_in(e, |id| by_id.get(id).copied()).map_err(|source| {
                GraphError::InvalidEdge {
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    relation: e.relation,
                    source,
                }
            })?;
        }
        Ok(())
    }

    /// Pretty-printed document with sorted arrays and fixed key order.
    pub fn to_json(&self) -> String {
        let mut sorted = self.clone();
        sorted.nodes.sort_by(|a, b| a.id.cmp(&b.id));
        sorted.edges.sort();
        let mut out = serde_json::to_string_pretty(&sorted).expect("graph serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let graph: Graph = serde_json::from_str(text)?;
        graph.validate()?;
        Ok(graph)
    }
}

fn content_kind(claim: Claim) -> EntityKind {
    match claim {
        Claim::Method(_) => EntityKind::Method,
        Claim::Observation(_) => EntityKind::Observation,
        Claim::Conclusion(ConclusionTag::ProposesCorrelation) => EntityKind::CorrelationModel,
        Claim::Conclusion(_) => EntityKind::Theory,
    }
}

fn default_label(claim: Claim) -> &'static str {
    use crate::classifier::{MethodTag as M, ObservationTag as N};
    match claim {
        Claim::Method(M::Established) => "established method",
        Claim::Method(M::Improved) => "improved method",
        Claim::Method(M::New) => "new method",
        Claim::Observation(N::Confirmatory) => "confirmatory observation",
        Claim::Observation(N::Anomalous) => "anomalous observation",
        Claim::Observation(N::New) => "new observation",
        Claim::Conclusion(ConclusionTag::Affirms) => "affirmation of the model",
        Claim::Conclusion(ConclusionTag::Extends) => "extension of the model",
        Claim::Conclusion(ConclusionTag::Questions) => "questioning of the model",
        Claim::Conclusion(ConclusionTag::Criticizes) => "criticism of the model",
        Claim::Conclusion(ConclusionTag::ProposesCorrelation) => "new correlation model",
        Claim::Conclusion(ConclusionTag::ProposesTheory) => "new theory",
    }
}

#[derive(Default)]
struct Builder {
    nodes: BTreeMap<String, Entity>,
    edges: BTreeSet<Edge>,
}

impl Builder {
    fn node(&mut self, id: String, kind: EntityKind, label: &str, field: &str) -> String {
        self.nodes.entry(id.clone()).or_insert_with(|| Entity {
            id: id.clone(),
            kind,
            label: label.to_string(),
            field_id: Some(field.to_string()),
        });
        id
    }

    fn content(&mut self, a: &Assertion, field: &str) -> String {
        let kind = content_kind(a.claim);
        let label = a
            .evidence
            .as_deref()
            .map(str::trim)
            .filter(|e| !e.is_empty())
            .unwrap_or(default_label(a.claim));
        self.node(format!("{kind}:{field}:{label}"), kind, label, field)
    }

    fn edge(&mut self, src: &str, dst: &str, relation: RelationKind, article: &str) {
        self.edges
            .insert(Edge::new(src, dst, relation).with_provenance(article));
    }
}

pub fn build_graph(corpus: &Corpus) -> Graph {
    let mut b = Builder::default();
    for article in corpus.articles() {
        let field = article.field_id.as_str();
        let field_node = b.node(format!("field:{field}"), EntityKind::Field, field, field);
        let title = if article.title.trim().is_empty() {
            article.id.as_str()
        } else {
            article.title.as_str()
        };
        let article_node =
            b.node(format!("article:{}", article.id), EntityKind::Article, title, field);
        b.edge(&article_node, &field_node, RelationKind::ElementOf, &article.id);

        for a in &article.assertions {
            b.content(a, field);
        }

        let Some(c) = corpus.classification(&article.id) else {
            continue;
        };
        let mut chosen = Vec::with_capacity(3);
        for d in &c.diagnostics {
            let chosen_id = b.content(&d.chosen, field);
            for other in &d.discarded {
                let other_id = b.content(other, field);
                if other_id != chosen_id && content_kind(other.claim) == content_kind(d.chosen.claim)
                {
                    b.edge(&chosen_id, &other_id, RelationKind::Compares, &article.id);
                }
            }
            chosen.push(chosen_id);
        }
        let [m, o, concl] = chosen.as_slice() else {
            continue;
        };
        b.edge(m, o, RelationKind::LeadsTo, &article.id);
        b.edge(o, concl, RelationKind::LeadsTo, &article.id);
        match c.scenario.p() {
            1 | 2 => b.edge(o, concl, RelationKind::Verifies, &article.id),
            3 | 4 => b.edge(o, concl, RelationKind::Limits, &article.id),
            _ => b.edge(m, concl, RelationKind::Verifies, &article.id),
        }
    }
    Graph {
        nodes: b.nodes.into_values().collect(),
        edges: b.edges.into_iter().collect(),
    }
}

/// Node and edge multisets, for order-insensitive comparison.
pub fn multisets(g: &Graph) -> (Vec<Entity>, Vec<Edge>) {
    let mut nodes = g.nodes.clone();
    let mut edges = g.edges.clone();
    nodes.sort();
    edges.sort();
    (nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{assertions_for, ArticleRecord, MethodTag};
    use crate::scenario::enumerate_valid;

    fn record(id: &str, code: &str) -> ArticleRecord {
        ArticleRecord {
            id: id.into(),
            title: format!("Article {id}"),
            year: 2000,
            field_id: "f".into(),
            assertions: assertions_for(code.parse().unwrap()),
            abstract_text: None,
        }
    }

    fn count(g: &Graph, kind: EntityKind) -> usize {
        g.nodes.iter().filter(|n| n.kind == kind).count()
    }

    #[test]
    fn single_formalism_article() {
        let mut c = Corpus::default();
        c.insert(record("a", "M1 N1 P1")).unwrap();
        let g = build_graph(&c);
        assert_eq!(count(&g, EntityKind::Article), 1);
        assert_eq!(count(&g, EntityKind::Field), 1);
        assert_eq!(g.nodes.len(), 5);
        assert!(g.edges.len() >= 4);
        g.validate().unwrap();
    }

    #[test]
    fn empty_corpus() {
        let g = build_graph(&Corpus::default());
        assert!(g.nodes.is_empty() && g.edges.is_empty());
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn every_scenario_yields_valid_edges() {
        let mut c = Corpus::default();
        for (i, s) in enumerate_valid(None).into_iter().enumerate() {
            c.insert(record(&format!("a{i}"), &s.to_string())).unwrap();
        }
        let g = build_graph(&c);
        g.validate().unwrap();
        // 12 content nodes in one field, 48 articles, 1 field
        assert_eq!(g.nodes.len(), 12 + 48 + 1);
        assert_eq!(g.edges.len(), 48 * 4);
    }

    #[test]
    fn discarded_assertions_are_compared() {
        let mut r = record("a", "M3 N1 P1");
        r.assertions.push(Assertion::new(Claim::Method(MethodTag::Established)));
        let mut c = Corpus::default();
        c.insert(r).unwrap();
        let g = build_graph(&c);
        g.validate().unwrap();
        let cmp: Vec<_> =
            g.edges.iter().filter(|e| e.relation == RelationKind::Compares).collect();
        assert_eq!(cmp.len(), 1);
        assert_eq!(cmp[0].src, "method:f:new method");
        assert_eq!(cmp[0].dst, "method:f:established method");
    }

    #[test]
    fn unclassified_articles_still_have_nodes() {
        let mut r = record("a", "M1 N1 P1");
        r.assertions.pop();
        let mut c = Corpus::default();
        c.insert(r).unwrap();
        let g = build_graph(&c);
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn export_is_deterministic_and_round_trips() {
        let mut c = Corpus::default();
        for (i, code) in ["M2 N3 P5", "M1 N1 P1", "M3 N2 P4"].iter().enumerate() {
            c.insert(record(&format!("a{i}"), code)).unwrap();
        }
        let text = build_graph(&c).to_json();
        assert_eq!(text, build_graph(&c).to_json());
        let back = Graph::from_json(&text).unwrap();
        assert_eq!(multisets(&back), multisets(&build_graph(&c)));
        assert_eq!(back.to_json(), text);
        assert!(text.find("\"nodes\"").unwrap() < text.find("\"edges\"").unwrap());
    }

    #[test]
    fn import_rejects_bad_documents() {
        let bad_edge = r#"{"nodes":[{"id":"a","kind":"method","label":"m","field":null},
            {"id":"b","kind":"theory","label":"t","field":null}],
            "edges":[{"src":"a","dst":"b","relation":"compares","provenance":null}]}"#;
        assert!(matches!(Graph::from_json(bad_edge), Err(GraphError::InvalidEdge { .. })));
        let dangling = r#"{"nodes":[],"edges":[{"src":"a","dst":"b","relation":"leads_to","provenance":null}]}"#;
        assert!(matches!(Graph::from_json(dangling), Err(GraphError::InvalidEdge { .. })));
        let dup = r#"{"nodes":[{"id":"a","kind":"method","label":"m","field":null},
            {"id":"a","kind":"method","label":"m","field":null}],"edges":[]}"#;
        assert!(matches!(Graph::from_json(dup), Err(GraphError::DuplicateNode(_))));
        assert!(matches!(Graph::from_json("{"), Err(GraphError::Parse(_))));
    }
}
