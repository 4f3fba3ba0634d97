//! Deterministic cue extraction from free text.
//!
//! A lexicon maps cue phrases to claims. Extraction scans text left to
//! right, case-insensitively, taking the longest cue at the leftmost
//! position; matches do not overlap and must sit on word boundaries.

use std::collections::HashMap;
use std::path::Path;

use regex::Regex;
use thiserror::Error;

use crate::classifier::{Assertion, Claim, TagError};

const DEFAULT_LEXICON: &str = include_str!("../data/default_lexicon.tsv");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("MalformedLexicon: line {line}: {reason}")]
    MalformedLexicon { line: usize, reason: String },
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct CueLexicon {
    entries: Vec<(String, Claim)>,
    matcher: Option<Matcher>,
}

/// Compiled alternation plus the claim behind each capture group.
#[derive(Debug, Clone)]
struct Matcher {
    regex: Regex,
    claims: Vec<Claim>,
}

impl CueLexicon {
    /// Parses `cue<TAB>kind<TAB>label` lines. `#` lines and blank lines are
    /// skipped. Cues are compared case-insensitively, so two cues differing
    /// only in case are duplicates.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        let mut by_cue: HashMap<String, Claim> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let malformed = |reason: String| LexiconError::MalformedLexicon {
                line: line_no,
                reason,
            };
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [cue, kind, label] = fields.as_slice() else {
                return Err(malformed(format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                )));
            };
            let cue = cue.trim();
            if cue.is_empty() {
                return Err(malformed("empty cue".into()));
            }
            let claim = Claim::parse_kind(kind.trim())
                .and_then(|k| Claim::parse(k, label.trim()))
                .map_err(|e: TagError| malformed(e.to_string()))?;
            let key = cue.to_lowercase();
            if by_cue.insert(key.clone(), claim).is_some() {
                return Err(malformed(format!("duplicate cue `{cue}`")));
            }
            entries.push((key, claim));
        }
        let matcher = build_matcher(&entries);
        Ok(CueLexicon { entries, matcher })
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn default_text() -> &'static str {
        DEFAULT_LEXICON
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, Claim)> {
        self.entries.iter().map(|(c, k)| (c.as_str(), *k))
    }

    pub fn extract(&self, text: &str) -> Vec<Assertion> {
        let Some(matcher) = &self.matcher else {
            return Vec::new();
        };
        matcher
            .regex
            .captures_iter(text)
            .map(|caps| {
                let (group, m) = caps
                    .iter()
                    .enumerate()
                    .skip(1)
                    .find_map(|(i, g)| g.map(|m| (i, m)))
                    .expect("every alternative is a capture group");
                Assertion::with_evidence(matcher.claims[group - 1], m.as_str())
            })
            .collect()
    }
}

impl Default for CueLexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("bundled lexicon is well-formed")
    }
}

/// Alternation of escaped cues, longest first, so the leftmost match at any
/// position is also the longest cue starting there.
fn build_matcher(entries: &[(String, Claim)]) -> Option<Matcher> {
    if entries.is_empty() {
        return None;
    }
    let mut sorted: Vec<&(String, Claim)> = entries.iter().collect();
    sorted.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
    let alternation = sorted
        .iter()
        .map(|(c, _)| format!("({})", bounded(c)))
        .collect::<Vec<_>>()
        .join("|");
    let regex = Regex::new(&format!("(?i){alternation}")).expect("escaped cues form a valid regex");
    Some(Matcher {
        regex,
        claims: sorted.iter().map(|(_, k)| *k).collect(),
    })
}

/// Word boundaries only where the cue itself starts or ends with a word
/// character.
fn bounded(cue: &str) -> String {
    let is_word = |c: Option<char>| c.is_some_and(|c| c.is_alphanumeric() || c == '_');
    let head = if is_word(cue.chars().next()) { r"\b" } else { "" };
    let tail = if is_word(cue.chars().last()) { r"\b" } else { "" };
    format!("{head}{}{tail}", regex::escape(cue))
}

pub fn extract_assertions(text: &str, lexicon: &CueLexicon) -> Vec<Assertion> {
    lexicon.extract(text)
}
