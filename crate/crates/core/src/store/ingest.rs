use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::classifier::{ArticleRecord, ClassifyError, RecordError};

use super::{Corpus, InsertError, StoreError};

#[derive(Debug, Clone, PartialEq)]
pub enum RejectReason {
    ParseError(String),
    InvalidRecord(RecordError),
    DuplicateId(String),
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::ParseError(msg) => write!(f, "ParseError: {msg}"),
            RejectReason::InvalidRecord(e) => write!(f, "InvalidRecord: {e}"),
            RejectReason::DuplicateId(id) => write!(f, "DuplicateId: {id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    /// 1-based line number in the input.
    pub line: usize,
    pub reason: RejectReason,
}

/// Outcome of one ingest run. Records in `unclassified` were stored and
/// count as accepted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejected: Vec<Rejection>,
    pub unclassified: Vec<(String, ClassifyError)>,
}

impl IngestReport {
    pub fn total(&self) -> usize {
        self.accepted + self.rejected.len()
    }
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

impl Corpus {
    pub fn ingest(&mut self, path: &Path) -> Result<IngestReport, StoreError> {
        let file = File::open(path).map_err(|e| StoreError::io(path, e))?;
        self.ingest_reader(BufReader::new(file))
            .map_err(|e| StoreError::io(path, e))
    }

    /// Ingests line-delimited records. Each line is handled on its own; a
    /// bad line is reported and never affects its neighbours. Only a failing
    /// reader aborts the run.
    pub fn ingest_reader<R: BufRead>(&mut self, mut reader: R) -> std::io::Result<IngestReport> {
        let mut report = IngestReport::default();
        let mut buf = Vec::new();
        let mut line_no = 0;
        loop {
            buf.clear();
            if reader.read_until(b'\n', &mut buf)? == 0 {
                break;
            }
            line_no += 1;
            let reject = |reason| Rejection {
                line: line_no,
                reason,
            };
            let line = match std::str::from_utf8(&buf) {
                Ok(l) => l,
                Err(e) => {
                    report.rejected.push(reject(RejectReason::ParseError(e.to_string())));
                    continue;
                }
            };
            if is_skippable(line) {
                continue;
            }
            let record: ArticleRecord = match serde_json::from_str(line) {
                Ok(r) => r,
                Err(e) => {
                    report.rejected.push(reject(RejectReason::ParseError(e.to_string())));
                    continue;
                }
            };
            let id = record.id.clone();
            match self.insert(record) {
                Ok(None) => report.accepted += 1,
                Ok(Some(err)) => {
                    report.accepted += 1;
                    report.unclassified.push((id, err));
                }
                Err(InsertError::DuplicateId(id)) => {
                    report.rejected.push(reject(RejectReason::DuplicateId(id)))
                }
                Err(InsertError::InvalidRecord(e)) => {
                    report.rejected.push(reject(RejectReason::InvalidRecord(e)))
                }
            }
        }
        self.retrack().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(report)
    }
}

/// Parses records without storing them, keeping line numbers. Used by
/// callers that classify a file without a corpus.
pub fn parse_records<R: BufRead>(
    reader: R,
) -> std::io::Result<Vec<(usize, Result<ArticleRecord, RejectReason>)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let parsed = serde_json::from_str::<ArticleRecord>(&line)
            .map_err(|e| RejectReason::ParseError(e.to_string()))
            .and_then(|r| r.validate().map(|_| r).map_err(RejectReason::InvalidRecord));
        out.push((i + 1, parsed));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    const GOOD: &str = r#"{"id":"a","title":"A","year":2000,"field":"f","assertions":[{"kind":"method","label":"established"},{"kind":"observation","label":"confirmatory"},{"kind":"conclusion","label":"affirms"}]}"#;

    fn line(id: &str) -> String {
        GOOD.replacen("\"a\"", &format!("\"{id}\""), 1)
    }

    #[test]
    fn truncated_line_is_rejected_alone() {
        let input = format!("{}\n{}\n{}\n{}", line("a"), line("b"), line("c"), &GOOD[..40]);
        let mut c = Corpus::default();
        let report = c.ingest_reader(Cursor::new(input)).unwrap();
        assert_eq!(report.accepted, 3);
        assert_eq!(report.rejected.len(), 1);
        assert_eq!(report.rejected[0].line, 4);
        assert!(matches!(report.rejected[0].reason, RejectReason::ParseError(_)));
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn duplicate_id() {
        let input = format!("{}\n{}\n", line("a"), line("a"));
        let report = Corpus::default().ingest_reader(Cursor::new(input)).unwrap();
        assert_eq!(report.accepted, 1);
        assert_eq!(
            report.rejected,
            vec![Rejection { line: 2, reason: RejectReason::DuplicateId("a".into()) }]
        );
    }

    #[test]
    fn comments_blanks_and_bad_bytes() {
        let mut input = format!("# header\n\n{}\n   \n", line("a")).into_bytes();
        input.extend_from_slice(b"\xff\xfe\n");
        input.extend_from_slice(line("b").as_bytes());
        let report = Corpus::default().ingest_reader(Cursor::new(input)).unwrap();
        assert_eq!(report.accepted, 2);
        assert_eq!(report.rejected.len(), 1);
        assert_eq!(report.rejected[0].line, 5);
        assert_eq!(report.total(), 3);
    }

    #[test]
    fn classification_failure_is_stored() {
        let bad = line("x").replace("affirms", "questions");
        let mut c = Corpus::default();
        let report = c.ingest_reader(Cursor::new(bad)).unwrap();
        assert_eq!(report.accepted, 1);
        assert_eq!(report.unclassified.len(), 1);
        assert!(c.article("x").is_some());
        assert!(c.classification("x").is_none());
    }

    #[test]
    fn invalid_year_and_label() {
        let input = format!(
            "{}\n{}\n",
            line("a").replace("2000", "3000"),
            line("b").replace("established", "ancient")
        );
        let report = Corpus::default().ingest_reader(Cursor::new(input)).unwrap();
        assert_eq!(report.accepted, 0);
        assert!(matches!(report.rejected[0].reason, RejectReason::InvalidRecord(_)));
        assert!(matches!(report.rejected[1].reason, RejectReason::ParseError(_)));
    }

    #[test]
    fn missing_file_is_io_failure() {
        let err = Corpus::default().ingest(Path::new("/definitely/not/here.jsonl")).unwrap_err();
        assert!(matches!(err, StoreError::Io { .. }));
    }
}
