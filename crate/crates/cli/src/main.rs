//! `kuhn`: enumerate scenarios, classify articles, track fields through the
//! Kuhnian cycle, report statistics and export the knowledge graph.
//!
//! Exit codes: 0 success, 1 input or environment error, 2 domain error
//! (invalid scenario, unclassifiable record). Machine-readable results go
//! to stdout; diagnostics go to stderr.

mod config;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use kuhn_core::classifier::{classify, ArticleRecord};
use kuhn_core::scenario::{enumerate_valid, render_table, ModularOntology};
use kuhn_core::store::{parse_records, Corpus};
use kuhn_core::CueLexicon;

use config::CliConfig;

const EXIT_INPUT: u8 = 1;
const EXIT_DOMAIN: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "kuhn", version, about = "Kuhnian-cycle classifier for scholarly articles")]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Corpus directory (overrides `corpus_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    corpus: Option<PathBuf>,
    #[arg(long, global = true)]
    window: Option<usize>,
    #[arg(long, global = true)]
    min_establish: Option<usize>,
    #[arg(long, global = true)]
    theta_drift: Option<f64>,
    #[arg(long, global = true)]
    theta_crisis: Option<f64>,
    /// Cue lexicon file (overrides `lexicon_path`).
    #[arg(long, global = true, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print valid scenario codes.
    Enumerate {
        /// formalism, model or paradigm-shift
        #[arg(long)]
        module: Option<String>,
        /// text (one code per line) or table (three columns)
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Classify every record in a line-delimited file without storing it.
    Classify {
        input: PathBuf,
        /// Print per-kind selection diagnostics to stderr.
        #[arg(long)]
        emit_diagnostics: bool,
        /// Add assertions extracted from each abstract with the cue lexicon.
        #[arg(long)]
        extract_cues: bool,
    },
    /// Add records to the corpus directory.
    Ingest { input: PathBuf },
    /// Print a field's cycle timeline.
    Track { field: String },
    /// Print module, scenario and merit counts for a field (or the corpus).
    Stats { field: Option<String> },
    /// Write the knowledge graph document.
    Export { out: PathBuf },
}

impl Cli {
    fn resolve_config(&self) -> Result<CliConfig> {
        let mut cfg = match &self.config {
            Some(path) => CliConfig::load(path)?,
            None => CliConfig::default(),
        };
        if let Some(dir) = &self.corpus {
            cfg.corpus_dir = dir.clone();
        }
        if let Some(path) = &self.lexicon {
            cfg.lexicon_path = Some(path.clone());
        }
        let t = &mut cfg.tracker;
        t.window = self.window.unwrap_or(t.window);
        t.min_establish = self.min_establish.unwrap_or(t.min_establish);
        t.theta_drift = self.theta_drift.unwrap_or(t.theta_drift);
        t.theta_crisis = self.theta_crisis.unwrap_or(t.theta_crisis);
        t.validate().map_err(|e| anyhow!("{e}"))?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let cfg = cli.resolve_config()?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Enumerate { module, format } => enumerate(&mut out, module.as_deref(), format),
        Command::Classify {
            input,
            emit_diagnostics,
            extract_cues,
        } => classify_file(&mut out, &cfg, input, *emit_diagnostics, *extract_cues),
        Command::Ingest { input } => ingest(&mut out, &cfg, input),
        Command::Track { field } => track(&mut out, &cfg, field),
        Command::Stats { field } => stats(&mut out, &cfg, field.as_deref()),
        Command::Export { out: path } => export(&mut out, &cfg, path),
    }
}

fn enumerate(out: &mut impl Write, module: Option<&str>, format: &str) -> Result<u8> {
    let module = module
        .map(|m| m.parse::<ModularOntology>())
        .transpose()
        .map_err(|e| anyhow!("{e}"))?;
    match format {
        "text" => {
            for code in enumerate_valid(module) {
                writeln!(out, "{code}")?;
            }
        }
        "table" => match module {
            None => write!(out, "{}", render_table())?,
            Some(m) => {
                writeln!(out, "{}", m.table_heading())?;
                for code in enumerate_valid(Some(m)) {
                    writeln!(out, "{code}")?;
                }
            }
        },
        other => bail!("unknown format `{other}` (expected text or table)"),
    }
    Ok(0)
}

fn load_lexicon(cfg: &CliConfig) -> Result<CueLexicon> {
    match &cfg.lexicon_path {
        Some(path) => CueLexicon::load(path).map_err(|e| anyhow!("{e}")),
        None => Ok(CueLexicon::default()),
    }
}

fn read_records(input: &Path) -> Result<Vec<ArticleRecord>> {
    let file = File::open(input).with_context(|| format!("cannot open {}", input.display()))?;
    let mut records = Vec::new();
    let mut problems = Vec::new();
    for (line, parsed) in parse_records(BufReader::new(file))
        .with_context(|| format!("cannot read {}", input.display()))?
    {
        match parsed {
            Ok(r) => records.push(r),
            Err(reason) => problems.push(format!("line {line}: {reason}")),
        }
    }
    if !problems.is_empty() {
        bail!("{} is not a valid record file:\n  {}", input.display(), problems.join("\n  "));
    }
    Ok(records)
}

fn classify_file(
    out: &mut impl Write,
    cfg: &CliConfig,
    input: &Path,
    emit_diagnostics: bool,
    extract_cues: bool,
) -> Result<u8> {
    let mut records = read_records(input)?;
    if extract_cues {
        let lexicon = load_lexicon(cfg)?;
        for r in &mut records {
            if let Some(text) = &r.abstract_text {
                r.assertions.extend(lexicon.extract(text));
            }
        }
    }
    let mut failed = false;
    for r in &records {
        match classify(r) {
            Ok(c) => {
                writeln!(out, "{} {} {} {}", c.article_id, c.scenario, c.module, c.merit)?;
                if emit_diagnostics {
                    for d in &c.diagnostics {
                        let discarded: Vec<_> =
                            d.discarded.iter().map(|a| a.claim.label()).collect();
                        eprintln!(
                            "{} {}: chose {} over [{}]",
                            c.article_id,
                            d.kind,
                            d.chosen.claim.label(),
                            discarded.join(", ")
                        );
                    }
                }
            }
            Err(e) => {
                failed = true;
                eprintln!("{}: {e}", r.id);
            }
        }
    }
    Ok(if failed { EXIT_DOMAIN } else { 0 })
}

fn open_corpus(cfg: &CliConfig) -> Result<Corpus> {
    Corpus::load(&cfg.corpus_dir, cfg.tracker)
        .with_context(|| format!("cannot load corpus {}", cfg.corpus_dir.display()))
}

fn ingest(out: &mut impl Write, cfg: &CliConfig, input: &Path) -> Result<u8> {
    let mut corpus = open_corpus(cfg)?;
    let report = corpus.ingest(input)?;
    corpus.set_config(cfg.tracker)?;
    corpus
        .save(&cfg.corpus_dir)
        .with_context(|| format!("cannot save corpus {}", cfg.corpus_dir.display()))?;
    writeln!(
        out,
        "accepted {} rejected {} unclassified {}",
        report.accepted,
        report.rejected.len(),
        report.unclassified.len()
    )?;
    for r in &report.rejected {
        eprintln!("line {}: {}", r.line, r.reason);
    }
    for (id, e) in &report.unclassified {
        eprintln!("{id}: {e}");
    }
    Ok(if !report.rejected.is_empty() {
        EXIT_INPUT
    } else if !report.unclassified.is_empty() {
        EXIT_DOMAIN
    } else {
        0
    })
}

fn track(out: &mut impl Write, cfg: &CliConfig, field: &str) -> Result<u8> {
    let corpus = open_corpus(cfg)?;
    let timeline = corpus.track_field(field, &cfg.tracker)?;
    for e in &timeline.entries {
        writeln!(out, "{} {} {} {} {}", e.year, e.article_id, e.scenario, e.indicator, e.stage)?;
    }
    eprintln!("{field}: current stage {}", timeline.current_stage());
    Ok(0)
}

fn stats(out: &mut impl Write, cfg: &CliConfig, field: Option<&str>) -> Result<u8> {
    let corpus = open_corpus(cfg)?;
    let stats = match field {
        Some(f) => corpus.stats(f)?,
        None => corpus.stats_all(),
    };
    writeln!(out, "classified {}", stats.classified)?;
    writeln!(out, "unclassified {}", stats.unclassified)?;
    for (module, n) in &stats.modules {
        writeln!(out, "{module} {n}")?;
    }
    for (code, n) in &stats.scenarios {
        writeln!(out, "scenario {code} {n}")?;
    }
    for (merit, n) in &stats.merit {
        writeln!(out, "merit {merit} {n}")?;
    }
    Ok(0)
}

fn export(out: &mut impl Write, cfg: &CliConfig, path: &Path) -> Result<u8> {
    let corpus = open_corpus(cfg)?;
    let graph = corpus.graph();
    std::fs::write(path, graph.to_json())
        .with_context(|| format!("cannot write {}", path.display()))?;
    writeln!(out, "nodes {} edges {}", graph.nodes.len(), graph.edges.len())?;
    Ok(0)
}
