//! Command-line front end: `generate`, `strip`, `validate` and `inspect`.
//!
//! Exit codes: 0 success, 1 input or schema error, 2 inexpressible TMR.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::Config;
use crate::generate::{generate, GenerateError, GenerateOptions, RunReport, SolutionDump, StageCounts, Timing};
use crate::knowledge::{KnowledgeBase, SynNode};
use crate::pipeline::{PipelineError, Trace};
use crate::selector::{FrequencyTable, ScoredSentence};
use crate::tmr::{parse_tmr, strip_metadata, to_json, Tmr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INEXPRESSIBLE: i32 = 2;

const BUNDLED_ONTOLOGY: &str = include_str!("../data/ontology.json");
const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.json");
const BUNDLED_MEMORY: &str = include_str!("../data/memory.json");

#[derive(Debug, Parser)]
#[command(
    name = "ontogen",
    version,
    about = "Generate English sentences from text meaning representations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Knowledge base files; each defaults to the bundled one.
#[derive(Debug, clap::Args)]
pub struct KbArgs {
    #[arg(long)]
    pub ontology: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub memory: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate and rank sentences for a TMR.
    Generate {
        #[command(flatten)]
        kb: KbArgs,
        #[arg(long)]
        tmr: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Frequency table; defaults to the bundled sample.
        #[arg(long)]
        freq: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        top: usize,
        /// Print the selection ledger and score explanations.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        dump_solutions: bool,
        /// Include wall-clock timing (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Remove NLU metadata from a TMR.
    Strip {
        #[arg(long)]
        tmr: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load and check knowledge bases and, optionally, a TMR, config and frequency table.
    Validate {
        #[command(flatten)]
        kb: KbArgs,
        #[arg(long)]
        tmr: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        freq: Option<PathBuf>,
    },
    /// Show a concept's IS-A path, constraints and lexical senses.
    Inspect {
        #[command(flatten)]
        kb: KbArgs,
        #[arg(long)]
        concept: String,
    },
}

struct Failure(i32, String);

impl Failure {
    fn input(msg: impl std::fmt::Display) -> Self {
        Failure(EXIT_INPUT, msg.to_string())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate {
            kb,
            tmr,
            config,
            freq,
            top,
            trace,
            dump_solutions,
            timing,
            format,
            out: out_path,
        } => cmd_generate(
            GenerateArgs {
                kb,
                tmr,
                config,
                freq,
                top,
                trace,
                dump_solutions,
                timing,
                format,
                out: out_path,
            },
            out,
            err,
        ),
        Command::Strip { tmr, out: out_path } => cmd_strip(&tmr, out_path.as_deref(), out),
        Command::Validate { kb, tmr, config, freq } => {
            cmd_validate(&kb, tmr.as_deref(), config.as_deref(), freq.as_deref(), out)
        }
        Command::Inspect { kb, concept } => cmd_inspect(&kb, &concept, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_kb(args: &KbArgs) -> Result<KnowledgeBase, Failure> {
    let pick = |p: &Option<PathBuf>, bundled: &str| -> Result<String, Failure> {
        match p {
            Some(p) => read(p),
            None => Ok(bundled.to_string()),
        }
    };
    let o = pick(&args.ontology, BUNDLED_ONTOLOGY)?;
    let l = pick(&args.lexicon, BUNDLED_LEXICON)?;
    let m = pick(&args.memory, BUNDLED_MEMORY)?;
    let name = |p: &Option<PathBuf>, d: &str| p.as_ref().map_or(d.to_string(), |p| p.display().to_string());
    KnowledgeBase::from_json(&o, &l, &m).map_err(|e| {
        Failure::input(format!(
            "knowledge base ({}, {}, {}): {e}",
            name(&args.ontology, "bundled ontology"),
            name(&args.lexicon, "bundled lexicon"),
            name(&args.memory, "bundled memory")
        ))
    })
}

fn load_tmr(path: &Path) -> Result<Tmr, Failure> {
    parse_tmr(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    match path {
        Some(p) => Config::from_json(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => Ok(Config::default()),
    }
}

fn load_freq(path: Option<&Path>) -> Result<FrequencyTable, Failure> {
    match path {
        Some(p) => FrequencyTable::load(p).map_err(Failure::input),
        None => Ok(FrequencyTable::bundled().clone()),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Failure::input),
    }
}

struct GenerateArgs {
    kb: KbArgs,
    tmr: PathBuf,
    config: Option<PathBuf>,
    freq: Option<PathBuf>,
    top: usize,
    trace: bool,
    dump_solutions: bool,
    timing: bool,
    format: Format,
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct StructuredReport<'a> {
    sentences: &'a [ScoredSentence],
    counts: &'a StageCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a Trace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solutions: Option<&'a [SolutionDump]>,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    failures: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<&'a Timing>,
}

#[derive(Serialize)]
struct StructuredError<'a> {
    error: String,
    exit: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a Trace>,
}

fn cmd_generate(a: GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let kb = load_kb(&a.kb)?;
    let tmr = load_tmr(&a.tmr)?;
    let config = load_config(a.config.as_deref())?;
    let freq = load_freq(a.freq.as_deref())?;
    match generate(&tmr, &kb, &config, &freq, GenerateOptions { timing: a.timing }) {
        Ok(report) => {
            let text = match a.format {
                Format::Human => human_report(&report, &a),
                Format::Structured => {
                    let n = a.top.min(report.ranked.len());
                    let s = StructuredReport {
                        sentences: &report.ranked[..n],
                        counts: &report.counts,
                        trace: a.trace.then_some(&report.trace),
                        solutions: a.dump_solutions.then_some(report.solutions.as_slice()),
                        failures: &report.failures,
                        timing: report.timing.as_ref(),
                    };
                    let mut j = serde_json::to_string_pretty(&s).map_err(Failure::input)?;
                    j.push('\n');
                    j
                }
            };
            emit(&text, a.out.as_deref(), out)
        }
        Err(e) => {
            let code = match &e {
                GenerateError::Pipeline(PipelineError::Kb(_) | PipelineError::Tmr(_)) | GenerateError::Select(_) => {
                    EXIT_INPUT
                }
                _ => EXIT_INEXPRESSIBLE,
            };
            match a.format {
                Format::Human => {
                    if let Some(t) = e.trace() {
                        let _ = write!(err, "{t}");
                    }
                }
                Format::Structured => {
                    let s = StructuredError {
                        error: e.to_string(),
                        exit: code,
                        trace: e.trace(),
                    };
                    let mut j = serde_json::to_string_pretty(&s).map_err(Failure::input)?;
                    j.push('\n');
                    emit(&j, a.out.as_deref(), out)?;
                }
            }
            Err(Failure(code, e.to_string()))
        }
    }
}

fn human_report(report: &RunReport, a: &GenerateArgs) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    for (i, r) in report.top(a.top).enumerate() {
        let _ = writeln!(s, "{:>2}. {}  [{:.3}]", i + 1, r.text, r.score);
        if a.trace {
            let _ = writeln!(s, "      set: {}", r.set);
            for t in &r.terms {
                let _ = writeln!(s, "      {t}");
            }
        }
    }
    if a.trace {
        let c = &report.counts;
        let _ = writeln!(s, "\n== trace");
        let _ = write!(s, "{}", report.trace);
        let _ = writeln!(
            s,
            "solutions: {}, sentences: {}, unique: {}",
            c.solutions, c.sentences, c.unique_sentences
        );
        for f in &report.failures {
            let _ = writeln!(s, "failed   {f}");
        }
    }
    if a.dump_solutions {
        let _ = writeln!(s, "\n== solutions");
        for d in &report.solutions {
            let _ = writeln!(s, "[{}] {}\n  => {}", d.score, d.set, d.text);
            for line in d.tree.lines() {
                let _ = writeln!(s, "  {line}");
            }
        }
    }
    if let Some(t) = &report.timing {
        let _ = writeln!(
            s,
            "\ntiming (us): selection {}, solutions {}, realization {}, ranking {}",
            t.lexical_selection_us, t.solutions_us, t.realization_us, t.ranking_us
        );
    }
    s
}

fn cmd_strip(tmr: &Path, out_path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let t = load_tmr(tmr)?;
    emit(&to_json(&strip_metadata(&t)), out_path, out)
}

fn cmd_validate(
    kb: &KbArgs,
    tmr: Option<&Path>,
    config: Option<&Path>,
    freq: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let k = load_kb(kb)?;
    let mut report = format!(
        "ok: {} concepts, {} senses, {} memory instances\n",
        k.ontology.len(),
        k.lexicon.len(),
        k.memory.len()
    );
    for w in &k.warnings {
        report.push_str(&format!("warning: {w}\n"));
    }
    if let Some(p) = tmr {
        let t = load_tmr(p)?;
        for f in &t.frames {
            let c = f.concept().map_err(Failure::input)?;
            if !k.ontology.contains(c) {
                return Err(Failure::input(format!(
                    "{}: {} is not an ontology concept",
                    p.display(),
                    f.id
                )));
            }
        }
        report.push_str(&format!("ok: TMR with {} frames\n", t.frames.len()));
    }
    if config.is_some() {
        load_config(config)?;
        report.push_str("ok: config\n");
    }
    if let Some(p) = freq {
        let f = load_freq(Some(p))?;
        report.push_str(&format!("ok: frequency table with {} entries\n", f.entries.len()));
    }
    emit(&report, None, out)
}

fn syn_node(n: &SynNode) -> String {
    let cat = serde_json::to_value(n.cat)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    let mut s = cat;
    if let Some(v) = n.var {
        s.push_str(&format!(" {v}"));
    }
    if !n.root.is_empty() {
        s.push_str(&format!(" \"{}\"", n.root.join("|")));
    }
    if n.opt {
        s.push('?');
    }
    s
}

fn cmd_inspect(kb: &KbArgs, concept: &str, out: &mut dyn Write) -> Result<(), Failure> {
    use std::fmt::Write as _;
    let k = load_kb(kb)?;
    let c = k.ontology.concept(concept).map_err(Failure::input)?;
    let mut s = String::new();
    let path = k.ontology.is_a_path(concept).map_err(Failure::input)?;
    let _ = writeln!(s, "{}", c.name);
    let _ = writeln!(s, "  is-a: {}", path.join(" -> "));
    if c.parents.len() > 1 {
        let _ = writeln!(s, "  parents: {}", c.parents.join(", "));
    }
    let mut props: Vec<&str> = Vec::new();
    for anc in k.ontology.ancestors_bfs(concept) {
        if let Ok(a) = k.ontology.concept(&anc) {
            for p in a.slots.keys() {
                if !props.contains(&p.as_str()) {
                    props.push(p);
                }
            }
        }
    }
    props.sort_unstable();
    if !props.is_empty() {
        let _ = writeln!(s, "  constraints:");
        for p in &props {
            let fc = k.ontology.constraint_on(concept, p).map_err(Failure::input)?;
            let _ = writeln!(s, "    {p:<16} {}", serde_json::to_string(&fc).unwrap_or_default());
        }
    }
    let senses = k.lexicon.by_head(concept);
    let _ = writeln!(s, "  senses: {}", senses.len());
    for sense in senses {
        let _ = write!(s, "    {} ({})", sense.id, sense.headword);
        if !sense.synonyms.is_empty() {
            let _ = write!(s, " synonyms: {}", sense.synonyms.join(", "));
        }
        let _ = writeln!(s);
        let syn: Vec<String> = sense.syn_struc.iter().map(syn_node).collect();
        let _ = writeln!(s, "      syn-struc: {}", syn.join(" "));
        for (p, v) in &sense.sem_struc.slots {
            let _ = writeln!(s, "      {p:<16} {}", serde_json::to_string(v).unwrap_or_default());
        }
    }
    emit(&s, None, out)
}
