//! Ranks realized sentences by pipeline score, construction frequency and
//! discourse heuristics, keeping an itemized explanation for each score.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::WeightConfig;
use crate::pipeline::CandidateSense;
use crate::realizer::Realization;
use crate::solution::CandidateSolution;

pub const FREQ_SCHEMA: &str = "ontogen-freq/1";

const BUNDLED: &str = include_str!("../data/freq.json");

#[derive(Debug, Error)]
pub enum SelectError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("frequency table parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("expected schema \"{FREQ_SCHEMA}\", found \"{0}\"")]
    Schema(String),
    #[error("invalid frequency table: {0}")]
    Invalid(String),
    #[error("nothing to rank")]
    NoCandidates,
}

/// Relative frequency per construction id or lemma, each in [0, 1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub default: f64,
    #[serde(default)]
    pub entries: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
struct FreqDoc {
    schema: String,
    #[serde(flatten)]
    table: FrequencyTable,
}

impl Default for FrequencyTable {
    fn default() -> Self {
        FrequencyTable::uniform(0.5)
    }
}

impl FrequencyTable {
    /// Every construction gets the same weight.
    pub fn uniform(weight: f64) -> Self {
        FrequencyTable {
            default: weight,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SelectError> {
        let doc: FreqDoc = serde_json::from_str(text).map_err(|e| SelectError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.schema != FREQ_SCHEMA {
            return Err(SelectError::Schema(doc.schema));
        }
        doc.table.validate()?;
        Ok(doc.table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SelectError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SelectError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        FrequencyTable::from_json(&text).map_err(|e| SelectError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// The sample table shipped with the crate.
    pub fn bundled() -> &'static FrequencyTable {
        static TABLE: OnceLock<FrequencyTable> = OnceLock::new();
        TABLE.get_or_init(|| FrequencyTable::from_json(BUNDLED).expect("bundled frequency table is valid"))
    }

    pub fn validate(&self) -> Result<(), SelectError> {
        let ok = |w: f64| w.is_finite() && (0.0..=1.0).contains(&w);
        if !ok(self.default) {
            return Err(SelectError::Invalid(format!(
                "default {} is outside [0, 1]",
                self.default
            )));
        }
        for (k, w) in &self.entries {
            if !ok(*w) {
                return Err(SelectError::Invalid(format!("{k}: weight {w} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Weight for a construction and the key it was found under.
    /// A lemma entry wins when lemma frequencies are enabled, then the
    /// sense id, then the default.
    pub fn lookup(&self, sense_id: &str, lemma: &str, lemma_frequency: bool) -> (f64, Option<&str>) {
        if lemma_frequency {
            if let Some((k, w)) = self.entries.get_key_value(lemma) {
                return (*w, Some(k));
            }
        }
        match self.entries.get_key_value(sense_id) {
            Some((k, w)) => (*w, Some(k)),
            None => (self.default, None),
        }
    }
}

/// A realized sentence together with the plan it came from.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub realization: Realization,
    pub solution: CandidateSolution,
}

impl Candidate {
    pub fn new(realization: Realization, solution: CandidateSolution) -> Self {
        Candidate { realization, solution }
    }

    pub fn text(&self) -> &str {
        &self.realization.text
    }

    pub fn set_score(&self) -> i64 {
        self.solution.source.score
    }

    /// The sense chosen for the main clause's frame.
    pub fn head_construction(&self) -> Option<&CandidateSense> {
        let frame = self
            .solution
            .clauses
            .first()
            .and_then(|c| c.frame.clone())
            .or_else(|| self.solution.leaves().into_iter().find_map(|l| l.frame.clone()))?;
        self.solution.source.head(&frame)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermKind {
    Pipeline,
    Frequency,
    Repetition,
    Length,
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TermKind::Pipeline => "pipeline",
            TermKind::Frequency => "frequency",
            TermKind::Repetition => "repetition",
            TermKind::Length => "length",
        };
        f.pad(s)
    }
}

/// One additive part of a sentence score.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreTerm {
    pub kind: TermKind,
    pub weight: f64,
    pub value: f64,
    pub contribution: f64,
    pub note: String,
}

impl fmt::Display for ScoreTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:+.3} {} ({} x {}): {}",
            self.contribution, self.kind, self.weight, self.value, self.note
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScoredSentence {
    pub text: String,
    pub score: f64,
    pub terms: Vec<ScoreTerm>,
    /// Sense choices behind the sentence.
    pub set: String,
    #[serde(skip)]
    pub candidate: Candidate,
}

impl ScoredSentence {
    pub fn term(&self, kind: TermKind) -> Option<&ScoreTerm> {
        self.terms.iter().find(|t| t.kind == kind)
    }

    /// Sum of the explanation terms, in order.
    pub fn explained_total(&self) -> f64 {
        self.terms.iter().map(|t| t.contribution).sum()
    }
}

fn strip_possessive(w: &str) -> &str {
    w.strip_suffix("'s").or_else(|| w.strip_suffix('\'')).unwrap_or(w)
}

/// Words of earlier sentences, possessives stripped.
fn history_words(history: &[String]) -> BTreeSet<String> {
    history
        .iter()
        .flat_map(|s| s.split_whitespace())
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric() && c != '\''))
        .map(|w| strip_possessive(w).to_string())
        .filter(|w| !w.is_empty())
        .collect()
}

/// Proper names in `names` that were already mentioned, either in the
/// history or earlier in the same sentence.
pub fn repeated_names<'a>(names: &[&'a str], history: &[String]) -> Vec<&'a str> {
    let mut seen = history_words(history);
    let mut out = Vec::new();
    for &n in names {
        if !seen.insert(n.to_string()) {
            out.push(n);
        }
    }
    out
}

pub fn score_sentence(
    candidate: &Candidate,
    history: &[String],
    weights: &WeightConfig,
    freq: &FrequencyTable,
) -> ScoredSentence {
    let mut terms = Vec::with_capacity(4);
    let set_score = candidate.set_score() as f64;
    terms.push(ScoreTerm {
        kind: TermKind::Pipeline,
        weight: weights.pipeline_score_weight,
        value: set_score,
        contribution: weights.pipeline_score_weight * set_score,
        note: "lexical selection score".into(),
    });

    let (f, note) = match candidate.head_construction() {
        Some(head) => {
            let (w, key) = freq.lookup(&head.sense.id, &head.lemma, weights.lemma_frequency);
            let note = match key {
                Some(k) => format!("{} ({}) listed as {k}", head.sense.id, head.lemma),
                None => format!("{} ({}) not listed; default", head.sense.id, head.lemma),
            };
            (w, note)
        }
        None => (freq.default, "no head construction; default".into()),
    };
    terms.push(ScoreTerm {
        kind: TermKind::Frequency,
        weight: weights.frequency_weight,
        value: f,
        contribution: weights.frequency_weight * f,
        note,
    });

    let repeated = repeated_names(&candidate.solution.proper_names(), history);
    let n = repeated.len() as f64;
    terms.push(ScoreTerm {
        kind: TermKind::Repetition,
        weight: weights.repetition_penalty,
        value: n,
        contribution: 0.0 - weights.repetition_penalty * n,
        note: if repeated.is_empty() {
            "no repeated names".into()
        } else {
            format!("repeats {}", repeated.join(", "))
        },
    });

    let tokens = candidate.realization.tokens.len() as f64;
    terms.push(ScoreTerm {
        kind: TermKind::Length,
        weight: weights.length_tie_break,
        value: tokens,
        contribution: 0.0 - weights.length_tie_break * tokens,
        note: format!("{tokens} tokens"),
    });

    let score = terms.iter().map(|t| t.contribution).sum();
    ScoredSentence {
        text: candidate.realization.text.clone(),
        score,
        terms,
        set: candidate.solution.source.label(),
        candidate: candidate.clone(),
    }
}

/// Descending score; ties by sentence text, then by sense choices.
pub fn compare(a: &ScoredSentence, b: &ScoredSentence) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.text.cmp(&b.text))
        .then_with(|| a.set.cmp(&b.set))
}

pub fn rank(
    candidates: &[Candidate],
    history: &[String],
    weights: &WeightConfig,
    freq: &FrequencyTable,
) -> Result<Vec<ScoredSentence>, SelectError> {
    if candidates.is_empty() {
        return Err(SelectError::NoCandidates);
    }
    let mut scored: Vec<ScoredSentence> = candidates
        .iter()
        .map(|c| score_sentence(c, history, weights, freq))
        .collect();
    scored.sort_by(compare);
    Ok(scored)
}
