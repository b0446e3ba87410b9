//! Scoring and ranking knobs, loadable from an `ontogen-config/1` file.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CONFIG_SCHEMA: &str = "ontogen-config/1";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("expected schema \"{CONFIG_SCHEMA}\", found \"{0}\"")]
    Schema(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Additive integer score deltas used during lexical selection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoringConfig {
    /// Filler is exactly the constraining concept, or sense content is present in the TMR.
    pub exact: i64,
    /// Filler satisfies a lexical constraint tighter than the ontology's.
    pub narrow: i64,
    /// Filler satisfies the ontology's default facet.
    pub default_facet: i64,
    /// Per TMR slot the chosen sense cannot express. Negative.
    pub uncovered_slot: i64,
    /// Largest tolerated gap between a construction feature and the TMR value.
    pub feature_tolerance: f64,
    /// Upper bound on the number of aggregated candidate sets.
    pub cap: usize,
    pub emit_voice_variants: bool,
    pub emit_optional_variants: bool,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            exact: 20,
            narrow: 10,
            default_facet: 4,
            uncovered_slot: -5,
            feature_tolerance: 0.25,
            cap: 10_000,
            emit_voice_variants: false,
            emit_optional_variants: false,
        }
    }
}

/// Weights for final sentence ranking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightConfig {
    pub pipeline_score_weight: f64,
    pub frequency_weight: f64,
    pub repetition_penalty: f64,
    /// Per-token penalty favouring shorter sentences.
    pub length_tie_break: f64,
    /// Whether single-word lemmas may take frequency weight, or only constructions.
    pub lemma_frequency: bool,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            pipeline_score_weight: 1.0,
            frequency_weight: 10.0,
            repetition_penalty: 15.0,
            length_tie_break: 0.25,
            lemma_frequency: true,
        }
    }
}

impl WeightConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let all = [
            self.pipeline_score_weight,
            self.frequency_weight,
            self.repetition_penalty,
            self.length_tie_break,
        ];
        if all.iter().any(|w| !w.is_finite()) {
            return Err(ConfigError::Invalid("weights must be finite".into()));
        }
        if self.repetition_penalty < 0.0 {
            return Err(ConfigError::Invalid("repetition_penalty must be >= 0".into()));
        }
        Ok(())
    }

    pub fn scaled(&self, k: f64) -> Self {
        WeightConfig {
            pipeline_score_weight: self.pipeline_score_weight * k,
            frequency_weight: self.frequency_weight * k,
            repetition_penalty: self.repetition_penalty * k,
            length_tie_break: self.length_tie_break * k,
            lemma_frequency: self.lemma_frequency,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Config {
    #[serde(default)]
    pub scoring: ScoringConfig,
    #[serde(default)]
    pub weights: WeightConfig,
}

#[derive(Deserialize)]
struct ConfigDoc {
    schema: String,
    #[serde(flatten)]
    config: Config,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.schema != CONFIG_SCHEMA {
            return Err(ConfigError::Schema(doc.schema));
        }
        let c = doc.config;
        c.weights.validate()?;
        if !(0.0..=1.0).contains(&c.scoring.feature_tolerance) {
            return Err(ConfigError::Invalid("feature_tolerance must lie in [0, 1]".into()));
        }
        if c.scoring.cap == 0 {
            return Err(ConfigError::Invalid("cap must be positive".into()));
        }
        Ok(c)
    }
}
