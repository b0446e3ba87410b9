//! Text meaning representations (TMRs): frames of concept instances whose
//! slots are filled by other instances, concepts or literals.
//!
//! TMR files use the `ontogen-tmr/1` JSON schema. Parsing validates the
//! frame set and completes inverse relations (`AGENT` / `AGENT-OF`, ...)
//! when only one direction is written.

mod transform;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{NaiveDate, NaiveDateTime, NaiveTime};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use transform::{normalized_time, strip_metadata, tmr_isomorphic, ANCHOR_TIME_CALL};

pub const TMR_SCHEMA: &str = "ontogen-tmr/1";

/// Slots that carry time information rather than content.
pub const TIME_SLOTS: [&str; 3] = ["TIME", "DATE", "CLOCK-TIME"];

#[derive(Debug, Error, PartialEq)]
pub enum TmrError {
    #[error("TMR parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("expected schema \"{TMR_SCHEMA}\", found \"{0}\"")]
    Schema(String),
    #[error("duplicate instance id {0}")]
    DuplicateInstance(String),
    #[error("malformed instance id {0:?} (expected CONCEPT-n)")]
    MalformedId(String),
    #[error("{frame} has {property} {filler} but {filler} declares {inverse} {declared:?}")]
    InverseContradiction {
        frame: String,
        property: String,
        filler: String,
        inverse: String,
        declared: Vec<String>,
    },
    #[error("{frame}: procedural call {call:?} outside a TIME slot ({property})")]
    MisplacedCall {
        frame: String,
        property: String,
        call: String,
    },
    #[error("{frame}.{property}: scalar {value} outside [0, 1]")]
    ScalarRange {
        frame: String,
        property: String,
        value: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelativeTime {
    BeforeReference,
    AtReference,
    AfterReference,
}

/// One filler of a TMR slot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filler {
    Instance(String),
    Concept(String),
    Scalar(f64),
    /// Set size, for `CARDINALITY`.
    Count(u32),
    Literal(String),
    Date(NaiveDate),
    Clock(#[serde(with = "clock_format")] NaiveTime),
    /// Procedural semantic routine, e.g. `< find-anchor-time`.
    Call(String),
    Relative(RelativeTime),
}

impl Filler {
    pub fn as_instance(&self) -> Option<&str> {
        match self {
            Filler::Instance(s) => Some(s),
            _ => None,
        }
    }
}

mod clock_format {
    use chrono::NaiveTime;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &NaiveTime, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&t.format("%H:%M").to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<NaiveTime, D::Error> {
        let s = String::deserialize(d)?;
        NaiveTime::parse_from_str(&s, "%H:%M")
            .or_else(|_| NaiveTime::parse_from_str(&s, "%H:%M:%S"))
            .map_err(serde::de::Error::custom)
    }
}

/// Word-level provenance attached by language understanding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub from_sense: String,
    pub word_num: u32,
}

pub type Slots = BTreeMap<String, Vec<Filler>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmrFrame {
    pub id: String,
    #[serde(
        default,
        serialize_with = "ser_slots",
        deserialize_with = "de_slots",
        skip_serializing_if = "BTreeMap::is_empty"
    )]
    pub slots: Slots,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coref: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl TmrFrame {
    pub fn new(id: impl Into<String>) -> Self {
        TmrFrame {
            id: id.into(),
            slots: BTreeMap::new(),
            coref: None,
            metadata: None,
        }
    }

    pub fn with(mut self, property: &str, filler: Filler) -> Self {
        self.slots.entry(property.to_string()).or_default().push(filler);
        self
    }

    pub fn concept(&self) -> Result<&str, TmrError> {
        concept_of(self)
    }

    pub fn first(&self, property: &str) -> Option<&Filler> {
        self.slots.get(property)?.first()
    }

    pub fn instance(&self, property: &str) -> Option<&str> {
        self.first(property)?.as_instance()
    }

    pub fn scalar(&self, property: &str) -> Option<f64> {
        match self.first(property)? {
            Filler::Scalar(x) => Some(*x),
            _ => None,
        }
    }

    pub fn literal(&self, property: &str) -> Option<&str> {
        match self.first(property)? {
            Filler::Literal(s) => Some(s),
            _ => None,
        }
    }

    pub fn cardinality(&self) -> u32 {
        match self.first("CARDINALITY") {
            Some(Filler::Count(n)) => *n,
            _ => 1,
        }
    }

    pub fn is_plural(&self) -> bool {
        self.cardinality() > 1
    }
}

/// Discourse state that travels with a TMR: referents that are currently
/// in focus and the sentences already produced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discourse {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub salient: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<String>,
}

impl Discourse {
    pub fn is_empty(&self) -> bool {
        self.salient.is_empty() && self.history.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Tmr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speaker: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hearer: Option<String>,
    /// The agent's "now".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_time: Option<NaiveDateTime>,
    #[serde(default, skip_serializing_if = "Discourse::is_empty")]
    pub discourse: Discourse,
    #[serde(default)]
    pub frames: Vec<TmrFrame>,
}

#[derive(Serialize, Deserialize)]
struct TmrDoc {
    schema: String,
    #[serde(flatten)]
    tmr: Tmr,
}

impl Tmr {
    pub fn frame(&self, id: &str) -> Option<&TmrFrame> {
        self.frames.iter().find(|f| f.id == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.frame(id).is_some()
    }

    /// Validates the frame set and completes missing inverse relations.
    pub fn validated(mut self) -> Result<Self, TmrError> {
        let mut ids = BTreeSet::new();
        for f in &self.frames {
            concept_of_instance(&f.id).map_err(|_| TmrError::MalformedId(f.id.clone()))?;
            if !ids.insert(f.id.clone()) {
                return Err(TmrError::DuplicateInstance(f.id.clone()));
            }
            for (prop, fillers) in &f.slots {
                for filler in fillers {
                    match filler {
                        Filler::Call(call) if prop != "TIME" => {
                            return Err(TmrError::MisplacedCall {
                                frame: f.id.clone(),
                                property: prop.clone(),
                                call: call.clone(),
                            })
                        }
                        Filler::Scalar(x) if !(0.0..=1.0).contains(x) => {
                            return Err(TmrError::ScalarRange {
                                frame: f.id.clone(),
                                property: prop.clone(),
                                value: *x,
                            })
                        }
                        _ => {}
                    }
                }
            }
        }
        self.complete_inverses()?;
        Ok(self)
    }

    fn complete_inverses(&mut self) -> Result<(), TmrError> {
        let declared: BTreeMap<String, Slots> = self.frames.iter().map(|f| (f.id.clone(), f.slots.clone())).collect();
        let mut additions: Vec<(String, String, String)> = Vec::new();
        for (id, slots) in &declared {
            for (prop, fillers) in slots {
                let inverse = inverse_property(prop);
                for target in fillers.iter().filter_map(Filler::as_instance) {
                    let Some(target_slots) = declared.get(target) else {
                        continue;
                    };
                    match target_slots.get(&inverse) {
                        Some(back) => {
                            if !back.iter().any(|b| b.as_instance() == Some(id.as_str())) {
                                return Err(TmrError::InverseContradiction {
                                    frame: id.clone(),
                                    property: prop.clone(),
                                    filler: target.to_string(),
                                    inverse,
                                    declared: back
                                        .iter()
                                        .filter_map(|b| b.as_instance().map(str::to_string))
                                        .collect(),
                                });
                            }
                        }
                        None => additions.push((target.to_string(), inverse.clone(), id.clone())),
                    }
                }
            }
        }
        for (target, inverse, source) in additions {
            let frame = self.frames.iter_mut().find(|f| f.id == target).expect("declared frame");
            let list = frame.slots.entry(inverse).or_default();
            if !list.iter().any(|f| f.as_instance() == Some(source.as_str())) {
                list.push(Filler::Instance(source));
            }
        }
        Ok(())
    }
}

/// `AGENT` <-> `AGENT-OF`.
pub fn inverse_property(property: &str) -> String {
    match property.strip_suffix("-OF") {
        Some(base) => base.to_string(),
        None => format!("{property}-OF"),
    }
}

pub fn is_inverse_property(property: &str) -> bool {
    property.ends_with("-OF")
}

/// The concept an instance id names: `FASTEN-18` -> `FASTEN`.
pub fn concept_of_instance(id: &str) -> Result<&str, TmrError> {
    let malformed = || TmrError::MalformedId(id.to_string());
    let (prefix, index) = id.rsplit_once('-').ok_or_else(malformed)?;
    if prefix.is_empty() || index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    Ok(prefix)
}

pub fn concept_of(frame: &TmrFrame) -> Result<&str, TmrError> {
    concept_of_instance(&frame.id)
}

pub fn parse_tmr(text: &str) -> Result<Tmr, TmrError> {
    let doc: TmrDoc = serde_json::from_str(text).map_err(|e| TmrError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.schema != TMR_SCHEMA {
        return Err(TmrError::Schema(doc.schema));
    }
    doc.tmr.validated()
}

/// Pretty JSON in the `ontogen-tmr/1` schema, newline-terminated.
pub fn to_json(tmr: &Tmr) -> String {
    let doc = TmrDoc {
        schema: TMR_SCHEMA.to_string(),
        tmr: tmr.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("TMR serializes");
    s.push('\n');
    s
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(Filler),
    Many(Vec<Filler>),
}

fn de_slots<'de, D: Deserializer<'de>>(d: D) -> Result<Slots, D::Error> {
    let raw = BTreeMap::<String, OneOrMany>::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|(k, v)| {
            let list = match v {
                OneOrMany::One(f) => vec![f],
                OneOrMany::Many(fs) => fs,
            };
            (k, list)
        })
        .collect())
}

fn ser_slots<S: Serializer>(slots: &Slots, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(slots.len()))?;
    for (k, v) in slots {
        if v.len() == 1 {
            map.serialize_entry(k, &v[0])?;
        } else {
            map.serialize_entry(k, v)?;
        }
    }
    map.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concept_prefix() {
        assert_eq!(concept_of_instance("FASTEN-18").unwrap(), "FASTEN");
        assert_eq!(concept_of_instance("HUMAN-104").unwrap(), "HUMAN");
        assert_eq!(concept_of_instance("REQUEST-ACTION-1").unwrap(), "REQUEST-ACTION");
        assert!(concept_of_instance("FASTEN").is_err());
        assert!(concept_of_instance("FASTEN-").is_err());
        assert!(concept_of_instance("-3").is_err());
    }

    fn doc(frames: &str) -> String {
        format!(r#"{{"schema":"ontogen-tmr/1","frames":{frames}}}"#)
    }

    #[test]
    fn inverses_completed() {
        let t = parse_tmr(&doc(
            r#"[{"id":"FASTEN-1","slots":{"AGENT":{"instance":"HUMAN-1"}}},{"id":"HUMAN-1"}]"#,
        ))
        .unwrap();
        assert_eq!(t.frame("HUMAN-1").unwrap().instance("AGENT-OF"), Some("FASTEN-1"));
    }

    #[test]
    fn inverse_contradiction() {
        let err = parse_tmr(&doc(r#"[{"id":"FASTEN-1","slots":{"AGENT":{"instance":"HUMAN-1"}}},
                {"id":"HUMAN-1","slots":{"AGENT-OF":{"instance":"WALK-2"}}},
                {"id":"WALK-2"}]"#))
        .unwrap_err();
        assert!(matches!(err, TmrError::InverseContradiction { .. }), "{err}");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = parse_tmr(&doc(r#"[{"id":"WALL-1"},{"id":"WALL-1"}]"#)).unwrap_err();
        assert_eq!(err, TmrError::DuplicateInstance("WALL-1".into()));
    }

    #[test]
    fn call_only_in_time() {
        let err = parse_tmr(&doc(r#"[{"id":"WALK-1","slots":{"THEME":{"call":"< foo"}}}]"#)).unwrap_err();
        assert!(matches!(err, TmrError::MisplacedCall { .. }));
    }

    #[test]
    fn clock_round_trips_as_hh_mm() {
        let t = parse_tmr(&doc(r#"[{"id":"WALK-1","slots":{"CLOCK-TIME":{"clock":"09:02"}}}]"#)).unwrap();
        assert!(to_json(&t).contains("\"09:02\""));
    }

    #[test]
    fn malformed_json_reports_position() {
        match parse_tmr("{\"schema\": ") {
            Err(TmrError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }
}
