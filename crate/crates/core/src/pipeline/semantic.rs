use std::collections::BTreeMap;

use super::{
    content_slots, filler_value, CandidateSense, CandidateSet, ChoiceKey, LedgerEntry, PipelineError, Stage,
    REFERENCE_SLOTS,
};
use crate::config::ScoringConfig;
use crate::knowledge::{KnowledgeBase, MatchDegree, PropertyValue, SlotValue};
use crate::tmr::{concept_of_instance, Filler, Tmr, TmrFrame};

pub(crate) type Excluded = (Stage, String, String, String, String);

/// Outcome of checking one choice: score entries, or the reason it must go.
#[derive(Clone, Debug)]
pub enum Verdict {
    Keep(Vec<LedgerEntry>),
    Exclude { rule: String, note: String },
}

fn filler_concept(f: &Filler) -> Option<String> {
    match f {
        Filler::Instance(id) => concept_of_instance(id).ok().map(str::to_string),
        Filler::Concept(c) => Some(c.clone()),
        _ => None,
    }
}

fn show(f: &Filler) -> String {
    match f {
        Filler::Instance(s) | Filler::Concept(s) | Filler::Literal(s) => s.clone(),
        Filler::Scalar(x) => format!("{x}"),
        other => format!("{other:?}"),
    }
}

/// Checks one candidate's sem-struc against the TMR frame it would express.
pub fn verify_semantic(
    key: &ChoiceKey,
    cand: &CandidateSense,
    frame: &TmrFrame,
    modifier_props: &[&str],
    kb: &KnowledgeBase,
    cfg: &ScoringConfig,
) -> Result<Verdict, PipelineError> {
    let s = &cand.sense;
    let arg_rule = if s.is_argument_taking() {
        "semantic/argument-taking/exclude"
    } else {
        "semantic/non-argument-taking/exclude"
    };
    let exclude = |rule: &str, note: String| {
        Ok(Verdict::Exclude {
            rule: rule.to_string(),
            note,
        })
    };
    let entry =
        |rule: &str, delta: i64, note: String| LedgerEntry::new(Stage::Semantic, rule, &s.id, &frame.id, delta, note);
    let mut out = Vec::new();

    if let ChoiceKey::Modifier(_, prop) = key {
        let Some(value) = frame.first(prop).and_then(filler_value) else {
            return exclude(arg_rule, format!("{prop} has no value on {}", frame.id));
        };
        for (p, v) in &s.sem_struc.slots {
            let ok = match v {
                SlotValue::Bind { .. } => continue,
                SlotValue::Constraint(c) => kb.ontology.admits(c, &value),
                SlotValue::Scalar(x) => {
                    matches!(value, PropertyValue::Scalar(y) if (x - y).abs() <= cfg.feature_tolerance)
                }
                SlotValue::Literal(l) => matches!(&value, PropertyValue::Literal(y) if l.eq_ignore_ascii_case(y)),
            };
            if !ok {
                return exclude(
                    arg_rule,
                    format!("{p} of {} does not admit the TMR value of {prop}", s.id),
                );
            }
        }
        out.push(entry("semantic/modifier-match", 0, format!("expresses {prop}")));
        return Ok(Verdict::Keep(out));
    }

    for (p, v) in &s.sem_struc.slots {
        let present = frame.slots.get(p).and_then(|f| f.first());
        match v {
            SlotValue::Bind { sem, .. } => {
                let Some(f) = present else { continue };
                match filler_concept(f) {
                    Some(c) => {
                        let needed = kb.constraint_on(&s.sem_struc.head, p)?;
                        match kb.match_degree(&c, &needed, sem.as_ref())? {
                            MatchDegree::None => {
                                return exclude(
                                    arg_rule,
                                    format!("{p} filler {c} violates the constraint on {}", s.sem_struc.head),
                                );
                            }
                            MatchDegree::Exact => out.push(entry(
                                "semantic/exact-match",
                                cfg.exact,
                                format!("{p} filler {c} is exactly the constraint"),
                            )),
                            MatchDegree::Narrow => out.push(entry(
                                "semantic/narrow-constraint",
                                cfg.narrow,
                                format!("{p} filler {c} meets the lexical constraint"),
                            )),
                            MatchDegree::Default => out.push(entry(
                                "semantic/default-facet",
                                cfg.default_facet,
                                format!("{p} filler {c} meets the default facet"),
                            )),
                            MatchDegree::Sem => {}
                        }
                    }
                    None => {
                        let ok = match (sem, filler_value(f)) {
                            (Some(c), Some(val)) => kb.ontology.admits(c, &val),
                            (None, _) => true,
                            (Some(_), None) => false,
                        };
                        if !ok {
                            return exclude(
                                arg_rule,
                                format!("{p} filler {} violates the lexical constraint", show(f)),
                            );
                        }
                    }
                }
            }
            SlotValue::Constraint(c) => {
                let ok = present
                    .and_then(filler_value)
                    .is_some_and(|val| kb.ontology.admits(c, &val));
                if !ok {
                    return exclude(arg_rule, format!("asserts {p} that the TMR does not contain"));
                }
                out.push(entry(
                    "semantic/content-present",
                    cfg.exact,
                    format!("{p} asserted by the sense is in the TMR"),
                ));
            }
            SlotValue::Scalar(x) => {
                let Some(f) = present else { continue };
                let Filler::Scalar(y) = f else {
                    return exclude("semantic/feature-mismatch", format!("{p} is not scalar in the TMR"));
                };
                let d = (x - y).abs();
                if d > cfg.feature_tolerance {
                    return exclude(
                        "semantic/feature-mismatch",
                        format!(
                            "{p} {x} differs from TMR value {y} by more than {}",
                            cfg.feature_tolerance
                        ),
                    );
                }
                if d < 1e-9 {
                    out.push(entry(
                        "semantic/feature-match",
                        cfg.exact,
                        format!("{p} {x} matches the TMR"),
                    ));
                }
            }
            SlotValue::Literal(l) => match present {
                Some(Filler::Literal(y)) if l.eq_ignore_ascii_case(y) => {
                    if REFERENCE_SLOTS.contains(&p.as_str()) {
                        out.push(entry(
                            "semantic/identifies-referent",
                            0,
                            format!("{p} {l} names the referent"),
                        ));
                    } else {
                        out.push(entry(
                            "semantic/literal-match",
                            cfg.exact,
                            format!("{p} {l} matches the TMR"),
                        ));
                    }
                }
                Some(f) => return exclude(arg_rule, format!("{p} {l} conflicts with TMR value {}", show(f))),
                None => return exclude(arg_rule, format!("asserts {p} {l} that the TMR does not contain")),
            },
        }
    }
    for (p, _) in content_slots(frame) {
        if s.sem_struc.slots.contains_key(p) || modifier_props.contains(&p.as_str()) {
            continue;
        }
        out.push(entry(
            "semantic/uncovered-slot",
            cfg.uncovered_slot,
            format!("cannot express {p}"),
        ));
    }
    Ok(Verdict::Keep(out))
}

/// Scores every set against the TMR and drops those with a semantic violation.
pub fn prune_semantic(
    sets: Vec<CandidateSet>,
    tmr: &Tmr,
    kb: &KnowledgeBase,
    cfg: &ScoringConfig,
) -> Result<(Vec<CandidateSet>, Vec<Excluded>), PipelineError> {
    let mut cache: BTreeMap<(ChoiceKey, String), Verdict> = BTreeMap::new();
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    'sets: for mut set in sets {
        let mut entries = Vec::new();
        for (key, cand) in &set.choices {
            let ck = (key.clone(), cand.sense.id.clone());
            if !cache.contains_key(&ck) {
                let frame = tmr.frame(key.frame()).expect("choice keys come from TMR frames");
                let mods: Vec<&str> = set
                    .choices
                    .keys()
                    .filter_map(|k| match k {
                        ChoiceKey::Modifier(f, p) if f == &frame.id => Some(p.as_str()),
                        _ => None,
                    })
                    .collect();
                let v = verify_semantic(key, cand, frame, &mods, kb, cfg)?;
                cache.insert(ck.clone(), v);
            }
            match &cache[&ck] {
                Verdict::Keep(e) => entries.extend(e.iter().cloned()),
                Verdict::Exclude { rule, note } => {
                    excluded.push((
                        Stage::Semantic,
                        rule.clone(),
                        cand.sense.id.clone(),
                        cand.frame.clone(),
                        note.clone(),
                    ));
                    continue 'sets;
                }
            }
        }
        for e in entries {
            set.push(e);
        }
        kept.push(set);
    }
    Ok((kept, excluded))
}
