use super::semantic::Excluded;
use super::{content_slots, CandidateSense, CandidateSet, ChoiceKey, PipelineError, Stage, CORE_ROLES, EVENT, OBJECT};
use crate::knowledge::{KnowledgeBase, SynCategory, VarId};
use crate::tmr::{Tmr, TmrFrame};

fn violation(
    set: &CandidateSet,
    key: &ChoiceKey,
    cand: &CandidateSense,
    frame: &TmrFrame,
    kb: &KnowledgeBase,
) -> Option<(&'static str, String)> {
    let s = &cand.sense;
    let concept = frame.concept().unwrap_or_default();
    if matches!(key, ChoiceKey::Modifier(..)) {
        return None;
    }
    if cand.is_pronoun() {
        let has_mods = set.modifiers_of(&frame.id).next().is_some();
        if kb.ontology.is_a_lenient(concept, OBJECT) && (has_mods || content_slots(frame).next().is_some()) {
            return Some((
                "syntactic/pronoun-modified",
                format!("a pronoun cannot carry the modifiers of {}", frame.id),
            ));
        }
        if kb.ontology.is_a_lenient(concept, EVENT) && content_slots(frame).next().is_some() {
            return Some((
                "syntactic/pronoun-modified",
                format!("{} has case roles a pronoun cannot express", frame.id),
            ));
        }
        return None;
    }
    for node in &s.syn_struc {
        let Some(var) = node.var.filter(|v| *v != VarId::HEAD) else {
            continue;
        };
        let Some((prop, _)) = s.sem_struc.binding_of(var) else {
            continue;
        };
        if s.sem_struc.null_sem.contains(&var) {
            continue;
        }
        let filler = frame.slots.get(prop).and_then(|f| f.first());
        match filler {
            None if node.opt => {}
            None => {
                let passive_ok = node.cat == SynCategory::Subj
                    && prop == "AGENT"
                    && s.is_transitive()
                    && s.syn_struc.iter().any(|n| {
                        n.cat == SynCategory::DirectObject
                            && n.var
                                .and_then(|v| s.sem_struc.binding_of(v))
                                .is_some_and(|(p, _)| frame.slots.contains_key(p))
                    });
                if !passive_ok {
                    return Some((
                        "syntactic/unfilled-obligatory",
                        format!("{var} ({prop}) is obligatory but the TMR has no {prop}"),
                    ));
                }
            }
            Some(f) => {
                if node.root.is_empty() {
                    continue;
                }
                let Some(id) = f.as_instance() else { continue };
                let Some(filler) = set.head(id) else { continue };
                let word = filler
                    .decoration
                    .as_ref()
                    .and_then(|d| d.pronoun_form.clone())
                    .unwrap_or_else(|| filler.lemma.clone());
                if !node.root.iter().any(|r| r.eq_ignore_ascii_case(&word)) {
                    return Some((
                        "syntactic/root-mismatch",
                        format!("{var} requires {:?}, filler realizes as {word}", node.root),
                    ));
                }
            }
        }
    }
    for role in CORE_ROLES {
        if frame.instance(role).is_some() && !s.sem_struc.slots.contains_key(role) {
            return Some((
                "syntactic/unhosted-argument",
                format!("no syntactic position for {role}"),
            ));
        }
    }
    None
}

/// Drops sets whose chosen senses cannot be assembled into a sentence
/// for this TMR.
pub fn prune_syntactic(
    sets: Vec<CandidateSet>,
    tmr: &Tmr,
    kb: &KnowledgeBase,
) -> Result<(Vec<CandidateSet>, Vec<Excluded>), PipelineError> {
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    'sets: for set in sets {
        for (key, cand) in &set.choices {
            let frame = tmr.frame(key.frame()).expect("choice keys come from TMR frames");
            if let Some((rule, note)) = violation(&set, key, cand, frame, kb) {
                excluded.push((
                    Stage::Syntactic,
                    rule.to_string(),
                    cand.sense.id.clone(),
                    cand.frame.clone(),
                    note,
                ));
                continue 'sets;
            }
        }
        kept.push(set);
    }
    Ok((kept, excluded))
}
