use std::sync::Arc;

use super::{
    attribute_slots, filler_value, frame_concept, CandidateSense, Candidates, ChoiceKey, LedgerEntry, PipelineError,
    Stage,
};
use crate::knowledge::{KnowledgeBase, LexSense};
use crate::tmr::Tmr;

/// Collects, for every TMR frame, the senses that could express it.
///
/// A frame's own concept is tried first; if it has no (non-pronoun) senses,
/// the nearest lexicalized ancestor is used. Pronoun senses are inherited
/// from every ancestor. Attribute slots with matching modifier senses get
/// their own choice.
pub fn extract_candidates(tmr: &Tmr, kb: &KnowledgeBase) -> Result<Candidates, PipelineError> {
    let mut out = Candidates::new();
    for frame in &tmr.frames {
        let concept = frame_concept(frame)?;
        kb.ontology.concept(concept)?;
        let ancestors = kb.ontology.ancestors_bfs(concept);

        let mut heads: Vec<CandidateSense> = Vec::new();
        let lexical = ancestors.iter().find_map(|a| {
            let senses: Vec<Arc<LexSense>> = kb
                .senses_by_head_concept(a)
                .into_iter()
                .filter(|s| s.pronoun.is_none() && !s.is_modifier())
                .collect();
            (!senses.is_empty()).then_some((a, senses))
        });
        if let Some((via, senses)) = lexical {
            let (rule, note) = if via == concept {
                ("extract/head-concept", format!("sem-struc headed by {concept}"))
            } else {
                (
                    "extract/ancestor-fallback",
                    format!("{concept} is unlexicalized; using ancestor {via}"),
                )
            };
            for s in senses {
                let mut c = CandidateSense::new(s, &frame.id);
                c.ledger.push(LedgerEntry::new(
                    Stage::Extract,
                    rule,
                    &c.sense.id,
                    &frame.id,
                    0,
                    note.clone(),
                ));
                heads.push(c);
            }
        }
        for a in &ancestors {
            for s in kb.senses_by_head_concept(a).into_iter().filter(|s| s.pronoun.is_some()) {
                if heads.iter().any(|h| h.sense.id == s.id) {
                    continue;
                }
                let mut c = CandidateSense::new(s, &frame.id);
                c.ledger.push(LedgerEntry::new(
                    Stage::Extract,
                    "extract/pronoun",
                    &c.sense.id,
                    &frame.id,
                    0,
                    format!("pronoun for {a}"),
                ));
                heads.push(c);
            }
        }
        if heads.is_empty() {
            return Err(PipelineError::NoRealizableSense {
                frame: frame.id.clone(),
                concept: concept.to_string(),
            });
        }
        heads.sort_by_key(|c| c.sense.id.clone());
        out.insert(ChoiceKey::Head(frame.id.clone()), heads);

        for (property, filler) in attribute_slots(frame) {
            let Some(value) = filler_value(filler) else { continue };
            let mut mods: Vec<CandidateSense> = kb
                .senses_for_property(property, &value)
                .into_iter()
                .map(|s| {
                    let mut c = CandidateSense::new(s, &frame.id);
                    c.ledger.push(LedgerEntry::new(
                        Stage::Extract,
                        "extract/property-modifier",
                        &c.sense.id,
                        &frame.id,
                        0,
                        format!("expresses {property}"),
                    ));
                    c
                })
                .collect();
            if mods.is_empty() {
                continue;
            }
            mods.sort_by_key(|c| c.sense.id.clone());
            out.insert(ChoiceKey::Modifier(frame.id.clone(), property.clone()), mods);
        }
    }
    Ok(out)
}
