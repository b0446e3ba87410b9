use super::{
    frame_concept, CandidateSense, Candidates, ChoiceKey, Determiner, DiscourseContext, LedgerEntry, PipelineError,
    ReferenceDecoration, Stage, HUMAN, OBJECT,
};
use crate::knowledge::{Gender, KnowledgeBase, Number, Pos};
use crate::tmr::{Filler, Tmr, TmrFrame};

pub struct ReferenceOutcome {
    pub candidates: Candidates,
    /// The TMR with names and genders filled in from episodic memory.
    pub tmr: Tmr,
    pub notes: Vec<LedgerEntry>,
}

struct Referent {
    person: u8,
    number: Number,
    gender: Option<Gender>,
    known: bool,
    salient: bool,
    name: Option<String>,
}

fn note(rule: &str, sense: &str, frame: &str, text: impl Into<String>) -> LedgerEntry {
    LedgerEntry::new(Stage::Reference, rule, sense, frame, 0, text)
}

/// Copies name and gender facts about TMR referents from episodic memory.
fn enrich(tmr: &Tmr, kb: &KnowledgeBase, notes: &mut Vec<LedgerEntry>) -> Tmr {
    let mut out = tmr.clone();
    for frame in &mut out.frames {
        let Ok(concept) = frame.concept() else { continue };
        if !kb.ontology.is_a_lenient(concept, HUMAN) {
            continue;
        }
        let ids: Vec<String> = std::iter::once(frame.id.clone()).chain(frame.coref.clone()).collect();
        for (slot, lookup) in [("HAS-NAME", 0), ("GENDER", 1)] {
            if frame.slots.contains_key(slot) {
                continue;
            }
            let found = ids.iter().find_map(|id| {
                if lookup == 0 {
                    kb.memory.name_of(id)
                } else {
                    kb.memory.gender_of(id)
                }
            });
            if let Some(v) = found {
                let id = frame.id.clone();
                frame
                    .slots
                    .insert(slot.to_string(), vec![Filler::Literal(v.to_string())]);
                notes.push(note(
                    "reference/from-memory",
                    "-",
                    &id,
                    format!("{slot} {v} recalled from episodic memory"),
                ));
            }
        }
    }
    out
}

fn referent(frame: &TmrFrame, tmr: &Tmr, kb: &KnowledgeBase, ctx: &DiscourseContext) -> Referent {
    let is = |id: &Option<String>| {
        id.as_deref()
            .is_some_and(|s| s == frame.id || frame.coref.as_deref() == Some(s))
    };
    let person = if is(&tmr.speaker) {
        1
    } else if is(&tmr.hearer) {
        2
    } else {
        3
    };
    let concept = frame.concept().unwrap_or_default();
    let human = kb.ontology.is_a_lenient(concept, HUMAN);
    let gender = if human {
        match frame.literal("GENDER").map(str::to_ascii_lowercase).as_deref() {
            Some("male") => Some(Gender::Male),
            Some("female") => Some(Gender::Female),
            _ => None,
        }
    } else {
        Some(Gender::Neuter)
    };
    Referent {
        person,
        number: if frame.is_plural() {
            Number::Plural
        } else {
            Number::Singular
        },
        gender,
        known: frame.coref.is_some() || kb.memory.contains(&frame.id),
        salient: ctx.salient.contains(&frame.id) || frame.coref.as_ref().is_some_and(|c| ctx.salient.contains(c)),
        name: human.then(|| frame.literal("HAS-NAME").map(str::to_string)).flatten(),
    }
}

fn pronoun_agrees(c: &CandidateSense, r: &Referent) -> bool {
    let Some(p) = c.sense.pronoun else { return false };
    p.person == r.person
        && p.number.is_none_or(|n| n == r.number)
        && match (p.gender, r.gender) {
            (None, _) => true,
            (Some(g), Some(h)) => g == h,
            (Some(_), None) => false,
        }
}

/// Decides how each nominal referent may be expressed: pronoun, proper name,
/// or common noun with a determiner.
pub fn manage_reference(
    mut candidates: Candidates,
    tmr: &Tmr,
    kb: &KnowledgeBase,
    ctx: &DiscourseContext,
) -> Result<ReferenceOutcome, PipelineError> {
    let mut notes = Vec::new();
    let tmr = enrich(tmr, kb, &mut notes);
    let keys: Vec<ChoiceKey> = candidates.keys().cloned().collect();
    for key in keys {
        let ChoiceKey::Head(id) = &key else { continue };
        let frame = tmr.frame(id).expect("candidate keys come from TMR frames");
        let concept = frame_concept(frame)?;
        let list = candidates.remove(&key).unwrap_or_default();
        if !kb.ontology.is_a_lenient(concept, OBJECT) {
            candidates.insert(key, list);
            continue;
        }
        let r = referent(frame, &tmr, kb, ctx);
        let modifiers: Vec<String> = candidates
            .keys()
            .filter_map(|k| match k {
                ChoiceKey::Modifier(f, p) if f == id => Some(p.clone()),
                _ => None,
            })
            .collect();
        let mut kept: Vec<CandidateSense> = Vec::new();

        if r.person != 3 {
            let pronouns: Vec<_> = list.iter().filter(|c| pronoun_agrees(c, &r)).cloned().collect();
            if pronouns.is_empty() {
                notes.push(note(
                    "reference/no-deictic-pronoun",
                    "-",
                    id,
                    format!("no person-{} pronoun in the lexicon", r.person),
                ));
                kept = list.into_iter().filter(|c| !c.is_pronoun()).collect();
            } else {
                let who = if r.person == 1 { "speaker" } else { "hearer" };
                for mut c in pronouns {
                    let sid = c.sense.id.clone();
                    c.ledger
                        .push(note("reference/deictic", &sid, id, format!("referent is the {who}")));
                    kept.push(c);
                }
            }
        } else {
            let named = r.name.is_some() && list.iter().any(|c| c.sense.pos == Pos::ProperNoun);
            for mut c in list {
                let sid = c.sense.id.clone();
                if c.is_pronoun() {
                    if !(r.salient && pronoun_agrees(&c, &r)) {
                        continue;
                    }
                    c.ledger
                        .push(note("reference/pronoun", &sid, id, "referent is salient"));
                    kept.push(c);
                    continue;
                }
                if c.sense.pos == Pos::ProperNoun {
                    c.ledger
                        .push(note("reference/name", &sid, id, "proper name, no determiner"));
                    kept.push(c);
                    continue;
                }
                if named {
                    continue;
                }
                if let Some(target) = &frame.coref {
                    let resolved = tmr.contains(target) || kb.memory.contains(target) || ctx.salient.contains(target);
                    if !resolved {
                        notes.push(note(
                            "reference/unresolved-coref",
                            &sid,
                            id,
                            format!("coreference target {target} is unknown; treating as definite"),
                        ));
                    }
                }
                if r.known {
                    c.ledger
                        .push(note("reference/definite", &sid, id, "referent already known"));
                    kept.push(c.decorated(Determiner::Definite, &modifiers));
                } else if r.number == Number::Plural {
                    let mut some = c.clone();
                    some.ledger
                        .push(note("reference/plural-some", &sid, id, "new plural referent"));
                    kept.push(some.decorated(Determiner::Some, &modifiers));
                    c.ledger
                        .push(note("reference/plural-bare", &sid, id, "new plural referent"));
                    kept.push(c.decorated(Determiner::Bare, &modifiers));
                } else if c.sense.mass {
                    c.ledger.push(note("reference/mass", &sid, id, "new mass referent"));
                    kept.push(c.decorated(Determiner::Bare, &modifiers));
                } else {
                    c.ledger
                        .push(note("reference/indefinite", &sid, id, "new singular referent"));
                    kept.push(c.decorated(Determiner::Indefinite, &modifiers));
                }
            }
        }
        for c in &mut kept {
            if c.decoration.is_none() {
                let pronoun_form = c.is_pronoun().then(|| c.sense.headword.clone());
                c.decoration = Some(ReferenceDecoration {
                    determiner: Determiner::None,
                    pronoun_form,
                    modifiers: modifiers.clone(),
                });
            }
        }
        kept.sort_by_key(|c| c.sort_key());
        candidates.insert(key, kept);
    }
    Ok(ReferenceOutcome { candidates, tmr, notes })
}

impl CandidateSense {
    fn decorated(mut self, determiner: Determiner, modifiers: &[String]) -> Self {
        self.decoration = Some(ReferenceDecoration {
            determiner,
            pronoun_form: None,
            modifiers: modifiers.to_vec(),
        });
        self
    }
}
