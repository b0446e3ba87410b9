use std::collections::{BTreeMap, BTreeSet};

use super::{concept_of, Filler, RelativeTime, Tmr, TmrFrame, TIME_SLOTS};

/// The procedural routine language understanding writes for past-tense reports.
pub const ANCHOR_TIME_CALL: &str = "< find-anchor-time";

/// Removes word-level provenance so an understanding-side TMR can be used
/// as a content specification. The anchor-time call becomes
/// `before-reference`; everything else is kept. Idempotent.
pub fn strip_metadata(nlu: &Tmr) -> Tmr {
    let mut out = nlu.clone();
    for f in &mut out.frames {
        f.metadata = None;
        if let Some(fillers) = f.slots.get_mut("TIME") {
            for filler in fillers {
                if matches!(filler, Filler::Call(c) if c.trim() == ANCHOR_TIME_CALL) {
                    *filler = Filler::Relative(RelativeTime::BeforeReference);
                }
            }
        }
    }
    out
}

/// The frame's time relative to the TMR's reference time, if it can be determined.
///
/// `DATE`/`CLOCK-TIME` are compared to `reference_time`; a date without a
/// clock time counts as the whole day.
pub fn normalized_time(frame: &TmrFrame, tmr: &Tmr) -> Option<RelativeTime> {
    for filler in frame.slots.get("TIME").into_iter().flatten() {
        match filler {
            Filler::Relative(r) => return Some(*r),
            Filler::Call(c) if c.trim() == ANCHOR_TIME_CALL => return Some(RelativeTime::BeforeReference),
            _ => {}
        }
    }
    let date = match frame.first("DATE") {
        Some(Filler::Date(d)) => *d,
        _ => return None,
    };
    let now = tmr.reference_time?;
    let ordering = match frame.first("CLOCK-TIME") {
        Some(Filler::Clock(t)) => date.and_time(*t).cmp(&now),
        _ => date.cmp(&now.date()),
    };
    Some(match ordering {
        std::cmp::Ordering::Less => RelativeTime::BeforeReference,
        std::cmp::Ordering::Equal => RelativeTime::AtReference,
        std::cmp::Ordering::Greater => RelativeTime::AfterReference,
    })
}

// Names are facts about the referent held in episodic memory; a content
// specification may leave them out.
const IGNORED_FOR_EQUIVALENCE: [&str; 1] = ["HAS-NAME"];

#[derive(Clone, Debug, PartialEq)]
struct NormFrame {
    id: String,
    concept: String,
    slots: BTreeMap<String, Vec<Filler>>,
    coref: Option<String>,
}

fn normalize(tmr: &Tmr) -> Vec<NormFrame> {
    tmr.frames
        .iter()
        .map(|f| {
            let mut slots: BTreeMap<String, Vec<Filler>> = f
                .slots
                .iter()
                .filter(|(k, _)| !TIME_SLOTS.contains(&k.as_str()))
                .filter(|(k, _)| !IGNORED_FOR_EQUIVALENCE.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            match normalized_time(f, tmr) {
                Some(r) => {
                    slots.insert("TIME".into(), vec![Filler::Relative(r)]);
                }
                None => {
                    for key in TIME_SLOTS {
                        if let Some(v) = f.slots.get(key) {
                            slots.insert(key.to_string(), v.clone());
                        }
                    }
                }
            }
            NormFrame {
                id: f.id.clone(),
                concept: concept_of(f).unwrap_or(&f.id).to_string(),
                slots,
                coref: f.coref.clone(),
            }
        })
        .collect()
}

/// Checks whether two TMRs say the same thing up to instance numbering.
///
/// Metadata is ignored and time encodings are compared after normalization
/// to relative time. Returns the witness bijection (ids of `a` to ids of `b`)
/// when one exists.
pub fn tmr_isomorphic(a: &Tmr, b: &Tmr) -> Option<BTreeMap<String, String>> {
    let na = normalize(a);
    let nb = normalize(b);
    if na.len() != nb.len() {
        return None;
    }
    let mut mapping = BTreeMap::new();
    let mut used = BTreeSet::new();
    if search(0, &na, &nb, &mut mapping, &mut used) {
        Some(mapping)
    } else {
        None
    }
}

fn search(
    i: usize,
    a: &[NormFrame],
    b: &[NormFrame],
    mapping: &mut BTreeMap<String, String>,
    used: &mut BTreeSet<usize>,
) -> bool {
    if i == a.len() {
        return a.iter().all(|fa| {
            let fb = b.iter().find(|f| f.id == mapping[&fa.id]).expect("mapped");
            frames_match(fa, fb, mapping)
        });
    }
    let fa = &a[i];
    for (j, fb) in b.iter().enumerate() {
        if used.contains(&j) || fb.concept != fa.concept || fb.slots.len() != fa.slots.len() {
            continue;
        }
        if fa.slots.keys().ne(fb.slots.keys()) {
            continue;
        }
        mapping.insert(fa.id.clone(), fb.id.clone());
        used.insert(j);
        if search(i + 1, a, b, mapping, used) {
            return true;
        }
        used.remove(&j);
        mapping.remove(&fa.id);
    }
    false
}

fn map_ref(id: &str, mapping: &BTreeMap<String, String>) -> String {
    mapping.get(id).cloned().unwrap_or_else(|| id.to_string())
}

fn frames_match(fa: &NormFrame, fb: &NormFrame, mapping: &BTreeMap<String, String>) -> bool {
    if fa.coref.as_deref().map(|c| map_ref(c, mapping)) != fb.coref {
        return false;
    }
    fa.slots.iter().all(|(k, va)| {
        let Some(vb) = fb.slots.get(k) else {
            return false;
        };
        let mapped: Vec<String> = va
            .iter()
            .map(|f| match f {
                Filler::Instance(id) => format!("{:?}", Filler::Instance(map_ref(id, mapping))),
                other => format!("{other:?}"),
            })
            .collect();
        let mut mapped = mapped;
        let mut other: Vec<String> = vb.iter().map(|f| format!("{f:?}")).collect();
        mapped.sort();
        other.sort();
        mapped == other
    })
}
