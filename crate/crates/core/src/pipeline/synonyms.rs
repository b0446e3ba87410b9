use super::CandidateSet;

/// Clones each set once per combination of synonyms of its chosen senses.
/// The headword comes first; ledgers and scores are unchanged.
pub fn expand_synonyms(sets: Vec<CandidateSet>) -> Vec<CandidateSet> {
    let mut out = Vec::new();
    for set in sets {
        let mut variants = vec![set];
        let keys: Vec<_> = variants[0].choices.keys().cloned().collect();
        for key in keys {
            let words: Vec<String> = {
                let c = &variants[0].choices[&key];
                std::iter::once(c.sense.headword.clone())
                    .chain(c.sense.synonyms.iter().cloned())
                    .collect()
            };
            if words.len() == 1 {
                continue;
            }
            let key = &key;
            variants = variants
                .into_iter()
                .flat_map(|v| {
                    words.iter().map(move |w| {
                        let mut clone = v.clone();
                        clone.choices.get_mut(key).expect("key").lemma = w.clone();
                        clone
                    })
                })
                .collect();
        }
        out.extend(variants);
    }
    out
}
