use std::collections::BTreeMap;

use super::{CandidateSet, Candidates};

pub struct Aggregated {
    pub sets: Vec<CandidateSet>,
    /// True when the full product exceeded the cap.
    pub truncated: bool,
}

/// The Cartesian product of the per-meaning candidate lists, in key order,
/// stopping at `cap` sets. Each set's ledger is the concatenation of its
/// members' ledgers.
pub fn aggregate_sets(candidates: &Candidates, cap: usize) -> Aggregated {
    let lists: Vec<_> = candidates.iter().collect();
    if lists.is_empty() || lists.iter().any(|(_, l)| l.is_empty()) {
        return Aggregated {
            sets: Vec::new(),
            truncated: false,
        };
    }
    let mut idx = vec![0usize; lists.len()];
    let mut sets = Vec::new();
    loop {
        if sets.len() == cap {
            return Aggregated { sets, truncated: true };
        }
        let mut set = CandidateSet {
            choices: BTreeMap::new(),
            score: 0,
            ledger: Vec::new(),
        };
        for (k, (key, list)) in lists.iter().enumerate() {
            let c = &list[idx[k]];
            for e in &c.ledger {
                set.push(e.clone());
            }
            set.choices.insert((*key).clone(), c.clone());
        }
        sets.push(set);

        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return Aggregated { sets, truncated: false };
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].1.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
