//! Shows how a narrow selectional constraint makes "moor" win for ships,
//! and which fastening senses were excluded along the way.
//!
//!     cargo run --example moor_ranking

use std::path::PathBuf;

use ontogen::config::ScoringConfig;
use ontogen::knowledge::KnowledgeBase;
use ontogen::pipeline::{run_lexical_selection, DiscourseContext};
use ontogen::tmr::parse_tmr;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::load(data("ontology.json"), data("lexicon.json"), data("memory.json"))?;
    let tmr = parse_tmr(&std::fs::read_to_string(data("tmr/moor.json"))?)?;
    let sel = run_lexical_selection(&tmr, &kb, &DiscourseContext::from_tmr(&tmr), &ScoringConfig::default())?;

    let mut sets: Vec<_> = sel.sets.iter().collect();
    sets.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.label().cmp(&b.label())));
    for set in sets.iter().take(6) {
        println!("{:>4}  {}", set.score, set.label());
    }

    let best = sets[0];
    println!("\nledger of the best set:");
    for e in &best.ledger {
        println!("  {e}");
    }

    println!("\nexcluded:");
    for x in &sel.trace.exclusions {
        println!("  {} {} @ {}: {}", x.rule, x.sense, x.frame, x.note);
    }
    Ok(())
}
