//! Generates sentences for "Tom fastened a picture to the wall" and shows
//! how many candidates survived each stage.
//!
//!     cargo run --example running_example

use std::path::PathBuf;

use ontogen::config::Config;
use ontogen::generate::{generate, GenerateOptions};
use ontogen::knowledge::KnowledgeBase;
use ontogen::selector::FrequencyTable;
use ontogen::tmr::parse_tmr;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::load(data("ontology.json"), data("lexicon.json"), data("memory.json"))?;
    let tmr = parse_tmr(&std::fs::read_to_string(data("tmr/tom_picture.json"))?)?;
    let report = generate(
        &tmr,
        &kb,
        &Config::default(),
        FrequencyTable::bundled(),
        GenerateOptions::default(),
    )?;

    for (i, s) in report.top(5).enumerate() {
        println!("{:>2}. {}  [{:.3}]", i + 1, s.text, s.score);
    }
    let c = &report.counts;
    println!();
    println!(
        "candidates: {} extracted, {} after reference",
        c.candidates_extracted, c.candidates_after_reference
    );
    println!(
        "sets: {} aggregated, {} after semantic, {} after syntactic, {} after synonyms",
        c.sets_aggregated, c.sets_after_semantic, c.sets_after_syntactic, c.sets_after_synonyms
    );
    println!("{} unique sentences", c.unique_sentences);
    Ok(())
}
