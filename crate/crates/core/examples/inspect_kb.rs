//! Queries against the knowledge base: subsumption, inherited constraints,
//! senses by concept and by property value.
//!
//!     cargo run --example inspect_kb

use std::path::PathBuf;

use ontogen::knowledge::{KnowledgeBase, PropertyValue};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::load(data("ontology.json"), data("lexicon.json"), data("memory.json"))?;

    println!(
        "SHIP is-a SURFACE-WATER-VEHICLE: {}",
        kb.is_a("SHIP", "SURFACE-WATER-VEHICLE")?
    );
    println!("PAINTING is-a HUMAN: {}", kb.is_a("PAINTING", "HUMAN")?);

    let d = kb.constraint_on("FASTEN", "DESTINATION")?;
    println!("FASTEN.DESTINATION: {}", serde_json::to_string(&d)?);

    println!("\nsenses headed by FASTEN:");
    for s in kb.senses_by_head_concept("FASTEN") {
        println!("  {:<12} {:<8} {:?}", s.id, s.headword, s.synonyms);
    }

    println!("\nAESTHETIC-ATTRIBUTE 0.8:");
    for s in kb.senses_for_property("AESTHETIC-ATTRIBUTE", &PropertyValue::Scalar(0.8)) {
        println!("  {}", s.id);
    }
    Ok(())
}
