//! Turns an understanding-side TMR (with word provenance and a procedural
//! time call) into a content specification and compares it with a
//! hand-written one.
//!
//!     cargo run --example strip_nlu_tmr

use std::path::PathBuf;

use ontogen::tmr::{parse_tmr, strip_metadata, tmr_isomorphic, to_json};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nlu = parse_tmr(&std::fs::read_to_string(data("tmr/tom_picture_nlu.json"))?)?;
    let spec = parse_tmr(&std::fs::read_to_string(data("tmr/tom_picture.json"))?)?;

    let stripped = strip_metadata(&nlu);
    print!("{}", to_json(&stripped));

    match tmr_isomorphic(&stripped, &spec) {
        Some(witness) => {
            println!("\nequivalent to tom_picture.json:");
            for (a, b) in witness {
                println!("  {a} -> {b}");
            }
        }
        None => println!("\nnot equivalent to tom_picture.json"),
    }
    println!("idempotent: {}", strip_metadata(&stripped) == stripped);
    Ok(())
}
