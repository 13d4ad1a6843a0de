//! The multigrid dual: half-line word and a round patch.

use rosa::edgeword::billiard_prefix;
use rosa::multigrid::{cone_carries_word, dual_patch, halfline_word};

fn main() -> anyhow::Result<()> {
    let n = 8;
    let w = halfline_word(n, 60)?;
    println!("half-line word {w}");
    println!("equals billiard word: {}", w == billiard_prefix(n, 60)?);
    println!(
        "cone sides carry it to depth 50: {}",
        cone_carries_word(n, 50)?
    );
    let p = dual_patch(n, 10.0)?;
    p.audit()?;
    println!(
        "radius 10: {} tiles, {} types",
        p.len(),
        p.type_census().len()
    );
    Ok(())
}
