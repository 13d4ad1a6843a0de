//! Sub Rosa edgewords, billiard words and palindromic candidates.

use rosa::edgeword::{
    abelianize, balance_constant, billiard_prefix, candidate_edgeword, subrosa_edgeword,
};

fn main() -> anyhow::Result<()> {
    for n in (4..=12).step_by(2) {
        let u = subrosa_edgeword(n)?;
        println!("n={n:>2}  Σ = {u}  counts {:?}", abelianize(&u).counts);
    }
    let w = billiard_prefix(8, 40)?;
    println!(
        "\nbilliard word n=8: {w} (balance {})",
        balance_constant(&w)
    );
    for i in 1..=6 {
        println!("candidate n=6 i={i}: {}", candidate_edgeword(6, i)?);
    }
    Ok(())
}
