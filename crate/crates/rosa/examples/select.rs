//! Scans the palindromic candidates for the Planar Rosa index.

use rosa::substitution::{scan_planar_rosa, seed_report};

fn main() -> anyhow::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(6), |s| s.parse())?;
    let (sel, log) = scan_planar_rosa(n, 500)?;
    for e in &log {
        println!(
            "i={:>3} letters {} tileable {} corners {} planar {} primitive {} {}",
            e.i,
            e.letters_present as u8,
            e.tileable as u8,
            e.corners_cross as u8,
            e.planar_spectrum as u8,
            e.primitive as u8,
            e.note
        );
    }
    let Some(sel) = sel else {
        println!("no index up to 500");
        return Ok(());
    };
    println!("\nselected i={} edgeword {}", sel.i, sel.rule.edgeword);
    println!("lambdas {:?}", sel.spectrum.lambdas);
    let r = seed_report(&sel.rule)?;
    println!(
        "star at center {}, star found {:?}",
        r.star_at_center, r.star_found
    );
    Ok(())
}
