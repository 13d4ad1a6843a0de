//! Counting test, corner checks and metatile tilings for one edgeword.
//!
//! `cargo run --example tileability -- 4 0202002020`

use rosa::kenyon::{
    boundary_polygon, build_matching, corner_crossing_check, tile_interior, tileability_criterion,
};
use rosa::Edgeword;

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map_or(Ok(6), |s| s.parse())?;
    let word = args.get(2).map_or("024020020420", String::as_str);
    let u = Edgeword::parse(n, word)?;
    println!("criterion: {:?}", tileability_criterion(n, &u)?);
    for k in 1..=n / 2 {
        let p = boundary_polygon(n, &u, k)?;
        let corners = corner_crossing_check(n, &u, k)?;
        let tiles = build_matching(&p).and_then(|m| tile_interior(&p, &m, true));
        match tiles {
            Ok(t) => println!(
                "k={k}: {} boundary edges, corners cross {corners}, {} tiles",
                p.len(),
                t.tiles.len()
            ),
            Err(e) => println!(
                "k={k}: {} boundary edges, corners cross {corners}, {e}",
                p.len()
            ),
        }
    }
    Ok(())
}
