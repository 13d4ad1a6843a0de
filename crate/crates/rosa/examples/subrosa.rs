//! Iterates the Sub Rosa substitution on the star and writes the patch file.

use rosa::edgeword::subrosa_edgeword;
use rosa::substitution::{build_substitution, iterate_audited, star, PatchMeta, DEFAULT_TILE_CAP};

fn main() -> anyhow::Result<()> {
    let n = 4;
    let u = subrosa_edgeword(n)?;
    let rule = build_substitution(n, &u)?;
    let sizes: Vec<usize> = rule
        .metatiles
        .iter()
        .map(|m| m.interior.tiles.len())
        .collect();
    println!("metatile sizes {sizes:?}");
    let (patch, audits) = iterate_audited(&rule, &star(n)?, 2, DEFAULT_TILE_CAP)?;
    for (k, a) in audits.iter().enumerate() {
        println!(
            "step {}: {} full, {} half, area {:.3}",
            k + 1,
            a.full_tiles,
            a.half_tiles,
            a.tile_area
        );
    }
    patch.audit()?;
    println!(
        "{} tiles, rotation invariant {}",
        patch.len(),
        patch.is_rotation_invariant()
    );
    println!("census {:?}", patch.type_census());
    let meta = PatchMeta {
        edgeword: u.to_string(),
        iterations: 2,
        seed: "star".into(),
    };
    let path = std::env::temp_dir().join("subrosa4.json");
    std::fs::write(&path, serde_json::to_string(&patch.to_file(meta))?)?;
    println!("wrote {}", path.display());
    Ok(())
}
