//! Draws σ²(star) of the Planar Rosa 4 substitution as SVG.

use rosa::render::{render_svg, RenderOptions};
use rosa::substitution::{iterate, select_planar_rosa, star};

fn main() -> anyhow::Result<()> {
    let rule = select_planar_rosa(4, 500)?.rule;
    let patch = iterate(&rule, &star(4)?, 2)?;
    let opt = RenderOptions {
        scale: 6.0,
        stroke_width: 0.3,
        ..RenderOptions::default()
    };
    let path = std::env::temp_dir().join("planar_rosa4.svg");
    std::fs::write(&path, render_svg(&patch, &opt))?;
    println!("{} tiles written to {}", patch.len(), path.display());
    Ok(())
}
