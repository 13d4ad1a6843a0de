//! Deviation from the slope plane under Sub Rosa and Planar Rosa.

use rosa::edgeword::subrosa_edgeword;
use rosa::planarity::{deviation_profile, planarity_verdict};
use rosa::substitution::{build_substitution, select_planar_rosa, star, SubstitutionRule};

fn show(name: &str, rule: &SubstitutionRule) -> anyhow::Result<()> {
    let p = deviation_profile(rule, &star(rule.n)?, 6)?;
    println!("{name}");
    for r in &p.rows {
        let ratio = r.ratio.map_or(String::new(), |x| format!("ratio {x:.3}"));
        println!("  k={} deviation {:.3} {ratio}", r.iteration, r.deviation);
    }
    println!(
        "  {:?}",
        planarity_verdict(&p, rosa::cli::DEFAULT_GROWTH_TOL)?
    );
    Ok(())
}

fn main() -> anyhow::Result<()> {
    for n in [4, 6] {
        show(
            &format!("Sub Rosa {n}"),
            &build_substitution(n, &subrosa_edgeword(n)?)?,
        )?;
        show(
            &format!("Planar Rosa {n}"),
            &select_planar_rosa(n, 500)?.rule,
        )?;
    }
    Ok(())
}
