//! Expansion eigenvalues and the planarity class of an edgeword.

use rosa::edgeword::{candidate_edgeword, subrosa_edgeword};
use rosa::spectral::{spectrum_report, DEFAULT_CLASSIFY_TOL};

fn main() -> anyhow::Result<()> {
    for n in (4..=12).step_by(2) {
        let r = spectrum_report(n, &subrosa_edgeword(n)?, DEFAULT_CLASSIFY_TOL)?;
        let l: Vec<String> = r.lambdas.iter().map(|x| format!("{x:.3}")).collect();
        println!("Sub Rosa {n:>2}: [{}] {}", l.join(", "), r.classification);
    }
    let u = candidate_edgeword(4, 5)?;
    let r = spectrum_report(4, &u, DEFAULT_CLASSIFY_TOL)?;
    println!("\n{u}: {:?} {}", r.lambdas, r.classification);
    Ok(())
}
