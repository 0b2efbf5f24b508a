//! Structural verdicts against numeric ranks on seeded random patterns.

use polyctrl::cli::validate_patterns;
use polyctrl::tensor::DEFAULT_CAP;

fn main() -> polyctrl::Result<()> {
    let report = validate_patterns(100, 2024, 1e-10, DEFAULT_CAP, 4, 4, 2, 6)?;
    let controllable = report
        .records
        .iter()
        .filter(|r| r.structurally_controllable)
        .count();
    println!(
        "{} trials: {} structurally controllable, {} agree, {} disagree",
        report.trials, controllable, report.agreements, report.disagreements
    );
    for r in report.records.iter().take(5) {
        println!(
            "  trial {:>2}: n={} m={} |supp A|={} structural={} ranks={:?}",
            r.trial, r.n, r.m, r.tensor_support, r.structurally_controllable, r.ranks
        );
    }
    Ok(())
}
