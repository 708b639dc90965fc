//! Term frequency distribution of the demo catalog with a log-log power-law
//! fit, written as TSV and as a gnuplot script.

mod support;

use lexis::stats::{distribution, DistributionMode};

fn main() -> lexis::Result<()> {
    let engine = support::demo_engine("stats");
    let snapshot = engine.snapshot();
    for mode in [DistributionMode::Rank, DistributionMode::CountOfCounts] {
        let report = distribution(&snapshot.catalog, mode);
        match &report.fit {
            Some(fit) => println!(
                "{mode:?}: {} terms, {} occurrences, exponent {:.3}, |r| {:.3}",
                report.term_count, report.occurrence_count, fit.exponent, fit.acc
            ),
            None => println!("{mode:?}: too few points to fit"),
        }
        let out = support::examples_dir().join(format!("stats/{mode:?}.gp").to_lowercase());
        std::fs::write(&out, report.to_gnuplot()).expect("write gnuplot script");
        println!("  plot with: gnuplot -p {}", out.display());
    }
    Ok(())
}
