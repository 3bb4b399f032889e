//! Backtests the four bundled party series and prints the fitted couples,
//! per-election errors and MAEs.
//!
//! cargo run --release -p voterfit-core --example reproduce

use std::time::Instant;

use voterfit::forecast::{pooled_summary, rolling_forecast, ForecastOptions};
use voterfit::ingest::{binarize, load_elections};

fn main() -> voterfit::Result<()> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let runs = [
        ("uk_general_elections.csv", "CON", 1960.0),
        ("uk_general_elections.csv", "LAB", 1960.0),
        ("us_presidential_elections.csv", "REP", 1940.0),
        ("us_presidential_elections.csv", "DEM", 1940.0),
    ];
    let mut reports = Vec::new();
    for (file, party, cutoff) in runs {
        let started = Instant::now();
        let records = load_elections(format!("{data}/{file}"))?;
        let series = binarize(&records, party, 100)?;
        let report = rolling_forecast(&series, &ForecastOptions::from(cutoff))?;
        println!("== {party} ({file}, scored from {cutoff}) in {:.1?}", started.elapsed());
        for row in &report.rows {
            println!(
                "{:>8} ({:>2}, {:>2})  actual {:>3}  predicted {:>6.2}  error {:>5.2}  baseline error {:>3}",
                row.time, row.s0_star, row.s1_star, row.actual, row.prediction, row.abs_error, row.baseline_abs_error
            );
        }
        println!("MAE {:.3}  baseline MAE {:.3}  over {} elections", report.mae, report.baseline_mae, report.evaluated);
        reports.push(report);
    }
    let pooled = pooled_summary(&reports)?;
    println!("pooled MAE {:.3}  pooled baseline MAE {:.3}", pooled.mae, pooled.baseline_mae);
    Ok(())
}
