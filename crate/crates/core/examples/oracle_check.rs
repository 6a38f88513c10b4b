//! Brute-force height distributions and the exact comparison of both
//! generating-function pipelines against them.
//!
//! ```text
//! cargo run --release --example oracle_check
//! ```

use std::time::Instant;

use treeheight::oracle::{check_pipeline, enumerate_trees, HeightTable, DEFAULT_CAP};
use treeheight::FamilySpec;

fn main() -> treeheight::Result<()> {
    let spec: FamilySpec = "1,2".parse()?;
    let table = HeightTable::build(&spec, 8, DEFAULT_CAP)?;
    for n in 1..=8 {
        let hp = table.get(n);
        let explicit = enumerate_trees(&spec, n);
        assert_eq!(hp.total(), explicit.len().into());
        println!("S = {spec}, n = {n}: {} trees, heights {}", explicit.len(), hp.render());
    }

    let start = Instant::now();
    for (degrees, n_max) in [("2", 17), ("1,2", 12), ("3", 13)] {
        let spec: FamilySpec = degrees.parse()?;
        let report = check_pipeline(&spec, n_max, 4, DEFAULT_CAP)?;
        println!(
            "S = {}: n ≤ {}, r ≤ {}: {} exact comparisons passed ({})",
            report.family,
            report.max_n,
            report.k,
            report.comparisons,
            report.pipelines.join(", ")
        );
    }
    println!("checked in {:.2?}", start.elapsed());
    Ok(())
}
