//! Samples the scaled moments on a geometric grid, extrapolates them and
//! compares with the limits for the Brownian excursion area.
//!
//! ```text
//! cargo run --release --example universality -- 2 2000 9
//! cargo run --release --example universality -- 1,2 2000 5
//! ```

use treeheight::pipeline::{estimate_limits, factorial_moment_series, Backend, GridConfig};
use treeheight::stats::FitConfig;
use treeheight::FamilySpec;

fn main() -> treeheight::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec: FamilySpec = args.next().as_deref().unwrap_or("2").parse()?;
    let order: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(600);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);

    let series = factorial_moment_series(&spec, k, order, Backend::Auto)?;
    let grid = GridConfig::default();
    println!("S = {spec}, grid {:?}", grid.sizes(&series));
    let moments: Vec<usize> = (3..=k).collect();
    for est in estimate_limits(&series, &moments, &grid, &FitConfig::default())? {
        let (n, last) = est.samples.last().expect("non-empty grid");
        println!(
            "alpha_{}: at n = {n} {:.6}, extrapolated {:.6}, target {}, |error| {:.2e}",
            est.i,
            last.to_f64(),
            est.extrapolated.to_f64(),
            est.target.as_ref().map_or("-".into(), ToString::to_string),
            est.abs_error().map_or(f64::NAN, |e| e.to_f64()),
        );
    }
    Ok(())
}
