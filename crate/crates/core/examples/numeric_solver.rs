//! Solves the bivariate functional equation `G(x, z) = x·P(G(x + xz, z))`
//! directly and compares `r!·[z^r]G` with the symbolic pipeline.
//!
//! ```text
//! cargo run --release --example numeric_solver -- 3 4 200
//! ```

use std::time::Instant;

use treeheight::pipeline::{numeric_moment_series, symbolic_moment_series};
use treeheight::FamilySpec;

fn main() -> treeheight::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec: FamilySpec = args.next().as_deref().unwrap_or("2").parse()?;
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let order: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);

    let start = Instant::now();
    let numeric = numeric_moment_series(&spec, k, order);
    let t_numeric = start.elapsed();
    let start = Instant::now();
    let symbolic = symbolic_moment_series(&spec, k, order)?;
    let t_symbolic = start.elapsed();

    println!("S = {spec}, k = {k}, N = {order}");
    println!("numeric {t_numeric:.2?}, symbolic {t_symbolic:.2?}");
    for r in 0..=k {
        let agree = numeric[r] == symbolic[r];
        let digits = numeric[r].coeffs().iter().map(|c| c.numer().to_string().len()).max().unwrap_or(0);
        println!("F_{r}(n), n ≤ {order}: pipelines agree = {agree}, largest value has {digits} digits");
    }
    Ok(())
}
