//! Exact moment tables for small sizes, cross-checked against the height
//! multiset of the enumerated trees.
//!
//! ```text
//! cargo run --example small_case_stats
//! ```

use treeheight::oracle::{enumerate_height_poly, DEFAULT_CAP};
use treeheight::pipeline::{factorial_moment_series, Backend};
use treeheight::FamilySpec;

fn main() -> treeheight::Result<()> {
    let binary: FamilySpec = "2".parse()?;
    let ms = factorial_moment_series(&binary, 4, 15, Backend::Auto)?;
    for n in [3, 4, 7, 9, 15] {
        let Some(t) = ms.table(n, 30)? else {
            println!("S = {binary}, n = {n}: no trees");
            continue;
        };
        let heights = enumerate_height_poly(&binary, n, DEFAULT_CAP)?;
        println!("S = {binary}, n = {n}: heights {{{}}}", heights.render());
        println!("  f_n = {}  mu = {}  m_2 = {}", t.f_n, t.mu, t.central[0]);
        if t.degenerate {
            println!("  single height value, scaled moments undefined");
        } else {
            println!("  alpha_3 = {}  alpha_4 = {}", t.alpha[0], t.alpha[1]);
        }
    }

    let path: FamilySpec = "1".parse()?;
    let ms = factorial_moment_series(&path, 3, 10, Backend::Auto)?;
    let t = ms.table(10, 30)?.expect("one path per size");
    println!("S = {path}, n = 10: mu = {}, degenerate = {}", t.mu, t.degenerate);
    Ok(())
}
