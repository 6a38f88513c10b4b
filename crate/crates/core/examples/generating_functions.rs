//! Derives the factorial-moment generating functions `g_0..g_k` as elements
//! of `Q(x)[F]/(Q)` and expands them as power series.
//!
//! ```text
//! cargo run --example generating_functions -- 2 3
//! ```

use treeheight::momentgf::derive_all;
use treeheight::FamilySpec;

fn main() -> treeheight::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec: FamilySpec = args.next().as_deref().unwrap_or("2").parse()?;
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);

    let mut bundle = derive_all(&spec, k)?;
    println!("S = {spec}, f' = {}", bundle.field().generator_derivative()?);
    for r in 0..=k {
        println!("g_{r} = {}", bundle.g(r));
    }

    // each g_r satisfies its coefficient equation exactly in the field
    for r in 1..=k {
        assert!(bundle.identity_residual(r)?.is_zero());
    }

    let series = bundle.series(15)?;
    for (r, s) in series.iter().enumerate() {
        let coeffs: Vec<String> = s.coeffs().iter().map(ToString::to_string).collect();
        println!("[x^n] g_{r} = [{}]", coeffs.join(", "));
    }
    Ok(())
}
