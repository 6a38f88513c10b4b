//! Counting sequences for a few degree sets, checked against the defining
//! polynomial `Q(x, f) = x·P(f) − f`.
//!
//! ```text
//! cargo run --example counting_series -- 1,2 20
//! ```

use treeheight::algebra::UniPoly;
use treeheight::family::char_poly;
use treeheight::series::{solve_counting_series, TruncatedSeries};
use treeheight::FamilySpec;

fn residual(spec: &FamilySpec, f: &TruncatedSeries) -> TruncatedSeries {
    let p = char_poly(spec);
    let order = f.order();
    let mut p_of_f = TruncatedSeries::zero(order);
    let mut power = TruncatedSeries::one(order);
    for i in 0..=p.degree().unwrap_or(0) {
        p_of_f = &p_of_f + &power.scale(&p.coeff(i));
        power = &power * f;
    }
    &p_of_f.mul_poly(&UniPoly::x()) - f
}

fn main() -> treeheight::Result<()> {
    let mut args = std::env::args().skip(1);
    let families: Vec<FamilySpec> = match args.next() {
        Some(s) => vec![s.parse()?],
        None => ["2", "1,2", "3", "1", "2,3"].iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
    };
    let order: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(15);

    for spec in &families {
        let f = solve_counting_series(spec, order);
        let coeffs: Vec<String> = f.coeffs().iter().map(ToString::to_string).collect();
        let q = residual(spec, &f);
                println!("S = {spec}  P = {}", char_poly(spec));
        println!("  f = [{}]", coeffs.join(", "));
        println!("  Q(x, f) = 0 mod x^{}: {}", order + 1, q.is_zero());
    }
    Ok(())
}
