//! Closed forms for the factorial-moment generating functions `g_r(x)`.
//!
//! Write `G(x,z) = F(x, 1+z) = Σ_r g_r(x) z^r / r!`, which satisfies
//! `G(x,z) = x·P(G(x + xz, z))`. Taylor-expanding `g_s(x + xz)` in `z` gives
//!
//! ```text
//! [z^m] G(x+xz, z) = T_m = g_m/m! + U_m,
//! U_m = Σ_{s<m} g_s^{(m−s)}(x) · x^{m−s} / (s!·(m−s)!)
//! ```
//!
//! and comparing `z^r` coefficients yields the linear equation
//! `g_r/r! = x·(P′(g₀)·T_r + C_r)` where `C_r` collects the part of
//! `[z^r] P(g₀ + Σ T_m z^m)` that does not involve `T_r`. Solving it
//! expresses `g_r` in `K = ℚ(x)[F]/(Q)`, i.e. in terms of `x` and `g₀ = f`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{FieldElement, FunctionField, RatFunc, UniPoly};
use crate::error::Result;
use crate::family::{char_poly, FamilySpec};
use crate::series::{solve_counting_series, SeriesEvaluator, TruncatedSeries};

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn inv_factorial(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), factorial(n))
}

/// `g_0..g_k` for one family, with every derivative computed on the way.
#[derive(Clone, Debug)]
pub struct MomentGfBundle {
    field: Arc<FunctionField>,
    k: usize,
    g: Vec<FieldElement>,
    /// `derivatives[s][j] = g_s^{(j)}`; `derivatives[s][0] = g_s`.
    derivatives: Vec<Vec<FieldElement>>,
    /// `T_m = [z^m] G(x+xz, z)` for the orders derived so far (index 0 unused).
    shifted: Vec<FieldElement>,
}

impl MomentGfBundle {
    /// A bundle holding only `g_0 = F`, ready to derive up to order `k`.
    pub fn new(spec: &FamilySpec, k: usize) -> Self {
        let field = FunctionField::new(spec);
        let g0 = field.generator();
        MomentGfBundle {
            k,
            g: vec![g0.clone()],
            derivatives: vec![vec![g0.clone()]],
            shifted: vec![g0],
            field,
        }
    }

    pub fn family(&self) -> &FamilySpec {
        self.field.spec()
    }

    pub fn field(&self) -> &Arc<FunctionField> {
        &self.field
    }

    pub fn max_order(&self) -> usize {
        self.k
    }

    /// Highest `r` for which `g_r` is available.
    pub fn derived_order(&self) -> usize {
        self.g.len() - 1
    }

    pub fn g(&self, r: usize) -> &FieldElement {
        &self.g[r]
    }

    pub fn all(&self) -> &[FieldElement] {
        &self.g
    }

    /// `g_s^{(j)}`, differentiating lazily and caching.
    pub fn derivative(&mut self, s: usize, j: usize) -> Result<&FieldElement> {
        while self.derivatives[s].len() <= j {
            let next = self.derivatives[s].last().expect("g_s stored").dx()?;
            self.derivatives[s].push(next);
        }
        Ok(&self.derivatives[s][j])
    }

    /// Series of `g_0..g_k` to order `order`; entry `r` is the generating
    /// function of the factorial-moment numerators `F_r(n)`.
    pub fn series(&self, order: usize) -> Result<Vec<TruncatedSeries>> {
        let pole = self.g.iter().map(FieldElement::pole_order_at_zero).max().unwrap_or(0);
        let f = solve_counting_series(self.family(), order + pole);
        let eval = SeriesEvaluator::new(f, self.family().max_degree());
        self.g
            .iter()
            .map(|g| Ok(eval.eval(g)?.truncate(order)))
            .collect()
    }

    /// Checks the `z^r` equation `g_r/r! − x·(P′(g₀)·(g_r/r! + U_r) + C_r) = 0`
    /// exactly in `K`.
    pub fn identity_residual(&mut self, r: usize) -> Result<FieldElement> {
        let u = taylor_shift_term(r, self)?;
        let t: Vec<FieldElement> = self.shifted[1..r].to_vec();
        let c = compose_char_poly(r, &t, &self.g[0], self.family());
        let gr = self.g[r].scale(&inv_factorial(r));
        let p1 = p_derivative_at(&self.field, 1);
        let inner = &(&p1 * &(&gr + &u)) + &c;
        Ok(&gr - &(&self.field.x() * &inner))
    }
}

/// `U_r = Σ_{s<r} g_s^{(r−s)} · x^{r−s} / (s!·(r−s)!)`.
pub fn taylor_shift_term(r: usize, bundle: &mut MomentGfBundle) -> Result<FieldElement> {
    let field = Arc::clone(&bundle.field);
    let mut acc = field.zero();
    for s in 0..r {
        let j = r - s;
        let coeff = inv_factorial(s) * inv_factorial(j);
        let xj = RatFunc::from_poly(UniPoly::monomial(coeff, j));
        let term = bundle.derivative(s, j)?.mul_ratfunc(&xj);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `P^{(i)}(F) / i!` as an element of `K`.
fn p_derivative_at(field: &Arc<FunctionField>, i: usize) -> FieldElement {
    let mut p = char_poly(field.spec());
    for _ in 0..i {
        p = p.derivative();
    }
    field
        .eval_poly_at_generator(&p)
        .scale(&inv_factorial(i))
}

/// `C_r = [z^r] P(g₀ + Σ_{m=1}^{r−1} T_m z^m)`, the part of the composition
/// not involving `T_r`. `t[m−1]` holds `T_m`.
///
/// Taylor-expanding `P` around `g₀`, the linear term contributes only
/// through `T_r`, so `C_r = Σ_{i≥2} P^{(i)}(g₀)/i! · [z^r] (Σ_{m<r} T_m z^m)^i`.
pub fn compose_char_poly(r: usize, t: &[FieldElement], g0: &FieldElement, spec: &FamilySpec) -> FieldElement {
    let field = g0.field();
    debug_assert_eq!(field.spec(), spec);
    let mut acc = field.zero();
    if r < 2 {
        return acc;
    }
    // z-series with field coefficients; index = power of z, truncated at z^r.
    let mut base: Vec<FieldElement> = vec![field.zero(); r + 1];
    base[1..r].clone_from_slice(&t[..r - 1]);
    let mut power = base.clone();
    for i in 2..=spec.max_degree() {
        power = zseries_mul(&power, &base, r);
        let coeff = &power[r];
        if coeff.is_zero() {
            continue;
        }
        let taylor = p_derivative_at(field, i);
        if taylor.is_zero() {
            continue;
        }
        acc = &acc + &(&taylor * coeff);
    }
    acc
}

fn zseries_mul(a: &[FieldElement], b: &[FieldElement], r: usize) -> Vec<FieldElement> {
    let field = a[0].field();
    let mut out = vec![field.zero(); r + 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(r + 1 - i) {
            if !bj.is_zero() {
                out[i + j] = &out[i + j] + &(ai * bj);
            }
        }
    }
    out
}

/// Solves for `g_r = r!·x·(P′(g₀)·U_r + C_r) / (1 − x·P′(g₀))` and stores it.
pub fn derive_gr(r: usize, bundle: &mut MomentGfBundle) -> Result<FieldElement> {
    assert_eq!(bundle.derived_order() + 1, r, "orders are derived in sequence");
    let field = Arc::clone(&bundle.field);
    let u = taylor_shift_term(r, bundle)?;
    let c = compose_char_poly(r, &bundle.shifted[1..r], &bundle.g[0], field.spec());
    let p1 = p_derivative_at(&field, 1);
    let x = field.x();
    let denom = &field.one() - &(&x * &p1);
    let rhs = &x * &(&(&p1 * &u) + &c);
    let gr = (&rhs * &denom.inv()?).scale(&BigRational::from_integer(factorial(r)));

    let t = &gr.scale(&inv_factorial(r)) + &u;
    bundle.g.push(gr.clone());
    bundle.derivatives.push(vec![gr.clone()]);
    bundle.shifted.push(t);
    Ok(gr)
}

/// Derives `g_1..g_k` in order.
pub fn derive_all(spec: &FamilySpec, k: usize) -> Result<MomentGfBundle> {
    let mut bundle = MomentGfBundle::new(spec, k);
    for r in 1..=k {
        derive_gr(r, &mut bundle)?;
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::solve_numeric_fe;

    fn spec(s: &[i64]) -> FamilySpec {
        FamilySpec::new(s.iter().copied()).unwrap()
    }

    fn numeric_moments(s: &FamilySpec, order: usize, k: usize) -> Vec<TruncatedSeries> {
        solve_numeric_fe(s, order, k)
            .into_iter()
            .enumerate()
            .map(|(r, c)| c.scale(&BigRational::from_integer(factorial(r))))
            .collect()
    }

    #[test]
    fn order_zero_bundle() {
        let b = derive_all(&spec(&[2]), 0).unwrap();
        assert_eq!(b.derived_order(), 0);
        assert_eq!(b.g(0), &b.field().generator());
    }

    #[test]
    fn first_shift_terms() {
        let mut b = MomentGfBundle::new(&spec(&[2]), 2);
        let field = Arc::clone(b.field());
        let u1 = taylor_shift_term(1, &mut b).unwrap();
        let g0p = b.derivative(0, 1).unwrap().clone();
        assert_eq!(u1, &field.x() * &g0p);
        derive_gr(1, &mut b).unwrap();
        let u2 = taylor_shift_term(2, &mut b).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let x = field.x();
        let expected = &(&x * b.derivative(1, 1).unwrap()) + &(&(&x * &x) * b.derivative(0, 2).unwrap()).scale(&half);
        assert_eq!(u2, expected);
    }

    #[test]
    fn composition_small_orders() {
        let s = spec(&[2]);
        let field = FunctionField::new(&s);
        let g0 = field.generator();
        assert!(compose_char_poly(1, &[], &g0, &s).is_zero());
        let t1 = &field.x() * &g0;
        assert_eq!(compose_char_poly(2, std::slice::from_ref(&t1), &g0, &s), &t1 * &t1);
    }

    #[test]
    fn binary_first_moment_closed_form() {
        let s = spec(&[2]);
        let b = derive_all(&s, 1).unwrap();
        let field = b.field();
        let g0 = field.generator();
        let x = field.x();
        let two = BigRational::from_integer(2.into());
        let g0p = g0.dx().unwrap();
        // g_1 = 2x²·g₀·g₀′ / (1 − 2x·g₀)
        let expected = &(&(&(&x * &x) * &g0).scale(&two) * &g0p)
            * &(&field.one() - &(&x * &g0).scale(&two)).inv().unwrap();
        assert_eq!(b.g(1), &expected);
        let series = b.g(1).to_series(9).unwrap();
        let c: Vec<BigRational> = series.coeffs();
        assert_eq!(c[3], BigRational::from_integer(2.into()));
        assert_eq!(c[5], BigRational::from_integer(12.into()));
        assert_eq!(c[7], BigRational::from_integer(58.into()));
    }

    #[test]
    fn path_family_first_moment() {
        let b = derive_all(&spec(&[1]), 1).unwrap();
        let series = b.g(1).to_series(15).unwrap();
        for n in 0..=15usize {
            assert_eq!(series.coeff(n), BigRational::from_integer((n * n.saturating_sub(1) / 2).into()));
        }
    }

    #[test]
    fn symbolic_matches_numeric_small() {
        for (s, k, order) in [(vec![2], 4, 40), (vec![1, 2], 4, 30), (vec![3], 3, 30), (vec![1], 3, 20)] {
            let s = spec(&s);
            let mut b = derive_all(&s, k).unwrap();
            let sym = b.series(order).unwrap();
            let num = numeric_moments(&s, order, k);
            assert_eq!(sym, num, "{s:?}");
            for r in 1..=k {
                assert!(b.identity_residual(r).unwrap().is_zero(), "{s:?} r={r}");
            }
        }
    }
}
