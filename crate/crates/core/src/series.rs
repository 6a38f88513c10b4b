//! Exact truncated power series in `x`.
//!
//! Coefficients are stored as integer numerators over one positive common
//! denominator. Counting series and everything built from them are
//! integral, so the common case runs on plain big-integer convolution.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{FieldElement, UniPoly};
use crate::error::{Error, Result};
use crate::family::FamilySpec;

/// `Σ_{n ≤ N} a_n x^n + O(x^{N+1})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    nums: Vec<BigInt>,
    den: BigInt,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self::from_integers(vec![BigInt::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, order)
    }

    /// `x^e` truncated at `order`.
    pub fn monomial(e: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if e <= order {
            s.nums[e] = BigInt::one();
        }
        s
    }

    /// Panics on an empty coefficient vector; a series always has order ≥ 0.
    pub fn from_integers(nums: Vec<BigInt>) -> Self {
        assert!(!nums.is_empty(), "a truncated series has at least one coefficient");
        TruncatedSeries {
            nums,
            den: BigInt::one(),
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_integers(coeffs.iter().map(|&c| c.into()).collect())
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least one coefficient");
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::with_denominator(nums, den)
    }

    fn with_denominator(mut nums: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in nums.iter_mut() {
                *c = -&*c;
            }
        }
        if !den.is_one() {
            let g = nums.iter().fold(den.clone(), |g, c| g.gcd(c));
            if !g.is_one() {
                for c in nums.iter_mut() {
                    *c = &*c / &g;
                }
                den /= &g;
            }
        }
        TruncatedSeries { nums, den }
    }

    /// The truncation bound `N`.
    pub fn order(&self) -> usize {
        self.nums.len() - 1
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        BigRational::new(self.nums[n].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.nums.len()).map(|n| self.coeff(n)).collect()
    }

    /// The coefficients when the series is integral.
    pub fn integer_coeffs(&self) -> Option<&[BigInt]> {
        self.den.is_one().then_some(self.nums.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self::with_denominator(self.nums[..=order].to_vec(), self.den.clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::with_denominator(
            self.nums.iter().map(|a| a * c.numer()).collect(),
            &self.den * c.denom(),
        )
    }

    /// `x^v · self`, keeping the same order.
    pub fn shift_up(&self, v: usize) -> Self {
        let n = self.nums.len();
        let mut nums = vec![BigInt::zero(); n];
        nums[v..n].clone_from_slice(&self.nums[..n - v]);
        TruncatedSeries {
            nums,
            den: self.den.clone(),
        }
    }

    /// `self / x^v`; the order drops by `v`.
    pub fn shift_down(&self, v: usize) -> Result<Self> {
        if let Some(pos) = self.nums.iter().take(v).position(|c| !c.is_zero()) {
            return Err(Error::NotAPowerSeries(v - pos));
        }
        if v > self.order() {
            return Err(Error::NotAPowerSeries(v));
        }
        Ok(TruncatedSeries {
            nums: self.nums[v..].to_vec(),
            den: self.den.clone(),
        })
    }

    /// Termwise derivative; the order drops by one (stays 0 for order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let nums = self
            .nums
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::with_denominator(nums, self.den.clone())
    }

    /// Multiplicative inverse modulo `x^{N+1}`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.nums[0];
        if c0.is_zero() {
            return Err(Error::NonUnitSeries);
        }
        // self = A/D and 1/A = B_n / c0^{n+1} with
        // B_0 = 1, B_n = −Σ_{i=1}^{n} A_i B_{n−i} c0^{i−1}.
        let scaled = divide_by_integer_poly(&[BigInt::one()], &self.nums, self.order());
        Ok(scaled.scale(&BigRational::from_integer(self.den.clone())))
    }

    /// Multiplies by a polynomial in `x` (O(N·deg)).
    pub fn mul_poly(&self, p: &UniPoly) -> Self {
        let (pn, pd) = p.to_integer_coeffs();
        let nums = conv_truncated(&self.nums, &pn, self.order());
        Self::with_denominator(nums, &self.den * pd)
    }

    /// Divides by a polynomial with nonzero constant term (O(N·deg)).
    pub fn div_poly(&self, p: &UniPoly) -> Result<Self> {
        let (pn, pd) = p.to_integer_coeffs();
        if pn.first().is_none_or(Zero::is_zero) {
            return Err(Error::NonUnitSeries);
        }
        let q = divide_by_integer_poly(&self.nums, &pn, self.order());
        // self/p = (nums/den) / (pn/pd)
        Ok(q.scale(&BigRational::new(pd, self.den.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// `Σ a_i b_j x^{i+j}` truncated at `order`, skipping zero entries.
fn conv_truncated(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Series `a / p` for integer sequences, `p[0] ≠ 0`.
///
/// Computes `B_n = c^{n+1}·[x^n](a/p)` with `c = p[0]`, which stays integral:
/// `B_n = c^n a_n − Σ_{i≥1} p_i c^{i−1} B_{n−i}`.
fn divide_by_integer_poly(a: &[BigInt], p: &[BigInt], order: usize) -> TruncatedSeries {
    let c = &p[0];
    let zero = BigInt::zero();
    if c.is_one() {
        let mut b: Vec<BigInt> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = a.get(n).unwrap_or(&zero).clone();
            for (i, pi) in p.iter().enumerate().skip(1).take(n) {
                if !pi.is_zero() {
                    acc -= pi * &b[n - i];
                }
            }
            b.push(acc);
        }
        return TruncatedSeries::from_integers(b);
    }
    let mut cpow = vec![BigInt::one()];
    for i in 1..=order + 1 {
        let next = &cpow[i - 1] * c;
        cpow.push(next);
    }
    let mut b: Vec<BigInt> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = a.get(n).unwrap_or(&zero) * &cpow[n];
        for (i, pi) in p.iter().enumerate().skip(1).take(n) {
            if !pi.is_zero() {
                acc -= pi * &cpow[i - 1] * &b[n - i];
            }
        }
        b.push(acc);
    }
    // Bring everything over the common denominator c^{order+1}.
    let nums = b
        .into_iter()
        .enumerate()
        .map(|(n, bn)| bn * &cpow[order - n])
        .collect();
    TruncatedSeries::with_denominator(nums, cpow[order + 1].clone())
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        combine(self, rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        combine(self, rhs, |a, b| a - b)
    }
}

fn combine(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    op: impl Fn(&BigInt, &BigInt) -> BigInt,
) -> TruncatedSeries {
    let order = a.order().min(b.order());
    if a.den == b.den {
        let nums = (0..=order).map(|i| op(&a.nums[i], &b.nums[i])).collect();
        return TruncatedSeries::with_denominator(nums, a.den.clone());
    }
    let l = a.den.lcm(&b.den);
    let fa = &l / &a.den;
    let fb = &l / &b.den;
    let nums = (0..=order)
        .map(|i| op(&(&a.nums[i] * &fa), &(&b.nums[i] * &fb)))
        .collect();
    TruncatedSeries::with_denominator(nums, l)
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let nums = conv_truncated(&self.nums, &rhs.nums, order);
        TruncatedSeries::with_denominator(nums, &self.den * &rhs.den)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            nums: self.nums.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] + O(x^{})", terms.join(", "), self.order() + 1)
    }
}

/// `[x^n] P(s)` coefficient helper: powers `s^1..s^d` built one degree at a
/// time, exploiting that `[x^m] s^i` depends only on `[x^{<m}]` of lower
/// data when `s(0) = 0`.
struct OnlinePowers {
    /// `powers[i][m]` = `[x^m] s^{i+1}` for `i + 1 ≤ d`.
    powers: Vec<Vec<BigInt>>,
}

impl OnlinePowers {
    fn new(d: usize) -> Self {
        OnlinePowers {
            powers: vec![Vec::new(); d],
        }
    }

    /// Appends `[x^m] s` (the next coefficient) and extends every power to degree `m`.
    fn push(&mut self, s_m: BigInt) {
        let m = self.powers[0].len();
        self.powers[0].push(s_m);
        for i in 1..self.powers.len() {
            let (lower, upper) = self.powers.split_at_mut(i);
            let s = &lower[0];
            let prev = &lower[i - 1];
            let mut acc = BigInt::zero();
            for a in 1..=m {
                if !s[a].is_zero() && !prev[m - a].is_zero() {
                    acc += &s[a] * &prev[m - a];
                }
            }
            upper[0].push(acc);
        }
    }

    fn coeff(&self, power: usize, m: usize) -> &BigInt {
        &self.powers[power - 1][m]
    }
}

/// The counting series `f` with `f = x·(1 + Σ_{i∈S} f^i)`, to order `N`.
pub fn solve_counting_series(spec: &FamilySpec, order: usize) -> TruncatedSeries {
    let d = spec.max_degree();
    let mut f = vec![BigInt::zero()];
    let mut powers = OnlinePowers::new(d);
    powers.push(BigInt::zero());
    for n in 1..=order {
        // [x^n] f = [x^{n−1}] (1 + Σ f^i), and powers are known through n − 1.
        let mut c = if n == 1 { BigInt::one() } else { BigInt::zero() };
        for &i in spec.degrees() {
            c += powers.coeff(i as usize, n - 1);
        }
        powers.push(c.clone());
        f.push(c);
    }
    TruncatedSeries::from_integers(f)
}

/// Expands the function denoted by `a` using the counting series `f`.
///
/// Each coefficient `p/q` with `q = x^v·q′`, `q′(0) ≠ 0`, contributes
/// `x^{−v}·p·f^j/q′`; all contributions are lifted to a common `x^{−V}`,
/// summed, and the `x^V` factor is cancelled at the end. The result has
/// order `f.order() − V`, `V` = [`FieldElement::pole_order_at_zero`].
pub fn eval_field_element(a: &FieldElement, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    SeriesEvaluator::new(f.clone(), a.family().max_degree()).eval(a)
}

/// Caches the powers `f^j`, `j < d`, for repeated evaluations.
pub struct SeriesEvaluator {
    powers: Vec<TruncatedSeries>,
}

impl SeriesEvaluator {
    pub fn new(f: TruncatedSeries, d: usize) -> Self {
        let order = f.order();
        let mut powers = vec![TruncatedSeries::one(order)];
        for j in 1..d.max(1) {
            let next = if j == 1 { f.clone() } else { &powers[j - 1] * &f };
            powers.push(next);
        }
        SeriesEvaluator { powers }
    }

    pub fn order(&self) -> usize {
        self.powers[0].order()
    }

    pub fn eval(&self, a: &FieldElement) -> Result<TruncatedSeries> {
        let big_v = a.pole_order_at_zero();
        let order = self.order();
        let mut total = TruncatedSeries::zero(order);
        for (j, c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.denom().valuation().unwrap_or(0);
            let unit_den = c.denom().shift_down(v);
            let term = self.powers[j].mul_poly(c.numer()).div_poly(&unit_den)?;
            total = &total + &term.shift_up(big_v - v);
        }
        total.shift_down(big_v)
    }
}

impl FieldElement {
    /// Series expansion of this element to order `order`.
    pub fn to_series(&self, order: usize) -> Result<TruncatedSeries> {
        let f = solve_counting_series(self.family(), order + self.pole_order_at_zero());
        eval_field_element(self, &f)
    }
}

/// Solves `G(x,z) = x·P(G(x + xz, z))` modulo `(x^{N+1}, z^{k+1})`.
///
/// Returns `c_0..c_k` with `G = Σ c_r z^r`; `c_r` is the generating function
/// of `Σ_t C(H(t), r)`, so `g_r = r!·c_r`.
///
/// With `G = Σ_m G_m(z) x^m`, the substitution gives
/// `[x^m] G(x+xz, z) = (1+z)^m G_m(z)`, so every x-degree of the inner
/// argument only needs the same x-degree of `G`. The outer factor `x` then
/// determines `G_n` from data of x-degree `< n`.
pub fn solve_numeric_fe(spec: &FamilySpec, order: usize, k: usize) -> Vec<TruncatedSeries> {
    let d = spec.max_degree();
    let width = k + 1;
    // g[m] = G_m(z) truncated to z^k
    let mut g: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); width]];
    // powers[i][m] = [x^m] H^{i+1}, H = G(x+xz, z)
    let mut powers: Vec<Vec<Vec<BigInt>>> = vec![Vec::new(); d];
    let mut binom: Vec<BigInt> = vec![BigInt::zero(); width];

    let push_degree = |powers: &mut Vec<Vec<Vec<BigInt>>>, gm: &[BigInt], m: usize, binom: &mut Vec<BigInt>| {
        // (1+z)^m truncated
        binom[0] = BigInt::one();
        for t in 1..width {
            binom[t] = if t > m {
                BigInt::zero()
            } else {
                &binom[t - 1] * BigInt::from(m + 1 - t) / BigInt::from(t)
            };
        }
        let h = zpoly_mul(binom, gm, width);
        powers[0].push(h);
        for i in 1..d {
            let (lower, upper) = powers.split_at_mut(i);
            let hs = &lower[0];
            let prev = &lower[i - 1];
            let mut acc = vec![BigInt::zero(); width];
            for a in 1..=m {
                zpoly_mul_acc(&mut acc, &hs[a], &prev[m - a], width);
            }
            upper[0].push(acc);
        }
    };

    push_degree(&mut powers, &g[0].clone(), 0, &mut binom);
    for n in 1..=order {
        let mut c = vec![BigInt::zero(); width];
        if n == 1 {
            c[0] = BigInt::one();
        }
        for &i in spec.degrees() {
            for (cr, pr) in c.iter_mut().zip(&powers[i as usize - 1][n - 1]) {
                *cr += pr;
            }
        }
        push_degree(&mut powers, &c, n, &mut binom);
        g.push(c);
    }

    (0..width)
        .map(|r| TruncatedSeries::from_integers(g.iter().map(|gm| gm[r].clone()).collect()))
        .collect()
}

fn zpoly_mul(a: &[BigInt], b: &[BigInt], width: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); width];
    zpoly_mul_acc(&mut out, a, b, width);
    out
}

fn zpoly_mul_acc(out: &mut [BigInt], a: &[BigInt], b: &[BigInt], width: usize) {
    for (i, ai) in a.iter().enumerate().take(width) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(width - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FunctionField, RatFunc};

    fn spec(s: &[i64]) -> FamilySpec {
        FamilySpec::new(s.iter().copied()).unwrap()
    }

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.integer_coeffs()
            .expect("integral series")
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn basic_arithmetic() {
        let a = TruncatedSeries::from_ints(&[1, 1, 0, 0]);
        let b = TruncatedSeries::from_ints(&[1, -1, 0, 0]);
        assert_eq!(ints(&(&a * &b)), vec![1, 0, -1, 0]);
        assert_eq!(&a + &TruncatedSeries::zero(3), a);
        // mixed orders truncate to the smaller one
        let c = TruncatedSeries::from_ints(&[1, 2]);
        assert_eq!((&a + &c).order(), 1);
    }

    #[test]
    fn rational_coefficients_normalize() {
        let half = BigRational::new(1.into(), 2.into());
        let s = TruncatedSeries::from_rationals(&[half.clone(), half.clone()]);
        let t = &s + &s;
        assert!(t.is_integral());
        assert_eq!(ints(&t), vec![1, 1]);
        assert_eq!(s.coeff(1), half);
    }

    #[test]
    fn geometric_inverse() {
        let inv = TruncatedSeries::from_ints(&[1, -1, 0, 0, 0, 0]).inverse().unwrap();
        assert_eq!(ints(&inv), vec![1; 6]);
        assert_eq!(
            TruncatedSeries::from_ints(&[0, 1, 0]).inverse(),
            Err(Error::NonUnitSeries)
        );
    }

    #[test]
    fn binary_denominator_inverse() {
        // 1 − 2x·f for S = {2}
        let s = TruncatedSeries::from_ints(&[1, 0, -2, 0, -2, 0, -4]);
        let inv = s.inverse().unwrap();
        assert_eq!(ints(&inv), vec![1, 0, 2, 0, 6, 0, 20]);
        assert_eq!(ints(&(&s * &inv)), vec![1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn non_unit_constant_term_inverse() {
        // 1/(2 − x) = Σ x^n / 2^{n+1}
        let inv = TruncatedSeries::from_ints(&[2, -1, 0, 0]).inverse().unwrap();
        let expected: Vec<BigRational> = (0..4)
            .map(|n| BigRational::new(1.into(), BigInt::from(2).pow(n + 1)))
            .collect();
        assert_eq!(inv.coeffs(), expected);
    }

    #[test]
    fn counting_series_small_families() {
        assert_eq!(ints(&solve_counting_series(&spec(&[2]), 9)), vec![0, 1, 0, 1, 0, 2, 0, 5, 0, 14]);
        assert_eq!(ints(&solve_counting_series(&spec(&[1, 2]), 6)), vec![0, 1, 1, 2, 4, 9, 21]);
        assert_eq!(ints(&solve_counting_series(&spec(&[1]), 7)), vec![0, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(ints(&solve_counting_series(&spec(&[2]), 0)), vec![0]);
    }

    #[test]
    fn field_element_evaluation_with_pole_cancellation() {
        let k = FunctionField::new(&spec(&[2]));
        let f = solve_counting_series(&spec(&[2]), 30);
        assert_eq!(eval_field_element(&k.one(), &f).unwrap(), TruncatedSeries::one(30));
        // F² mod Q = −1 + F/x carries a 1/x coefficient.
        let f2 = &k.generator() * &k.generator();
        let s = eval_field_element(&f2, &f).unwrap();
        assert_eq!(s.order(), 29);
        assert_eq!(s, (&f * &f).truncate(29));
    }

    #[test]
    fn surviving_pole_is_reported() {
        let k = FunctionField::new(&spec(&[2]));
        let a = k.constant(RatFunc::new(UniPoly::one(), UniPoly::x()).unwrap());
        let f = solve_counting_series(&spec(&[2]), 10);
        assert_eq!(eval_field_element(&a, &f), Err(Error::NotAPowerSeries(1)));
    }

    #[test]
    fn numeric_solver_base_and_first_moment() {
        let s = spec(&[2]);
        let c = solve_numeric_fe(&s, 9, 2);
        assert_eq!(c[0], solve_counting_series(&s, 9));
        let c1 = ints(&c[1]);
        assert_eq!((c1[3], c1[5], c1[7]), (2, 12, 58));
    }

    #[test]
    fn numeric_solver_path_family() {
        let c = solve_numeric_fe(&spec(&[1]), 12, 3);
        for (r, cr) in c.iter().enumerate() {
            for n in 1..=12usize {
                let h = BigInt::from(n * (n - 1) / 2);
                // C(h, r) = falling factorial / r!
                let mut num = BigInt::one();
                let mut den = BigInt::one();
                for t in 0..r {
                    num *= &h - BigInt::from(t);
                    den *= BigInt::from(t + 1);
                }
                assert_eq!(cr.coeff(n), BigRational::new(num, den), "r={r} n={n}");
            }
        }
    }
}
