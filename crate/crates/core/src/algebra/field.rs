//! The quotient ring `K = ℚ(x)[F]/(Q)` with `Q = x·P(F) − F`.
//!
//! An element is a polynomial in `F` of degree `< d = max(S)` with
//! rational-function coefficients. `F` stands for the counting series
//! `f(x)`, so every element denotes a function of `x` alone, and
//! [`FieldElement::dx`] differentiates that function using
//! `f′ = −Q_x / Q_F`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;

use super::{RatFunc, UniPoly};
use crate::error::{Error, Result};
use crate::family::{char_poly, defining_poly, FamilySpec};

/// Shared per-family data: the reduction rule for `F^d` and the cached
/// derivative of `F`.
pub struct FunctionField {
    spec: FamilySpec,
    /// `Q` as a polynomial in `F` with coefficients in ℚ(x).
    modulus: Vec<RatFunc>,
    /// `F^d ≡ Σ_{j<d} reduction[j]·F^j`.
    reduction: Vec<RatFunc>,
    dfdx: OnceLock<Result<Vec<RatFunc>>>,
}

impl FunctionField {
    pub fn new(spec: &FamilySpec) -> Arc<Self> {
        let dp = defining_poly(spec);
        let modulus: Vec<RatFunc> = dp.q.coeffs.into_iter().map(RatFunc::from_poly).collect();
        let d = spec.max_degree();
        let lead_inv = modulus[d].inv().expect("leading coefficient of Q is nonzero");
        let reduction = modulus[..d]
            .iter()
            .map(|c| -&(c * &lead_inv))
            .collect();
        Arc::new(FunctionField {
            spec: spec.clone(),
            modulus,
            reduction,
            dfdx: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// `d`, the number of stored coefficients per element.
    pub fn rank(&self) -> usize {
        self.reduction.len()
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            coeffs: vec![RatFunc::zero(); self.rank()],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.constant(RatFunc::one())
    }

    pub fn constant(self: &Arc<Self>, c: RatFunc) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    pub fn x(self: &Arc<Self>) -> FieldElement {
        self.constant(RatFunc::x())
    }

    /// The class of the indeterminate `F`, i.e. `g₀ = f(x)`.
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        self.reduce(vec![RatFunc::zero(), RatFunc::one()])
    }

    /// Remainder of `Σ poly[j]·F^j` on division by `Q`.
    pub fn reduce(self: &Arc<Self>, mut poly: Vec<RatFunc>) -> FieldElement {
        let d = self.rank();
        while poly.len() > d {
            let top = poly.pop().expect("len > d");
            if top.is_zero() {
                continue;
            }
            let base = poly.len() - d;
            for (j, r) in self.reduction.iter().enumerate() {
                if !r.is_zero() {
                    poly[base + j] = &poly[base + j] + &(&top * r);
                }
            }
        }
        poly.resize(d, RatFunc::zero());
        FieldElement {
            field: Arc::clone(self),
            coeffs: poly,
        }
    }

    /// Evaluates a polynomial with rational coefficients at `F`.
    pub fn eval_poly_at_generator(self: &Arc<Self>, p: &UniPoly) -> FieldElement {
        self.reduce(p.coeffs().iter().cloned().map(RatFunc::constant).collect())
    }

    /// `f′(x)` as an element of `K`, computed once per field.
    pub fn generator_derivative(self: &Arc<Self>) -> Result<FieldElement> {
        let coeffs = self
            .dfdx
            .get_or_init(|| {
                let p = char_poly(&self.spec);
                let q_x = self.eval_poly_at_generator(&p);
                let dp = p.derivative();
                let q_f = &(&self.x() * &self.eval_poly_at_generator(&dp)) - &self.one();
                let inv = q_f.inv()?;
                Ok((-&(&q_x * &inv)).coeffs)
            })
            .clone()?;
        Ok(FieldElement {
            field: Arc::clone(self),
            coeffs,
        })
    }

    fn modulus(&self) -> &[RatFunc] {
        &self.modulus
    }
}

impl fmt::Debug for FunctionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionField({:?})", self.spec)
    }
}

/// An element of `K`; equality compares the family by value and the
/// canonical coefficients exactly.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<FunctionField>,
    coeffs: Vec<RatFunc>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec == other.field.spec && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn field(&self) -> &Arc<FunctionField> {
        &self.field
    }

    pub fn family(&self) -> &FamilySpec {
        &self.field.spec
    }

    /// `coeffs()[j]` multiplies `F^j`.
    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(RatFunc::is_zero)
    }

    fn check_family(&self, other: &FieldElement) -> Result<()> {
        if self.field.spec == other.field.spec {
            Ok(())
        } else {
            Err(Error::FamilyMismatch {
                left: self.field.spec.degrees().to_vec(),
                right: other.field.spec.degrees().to_vec(),
            })
        }
    }

    pub fn try_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.check_family(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.check_family(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    fn zip_with(&self, rhs: &FieldElement, op: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| op(a, b))
                .collect(),
        }
    }

    /// Product reduced modulo `Q`.
    pub fn try_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.check_family(rhs)?;
        let d = self.coeffs.len();
        let mut prod = vec![RatFunc::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = &prod[i + j] + &(a * b);
                }
            }
        }
        Ok(self.field.reduce(prod))
    }

    pub fn scale(&self, c: &BigRational) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn mul_ratfunc(&self, c: &RatFunc) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        let mut acc = self.field.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// `ℚ(x)[F]` against `Q`.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroInversion);
        }
        // Invariant: s_i · self ≡ r_i (mod Q).
        let mut r0 = trimmed(self.field.modulus().to_vec());
        let mut r1 = trimmed(self.coeffs.clone());
        let mut s0: Vec<RatFunc> = Vec::new();
        let mut s1: Vec<RatFunc> = vec![RatFunc::one()];
        while r1.len() > 1 {
            let (q, r) = fpoly_div_rem(&r0, &r1);
            let s = fpoly_sub(&s0, &fpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r1.is_empty() {
            // r0 is a common factor of positive degree.
            return Err(Error::ReducibleModulus {
                degrees: self.field.spec.degrees().to_vec(),
            });
        }
        let c = r1[0].inv()?;
        let s: Vec<RatFunc> = s1.iter().map(|a| a * &c).collect();
        Ok(self.field.reduce(s))
    }

    /// Derivative with respect to `x` of the function this element denotes:
    /// `d/dx Σ R_j F^j = Σ R_j′ F^j + (Σ j R_j F^{j−1})·f′`.
    pub fn dx(&self) -> Result<FieldElement> {
        let d = self.coeffs.len();
        let explicit = FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(RatFunc::derivative).collect(),
        };
        let mut partial_f = vec![RatFunc::zero(); d];
        let mut any = false;
        for j in 1..d {
            if !self.coeffs[j].is_zero() {
                partial_f[j - 1] = self.coeffs[j].scale(&BigRational::from_integer(j.into()));
                any = true;
            }
        }
        if !any {
            return Ok(explicit);
        }
        let fprime = self.field.generator_derivative()?;
        let partial_f = FieldElement {
            field: Arc::clone(&self.field),
            coeffs: partial_f,
        };
        Ok(&explicit + &(&partial_f * &fprime))
    }

    /// Largest power of `x` dividing any coefficient denominator.
    pub fn pole_order_at_zero(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.denom().valuation().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

fn trimmed(mut v: Vec<RatFunc>) -> Vec<RatFunc> {
    while v.last().is_some_and(RatFunc::is_zero) {
        v.pop();
    }
    v
}

fn fpoly_div_rem(a: &[RatFunc], b: &[RatFunc]) -> (Vec<RatFunc>, Vec<RatFunc>) {
    let db = b.len() - 1;
    let lc_inv = b[db].inv().expect("trimmed divisor");
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), trimmed(rem));
    }
    let mut quot = vec![RatFunc::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let q = &rem[i] * &lc_inv;
        for (j, c) in b.iter().enumerate() {
            if !c.is_zero() {
                rem[i - db + j] = &rem[i - db + j] - &(&q * c);
            }
        }
        quot[i - db] = q;
    }
    rem.truncate(db);
    (trimmed(quot), trimmed(rem))
}

fn fpoly_mul(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatFunc::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trimmed(out)
}

fn fpoly_sub(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    let n = a.len().max(b.len());
    let zero = RatFunc::zero();
    trimmed(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics on a family mismatch; use the `try_` form to handle it.
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field elements from different families")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.field.spec, self)
    }
}

/// `( num(x) / den(x) ) * F^j + ...`, decreasing `j`, zero terms omitted.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c} * F^{j}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(s: &[i64]) -> Arc<FunctionField> {
        FunctionField::new(&FamilySpec::new(s.iter().copied()).unwrap())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(UniPoly::from_ints(n), UniPoly::from_ints(d)).unwrap()
    }

    #[test]
    fn binary_square_of_generator() {
        // x F² − F + x = 0  ⇒  F² = −1 + F/x
        let k = field(&[2]);
        let f = k.generator();
        assert_eq!(f.coeffs(), &[RatFunc::zero(), RatFunc::one()]);
        let f2 = &f * &f;
        assert_eq!(f2.coeffs(), &[RatFunc::from_int(-1), rf(&[1], &[0, 1])]);
    }

    #[test]
    fn modulus_reduces_to_zero() {
        for s in [vec![1], vec![2], vec![1, 2], vec![3], vec![2, 5]] {
            let k = field(&s);
            let q = k.reduce(k.modulus().to_vec());
            assert!(q.is_zero(), "{s:?}");
        }
    }

    #[test]
    fn identity_and_inverse() {
        let k = field(&[2]);
        let f = k.generator();
        assert_eq!(&f * &k.one(), f);
        assert!(k.one().inv().unwrap().is_one());
        let finv = f.inv().unwrap();
        assert!((&f * &finv).is_one());
        // From x f² − f + x = 0: 1/f = (1 − x f)/x.
        assert_eq!(finv.coeffs(), &[rf(&[1], &[0, 1]), RatFunc::from_int(-1)]);
        assert_eq!(k.zero().inv(), Err(Error::ZeroInversion));
    }

    #[test]
    fn family_mismatch() {
        let a = field(&[2]).generator();
        let b = field(&[3]).generator();
        assert!(matches!(a.try_mul(&b), Err(Error::FamilyMismatch { .. })));
        // Value equality, not identity.
        let c = field(&[2]).generator();
        assert_eq!(a, c);
        assert!(a.try_add(&c).is_ok());
    }

    #[test]
    fn derivative_of_constant_and_generator() {
        let k = field(&[2]);
        assert!(k.one().dx().unwrap().is_zero());
        // f′ = −(F² + 1)/(2xF − 1)
        let f = k.generator();
        let expected = -&(&(&(&f * &f) + &k.one()) * &(&(&k.x().scale(&BigRational::from_integer(2.into())) * &f) - &k.one()).inv().unwrap());
        assert_eq!(f.dx().unwrap(), expected);
    }

    #[test]
    fn path_family_is_rational() {
        // S = {1}: K = ℚ(x), F = x/(1−x).
        let k = field(&[1]);
        assert_eq!(k.rank(), 1);
        let f = k.generator();
        assert_eq!(f.coeffs(), &[rf(&[0, -1], &[-1, 1])]);
        assert_eq!(f.dx().unwrap().coeffs(), &[rf(&[1], &[1, -2, 1])]);
    }

    #[test]
    fn rendering() {
        let k = field(&[2]);
        let f = k.generator();
        assert_eq!((&f * &f).to_string(), "( 1 / x ) * F^1 + ( -1 / 1 ) * F^0");
        assert_eq!(k.zero().to_string(), "0");
    }
}
