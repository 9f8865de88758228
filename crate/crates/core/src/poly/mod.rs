//! Dense univariate polynomials with exact coefficients.
//!
//! `IntPoly` (arbitrary-precision integer coefficients, ascending order) is
//! the universal carrier for inputs, factors, pair-product polynomials and
//! cyclotomics. `RatPoly` is the rational-coefficient companion used where
//! monic normalization is required, e.g. remainders modulo a non-monic
//! polynomial.

pub mod euclid;
pub mod special;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Reduced rational scalar: `gcd(|numer|, denom) = 1`, `denom >= 1`.
/// `num_rational::BigRational` maintains exactly these invariants.
pub type RatScalar = BigRational;

/// Dense integer polynomial, coefficients in ascending degree order.
///
/// The coefficient vector never has trailing zeros; the zero polynomial is
/// the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^d - c`.
    pub fn x_pow_minus(d: usize, c: i64) -> Self {
        let mut v = vec![BigInt::zero(); d + 1];
        v[0] = BigInt::from(-c);
        v[d] = BigInt::one();
        IntPoly::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a known-nonzero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient of a nonzero polynomial.
    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("lc of zero polynomial")
    }

    /// Constant term (zero for the zero polynomial).
    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_rat(&self, x: &RatScalar) -> RatScalar {
        let mut acc = RatScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + RatScalar::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        IntPoly::new(out)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by `x^k`.
    pub fn mul_x_pow(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        IntPoly::new(out)
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f(-x)`.
    pub fn compose_neg_x(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Nonnegative gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content carrying the sign of the leading coefficient, so that
    /// `self = signed_content * primitive_positive`.
    pub fn signed_content(&self) -> BigInt {
        let c = self.content();
        if self.is_zero() || !self.lc().is_negative() {
            c
        } else {
            -c
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_positive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let c = self.signed_content();
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Exact division; `None` if `self` is not a polynomial multiple of `d`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let n = d.coeffs.len();
        let mut q = vec![BigInt::zero(); rem.len() - n + 1];
        for k in (0..q.len()).rev() {
            let lead = std::mem::take(&mut rem[k + n - 1]);
            if lead.is_zero() {
                continue;
            }
            let (quot, r) = num_integer::Integer::div_rem(&lead, d.lc());
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate().take(n - 1) {
                rem[k + i] -= &quot * dc;
            }
            q[k] = quot;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm2_squared(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Height: max |coefficient|.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest `k` with `x^k | self` (zero polynomial reports 0).
    pub fn trailing_zero_order(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Divide by `x^k`; panics if not divisible.
    pub fn div_x_pow(&self, k: usize) -> IntPoly {
        assert!(self.trailing_zero_order() >= k || self.is_zero());
        IntPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| RatScalar::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Monic rational version of a nonzero polynomial.
    pub fn monic_rat(&self) -> RatPoly {
        assert!(!self.is_zero());
        let lc = RatScalar::from_integer(self.lc().clone());
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| RatScalar::from_integer(c.clone()) / &lc)
                .collect(),
        )
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

/// Dense polynomial with rational coefficients, ascending order.
#[derive(Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<RatScalar>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<RatScalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::new(vec![RatScalar::one()])
    }

    pub fn constant(c: RatScalar) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeffs(&self) -> &[RatScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatScalar {
        self.coeffs.get(i).cloned().unwrap_or_else(RatScalar::zero)
    }

    pub fn lc(&self) -> &RatScalar {
        self.coeffs.last().expect("lc of zero polynomial")
    }

    /// The constant value if degree <= 0.
    pub fn as_constant(&self) -> Option<RatScalar> {
        match self.coeffs.len() {
            0 => Some(RatScalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![RatScalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn mul_scalar(&self, s: &RatScalar) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Quotient and remainder; the divisor may have any nonzero leading
    /// coefficient.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.deg() < d.deg() {
            return (RatPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let n = d.coeffs.len();
        let mut q = vec![RatScalar::zero(); rem.len() - n + 1];
        for k in (0..q.len()).rev() {
            let quot = &rem[k + n - 1] / d.lc();
            if quot.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate().take(n - 1) {
                let t = &quot * dc;
                rem[k + i] -= t;
            }
            rem[k + n - 1] = RatScalar::zero();
            q[k] = quot;
        }
        (RatPoly::new(q), RatPoly::new(rem))
    }

    /// Exact division, erroring if a nonzero remainder appears.
    pub fn div_exact(&self, d: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal("expected exact polynomial division".into()))
        }
    }

    /// Clear denominators: returns `(p, d)` with `self = p / d`, `p` integer
    /// and `d` a positive integer.
    pub fn clear_denominators(&self) -> (IntPoly, BigInt) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let p = IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect(),
        );
        (p, lcm)
    }

    pub fn eval(&self, x: &RatScalar) -> RatScalar {
        let mut acc = RatScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

/// Rational content together with primitive irreducible factors and their
/// multiplicities: the input equals `content * prod factor_i^mult_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredForm {
    pub content: RatScalar,
    pub factors: Vec<(IntPoly, u32)>,
}

impl FactoredForm {
    /// Reconstruct `prod factor_i^mult_i` (without the content).
    pub fn product(&self) -> IntPoly {
        let mut acc = IntPoly::one();
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    /// Reconstruct the full rational-scaled polynomial as `(p, d)` with the
    /// original input equal to `p / d`.
    pub fn reconstruct(&self) -> (IntPoly, BigInt) {
        let p = self.product().mul_scalar(self.content.numer());
        (p, self.content.denom().clone())
    }

    pub fn is_irreducible_poly(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn construction_trims_trailing_zeros() {
        let f = p(&[1, 2, 0, 0]);
        assert_eq!(f.degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn arithmetic_basics() {
        let f = p(&[1, 1]); // x + 1
        let g = p(&[-1, 1]); // x - 1
        assert_eq!(f.mul(&g), p(&[-1, 0, 1]));
        assert_eq!(f.add(&g), p(&[0, 2]));
        assert_eq!(f.sub(&g), p(&[2]));
        assert_eq!(f.pow(2), p(&[1, 2, 1]));
        assert_eq!(f.eval_i64(3), BigInt::from(4));
    }

    #[test]
    fn content_and_primitive() {
        let f = p(&[-6, 0, -4]);
        assert_eq!(f.content(), BigInt::from(2));
        assert_eq!(f.signed_content(), BigInt::from(-2));
        assert_eq!(f.primitive_positive(), p(&[3, 0, 2]));
    }

    #[test]
    fn exact_division() {
        let f = p(&[-1, 0, 1]);
        assert_eq!(f.div_exact(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(f.div_exact(&p(&[1, 2])), None);
        assert_eq!(p(&[2, 2]).div_exact(&p(&[2])), Some(p(&[1, 1])));
    }

    #[test]
    fn rat_poly_div_rem() {
        // (x^3 - 1) / (2x - 2) = (x^2 + x + 1)/2 exactly.
        let f = p(&[-1, 0, 0, 1]).to_rat();
        let d = p(&[-2, 2]).to_rat();
        let (q, r) = f.div_rem(&d);
        assert!(r.is_zero());
        let half = RatScalar::new(BigInt::one(), BigInt::from(2));
        assert_eq!(
            q,
            RatPoly::new(vec![half.clone(), half.clone(), half.clone()])
        );
    }

    #[test]
    fn clear_denominators_roundtrip() {
        let f = RatPoly::new(vec![
            RatScalar::new(BigInt::from(1), BigInt::from(2)),
            RatScalar::new(BigInt::from(2), BigInt::from(3)),
        ]);
        let (pp, d) = f.clear_denominators();
        assert_eq!(pp, p(&[3, 4]));
        assert_eq!(d, BigInt::from(6));
    }

    #[test]
    fn display_readable() {
        assert_eq!(format!("{}", p(&[1, 0, -2, -6, -2, 0, 1])), "x^6 - 2*x^4 - 6*x^3 - 2*x^2 + 1");
    }
}
