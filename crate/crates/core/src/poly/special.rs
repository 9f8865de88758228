//! Squarefree decomposition, Graeffe transform, exact polynomial square
//! roots, modular powering and cyclotomic polynomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{divisors, perfect_sqrt};
use crate::error::{Error, Result};
use crate::poly::euclid::poly_gcd;
use crate::poly::{IntPoly, RatPoly, RatScalar};

/// Result of Yun's squarefree decomposition:
/// input = `content * prod parts_i ^ mult_i`, with squarefree pairwise
/// coprime parts and strictly increasing multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub content: RatScalar,
    pub parts: Vec<(IntPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn reconstruct(&self) -> (IntPoly, BigInt) {
        let mut acc = IntPoly::one();
        for (g, k) in &self.parts {
            acc = acc.mul(&g.pow(*k));
        }
        (acc.mul_scalar(self.content.numer()), self.content.denom().clone())
    }
}

/// Yun's algorithm over Z (characteristic zero).
pub fn squarefree_decompose(f: &IntPoly) -> Result<SquarefreeDecomposition> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::InvalidInput(
            "squarefree decomposition needs degree >= 1".into(),
        ));
    }
    let content = RatScalar::from_integer(f.signed_content());
    let f = f.primitive_positive();
    let df = f.derivative();
    let a0 = poly_gcd(&f, &df)?;
    let mut b = f
        .div_exact(&a0)
        .ok_or_else(|| Error::Internal("Yun: gcd must divide f".into()))?;
    let mut c = df
        .div_exact(&a0)
        .ok_or_else(|| Error::Internal("Yun: gcd must divide f'".into()))?;
    let mut d = c.sub(&b.derivative());
    let mut parts = Vec::new();
    let mut i = 1u32;
    while b.deg() > 0 {
        let a = poly_gcd(&b, &d)?;
        if a.deg() > 0 {
            parts.push((a.clone(), i));
        }
        b = b
            .div_exact(&a)
            .ok_or_else(|| Error::Internal("Yun: inexact division".into()))?;
        c = d
            .div_exact(&a)
            .ok_or_else(|| Error::Internal("Yun: inexact division".into()))?;
        d = c.sub(&b.derivative());
        i += 1;
    }
    // b is now a constant; fold any residual unit into the content check.
    debug_assert!(b == IntPoly::one());
    Ok(SquarefreeDecomposition { content, parts })
}

/// Graeffe transform: the polynomial `G` with `G(x^2) = (-1)^deg(f) f(x) f(-x)`;
/// its roots are the squares of the roots of `f`.
pub fn graeffe(f: &IntPoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::InvalidInput("Graeffe transform of zero".into()));
    }
    let q = f.mul(&f.compose_neg_x());
    let n = f.deg();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut c = q.coeff(2 * i);
        if n % 2 == 1 {
            c = -c;
        }
        out.push(c);
    }
    debug_assert!(q.coeffs().iter().skip(1).step_by(2).all(Zero::is_zero));
    Ok(IntPoly::new(out))
}

/// Exact square root in `Z[x]`: returns `h` with `h^2 = f` (positive leading
/// coefficient) when `f` is a perfect square, `None` otherwise.
pub fn poly_sqrt_exact(f: &IntPoly) -> Option<IntPoly> {
    if f.is_zero() {
        return Some(IntPoly::zero());
    }
    if f.lc().is_negative() || !f.deg().is_multiple_of(2) {
        return None;
    }
    let n = f.deg() / 2;
    let lc_root = perfect_sqrt(f.lc())?;
    let mut h = vec![BigInt::zero(); n + 1];
    h[n] = lc_root;
    let two_lc = &h[n] * BigInt::from(2);
    for k in (0..n).rev() {
        // Coefficient of x^(n+k) in h^2 is 2*h[n]*h[k] + sum over other splits.
        let mut s = BigInt::zero();
        let mut i = k + 1;
        while i < n + k - i {
            s += &h[i] * &h[n + k - i] * BigInt::from(2);
            i += 1;
        }
        if 2 * i == n + k {
            s += &h[i] * &h[i];
        }
        let num = f.coeff(n + k) - s;
        let (q, r) = num_integer::Integer::div_rem(&num, &two_lc);
        if !r.is_zero() {
            return None;
        }
        h[k] = q;
    }
    let h = IntPoly::new(h);
    if h.mul(&h) == *f {
        Some(if h.lc().is_negative() { h.neg() } else { h })
    } else {
        None
    }
}

/// Remainder of `x^m` modulo `g` (rational coefficients; `g` is normalized
/// to monic internally), by binary powering.
pub fn pow_mod(m: u64, g: &IntPoly) -> Result<RatPoly> {
    if g.is_zero() || g.deg() < 1 {
        return Err(Error::InvalidInput("pow_mod needs deg(g) >= 1".into()));
    }
    let modulus = g.monic_rat();
    let reduce = |p: &RatPoly| -> RatPoly { p.div_rem(&modulus).1 };
    let mut base = reduce(&RatPoly::new(vec![RatScalar::zero(), RatScalar::one()]));
    let mut acc = RatPoly::one();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc = reduce(&acc.mul(&base));
        }
        e >>= 1;
        if e > 0 {
            base = reduce(&base.mul(&base));
        }
    }
    Ok(acc)
}

/// The d-th cyclotomic polynomial, monic of degree phi(d), via the
/// divisibility recursion `x^d - 1 = prod_{e | d} Phi_e`.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1);
    let mut num = IntPoly::x_pow_minus(d as usize, 1);
    for e in divisors(d) {
        if e == d {
            continue;
        }
        let phi_e = cyclotomic(e);
        num = num
            .div_exact(&phi_e)
            .expect("cyclotomic recursion divides exactly");
    }
    num
}
