//! Complex ball arithmetic over scaled integers.
//!
//! A ball at precision `prec` represents the disk of all complex `z` with
//! `|z - (re + i*im) * 2^-prec| <= rad * 2^-prec`. Midpoints round to
//! nearest; radii always round up, so every operation is conservative.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{isqrt_ceil, isqrt_floor};
use crate::error::{Error, Result};
use crate::poly::IntPoly;

#[derive(Clone, Debug)]
pub struct Ball {
    pub prec: u32,
    pub re: BigInt,
    pub im: BigInt,
    pub rad: BigInt,
}

/// Round `x / 2^bits` to nearest.
pub fn shr_round(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let half = BigInt::from(1) << (bits - 1);
    num_integer::Integer::div_floor(&(x + half), &(BigInt::from(1) << bits))
}

/// Round `x / 2^bits` up (for radii, `x >= 0`).
pub fn shr_ceil(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let mask = (BigInt::from(1) << bits) - 1;
    (x + mask) >> bits
}

/// Scaled-integer mantissa of an `f64` at `2^-prec`, exact.
pub fn f64_to_scaled(x: f64, prec: u32) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if raw_exp == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    };
    let shift = exp + prec as i64;
    let m = BigInt::from(mant) * sign;
    if shift >= 0 {
        m << (shift as u32)
    } else if shift > -64 {
        shr_round(&m, (-shift) as u32)
    } else {
        shr_round(&m, 63.min((-shift) as u32));
        // Deep underflow: the value is below one ulp.
        BigInt::zero()
    }
}

/// Approximate `mant * 2^-prec` as f64 (inf/0 on range overflow).
pub fn scaled_to_f64(mant: &BigInt, prec: u32) -> f64 {
    if mant.is_zero() {
        return 0.0;
    }
    let bits = mant.bits();
    if bits <= 53 {
        return mant.to_f64().unwrap_or(0.0) * 2f64.powi(-(prec as i32));
    }
    let shift = bits - 53;
    let top = (mant >> shift).to_f64().unwrap_or(0.0);
    top * 2f64.powi(shift as i32 - prec as i32)
}

impl Ball {
    pub fn exact_int(c: &BigInt, prec: u32) -> Ball {
        Ball { prec, re: c << prec, im: BigInt::zero(), rad: BigInt::zero() }
    }

    pub fn point(re: BigInt, im: BigInt, prec: u32) -> Ball {
        Ball { prec, re, im, rad: BigInt::zero() }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball { prec, re: BigInt::zero(), im: BigInt::zero(), rad: BigInt::zero() }
    }

    pub fn one(prec: u32) -> Ball {
        Ball::exact_int(&BigInt::from(1), prec)
    }

    /// Rescale to a new working precision (conservative on the radius).
    pub fn to_prec(&self, prec: u32) -> Ball {
        if prec == self.prec {
            return self.clone();
        }
        if prec > self.prec {
            let s = prec - self.prec;
            Ball {
                prec,
                re: &self.re << s,
                im: &self.im << s,
                rad: &self.rad << s,
            }
        } else {
            let s = self.prec - prec;
            Ball {
                prec,
                re: shr_round(&self.re, s),
                im: shr_round(&self.im, s),
                rad: shr_ceil(&self.rad, s) + 2,
            }
        }
    }

    /// Cheap upper bound on |midpoint| (1-norm).
    fn mid_mag_upper(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }

    /// Tight lower bound on |midpoint| (isqrt of a scale-2P quantity is
    /// already scale-P).
    fn mid_mag_lower(&self) -> BigInt {
        let d = &self.re * &self.re + &self.im * &self.im;
        let r = isqrt_floor(&d);
        if r.is_zero() {
            BigInt::zero()
        } else {
            r - 1
        }
    }

    /// Upper bound on |z| over the whole ball (2-norm based).
    pub fn mag_upper(&self) -> BigInt {
        let d = &self.re * &self.re + &self.im * &self.im;
        isqrt_ceil(&d) + &self.rad + 1
    }

    pub fn add(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        Ball {
            prec: self.prec,
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            rad: &self.rad + &o.rad,
        }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        Ball {
            prec: self.prec,
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            rad: &self.rad + &o.rad,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball { prec: self.prec, re: -&self.re, im: -&self.im, rad: self.rad.clone() }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        let p = self.prec;
        let re2 = &self.re * &o.re - &self.im * &o.im;
        let im2 = &self.re * &o.im + &self.im * &o.re;
        let rad2 = self.mid_mag_upper() * &o.rad
            + o.mid_mag_upper() * &self.rad
            + &self.rad * &o.rad;
        Ball {
            prec: p,
            re: shr_round(&re2, p),
            im: shr_round(&im2, p),
            rad: shr_ceil(&rad2, p) + 2,
        }
    }

    /// Ball reciprocal; fails if the ball may contain zero.
    pub fn inv(&self) -> Result<Ball> {
        let p = self.prec;
        let low = self.mid_mag_lower();
        if low <= self.rad {
            return Err(Error::PrecisionExhausted(p));
        }
        let den = &self.re * &self.re + &self.im * &self.im;
        let re = rounded_div(&(&self.re << (2 * p)), &den);
        let im = rounded_div(&(-&self.im << (2 * p)), &den);
        let margin = &low - &self.rad;
        let rad_num = &self.rad << (2 * p);
        let rad = num_integer::Integer::div_ceil(&rad_num, &(&low * &margin)) + 2;
        Ok(Ball { prec: p, re, im, rad })
    }

    pub fn div(&self, o: &Ball) -> Result<Ball> {
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power, negative exponents via the reciprocal.
    pub fn pow(&self, e: i64) -> Result<Ball> {
        if e == 0 {
            return Ok(Ball::one(self.prec));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Ball::one(self.prec);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Proof that the value differs from `c` (the ball excludes it).
    pub fn excludes_int(&self, c: &BigInt) -> bool {
        let w = self.sub(&Ball::exact_int(c, self.prec));
        w.mid_mag_lower() > w.rad
    }

    /// Proof that every point of the ball is within `2^-eps_bits` of `c`.
    pub fn within_of_int(&self, c: &BigInt, eps_bits: u32) -> bool {
        if eps_bits >= self.prec {
            return false;
        }
        let w = self.sub(&Ball::exact_int(c, self.prec));
        let up = isqrt_ceil(&(&w.re * &w.re + &w.im * &w.im)) + &w.rad + 1;
        up <= BigInt::from(1) << (self.prec - eps_bits)
    }

    pub fn re_f64(&self) -> f64 {
        scaled_to_f64(&self.re, self.prec)
    }

    pub fn im_f64(&self) -> f64 {
        scaled_to_f64(&self.im, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        scaled_to_f64(&self.rad, self.prec)
    }
}

fn rounded_div(num: &BigInt, den: &BigInt) -> BigInt {
    let half = den.abs() / 2;
    let adj = if (num.is_negative()) ^ (den.is_negative()) { num - half } else { num + half };
    &adj / den
}

/// Rigorous evaluation of an integer polynomial at a ball (Horner).
pub fn eval_ball(f: &IntPoly, z: &Ball) -> Ball {
    let mut acc = Ball::zero(z.prec);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&Ball::exact_int(c, z.prec));
    }
    acc
}
