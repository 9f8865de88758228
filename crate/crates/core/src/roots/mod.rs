//! Certified complex root enclosures.
//!
//! Isolation runs Aberth-Ehrlich simultaneous iteration (f64 seeds, then
//! fixed-point polish) and certifies the result with the classical bound:
//! the disk around `z` of radius `n * |f(z)/f'(z)|` contains at least one
//! root, so `n` pairwise disjoint such disks each contain exactly one.
//! Refinement is Newton's method re-certified with the same bound; every
//! radius is rigorous.

pub mod ball;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::isqrt_ceil;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use ball::{eval_ball, f64_to_scaled, scaled_to_f64, shr_ceil, shr_round, Ball};

/// Default ceiling of the working-precision ladder, in bits.
pub const DEFAULT_PRECISION_CEILING: u32 = 1 << 16;

/// A disk certified to contain exactly one root of the defining polynomial;
/// dyadic midpoint `(re + i*im) * 2^-prec` and dyadic radius `rad * 2^-prec`.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    pub re: BigInt,
    pub im: BigInt,
    pub rad: BigInt,
    pub prec: u32,
    /// Set once the root is known to be real (conjugation fixed point).
    pub is_real: bool,
}

impl RootEnclosure {
    pub fn ball(&self) -> Ball {
        Ball { prec: self.prec, re: self.re.clone(), im: self.im.clone(), rad: self.rad.clone() }
    }

    pub fn to_prec(&self, prec: u32) -> RootEnclosure {
        let b = self.ball().to_prec(prec);
        RootEnclosure { re: b.re, im: b.im, rad: b.rad, prec, is_real: self.is_real }
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

    /// Conjugate disk (encloses the conjugate root of a real polynomial).
    pub fn conj(&self) -> RootEnclosure {
        RootEnclosure {
            re: self.re.clone(),
            im: -&self.im,
            rad: self.rad.clone(),
            prec: self.prec,
            is_real: self.is_real,
        }
    }

    /// Exact test: do the two disks overlap (at a common precision)?
    pub fn overlaps(&self, other: &RootEnclosure) -> bool {
        let p = self.prec.max(other.prec);
        let a = self.to_prec(p);
        let b = other.to_prec(p);
        let dre = &a.re - &b.re;
        let dim = &a.im - &b.im;
        let d2 = &dre * &dre + &dim * &dim;
        let rr = &a.rad + &b.rad;
        d2 <= &rr * &rr
    }

    /// Interval of possible real parts, as scaled mantissas at `self.prec`.
    pub fn re_interval(&self) -> (BigInt, BigInt) {
        (&self.re - &self.rad, &self.re + &self.rad)
    }

    pub fn im_interval(&self) -> (BigInt, BigInt) {
        if self.is_real {
            (BigInt::zero(), BigInt::zero())
        } else {
            (&self.im - &self.rad, &self.im + &self.rad)
        }
    }
}

#[derive(Clone, Copy)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Isolate all roots of a squarefree polynomial into pairwise disjoint
/// certified enclosures, then refine each until
/// `rad <= 2^-rel_bits * max(1, |mid|)`.
pub fn isolate_roots(f: &IntPoly, rel_bits: u32) -> Result<Vec<RootEnclosure>> {
    isolate_roots_with_ceiling(f, rel_bits, DEFAULT_PRECISION_CEILING)
}

pub fn isolate_roots_with_ceiling(
    f: &IntPoly,
    rel_bits: u32,
    ceiling: u32,
) -> Result<Vec<RootEnclosure>> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::InvalidInput("root isolation needs degree >= 1".into()));
    }
    if !crate::poly::euclid::is_squarefree(f)? {
        return Err(Error::InvalidInput("root isolation requires squarefree input".into()));
    }
    let n = f.deg();
    let df = f.derivative();
    let mut seeds = aberth_f64(f);
    let mut prec: u32 = 64;
    loop {
        seeds = aberth_fixed(f, &df, seeds, prec, 40 + 4 * n);
        if let Some(mut encs) = certify(f, &df, &seeds, prec) {
            for enc in encs.iter_mut() {
                refine_enclosure(f, &df, enc, rel_bits, ceiling)?;
            }
            return Ok(encs);
        }
        if prec >= ceiling {
            return Err(Error::PrecisionExhausted(prec));
        }
        prec = (prec * 2).min(ceiling);
    }
}

/// Aberth-Ehrlich in f64, seeded on a scaled circle. Coefficients are
/// normalized so even huge-coefficient inputs give finite (if rough) seeds.
fn aberth_f64(f: &IntPoly) -> Vec<(f64, f64)> {
    let n = f.deg();
    let max_bits = f.coeffs().iter().map(|c| c.bits()).max().unwrap_or(1);
    let shift = max_bits.saturating_sub(500);
    let cs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| scaled_to_f64(&(c >> shift as u32), 0))
        .collect();
    let lc = cs[n];
    // Geometric-mean radius guess from |c0 / cn|.
    let c0 = cs.iter().find(|c| **c != 0.0).copied().unwrap_or(1.0);
    let mut r = (c0 / lc).abs().powf(1.0 / n as f64);
    if !r.is_finite() || r == 0.0 {
        r = 1.0;
    }
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.41;
            C64::new(r * theta.cos(), r * theta.sin())
        })
        .collect();
    let eval = |x: C64| -> (C64, C64) {
        let mut v = C64::new(0.0, 0.0);
        let mut d = C64::new(0.0, 0.0);
        for c in cs.iter().rev() {
            d = d.mul(x).add(v);
            v = v.mul(x).add(C64::new(*c, 0.0));
        }
        (v, d)
    };
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if !v.re.is_finite() || !v.im.is_finite() {
                continue;
            }
            let q = if d.abs() > 0.0 { v.div(d) } else { C64::new(1e-3, 1e-3) };
            let mut s = C64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i].sub(*zj);
                    if diff.abs() > 0.0 {
                        s = s.add(C64::new(1.0, 0.0).div(diff));
                    }
                }
            }
            let denom = C64::new(1.0, 0.0).sub(q.mul(s));
            let w = if denom.abs() > 1e-300 { q.div(denom) } else { q };
            if w.re.is_finite() && w.im.is_finite() {
                z[i] = z[i].sub(w);
                max_step = max_step.max(w.abs() / (1.0 + z[i].abs()));
            }
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z.iter().map(|c| (c.re, c.im)).collect()
}

/// Fixed-point complex without radius tracking, for iteration midpoints.
#[derive(Clone)]
struct FixC {
    re: BigInt,
    im: BigInt,
}

impl FixC {
    fn mul(&self, o: &FixC, p: u32) -> FixC {
        FixC {
            re: shr_round(&(&self.re * &o.re - &self.im * &o.im), p),
            im: shr_round(&(&self.re * &o.im + &self.im * &o.re), p),
        }
    }
    fn sub(&self, o: &FixC) -> FixC {
        FixC { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn add(&self, o: &FixC) -> FixC {
        FixC { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn div(&self, o: &FixC, p: u32) -> Option<FixC> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << p;
        let im = (&self.im * &o.re - &self.re * &o.im) << p;
        Some(FixC {
            re: num_integer::Integer::div_floor(&re, &den),
            im: num_integer::Integer::div_floor(&im, &den),
        })
    }
    fn norm1(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }
}

fn eval_fix(f: &IntPoly, z: &FixC, p: u32) -> FixC {
    let mut acc = FixC { re: BigInt::zero(), im: BigInt::zero() };
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z, p);
        acc.re += c << p;
    }
    acc
}

/// Aberth polish at fixed precision from approximate seeds.
fn aberth_fixed(
    f: &IntPoly,
    df: &IntPoly,
    seeds: Vec<(f64, f64)>,
    prec: u32,
    max_iter: usize,
) -> Vec<(f64, f64)> {
    let n = seeds.len();
    let mut z: Vec<FixC> = seeds
        .iter()
        .map(|(re, im)| FixC { re: f64_to_scaled(*re, prec), im: f64_to_scaled(*im, prec) })
        .collect();
    let tol = BigInt::from(1) << (prec / 4).max(1);
    for _ in 0..max_iter {
        let mut max_step = BigInt::zero();
        for i in 0..n {
            let v = eval_fix(f, &z[i], prec);
            let d = eval_fix(df, &z[i], prec);
            let q = match v.div(&d, prec) {
                Some(q) => q,
                None => continue,
            };
            let one = FixC { re: BigInt::from(1) << prec, im: BigInt::zero() };
            let mut s = FixC { re: BigInt::zero(), im: BigInt::zero() };
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i].sub(zj);
                    if let Some(r) = one.div(&diff, prec) {
                        s = s.add(&r);
                    }
                }
            }
            let denom = one.sub(&q.mul(&s, prec));
            let w = q.div(&denom, prec).unwrap_or(q);
            let step = w.norm1();
            z[i] = z[i].sub(&w);
            max_step = max_step.max(step);
        }
        // Stop once corrections are far below the scale of the values.
        let scale: BigInt = z.iter().map(|c| c.norm1()).max().unwrap_or_else(BigInt::zero)
            + (BigInt::from(1) << prec);
        if &max_step * &tol < scale {
            break;
        }
    }
    z.iter()
        .map(|c| (scaled_to_f64(&c.re, prec), scaled_to_f64(&c.im, prec)))
        .collect()
}

/// Certified per-seed radius `n * |f(z)| / |f'(z)|` as a scaled mantissa;
/// `None` when `f'` cannot be bounded away from zero at this precision.
fn certified_radius(f: &IntPoly, df: &IntPoly, z: &Ball) -> Option<BigInt> {
    let n = f.deg();
    let fv = eval_ball(f, z);
    let dv = eval_ball(df, z);
    let up = isqrt_ceil(&(&fv.re * &fv.re + &fv.im * &fv.im)) + &fv.rad + 1;
    let low = {
        let l = crate::arith::isqrt_floor(&(&dv.re * &dv.re + &dv.im * &dv.im));
        l - &dv.rad - 1
    };
    if low <= BigInt::zero() {
        return None;
    }
    let num = (BigInt::from(n as u64) * up) << z.prec;
    Some(num_integer::Integer::div_ceil(&num, &low) + 1)
}

/// Try to certify seeds as pairwise disjoint isolating disks.
fn certify(f: &IntPoly, df: &IntPoly, seeds: &[(f64, f64)], prec: u32) -> Option<Vec<RootEnclosure>> {
    let mut encs = Vec::with_capacity(seeds.len());
    for (re, im) in seeds {
        if !re.is_finite() || !im.is_finite() {
            return None;
        }
        let z = Ball::point(f64_to_scaled(*re, prec), f64_to_scaled(*im, prec), prec);
        let rad = certified_radius(f, df, &z)?;
        encs.push(RootEnclosure { re: z.re, im: z.im, rad, prec, is_real: false });
    }
    for i in 0..encs.len() {
        for j in i + 1..encs.len() {
            if encs[i].overlaps(&encs[j]) {
                return None;
            }
        }
    }
    Some(encs)
}

/// Newton refinement of one enclosure down to
/// `rad <= 2^-rel_bits * max(1, |mid|)`, re-certified at every step and
/// always staying inside the previous disk.
pub fn refine_enclosure(
    f: &IntPoly,
    df: &IntPoly,
    enc: &mut RootEnclosure,
    rel_bits: u32,
    ceiling: u32,
) -> Result<()> {
    let target = |e: &RootEnclosure| -> BigInt {
        // Working precision always exceeds rel_bits here, so the target is
        // an honest 2^-rel_bits * max(1, |mid|).
        let scale = (BigInt::from(1) << e.prec).max(e.re.abs() + e.im.abs());
        shr_ceil(&scale, rel_bits.min(e.prec))
    };
    let mut prec = enc.prec.max(2 * rel_bits + 32);
    loop {
        {
            let cur = enc.to_prec(prec);
            if cur.rad <= target(&cur) {
                *enc = cur;
                return Ok(());
            }
        }
        if prec > ceiling {
            return Err(Error::PrecisionExhausted(prec));
        }
        let mut cur = enc.to_prec(prec);
        let mut progressed = false;
        for _ in 0..64 {
            if cur.rad <= target(&cur) {
                break;
            }
            let z = FixC { re: cur.re.clone(), im: cur.im.clone() };
            let v = eval_fix(f, &z, prec);
            let d = eval_fix(df, &z, prec);
            let w = match v.div(&d, prec) {
                Some(w) => w,
                None => break,
            };
            let z1 = z.sub(&w);
            let zb = Ball::point(z1.re.clone(), z1.im.clone(), prec);
            let rad = match certified_radius(f, df, &zb) {
                Some(r) => r,
                None => break,
            };
            // The new disk must sit inside the old one to keep the same root.
            let dre = &z1.re - &cur.re;
            let dim = &z1.im - &cur.im;
            let dist2 = &dre * &dre + &dim * &dim;
            let slack = &cur.rad - &rad;
            if slack <= BigInt::zero() || dist2 > &slack * &slack {
                break;
            }
            if rad < cur.rad {
                cur = RootEnclosure { re: z1.re, im: z1.im, rad, prec, is_real: cur.is_real };
                progressed = true;
            } else {
                break;
            }
        }
        if progressed {
            *enc = cur;
            if enc.rad <= target(enc) {
                return Ok(());
            }
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::special::cyclotomic;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn sorted_f64(encs: &[RootEnclosure]) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = encs.iter().map(|e| (e.re_f64(), e.im_f64())).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn isolates_sqrt2() {
        let encs = isolate_roots(&p(&[-2, 0, 1]), 60).unwrap();
        assert_eq!(encs.len(), 2);
        let r = sorted_f64(&encs);
        assert!((r[0].0 + 2f64.sqrt()).abs() < 1e-12);
        assert!((r[1].0 - 2f64.sqrt()).abs() < 1e-12);
        for e in &encs {
            assert!(e.rad_f64() < 1e-15);
        }
    }

    #[test]
    fn isolates_schinzel_sextic_to_paper_decimals() {
        let f = p(&[1, 0, -2, -6, -2, 0, 1]);
        let encs = isolate_roots(&f, 80).unwrap();
        assert_eq!(encs.len(), 6);
        let mut got = sorted_f64(&encs);
        let mut want = vec![
            (0.44576, 0.0),
            (2.24333, 0.0),
            (-0.92999, -1.17407),
            (-0.92999, 1.17407),
            (-0.41455, -0.52336),
            (-0.41455, 0.52336),
        ];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g.0 - w.0).abs() < 2e-5 && (g.1 - w.1).abs() < 2e-5, "{:?} vs {:?}", g, w);
        }
    }

    #[test]
    fn isolates_gaussian_units() {
        let encs = isolate_roots(&cyclotomic(4), 60).unwrap();
        let r = sorted_f64(&encs);
        assert!((r[0].1 + 1.0).abs() < 1e-12 && r[0].0.abs() < 1e-12);
        assert!((r[1].1 - 1.0).abs() < 1e-12 && r[1].0.abs() < 1e-12);
    }

    #[test]
    fn enclosures_disjoint_and_refinable() {
        let f = p(&[-1, -1, 0, 0, 0, 1]); // x^5 - x - 1
        let mut encs = isolate_roots(&f, 53).unwrap();
        for i in 0..encs.len() {
            for j in i + 1..encs.len() {
                assert!(!encs[i].overlaps(&encs[j]));
            }
        }
        let df = f.derivative();
        for e in encs.iter_mut() {
            refine_enclosure(&f, &df, e, 300, DEFAULT_PRECISION_CEILING).unwrap();
            assert!(e.rad_f64() < 1e-80);
        }
        // Vieta: sum of roots = 0 for x^5 - x - 1.
        let sum_re: f64 = encs.iter().map(|e| e.re_f64()).sum();
        let sum_im: f64 = encs.iter().map(|e| e.im_f64()).sum();
        assert!(sum_re.abs() < 1e-10 && sum_im.abs() < 1e-10);
    }

    #[test]
    fn vieta_trace_check_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let mut done = 0;
        while done < 25 {
            let deg = rng.random_range(2..=7);
            let cs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-9..=9)).collect();
            let f = IntPoly::from_i64s(&cs);
            if f.is_zero() || f.deg() < 2 {
                continue;
            }
            if !crate::poly::euclid::is_squarefree(&f).unwrap() {
                continue;
            }
            let encs = isolate_roots(&f, 60).unwrap();
            assert_eq!(encs.len(), f.deg());
            let sum_re: f64 = encs.iter().map(|e| e.re_f64()).sum();
            let trace = -cs[deg - 1] as f64 / cs[deg] as f64;
            assert!(
                (sum_re - trace).abs() < 1e-8 * (1.0 + trace.abs()),
                "Vieta failed for {}: {} vs {}",
                f,
                sum_re,
                trace
            );
            done += 1;
        }
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(isolate_roots(&p(&[1, 2, 1]), 60).is_err());
    }
}
