//! The root-of-rational branch: decides whether the roots of an irreducible
//! polynomial all become rational at some power, finds the minimal such
//! power and its value, pins down the unity exponents of the conjugate
//! ratios with certified numerics, and assembles the relation lattice.
//!
//! Derivation of the lattice conditions, with `b_i = b_1 * zeta_N^{a_i}`:
//! `prod b_i^{v_i} = b_1^S * zeta_N^T` for `S = sum v_i`, `T = sum a_i v_i`.
//! Raising to the N-th power forces `q^S = 1`; for `q` outside `{1, -1}`
//! that means `S = 0` and then `T = 0 mod N`. When `q` is `1` or `-1` the
//! roots themselves are roots of unity of some order `M | 2N`, and the
//! single condition is `sum b_i v_i = 0 mod M`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{divisors, max_order_with_phi_at_most};
use crate::deadline;
use crate::error::{Error, Result};
use crate::factor::all_roots_roots_of_unity;
use crate::lattice::{kernel_with_congruence, CongruenceSpec, LatticeBasis};
use crate::pairprod::ratio_poly;
use crate::poly::special::pow_mod;
use crate::poly::{IntPoly, RatPoly, RatScalar};
use crate::roots::ball::Ball;
use crate::roots::{refine_enclosure, RootEnclosure, DEFAULT_PRECISION_CEILING};

/// Everything the lattice assembly needs about the root-of-rational case.
#[derive(Clone, Debug)]
pub struct RootOfRationalData {
    /// Minimal `N >= 1` with `x^N mod g` constant.
    pub power: u64,
    /// That constant `q = b^N`.
    pub value: RatScalar,
    /// True iff `q` is `1` or `-1`, i.e. the roots are roots of unity.
    pub unity_case: bool,
    /// `N` in the generic case, the root order `M` in the unity case.
    pub modulus: u64,
    /// `a_i` with `b_i = b_1 * zeta_N^{a_i}` (generic, `a_1 = 0`), or `b_i`
    /// with `b_i = zeta_M^{b_i}` (unity case). Indexed in canonical root
    /// order.
    pub exponents: Vec<u64>,
}

/// True iff every root of the irreducible `g` is a root of a rational:
/// equivalently, all conjugate ratios are roots of unity.
///
/// A constant remainder `x^N mod g` is an exact positive certificate (every
/// root then satisfies `b^N = q`), so the bounded power search runs first;
/// the ratio-polynomial decision remains the complete fallback, since an
/// exhausted search proves nothing when the true power exceeds the cap.
pub fn is_root_of_rational_poly(g: &IntPoly) -> Result<bool> {
    if g.is_zero() || g.degree().unwrap_or(0) < 1 {
        return Err(Error::InvalidInput("degree must be >= 1".into()));
    }
    if g.constant_term().is_zero() {
        return Err(Error::InvalidInput("zero constant term".into()));
    }
    if g.deg() == 1 {
        return Ok(true);
    }
    if bounded_constant_power(g, power_search_cap(g))?.is_some() {
        return Ok(true);
    }
    let ratios = ratio_poly(g)?;
    all_roots_roots_of_unity(&ratios)
}

fn power_search_cap(g: &IntPoly) -> u64 {
    let n = g.deg() as u64;
    max_order_with_phi_at_most(n * n).saturating_mul(n * n)
}

/// Smallest `m <= cap` with `x^m mod g` constant, found by incremental
/// multiplication, or `None` when the cap is exhausted.
fn bounded_constant_power(g: &IntPoly, cap: u64) -> Result<Option<(u64, RatScalar)>> {
    let modulus = g.monic_rat();
    let x = RatPoly::new(vec![RatScalar::from_integer(BigInt::from(0)), RatScalar::one()]);
    let mut r = x.div_rem(&modulus).1;
    let mut tick = 0u32;
    for m in 1..=cap {
        deadline::check_every(&mut tick, 64)?;
        if let Some(q) = r.as_constant() {
            return Ok(Some((m, q)));
        }
        if m < cap {
            r = r.mul(&x).div_rem(&modulus).1;
        }
    }
    Ok(None)
}

/// Minimal `N` with `x^N mod g` constant, and that constant. Must only be
/// called when `is_root_of_rational_poly(g)` holds; the search cap flags a
/// violated precondition.
pub fn rational_power_data(g: &IntPoly) -> Result<(u64, RatScalar)> {
    if g.is_zero() || g.degree().unwrap_or(0) < 1 {
        return Err(Error::InvalidInput("degree must be >= 1".into()));
    }
    match bounded_constant_power(g, power_search_cap(g))? {
        Some(found) => Ok(found),
        None => Err(Error::Internal(
            "no rational power found below the cap; precondition violated".into(),
        )),
    }
}

/// Threshold-certified identification of a ball known to be an exact
/// `modulus`-th root of unity: refine below half the minimal separation
/// `2 sin(pi/modulus)` and round the argument.
fn identify_unity_exponent(ball: &Ball, modulus: u64) -> Option<u64> {
    let sep_half = (std::f64::consts::PI / modulus as f64).sin();
    let rad = ball.rad_f64();
    if !rad.is_finite() || rad >= 0.25 * sep_half {
        return None;
    }
    let (re, im) = (ball.re_f64(), ball.im_f64());
    let theta = im.atan2(re);
    let kf = (theta * modulus as f64 / std::f64::consts::TAU).round();
    let k = ((kf as i64).rem_euclid(modulus as i64)) as u64;
    let ang = std::f64::consts::TAU * k as f64 / modulus as f64;
    let d = (re - ang.cos()).hypot(im - ang.sin());
    if d < 0.5 * sep_half {
        Some(k)
    } else {
        None
    }
}

/// Exponents `a_i` with `b_i / b_1 = zeta_N^{a_i}` under canonical root
/// order (`a_1 = 0`). The ratios are exact `N`-th roots of unity, so the
/// rounding is exact once the enclosure radius is below half the separation
/// between distinct roots of unity.
pub fn unity_exponents(
    g: &IntPoly,
    power: u64,
    roots: &mut [RootEnclosure],
) -> Result<Vec<u64>> {
    if power > 1 << 20 {
        return Err(Error::Internal("unity order too large to separate".into()));
    }
    let df = g.derivative();
    let mut rel_bits: u32 = 96;
    let mut out = vec![0u64; roots.len()];
    loop {
        let prec = rel_bits + 64;
        let reference = roots[0].ball().to_prec(prec).inv();
        if let Ok(ref_inv) = reference {
            let mut ok = true;
            for (i, enc) in roots.iter().enumerate() {
                if i == 0 {
                    out[0] = 0;
                    continue;
                }
                let ratio = enc.ball().to_prec(prec).mul(&ref_inv);
                match identify_unity_exponent(&ratio, power) {
                    Some(k) => out[i] = k,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(out);
            }
        }
        if rel_bits >= DEFAULT_PRECISION_CEILING {
            return Err(Error::PrecisionExhausted(rel_bits));
        }
        rel_bits *= 2;
        for enc in roots.iter_mut() {
            refine_enclosure(g, &df, enc, rel_bits, DEFAULT_PRECISION_CEILING)?;
        }
    }
}

/// Exponents `b_i` with `b_i = zeta_M^{b_i}` for roots that are themselves
/// roots of unity of order dividing `modulus`.
fn unity_exponents_absolute(
    g: &IntPoly,
    modulus: u64,
    roots: &mut [RootEnclosure],
) -> Result<Vec<u64>> {
    if modulus > 1 << 20 {
        return Err(Error::Internal("unity order too large to separate".into()));
    }
    let df = g.derivative();
    let mut rel_bits: u32 = 96;
    let mut out = vec![0u64; roots.len()];
    loop {
        let prec = rel_bits + 64;
        let mut ok = true;
        for (i, enc) in roots.iter().enumerate() {
            match identify_unity_exponent(&enc.ball().to_prec(prec), modulus) {
                Some(k) => out[i] = k,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(out);
        }
        if rel_bits >= DEFAULT_PRECISION_CEILING {
            return Err(Error::PrecisionExhausted(rel_bits));
        }
        rel_bits *= 2;
        for enc in roots.iter_mut() {
            refine_enclosure(g, &df, enc, rel_bits, DEFAULT_PRECISION_CEILING)?;
        }
    }
}

/// Order of the roots as roots of unity: the minimal `m` dividing `2N` with
/// `x^m = 1 mod g`, decided exactly by modular powering.
fn unity_order(g: &IntPoly, power: u64) -> Result<u64> {
    for m in divisors(2 * power) {
        let r = pow_mod(m, g)?;
        if r.as_constant() == Some(RatScalar::one()) {
            return Ok(m);
        }
    }
    Err(Error::Internal("roots of unity with no order dividing 2N".into()))
}

/// Full analysis of the root-of-rational branch for an irreducible `g` with
/// canonical-ordered root enclosures.
pub fn analyze_root_of_rational(
    g: &IntPoly,
    roots: &mut [RootEnclosure],
) -> Result<RootOfRationalData> {
    let (power, value) = rational_power_data(g)?;
    let one = RatScalar::one();
    let unity_case = value == one || value == -one.clone();
    if unity_case {
        let modulus = unity_order(g, power)?;
        let exponents = unity_exponents_absolute(g, modulus, roots)?;
        Ok(RootOfRationalData { power, value, unity_case, modulus, exponents })
    } else {
        let exponents = unity_exponents(g, power, roots)?;
        Ok(RootOfRationalData { power, value, unity_case, modulus: power, exponents })
    }
}

/// The full relation lattice of the root-of-rational case.
pub fn ror_lattice_basis(g: &IntPoly, data: &RootOfRationalData) -> Result<LatticeBasis> {
    if data.exponents.len() != g.deg() {
        return Err(Error::InvalidInput("exponent vector length mismatch".into()));
    }
    let spec = CongruenceSpec::from_u64(&data.exponents, data.modulus, !data.unity_case)?;
    Ok(kernel_with_congruence(&spec))
}
