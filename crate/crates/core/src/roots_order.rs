//! Canonical root ordering: sort certified enclosures by (real part
//! ascending, imaginary part ascending), with exact tie handling.
//!
//! Real-part ties between a conjugate pair are exact by symmetry, so the
//! pair is ordered by the sign of the imaginary part. The conjugation
//! pairing itself is decided rigorously: the conjugate of an isolating disk
//! of a real polynomial isolates the conjugate root, so refining until it
//! overlaps exactly one disk identifies the partner.

use std::cmp::Ordering;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::roots::{refine_enclosure, RootEnclosure, DEFAULT_PRECISION_CEILING};

/// The permutation `t` with `conj(root_i) = root_{t(i)}`; `t(i) == i` marks
/// a real root (the flag is set on the enclosure as a side effect).
pub fn conjugation_permutation(
    f: &IntPoly,
    encs: &mut [RootEnclosure],
) -> Result<Vec<usize>> {
    let df = f.derivative();
    let mut rel_bits: u32 = 64;
    loop {
        let mut perm = vec![usize::MAX; encs.len()];
        let mut ok = true;
        'outer: for i in 0..encs.len() {
            let c = encs[i].conj();
            let mut hit = usize::MAX;
            for (j, e) in encs.iter().enumerate() {
                if c.overlaps(e) {
                    if hit != usize::MAX {
                        ok = false;
                        break 'outer;
                    }
                    hit = j;
                }
            }
            if hit == usize::MAX {
                // Conjugate root must be enclosed somewhere; radii too wide.
                ok = false;
                break;
            }
            perm[i] = hit;
        }
        if ok {
            for i in 0..encs.len() {
                debug_assert_eq!(perm[perm[i]], i, "conjugation must be an involution");
                if perm[i] == i {
                    encs[i].is_real = true;
                }
            }
            return Ok(perm);
        }
        if rel_bits >= DEFAULT_PRECISION_CEILING {
            return Err(Error::PrecisionExhausted(rel_bits));
        }
        rel_bits *= 2;
        for e in encs.iter_mut() {
            refine_enclosure(f, &df, e, rel_bits, DEFAULT_PRECISION_CEILING)?;
        }
    }
}

/// Exact (Re, Im) comparison of two distinct enclosed roots, refining as
/// needed. `conj` is the conjugation permutation.
fn compare_roots(
    f: &IntPoly,
    df: &IntPoly,
    encs: &mut [RootEnclosure],
    conj: &[usize],
    i: usize,
    j: usize,
) -> Result<Ordering> {
    if i == j {
        return Ok(Ordering::Equal);
    }
    if conj[i] == j {
        // Exactly equal real parts; order by the imaginary sign.
        let mut rel_bits: u32 = 64;
        loop {
            let (lo, hi) = encs[i].im_interval();
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if rel_bits >= DEFAULT_PRECISION_CEILING {
                return Err(Error::PrecisionExhausted(rel_bits));
            }
            rel_bits *= 2;
            refine_enclosure(f, df, &mut encs[i], rel_bits, DEFAULT_PRECISION_CEILING)?;
        }
    }
    let mut rel_bits: u32 = 64;
    loop {
        let p = encs[i].prec.max(encs[j].prec);
        let a = encs[i].to_prec(p);
        let b = encs[j].to_prec(p);
        let (alo, ahi) = a.re_interval();
        let (blo, bhi) = b.re_interval();
        if ahi < blo {
            return Ok(Ordering::Less);
        }
        if bhi < alo {
            return Ok(Ordering::Greater);
        }
        // Equal real parts of non-conjugate distinct roots would loop to the
        // ceiling; such inputs surface as a retryable precision error.
        if rel_bits >= DEFAULT_PRECISION_CEILING {
            return Err(Error::PrecisionExhausted(rel_bits));
        }
        rel_bits *= 2;
        refine_enclosure(f, df, &mut encs[i], rel_bits, DEFAULT_PRECISION_CEILING)?;
        refine_enclosure(f, df, &mut encs[j], rel_bits, DEFAULT_PRECISION_CEILING)?;
    }
}

/// Sort enclosures into canonical order in place.
pub fn sort_canonical(f: &IntPoly, encs: &mut Vec<RootEnclosure>) -> Result<()> {
    let conj = conjugation_permutation(f, encs)?;
    let df = f.derivative();
    let n = encs.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Insertion sort so the comparator can refine enclosures as it runs.
    for k in 1..n {
        let mut m = k;
        while m > 0 {
            let (a, b) = (order[m - 1], order[m]);
            if compare_roots(f, &df, encs, &conj, a, b)? == Ordering::Greater {
                order.swap(m - 1, m);
                m -= 1;
            } else {
                break;
            }
        }
    }
    let mut sorted = Vec::with_capacity(n);
    for &idx in &order {
        sorted.push(encs[idx].clone());
    }
    *encs = sorted;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::special::cyclotomic;
    use crate::roots::isolate_roots;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn canonical_f64(f: &IntPoly) -> Vec<(f64, f64)> {
        let mut encs = isolate_roots(f, 60).unwrap();
        sort_canonical(f, &mut encs).unwrap();
        encs.iter().map(|e| (e.re_f64(), e.im_f64())).collect()
    }

    #[test]
    fn orders_cube_roots_of_two() {
        let r = canonical_f64(&p(&[-2, 0, 0, 1]));
        assert!((r[0].0 + 0.6299).abs() < 1e-3 && (r[0].1 + 1.0911).abs() < 1e-3);
        assert!((r[1].0 + 0.6299).abs() < 1e-3 && (r[1].1 - 1.0911).abs() < 1e-3);
        assert!((r[2].0 - 1.2599).abs() < 1e-3 && r[2].1.abs() < 1e-9);
    }

    #[test]
    fn orders_gaussian_units() {
        let r = canonical_f64(&cyclotomic(4));
        assert!(r[0].1 < 0.0 && r[1].1 > 0.0);
        assert!(r[0].0.abs() < 1e-12 && r[1].0.abs() < 1e-12);
    }

    #[test]
    fn orders_quadratic_reals() {
        // x^2 - 3x - 1: roots (3 +- sqrt(13)) / 2 = -0.302..., 3.302...
        let r = canonical_f64(&p(&[-1, -3, 1]));
        assert!((r[0].0 + 0.30278).abs() < 1e-4);
        assert!((r[1].0 - 3.30278).abs() < 1e-4);
    }

    #[test]
    fn real_roots_marked() {
        let f = p(&[-2, 0, 0, 1]);
        let mut encs = isolate_roots(&f, 60).unwrap();
        sort_canonical(&f, &mut encs).unwrap();
        assert!(!encs[0].is_real && !encs[1].is_real && encs[2].is_real);
        // Real roots report an exactly-zero imaginary interval.
        assert_eq!(encs[2].im_interval(), (num_bigint::BigInt::from(0), num_bigint::BigInt::from(0)));
    }

    #[test]
    fn fourth_roots_ordering() {
        // x^4 - 3: canonical order (-r, -ri, ri, r).
        let r = canonical_f64(&IntPoly::x_pow_minus(4, 3));
        let rr = 3f64.powf(0.25);
        assert!((r[0].0 + rr).abs() < 1e-9);
        assert!(r[1].0.abs() < 1e-9 && (r[1].1 + rr).abs() < 1e-9);
        assert!(r[2].0.abs() < 1e-9 && (r[2].1 - rr).abs() < 1e-9);
        assert!((r[3].0 - rr).abs() < 1e-9);
    }
}
