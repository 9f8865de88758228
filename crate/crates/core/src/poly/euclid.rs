//! Pseudo-division, subresultant gcd and exact resultants over `Z[x]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Pseudo-remainder: returns `r` with `lc(b)^(deg a - deg b + 1) * a = q*b + r`.
pub fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    assert!(!b.is_zero());
    if a.is_zero() || a.deg() < b.deg() {
        // Scaling an already-reduced remainder keeps the defining identity.
        let delta = 1;
        return a.mul_scalar(&b.lc().pow(delta));
    }
    let delta = a.deg() - b.deg();
    let mut rem: Vec<BigInt> = a.coeffs().to_vec();
    let mut scale_left = delta + 1;
    let n = b.coeffs().len();
    for k in (0..=delta).rev() {
        let lead = rem[k + n - 1].clone();
        for c in rem.iter_mut() {
            *c *= b.lc();
        }
        scale_left -= 1;
        if !lead.is_zero() {
            for (i, bc) in b.coeffs().iter().enumerate() {
                rem[k + i] -= &lead * bc;
            }
        }
        debug_assert!(rem[k + n - 1].is_zero());
    }
    let tail = b.lc().pow(scale_left as u32);
    IntPoly::new(rem.into_iter().map(|c| c * &tail).collect())
}

/// Primitive gcd with positive leading coefficient, via the subresultant
/// polynomial remainder sequence.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> Result<IntPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidInput("gcd of two zero polynomials".into()));
    }
    if a.is_zero() {
        return Ok(b.primitive_positive());
    }
    if b.is_zero() {
        return Ok(a.primitive_positive());
    }
    let (mut f, mut g) = if a.deg() >= b.deg() {
        (a.primitive_positive(), b.primitive_positive())
    } else {
        (b.primitive_positive(), a.primitive_positive())
    };
    let mut h = BigInt::one();
    let mut s = BigInt::one();
    loop {
        let delta = f.deg() - g.deg();
        let r = pseudo_rem(&f, &g);
        if r.is_zero() {
            return Ok(g.primitive_positive());
        }
        if r.degree() == Some(0) {
            return Ok(IntPoly::one());
        }
        let divisor = &s * h.pow(delta as u32);
        f = g;
        g = IntPoly::new(r.coeffs().iter().map(|c| c / &divisor).collect());
        s = f.lc().clone();
        h = if delta == 0 {
            h
        } else {
            let num = s.pow(delta as u32);
            exact_div_int(&num, &h.pow((delta - 1) as u32))
        };
    }
}

fn exact_div_int(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    debug_assert!(r.is_zero(), "inexact integer division in PRS");
    q
}

/// Exact resultant `Res(a, b) = lc(a)^deg(b) * prod b(alpha_i)` via the
/// subresultant remainder sequence.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> Result<BigInt> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("resultant of zero polynomial".into()));
    }
    if a.degree() == Some(0) {
        return Ok(a.lc().pow(b.deg() as u32));
    }
    if b.degree() == Some(0) {
        return Ok(b.lc().pow(a.deg() as u32));
    }
    let mut sign_swap = false;
    let (mut f, mut g) = if a.deg() >= b.deg() {
        (a.clone(), b.clone())
    } else {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign_swap = true;
        }
        (b.clone(), a.clone())
    };
    // Pull out contents: Res(cf, dg) = c^deg(g) d^deg(f) Res(f, g).
    let cf = f.signed_content();
    let cg = g.signed_content();
    f = f.primitive_positive();
    g = g.primitive_positive();
    let mut acc_num = cf.pow(g.deg() as u32) * cg.pow(f.deg() as u32);
    if sign_swap {
        acc_num = -acc_num;
    }

    let mut gprev = BigInt::one();
    let mut h = BigInt::one();
    let mut sign = BigInt::one();
    loop {
        let delta = f.deg() - g.deg();
        if f.deg() % 2 == 1 && g.deg() % 2 == 1 {
            sign = -sign;
        }
        let r = pseudo_rem(&f, &g);
        if r.is_zero() {
            // Nontrivial common factor: resultant vanishes (deg g > 0 here).
            return Ok(BigInt::zero());
        }
        let divisor = &gprev * h.pow(delta as u32);
        f = g;
        g = IntPoly::new(r.coeffs().iter().map(|c| c / &divisor).collect());
        gprev = f.lc().clone();
        h = if delta == 0 {
            h
        } else {
            exact_div_int(&gprev.pow(delta as u32), &h.pow((delta - 1) as u32))
        };
        if g.degree() == Some(0) {
            let delta_last = f.deg();
            let num = g.lc().pow(delta_last as u32);
            let res_pp = exact_div_int(&num, &h.pow((delta_last - 1) as u32));
            return Ok(acc_num * sign * res_pp);
        }
    }
}

/// `f / gcd(f, f')`: the product of the distinct irreducible factors,
/// primitive with positive leading coefficient.
pub fn squarefree_part(f: &IntPoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::InvalidInput("squarefree part of zero".into()));
    }
    if f.deg() == 0 {
        return Ok(IntPoly::one());
    }
    let g = poly_gcd(f, &f.derivative())?;
    let q = f
        .primitive_positive()
        .div_exact(&g)
        .ok_or_else(|| Error::Internal("gcd does not divide its argument".into()))?;
    Ok(q.primitive_positive())
}

pub fn is_squarefree(f: &IntPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::InvalidInput("squarefree test of zero".into()));
    }
    if f.deg() == 0 {
        return Ok(true);
    }
    // Modular fast path: for p not dividing lc(f), the gcd degree can only
    // grow under reduction, so a constant gcd mod p already proves the
    // polynomial squarefree. Only genuinely repeated factors (or unlucky
    // primes) fall through to the exact computation.
    let mut prime = 1u64 << 30;
    for _ in 0..3 {
        prime = match crate::modfactor::previous_prime_not_dividing(prime, f.lc()) {
            Some(p) => p,
            None => break,
        };
        let fp = crate::modfactor::ModPoly::reduce(f, prime);
        if fp.degree() == f.degree() && fp.gcd(&fp.derivative()).deg() == 0 {
            return Ok(true);
        }
    }
    Ok(poly_gcd(f, &f.derivative())?.degree() == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn rand_poly(rng: &mut ChaCha8Rng, max_deg: usize, height: i64) -> IntPoly {
        let deg = rng.random_range(0..=max_deg);
        let cs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-height..=height)).collect();
        IntPoly::from_i64s(&cs)
    }

    /// Independent oracle: resultant as the Bareiss determinant of the
    /// Sylvester matrix.
    fn sylvester_resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
        let (m, n) = (a.deg(), b.deg());
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (j, c) in a.coeffs().iter().rev().enumerate() {
                mat[row][row + j] = c.clone();
            }
        }
        for row in 0..m {
            for (j, c) in b.coeffs().iter().rev().enumerate() {
                mat[n + row][row + j] = c.clone();
            }
        }
        // Bareiss fraction-free determinant.
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size {
            if mat[k][k].is_zero() {
                let swap = (k + 1..size).find(|&r| !mat[r][k].is_zero());
                match swap {
                    Some(r) => {
                        mat.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let num = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                    mat[i][j] = exact_div_int(&num, &prev);
                }
                mat[i][k] = BigInt::zero();
            }
            prev = mat[k][k].clone();
        }
        sign * mat[size - 1][size - 1].clone()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(poly_gcd(&p(&[1, -2, 1]), &p(&[-2, 2])).unwrap(), p(&[-1, 1]));
        assert_eq!(poly_gcd(&p(&[1, 0, 1]), &p(&[0, 1, 1])).unwrap(), IntPoly::one());
        assert!(poly_gcd(&IntPoly::zero(), &IntPoly::zero()).is_err());
    }

    #[test]
    fn gcd_divides_common_multiple() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = rand_poly(&mut rng, 8, 9);
            let b = rand_poly(&mut rng, 8, 9);
            let c = rand_poly(&mut rng, 4, 9);
            if a.is_zero() || b.is_zero() || c.is_zero() {
                continue;
            }
            let g = poly_gcd(&a.mul(&c), &b.mul(&c)).unwrap();
            let cpp = c.primitive_positive();
            assert!(
                g.div_exact(&cpp).is_some(),
                "gcd({}, {}) = {} not divisible by {}",
                a.mul(&c),
                b.mul(&c),
                g,
                cpp
            );
            assert!(a.mul(&c).div_exact(&g).is_some());
            assert!(b.mul(&c).div_exact(&g).is_some());
        }
    }

    #[test]
    fn resultant_examples() {
        // Res(x-2, x-3) = -1; Res(x^2-1, x) = -1; Res(x^2+1, x^2-1) = 4.
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-3, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[0, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[-1, 0, 1])).unwrap(), BigInt::from(4));
        assert!(resultant(&IntPoly::zero(), &p(&[1, 1])).is_err());
    }

    #[test]
    fn resultant_matches_sylvester_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 300 {
            let a = rand_poly(&mut rng, 6, 8);
            let b = rand_poly(&mut rng, 6, 8);
            if a.is_zero() || b.is_zero() || a.deg() == 0 || b.deg() == 0 {
                continue;
            }
            let got = resultant(&a, &b).unwrap();
            let want = sylvester_resultant(&a, &b);
            assert_eq!(got, want, "Res({}, {})", a, b);
            checked += 1;
        }
    }

    #[test]
    fn resultant_antisymmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        while checked < 200 {
            let a = rand_poly(&mut rng, 5, 9);
            let b = rand_poly(&mut rng, 5, 9);
            if a.is_zero() || b.is_zero() || a.deg() == 0 || b.deg() == 0 {
                continue;
            }
            let ab = resultant(&a, &b).unwrap();
            let ba = resultant(&b, &a).unwrap();
            let expect = if (a.deg() * b.deg()) % 2 == 1 { -&ba } else { ba.clone() };
            assert_eq!(ab, expect);
            checked += 1;
        }
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        assert_eq!(squarefree_part(&f).unwrap(), p(&[-1, 1]).mul(&p(&[2, 1])));
        assert!(is_squarefree(&p(&[-2, 0, 0, 1])).unwrap());
        assert!(!is_squarefree(&p(&[1, 2, 1])).unwrap());
    }
}
