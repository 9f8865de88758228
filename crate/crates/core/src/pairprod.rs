//! Pair-product and root-ratio polynomials via resultants, and the
//! irreducibility criterion they support.
//!
//! For `g` with roots `b_1..b_n`, the resultant `Res_y(g(y), y^n g(x/y))`
//! has the products `b_i b_j` over all ordered pairs as roots; stripping the
//! diagonal (the Graeffe transform) leaves the square of the pair-product
//! polynomial, recovered by an exact polynomial square root. Resultants in
//! `x` are computed by evaluation at integer points and Newton
//! interpolation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::deadline;
use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::modfactor::{interpolate_mod_p, resultant_mod_p, ModPoly};
use crate::poly::euclid::is_squarefree;
use crate::poly::special::{graeffe, poly_sqrt_exact};
use crate::poly::IntPoly;
#[cfg(test)]
use crate::poly::{RatPoly, RatScalar};

/// Outcome of the pair-product construction on an irreducible `g`: the
/// criterion of the fast branch holds iff `squarefree` and
/// `irreducible == Some(true)`.
#[derive(Clone, Debug)]
pub struct PairProductReport {
    pub f2: IntPoly,
    pub squarefree: bool,
    /// Computed only when `squarefree` is true.
    pub irreducible: Option<bool>,
}

impl PairProductReport {
    pub fn criterion_holds(&self) -> bool {
        self.squarefree && self.irreducible == Some(true)
    }
}

/// Interpolate the degree-`deg` polynomial `x -> Res_y(g(y), build(x)(y))`
/// from integer sample points. `build` must return the y-polynomial at a
/// given integer `x`-value with its formal y-degree intact, and `skip` marks
/// x-values where that degree would drop.
///
/// Sample values at the outer points are astronomically larger than the
/// result's coefficients, so the computation runs modulo word-size primes
/// (Euclidean resultants plus field interpolation) and lifts the
/// coefficients by CRT against a Hadamard-style bound: every coefficient of
/// the formal Sylvester determinant is at most the product of the row
/// 1-norms, here `max(2, |g|_1)^(2 deg g)`.
fn interpolated_resultant<B, S>(g: &IntPoly, deg: usize, build: B, skip: S) -> Result<IntPoly>
where
    B: Fn(i64) -> IntPoly,
    S: Fn(i64) -> bool,
{
    let mut points: Vec<i64> = Vec::with_capacity(deg + 1);
    let mut t = 0i64;
    while points.len() < deg + 1 {
        if !skip(t) {
            points.push(t);
        }
        t = if t >= 0 { -(t + 1) } else { -t };
    }
    let built: Vec<IntPoly> = points.iter().map(|&t| build(t)).collect();
    let y_deg = g.deg();

    let norm1: BigInt = g.coeffs().iter().map(|c| c.abs()).sum();
    let bound = norm1.max(BigInt::from(2)).pow(2 * g.deg() as u32);
    let target = bound * BigInt::from(2) + BigInt::one();

    let mut modulus = BigInt::one();
    let mut combined: Vec<BigInt> = vec![BigInt::zero(); deg + 1];
    let mut prime = 1u64 << 30;
    while modulus <= target {
        deadline::check()?;
        prime = match next_good_prime(prime, g) {
            Some(p) => p,
            None => return Err(Error::Internal("ran out of interpolation primes".into())),
        };
        let gp = ModPoly::reduce(g, prime);
        debug_assert_eq!(gp.deg(), g.deg());
        let mut values = Vec::with_capacity(points.len());
        let mut tick = 0u32;
        for bt in &built {
            deadline::check_every(&mut tick, 64)?;
            let btp = ModPoly::reduce(bt, prime);
            if btp.degree() != Some(y_deg) {
                return Err(Error::Internal("interpolation prime dropped a degree".into()));
            }
            values.push(resultant_mod_p(&gp, &btp));
        }
        let sp = interpolate_mod_p(prime, &points, &values);
        crt_accumulate(&mut combined, &mut modulus, &sp, prime);
    }
    let half = &modulus / BigInt::from(2);
    Ok(IntPoly::new(
        combined
            .into_iter()
            .map(|c| if c > half { c - &modulus } else { c })
            .collect(),
    ))
}

/// Largest prime below `below` that divides neither the leading nor the
/// constant coefficient of `g` (so reductions preserve the Sylvester shape).
fn next_good_prime(below: u64, g: &IntPoly) -> Option<u64> {
    let lc = g.lc();
    let c0 = g.constant_term();
    let mut p = below;
    while p > (1 << 24) {
        p -= 1;
        if !crate::arith::is_prime_u64(p) {
            continue;
        }
        let pb = BigInt::from(p);
        if num_integer::Integer::mod_floor(lc, &pb).is_zero()
            || num_integer::Integer::mod_floor(&c0, &pb).is_zero()
        {
            continue;
        }
        return Some(p);
    }
    None
}

/// Incorporate the residues of one prime into the running CRT combination.
fn crt_accumulate(combined: &mut [BigInt], modulus: &mut BigInt, sp: &ModPoly, prime: u64) {
    let pb = BigInt::from(prime);
    let m_inv = {
        let m_mod_p = num_integer::Integer::mod_floor(&*modulus, &pb);
        let m_u64: u64 = m_mod_p.try_into().expect("residue fits");
        BigInt::from(crate::arith::inv_mod_u64(m_u64, prime))
    };
    for (i, slot) in combined.iter_mut().enumerate() {
        let r = BigInt::from(sp.coeff(i));
        let cur = num_integer::Integer::mod_floor(&*slot, &pb);
        let delta = num_integer::Integer::mod_floor(&((r - cur) * &m_inv), &pb);
        *slot += &*modulus * delta;
    }
    *modulus *= pb;
}

/// Exact-arithmetic reference used to cross-check the modular path.
#[cfg(test)]
fn interpolated_resultant_bigint<B, S>(g: &IntPoly, deg: usize, build: B, skip: S) -> Result<IntPoly>
where
    B: Fn(i64) -> IntPoly,
    S: Fn(i64) -> bool,
{
    let mut points: Vec<i64> = Vec::with_capacity(deg + 1);
    let mut t = 0i64;
    while points.len() < deg + 1 {
        if !skip(t) {
            points.push(t);
        }
        t = if t >= 0 { -(t + 1) } else { -t };
    }
    let mut values = Vec::with_capacity(points.len());
    for &t in &points {
        let bt = build(t);
        values.push(crate::poly::euclid::resultant(g, &bt)?);
    }
    newton_interpolate(&points, &values)
}

/// Newton divided-difference interpolation; the result must be integral.
#[cfg(test)]
fn newton_interpolate(points: &[i64], values: &[BigInt]) -> Result<IntPoly> {
    let m = points.len();
    let mut coef: Vec<RatScalar> = values
        .iter()
        .map(|v| RatScalar::from_integer(v.clone()))
        .collect();
    for level in 1..m {
        deadline::check()?;
        for i in (level..m).rev() {
            let dx = BigInt::from(points[i] - points[i - level]);
            coef[i] = (&coef[i] - &coef[i - 1]) / RatScalar::from_integer(dx);
        }
    }
    let mut acc = RatPoly::zero();
    let mut tick = 0u32;
    for i in (0..m).rev() {
        deadline::check_every(&mut tick, 64)?;
        let lin = RatPoly::new(vec![
            RatScalar::from_integer(BigInt::from(-points[i])),
            RatScalar::one(),
        ]);
        if i == m - 1 {
            acc = RatPoly::constant(coef[i].clone());
        } else {
            acc = acc.mul(&lin).add(&RatPoly::constant(coef[i].clone()));
        }
    }
    let (p, den) = acc.clear_denominators();
    if !den.is_one() {
        return Err(Error::Internal("interpolated resultant not integral".into()));
    }
    Ok(p)
}

fn validate_input(g: &IntPoly, min_deg: usize) -> Result<()> {
    if g.is_zero() || g.degree().unwrap_or(0) < min_deg {
        return Err(Error::InvalidInput(format!("degree must be >= {}", min_deg)));
    }
    if g.constant_term().is_zero() {
        return Err(Error::InvalidInput("zero constant term (x divides g)".into()));
    }
    if !is_squarefree(g)? {
        return Err(Error::InvalidInput("input must be squarefree".into()));
    }
    Ok(())
}

/// The polynomial with roots `b_i b_j` over unordered pairs `i < j` of
/// distinct-index roots of `g`, primitive with positive leading coefficient.
pub fn pair_product_poly(g: &IntPoly) -> Result<IntPoly> {
    validate_input(g, 2)?;
    let n = g.deg();
    // At x = t the second argument is sum_j c_{n-j} t^(n-j) y^j, whose
    // y-leading coefficient is g(0) != 0 for every t.
    let build = |t: i64| -> IntPoly {
        let tb = BigInt::from(t);
        let mut pow = BigInt::one();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for j in (0..=n).rev() {
            // x^(n-j) at x=t multiplies c_(n-j); iterate powers upward.
            coeffs[j] = g.coeff(n - j) * &pow;
            pow *= &tb;
        }
        IntPoly::new(coeffs)
    };
    let all_pairs = interpolated_resultant(g, n * n, build, |_| false)?;
    if all_pairs.deg() != n * n {
        return Err(Error::Internal("pair resultant degree mismatch".into()));
    }
    let diag = graeffe(g)?;
    let quotient = all_pairs.to_rat().div_exact(&diag.to_rat())?;
    let (int_q, _) = quotient.clear_denominators();
    let square = int_q.primitive_positive();
    let f2 = poly_sqrt_exact(&square)
        .ok_or_else(|| Error::Internal("off-diagonal pair product is not a square".into()))?;
    debug_assert_eq!(f2.deg(), n * (n - 1) / 2);
    Ok(f2.primitive_positive())
}

/// The polynomial of degree n^2 whose roots are the ratios `b_i / b_j` over
/// all ordered pairs, primitive with positive leading coefficient.
pub fn ratio_poly(g: &IntPoly) -> Result<IntPoly> {
    validate_input(g, 1)?;
    let n = g.deg();
    // Second argument g(x*y): y-leading coefficient is lc(g) * t^n, so only
    // t = 0 is excluded.
    let build = |t: i64| -> IntPoly {
        let tb = BigInt::from(t);
        let mut pow = BigInt::one();
        let mut coeffs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            coeffs.push(g.coeff(i) * &pow);
            pow *= &tb;
        }
        IntPoly::new(coeffs)
    };
    let r = interpolated_resultant(g, n * n, build, |t| t == 0)?;
    if r.deg() != n * n {
        return Err(Error::Internal("ratio resultant degree mismatch".into()));
    }
    Ok(r.primitive_positive())
}

/// Decide the pair-product criterion for an irreducible `g` none of whose
/// roots is a root of a rational: multiple roots of `f_[2]` certify a
/// nontrivial relation directly; otherwise irreducibility of `f_[2]` is the
/// verdict.
pub fn decide_two_homogeneous(g: &IntPoly) -> Result<PairProductReport> {
    validate_input(g, 2)?;
    let f2 = pair_product_poly(g)?;
    let squarefree = is_squarefree(&f2)?;
    if !squarefree {
        return Ok(PairProductReport { f2, squarefree: false, irreducible: None });
    }
    deadline::check()?;
    let irreducible = is_irreducible(&f2)?;
    Ok(PairProductReport { f2, squarefree: true, irreducible: Some(irreducible) })
}

/// `(x - 1)^k` divisibility order of `f` (used by the ratio-polynomial
/// diagnostics).
pub fn order_at_one(f: &IntPoly) -> usize {
    let mut k = 0;
    let mut h = f.clone();
    let lin = IntPoly::from_i64s(&[-1, 1]);
    while let Some(q) = h.div_exact(&lin) {
        k += 1;
        h = q;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::special::cyclotomic;
    use crate::roots::isolate_roots;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn pair_product_examples() {
        assert_eq!(pair_product_poly(&p(&[-1, -3, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(pair_product_poly(&p(&[-2, 0, 0, 1])).unwrap(), p(&[-4, 0, 0, 1]));
        assert_eq!(pair_product_poly(&p(&[1, 0, 1])).unwrap(), p(&[-1, 1]));
    }

    #[test]
    fn pair_product_rejects_bad_inputs() {
        assert!(pair_product_poly(&p(&[0, 1, 1])).is_err()); // x | g
        assert!(pair_product_poly(&p(&[1, 2, 1])).is_err()); // not squarefree
        assert!(pair_product_poly(&p(&[3, 1])).is_err()); // degree 1
    }

    #[test]
    fn ratio_examples() {
        // x^2 - 2: ratios are {1, 1, -1, -1}.
        let r = ratio_poly(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(r, p(&[-1, 1]).pow(2).mul(&p(&[1, 1]).pow(2)).primitive_positive());
        // x^3 - 2: (x-1)^3 (x^2+x+1)^3.
        let r = ratio_poly(&p(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(
            r,
            p(&[-1, 1]).pow(3).mul(&p(&[1, 1, 1]).pow(3)).primitive_positive()
        );
        // Degree-1 input: single ratio 1.
        let r = ratio_poly(&p(&[-5, 2])).unwrap();
        assert_eq!(r, p(&[-1, 1]));
    }

    #[test]
    fn ratio_of_golden_quadratic_matches_enclosures() {
        // x^2-3x-1: ratio roots {1, 1, r, 1/r} with r = -b2/b1 ... r ~ -10.908.
        let g = p(&[-1, -3, 1]);
        let r = ratio_poly(&g).unwrap();
        assert_eq!(r.deg(), 4);
        assert_eq!(order_at_one(&r), 2);
        let encs = isolate_roots(&g, 80).unwrap();
        let (b1, b2) = (encs[0].re_f64(), encs[1].re_f64());
        let ratio = b2 / b1;
        // Verify the quartic vanishes at the numeric ratio.
        let mut val = 0.0f64;
        for (i, c) in r.coeffs().iter().enumerate() {
            val += crate::roots::ball::scaled_to_f64(c, 0) * ratio.powi(i as i32);
        }
        assert!(val.abs() < 1e-4 * ratio.abs().powi(4));
        assert!((ratio.abs() - 10.908).abs() < 0.01 || (1.0 / ratio.abs() - 10.908).abs() < 0.01);
    }

    #[test]
    fn degree_formulas_on_random_squarefree() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let mut done = 0;
        while done < 100 {
            let deg = rng.random_range(2..=7);
            let mut cs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-9..=9)).collect();
            if cs[0] == 0 {
                cs[0] = 1;
            }
            let g = IntPoly::from_i64s(&cs);
            if g.deg() != deg || !is_squarefree(&g).unwrap() {
                continue;
            }
            let n = g.deg();
            let f2 = pair_product_poly(&g).unwrap();
            assert_eq!(f2.deg(), n * (n - 1) / 2, "pair degree for {}", g);
            let r = ratio_poly(&g).unwrap();
            assert_eq!(r.deg(), n * n, "ratio degree for {}", g);
            assert!(order_at_one(&r) >= n, "diagonal ratios of {}", g);
            done += 1;
        }
    }

    #[test]
    fn pair_products_match_enclosures_numerically() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let mut done = 0;
        while done < 30 {
            let deg = rng.random_range(2..=6);
            let mut cs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-9..=9)).collect();
            if cs[0] == 0 {
                cs[0] = 3;
            }
            let g = IntPoly::from_i64s(&cs);
            if g.deg() != deg || !is_squarefree(&g).unwrap() {
                continue;
            }
            let f2 = pair_product_poly(&g).unwrap();
            if !is_squarefree(&f2).unwrap() {
                continue;
            }
            let roots = isolate_roots(&g, 80).unwrap();
            let mut products: Vec<(f64, f64)> = Vec::new();
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    let (a, b) = (roots[i].re_f64(), roots[i].im_f64());
                    let (c, d) = (roots[j].re_f64(), roots[j].im_f64());
                    products.push((a * c - b * d, a * d + b * c));
                }
            }
            let mut f2_roots: Vec<(f64, f64)> = isolate_roots(&f2, 80)
                .unwrap()
                .iter()
                .map(|e| (e.re_f64(), e.im_f64()))
                .collect();
            for pr in &products {
                let scale = 1.0 + pr.0.abs() + pr.1.abs();
                let (best, dist) = f2_roots
                    .iter()
                    .enumerate()
                    .map(|(k, fr)| (k, (pr.0 - fr.0).hypot(pr.1 - fr.1)))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                assert!(dist < 1e-6 * scale, "product mismatch for {}: {:?}", g, pr);
                f2_roots.swap_remove(best);
            }
            done += 1;
        }
    }

    #[test]
    fn modular_resultants_match_exact_oracle() {
        // The CRT path must agree exactly with plain multiprecision
        // interpolation on both resultant constructions.
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let mut done = 0;
        while done < 60 {
            let deg = rng.random_range(1..=6usize);
            let mut cs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-30..=30)).collect();
            if cs[0] == 0 {
                cs[0] = 5;
            }
            let g = IntPoly::from_i64s(&cs);
            if g.deg() != deg {
                continue;
            }
            let n = g.deg();
            let pair_build = |t: i64| -> IntPoly {
                let tb = BigInt::from(t);
                let mut pow = BigInt::one();
                let mut coeffs = vec![BigInt::zero(); n + 1];
                for j in (0..=n).rev() {
                    coeffs[j] = g.coeff(n - j) * &pow;
                    pow *= &tb;
                }
                IntPoly::new(coeffs)
            };
            let fast = interpolated_resultant(&g, n * n, pair_build, |_| false).unwrap();
            let slow = interpolated_resultant_bigint(&g, n * n, pair_build, |_| false).unwrap();
            assert_eq!(fast, slow, "pair resultant mismatch for {}", g);

            let ratio_build = |t: i64| -> IntPoly {
                let tb = BigInt::from(t);
                let mut pow = BigInt::one();
                let mut coeffs = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    coeffs.push(g.coeff(i) * &pow);
                    pow *= &tb;
                }
                IntPoly::new(coeffs)
            };
            let fast = interpolated_resultant(&g, n * n, ratio_build, |t| t == 0).unwrap();
            let slow = interpolated_resultant_bigint(&g, n * n, ratio_build, |t| t == 0).unwrap();
            assert_eq!(fast, slow, "ratio resultant mismatch for {}", g);
            done += 1;
        }
    }

    #[test]
    fn criterion_decisions() {
        // Schinzel sextic: nontrivial relations exist, criterion must fail.
        // Its pair products collide (two pairs multiply to 1), so the
        // degree-15 polynomial has 1 as a repeated root and factors apart.
        let schinzel = p(&[1, 0, -2, -6, -2, 0, 1]);
        let rep = decide_two_homogeneous(&schinzel).unwrap();
        assert_eq!(rep.f2.deg(), 15);
        assert!(!rep.criterion_holds());
        let ff = crate::factor::factor_over_q(&rep.f2).unwrap();
        assert!(!ff.is_irreducible_poly());

        let rep = decide_two_homogeneous(&p(&[-1, -3, 1])).unwrap();
        assert!(rep.criterion_holds());
        assert_eq!(rep.f2, p(&[1, 1]));

        // x^5 - x - 1: full symmetric Galois action, criterion holds.
        let rep = decide_two_homogeneous(&p(&[-1, -1, 0, 0, 0, 1])).unwrap();
        assert_eq!(rep.f2.deg(), 10);
        assert!(rep.criterion_holds());

        // x^4 + 4x^2 + 2: products collide (s1*s2 twice), not squarefree.
        let rep = decide_two_homogeneous(&p(&[2, 0, 4, 0, 1])).unwrap();
        assert!(!rep.squarefree);
        assert!(!rep.criterion_holds());
    }

    #[test]
    fn cyclotomic_pair_square() {
        // Phi_4 = x^2+1: product of i and -i is 1.
        assert_eq!(pair_product_poly(&cyclotomic(4)).unwrap(), p(&[-1, 1]));
    }
}
