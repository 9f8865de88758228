//! Factorization over the rationals: modular factorization, Hensel lifting
//! to a Landau-Mignotte bound, subset recombination, a degree-set
//! irreducibility sieve, and the all-roots-are-roots-of-unity test.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime_u64, max_order_with_phi_at_most};
use crate::error::{Error, Result};
use crate::modfactor::{factor_degrees_mod_p, factor_mod_p, ModPoly};
use crate::poly::euclid::poly_gcd;
use crate::poly::special::{pow_mod, squarefree_decompose};
use crate::poly::{FactoredForm, IntPoly, RatScalar};

/// Number of good primes consulted by the degree-set sieve before a full
/// factorization is attempted.
const SIEVE_PRIMES: usize = 5;

/// Complete factorization over Q: rational content times primitive
/// irreducible factors with positive leading coefficients.
pub fn factor_over_q(f: &IntPoly) -> Result<FactoredForm> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::InvalidInput("factorization needs degree >= 1".into()));
    }
    let content = RatScalar::from_integer(f.signed_content());
    let mut g = f.primitive_positive();
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();

    let xk = g.trailing_zero_order();
    if xk > 0 {
        factors.push((IntPoly::x(), xk as u32));
        g = g.div_x_pow(xk);
    }
    if g.deg() >= 1 {
        let sq = squarefree_decompose(&g)?;
        debug_assert!(sq.content.is_one());
        for (part, mult) in sq.parts {
            for irred in factor_squarefree_primitive(&part)? {
                factors.push((irred, mult));
            }
        }
    }
    factors.sort_by(|a, b| {
        (a.0.deg(), a.0.coeffs(), a.1).cmp(&(b.0.deg(), b.0.coeffs(), b.1))
    });
    Ok(FactoredForm { content, factors })
}

/// Exact irreducibility test for a squarefree primitive polynomial.
///
/// A degree-set sieve across several good primes certifies irreducibility
/// without lifting whenever the achievable factor-degree sums intersect to
/// `{0, n}`; otherwise the full factorization decides.
pub fn is_irreducible(f: &IntPoly) -> Result<bool> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::InvalidInput("irreducibility needs degree >= 1".into()));
    }
    if !crate::poly::euclid::is_squarefree(f)? {
        return Err(Error::InvalidInput(
            "irreducibility test requires a squarefree input".into(),
        ));
    }
    if f.deg() == 1 {
        return Ok(true);
    }
    if f.constant_term().is_zero() {
        return Ok(false);
    }
    let g = f.primitive_positive();
    let sieve = degree_set_sieve(&g, SIEVE_PRIMES)?;
    if sieve.certified_irreducible(g.deg()) {
        return Ok(true);
    }
    Ok(factor_squarefree_primitive(&g)?.len() == 1)
}

/// True iff every complex root of `f` is a root of unity: strip the
/// squarefree part of all factors of `x^d - 1` for each candidate order `d`
/// and test whether a constant remains.
pub fn all_roots_roots_of_unity(f: &IntPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    if f.deg() == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    let mut h = crate::poly::euclid::squarefree_part(f)?;
    if h.constant_term().is_zero() {
        return Ok(false);
    }
    let bound = max_order_with_phi_at_most(h.deg() as u64);
    for d in 1..=bound {
        if h.deg() == 0 {
            break;
        }
        crate::deadline::check()?;
        let g = gcd_with_unity(&h, d)?;
        if g.deg() > 0 {
            h = h
                .div_exact(&g)
                .ok_or_else(|| Error::Internal("unity gcd must divide".into()))?;
        }
    }
    Ok(h.deg() == 0)
}

/// `gcd(h, x^d - 1)`, via the reduced power `x^d mod h` when `d` is large
/// relative to `deg h`.
fn gcd_with_unity(h: &IntPoly, d: u64) -> Result<IntPoly> {
    if (d as usize) < 2 * h.deg() + 4 {
        return poly_gcd(h, &IntPoly::x_pow_minus(d as usize, 1));
    }
    let r = pow_mod(d, h)?;
    let mut rm1 = r;
    rm1 = rm1.sub(&crate::poly::RatPoly::one());
    if rm1.is_zero() {
        // h divides x^d - 1 outright.
        return Ok(h.primitive_positive());
    }
    let (int_part, _) = rm1.clear_denominators();
    poly_gcd(h, &int_part)
}

/// Achievable factor-degree subset sums modulo each consulted prime.
struct DegreeSieve {
    /// Intersection across primes of the subset-sum sets.
    reachable: Vec<bool>,
    /// Good primes with their factor-degree multisets, fewest factors first.
    candidates: Vec<(u64, Vec<usize>)>,
}

impl DegreeSieve {
    fn certified_irreducible(&self, n: usize) -> bool {
        self.reachable
            .iter()
            .enumerate()
            .all(|(d, &ok)| !ok || d == 0 || d == n)
    }
}

/// Factor `g` modulo several good primes (odd, not dividing the leading
/// coefficient, `g` squarefree mod p) and intersect the degree subset sums.
fn degree_set_sieve(g: &IntPoly, want: usize) -> Result<DegreeSieve> {
    let n = g.deg();
    let mut reachable = vec![true; n + 1];
    let mut candidates: Vec<(u64, Vec<usize>)> = Vec::new();
    let mut p = 2u64;
    let mut found = 0;
    while found < want {
        crate::deadline::check()?;
        p += 1;
        while !is_prime_u64(p) {
            p += 1;
        }
        if p > 20_000 {
            // Unreachable for squarefree inputs of desk-scale degree; the
            // discriminant has only finitely many prime divisors.
            return Err(Error::Internal("no good primes found".into()));
        }
        let fp = ModPoly::reduce(g, p);
        if fp.is_zero() || fp.deg() != n {
            continue;
        }
        if fp.gcd(&fp.derivative()).deg() != 0 {
            continue;
        }
        let degs = factor_degrees_mod_p(g, p)?;
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for &d in &degs {
            for i in (0..=n - d).rev() {
                if sums[i] {
                    sums[i + d] = true;
                }
            }
        }
        for (r, s) in reachable.iter_mut().zip(&sums) {
            *r &= s;
        }
        candidates.push((p, degs));
        found += 1;
    }
    candidates.sort_by_key(|(_, fs)| fs.len());
    Ok(DegreeSieve { reachable, candidates })
}

/// Irreducible factors of a squarefree primitive polynomial with positive
/// leading coefficient, by Hensel lifting plus exhaustive recombination.
pub fn factor_squarefree_primitive(g: &IntPoly) -> Result<Vec<IntPoly>> {
    assert!(!g.is_zero() && g.deg() >= 1);
    let g = g.primitive_positive();
    if g.deg() == 1 {
        return Ok(vec![g]);
    }
    if g.constant_term().is_zero() {
        let k = g.trailing_zero_order();
        let mut out = vec![IntPoly::x(); k];
        let rest = g.div_x_pow(k);
        if rest.deg() >= 1 {
            out.extend(factor_squarefree_primitive(&rest)?);
        }
        out.sort_by(|a, b| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
        return Ok(out);
    }
    let sieve = degree_set_sieve(&g, SIEVE_PRIMES)?;
    if sieve.certified_irreducible(g.deg()) {
        return Ok(vec![g]);
    }
    let p = sieve.candidates[0].0;
    if sieve.candidates[0].1.len() == 1 {
        return Ok(vec![g]);
    }
    let (_, factors) = factor_mod_p(&g, p)?;
    debug_assert!(factors.iter().all(|(_, m)| *m == 1));
    let modular: Vec<ModPoly> = factors.into_iter().map(|(q, _)| q).collect();

    // Lift to p^k beyond twice the (doubled) factor coefficient bound.
    let bound = coefficient_bound(&g) * BigInt::from(2);
    let target = &bound * BigInt::from(2) + BigInt::one();
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= target {
        pk = &pk * &pk;
        k *= 2;
    }
    let lifted = hensel_lift_tree(&g, &modular, p, k);
    debug_assert_eq!(lifted.len(), modular.len());

    recombine(&g, lifted, &pk, &sieve.reachable)
}

/// Bound on the height of `lc(g) * h` over monic-normalized true factors `h`
/// of `g` (Landau-Mignotte style).
fn coefficient_bound(g: &IntPoly) -> BigInt {
    let norm2 = crate::arith::isqrt_ceil(&g.norm2_squared()) + BigInt::one();
    (BigInt::one() << (g.deg() + 1)) * norm2 * g.lc().abs()
}

/// Multifactor Hensel lifting: from `f = lc(f) * prod(modular) mod p` with
/// monic modular factors, produce monic factors mod `p^(2^j) >= p^k` whose
/// product times `lc(f)` reconstructs `f` at that modulus.
fn hensel_lift_tree(f: &IntPoly, modular: &[ModPoly], p: u64, k: u32) -> Vec<IntPoly> {
    let mut modulus = BigInt::from(p);
    let mut steps = 0u32;
    while BigInt::from(p).pow(k) > modulus {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    lift_node(f, modular, p, steps)
}

fn lift_node(f: &IntPoly, modular: &[ModPoly], p: u64, steps: u32) -> Vec<IntPoly> {
    let final_modulus = {
        let mut m = BigInt::from(p);
        for _ in 0..steps {
            m = &m * &m;
        }
        m
    };
    if modular.len() == 1 {
        // Monicize f at the final modulus.
        let lc_inv = mod_inverse(&num_integer::Integer::mod_floor(f.lc(), &final_modulus), &final_modulus);
        return vec![poly_mod(&f.mul_scalar(&lc_inv), &final_modulus)];
    }
    let mid = modular.len() / 2;
    let (left, right) = modular.split_at(mid);
    let mut gp = ModPoly::new(p, vec![num_integer::Integer::mod_floor(f.lc(), &BigInt::from(p)).try_into().unwrap()]);
    for q in left {
        gp = gp.mul(q);
    }
    let mut hp = ModPoly::one(p);
    for q in right {
        hp = hp.mul(q);
    }
    let (one, s, t) = gp.extended_gcd(&hp);
    debug_assert_eq!(one.deg(), 0);

    let mut g = gp.to_int_poly();
    let mut h = hp.to_int_poly();
    let mut s = s.to_int_poly();
    let mut t = t.to_int_poly();
    let mut m = BigInt::from(p);
    for _ in 0..steps {
        let m2 = &m * &m;
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m2);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = m2;
    }
    let mut out = lift_node(&g, left, p, steps);
    out.extend(lift_node(&h, right, p, steps));
    out
}

/// One quadratic Hensel step: from `f = g*h (mod m)`, `s*g + t*h = 1 (mod m)`
/// with `h` monic, produce the same data modulo `m^2` (`m2` is `m^2`).
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m2: &BigInt,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let e = poly_mod(&f.sub(&g.mul(h)), m2);
    let (q, r) = divrem_monic_mod(&s.mul(&e), h, m2);
    let g1 = poly_mod(&g.add(&t.mul(&e)).add(&q.mul(g)), m2);
    let h1 = poly_mod(&h.add(&r), m2);
    let b = poly_mod(&s.mul(&g1).add(&t.mul(&h1)).sub(&IntPoly::one()), m2);
    let (c, d) = divrem_monic_mod(&s.mul(&b), &h1, m2);
    let s1 = poly_mod(&s.sub(&d), m2);
    let t1 = poly_mod(&t.sub(&t.mul(&b)).sub(&c.mul(&g1)), m2);
    (g1, h1, s1, t1)
}

fn poly_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| num_integer::Integer::mod_floor(c, m))
            .collect(),
    )
}

/// Division with remainder modulo `m` by a monic divisor.
fn divrem_monic_mod(a: &IntPoly, d: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
    let a = poly_mod(a, m);
    debug_assert!(num_integer::Integer::mod_floor(&(d.lc() - BigInt::one()), m).is_zero());
    if a.is_zero() || a.deg() < d.deg() {
        return (IntPoly::zero(), a);
    }
    let n = d.coeffs().len();
    let mut rem: Vec<BigInt> = a.coeffs().to_vec();
    let mut q = vec![BigInt::zero(); rem.len() - n + 1];
    for kk in (0..q.len()).rev() {
        let lead = num_integer::Integer::mod_floor(&rem[kk + n - 1], m);
        if lead.is_zero() {
            rem[kk + n - 1] = BigInt::zero();
            continue;
        }
        for (i, dc) in d.coeffs().iter().enumerate() {
            let t = &lead * dc;
            rem[kk + i] = num_integer::Integer::mod_floor(&(&rem[kk + i] - t), m);
        }
        q[kk] = lead;
    }
    (IntPoly::new(q), poly_mod(&IntPoly::new(rem), m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let ext = num_integer::Integer::extended_gcd(a, m);
    debug_assert!(ext.gcd.is_one(), "inverse of non-unit mod m");
    num_integer::Integer::mod_floor(&ext.x, m)
}

/// Symmetric representative of `f mod m` with coefficients in `(-m/2, m/2]`.
fn poly_mod_symmetric(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / BigInt::from(2);
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = num_integer::Integer::mod_floor(c, m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Zassenhaus recombination over subsets of the lifted factors, with degree
/// and trailing-coefficient pruning.
fn recombine(
    g: &IntPoly,
    lifted: Vec<IntPoly>,
    modulus: &BigInt,
    allowed_degrees: &[bool],
) -> Result<Vec<IntPoly>> {
    let mut rest = g.clone();
    let mut pool = lifted;
    let mut out: Vec<IntPoly> = Vec::new();
    let mut card = 1usize;
    let mut tick = 0u32;
    'outer: while 2 * card <= pool.len() {
        let mut subset: Vec<usize> = (0..card).collect();
        loop {
            crate::deadline::check_every(&mut tick, 256)?;
            let deg_sum: usize = subset.iter().map(|&i| pool[i].deg()).sum();
            if *allowed_degrees.get(deg_sum).unwrap_or(&false) {
                if let Some(factor) = try_subset(&rest, &pool, &subset, modulus) {
                    rest = rest.div_exact(&factor).expect("verified divisor");
                    for &i in subset.iter().rev() {
                        pool.remove(i);
                    }
                    out.push(factor);
                    continue 'outer;
                }
            }
            if !next_combination(&mut subset, pool.len()) {
                break;
            }
        }
        card += 1;
    }
    if rest.deg() > 0 {
        out.push(rest);
    }
    out.sort_by(|a, b| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
    Ok(out)
}

/// Test whether the product of a subset of lifted factors reveals a true
/// divisor of `rest`.
fn try_subset(
    rest: &IntPoly,
    pool: &[IntPoly],
    subset: &[usize],
    modulus: &BigInt,
) -> Option<IntPoly> {
    let lc = rest.lc();
    // Trailing-coefficient divisibility prune.
    let mut tail = num_integer::Integer::mod_floor(lc, modulus);
    for &i in subset {
        tail = num_integer::Integer::mod_floor(&(&tail * &pool[i].constant_term()), modulus);
    }
    let half = modulus / BigInt::from(2);
    if tail > half {
        tail -= modulus;
    }
    let target = lc * rest.constant_term();
    if tail.is_zero() {
        if !target.is_zero() {
            return None;
        }
    } else if !num_integer::Integer::mod_floor(&target, &tail).is_zero() {
        return None;
    }

    let mut prod = IntPoly::constant(lc.clone());
    for &i in subset {
        prod = poly_mod(&prod.mul(&pool[i]), modulus);
    }
    let cand = poly_mod_symmetric(&prod, modulus).primitive_positive();
    if cand.deg() == 0 {
        return None;
    }
    rest.div_exact(&cand).map(|_| cand)
}

/// Advance `subset` to the next k-combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::special::cyclotomic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn factor_simple_split() {
        let f = p(&[-1, 0, 1]);
        let ff = factor_over_q(&f).unwrap();
        assert_eq!(ff.content, RatScalar::from_integer(BigInt::one()));
        assert_eq!(ff.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn schinzel_polynomial_is_irreducible() {
        let f = p(&[1, 0, -2, -6, -2, 0, 1]);
        let ff = factor_over_q(&f).unwrap();
        assert!(ff.is_irreducible_poly());
        assert!(is_irreducible(&f).unwrap());
    }

    #[test]
    fn repeated_factor_detected() {
        let g = p(&[-1, -3, 1]);
        let ff = factor_over_q(&g.pow(2)).unwrap();
        assert_eq!(ff.factors, vec![(g, 2)]);
    }

    #[test]
    fn content_sign_and_x_factor() {
        // -6x^3 + 6x = -6 x (x-1)(x+1).
        let f = p(&[0, 6, 0, -6]);
        let ff = factor_over_q(&f).unwrap();
        assert_eq!(ff.content, RatScalar::from_integer(BigInt::from(-6)));
        assert_eq!(
            ff.factors,
            vec![(p(&[-1, 1]), 1), (p(&[0, 1]), 1), (p(&[1, 1]), 1)]
        );
        let (num, den) = ff.reconstruct();
        assert_eq!(num, f);
        assert!(den.is_one());
    }

    #[test]
    fn irreducible_examples() {
        assert!(is_irreducible(&p(&[-2, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(&[-1, 0, 1])).unwrap());
        assert!(is_irreducible(&p(&[-1, -1, 0, 0, 0, 1])).unwrap()); // x^5 - x - 1
        assert!(is_irreducible(&cyclotomic(12)).unwrap());
        assert!(matches!(
            is_irreducible(&p(&[1, 2, 1])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn factor_random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..500 {
            let deg = rng.random_range(1..=10);
            let cs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-20..=20)).collect();
            let f = IntPoly::from_i64s(&cs);
            if f.is_zero() || f.deg() == 0 {
                continue;
            }
            let ff = factor_over_q(&f).unwrap();
            let (num, den) = ff.reconstruct();
            assert!(den.is_one());
            assert_eq!(num, f, "reconstruction failed for {}", f);
            for (q, _) in &ff.factors {
                assert!(q.lc().is_positive());
                assert!(q.content().is_one());
            }
            // Pairwise coprimality of distinct factors.
            for i in 0..ff.factors.len() {
                for j in i + 1..ff.factors.len() {
                    let g = poly_gcd(&ff.factors[i].0, &ff.factors[j].0).unwrap();
                    assert_eq!(g.degree(), Some(0));
                }
            }
        }
    }

    #[test]
    fn sieve_agrees_with_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 200 {
            let deg = rng.random_range(2..=8);
            let cs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-15..=15)).collect();
            let f = IntPoly::from_i64s(&cs);
            if f.is_zero() || f.deg() < 2 || f.constant_term().is_zero() {
                continue;
            }
            if !crate::poly::euclid::is_squarefree(&f).unwrap() {
                continue;
            }
            let g = f.primitive_positive();
            let sieve_verdict = degree_set_sieve(&g, SIEVE_PRIMES)
                .unwrap()
                .certified_irreducible(g.deg());
            let truth = factor_squarefree_primitive(&g).unwrap().len() == 1;
            if sieve_verdict {
                assert!(truth, "sieve wrongly certified {}", g);
            }
            assert_eq!(is_irreducible(&g).unwrap(), truth);
            checked += 1;
        }
    }

    #[test]
    fn hard_swinnerton_dyer_style_case() {
        // (x^2-2)(x^2-3) mod every prime splits further than over Q.
        let f = p(&[-2, 0, 1]).mul(&p(&[-3, 0, 1]));
        let ff = factor_over_q(&f).unwrap();
        assert_eq!(ff.factors.len(), 2);
        assert_eq!(ff.factors[0].0, p(&[-3, 0, 1]));
        assert_eq!(ff.factors[1].0, p(&[-2, 0, 1]));
        // Swinnerton-Dyer quartic: irreducible but splits mod every prime.
        let sd = p(&[1, 0, -10, 0, 1]);
        assert!(is_irreducible(&sd).unwrap());
    }

    #[test]
    fn unity_detection_examples() {
        assert!(all_roots_roots_of_unity(&cyclotomic(5)).unwrap());
        assert!(!all_roots_roots_of_unity(&p(&[-2, 0, 1])).unwrap());
        // (x-1)^3 (x^2+x+1)^3: all roots are cube/first roots of unity.
        let f = p(&[-1, 1]).pow(3).mul(&p(&[1, 1, 1]).pow(3));
        assert!(all_roots_roots_of_unity(&f).unwrap());
    }

    #[test]
    fn unity_detection_families() {
        for d in 1..=40u64 {
            assert!(
                all_roots_roots_of_unity(&cyclotomic(d)).unwrap(),
                "Phi_{} rejected",
                d
            );
        }
        for n in 1..=6usize {
            for c in [-5i64, -3, 2, 4, 7] {
                let f = IntPoly::x_pow_minus(n, c);
                assert!(
                    !all_roots_roots_of_unity(&f).unwrap(),
                    "x^{} - {} wrongly accepted",
                    n,
                    c
                );
            }
        }
        // Mixed: a cyclotomic times a non-unit factor fails.
        let f = cyclotomic(8).mul(&p(&[-2, 0, 1]));
        assert!(!all_roots_roots_of_unity(&f).unwrap());
    }
}
