//! Polynomials over prime fields: arithmetic, squarefree decomposition,
//! distinct-degree and equal-degree factorization.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{inv_mod_u64, mul_mod_u64};
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Dense polynomial over F_p, residues in `[0, p)`, ascending order, no
/// trailing zeros. Primes are assumed < 2^31 so products fit in u64.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModPoly {
    pub prime: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(prime: u64, mut coeffs: Vec<u64>) -> Self {
        debug_assert!((2..(1 << 31)).contains(&prime));
        for c in coeffs.iter_mut() {
            *c %= prime;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { prime, coeffs }
    }

    pub fn zero(prime: u64) -> Self {
        ModPoly { prime, coeffs: Vec::new() }
    }

    pub fn one(prime: u64) -> Self {
        ModPoly::new(prime, vec![1])
    }

    pub fn x(prime: u64) -> Self {
        ModPoly::new(prime, vec![0, 1])
    }

    pub fn reduce(f: &IntPoly, prime: u64) -> Self {
        let p = BigInt::from(prime);
        ModPoly::new(
            prime,
            f.coeffs()
                .iter()
                .map(|c| {
                    let r = num_integer::Integer::mod_floor(c, &p);
                    r.try_into().expect("residue fits u64")
                })
                .collect(),
        )
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

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().expect("lc of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lc() == 1
    }

    pub fn monic(&self) -> ModPoly {
        if self.is_zero() || self.lc() == 1 {
            return self.clone();
        }
        let inv = inv_mod_u64(self.lc(), self.prime);
        self.mul_scalar(inv)
    }

    pub fn mul_scalar(&self, s: u64) -> ModPoly {
        ModPoly::new(
            self.prime,
            self.coeffs.iter().map(|&c| mul_mod_u64(c, s, self.prime)).collect(),
        )
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        let p = self.prime;
        let n = self.coeffs.len().max(other.coeffs.len());
        ModPoly::new(p, (0..n).map(|i| (self.coeff(i) + other.coeff(i)) % p).collect())
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        let p = self.prime;
        let n = self.coeffs.len().max(other.coeffs.len());
        ModPoly::new(p, (0..n).map(|i| (self.coeff(i) + p - other.coeff(i)) % p).collect())
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.prime);
        }
        let p = self.prime;
        // Products are < 2^62 for p < 2^31, so a u128 accumulator absorbs
        // the whole convolution with one reduction per output coefficient.
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let aw = a as u128;
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += aw * b as u128;
            }
        }
        ModPoly::new(p, acc.into_iter().map(|x| (x % p as u128) as u64).collect())
    }

    pub fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero());
        let p = self.prime;
        if self.is_zero() || self.deg() < d.deg() {
            return (ModPoly::zero(p), self.clone());
        }
        let dinv = inv_mod_u64(d.lc(), p);
        let mut rem = self.coeffs.clone();
        let n = d.coeffs.len();
        let mut q = vec![0u64; rem.len() - n + 1];
        for k in (0..q.len()).rev() {
            let lead = rem[k + n - 1];
            if lead == 0 {
                continue;
            }
            let quot = mul_mod_u64(lead, dinv, p);
            q[k] = quot;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                let t = mul_mod_u64(quot, dc, p);
                rem[k + i] = (rem[k + i] + p - t) % p;
            }
        }
        (ModPoly::new(p, q), ModPoly::new(p, rem))
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn extended_gcd(&self, other: &ModPoly) -> (ModPoly, ModPoly, ModPoly) {
        let p = self.prime;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (ModPoly::one(p), ModPoly::zero(p));
        let (mut t0, mut t1) = (ModPoly::zero(p), ModPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            (r0, r1) = (r1, r);
            let ns = s0.sub(&q.mul(&s1));
            (s0, s1) = (s1, ns);
            let nt = t0.sub(&q.mul(&t1));
            (t0, t1) = (t1, nt);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod_u64(r0.lc(), p);
        (r0.mul_scalar(inv), s0.mul_scalar(inv), t0.mul_scalar(inv))
    }

    pub fn derivative(&self) -> ModPoly {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.prime);
        }
        ModPoly::new(
            self.prime,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod_u64(c, i as u64 % self.prime, self.prime))
                .collect(),
        )
    }

    /// `self^e mod m` for an arbitrary-precision exponent.
    pub fn pow_mod_big(&self, e: &BigInt, m: &ModPoly) -> ModPoly {
        debug_assert!(!e.is_negative());
        let mut acc = ModPoly::one(self.prime);
        let mut base = self.rem(m);
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            if i + 1 < e.bits() {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.prime);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Replace `x^p` by `x` (valid for polynomials in `x^p` over F_p).
    fn deflate_p(&self) -> ModPoly {
        let p = self.prime as usize;
        let mut out = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                out.push(c);
            } else {
                debug_assert_eq!(c, 0);
            }
        }
        ModPoly::new(self.prime, out)
    }

    /// Lift residues to a centered integer polynomial in `(-p/2, p/2]`.
    pub fn to_int_poly_symmetric(&self) -> IntPoly {
        let p = self.prime;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c > p / 2 {
                        BigInt::from(c) - BigInt::from(p)
                    } else {
                        BigInt::from(c)
                    }
                })
                .collect(),
        )
    }

    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

/// Largest prime below `below` (and above 2^24) not dividing `avoid`.
pub fn previous_prime_not_dividing(below: u64, avoid: &BigInt) -> Option<u64> {
    let mut p = below;
    while p > (1 << 24) {
        p -= 1;
        if !crate::arith::is_prime_u64(p) {
            continue;
        }
        if num_integer::Integer::mod_floor(avoid, &BigInt::from(p)).is_zero() {
            continue;
        }
        return Some(p);
    }
    None
}

/// Resultant of two nonzero polynomials over F_p by the Euclidean
/// recurrence `Res(a, b) = (-1)^(da db) lc(b)^(da - dr) Res(b, a mod b)`.
pub fn resultant_mod_p(a: &ModPoly, b: &ModPoly) -> u64 {
    assert_eq!(a.prime, b.prime);
    let p = a.prime;
    if a.is_zero() || b.is_zero() {
        return 0;
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut res: u64 = 1;
    let mut negate = false;
    if a.deg() < b.deg() {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            negate = !negate;
        }
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.deg() == 0 {
            res = mul_mod_u64(res, crate::arith::pow_mod_u64(b.lc(), a.deg() as u64, p), p);
            break;
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return 0;
        }
        let drop = (a.deg() - r.deg()) as u64;
        res = mul_mod_u64(res, crate::arith::pow_mod_u64(b.lc(), drop, p), p);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            negate = !negate;
        }
        a = b;
        b = r;
    }
    if negate {
        (p - res) % p
    } else {
        res
    }
}

/// Newton interpolation over F_p through distinct integer points.
pub fn interpolate_mod_p(prime: u64, points: &[i64], values: &[u64]) -> ModPoly {
    let m = points.len();
    debug_assert_eq!(m, values.len());
    let reduce = |t: i64| -> u64 { t.rem_euclid(prime as i64) as u64 };
    let mut coef: Vec<u64> = values.iter().map(|&v| v % prime).collect();
    for level in 1..m {
        for i in (level..m).rev() {
            let dx = reduce(points[i]).wrapping_sub(reduce(points[i - level])).wrapping_add(prime) % prime;
            let inv = inv_mod_u64(dx, prime);
            let diff = (coef[i] + prime - coef[i - 1]) % prime;
            coef[i] = mul_mod_u64(diff, inv, prime);
        }
    }
    let mut acc = ModPoly::zero(prime);
    for i in (0..m).rev() {
        let lin = ModPoly::new(prime, vec![(prime - reduce(points[i])) % prime, 1]);
        acc = if i == m - 1 {
            ModPoly::new(prime, vec![coef[i]])
        } else {
            acc.mul(&lin).add(&ModPoly::new(prime, vec![coef[i]]))
        };
    }
    acc
}

/// xorshift64* generator; deterministic splitting keeps factorizations
/// reproducible across runs.
struct SplitRng(u64);

impl SplitRng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }
}

/// Complete factorization of `f` modulo `p` into monic irreducibles with
/// multiplicities, together with the leading unit:
/// `f = unit * prod f_i^e_i (mod p)`.
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<(u64, Vec<(ModPoly, u32)>)> {
    if f.is_zero() {
        return Err(Error::InvalidInput("factoring zero polynomial".into()));
    }
    let fp = ModPoly::reduce(f, p);
    if fp.is_zero() || fp.deg() != f.deg() {
        return Err(Error::BadPrime(p));
    }
    let unit = fp.lc();
    let monic = fp.monic();
    if monic.deg() == 0 {
        return Ok((unit, Vec::new()));
    }
    let mut result: Vec<(ModPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_mod_p(&monic) {
        for irred in factor_squarefree_mod_p(&part)? {
            result.push((irred, mult));
        }
    }
    result.sort_by(|a, b| (a.0.deg(), a.0.coeffs()).cmp(&(b.0.deg(), b.0.coeffs())));
    Ok((unit, result))
}

/// Squarefree decomposition over F_p, handling the `x^p` degenerate part.
fn squarefree_mod_p(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    debug_assert!(f.is_monic());
    let p = f.prime;
    let mut out: Vec<(ModPoly, u32)> = Vec::new();
    let df = f.derivative();
    if df.is_zero() {
        // f = g(x^p) = g(x)^p over F_p.
        for (part, m) in squarefree_mod_p(&f.deflate_p()) {
            out.push((part, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let part = w.div_rem(&y).0;
        if part.deg() > 0 {
            out.push((part, i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if c.deg() > 0 {
        for (part, m) in squarefree_mod_p(&c.deflate_p()) {
            merge_mult(&mut out, part, m * p as u32);
        }
    }
    out
}

fn merge_mult(out: &mut Vec<(ModPoly, u32)>, part: ModPoly, mult: u32) {
    for (q, m) in out.iter_mut() {
        if *q == part {
            *m += mult;
            return;
        }
    }
    out.push((part, mult));
}

/// Multiset of irreducible factor degrees of `f` mod `p` (with multiplicity),
/// from squarefree decomposition and distinct-degree blocks alone: a block
/// of degree `m` at distinct degree `d` contributes `m / d` factors, so no
/// equal-degree splitting is needed.
pub fn factor_degrees_mod_p(f: &IntPoly, p: u64) -> Result<Vec<usize>> {
    let fp = ModPoly::reduce(f, p);
    if fp.is_zero() || fp.deg() != f.deg() {
        return Err(Error::BadPrime(p));
    }
    let monic = fp.monic();
    let mut out = Vec::new();
    if monic.deg() == 0 {
        return Ok(out);
    }
    for (part, mult) in squarefree_mod_p(&monic) {
        for (block, d) in distinct_degree_blocks(&part)? {
            debug_assert_eq!(block.deg() % d, 0);
            for _ in 0..block.deg() / d {
                for _ in 0..mult {
                    out.push(d);
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Distinct-degree decomposition of a monic squarefree polynomial:
/// `(product of all irreducible factors of degree d, d)` pairs.
fn distinct_degree_blocks(f: &ModPoly) -> Result<Vec<(ModPoly, usize)>> {
    debug_assert!(f.is_monic());
    let p = f.prime;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = ModPoly::x(p);
    let mut d = 0usize;
    while rest.deg() >= 2 * (d + 1) {
        crate::deadline::check()?;
        d += 1;
        h = h.pow_mod(p, &rest);
        let g = h.sub(&ModPoly::x(p)).gcd(&rest);
        if g.deg() > 0 {
            out.push((g.clone(), d));
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    Ok(out)
}

/// Distinct-degree then equal-degree factorization of a monic squarefree poly.
fn factor_squarefree_mod_p(f: &ModPoly) -> Result<Vec<ModPoly>> {
    let mut out = Vec::new();
    for (block, d) in distinct_degree_blocks(f)? {
        equal_degree_split(&block, d, &mut out);
    }
    Ok(out)
}

/// Cantor-Zassenhaus splitting of a product of degree-d irreducibles.
fn equal_degree_split(f: &ModPoly, d: usize, out: &mut Vec<ModPoly>) {
    let p = f.prime;
    if f.deg() == d {
        out.push(f.monic());
        return;
    }
    let mut rng = SplitRng(
        0x9E3779B97F4A7C15u64
            ^ (p << 17)
            ^ f.coeffs().iter().fold(d as u64, |a, &c| a.rotate_left(7) ^ c),
    );
    loop {
        let a = ModPoly::new(p, (0..f.deg()).map(|_| rng.next() % p).collect());
        if a.degree().is_none() || a.deg() == 0 {
            continue;
        }
        let g0 = a.gcd(f);
        let g = if g0.deg() > 0 {
            g0
        } else if p == 2 {
            // Trace map splitting in characteristic 2.
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc.gcd(f)
        } else {
            // The splitting exponent (p^d - 1)/2 overflows machine words for
            // moderate block degrees, so it is taken as a big integer.
            let e = (BigInt::from(p).pow(d as u32) - 1u32) / 2u32;
            let b = a.pow_mod_big(&e, f);
            b.sub(&ModPoly::one(p)).gcd(f)
        };
        if g.deg() > 0 && g.deg() < f.deg() {
            equal_degree_split(&g, d, out);
            equal_degree_split(&f.div_rem(&g).0, d, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn reassemble(unit: u64, factors: &[(ModPoly, u32)], prime: u64) -> ModPoly {
        let mut acc = ModPoly::new(prime, vec![unit]);
        for (f, m) in factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }

    #[test]
    fn x2_plus_1_splits_mod_5_not_mod_3() {
        let f = p(&[1, 0, 1]);
        let (unit, fs) = factor_mod_p(&f, 5).unwrap();
        assert_eq!(unit, 1);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].0, ModPoly::new(5, vec![2, 1]));
        assert_eq!(fs[1].0, ModPoly::new(5, vec![3, 1]));

        let (_, fs) = factor_mod_p(&f, 3).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0, ModPoly::reduce(&f, 3));
    }

    #[test]
    fn x3_minus_2_mod_5() {
        // 3^3 = 27 = 2 mod 5, so (x - 3) = (x + 2) is a factor.
        let f = p(&[-2, 0, 0, 1]);
        let (unit, fs) = factor_mod_p(&f, 5).unwrap();
        assert_eq!(unit, 1);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].0, ModPoly::new(5, vec![2, 1]));
        assert_eq!(fs[1].0, ModPoly::new(5, vec![4, 3, 1]));
        assert_eq!(reassemble(unit, &fs, 5), ModPoly::reduce(&f, 5));
    }

    #[test]
    fn bad_prime_rejected() {
        let f = p(&[1, 0, 5]);
        assert!(matches!(factor_mod_p(&f, 5), Err(Error::BadPrime(5))));
    }

    #[test]
    fn multiplicities_detected() {
        // (x+1)^2 (x+2) mod 7.
        let f = p(&[1, 1]).pow(2).mul(&p(&[2, 1]));
        let (_, fs) = factor_mod_p(&f, 7).unwrap();
        assert_eq!(fs.len(), 2);
        let total: u32 = fs.iter().map(|(g, m)| g.deg() as u32 * m).sum();
        assert_eq!(total, 3);
        assert!(fs.iter().any(|(g, m)| *m == 2 && g.deg() == 1));
    }

    #[test]
    fn char_p_power_part() {
        // (x^2+1)^2 mod 2 = x^4 + 1 = (x+1)^4.
        let f = p(&[1, 0, 0, 0, 1]);
        let (_, fs) = factor_mod_p(&f, 2).unwrap();
        assert_eq!(fs, vec![(ModPoly::new(2, vec![1, 1]), 4)]);
    }

    #[test]
    fn modular_resultant_matches_exact() {
        use crate::poly::euclid::resultant;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let mut done = 0;
        while done < 200 {
            let da = rng.random_range(1..=6);
            let db = rng.random_range(1..=6);
            let a = IntPoly::from_i64s(&(0..=da).map(|_| rng.random_range(-9..=9)).collect::<Vec<_>>());
            let b = IntPoly::from_i64s(&(0..=db).map(|_| rng.random_range(-9..=9)).collect::<Vec<_>>());
            if a.is_zero() || b.is_zero() || a.degree() == Some(0) || b.degree() == Some(0) {
                continue;
            }
            let exact = resultant(&a, &b).unwrap();
            for prime in [1_000_003u64, 999_983, 65_537] {
                let ap = ModPoly::reduce(&a, prime);
                let bp = ModPoly::reduce(&b, prime);
                if ap.degree() != a.degree() || bp.degree() != b.degree() {
                    continue;
                }
                let want: u64 = num_integer::Integer::mod_floor(&exact, &BigInt::from(prime))
                    .try_into()
                    .unwrap();
                assert_eq!(
                    resultant_mod_p(&ap, &bp),
                    want,
                    "Res({}, {}) mod {}",
                    a,
                    b,
                    prime
                );
            }
            done += 1;
        }
    }

    #[test]
    fn interpolation_mod_p_reconstructs() {
        let prime = 1_000_003u64;
        let f = ModPoly::new(prime, vec![3, 0, 1_000_000, 7, 11]);
        let points: Vec<i64> = (-2..=2).collect();
        let values: Vec<u64> = points
            .iter()
            .map(|&t| {
                let mut acc = 0u64;
                for c in f.coeffs().iter().rev() {
                    let tv = t.rem_euclid(prime as i64) as u64;
                    acc = (crate::arith::mul_mod_u64(acc, tv, prime) + c) % prime;
                }
                acc
            })
            .collect();
        assert_eq!(interpolate_mod_p(prime, &points, &values), f);
    }

    #[test]
    fn random_factorizations_reassemble() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for &prime in &[2u64, 3, 5, 13, 101] {
            for _ in 0..60 {
                let deg = rng.random_range(1..=9);
                let mut cs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-20..=20)).collect();
                if cs[deg] % prime as i64 == 0 {
                    cs[deg] = 1;
                }
                let f = IntPoly::from_i64s(&cs);
                let (unit, fs) = factor_mod_p(&f, prime).unwrap();
                assert_eq!(reassemble(unit, &fs, prime), ModPoly::reduce(&f, prime));
                for (g, _) in &fs {
                    assert!(g.is_monic());
                }
            }
        }
    }
}
