//! Small integer helpers: primes, Euler phi, divisors, integer square roots.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Euler's totient by trial factorization. Intended for small arguments.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut n = n;
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut pk = 1;
            while n.is_multiple_of(p) {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// The largest `d` with `phi(d) <= n`. Uses the safe over-approximation
/// `phi(d) >= sqrt(d/2)` to bound the search range.
pub fn max_order_with_phi_at_most(n: u64) -> u64 {
    let n = n.max(1);
    let lnln = (((n.max(3)) as f64).ln().ln()).max(1.0);
    let scan = (4.0 * n as f64 * (1.0 + lnln)).ceil() as u64 + 4;
    let mut best = 1;
    for d in 1..=scan.max(2 * n * n + 2) {
        if euler_phi(d) <= n {
            best = d;
        }
    }
    best
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` mod `m` for coprime inputs.
pub fn inv_mod_u64(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "inverse of non-unit");
    (t.rem_euclid(m as i128)) as u64
}

/// Floor of the square root of a nonnegative BigInt.
pub fn isqrt_floor(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    num_integer::Roots::sqrt(n)
}

/// Smallest integer whose square is >= n (n nonnegative).
pub fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = isqrt_floor(n);
    if &r * &r == *n {
        r
    } else {
        r + 1
    }
}

/// Exact square root if `n` is a perfect square.
pub fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let r = isqrt_floor(n);
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Floor division for BigInt (num-bigint's `/` truncates toward zero).
pub fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small_values() {
        let expect = [1u64, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(euler_phi(i as u64 + 1), *e, "phi({})", i + 1);
        }
    }

    #[test]
    fn divisors_of_12() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn max_order_bound() {
        // phi(d) <= 4 holds for d in {1,...,12} minus {7,9,11}; the max is 12.
        assert_eq!(max_order_with_phi_at_most(4), 12);
        assert_eq!(max_order_with_phi_at_most(1), 2);
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(97));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(isqrt_floor(&BigInt::from(17)), BigInt::from(4));
        assert_eq!(isqrt_ceil(&BigInt::from(17)), BigInt::from(5));
        assert_eq!(perfect_sqrt(&BigInt::from(144)), Some(BigInt::from(12)));
        assert_eq!(perfect_sqrt(&BigInt::from(145)), None);
    }
}
