//! Polynomial text input: either comma-separated coefficients in ascending
//! order ("1,0,-2", rationals like "1/2" allowed) or a small expression
//! grammar ("x^6 - 2x^4 - 6x^3 - 2x^2 + 1"). Rational inputs are scaled to
//! integer coefficients; scaling does not change the root set.

use exlat::{IntPoly, RatScalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn parse_poly(text: &str) -> Result<IntPoly, String> {
    let text = text.replace('\u{2212}', "-");
    let text = text.trim();
    if text.is_empty() {
        return Err("empty polynomial".into());
    }
    let poly = if text.contains('x') || text.contains('X') {
        parse_expression(&text.to_lowercase())?
    } else {
        parse_comma_list(text)?
    };
    if poly.is_zero() {
        return Err("the zero polynomial has no root lattice".into());
    }
    Ok(poly)
}

fn parse_rational(tok: &str) -> Result<RatScalar, String> {
    let tok = tok.trim();
    if let Some((num, den)) = tok.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| format!("bad numerator '{}'", num))?;
        let d: BigInt = den.trim().parse().map_err(|_| format!("bad denominator '{}'", den))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(RatScalar::new(n, d))
    } else {
        let n: BigInt = tok.parse().map_err(|_| format!("bad coefficient '{}'", tok))?;
        Ok(RatScalar::from_integer(n))
    }
}

fn rationals_to_int_poly(coeffs: Vec<RatScalar>) -> IntPoly {
    let mut lcm = BigInt::one();
    for c in &coeffs {
        lcm = num_integer::Integer::lcm(&lcm, c.denom());
    }
    IntPoly::new(coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
}

fn parse_comma_list(text: &str) -> Result<IntPoly, String> {
    let coeffs = text
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rationals_to_int_poly(coeffs))
}

fn parse_expression(text: &str) -> Result<IntPoly, String> {
    let mut terms: Vec<(RatScalar, usize)> = Vec::new();
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let mut sign = 1i64;
    let mut expect_term = true;
    while i < chars.len() {
        match chars[i] {
            '+' => {
                i += 1;
                expect_term = true;
            }
            '-' => {
                sign = -sign;
                i += 1;
                expect_term = true;
            }
            _ if expect_term => {
                let (coeff, exp, next) = parse_term(&chars, i)?;
                let signed = if sign < 0 { -coeff } else { coeff };
                terms.push((signed, exp));
                sign = 1;
                expect_term = false;
                i = next;
            }
            c => return Err(format!("unexpected character '{}'", c)),
        }
    }
    if expect_term {
        return Err("dangling sign".into());
    }
    let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut coeffs = vec![RatScalar::zero(); deg + 1];
    for (c, e) in terms {
        coeffs[e] += c;
    }
    Ok(rationals_to_int_poly(coeffs))
}

/// One term: `[coefficient] [*] [x [^ exponent]]`.
fn parse_term(chars: &[char], mut i: usize) -> Result<(RatScalar, usize, usize), String> {
    let mut coeff = RatScalar::one();
    let mut saw_number = false;
    let start = i;
    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
        i += 1;
    }
    if i > start {
        let tok: String = chars[start..i].iter().collect();
        coeff = parse_rational(&tok)?;
        saw_number = true;
    }
    if i < chars.len() && chars[i] == '*' {
        i += 1;
    }
    if i < chars.len() && chars[i] == 'x' {
        i += 1;
        let mut exp = 1usize;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i == start {
                return Err("missing exponent after '^'".into());
            }
            let tok: String = chars[start..i].iter().collect();
            exp = tok.parse().map_err(|_| format!("bad exponent '{}'", tok))?;
        }
        Ok((coeff, exp, i))
    } else if saw_number {
        Ok((coeff, 0, i))
    } else {
        Err(format!("expected a term at position {}", start))
    }
}
