//! Text and JSON polynomial formats.
//!
//! Grammar of the text form (whitespace ignored, `−` accepted for `-`):
//!
//! ```text
//! poly  := ["+"|"-"] term (("+"|"-") term)*
//! term  := coeff ["*"] ["z" ["^" uint]] | "z" ["^" uint]
//! coeff := uint ["/" uint]
//! ```
//!
//! The JSON form is an array of ascending coefficients, each an integer or a
//! string holding an integer or `"a/b"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::Poly;

pub fn parse_poly(text: &str) -> Result<Poly> {
    let chars: Vec<char> = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '−' { '-' } else { c })
        .collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut pos = 0;
    let mut coeffs: Vec<BigRational> = Vec::new();
    let mut first = true;
    while pos < chars.len() {
        let mut sign = BigRational::one();
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -sign;
                pos += 1;
            }
            _ if !first => {
                return Err(Error::Parse(format!("expected '+' or '-' at offset {pos}")));
            }
            _ => {}
        }
        first = false;
        let (coeff, power) = parse_term(&chars, &mut pos)?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        coeffs[power] += sign * coeff;
    }
    Ok(Poly::new(coeffs))
}

fn parse_uint(chars: &[char], pos: &mut usize) -> Option<BigInt> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    (*pos > start).then(|| {
        chars[start..*pos]
            .iter()
            .collect::<String>()
            .parse()
            .expect("digits")
    })
}

fn parse_term(chars: &[char], pos: &mut usize) -> Result<(BigRational, usize)> {
    let mut coeff = BigRational::one();
    let mut explicit = false;
    if let Some(n) = parse_uint(chars, pos) {
        explicit = true;
        let mut d = BigInt::one();
        if chars.get(*pos) == Some(&'/') {
            *pos += 1;
            d = parse_uint(chars, pos)
                .ok_or_else(|| Error::Parse(format!("expected denominator at offset {pos}")))?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator in coefficient".into()));
            }
        }
        coeff = BigRational::new(n, d);
        if chars.get(*pos) == Some(&'*') {
            *pos += 1;
            if chars.get(*pos) != Some(&'z') {
                return Err(Error::Parse(format!(
                    "expected 'z' after '*' at offset {pos}"
                )));
            }
        }
    }
    let mut power = 0;
    if chars.get(*pos) == Some(&'z') {
        *pos += 1;
        power = 1;
        if chars.get(*pos) == Some(&'^') {
            *pos += 1;
            let e = parse_uint(chars, pos)
                .ok_or_else(|| Error::Parse(format!("expected exponent at offset {pos}")))?;
            power = usize::try_from(e)
                .ok()
                .filter(|&e| e <= 4096)
                .ok_or_else(|| Error::Parse("exponent too large".into()))?;
        }
    } else if !explicit {
        return Err(Error::Parse(format!("expected a term at offset {pos}")));
    }
    Ok((coeff, power))
}

fn parse_rational_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn poly_from_json(value: &Value) -> Result<Poly> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::Parse("polynomial JSON must be an array".into()))?;
    let coeffs = arr
        .iter()
        .map(|v| match v {
            Value::Number(n) => n
                .as_i64()
                .map(|i| BigRational::from_integer(BigInt::from(i)))
                .ok_or_else(|| Error::Parse(format!("non-integer JSON number {n}"))),
            Value::String(s) => parse_rational_str(s),
            other => Err(Error::Parse(format!("bad coefficient {other}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

/// Ascending coefficient array; integers as JSON numbers when they fit.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| {
                if c.is_integer() {
                    if let Ok(i) = i64::try_from(c.to_integer()) {
                        return Value::from(i);
                    }
                }
                Value::from(c.to_string())
            })
            .collect(),
    )
}

/// Accepts either a JSON array or the text form.
pub fn parse_poly_any(input: &str) -> Result<Poly> {
    let t = input.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        poly_from_json(&v)
    } else {
        parse_poly(t)
    }
}
