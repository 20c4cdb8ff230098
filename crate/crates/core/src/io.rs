//! Plain-text tensor and polynomial files.
//!
//! ```text
//! tensor 4 2          poly 4 2
//! 1 1 1 1 1           1 4 0
//! 1 2 2 1 -1/2        -3 2 2
//! 2 2 2 2 1.0e0       1 0 4
//! ```
//!
//! Tensor indices are 1-based and may come in any order. Values are
//! integers, decimals (optionally with an exponent) or `p/q`, and are read
//! exactly. Blank lines and `#` comments are ignored.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::tensor::{canonicalize, HomogeneousPolynomial, Scalar, SymmetricTensor};

/// Reads an exact rational from `7`, `-1/6`, `0.25`, `1e-3` or `-2.5E+2`.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| format!("bad numerator in `{s}`"))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| format!("bad denominator in `{s}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => {
            let e: i64 = s[k + 1..].parse().map_err(|_| format!("bad exponent in `{s}`"))?;
            (&s[..k], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("not a number: `{s}`"));
    }
    if exp.unsigned_abs() > 4000 {
        return Err(format!("exponent out of range in `{s}`"));
    }
    let all = format!("{int}{frac}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|e| e.to_string())?;
    if neg {
        num = -num;
    }
    let shift = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Ok(if shift >= 0 {
        BigRational::from_integer(num * pow)
    } else {
        BigRational::new(num, pow)
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then(|| (k + 1, line.split_whitespace().collect()))
    })
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>, kind: &str) -> Result<(usize, usize)> {
    let (ln, h) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    if h.len() != 3 || h[0] != kind {
        return Err(perr(ln, format!("expected header `{kind} <m> <n>`")));
    }
    let m: usize = h[1].parse().map_err(|_| perr(ln, format!("bad order `{}`", h[1])))?;
    let n: usize = h[2].parse().map_err(|_| perr(ln, format!("bad dimension `{}`", h[2])))?;
    if m == 0 || n == 0 {
        return Err(perr(ln, "order and dimension must be positive"));
    }
    Ok((m, n))
}

pub fn parse_tensor(text: &str) -> Result<SymmetricTensor<BigRational>> {
    let mut lines = content_lines(text);
    let (m, n) = header(&mut lines, "tensor")?;
    let mut t = SymmetricTensor::zeros(m, n).map_err(|e| perr(1, e.to_string()))?;
    let mut seen = BTreeSet::new();
    for (ln, toks) in lines {
        if toks.len() != m + 1 {
            return Err(perr(ln, format!("expected {m} indices and a value, got {} fields", toks.len())));
        }
        let idx: Vec<usize> = toks[..m]
            .iter()
            .map(|s| s.parse::<usize>().map_err(|_| perr(ln, format!("bad index `{s}`"))))
            .collect::<Result<_>>()?;
        let (c, _) = canonicalize(&idx, n).map_err(|e| perr(ln, e.to_string()))?;
        if !seen.insert(c.clone()) {
            return Err(perr(ln, format!("duplicate entry for index {:?}", c.one_based())));
        }
        let v = parse_rational(toks[m]).map_err(|e| perr(ln, e))?;
        t.set_canonical(c, v);
    }
    Ok(t)
}

pub fn parse_polynomial(text: &str) -> Result<HomogeneousPolynomial<BigRational>> {
    let mut lines = content_lines(text);
    let (m, n) = header(&mut lines, "poly")?;
    let mut p = HomogeneousPolynomial::zero(m, n);
    for (ln, toks) in lines {
        if toks.len() != n + 1 {
            return Err(perr(ln, format!("expected a coefficient and {n} exponents, got {} fields", toks.len())));
        }
        let c = parse_rational(toks[0]).map_err(|e| perr(ln, e))?;
        let alpha: Vec<u32> = toks[1..]
            .iter()
            .map(|s| s.parse::<u32>().map_err(|_| perr(ln, format!("bad exponent `{s}`"))))
            .collect::<Result<_>>()?;
        p.add_term(&alpha, c).map_err(|e| perr(ln, e.to_string()))?;
    }
    Ok(p)
}

/// Accepts either file kind and returns the tensor.
pub fn parse_any(text: &str) -> Result<SymmetricTensor<BigRational>> {
    let first = content_lines(text).next().map(|(_, t)| t.first().map(|s| s.to_string()));
    match first.flatten().as_deref() {
        Some("poly") => SymmetricTensor::from_polynomial(&parse_polynomial(text)?),
        _ => parse_tensor(text),
    }
}

pub fn write_tensor<T: Scalar>(a: &SymmetricTensor<T>) -> String {
    let mut out = format!("tensor {} {}\n", a.order(), a.dim());
    for (idx, v) in a.iter() {
        if v.is_zero() {
            continue;
        }
        let ix: Vec<String> = idx.one_based().iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("{} {}\n", ix.join(" "), v.render()));
    }
    out
}

pub fn write_polynomial<T: Scalar>(p: &HomogeneousPolynomial<T>) -> String {
    let mut out = format!("poly {} {}\n", p.degree(), p.nvars());
    for (alpha, c) in p.terms() {
        let ex: Vec<String> = alpha.iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("{} {}\n", c.render(), ex.join(" ")));
    }
    out
}
