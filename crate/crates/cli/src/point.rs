//! Points written with square roots, e.g. `1/√5,2/√5` or `sqrt(2),0,-1/2`.
//!
//! Every nonzero coordinate must reduce to a rational multiple of the same
//! square root, so the point is `coeffs · √radicand` with `radicand`
//! a squarefree integer.

use witset_core::scalar::{format_rational, parse_rational, Rational, Scalar};
use witset_core::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct RadicalPoint {
    pub coeffs: Vec<Rational>,
    pub radicand: u64,
}

impl RadicalPoint {
    pub fn to_f64(&self) -> Vec<f64> {
        let r = (self.radicand as f64).sqrt();
        self.coeffs.iter().map(|c| c.to_f64() * r).collect()
    }

    pub fn describe(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        if self.radicand == 1 {
            cs.join(",")
        } else {
            format!("sqrt({}) * ({})", self.radicand, cs.join(","))
        }
    }
}

/// `s^2 * t = m` with `t` squarefree.
fn squarefree(mut m: u64) -> (u64, u64) {
    let (mut s, mut t) = (1, 1);
    let mut p = 2;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            s *= p;
        }
        if m % p == 0 {
            m /= p;
            t *= p;
        }
        p += 1;
    }
    (s, t * m)
}

/// `k`, `√k`, `k√m`; returns `(k, m)`.
fn factor(s: &str) -> Result<(Rational, u64)> {
    let bad = || Error::Parse(format!("bad number '{s}'"));
    match s.split_once('√') {
        None => Ok((parse_rational(s)?, 1)),
        Some((k, m)) => {
            let k = if k.is_empty() { Rational::one() } else { parse_rational(k)? };
            let m: u64 = m.parse().map_err(|_| bad())?;
            if m == 0 {
                return Ok((Rational::zero(), 1));
            }
            Ok((k, m))
        }
    }
}

fn coordinate(raw: &str) -> Result<(Rational, u64)> {
    let s: String = raw.trim().replace("sqrt(", "√").replace([')', ' '], "");
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.as_str()),
    };
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (factor(a)?, factor(b)?),
        None => (factor(body)?, (Rational::one(), 1)),
    };
    if den.0.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{raw}'")));
    }
    // a√m1 / (b√m2) = a / (b m2) · √(m1 m2)
    let (s, t) = squarefree(num.1 * den.1);
    let c = num.0.mul(&Rational::from_i64(s as i64)).div(&den.0.mul(&Rational::from_i64(den.1 as i64)));
    Ok((if neg { c.neg() } else { c }, t))
}

pub fn parse_point(text: &str) -> Result<RadicalPoint> {
    let parts: Vec<(Rational, u64)> = text.split(',').map(coordinate).collect::<Result<_>>()?;
    let mut radicand = None;
    for (c, t) in &parts {
        if c.is_zero() {
            continue;
        }
        match radicand {
            None => radicand = Some(*t),
            Some(r) if r == *t => {}
            Some(_) => return Err(Error::Parse(format!("coordinates of '{text}' mix different square roots"))),
        }
    }
    Ok(RadicalPoint { coeffs: parts.into_iter().map(|(c, _)| c).collect(), radicand: radicand.unwrap_or(1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use witset_core::scalar::{q, qf};

    #[test]
    fn inverse_roots() {
        let p = parse_point("1/√5,2/√5").unwrap();
        assert_eq!(p.coeffs, vec![qf(1, 5), qf(2, 5)]);
        assert_eq!(p.radicand, 5);
        let f = p.to_f64();
        assert!((f[0] - 1.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn plain_and_mixed_forms() {
        let p = parse_point("1, -2/3, 0").unwrap();
        assert_eq!((p.coeffs, p.radicand), (vec![q(1), qf(-2, 3), q(0)], 1));
        let p = parse_point("sqrt(8), -√2").unwrap();
        assert_eq!((p.coeffs.clone(), p.radicand), (vec![q(2), q(-1)], 2));
        assert!(parse_point("√2,√3").is_err());
        assert!(parse_point("1/0").is_err());
    }
}
