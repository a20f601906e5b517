//! Text format:
//!
//! ```text
//! nvars=2 domain=exact
//! 1/1 4 0
//! -3/2 2 2
//! ```
//!
//! One term per line as `COEFF e1 ... en`, terms in descending graded-lex
//! order. Exact coefficients are written `p/q`, float coefficients as the
//! shortest round-tripping decimal. Blank lines and `#` comments are
//! ignored on input.

use super::{FPoly, Poly, QPoly};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, TextScalar};

/// A polynomial in either coefficient domain.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Exact(QPoly),
    Float(FPoly),
}

impl AnyPoly {
    pub fn nvars(&self) -> usize {
        match self {
            AnyPoly::Exact(p) => p.nvars(),
            AnyPoly::Float(p) => p.nvars(),
        }
    }

    pub fn domain(&self) -> &'static str {
        match self {
            AnyPoly::Exact(_) => <crate::scalar::Rational as Scalar>::DOMAIN,
            AnyPoly::Float(_) => <f64 as Scalar>::DOMAIN,
        }
    }

    pub fn to_f64(&self) -> FPoly {
        match self {
            AnyPoly::Exact(p) => p.to_f64(),
            AnyPoly::Float(p) => p.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&QPoly> {
        match self {
            AnyPoly::Exact(p) => Some(p),
            AnyPoly::Float(_) => None,
        }
    }

    fn binary(&self, other: &AnyPoly, qf: impl Fn(&QPoly, &QPoly) -> Result<QPoly>, ff: impl Fn(&FPoly, &FPoly) -> Result<FPoly>) -> Result<AnyPoly> {
        match (self, other) {
            (AnyPoly::Exact(a), AnyPoly::Exact(b)) => qf(a, b).map(AnyPoly::Exact),
            (AnyPoly::Float(a), AnyPoly::Float(b)) => ff(a, b).map(AnyPoly::Float),
            _ => Err(Error::DomainMismatch { left: self.domain(), right: other.domain() }),
        }
    }

    pub fn add(&self, other: &AnyPoly) -> Result<AnyPoly> {
        self.binary(other, |a, b| a.add(b), |a, b| a.add(b))
    }

    pub fn mul(&self, other: &AnyPoly) -> Result<AnyPoly> {
        self.binary(other, |a, b| a.mul(b), |a, b| a.mul(b))
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self {
            AnyPoly::Exact(p) => p.homogeneous_degree(),
            AnyPoly::Float(p) => p.homogeneous_degree(),
        }
    }
}

pub fn write_poly<C: TextScalar>(p: &Poly<C>) -> String {
    let mut out = format!("nvars={} domain={}\n", p.nvars(), C::DOMAIN);
    for (m, c) in p.terms() {
        out.push_str(&c.format_text());
        for e in m.exps() {
            out.push(' ');
            out.push_str(&e.to_string());
        }
        out.push('\n');
    }
    out
}

fn parse_terms<C: TextScalar>(nvars: usize, lines: &[(usize, &str)]) -> Result<Poly<C>> {
    let mut terms = Vec::with_capacity(lines.len());
    for &(lineno, line) in lines {
        let mut fields = line.split_whitespace();
        let coeff = C::parse_text(fields.next().unwrap_or_default())
            .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
        let exps = fields
            .map(|f| f.parse::<u32>().map_err(|_| Error::Parse(format!("line {lineno}: bad exponent '{f}'"))))
            .collect::<Result<Vec<_>>>()?;
        if exps.len() != nvars {
            return Err(Error::Parse(format!("line {lineno}: expected {nvars} exponents, found {}", exps.len())));
        }
        terms.push((coeff, exps));
    }
    Poly::from_terms(nvars, terms)
}

pub fn read_poly(text: &str) -> Result<AnyPoly> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty polynomial file".into()))?;
    let mut nvars = None;
    let mut domain = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("nvars", v)) => {
                nvars = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad nvars '{v}'")))?)
            }
            Some(("domain", v)) => domain = Some(v.to_string()),
            _ => return Err(Error::Parse(format!("unexpected header field '{field}'"))),
        }
    }
    let nvars = nvars.ok_or_else(|| Error::Parse("header lacks nvars".into()))?;
    let body: Vec<(usize, &str)> = lines.collect();
    match domain.as_deref() {
        Some("exact") => parse_terms(nvars, &body).map(AnyPoly::Exact),
        Some("float") => parse_terms(nvars, &body).map(AnyPoly::Float),
        Some(other) => Err(Error::Parse(format!("unknown domain '{other}'"))),
        None => Err(Error::Parse("header lacks domain".into())),
    }
}
