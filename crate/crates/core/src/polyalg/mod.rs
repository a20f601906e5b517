//! Sparse multivariate polynomials over exact rationals or floats.
//!
//! Terms are keyed by exponent vectors ordered graded-lexicographically,
//! so iteration order (and therefore every serialized form) is canonical.

mod compiled;
mod io;
mod matrix;
mod sturm;

pub use compiled::CompiledPoly;
pub use io::{read_poly, write_poly, AnyPoly};
pub use matrix::{combinations, PolyMatrix};
pub use sturm::{binary_form_nonneg, UniPoly};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

/// Exact-rational polynomial.
pub type QPoly = Poly<Rational>;
/// Double-precision polynomial.
pub type FPoly = Poly<f64>;

/// Exponent vector. Ordered by total degree, then lexicographically
/// (`x1 > x2 > ...`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { degree: exps.iter().sum(), exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), C::one());
        p
    }

    /// Single term `c * x^exps`.
    pub fn monomial(c: C, exps: Vec<u32>) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::new(exps), c);
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, summing
    /// repeated exponent vectors.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (C, Vec<u32>)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (c, exps) in terms {
            if exps.len() != nvars {
                return Err(Error::ShapeError(format!("term has {} exponents, expected {nvars}", exps.len())));
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    /// `sum_i x_i^2`.
    pub fn norm_sq(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = 2;
            p.add_term(Monomial::new(e), C::one());
        }
        p
    }

    /// `(sum_i x_i^2)^k`.
    pub fn norm_pow(nvars: usize, k: u32) -> Self {
        Self::norm_sq(nvars).pow(k)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(&Monomial::new(exps.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Common degree of all terms if homogeneous (zero counts as homogeneous of degree 0).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => Some(0),
            Some(d) => degs.all(|e| e == d).then_some(d),
        }
    }

    /// Largest exponent of variable `i` over all terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[i]).max().unwrap_or(0)
    }

    fn check_nvars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ShapeError(format!("nvars mismatch: {} vs {}", self.nvars, other.nvars)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, v)| {
                    let p = v.mul(c);
                    (!p.is_zero()).then(|| (m.clone(), p))
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same nvars");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same nvars");
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "point length must equal nvars");
        let max_deg: Vec<u32> = (0..self.nvars).map(|i| self.degree_in(i)).collect();
        let powers: Vec<Vec<C>> = point
            .iter()
            .zip(&max_deg)
            .map(|(x, &d)| {
                let mut row = Vec::with_capacity(d as usize + 1);
                row.push(C::one());
                for k in 1..=d as usize {
                    row.push(row[k - 1].mul(x));
                }
                row
            })
            .collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c.mul(&C::from_i64(e as i64)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// `u -> F(M u)` for an `nvars x k` matrix `M`; result has `k` variables.
    pub fn substitute_linear(&self, m: &Matrix<C>) -> Result<Self> {
        if m.rows() != self.nvars {
            return Err(Error::ShapeError(format!(
                "substitution matrix has {} rows, polynomial has {} variables",
                m.rows(),
                self.nvars
            )));
        }
        let k = m.cols();
        let forms: Vec<Poly<C>> = (0..self.nvars)
            .map(|i| {
                let mut l = Poly::zero(k);
                for j in 0..k {
                    l.add_term(Monomial::var(k, j), m[(i, j)].clone());
                }
                l
            })
            .collect();
        let mut cache: Vec<Vec<Poly<C>>> = forms.iter().map(|l| vec![Poly::one(k), l.clone()]).collect();
        let mut out = Poly::zero(k);
        for (mon, c) in &self.terms {
            let mut t = Poly::constant(k, c.clone());
            for (i, &e) in mon.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&forms[i])?;
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize])?;
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Substitutes polynomials for the variables: `x_i -> subs[i]`.
    pub fn compose(&self, subs: &[Poly<C>]) -> Result<Poly<C>> {
        if subs.len() != self.nvars {
            return Err(Error::ShapeError("compose needs one polynomial per variable".into()));
        }
        let target = subs.first().map_or(0, Poly::nvars);
        if subs.iter().any(|s| s.nvars != target) {
            return Err(Error::ShapeError("substituted polynomials disagree on nvars".into()));
        }
        let mut cache: Vec<Vec<Poly<C>>> = subs.iter().map(|s| vec![Poly::one(target), s.clone()]).collect();
        let mut out = Poly::zero(target);
        for (mon, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in mon.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&subs[i])?;
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize])?;
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// True if `self ∘ g == self` for every generator, with coefficient
    /// tolerance `tol` in the float domain.
    pub fn is_invariant(&self, generators: &[Matrix<C>], tol: f64) -> bool {
        generators.iter().all(|g| match self.substitute_linear(g) {
            Ok(img) => img.approx_eq(self, tol),
            Err(_) => false,
        })
    }

    /// Coefficientwise comparison within `tol` (exact equality when exact).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        if C::EXACT {
            return self == other;
        }
        match self.sub(other) {
            Ok(d) => d.terms.values().all(|c| c.near_zero(tol)),
            Err(_) => false,
        }
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_f64(&self) -> FPoly {
        self.map_coeffs(Scalar::to_f64)
    }

    /// Embeds into a larger variable set; variable `i` becomes `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Self {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; nvars];
            for (i, &e) in m.exps.iter().enumerate() {
                exps[positions[i]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly::new(&self.to_f64())
    }
}

impl QPoly {
    /// Exact division by a nonzero polynomial; `None` if the remainder is
    /// nonzero. Uses graded-lex leading terms.
    pub fn div_exact(&self, divisor: &QPoly) -> Option<QPoly> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = QPoly::zero(self.nvars);
        while let Some((m, c)) = rem.leading() {
            if !m.exps.iter().zip(&lm.exps).all(|(a, b)| a >= b) {
                return None;
            }
            let exps: Vec<u32> = m.exps.iter().zip(&lm.exps).map(|(a, b)| a - b).collect();
            let t = QPoly::monomial(c.div(&lc), exps);
            rem = rem.sub(&t.mul(divisor).ok()?).ok()?;
            quot = quot.add(&t).ok()?;
        }
        Some(quot)
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c.signum_i() < 0;
            let abs = if neg { c.neg() } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            let vars: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{sign}{abs}")?;
            } else if abs == C::one() {
                write!(f, "{sign}{}", vars.join("*"))?;
            } else {
                write!(f, "{sign}{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    fn x(n: usize, i: usize) -> QPoly {
        QPoly::var(n, i)
    }

    #[test]
    fn products_expand() {
        let x1 = x(2, 0);
        let x2 = x(2, 1);
        assert_eq!(x1.mul(&x1).unwrap(), QPoly::monomial(q(1), vec![2, 0]));
        let s = x1.add(&x2).unwrap().pow(2);
        let expect = QPoly::from_terms(2, [(q(1), vec![2, 0]), (q(2), vec![1, 1]), (q(1), vec![0, 2])]).unwrap();
        assert_eq!(s, expect);
        let a = x1.pow(2).add(&x2.pow(2)).unwrap();
        let b = x1.pow(2).sub(&x2.pow(2)).unwrap();
        let expect = QPoly::from_terms(2, [(q(1), vec![4, 0]), (q(-1), vec![0, 4])]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn evaluation() {
        let f = QPoly::from_terms(2, [(q(1), vec![4, 0]), (q(1), vec![0, 4])]).unwrap();
        assert_eq!(f.evaluate(&[q(1), q(2)]), q(17));
        assert_eq!(f.evaluate(&[q(0), q(0)]), q(0));
        assert_eq!(QPoly::norm_sq(2).evaluate(&[q(3), q(4)]), q(25));
    }

    #[test]
    fn gradients() {
        let f = QPoly::from_terms(2, [(q(1), vec![4, 0]), (q(1), vec![0, 4])]).unwrap();
        let g = f.gradient();
        assert_eq!(g[0], QPoly::monomial(q(4), vec![3, 0]));
        assert_eq!(g[1], QPoly::monomial(q(4), vec![0, 3]));
        let e3 = QPoly::monomial(q(1), vec![1, 1, 1]);
        let g = e3.gradient();
        assert_eq!(g[0], QPoly::monomial(q(1), vec![0, 1, 1]));
        assert_eq!(g[1], QPoly::monomial(q(1), vec![1, 0, 1]));
        assert_eq!(g[2], QPoly::monomial(q(1), vec![1, 1, 0]));
        let n = QPoly::norm_sq(2).gradient();
        assert_eq!(n[0], QPoly::monomial(q(2), vec![1, 0]));
    }

    #[test]
    fn linear_substitution() {
        let swap = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        let n = QPoly::norm_sq(2);
        assert_eq!(n.substitute_linear(&swap).unwrap(), n);

        let diag = Matrix::from_rows(vec![vec![q(1)], vec![q(1)]]).unwrap();
        let d = x(2, 0).sub(&x(2, 1)).unwrap();
        assert!(d.substitute_linear(&diag).unwrap().is_zero());

        let f = QPoly::from_terms(2, [(q(1), vec![4, 0]), (q(1), vec![0, 4])]).unwrap();
        assert_eq!(f.substitute_linear(&diag).unwrap(), QPoly::monomial(q(2), vec![4]));
    }

    #[test]
    fn invariance_under_generators() {
        let swap = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        assert!(!x(2, 0).is_invariant(&[swap.clone()], 0.0));
        assert!(QPoly::norm_sq(2).is_invariant(&[swap], 0.0));
    }

    #[test]
    fn exact_division() {
        let a = x(2, 0).sub(&x(2, 1)).unwrap();
        let b = x(2, 0).add(&x(2, 1)).unwrap();
        let p = a.mul(&b).unwrap().scale(&qf(3, 2));
        assert_eq!(p.div_exact(&a).unwrap(), b.scale(&qf(3, 2)));
        assert!(p.div_exact(&x(2, 0)).is_none());
    }

    #[test]
    fn display_is_readable() {
        let f = QPoly::from_terms(2, [(q(1), vec![4, 0]), (qf(-1, 2), vec![2, 2]), (q(3), vec![0, 0])]).unwrap();
        assert_eq!(f.to_string(), "x1^4 - 1/2*x1^2*x2^2 + 3");
    }

    #[test]
    fn homogeneity() {
        assert_eq!(QPoly::norm_pow(3, 2).homogeneous_degree(), Some(4));
        let f = x(2, 0).add(&QPoly::norm_sq(2)).unwrap();
        assert_eq!(f.homogeneous_degree(), None);
    }
}
