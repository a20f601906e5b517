//! Exact univariate polynomials and Sturm-sequence root counting, used to
//! decide nonnegativity of binary forms.

use num_traits::{One, Signed, Zero};

use super::QPoly;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Dense univariate polynomial, coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(k.into())).collect())
    }

    fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.0.len().max(other.0.len());
        let zero = Rational::zero();
        UniPoly::new((0..n).map(|k| self.0.get(k).unwrap_or(&zero) - other.0.get(k).unwrap_or(&zero)).collect())
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.0.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lc;
            for (k, d) in divisor.0.iter().enumerate() {
                rem[shift + k] -= &c * d;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    fn monic(&self) -> UniPoly {
        match self.leading() {
            Some(lc) => UniPoly(self.0.iter().map(|c| c / lc).collect()),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free factorization: returns `[a1, a2, ...]` with
    /// `self = lc * a1 * a2^2 * a3^3 * ...` and each `a_i` square-free.
    pub fn squarefree_factors(&self) -> Vec<UniPoly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let b_next = b.div_rem(&a).0;
            let c_next = d.div_rem(&a).0;
            d = c_next.sub(&b_next.derivative());
            out.push(a);
            b = b_next;
        }
        out
    }

    /// Number of distinct real roots of a square-free polynomial.
    pub fn count_real_roots_squarefree(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(UniPoly::new(r.0.iter().map(|c| -c).collect()));
        }
        let signs_at = |pos_inf: bool| -> Vec<bool> {
            seq.iter()
                .filter_map(|p| {
                    let lc = p.leading()?;
                    let odd = p.degree().unwrap() % 2 == 1;
                    let positive = lc.is_positive() ^ (!pos_inf && odd);
                    Some(positive)
                })
                .collect()
        };
        let variations = |s: Vec<bool>| s.windows(2).filter(|w| w[0] != w[1]).count();
        variations(signs_at(false)) - variations(signs_at(true))
    }

    /// True iff the polynomial is `>= 0` on the whole real line.
    pub fn is_nonnegative(&self) -> bool {
        let Some(lc) = self.leading() else { return true };
        if !lc.is_positive() {
            return false;
        }
        let odd_part = self
            .squarefree_factors()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .fold(UniPoly::new(vec![Rational::one()]), |acc, (_, a)| acc.mul(&a));
        odd_part.count_real_roots_squarefree() == 0
    }

    fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

/// Exact decision of `F(s, t) >= 0` on all of `R^2` for a homogeneous
/// binary form with rational coefficients.
pub fn binary_form_nonneg(form: &QPoly) -> Result<bool> {
    if form.nvars() != 2 {
        return Err(Error::ShapeError(format!("binary form expected, got {} variables", form.nvars())));
    }
    if form.is_zero() {
        return Ok(true);
    }
    let degree = form
        .homogeneous_degree()
        .ok_or_else(|| Error::DegenerateInput("binary form is not homogeneous".into()))?;
    if degree % 2 == 1 {
        // F(-s,-t) = -F(s,t) for a nonzero form of odd degree.
        return Ok(false);
    }
    let d = degree as usize;
    let mut coeffs = vec![Rational::zero(); d + 1];
    for (m, c) in form.terms() {
        coeffs[m.exps()[1] as usize] = c.clone();
    }
    let at_infinity = coeffs[d].clone();
    let f = UniPoly::new(coeffs);
    Ok(!at_infinity.is_negative() && f.is_nonnegative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn uni(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn sturm_counts_distinct_roots() {
        // (t-1)(t-2)(t+3)
        let p = uni(&[6, -7, 0, 1]);
        assert_eq!(p.count_real_roots_squarefree(), 3);
        assert_eq!(uni(&[1, 0, 1]).count_real_roots_squarefree(), 0);
    }

    #[test]
    fn yun_separates_multiplicities() {
        // (t-1)^2 (t+1)
        let p = uni(&[1, -1, -1, 1]);
        let f = p.squarefree_factors();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], uni(&[1, 1]));
        assert_eq!(f[1], uni(&[-1, 1]));
    }

    #[test]
    fn binary_forms() {
        let s2t2 = QPoly::monomial(q(1), vec![2, 2]);
        assert!(binary_form_nonneg(&s2t2).unwrap());
        let f = QPoly::from_terms(2, [(q(1), vec![4, 0]), (q(-1), vec![2, 2])]).unwrap();
        assert!(!binary_form_nonneg(&f).unwrap());
        let sq = QPoly::from_terms(2, [(q(1), vec![2, 0]), (q(-1), vec![0, 2])]).unwrap().pow(2);
        assert!(binary_form_nonneg(&sq).unwrap());
        assert!(binary_form_nonneg(&QPoly::zero(2)).unwrap());
        assert!(!binary_form_nonneg(&QPoly::monomial(q(1), vec![3, 0])).unwrap());
        // -t^4 is negative only along s = 0.
        assert!(!binary_form_nonneg(&QPoly::monomial(q(-1), vec![0, 4])).unwrap());
    }
}
