use std::fmt;

use super::{min_on_subspace, witness_hyperplanes, MultistartParams};
use crate::error::{Error, Result};
use crate::invariants::InvariantBasis;
use crate::linalg::{norm_sq, Matrix};
use crate::polyalg::{write_poly, QPoly};
use crate::rootsys::FlatBasis;
use crate::scalar::{format_rational, q, rational_from_f64, Rational, Scalar};

/// An invariant form that is positive on the root hyperplanes and negative
/// at a chosen general point.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleBundle {
    pub phi_bar: QPoly,
    /// The sum of squares vanishing exactly on the cone over the orbit of `y`.
    pub phi: QPoly,
    /// Minimum of `phi` on the unit sphere of the root hyperplanes.
    pub mu: Rational,
    pub mu_exact: bool,
    pub beta: u32,
    /// Direction as given; the construction uses `y / |y|`.
    pub y: Vec<Rational>,
    /// `p_j` for every invariant, `None` where it vanishes identically.
    pub p_list: Vec<Option<QPoly>>,
    /// `phi_bar(y / |y|)`, equal to `-mu / 2`.
    pub value_at_y: Rational,
}

impl fmt::Display for CounterexampleBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y: Vec<String> = self.y.iter().map(format_rational).collect();
        writeln!(f, "y: {}", y.join(" "))?;
        writeln!(f, "beta: {}", self.beta)?;
        writeln!(f, "degree: {}", 2 * self.beta)?;
        writeln!(f, "mu: {}", format_rational(&self.mu))?;
        writeln!(f, "mu_exact: {}", self.mu_exact)?;
        writeln!(f, "phi_bar_at_y: {}", format_rational(&self.value_at_y))?;
        for (j, p) in self.p_list.iter().enumerate() {
            match p {
                Some(p) => writeln!(f, "p{}: {}", j + 1, p)?,
                None => writeln!(f, "p{}: 0 (skipped)", j + 1)?,
            }
        }
        Ok(())
    }
}

impl CounterexampleBundle {
    /// `phi_bar` in the polynomial file format.
    pub fn phi_bar_text(&self) -> String {
        write_poly(&self.phi_bar)
    }
}

/// Builds `phi_bar = phi - (mu/2) |x|^{2 beta}` for the general direction `y`.
///
/// With `s = |y|^2` and `c_j = η_j(y)`: for even `d_j`,
/// `p_j = η_j - c_j / s^{d_j/2} |x|^{d_j}`; for odd `d_j`,
/// `p_j = η_j η_o - c_j c_o / s^{(d_j+o)/2} |x|^{d_j+o}` where `η_o` is the
/// invariant of smallest odd degree `o`. Then
/// `phi = sum p_j^2 |x|^{2(beta - deg p_j)}` over the nonzero `p_j`.
pub fn thmb_construct(basis: &InvariantBasis, y: &[Rational], params: &MultistartParams) -> Result<CounterexampleBundle> {
    let n = basis.rank();
    let rs = basis.root_system();
    if y.len() != n {
        return Err(Error::ShapeError(format!("point has {} coordinates, expected {n}", y.len())));
    }
    if y.iter().all(Scalar::is_zero) {
        return Err(Error::DegenerateInput("base point is zero".into()));
    }
    if !rs.is_general_exact(y) {
        return Err(Error::NotGeneral);
    }
    let values: Vec<Rational> = basis.etas().iter().map(|e| e.evaluate(y)).collect();
    if let Some(index) = values.iter().position(Scalar::is_zero) {
        return Err(Error::DegenerateBasePoint { index });
    }
    let s = norm_sq(y);
    let degrees = basis.degrees();
    let (o_lo, o_hi) = basis.odd_extremes();
    let beta = basis.max_degree().max(o_lo + o_hi);
    let o_idx = degrees.iter().position(|d| d % 2 == 1);
    let mut p_list = Vec::with_capacity(n);
    for (j, eta) in basis.etas().iter().enumerate() {
        let (form, value, deg) = match (degrees[j] % 2, o_idx) {
            (0, _) => (eta.clone(), values[j].clone(), degrees[j]),
            (_, Some(o)) => (eta.mul(&basis.etas()[o])?, values[j].mul(&values[o]), degrees[j] + degrees[o]),
            (_, None) => unreachable!("an odd degree exists"),
        };
        let coef = value.div(&Scalar::pow(&s, deg / 2));
        let p = form.sub(&QPoly::norm_pow(n, deg / 2).scale(&coef))?;
        p_list.push(if p.is_zero() { None } else { Some(p) });
    }
    let mut phi = QPoly::zero(n);
    for p in p_list.iter().flatten() {
        let deg = p.homogeneous_degree().expect("p_j is a form");
        phi = phi.add(&p.pow(2).mul(&QPoly::norm_sq(n).pow(beta - deg))?)?;
    }
    let (mu, mu_exact) = hyperplane_minimum(&phi, basis, beta, params)?;
    if mu.signum_i() <= 0 {
        return Err(Error::ConstructionFailed(format!("hyperplane minimum {} is not positive", format_rational(&mu))));
    }
    let half = mu.div(&q(2));
    let phi_bar = phi.sub(&QPoly::norm_sq(n).pow(beta).scale(&half))?;
    if phi_bar.homogeneous_degree() != Some(2 * beta) {
        return Err(Error::ConstructionFailed("phi_bar has the wrong degree".into()));
    }
    if !basis.is_invariant(&phi_bar) {
        return Err(Error::ConstructionFailed("phi_bar is not invariant".into()));
    }
    let value_at_y = phi_bar.evaluate(y).div(&Scalar::pow(&s, beta));
    if value_at_y != half.neg() {
        return Err(Error::ConstructionFailed("phi_bar(y) differs from -mu/2".into()));
    }
    Ok(CounterexampleBundle { phi_bar, phi, mu, mu_exact, beta, y: y.to_vec(), p_list, value_at_y })
}

/// Exact on lines (`phi(b) / |b|^{2 beta}`), numeric on larger hyperplanes.
fn hyperplane_minimum(phi: &QPoly, basis: &InvariantBasis, beta: u32, params: &MultistartParams) -> Result<(Rational, bool)> {
    let flats = witness_hyperplanes(basis.root_system())?;
    let phi_f = phi.to_f64();
    let mut best: Option<(f64, Option<Rational>)> = None;
    let mut all_exact = true;
    for (i, flat) in flats.iter().enumerate() {
        let cand = match flat.basis() {
            FlatBasis::Exact(b) if b.cols() == 1 => {
                let col = b.column(0);
                let v = phi.evaluate(&col).div(&Scalar::pow(&norm_sq(&col), beta));
                (v.to_f64(), Some(v))
            }
            other => {
                all_exact = false;
                let m: Matrix<f64> = match other {
                    FlatBasis::Exact(b) => b.to_f64(),
                    FlatBasis::Float(b) => b.clone(),
                };
                (min_on_subspace(&phi_f, &m, &params.derive(i as u64))?.value, None)
            }
        };
        if best.as_ref().is_none_or(|b| cand.0 < b.0) {
            best = Some(cand);
        }
    }
    let (value, exact) = best.ok_or_else(|| Error::ConstructionFailed("no hyperplanes".into()))?;
    match exact {
        Some(v) if all_exact => Ok((v, true)),
        Some(v) => Ok((v, false)),
        None => Ok((rational_from_f64(value)?, false)),
    }
}
