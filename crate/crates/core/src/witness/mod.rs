//! Nonnegativity tests on witness sets, counterexample construction and
//! the special-point search.

mod ci;
mod counterexample;
mod flats;
mod hyperplanes;
mod minimize;
mod special;

pub use ci::ci_check;
pub use counterexample::{thmb_construct, CounterexampleBundle};
pub use flats::{conjecture_probe, highcodim_check, Disagreement, ProbeReport};
pub use hyperplanes::{
    sphere_vs_witness_property, thma_check, witness_hyperplanes, witness_minimum, PropertyFailure, PropertyReport,
};
pub use minimize::{cmp_candidates, min_on_sphere, min_on_subspace, MultistartParams, SubspaceMin};
pub use special::{special_point_on_curve, SpecialPoint};

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polyalg::{binary_form_nonneg, AnyPoly, QPoly};
use crate::rootsys::{Flat, FlatBasis};
use crate::scalar::{Rational, Scalar};

/// Values below `-NEG_TOL` on the unit sphere count as negative.
pub const NEG_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    NonnegativeWithinTol,
    Negative,
    HypothesisViolated,
    ExactNonnegative,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::NonnegativeWithinTol => "nonnegative_within_tol",
            Classification::Negative => "negative",
            Classification::HypothesisViolated => "hypothesis_violated",
            Classification::ExactNonnegative => "exact_nonnegative",
        })
    }
}

/// Minimum of a form on one flat.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatOutcome {
    pub label: String,
    pub dim: usize,
    pub min_value: f64,
    pub argmin: Vec<f64>,
    /// Exact nonnegativity of the restriction when it was decidable.
    pub exact_nonneg: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub classification: Classification,
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub tolerance: f64,
    pub flats: Vec<FlatOutcome>,
    /// Every flat went through an exact decision.
    pub exact: bool,
    /// The test set was sampled rather than enumerated.
    pub heuristic: bool,
    pub reason: Option<String>,
}

impl Verdict {
    pub fn hypothesis_violated(reason: impl Into<String>) -> Verdict {
        Verdict {
            classification: Classification::HypothesisViolated,
            min_value: f64::NAN,
            argmin: Vec::new(),
            tolerance: NEG_TOL,
            flats: Vec::new(),
            exact: false,
            heuristic: false,
            reason: Some(reason.into()),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.classification == Classification::Negative
    }

    pub fn is_nonnegative(&self) -> bool {
        matches!(self.classification, Classification::NonnegativeWithinTol | Classification::ExactNonnegative)
    }
}

fn fmt_point(p: &[f64]) -> String {
    p.iter().map(|v| format!("{:.12e}", v + 0.0)).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "classification: {}", self.classification)?;
        if let Some(r) = &self.reason {
            writeln!(f, "reason: {r}")?;
        }
        writeln!(f, "min_value: {:.12e}", self.min_value)?;
        writeln!(f, "argmin: {}", fmt_point(&self.argmin))?;
        writeln!(f, "tolerance: {:e}", self.tolerance)?;
        writeln!(f, "exact: {}", self.exact)?;
        writeln!(f, "heuristic: {}", self.heuristic)?;
        writeln!(f, "flats: {}", self.flats.len())?;
        for o in &self.flats {
            let exact = match o.exact_nonneg {
                Some(true) => "nonnegative",
                Some(false) => "negative",
                None => "n/a",
            };
            writeln!(f, "  flat {} dim {} min {:.12e} exact {} at {}", o.label, o.dim, o.min_value, exact, fmt_point(&o.argmin))?;
        }
        Ok(())
    }
}

/// Exact sign decision for a restriction in at most two variables.
fn exact_restriction_nonneg(f: &QPoly, basis: &Matrix<Rational>) -> Result<Option<bool>> {
    let r = f.substitute_linear(basis)?;
    Ok(match basis.cols() {
        1 => {
            let c = r.coeff(&[f.homogeneous_degree().unwrap_or(0)]);
            Some(c.signum_i() >= 0)
        }
        2 => Some(binary_form_nonneg(&r)?),
        _ => None,
    })
}

/// Minimizes `f` over each flat and classifies the overall minimum.
pub(crate) fn assess_flats(f: &AnyPoly, flats: &[Flat], params: &MultistartParams) -> Result<Verdict> {
    let ff = f.to_f64();
    let compiled = ff.compile();
    let mut outcomes = Vec::with_capacity(flats.len());
    for (i, flat) in flats.iter().enumerate() {
        let m = min_on_subspace(&ff, &flat.float_basis(), &params.derive(i as u64))?;
        let exact_nonneg = match (f.as_exact(), flat.basis()) {
            (Some(q), FlatBasis::Exact(b)) => exact_restriction_nonneg(q, b)?,
            _ => None,
        };
        outcomes.push(FlatOutcome { label: flat.describe(), dim: flat.dim(), min_value: m.value, argmin: m.point, exact_nonneg });
    }
    let best = outcomes
        .iter()
        .map(|o| (o.min_value, o.argmin.clone()))
        .min_by(cmp_candidates)
        .ok_or_else(|| Error::DegenerateInput("no flats to test".into()))?;
    let exact = outcomes.iter().all(|o| o.exact_nonneg.is_some());
    let (classification, min_value) = if best.0 < -NEG_TOL {
        (Classification::Negative, compiled.value(&best.1))
    } else if exact && outcomes.iter().all(|o| o.exact_nonneg == Some(true)) {
        (Classification::ExactNonnegative, best.0)
    } else {
        (Classification::NonnegativeWithinTol, best.0)
    };
    Ok(Verdict {
        classification,
        min_value,
        argmin: best.1,
        tolerance: NEG_TOL,
        flats: outcomes,
        exact,
        heuristic: false,
        reason: None,
    })
}

fn even_degree(f: &AnyPoly) -> Result<u32> {
    match f.homogeneous_degree() {
        Some(d) if d % 2 == 0 => Ok(d),
        Some(d) => Err(Error::DegenerateInput(format!("form has odd degree {d}"))),
        None => Err(Error::DegenerateInput("form is not homogeneous".into())),
    }
}
