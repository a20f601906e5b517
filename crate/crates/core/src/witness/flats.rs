use std::fmt;

use super::{assess_flats, min_on_sphere, min_on_subspace, MultistartParams, Verdict, NEG_TOL};
use crate::error::{Error, Result};
use crate::invariants::{express_in_invariants, random_invariant_form, InvariantBasis};
use crate::polyalg::{write_poly, AnyPoly, QPoly};
use crate::rootsys::{arrangement_flats, enumerate_flats, Family, Flat};

/// Tests `F` in `R[η_1..η_j]`, linear in `η_j`, on the canonical flats of
/// codimension `n - j + 1`. Only Sym and B are accepted.
pub fn highcodim_check(basis: &InvariantBasis, f: &QPoly, j: usize, params: &MultistartParams) -> Result<Verdict> {
    let rs = basis.root_system();
    let n = basis.rank();
    if !matches!(rs.family(), Family::Sym | Family::B) {
        return Err(Error::MinorFactorizationUnknown(rs.label()));
    }
    if j == 0 || j > n {
        return Err(Error::DegenerateInput(format!("j must lie in 1..={n}")));
    }
    let subset: Vec<usize> = (0..j).collect();
    let h = match express_in_invariants(f, basis, &subset) {
        Ok(h) => h,
        Err(Error::NoSolution) => return Err(Error::LinearityViolated),
        Err(e) => return Err(e),
    };
    if h.degree_in(j - 1) > 1 {
        return Err(Error::LinearityViolated);
    }
    if !basis.norm_in_first(j - 1) {
        return Ok(Verdict::hypothesis_violated(format!(
            "|x|^2 is not a polynomial in the first {} invariants",
            j - 1
        )));
    }
    let flats = enumerate_flats(rs.family(), n, n - j + 1)?;
    assess_flats(&AnyPoly::Exact(f.clone()), &flats, params)
}

/// Flats of codimension `n - j + 1`: canonical representatives for Sym and
/// B, every arrangement flat otherwise.
fn probe_flats(basis: &InvariantBasis, j: usize) -> Result<Vec<Flat>> {
    let rs = basis.root_system();
    let codim = basis.rank() - j + 1;
    match rs.family() {
        Family::Sym | Family::B => enumerate_flats(rs.family(), rs.dim(), codim),
        _ => arrangement_flats(rs, codim),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Disagreement {
    pub trial: usize,
    pub sphere_min: f64,
    pub flat_min: f64,
    /// The form in the polynomial file format.
    pub form: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub label: String,
    pub j: usize,
    pub degree: u32,
    pub trials: usize,
    pub flats: usize,
    pub negative_on_sphere: usize,
    pub disagreements: Vec<Disagreement>,
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.label)?;
        writeln!(f, "j: {}", self.j)?;
        writeln!(f, "degree: {}", self.degree)?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "flats: {}", self.flats)?;
        writeln!(f, "negative_on_sphere: {}", self.negative_on_sphere)?;
        writeln!(f, "disagreements: {}", self.disagreements.len())?;
        for d in &self.disagreements {
            writeln!(f, "  trial {} sphere {:.12e} flats {:.12e}", d.trial, d.sphere_min, d.flat_min)?;
            for line in d.form.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

/// Compares the sphere verdict with the verdict on the union of flats of
/// codimension `n - j + 1` for random invariant forms of degree `2d`,
/// `d < d_j`. Disagreements are reported, not raised.
pub fn conjecture_probe(
    basis: &InvariantBasis,
    j: usize,
    degree: u32,
    trials: usize,
    params: &MultistartParams,
) -> Result<ProbeReport> {
    let n = basis.rank();
    if j == 0 || j > n {
        return Err(Error::DegenerateInput(format!("j must lie in 1..={n}")));
    }
    if degree % 2 == 1 || degree / 2 >= basis.degrees()[j - 1] {
        return Err(Error::HypothesisViolated(format!("need an even degree 2d with d < d_{j} = {}", basis.degrees()[j - 1])));
    }
    if !basis.norm_in_first(j) {
        return Err(Error::HypothesisViolated(format!("|x|^2 is not a polynomial in the first {j} invariants")));
    }
    let flats = probe_flats(basis, j)?;
    let mut report = ProbeReport {
        label: basis.root_system().label(),
        j,
        degree,
        trials,
        flats: flats.len(),
        negative_on_sphere: 0,
        disagreements: Vec::new(),
    };
    for t in 0..trials {
        let salt = 2 * t as u64;
        let form = random_invariant_form(basis, degree, params.derive(salt).seed)?;
        let ff = form.to_f64();
        let run = params.derive(salt + 1);
        let sphere = min_on_sphere(&ff, &run)?.value;
        let mut on_flats = f64::INFINITY;
        for (i, flat) in flats.iter().enumerate() {
            on_flats = on_flats.min(min_on_subspace(&ff, &flat.float_basis(), &run.derive(i as u64))?.value);
        }
        if sphere < -1e-6 {
            report.negative_on_sphere += 1;
            if on_flats >= -NEG_TOL {
                report.disagreements.push(Disagreement { trial: t, sphere_min: sphere, flat_min: on_flats, form: write_poly(&form) });
            }
        }
    }
    Ok(report)
}
