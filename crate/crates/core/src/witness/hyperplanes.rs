use std::fmt;

use super::{assess_flats, even_degree, min_on_sphere, min_on_subspace, MultistartParams, Verdict};
use crate::error::{Error, Result};
use crate::invariants::{random_invariant_form, InvariantBasis};
use crate::polyalg::{AnyPoly, QPoly};
use crate::rootsys::{generate_group, hyperplane_flat, root_orbits, Flat, RootSystem, DEFAULT_GROUP_CAP};
use crate::scalar::FLOAT_TOL;

/// One root hyperplane per class of roots under `±W`.
pub fn witness_hyperplanes(rs: &RootSystem) -> Result<Vec<Flat>> {
    let group = generate_group(rs, DEFAULT_GROUP_CAP)?;
    root_orbits(rs, &group).iter().map(|class| hyperplane_flat(rs, class[0])).collect()
}

fn check_invariant(basis: &InvariantBasis, f: &AnyPoly) -> Result<()> {
    if f.nvars() != basis.rank() {
        return Err(Error::ShapeError(format!("form has {} variables, group acts on {}", f.nvars(), basis.rank())));
    }
    let ok = match f {
        AnyPoly::Exact(q) => basis.is_invariant(q),
        AnyPoly::Float(p) => p.is_invariant(&basis.generators().to_f64(), FLOAT_TOL),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotInvariant)
    }
}

fn gate(basis: &InvariantBasis, degree: u32) -> Option<String> {
    let n = basis.rank();
    let two_dn = 2 * basis.max_degree();
    if degree >= two_dn {
        return Some(format!("degree {degree} is not below 2dn = {two_dn}"));
    }
    if !basis.norm_in_first(n - 1) {
        return Some(format!("|x|^2 is not a polynomial in the first {} invariants", n - 1));
    }
    None
}

/// Tests an invariant form on the union of root hyperplanes, one
/// hyperplane per root class. Returns a hypothesis-violated verdict when
/// the degree or the norm condition fails.
pub fn thma_check(basis: &InvariantBasis, f: &AnyPoly, params: &MultistartParams) -> Result<Verdict> {
    check_invariant(basis, f)?;
    let degree = even_degree(f)?;
    if let Some(reason) = gate(basis, degree) {
        return Ok(Verdict::hypothesis_violated(reason));
    }
    assess_flats(f, &witness_hyperplanes(basis.root_system())?, params)
}

/// Minimum over the root hyperplanes with no hypothesis gate.
pub fn witness_minimum(rs: &RootSystem, f: &AnyPoly, params: &MultistartParams) -> Result<Verdict> {
    if f.nvars() != rs.dim() {
        return Err(Error::ShapeError("form and root system disagree on dimension".into()));
    }
    even_degree(f)?;
    assess_flats(f, &witness_hyperplanes(rs)?, params)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyFailure {
    pub trial: usize,
    pub sphere_min: f64,
    pub witness_min: f64,
    pub form: QPoly,
}

/// Comparison of sphere and witness minima over random invariant forms.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub label: String,
    pub degree: u32,
    pub trials: usize,
    /// `max |sphere - witness| / (1 + |sphere|)`.
    pub max_rel_dev: f64,
    pub tolerance: f64,
    pub failures: Vec<PropertyFailure>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.label)?;
        writeln!(f, "degree: {}", self.degree)?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "max_rel_dev: {:.3e}", self.max_rel_dev)?;
        writeln!(f, "tolerance: {:e}", self.tolerance)?;
        writeln!(f, "failures: {}", self.failures.len())?;
        for x in &self.failures {
            writeln!(f, "  trial {} sphere {:.12e} witness {:.12e}", x.trial, x.sphere_min, x.witness_min)?;
        }
        Ok(())
    }
}

/// For each trial draws a random invariant form of the given degree and
/// compares its minimum on the unit sphere with its minimum on the root
/// hyperplanes.
pub fn sphere_vs_witness_property(
    basis: &InvariantBasis,
    degree: u32,
    trials: usize,
    params: &MultistartParams,
) -> Result<PropertyReport> {
    if degree % 2 == 1 {
        return Err(Error::DegenerateInput(format!("degree {degree} is odd")));
    }
    if let Some(reason) = gate(basis, degree) {
        return Err(Error::HypothesisViolated(reason));
    }
    let flats = witness_hyperplanes(basis.root_system())?;
    let tolerance = 1e-6;
    let mut report = PropertyReport {
        label: basis.root_system().label(),
        degree,
        trials,
        max_rel_dev: 0.0,
        tolerance,
        failures: Vec::new(),
    };
    for t in 0..trials {
        let salt = 2 * t as u64;
        let form = random_invariant_form(basis, degree, params.derive(salt).seed)?;
        let ff = form.to_f64();
        let run = params.derive(salt + 1);
        let sphere = min_on_sphere(&ff, &run)?.value;
        let mut witness = f64::INFINITY;
        for (i, flat) in flats.iter().enumerate() {
            witness = witness.min(min_on_subspace(&ff, &flat.float_basis(), &run.derive(i as u64))?.value);
        }
        let dev = (sphere - witness).abs() / (1.0 + sphere.abs());
        report.max_rel_dev = report.max_rel_dev.max(dev);
        if dev > tolerance {
            report.failures.push(PropertyFailure { trial: t, sphere_min: sphere, witness_min: witness, form });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::basic_invariants;
    use crate::rootsys::{build_root_system, Family, VectorList};
    use crate::scalar::q;
    use crate::witness::Classification;

    fn basis(f: Family, n: usize) -> InvariantBasis {
        basic_invariants(&build_root_system(f, n).unwrap()).unwrap()
    }

    #[test]
    fn b2_quartic() {
        let b = basis(Family::B, 2);
        let v = thma_check(&b, &AnyPoly::Exact(b.etas()[1].clone()), &MultistartParams::default()).unwrap();
        assert_eq!(v.classification, Classification::ExactNonnegative);
        assert!((v.min_value - 0.5).abs() < 1e-12);
        assert_eq!(v.flats.len(), 2);
        let sq = b.etas()[0].pow(2);
        let v = thma_check(&b, &AnyPoly::Exact(sq), &MultistartParams::default()).unwrap();
        assert!(v.flats.iter().all(|o| (o.min_value - 1.0).abs() < 1e-12));
    }

    #[test]
    fn single_root_gate() {
        let rs = RootSystem::custom(2, VectorList::Exact(vec![vec![q(1), q(0)]])).unwrap();
        let b = InvariantBasis::custom(rs, vec![QPoly::var(2, 1), QPoly::var(2, 0).pow(2)]).unwrap();
        let f = QPoly::var(2, 0).pow(2).neg();
        let v = thma_check(&b, &AnyPoly::Exact(f), &MultistartParams::default()).unwrap();
        assert_eq!(v.classification, Classification::HypothesisViolated);
        assert!(v.reason.unwrap().contains("first 1"));
    }

    #[test]
    fn degree_gate_and_invariance() {
        let b = basis(Family::B, 2);
        let f = b.etas()[1].pow(2);
        let v = thma_check(&b, &AnyPoly::Exact(f), &MultistartParams::default()).unwrap();
        assert_eq!(v.classification, Classification::HypothesisViolated);
        let x = QPoly::var(2, 0).pow(2);
        assert_eq!(thma_check(&b, &AnyPoly::Exact(x), &MultistartParams::default()), Err(Error::NotInvariant));
    }

    #[test]
    fn negative_form_on_hyperplanes() {
        let b = basis(Family::B, 2);
        // 3 x1^2 x2^2 - (x1^4 + x2^4) / 2 + ...: pick eta1^2 - 3 eta2, negative at (1, 0).
        let f = b.etas()[0].pow(2).sub(&b.etas()[1].scale(&q(3))).unwrap();
        let v = thma_check(&b, &AnyPoly::Exact(f.clone()), &MultistartParams::default()).unwrap();
        assert_eq!(v.classification, Classification::Negative);
        let at = f.to_f64().evaluate(&v.argmin);
        assert_eq!(at, v.min_value);
        assert!((v.min_value + 2.0).abs() < 1e-12);
    }

    #[test]
    fn norm_power_minima() {
        let b = basis(Family::Sym, 3);
        let f = QPoly::norm_sq(3).pow(2);
        let v = thma_check(&b, &AnyPoly::Exact(f), &MultistartParams::default()).unwrap();
        assert!((v.min_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_property_run() {
        let b = basis(Family::B, 2);
        let r = sphere_vs_witness_property(&b, 4, 5, &MultistartParams::with_seed(3)).unwrap();
        assert!(r.passed(), "{r}");
        assert!(sphere_vs_witness_property(&b, 8, 1, &MultistartParams::default()).is_err());
    }
}
