//! Jacobian of the Chevalley map, its determinant factorization, and the
//! minor factorization condition.

use std::fmt::{self, Write as _};

use rand::Rng;

use crate::error::{Error, Result};
use crate::invariants::{basic_invariants, InvariantBasis};
use crate::linalg::Matrix;
use crate::parallel::{item_rng, map_indexed, Schedule};
use crate::polyalg::{FPoly, Poly, PolyMatrix, QPoly};
use crate::rootsys::{arrangement_flats, build_root_system, enumerate_flats, Family, Flat, FlatBasis};
use crate::scalar::{format_rational, q, Rational, Scalar};

/// `n x n` matrix whose column `k` is the gradient of `η_k`.
pub fn chevalley_jacobian(basis: &InvariantBasis) -> PolyMatrix<Rational> {
    let cols = basis.etas().iter().map(QPoly::gradient).collect();
    PolyMatrix::from_columns(cols).expect("gradients share nvars")
}

/// `det J = λ · prod <α, x>` over the positive roots.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport<C> {
    pub det: Poly<C>,
    pub product: Poly<C>,
    pub lambda: C,
    pub residual: Poly<C>,
}

impl<C: Scalar> fmt::Display for FactorizationReport<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "det: {}", self.det)?;
        writeln!(f, "product: {}", self.product)?;
        writeln!(f, "lambda: {}", self.lambda)?;
        writeln!(f, "residual: {}", self.residual)
    }
}

fn linear_form<C: Scalar>(coeffs: &[C]) -> Poly<C> {
    let n = coeffs.len();
    let mut l = Poly::zero(n);
    for (i, c) in coeffs.iter().enumerate() {
        let mut e = vec![0; n];
        e[i] = 1;
        l.add_term(crate::polyalg::Monomial::new(e), c.clone());
    }
    l
}

fn root_product<C: Scalar>(n: usize, roots: &[Vec<C>]) -> Result<Poly<C>> {
    roots.iter().try_fold(Poly::one(n), |acc, a| acc.mul(&linear_form(a)))
}

fn factor<C: Scalar>(det: Poly<C>, product: Poly<C>, tol: f64) -> Result<FactorizationReport<C>> {
    let (m, c) = det.leading().ok_or(Error::FactorizationFailed { terms: 0 })?;
    let denom = product.coeff(m.exps());
    if denom.near_zero(tol) {
        return Err(Error::FactorizationFailed { terms: det.num_terms() });
    }
    let lambda = c.div(&denom);
    let residual = det.sub(&product.scale(&lambda))?;
    let scale = det.terms().map(|(_, c)| c.magnitude()).fold(0.0, f64::max);
    if residual.terms().any(|(_, r)| !r.near_zero(tol * scale)) {
        return Err(Error::FactorizationFailed { terms: residual.num_terms() });
    }
    Ok(FactorizationReport { det, product, lambda, residual })
}

/// Exact factorization of the Jacobian determinant; needs rational roots.
pub fn factorization_check(basis: &InvariantBasis) -> Result<FactorizationReport<Rational>> {
    let rs = basis.root_system();
    let roots = rs
        .positive_roots()
        .exact()
        .ok_or_else(|| Error::DegenerateInput("exact factorization needs rational roots".into()))?;
    let det = chevalley_jacobian(basis).det()?;
    factor(det, root_product(rs.dim(), roots)?, 0.0)
}

/// Float factorization with coefficient tolerance `1e-9` relative to the
/// largest determinant coefficient.
pub fn factorization_check_f64(basis: &InvariantBasis) -> Result<FactorizationReport<f64>> {
    let rs = basis.root_system();
    let det = chevalley_jacobian(basis).det()?.to_f64();
    let roots = rs.positive_roots().to_f64();
    factor(det, root_product(rs.dim(), &roots)?, 1e-9)
}

fn first_columns(jac: &PolyMatrix<Rational>, j: usize) -> PolyMatrix<Rational> {
    let rows: Vec<usize> = (0..jac.rows()).collect();
    let cols: Vec<usize> = (0..j).collect();
    jac.submatrix(&rows, &cols)
}

/// Rank of the first `j` gradient columns at an exact point.
pub fn minor_rank(basis: &InvariantBasis, point: &[Rational], j: usize) -> usize {
    first_columns(&chevalley_jacobian(basis), j).evaluate(point).rank()
}

/// Float rank with relative singular-value tolerance `1e-9`.
pub fn minor_rank_f64(basis: &InvariantBasis, point: &[f64], j: usize) -> usize {
    let jac = first_columns(&chevalley_jacobian(basis), j);
    let cols: Vec<Vec<FPoly>> = (0..j).map(|c| (0..jac.rows()).map(|r| jac.get(r, c).to_f64()).collect()).collect();
    if cols.is_empty() {
        return 0;
    }
    PolyMatrix::from_columns(cols).expect("same shape").evaluate(point).rank(1e-9)
}

/// How rank-deficient points were sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusMode {
    /// Canonical flats; divisibility of minors is established for B.
    FlatsProven,
    /// Canonical flats; type A is covered by an analogous argument.
    FlatsAnalogous,
    /// Every flat of the arrangement, exact.
    ArrangementFlats,
    /// Hyperplanes and general points in floating point only.
    EvidenceOnly,
}

impl fmt::Display for LocusMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocusMode::FlatsProven => "flats (minor divisibility proven)",
            LocusMode::FlatsAnalogous => "flats (type A, analogous argument)",
            LocusMode::ArrangementFlats => "arrangement flats",
            LocusMode::EvidenceOnly => "evidence only (float)",
        })
    }
}

/// A point where the two rank conditions disagreed.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorFailure {
    pub point: Vec<f64>,
    pub rank_first: usize,
    pub rank_full: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinorReport {
    pub j: usize,
    pub mode: LocusMode,
    pub tested_points: usize,
    /// Sampled points where the first `j` columns were rank deficient.
    pub deficient_points: usize,
    /// General points where the full Jacobian was singular.
    pub full_rank_violations: usize,
    pub equivalence_failures: Vec<MinorFailure>,
}

impl fmt::Display for MinorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "j: {}", self.j)?;
        writeln!(f, "mode: {}", self.mode)?;
        writeln!(f, "tested_points: {}", self.tested_points)?;
        writeln!(f, "deficient_points: {}", self.deficient_points)?;
        writeln!(f, "full_rank_violations: {}", self.full_rank_violations)?;
        writeln!(f, "equivalence_failures: {}", self.equivalence_failures.len())?;
        for fail in &self.equivalence_failures {
            writeln!(f, "  point {:?} rank_first {} rank_full {}", fail.point, fail.rank_first, fail.rank_full)?;
        }
        Ok(())
    }
}

fn sample_flats(basis: &InvariantBasis) -> Result<(LocusMode, Vec<Flat>)> {
    let rs = basis.root_system();
    let n = rs.dim();
    let (mode, max_codim) = match rs.family() {
        Family::B => (LocusMode::FlatsProven, n),
        Family::Sym => (LocusMode::FlatsAnalogous, n - 1),
        _ if rs.is_exact() => (LocusMode::ArrangementFlats, n),
        _ => (LocusMode::EvidenceOnly, 1),
    };
    let mut flats = Vec::new();
    for c in 1..=max_codim {
        let batch = match mode {
            LocusMode::FlatsProven | LocusMode::FlatsAnalogous => enumerate_flats(rs.family(), n, c)?,
            LocusMode::ArrangementFlats => arrangement_flats(rs, c)?,
            LocusMode::EvidenceOnly => {
                (0..rs.num_positive_roots()).map(|i| crate::rootsys::hyperplane_flat(rs, i)).collect::<Result<_>>()?
            }
        };
        flats.extend(batch.into_iter().filter(|f| f.dim() > 0));
    }
    Ok((mode, flats))
}

fn small_rational(rng: &mut impl Rng) -> Rational {
    let num: i64 = rng.random_range(-9..=9);
    let den: i64 = rng.random_range(1..=4);
    Rational::new(num.into(), den.into())
}

enum Sample {
    Exact(Vec<Rational>, bool),
    Float(Vec<f64>, bool),
}

/// Samples points on the flats (and general points) and checks
/// `rank(∇η_1..∇η_n) <= j-1  <=>  rank(∇η_1..∇η_j) <= j-1` at each.
///
/// Sample `i` lies on flat `i mod (flats + 1)`; the extra slot draws a
/// random point of the whole space.
pub fn minor_factorization_check(
    basis: &InvariantBasis,
    j: usize,
    n_samples: usize,
    seed: u64,
    schedule: Schedule,
) -> Result<MinorReport> {
    let n = basis.rank();
    if j == 0 || j > n {
        return Err(Error::DegenerateInput(format!("j must lie in 1..={n}")));
    }
    let (mode, flats) = sample_flats(basis)?;
    let jac = chevalley_jacobian(basis);
    let jac_f = float_matrix(&jac);
    let slots = flats.len() + 1;
    let draw = |i: usize| -> Sample {
        let mut rng = item_rng(seed, i);
        let slot = i % slots;
        let general = slot == flats.len();
        let basis_m = if general { FlatBasis::Exact(Matrix::identity(n)) } else { flats[slot].basis().clone() };
        match basis_m {
            FlatBasis::Exact(b) => {
                let u: Vec<Rational> = (0..b.cols()).map(|_| small_rational(&mut rng)).collect();
                Sample::Exact(b.apply(&u), general)
            }
            FlatBasis::Float(b) => {
                let u: Vec<f64> = (0..b.cols()).map(|_| rng.random_range(-1.0..1.0)).collect();
                Sample::Float(b.apply(&u), general)
            }
        }
    };
    let ranks = |i: usize| -> (Vec<f64>, bool, usize, usize) {
        match draw(i) {
            Sample::Exact(x, general) => {
                let m = jac.evaluate(&x);
                let first = take_columns(&m, j).rank();
                (x.iter().map(Scalar::to_f64).collect(), general, first, m.rank())
            }
            Sample::Float(x, general) => {
                let m = jac_f.evaluate(&x);
                let first = take_columns(&m, j).rank(1e-9);
                let full = m.rank(1e-9);
                (x, general, first, full)
            }
        }
    };
    let results = map_indexed(schedule, n_samples, ranks);
    let mut report = MinorReport {
        j,
        mode,
        tested_points: n_samples,
        deficient_points: 0,
        full_rank_violations: 0,
        equivalence_failures: Vec::new(),
    };
    for (point, general, first, full) in results {
        let general = general && basis.root_system().is_general_f64(&point);
        if general && full < n {
            report.full_rank_violations += 1;
        }
        if first < j {
            report.deficient_points += 1;
        }
        if (first < j) != (full < j) {
            report.equivalence_failures.push(MinorFailure { point, rank_first: first, rank_full: full });
        }
    }
    Ok(report)
}

fn float_matrix(m: &PolyMatrix<Rational>) -> PolyMatrix<f64> {
    let cols: Vec<Vec<FPoly>> = (0..m.cols()).map(|c| (0..m.rows()).map(|r| m.get(r, c).to_f64()).collect()).collect();
    PolyMatrix::from_columns(cols).expect("same shape")
}

fn take_columns<C: Scalar>(m: &Matrix<C>, j: usize) -> Matrix<C> {
    let cols: Vec<Vec<C>> = (0..j).map(|c| m.column(c)).collect();
    Matrix::from_columns(m.rows(), &cols).expect("consistent shape")
}

/// Outcome of the D3 rank-locus check.
#[derive(Clone, Debug, PartialEq)]
pub struct D3LocusReport {
    pub families: usize,
    pub minors_checked: usize,
    pub generic_point: Vec<Rational>,
    /// First nonzero 2x2 minor of the first two columns at the generic point.
    pub generic_minor: Rational,
    pub generic_minor_rows: Vec<usize>,
}

impl fmt::Display for D3LocusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "families: {}", self.families)?;
        writeln!(f, "minors_checked: {}", self.minors_checked)?;
        let p: Vec<String> = self.generic_point.iter().map(format_rational).collect();
        writeln!(f, "generic_point: {}", p.join(" "))?;
        writeln!(f, "generic_minor_rows: {:?}", self.generic_minor_rows)?;
        writeln!(f, "generic_minor: {}", format_rational(&self.generic_minor))
    }
}

/// The seven lines through the origin on which every 2x2 minor of the D3
/// Chevalley Jacobian vanishes.
pub fn d3_locus_directions() -> Vec<[i64; 3]> {
    vec![[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]]
}

/// Substitutes each parametric line `t·v` into every 2x2 minor of the
/// first two columns and of the full D3 Jacobian, requiring the zero
/// polynomial in `t`; then requires a nonzero minor of the first two
/// columns at `(1, 2, 3)`.
pub fn d3_locus_check() -> Result<D3LocusReport> {
    let basis = basic_invariants(&build_root_system(Family::D, 3)?)?;
    let jac = chevalley_jacobian(&basis);
    let first_two = first_columns(&jac, 2);
    let minors_first = first_two.minors(2)?;
    let minors_full = jac.minors(2)?;
    let mut checked = 0;
    let directions = d3_locus_directions();
    for v in &directions {
        let line = Matrix::from_rows(v.iter().map(|&c| vec![q(c)]).collect())?;
        for (rows, cols, m) in minors_first.iter().chain(&minors_full) {
            let r = m.substitute_linear(&line)?;
            checked += 1;
            if !r.is_zero() {
                return Err(Error::LocusMismatch(format!(
                    "minor rows {rows:?} cols {cols:?} on t*{v:?} is {r}, not 0"
                )));
            }
        }
    }
    let point = vec![q(1), q(2), q(3)];
    let (rows, _, m) = minors_first
        .iter()
        .find(|(_, _, m)| !m.evaluate(&point).is_zero())
        .ok_or_else(|| Error::LocusMismatch("every minor vanishes at (1,2,3)".into()))?;
    Ok(D3LocusReport {
        families: directions.len(),
        minors_checked: checked,
        generic_minor: m.evaluate(&point),
        generic_point: point,
        generic_minor_rows: rows.clone(),
    })
}

/// Rows of the Jacobian as text, for reports.
pub fn format_jacobian(jac: &PolyMatrix<Rational>) -> String {
    let mut out = String::new();
    for i in 0..jac.rows() {
        let row: Vec<String> = (0..jac.cols()).map(|j| jac.get(i, j).to_string()).collect();
        let _ = writeln!(out, "[{}]", row.join(", "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    fn basis(f: Family, n: usize) -> InvariantBasis {
        basic_invariants(&build_root_system(f, n).unwrap()).unwrap()
    }

    fn p(n: usize, terms: &[(i64, &[u32])]) -> QPoly {
        QPoly::from_terms(n, terms.iter().map(|&(c, e)| (q(c), e.to_vec()))).unwrap()
    }

    #[test]
    fn small_jacobians() {
        let j = chevalley_jacobian(&basis(Family::B, 2));
        assert_eq!(j.get(0, 0), &p(2, &[(2, &[1, 0])]));
        assert_eq!(j.get(1, 1), &p(2, &[(4, &[0, 3])]));
        let s2 = chevalley_jacobian(&basis(Family::Sym, 2));
        assert_eq!(s2.get(0, 0), &QPoly::one(2));
        assert_eq!(s2.get(1, 1), &p(2, &[(2, &[0, 1])]));
        let d3 = chevalley_jacobian(&basis(Family::D, 3));
        assert_eq!(d3.get(0, 0), &p(3, &[(2, &[1, 0, 0])]));
        assert_eq!(d3.get(0, 1), &p(3, &[(1, &[0, 1, 1])]));
        assert_eq!(d3.get(0, 2), &p(3, &[(4, &[3, 0, 0])]));
    }

    #[test]
    fn lambdas() {
        let b2 = factorization_check(&basis(Family::B, 2)).unwrap();
        assert_eq!(b2.lambda, q(-8));
        assert_eq!(b2.det, p(2, &[(8, &[1, 3]), (-8, &[3, 1])]));
        assert!(b2.residual.is_zero());
        assert_eq!(factorization_check(&basis(Family::Sym, 3)).unwrap().lambda, q(-6));
        let s2 = factorization_check(&basis(Family::Sym, 2)).unwrap();
        assert_eq!(s2.lambda, q(-2));
        assert_eq!(s2.product, p(2, &[(1, &[1, 0]), (-1, &[0, 1])]));
    }

    #[test]
    fn float_factorization_for_odd_dihedral() {
        let r = factorization_check_f64(&basis(Family::I2, 5)).unwrap();
        assert!(r.lambda.abs() > 1e-6);
    }

    #[test]
    fn ranks_on_d3_locus() {
        let b = basis(Family::D, 3);
        assert_eq!(minor_rank(&b, &[q(1), q(1), q(1)], 3), 1);
        assert_eq!(minor_rank(&b, &[q(1), q(0), q(0)], 3), 1);
        assert_eq!(minor_rank(&basis(Family::B, 2), &[q(1), q(2)], 2), 2);
        assert_eq!(minor_rank_f64(&b, &[1.0, 1.0, 1.0], 3), 1);
    }

    #[test]
    fn d3_locus() {
        let r = d3_locus_check().unwrap();
        assert_eq!(r.families, 7);
        assert_eq!(r.generic_minor_rows, vec![0, 1]);
        assert_eq!(r.generic_minor, q(-18));
        assert_eq!(r.generic_minor, q(2) * (q(3) * (q(1) - q(4))));
    }

    #[test]
    fn minor_check_b2() {
        let b = basis(Family::B, 2);
        for j in 1..=2 {
            let r = minor_factorization_check(&b, j, 60, 1, Schedule::Sequential).unwrap();
            assert!(r.equivalence_failures.is_empty(), "{r}");
            assert_eq!(r.full_rank_violations, 0);
        }
        assert!(minor_factorization_check(&b, 0, 10, 1, Schedule::Sequential).is_err());
    }

    #[test]
    fn rational_sampling_is_bounded() {
        let mut rng = item_rng(0, 0);
        for _ in 0..50 {
            let r = small_rational(&mut rng);
            assert!(r >= qf(-9, 1) && r <= qf(9, 1));
        }
    }
}
