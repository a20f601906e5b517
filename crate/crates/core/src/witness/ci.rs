use super::{min_on_sphere, Classification, FlatOutcome, MultistartParams, Verdict, NEG_TOL};
use crate::error::{Error, Result};
use crate::invariants::express_in;
use crate::polyalg::{PolyMatrix, QPoly};

/// Points whose scaled minor sum is at most this count as on the variety.
const VARIETY_TOL: f64 = 1e-8;

/// Tests `F = A(g_1..g_j) + g_{j+1} B(g_1..g_j)` on sampled real points of
/// the variety cut out by the maximal minors of `(∇g_1, ..., ∇g_{j+1})`.
///
/// Sampling can miss components, so a nonnegative verdict is heuristic.
pub fn ci_check(g: &[QPoly], j: usize, f: &QPoly, params: &MultistartParams) -> Result<Verdict> {
    if j == 0 {
        return Err(Error::DegenerateInput("j must be at least 1".into()));
    }
    let n = f.nvars();
    if g.len() < j + 1 || j + 1 > n {
        return Err(Error::DegenerateInput(format!("need j + 1 <= min(#g, n), got j = {j}")));
    }
    if g.iter().any(|p| p.nvars() != n || p.homogeneous_degree().is_none_or(|d| d == 0)) {
        return Err(Error::DegenerateInput("g must be nonconstant forms in the variables of F".into()));
    }
    if express_in(&QPoly::norm_sq(n), &g[..j]).is_err() {
        return Ok(Verdict::hypothesis_violated(format!("|x|^2 is not a polynomial in g_1..g_{j}")));
    }
    let h = express_in(f, &g[..=j]).map_err(|_| Error::NotInSparseForm)?;
    if h.degree_in(j) > 1 {
        return Err(Error::NotInSparseForm);
    }
    let cols: Vec<Vec<QPoly>> = g[..=j].iter().map(QPoly::gradient).collect();
    let m = PolyMatrix::from_columns(cols)?;
    let mut sum_sq = QPoly::zero(n);
    for (_, _, minor) in m.minors(j + 1)? {
        sum_sq = sum_sq.add(&minor.pow(2))?;
    }
    let ff = f.to_f64();
    let compiled = ff.compile();
    let points: Vec<Vec<f64>> = if sum_sq.is_zero() {
        vec![min_on_sphere(&ff, params)?.point]
    } else {
        min_on_sphere(&sum_sq.to_f64(), params)?
            .local
            .into_iter()
            .filter(|(v, _)| *v <= VARIETY_TOL)
            .map(|(_, p)| p)
            .collect()
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for p in &points {
        let v = compiled.value(p);
        if best.as_ref().is_none_or(|b| super::cmp_candidates(&(v, p.clone()), b).is_lt()) {
            best = Some((v, p.clone()));
        }
    }
    let (min_value, argmin) = best.unwrap_or((f64::INFINITY, Vec::new()));
    let classification =
        if min_value < -NEG_TOL { Classification::Negative } else { Classification::NonnegativeWithinTol };
    Ok(Verdict {
        classification,
        min_value,
        argmin: argmin.clone(),
        tolerance: NEG_TOL,
        flats: vec![FlatOutcome {
            label: format!("minors variety sample ({} points)", points.len()),
            dim: n,
            min_value,
            argmin,
            exact_nonneg: None,
        }],
        exact: false,
        heuristic: true,
        reason: None,
    })
}
