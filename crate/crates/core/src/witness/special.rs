//! Minimizes `η_n` on the curve `η_i = η_i(y), i < n`. At a minimizer the
//! gradients are dependent, so the Jacobian is singular and the point lies
//! on a root hyperplane.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use super::{cmp_candidates, MultistartParams};
use crate::error::{Error, Result};
use crate::invariants::InvariantBasis;
use crate::jacobian::chevalley_jacobian;
use crate::linalg::norm_f64;
use crate::parallel::{item_rng, map_indexed};
use crate::polyalg::{CompiledPoly, FPoly};

const PENALTY_WEIGHTS: [f64; 7] = [1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8];

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialPoint {
    pub x: Vec<f64>,
    pub eta_n: f64,
    /// Euclidean norm of `(η_i(x) - η_i(y))_{i<n}`.
    pub residual: f64,
    pub det_jacobian: f64,
    /// `min |<x, α>| / (|x| |α|)` over the roots.
    pub angular_distance: f64,
    pub accepted_starts: usize,
}

impl fmt::Display for SpecialPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x: Vec<String> = self.x.iter().map(|v| format!("{v:.12e}")).collect();
        writeln!(f, "x: {}", x.join(" "))?;
        writeln!(f, "eta_n: {:.12e}", self.eta_n)?;
        writeln!(f, "residual: {:.3e}", self.residual)?;
        writeln!(f, "det_jacobian: {:.3e}", self.det_jacobian)?;
        writeln!(f, "angular_distance: {:.3e}", self.angular_distance)?;
        writeln!(f, "accepted_starts: {}", self.accepted_starts)
    }
}

/// Value, gradient and Hessian of a polynomial, compiled.
struct Second {
    f: CompiledPoly,
    grad: Vec<CompiledPoly>,
    hess: Vec<CompiledPoly>,
    n: usize,
}

impl Second {
    fn new(p: &FPoly) -> Second {
        let n = p.nvars();
        let g = p.gradient();
        let hess = g.iter().flat_map(|gi| gi.gradient()).map(|h| h.compile()).collect();
        Second { f: p.compile(), grad: g.iter().map(FPoly::compile).collect(), hess, n }
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.f.value(x)
    }

    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.n, self.grad.iter().map(|g| g.value(x)))
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_iterator(self.n, self.n, self.hess.iter().map(|h| h.value(x)))
    }
}

fn penalty(objective: &FPoly, constraints: &[FPoly], w: f64) -> Result<FPoly> {
    let mut p = objective.clone();
    for g in constraints {
        p = p.add(&g.pow(2).scale(&w))?;
    }
    Ok(p)
}

/// Damped Newton with Levenberg shifts and Armijo backtracking.
fn newton_minimize(p: &Second, mut x: DVector<f64>) -> DVector<f64> {
    let n = x.len();
    let mut val = p.value(x.as_slice());
    for _ in 0..200 {
        let g = p.gradient(x.as_slice());
        if g.norm() < 1e-14 * (1.0 + val.abs()) {
            break;
        }
        let h = p.hessian(x.as_slice());
        let scale = h.amax().max(1e-300);
        let mut shift = 0.0;
        let dir = loop {
            let shifted = &h + DMatrix::identity(n, n) * shift;
            if let Some(ch) = shifted.cholesky() {
                break ch.solve(&(-&g));
            }
            shift = if shift == 0.0 { 1e-10 * scale } else { shift * 10.0 };
        };
        let slope = g.dot(&dir);
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let cand = &x + &dir * t;
            let v = p.value(cand.as_slice());
            if v <= val + 1e-4 * t * slope {
                moved = (cand.clone() - &x).norm() > 0.0;
                x = cand;
                val = v;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    x
}

/// Newton on the Lagrange system `∇h + Σ λ_i ∇g_i = 0, g_i = 0`.
fn kkt_polish(h: &Second, gs: &[Second], x0: &DVector<f64>, lambda0: DVector<f64>) -> Option<DVector<f64>> {
    let n = x0.len();
    let m = gs.len();
    let mut x = x0.clone();
    let mut lambda = lambda0;
    let residual = |x: &DVector<f64>, lambda: &DVector<f64>| {
        let mut r = DVector::zeros(n + m);
        let mut top = h.gradient(x.as_slice());
        for (i, g) in gs.iter().enumerate() {
            top += g.gradient(x.as_slice()) * lambda[i];
            r[n + i] = g.value(x.as_slice());
        }
        r.rows_mut(0, n).copy_from(&top);
        r
    };
    let mut r = residual(&x, &lambda);
    for _ in 0..30 {
        if r.norm() < 1e-14 {
            break;
        }
        let mut jac = DMatrix::zeros(n + m, n + m);
        let mut top = h.hessian(x.as_slice());
        for (i, g) in gs.iter().enumerate() {
            top += g.hessian(x.as_slice()) * lambda[i];
            let col = g.gradient(x.as_slice());
            jac.view_mut((0, n + i), (n, 1)).copy_from(&col);
            jac.view_mut((n + i, 0), (1, n)).copy_from(&col.transpose());
        }
        jac.view_mut((0, 0), (n, n)).copy_from(&top);
        let step = jac.lu().solve(&(-&r))?;
        let nx = &x + step.rows(0, n);
        let nl = &lambda + step.rows(n, m);
        let nr = residual(&nx, &nl);
        if !(nr.norm() < r.norm()) {
            break;
        }
        x = nx;
        lambda = nl;
        r = nr;
    }
    Some(x)
}

/// Finds a point on the curve through `y` that lies on a root hyperplane,
/// by minimizing `η_n` on the curve. Needs `|x|^2` in `R[η_1..η_{n-1}]`.
pub fn special_point_on_curve(basis: &InvariantBasis, y: &[f64], params: &MultistartParams) -> Result<SpecialPoint> {
    let n = basis.rank();
    if y.len() != n {
        return Err(Error::ShapeError(format!("point has {} coordinates, expected {n}", y.len())));
    }
    let ny = norm_f64(y);
    if ny == 0.0 {
        return Err(Error::DegenerateInput("y is zero".into()));
    }
    if !basis.norm_in_first(n - 1) {
        return Err(Error::HypothesisViolated(format!("|x|^2 is not a polynomial in the first {} invariants", n - 1)));
    }
    let etas: Vec<FPoly> = basis.etas().iter().map(|e| e.to_f64()).collect();
    let targets: Vec<f64> = etas.iter().map(|e| e.evaluate(y)).collect();
    let constraints: Vec<FPoly> = etas[..n - 1]
        .iter()
        .zip(&targets)
        .map(|(e, &c)| e.sub(&FPoly::constant(n, c)))
        .collect::<Result<_>>()?;
    let objective = etas[n - 1].clone();
    let stages: Vec<Second> =
        PENALTY_WEIGHTS.iter().map(|&w| penalty(&objective, &constraints, w).map(|p| Second::new(&p))).collect::<Result<_>>()?;
    let h = Second::new(&objective);
    let gs: Vec<Second> = constraints.iter().map(Second::new).collect();
    let det = chevalley_jacobian(basis).det()?.to_f64().compile();
    let rs = basis.root_system();
    let det_scale = ny.powi(det_degree(basis)).max(1.0);

    let starts = 8 * n;
    let runs = map_indexed(params.schedule, starts, |i| {
        let mut rng = item_rng(params.seed, i);
        let dir: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let s = ny / norm_f64(&dir);
        let mut x = DVector::from_iterator(n, dir.into_iter().map(|v| v * s));
        for stage in &stages {
            x = newton_minimize(stage, x);
        }
        let w = *PENALTY_WEIGHTS.last().expect("nonempty schedule");
        let lambda = DVector::from_iterator(n - 1, gs.iter().map(|g| 2.0 * w * g.value(x.as_slice())));
        let polished = kkt_polish(&h, &gs, &x, lambda).unwrap_or_else(|| x.clone());
        let pick = if constraint_residual(&gs, &polished) <= constraint_residual(&gs, &x) { polished } else { x };
        pick.as_slice().to_vec()
    });

    let mut accepted: Vec<(f64, Vec<f64>)> = Vec::new();
    for x in runs {
        let xv = DVector::from_column_slice(&x);
        let residual = constraint_residual(&gs, &xv);
        if !(residual <= 1e-6 * ny) {
            continue;
        }
        if det.value(&x).abs() > 1e-6 * det_scale || rs.min_angular_distance(&x) > 1e-5 {
            continue;
        }
        accepted.push((h.value(&x), x));
    }
    accepted.sort_by(cmp_candidates);
    let (eta_n, x) = accepted.first().cloned().ok_or_else(|| Error::SearchFailed("no start reached a root hyperplane on the curve".into()))?;
    let xv = DVector::from_column_slice(&x);
    Ok(SpecialPoint {
        residual: constraint_residual(&gs, &xv),
        det_jacobian: det.value(&x),
        angular_distance: rs.min_angular_distance(&x),
        accepted_starts: accepted.len(),
        eta_n,
        x,
    })
}

fn det_degree(basis: &InvariantBasis) -> i32 {
    basis.degrees().iter().map(|&d| d as i32 - 1).sum()
}

fn constraint_residual(gs: &[Second], x: &DVector<f64>) -> f64 {
    gs.iter().map(|g| g.value(x.as_slice()).powi(2)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::basic_invariants;
    use crate::rootsys::{build_root_system, Family};

    fn basis(f: Family, n: usize) -> InvariantBasis {
        basic_invariants(&build_root_system(f, n).unwrap()).unwrap()
    }

    #[test]
    fn b2_lands_on_diagonal() {
        let s = 5f64.sqrt();
        let p = special_point_on_curve(&basis(Family::B, 2), &[1.0 / s, 2.0 / s], &MultistartParams::default()).unwrap();
        assert!((p.x[0].abs() - p.x[1].abs()).abs() < 1e-8, "{p}");
        assert!((p.eta_n - 0.5).abs() < 1e-10);
    }

    #[test]
    fn sym3_has_equal_components() {
        let s = 14f64.sqrt();
        let y = [1.0 / s, 2.0 / s, 3.0 / s];
        let p = special_point_on_curve(&basis(Family::Sym, 3), &y, &MultistartParams::default()).unwrap();
        let x = &p.x;
        let gap = [(x[0] - x[1]).abs(), (x[0] - x[2]).abs(), (x[1] - x[2]).abs()].into_iter().fold(f64::INFINITY, f64::min);
        assert!(gap < 1e-5, "{p}");
        assert!(p.residual <= 1e-6);
    }

    #[test]
    fn requires_norm_condition() {
        let b = basis(Family::Sym, 2);
        assert!(matches!(special_point_on_curve(&b, &[1.0, 2.0], &MultistartParams::default()), Err(Error::HypothesisViolated(_))));
    }
}
