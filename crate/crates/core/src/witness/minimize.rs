//! Multistart projected gradient descent on the unit sphere of a subspace.

use std::cmp::Ordering;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_f64, Matrix};
use crate::parallel::{item_rng, map_indexed, Schedule};
use crate::polyalg::{CompiledPoly, FPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct MultistartParams {
    /// Starts per subspace dimension.
    pub starts_per_dim: usize,
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    pub seed: u64,
    pub schedule: Schedule,
}

impl Default for MultistartParams {
    fn default() -> Self {
        MultistartParams {
            starts_per_dim: 64,
            max_iter: 500,
            grad_tol: 1e-10,
            armijo: 1e-4,
            seed: 0,
            schedule: Schedule::default(),
        }
    }
}

impl MultistartParams {
    pub fn with_seed(seed: u64) -> Self {
        MultistartParams { seed, ..Self::default() }
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    /// Same parameters with a seed derived from `(self.seed, salt)`.
    pub fn derive(&self, salt: u64) -> Self {
        let seed = self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ 0x94D0_49BB_1331_11EB);
        MultistartParams { seed, ..self.clone() }
    }
}

/// Best value of `F(Bu) / |Bu|^{2d}` and the ambient unit point `Bu/|Bu|`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceMin {
    pub value: f64,
    pub point: Vec<f64>,
    /// Local minima from every start, best first.
    pub local: Vec<(f64, Vec<f64>)>,
}

struct Quotient<'a> {
    r: CompiledPoly,
    g: &'a [f64],
    k: usize,
    half_deg: i32,
}

impl Quotient<'_> {
    fn eval(&self, u: &[f64], grad: &mut [f64]) -> f64 {
        let r = self.r.value_grad(u, grad);
        let mut gu = vec![0.0; self.k];
        for i in 0..self.k {
            gu[i] = (0..self.k).map(|j| self.g[i * self.k + j] * u[j]).sum();
        }
        let n = dot(u, &gu);
        let nd = n.powi(self.half_deg);
        let q = r / nd;
        let coef = f64::from(self.half_deg) * q / n * 2.0;
        for i in 0..self.k {
            grad[i] = grad[i] / nd - coef * gu[i];
        }
        q
    }

    fn value(&self, u: &[f64]) -> f64 {
        let mut scratch = vec![0.0; self.k];
        self.eval(u, &mut scratch)
    }
}

fn project(g: &mut [f64], u: &[f64]) {
    let c = dot(g, u);
    for (gi, ui) in g.iter_mut().zip(u) {
        *gi -= c * ui;
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm_f64(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

fn descend(q: &Quotient<'_>, mut u: Vec<f64>, params: &MultistartParams) -> (f64, Vec<f64>) {
    let k = q.k;
    let mut g = vec![0.0; k];
    let mut val = q.eval(&u, &mut g);
    project(&mut g, &u);
    let mut alpha = 1.0 / norm_f64(&g).max(1.0);
    let mut g_new = vec![0.0; k];
    for _ in 0..params.max_iter {
        let gn2 = dot(&g, &g);
        if gn2.sqrt() < params.grad_tol || !val.is_finite() {
            break;
        }
        let mut accepted = None;
        for _ in 0..60 {
            let cand = normalized(u.iter().zip(&g).map(|(a, b)| a - alpha * b).collect());
            let v = q.eval(&cand, &mut g_new);
            if v <= val - params.armijo * alpha * gn2 {
                accepted = Some((cand, v));
                break;
            }
            alpha *= 0.5;
        }
        let Some((u_new, v_new)) = accepted else { break };
        project(&mut g_new, &u_new);
        let s: Vec<f64> = u_new.iter().zip(&u).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        alpha = if sy > 0.0 { (dot(&s, &s) / sy).clamp(1e-12, 1e12) } else { (alpha * 2.0).min(1e12) };
        u = u_new;
        val = v_new;
        std::mem::swap(&mut g, &mut g_new);
    }
    (val, u)
}

/// Orders by value, then lexicographically by point.
pub fn cmp_candidates(a: &(f64, Vec<f64>), b: &(f64, Vec<f64>)) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| {
        a.1.iter().zip(&b.1).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    })
}

/// Minimizes `F(Bu) / |Bu|^{deg F}` over unit `u` by seeded multistart
/// projected gradient descent. Deterministic given the seed, independent
/// of the schedule.
pub fn min_on_subspace(f: &FPoly, basis: &Matrix<f64>, params: &MultistartParams) -> Result<SubspaceMin> {
    let k = basis.cols();
    if k == 0 {
        return Err(Error::DegenerateFlat);
    }
    if basis.rows() != f.nvars() {
        return Err(Error::ShapeError("flat basis does not match the form".into()));
    }
    let deg = f.homogeneous_degree().unwrap_or(0);
    if f.is_zero() {
        let point = normalized(basis.column(0));
        return Ok(SubspaceMin { value: 0.0, point: point.clone(), local: vec![(0.0, point)] });
    }
    if f.homogeneous_degree().is_none() || deg % 2 == 1 {
        return Err(Error::DegenerateInput("minimization needs a form of even degree".into()));
    }
    let restricted = f.substitute_linear(basis)?;
    let gram = basis.transpose().matmul(basis)?;
    let q = Quotient { r: CompiledPoly::new(&restricted), g: gram.data(), k, half_deg: (deg / 2) as i32 };
    let ambient = |u: &[f64]| normalized(basis.apply(u));
    if k == 1 {
        let v = q.value(&[1.0]);
        let plus = ambient(&[1.0]);
        let minus: Vec<f64> = plus.iter().map(|x| -x).collect();
        let mut local = vec![(v, plus), (v, minus)];
        local.sort_by(cmp_candidates);
        return Ok(SubspaceMin { value: v, point: local[0].1.clone(), local });
    }
    let starts = params.starts_per_dim * k;
    let mut local = map_indexed(params.schedule, starts, |i| {
        let mut rng = item_rng(params.seed, i);
        let u0 = normalized((0..k).map(|_| StandardNormal.sample(&mut rng)).collect());
        let (v, u) = descend(&q, u0, params);
        (v, ambient(&u))
    });
    local.retain(|(v, _)| v.is_finite());
    local.sort_by(cmp_candidates);
    let (value, point) = local.first().cloned().ok_or_else(|| Error::SearchFailed("no finite start".into()))?;
    Ok(SubspaceMin { value, point, local })
}

/// Whole-space minimum on the unit sphere.
pub fn min_on_sphere(f: &FPoly, params: &MultistartParams) -> Result<SubspaceMin> {
    min_on_subspace(f, &Matrix::identity(f.nvars()), params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(n: usize, terms: &[(f64, &[u32])]) -> FPoly {
        FPoly::from_terms(n, terms.iter().map(|&(c, e)| (c, e.to_vec()))).unwrap()
    }

    #[test]
    fn quartic_on_circle() {
        let f = fp(2, &[(1.0, &[4, 0]), (1.0, &[0, 4])]);
        let m = min_on_sphere(&f, &MultistartParams::default()).unwrap();
        assert!((m.value - 0.5).abs() < 1e-12);
        assert!((m.point[0].abs() - m.point[1].abs()).abs() < 1e-6);
    }

    #[test]
    fn constant_on_sphere() {
        let f = FPoly::norm_sq(2).pow(2);
        let m = min_on_sphere(&f, &MultistartParams::default()).unwrap();
        assert!((m.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn restricted_to_line() {
        let f = fp(2, &[(1.0, &[4, 0]), (1.0, &[0, 4])]);
        let b = Matrix::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(min_on_subspace(&f, &b, &MultistartParams::default()).unwrap().value, 1.0);
        // Non-orthonormal basis: the quotient is metric free.
        let b = Matrix::from_rows(vec![vec![3.0], vec![3.0]]).unwrap();
        assert!((min_on_subspace(&f, &b, &MultistartParams::default()).unwrap().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_flat_and_odd_degree() {
        let f = fp(2, &[(1.0, &[2, 0])]);
        let b = Matrix::<f64>::zeros(2, 0);
        assert_eq!(min_on_subspace(&f, &b, &MultistartParams::default()), Err(Error::DegenerateFlat));
        assert!(min_on_sphere(&fp(2, &[(1.0, &[3, 0])]), &MultistartParams::default()).is_err());
    }

    #[test]
    fn schedules_agree_bitwise() {
        let f = fp(3, &[(1.0, &[4, 0, 0]), (-2.0, &[2, 1, 1]), (0.5, &[0, 2, 2]), (1.0, &[0, 0, 4])]);
        let p = MultistartParams::with_seed(11);
        let a = min_on_sphere(&f, &p.clone().with_schedule(Schedule::Sequential)).unwrap();
        let b = min_on_sphere(&f, &p.with_schedule(Schedule::Parallel)).unwrap();
        assert_eq!(a, b);
    }
}
