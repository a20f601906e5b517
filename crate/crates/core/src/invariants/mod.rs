//! Basic invariants, the degree table, the Chevalley map and exact
//! decomposition of invariant forms in an invariant basis.

mod table;

pub use table::{degree_table, sym_ambient_row, DegreeRow, TableFamily};

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polyalg::{Monomial, QPoly};
use crate::rootsys::{reflection, Family, RootSystem, VectorList};
use crate::scalar::{Rational, Scalar, FLOAT_TOL};

/// Reflection generators of `W` in the domain of the root list.
#[derive(Clone, Debug)]
pub enum Generators {
    Exact(Vec<Matrix<Rational>>),
    Float(Vec<Matrix<f64>>),
}

impl Generators {
    pub fn of(rs: &RootSystem) -> Generators {
        match rs.positive_roots() {
            VectorList::Exact(r) => {
                Generators::Exact(r.iter().map(|a| reflection(a).expect("roots are nonzero").matrix).collect())
            }
            VectorList::Float(r) => {
                Generators::Float(r.iter().map(|a| reflection(a).expect("roots are nonzero").matrix).collect())
            }
        }
    }

    /// Exact check for rational generators, `1e-9` coefficient tolerance otherwise.
    pub fn fixes(&self, f: &QPoly) -> bool {
        match self {
            Generators::Exact(g) => f.is_invariant(g, 0.0),
            Generators::Float(g) => f.to_f64().is_invariant(g, FLOAT_TOL),
        }
    }

    pub fn to_f64(&self) -> Vec<Matrix<f64>> {
        match self {
            Generators::Exact(g) => g.iter().map(Matrix::to_f64).collect(),
            Generators::Float(g) => g.clone(),
        }
    }
}

/// Basic invariants `η_1 .. η_n` of a reflection group, sorted by degree.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    rs: RootSystem,
    etas: Vec<QPoly>,
    degrees: Vec<u32>,
    generators: Generators,
    /// Smallest `j` with `|x|^2` in `R[η_1..η_j]`.
    norm_index: Option<usize>,
}

impl InvariantBasis {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn etas(&self) -> &[QPoly] {
        &self.etas
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.etas.len()
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    /// Smallest `j` (1-based) such that `|x|^2` is a polynomial in the
    /// first `j` invariants.
    pub fn norm_index(&self) -> Option<usize> {
        self.norm_index
    }

    /// `|x|^2` lies in `R[η_1..η_j]`.
    pub fn norm_in_first(&self, j: usize) -> bool {
        self.norm_index.is_some_and(|k| k <= j)
    }

    pub fn max_degree(&self) -> u32 {
        *self.degrees.last().expect("nonempty basis")
    }

    /// Smallest and largest odd degree, `(1, 1)` when every degree is even.
    pub fn odd_extremes(&self) -> (u32, u32) {
        table::odd_extremes(&self.degrees)
    }

    pub fn is_invariant(&self, f: &QPoly) -> bool {
        self.generators.fixes(f)
    }

    /// User-supplied invariants for any root system.
    pub fn custom(rs: RootSystem, etas: Vec<QPoly>) -> Result<InvariantBasis> {
        let n = rs.dim();
        if etas.len() != n {
            return Err(Error::ShapeError(format!("need {n} invariants, got {}", etas.len())));
        }
        let mut keyed = Vec::with_capacity(n);
        for e in etas {
            if e.nvars() != n {
                return Err(Error::ShapeError("invariant has the wrong number of variables".into()));
            }
            match e.homogeneous_degree() {
                Some(d) if d > 0 => keyed.push((d, e)),
                _ => return Err(Error::DegenerateInput("invariants must be nonconstant forms".into())),
            }
        }
        keyed.sort_by_key(|(d, _)| *d);
        let (degrees, etas): (Vec<u32>, Vec<QPoly>) = keyed.into_iter().unzip();
        let generators = Generators::of(&rs);
        if !etas.iter().all(|e| generators.fixes(e)) {
            return Err(Error::NotInvariant);
        }
        let norm = QPoly::norm_sq(n);
        let norm_index = (1..=n).find(|&j| express_in(&norm, &etas[..j]).is_ok());
        Ok(InvariantBasis { rs, etas, degrees, generators, norm_index })
    }
}

fn power_sum(n: usize, k: u32) -> QPoly {
    let mut p = QPoly::zero(n);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = k;
        p.add_term(Monomial::new(e), Rational::one());
    }
    p
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}

/// `Re((x + i y)^m)`.
fn re_power(m: u32) -> QPoly {
    let mut p = QPoly::zero(2);
    for k in (0..=m).step_by(2) {
        let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
        p.add_term(Monomial::new(vec![m - k, k]), Rational::from_i64(sign * binomial(m, k)));
    }
    p
}

/// Canonical basic invariants: power sums for Sym, even power sums for B,
/// even power sums and `x_1...x_n` for D, `x^2+y^2` and `Re((x+iy)^m)` for I2.
pub fn basic_invariants(rs: &RootSystem) -> Result<InvariantBasis> {
    let n = rs.dim();
    let etas = match rs.family() {
        Family::Sym => (1..=n as u32).map(|k| power_sum(n, k)).collect(),
        Family::B => (1..=n as u32).map(|k| power_sum(n, 2 * k)).collect(),
        Family::D => {
            let mut v: Vec<QPoly> = (1..n as u32).map(|k| power_sum(n, 2 * k)).collect();
            v.push(QPoly::monomial(Rational::one(), vec![1; n]));
            v
        }
        Family::I2 => vec![QPoly::norm_sq(2), re_power(rs.param() as u32)],
        Family::Custom => return Err(Error::NoCanonicalInvariants(rs.label())),
    };
    InvariantBasis::custom(rs.clone(), etas)
}

/// `(η_1(x), ..., η_n(x))`.
pub fn chevalley_eval<C: Scalar>(basis: &InvariantBasis, point: &[C]) -> Vec<C> {
    basis.etas.iter().map(|e| e.map_coeffs(C::from_rational).evaluate(point)).collect()
}

/// All `a` with `sum a_i w_i == total`, in lexicographically descending order.
pub fn weighted_exponents(weights: &[u32], total: u32) -> Vec<Vec<u32>> {
    fn rec(weights: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&w, rest)) = weights.split_first() else {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        };
        for a in (0..=left / w).rev() {
            cur.push(a);
            rec(rest, left - a * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if weights.iter().all(|&w| w > 0) {
        rec(weights, total, &mut Vec::new(), &mut out);
    }
    out
}

fn product_powers(gens: &[QPoly], exps: &[u32], nvars: usize, cache: &mut [Vec<QPoly>]) -> Result<QPoly> {
    let mut acc = QPoly::one(nvars);
    for (i, &a) in exps.iter().enumerate() {
        while cache[i].len() <= a as usize {
            let next = cache[i].last().expect("seeded").mul(&gens[i])?;
            cache[i].push(next);
        }
        if a > 0 {
            acc = acc.mul(&cache[i][a as usize])?;
        }
    }
    Ok(acc)
}

/// Finds `H` with `f = H(g_1, ..., g_k)` by an exact linear solve over the
/// monomial expansion of every weighted product `g^a` of the right degree.
/// The result is a polynomial in `k` variables.
pub fn express_in(f: &QPoly, gens: &[QPoly]) -> Result<QPoly> {
    let k = gens.len();
    if f.is_zero() {
        return Ok(QPoly::zero(k));
    }
    let deg = f.homogeneous_degree().ok_or(Error::NoSolution)?;
    let weights: Vec<u32> = gens.iter().map(|g| g.homogeneous_degree().unwrap_or(0)).collect();
    if gens.iter().any(|g| g.nvars() != f.nvars()) {
        return Err(Error::ShapeError("generators and form disagree on nvars".into()));
    }
    let tuples = weighted_exponents(&weights, deg);
    if tuples.is_empty() {
        return Err(Error::NoSolution);
    }
    let mut cache: Vec<Vec<QPoly>> = gens.iter().map(|g| vec![QPoly::one(f.nvars()), g.clone()]).collect();
    let products: Vec<QPoly> =
        tuples.iter().map(|a| product_powers(gens, a, f.nvars(), &mut cache)).collect::<Result<_>>()?;
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in products.iter().chain(std::iter::once(f)) {
        for (m, _) in p.terms() {
            let next = rows.len();
            rows.entry(m.clone()).or_insert(next);
        }
    }
    let mut a = Matrix::<Rational>::zeros(rows.len(), products.len());
    for (j, p) in products.iter().enumerate() {
        for (m, c) in p.terms() {
            a[(rows[m], j)] = c.clone();
        }
    }
    let mut rhs = vec![Rational::zero(); rows.len()];
    for (m, c) in f.terms() {
        rhs[rows[m]] = c.clone();
    }
    let sol = a.solve(&rhs, 0.0).ok_or(Error::NoSolution)?;
    let terms = tuples.into_iter().zip(sol).filter(|(_, c)| !c.is_zero()).map(|(e, c)| (c, e));
    QPoly::from_terms(k, terms)
}

/// `H` with `F = H(η_i : i in subset)`; `subset` holds 0-based indices.
pub fn express_in_invariants(f: &QPoly, basis: &InvariantBasis, subset: &[usize]) -> Result<QPoly> {
    if f.nvars() != basis.rank() {
        return Err(Error::ShapeError("form and basis disagree on nvars".into()));
    }
    if subset.iter().any(|&i| i >= basis.rank()) {
        return Err(Error::ShapeError("invariant index out of range".into()));
    }
    if !basis.is_invariant(f) {
        return Err(Error::NotInvariant);
    }
    let gens: Vec<QPoly> = subset.iter().map(|&i| basis.etas[i].clone()).collect();
    express_in(f, &gens)
}

/// Weighted-homogeneous `H` in `degrees.len()` variables with
/// `sum a_i d_i == degree` on every term and coefficients uniform on a
/// `2^-20` grid in `[-1, 1]`.
pub fn random_weighted_form(degrees: &[u32], degree: u32, rng: &mut impl Rng) -> Result<QPoly> {
    let tuples = weighted_exponents(degrees, degree);
    if tuples.is_empty() {
        return Err(Error::NoFormsAtDegree(degree));
    }
    const GRID: i64 = 1 << 20;
    let terms = tuples.into_iter().map(|e| (Rational::new(rng.random_range(-GRID..=GRID).into(), GRID.into()), e));
    QPoly::from_terms(degrees.len(), terms)
}

/// `sum c_a η^a` over every `a` of weighted degree `degree`; invariant by
/// construction. Deterministic given `seed`.
pub fn random_invariant_form(basis: &InvariantBasis, degree: u32, seed: u64) -> Result<QPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_weighted_form(&basis.degrees, degree, &mut rng)?;
    h.compose(&basis.etas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, generate_group, DEFAULT_GROUP_CAP};
    use crate::scalar::{q, qf};

    fn basis(f: Family, n: usize) -> InvariantBasis {
        basic_invariants(&build_root_system(f, n).unwrap()).unwrap()
    }

    fn x(n: usize, i: usize) -> QPoly {
        QPoly::var(n, i)
    }

    #[test]
    fn b2_invariants() {
        let b = basis(Family::B, 2);
        assert_eq!(b.etas()[0], QPoly::norm_sq(2));
        assert_eq!(b.etas()[1], x(2, 0).pow(4).add(&x(2, 1).pow(4)).unwrap());
        assert_eq!(b.degrees(), &[2, 4]);
    }

    #[test]
    fn d3_degrees_and_order() {
        let b = basis(Family::D, 3);
        assert_eq!(b.degrees(), &[2, 3, 4]);
        assert_eq!(b.etas()[1], QPoly::monomial(q(1), vec![1, 1, 1]));
        assert_eq!(basis(Family::D, 4).degrees(), &[2, 4, 4, 6]);
    }

    #[test]
    fn i2_quartic() {
        let b = basis(Family::I2, 4);
        let want = QPoly::from_terms(2, [(q(1), vec![4, 0]), (q(-6), vec![2, 2]), (q(1), vec![0, 4])]).unwrap();
        assert_eq!(b.etas()[1], want);
        for m in 2..=8 {
            assert_eq!(basis(Family::I2, m).degrees(), &[2, m as u32]);
        }
    }

    #[test]
    fn degree_product_is_group_order() {
        for (f, n) in [(Family::Sym, 3), (Family::B, 3), (Family::D, 3), (Family::I2, 5)] {
            let rs = build_root_system(f, n).unwrap();
            let b = basic_invariants(&rs).unwrap();
            let prod: u32 = b.degrees().iter().product();
            assert_eq!(prod as usize, generate_group(&rs, DEFAULT_GROUP_CAP).unwrap().order());
        }
    }

    #[test]
    fn chevalley_map() {
        let b = basis(Family::B, 2);
        assert_eq!(chevalley_eval(&b, &[q(1), q(2)]), vec![q(5), q(17)]);
        assert_eq!(chevalley_eval(&b, &[q(2), q(1)]), vec![q(5), q(17)]);
        assert_eq!(chevalley_eval(&b, &[q(0), q(0)]), vec![q(0), q(0)]);
    }

    #[test]
    fn decomposition_examples() {
        let b = basis(Family::B, 2);
        let p4 = b.etas()[1].clone();
        assert_eq!(express_in_invariants(&p4, &b, &[0, 1]).unwrap(), x(2, 1));
        let x1x2sq = QPoly::monomial(q(1), vec![2, 2]);
        let h = express_in_invariants(&x1x2sq, &b, &[0, 1]).unwrap();
        let want = QPoly::from_terms(2, [(qf(1, 2), vec![2, 0]), (qf(-1, 2), vec![0, 1])]).unwrap();
        assert_eq!(h, want);
        assert_eq!(express_in_invariants(&p4, &b, &[0]), Err(Error::NoSolution));
        assert_eq!(express_in_invariants(&x(2, 0).pow(2), &b, &[0, 1]), Err(Error::NotInvariant));
    }

    #[test]
    fn norm_index_per_family() {
        assert_eq!(basis(Family::Sym, 2).norm_index(), Some(2));
        assert!(!basis(Family::Sym, 2).norm_in_first(1));
        for n in 3..=5 {
            assert_eq!(basis(Family::Sym, n).norm_index(), Some(2));
        }
        assert_eq!(basis(Family::B, 3).norm_index(), Some(1));
        assert_eq!(basis(Family::D, 3).norm_index(), Some(1));
        assert_eq!(basis(Family::I2, 5).norm_index(), Some(1));
    }

    #[test]
    fn single_root_example() {
        let rs = RootSystem::custom(2, VectorList::Exact(vec![vec![q(1), q(0)]])).unwrap();
        let b = InvariantBasis::custom(rs.clone(), vec![x(2, 1), x(2, 0).pow(2)]).unwrap();
        assert_eq!(b.degrees(), &[1, 2]);
        assert_eq!(b.norm_index(), Some(2));
        assert!(!b.norm_in_first(1));
        assert!(matches!(basic_invariants(&rs), Err(Error::NoCanonicalInvariants(_))));
        assert_eq!(InvariantBasis::custom(rs, vec![x(2, 0), x(2, 1)]).unwrap_err(), Error::NotInvariant);
    }

    #[test]
    fn random_forms() {
        let b2 = basis(Family::B, 2);
        let f = random_invariant_form(&b2, 2, 3).unwrap();
        let c = f.coeff(&[2, 0]);
        assert_eq!(f, QPoly::norm_sq(2).scale(&c));
        assert_eq!(random_invariant_form(&b2, 2, 3).unwrap(), f);
        assert_eq!(random_invariant_form(&b2, 6, 1).unwrap().homogeneous_degree(), Some(6));
        assert_eq!(random_invariant_form(&b2, 3, 0), Err(Error::NoFormsAtDegree(3)));
        assert_eq!(weighted_exponents(&[1, 2, 3], 3), vec![vec![3, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(weighted_exponents(&[2, 4], 4), vec![vec![2, 0], vec![0, 1]]);
    }
}
