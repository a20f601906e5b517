//! Root systems, reflections, the groups they generate, and the flats of
//! the reflection arrangement.

mod flats;
mod group;

pub use flats::{arrangement_flats, enumerate_flats, hyperplane_flat, integer_partitions, Flat, FlatBasis};
pub use group::{generate_group, orbit_exact, orbit_f64, reflection, root_orbits, Group, GroupElement, DEFAULT_GROUP_CAP};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_f64, norm_sq};
use crate::scalar::{q, Rational, Scalar, TextScalar, FLOAT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Symmetric group permuting all `n` coordinates of `R^n`.
    Sym,
    B,
    D,
    /// Dihedral group of order `2m` acting on `R^2`.
    I2,
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Sym => "Sym",
            Family::B => "B",
            Family::D => "D",
            Family::I2 => "I2",
            Family::Custom => "Custom",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Sym" | "sym" | "S" | "A" => Ok(Family::Sym),
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            "I2" | "i2" | "I" => Ok(Family::I2),
            "Custom" | "custom" => Ok(Family::Custom),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// A list of vectors in one coefficient domain.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorList {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

impl VectorList {
    pub fn len(&self) -> usize {
        match self {
            VectorList::Exact(v) => v.len(),
            VectorList::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, VectorList::Exact(_))
    }

    pub fn exact(&self) -> Option<&[Vec<Rational>]> {
        match self {
            VectorList::Exact(v) => Some(v),
            VectorList::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        match self {
            VectorList::Exact(v) => v.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect(),
            VectorList::Float(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    family: Family,
    /// Rank parameter: `n` for Sym/B/D, `m` for I2, ambient dimension for Custom.
    param: usize,
    dim: usize,
    positive_roots: VectorList,
}

impl RootSystem {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn param(&self) -> usize {
        self.param
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positive_roots(&self) -> &VectorList {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn is_exact(&self) -> bool {
        self.positive_roots.is_exact()
    }

    pub fn label(&self) -> String {
        match self.family {
            Family::Custom => format!("Custom(dim {})", self.dim),
            f => format!("{f}({})", self.param),
        }
    }

    /// Root system with an explicit list of positive roots, one per `±` pair.
    ///
    /// Checks that no two roots are parallel and that the set `±roots` is
    /// closed under its own reflections.
    pub fn custom(dim: usize, roots: VectorList) -> Result<Self> {
        let rs = RootSystem { family: Family::Custom, param: dim, dim, positive_roots: roots };
        rs.validate()?;
        Ok(rs)
    }

    fn validate(&self) -> Result<()> {
        match &self.positive_roots {
            VectorList::Exact(roots) => validate_roots(self.dim, roots),
            VectorList::Float(roots) => validate_roots(self.dim, roots),
        }
    }

    /// `true` iff `point` is off every root hyperplane.
    pub fn is_general_exact(&self, point: &[Rational]) -> bool {
        match &self.positive_roots {
            VectorList::Exact(roots) => roots.iter().all(|a| !dot(a, point).is_zero()),
            VectorList::Float(_) => {
                let p: Vec<f64> = point.iter().map(Scalar::to_f64).collect();
                self.is_general_f64(&p)
            }
        }
    }

    /// Float generality test: `|<x, a>| > 1e-9 |x| |a|` for every root.
    pub fn is_general_f64(&self, point: &[f64]) -> bool {
        let px = norm_f64(point);
        self.positive_roots.to_f64().iter().all(|a| dot(a, point).abs() > FLOAT_TOL * px * norm_f64(a))
    }

    /// Smallest normalized distance `|<x, a>| / (|x||a|)` to a root hyperplane.
    pub fn min_angular_distance(&self, point: &[f64]) -> f64 {
        let px = norm_f64(point);
        self.positive_roots
            .to_f64()
            .iter()
            .map(|a| dot(a, point).abs() / (px * norm_f64(a)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Product of the linear forms `<a, x>` over the positive roots.
    pub fn root_product(&self) -> Option<crate::polyalg::QPoly> {
        use crate::polyalg::QPoly;
        let roots = self.positive_roots.exact()?;
        let mut acc = QPoly::one(self.dim);
        for a in roots {
            let mut l = QPoly::zero(self.dim);
            for (i, c) in a.iter().enumerate() {
                l = l.add(&QPoly::var(self.dim, i).scale(c)).expect("same nvars");
            }
            acc = acc.mul(&l).expect("same nvars");
        }
        Some(acc)
    }

    /// One root per line, space-separated coordinates.
    pub fn to_text(&self) -> String {
        fn lines<C: TextScalar>(roots: &[Vec<C>]) -> String {
            roots
                .iter()
                .map(|r| r.iter().map(TextScalar::format_text).collect::<Vec<_>>().join(" ") + "\n")
                .collect()
        }
        match &self.positive_roots {
            VectorList::Exact(r) => lines(r),
            VectorList::Float(r) => lines(r),
        }
    }

    /// Parses the text format produced by [`RootSystem::to_text`] into a
    /// custom root system. Exact if every coordinate parses as a rational.
    pub fn from_text(text: &str) -> Result<Self> {
        let rows: Vec<Vec<&str>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| l.split_whitespace().collect())
            .collect();
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Parse("roots must be nonempty rows of equal length".into()));
        }
        let exact: Result<Vec<Vec<Rational>>> =
            rows.iter().map(|r| r.iter().map(|s| Rational::parse_text(s)).collect()).collect();
        let roots = match exact {
            Ok(v) => VectorList::Exact(v),
            Err(_) => VectorList::Float(
                rows.iter().map(|r| r.iter().map(|s| f64::parse_text(s)).collect()).collect::<Result<_>>()?,
            ),
        };
        RootSystem::custom(dim, roots)
    }
}

fn validate_roots<C: Scalar>(dim: usize, roots: &[Vec<C>]) -> Result<()> {
    let tol = if C::EXACT { 0.0 } else { 1e-9 };
    if roots.iter().any(|r| r.len() != dim) {
        return Err(Error::ShapeError(format!("roots must have length {dim}")));
    }
    if roots.iter().any(|r| r.iter().all(|c| c.near_zero(tol))) {
        return Err(Error::DegenerateInput("zero root".into()));
    }
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if parallel(a, b, tol) {
                return Err(Error::DegenerateInput("two positive roots are parallel".into()));
            }
        }
    }
    for a in roots {
        let s = reflection(a)?;
        for b in roots {
            let img = s.matrix.apply(b);
            let neg: Vec<C> = img.iter().map(Scalar::neg).collect();
            let found = roots.iter().any(|r| vec_eq(r, &img, tol) || vec_eq(r, &neg, tol));
            if !found {
                return Err(Error::DegenerateInput("root set is not closed under its reflections".into()));
            }
        }
    }
    Ok(())
}

pub(crate) fn vec_eq<C: Scalar>(a: &[C], b: &[C], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

fn parallel<C: Scalar>(a: &[C], b: &[C], tol: f64) -> bool {
    // |<a,b>|^2 == |a|^2 |b|^2
    let ab = dot(a, b);
    let lhs = ab.mul(&ab);
    let rhs = norm_sq(a).mul(&norm_sq(b));
    if C::EXACT {
        lhs == rhs
    } else {
        (lhs.to_f64() - rhs.to_f64()).abs() <= tol * rhs.to_f64()
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|k| if k == i { q(1) } else { q(0) }).collect()
}

fn combo(n: usize, i: usize, j: usize, sign: i64) -> Vec<Rational> {
    let mut v = unit(n, i);
    v[j] = q(sign);
    v
}

/// Positive roots for a named family. `param` is `n` for Sym/B/D and `m`
/// for I2.
pub fn build_root_system(family: Family, param: usize) -> Result<RootSystem> {
    let out_of_range = || Error::RankOutOfRange { family: family.to_string(), rank: param };
    let (dim, roots) = match family {
        Family::Sym => {
            if param < 2 {
                return Err(out_of_range());
            }
            let n = param;
            let mut roots = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    roots.push(combo(n, i, j, -1));
                }
            }
            (n, VectorList::Exact(roots))
        }
        Family::B => {
            if param < 1 {
                return Err(out_of_range());
            }
            let n = param;
            let mut roots: Vec<Vec<Rational>> = (0..n).map(|i| unit(n, i)).collect();
            for i in 0..n {
                for j in i + 1..n {
                    roots.push(combo(n, i, j, -1));
                    roots.push(combo(n, i, j, 1));
                }
            }
            (n, VectorList::Exact(roots))
        }
        Family::D => {
            if param < 3 {
                return Err(out_of_range());
            }
            let n = param;
            let mut roots = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    roots.push(combo(n, i, j, -1));
                    roots.push(combo(n, i, j, 1));
                }
            }
            (n, VectorList::Exact(roots))
        }
        Family::I2 => {
            if param < 2 {
                return Err(out_of_range());
            }
            (2, dihedral_roots(param))
        }
        Family::Custom => {
            return Err(Error::DegenerateInput("custom root systems need an explicit root list".into()))
        }
    };
    Ok(RootSystem { family, param, dim, positive_roots: roots })
}

/// Roots perpendicular to the mirror lines at angles `k*pi/m`. Rational
/// (up to scaling) only for `m` in {2, 4}.
fn dihedral_roots(m: usize) -> VectorList {
    match m {
        2 => VectorList::Exact(vec![vec![q(0), q(1)], vec![q(1), q(0)]]),
        4 => VectorList::Exact(vec![vec![q(0), q(1)], vec![q(1), q(-1)], vec![q(1), q(0)], vec![q(1), q(1)]]),
        _ => VectorList::Float(
            (0..m)
                .map(|k| {
                    let t = k as f64 * PI / m as f64;
                    let (s, c) = t.sin_cos();
                    // normal to the mirror, first nonzero coordinate positive
                    let v = vec![-s, c];
                    if v[0] < -1e-15 || (v[0].abs() <= 1e-15 && v[1] < 0.0) {
                        vec![s, -c]
                    } else {
                        v
                    }
                })
                .collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(rs: &RootSystem) -> Vec<Vec<Rational>> {
        rs.positive_roots().exact().unwrap().to_vec()
    }

    #[test]
    fn b2_roots() {
        let rs = build_root_system(Family::B, 2).unwrap();
        let r = exact(&rs);
        assert_eq!(r, vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(-1)], vec![q(1), q(1)]]);
    }

    #[test]
    fn root_counts() {
        assert_eq!(exact(&build_root_system(Family::Sym, 2).unwrap()), vec![vec![q(1), q(-1)]]);
        for n in 2..6 {
            assert_eq!(build_root_system(Family::Sym, n).unwrap().num_positive_roots(), n * (n - 1) / 2);
            assert_eq!(build_root_system(Family::B, n).unwrap().num_positive_roots(), n * n);
        }
        for n in 3..6 {
            assert_eq!(build_root_system(Family::D, n).unwrap().num_positive_roots(), n * (n - 1));
        }
        for m in 2..9 {
            assert_eq!(build_root_system(Family::I2, m).unwrap().num_positive_roots(), m);
        }
    }

    #[test]
    fn d3_roots_are_e_i_plus_minus_e_j() {
        // Brute force: all vectors ±e_i ± e_j, halved by sign.
        let n = 3;
        let mut expect = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for s in [-1i64, 1] {
                    expect.push(combo(n, i, j, s));
                }
            }
        }
        let mut got = exact(&build_root_system(Family::D, 3).unwrap());
        got.sort();
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn ranks_out_of_range() {
        assert!(matches!(build_root_system(Family::Sym, 1), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(build_root_system(Family::D, 2), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(build_root_system(Family::I2, 1), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(build_root_system(Family::B, 0), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn generality() {
        let b2 = build_root_system(Family::B, 2).unwrap();
        assert!(b2.is_general_exact(&[q(1), q(2)]));
        assert!(!b2.is_general_exact(&[q(1), q(1)]));
        let s3 = build_root_system(Family::Sym, 3).unwrap();
        assert!(s3.is_general_exact(&[q(1), q(2), q(3)]));
        assert!(!s3.is_general_f64(&[1.0, 2.0, 1.0]));
    }

    #[test]
    fn dihedral_invariant_closure() {
        for m in 2..9 {
            let rs = build_root_system(Family::I2, m).unwrap();
            assert!(rs.validate().is_ok(), "I2({m})");
        }
    }

    #[test]
    fn custom_validation() {
        let ok = RootSystem::custom(2, VectorList::Exact(vec![vec![q(1), q(0)]]));
        assert!(ok.is_ok());
        let parallel = RootSystem::custom(2, VectorList::Exact(vec![vec![q(1), q(0)], vec![q(2), q(0)]]));
        assert!(parallel.is_err());
        // e1 and e1+e2 alone is not closed.
        let open = RootSystem::custom(2, VectorList::Exact(vec![vec![q(1), q(0)], vec![q(1), q(1)]]));
        assert!(open.is_err());
    }

    #[test]
    fn text_round_trip() {
        let rs = build_root_system(Family::B, 2).unwrap();
        let text = rs.to_text();
        assert_eq!(text, "1/1 0/1\n0/1 1/1\n1/1 -1/1\n1/1 1/1\n");
        let back = RootSystem::from_text(&text).unwrap();
        assert_eq!(back.positive_roots(), rs.positive_roots());
    }
}
