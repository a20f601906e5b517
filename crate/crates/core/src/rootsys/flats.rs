use std::collections::HashSet;

use super::{Family, RootSystem, VectorList};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::polyalg::combinations;
use crate::scalar::{q, Rational, Scalar, FLOAT_TOL};

#[derive(Clone, Debug, PartialEq)]
pub enum FlatBasis {
    Exact(Matrix<Rational>),
    Float(Matrix<f64>),
}

/// A linear subspace cut out by root hyperplanes, stored as an `n x k`
/// basis matrix (columns span the flat).
#[derive(Clone, Debug, PartialEq)]
pub struct Flat {
    basis: FlatBasis,
    defining_roots: VectorList,
}

impl Flat {
    /// Flat orthogonal to the given exact roots.
    pub fn orthogonal_to_exact(n: usize, roots: Vec<Vec<Rational>>) -> Result<Flat> {
        let basis = if roots.is_empty() {
            Matrix::identity(n)
        } else {
            let kernel = Matrix::from_rows(roots.clone())?.kernel(0.0);
            Matrix::from_columns(n, &kernel)?
        };
        Ok(Flat { basis: FlatBasis::Exact(basis), defining_roots: VectorList::Exact(roots) })
    }

    pub fn orthogonal_to_f64(n: usize, roots: Vec<Vec<f64>>) -> Result<Flat> {
        let basis = if roots.is_empty() {
            Matrix::identity(n)
        } else {
            let kernel = Matrix::from_rows(roots.clone())?.kernel(FLOAT_TOL);
            Matrix::from_columns(n, &kernel)?
        };
        Ok(Flat { basis: FlatBasis::Float(basis), defining_roots: VectorList::Float(roots) })
    }

    /// Flat spanned by explicit exact columns.
    pub fn from_exact_basis(basis: Matrix<Rational>, defining_roots: Vec<Vec<Rational>>) -> Flat {
        Flat { basis: FlatBasis::Exact(basis), defining_roots: VectorList::Exact(defining_roots) }
    }

    /// Whole ambient space.
    pub fn whole_space(n: usize) -> Flat {
        Flat::from_exact_basis(Matrix::identity(n), Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        match &self.basis {
            FlatBasis::Exact(m) => m.rows(),
            FlatBasis::Float(m) => m.rows(),
        }
    }

    pub fn dim(&self) -> usize {
        match &self.basis {
            FlatBasis::Exact(m) => m.cols(),
            FlatBasis::Float(m) => m.cols(),
        }
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.basis, FlatBasis::Exact(_))
    }

    pub fn basis(&self) -> &FlatBasis {
        &self.basis
    }

    pub fn exact_basis(&self) -> Option<&Matrix<Rational>> {
        match &self.basis {
            FlatBasis::Exact(m) => Some(m),
            FlatBasis::Float(_) => None,
        }
    }

    pub fn float_basis(&self) -> Matrix<f64> {
        match &self.basis {
            FlatBasis::Exact(m) => m.to_f64(),
            FlatBasis::Float(m) => m.clone(),
        }
    }

    pub fn defining_roots(&self) -> &VectorList {
        &self.defining_roots
    }

    /// Exact membership: orthogonal to every defining root.
    pub fn contains_exact(&self, point: &[Rational]) -> Option<bool> {
        let roots = self.defining_roots.exact()?;
        Some(roots.iter().all(|r| dot(r, point).is_zero()))
    }

    /// Short description listing the basis columns.
    pub fn describe(&self) -> String {
        fn cols<C: Scalar>(m: &Matrix<C>) -> String {
            let cs: Vec<String> = (0..m.cols())
                .map(|j| format!("({})", m.column(j).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            if cs.is_empty() {
                "{0}".into()
            } else {
                format!("span{{{}}}", cs.join(", "))
            }
        }
        match &self.basis {
            FlatBasis::Exact(m) => cols(m),
            FlatBasis::Float(m) => cols(m),
        }
    }
}

/// Hyperplane orthogonal to the `index`-th positive root.
pub fn hyperplane_flat(rs: &RootSystem, index: usize) -> Result<Flat> {
    match rs.positive_roots() {
        VectorList::Exact(r) => Flat::orthogonal_to_exact(rs.dim(), vec![r[index].clone()]),
        VectorList::Float(r) => Flat::orthogonal_to_f64(rs.dim(), vec![r[index].clone()]),
    }
}

/// Partitions of `m` into exactly `k` positive parts, non-increasing,
/// in descending lexicographic order.
pub fn integer_partitions(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, parts: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if remaining < parts {
            return;
        }
        let hi = max.min(remaining - (parts - 1));
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(remaining - p, parts - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, m, &mut Vec::new(), &mut out);
    out
}

fn block_flat(n: usize, blocks: &[usize], zero_block: usize, with_zero_roots: bool) -> Flat {
    let k = blocks.len();
    let mut basis = Matrix::zeros(n, k);
    let mut roots = Vec::new();
    let mut start = 0;
    for (b, &size) in blocks.iter().enumerate() {
        for i in start..start + size {
            basis[(i, b)] = q(1);
            if i + 1 < start + size {
                let mut r = vec![q(0); n];
                r[i] = q(1);
                r[i + 1] = q(-1);
                roots.push(r);
            }
        }
        start += size;
    }
    if with_zero_roots {
        for i in start..start + zero_block {
            let mut r = vec![q(0); n];
            r[i] = q(1);
            roots.push(r);
        }
    }
    Flat::from_exact_basis(basis, roots)
}

/// Canonical flat representatives of codimension `codim`, one per
/// orbit of the group on flats.
///
/// Sym(n): one flat per block-size signature (coordinates equal within a
/// block). B(n): a zero block plus `n - codim` nonzero blocks with a shared
/// positive parameter each. Other families are rejected because the
/// higher-codimension witness statement needs a minor factorization that is
/// only established for these two.
pub fn enumerate_flats(family: Family, rank: usize, codim: usize) -> Result<Vec<Flat>> {
    let bad_codim = || Error::DegenerateInput(format!("codimension {codim} out of range for {family}({rank})"));
    match family {
        Family::Sym => {
            if rank < 2 {
                return Err(Error::RankOutOfRange { family: family.to_string(), rank });
            }
            if codim == 0 || codim > rank - 1 {
                return Err(bad_codim());
            }
            let k = rank - codim;
            Ok(integer_partitions(rank, k).iter().map(|p| block_flat(rank, p, 0, false)).collect())
        }
        Family::B => {
            if rank < 1 {
                return Err(Error::RankOutOfRange { family: family.to_string(), rank });
            }
            if codim == 0 || codim > rank {
                return Err(bad_codim());
            }
            let k = rank - codim;
            let mut out = Vec::new();
            for zeros in 0..=rank {
                let nonzero = rank - zeros;
                if k == 0 && nonzero != 0 {
                    continue;
                }
                for p in integer_partitions(nonzero, k) {
                    out.push(block_flat(rank, &p, zeros, true));
                }
            }
            Ok(out)
        }
        other => Err(Error::MinorFactorizationUnknown(other.to_string())),
    }
}

/// Every distinct flat of the given codimension (not reduced modulo the
/// group), obtained by intersecting `codim` independent root hyperplanes.
pub fn arrangement_flats(rs: &RootSystem, codim: usize) -> Result<Vec<Flat>> {
    let roots = rs
        .positive_roots()
        .exact()
        .ok_or_else(|| Error::DegenerateInput("arrangement flats need exact roots".into()))?;
    let n = rs.dim();
    if codim == 0 {
        return Ok(vec![Flat::whole_space(n)]);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for subset in combinations(roots.len(), codim) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| roots[i].clone()).collect();
        let mut m = Matrix::from_rows(rows.clone())?;
        let pivots = m.rref(0.0);
        if pivots.len() != codim {
            continue;
        }
        if seen.insert(m.clone()) {
            out.push(Flat::orthogonal_to_exact(n, rows)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn col(f: &Flat, j: usize) -> Vec<Rational> {
        f.exact_basis().unwrap().column(j)
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn hyperplanes() {
        let b3 = build_root_system(Family::B, 3).unwrap();
        let f = hyperplane_flat(&b3, 0).unwrap();
        assert_eq!((col(&f, 0), col(&f, 1)), (qv(&[0, 1, 0]), qv(&[0, 0, 1])));
        let s3 = build_root_system(Family::Sym, 3).unwrap();
        let f = hyperplane_flat(&s3, 0).unwrap();
        assert_eq!((col(&f, 0), col(&f, 1)), (qv(&[1, 1, 0]), qv(&[0, 0, 1])));
        let b2 = build_root_system(Family::B, 2).unwrap();
        let f = hyperplane_flat(&b2, 3).unwrap();
        assert_eq!(f.dim(), 1);
        assert_eq!(col(&f, 0), qv(&[1, -1]));
        let i5 = build_root_system(Family::I2, 5).unwrap();
        let f = hyperplane_flat(&i5, 2).unwrap();
        assert!(!f.is_exact());
        assert_eq!(f.dim(), 1);
    }

    #[test]
    fn clr_lines_for_b3() {
        let flats = enumerate_flats(Family::B, 3, 2).unwrap();
        let lines: Vec<Vec<Rational>> = flats.iter().map(|f| col(f, 0)).collect();
        assert_eq!(lines, vec![qv(&[1, 1, 1]), qv(&[1, 1, 0]), qv(&[1, 0, 0])]);
    }

    #[test]
    fn sym3_hyperplanes_reduce_to_one() {
        let flats = enumerate_flats(Family::Sym, 3, 1).unwrap();
        assert_eq!(flats.len(), 1);
        assert_eq!(flats[0].dim(), 2);
    }

    #[test]
    fn b2_codim_two_is_origin() {
        let flats = enumerate_flats(Family::B, 2, 2).unwrap();
        assert_eq!(flats.len(), 1);
        assert_eq!(flats[0].dim(), 0);
    }

    #[test]
    fn unsupported_family() {
        assert!(matches!(enumerate_flats(Family::D, 4, 1), Err(Error::MinorFactorizationUnknown(_))));
        assert!(enumerate_flats(Family::Sym, 3, 3).is_err());
    }

    #[test]
    fn b_n_lines_count() {
        for n in 2..6 {
            let flats = enumerate_flats(Family::B, n, n - 1).unwrap();
            assert_eq!(flats.len(), n);
            assert!(flats.iter().all(|f| f.dim() == 1));
        }
    }

    #[test]
    fn d3_lines_match_locus() {
        let rs = build_root_system(Family::D, 3).unwrap();
        assert_eq!(arrangement_flats(&rs, 2).unwrap().len(), 7);
        assert_eq!(arrangement_flats(&rs, 1).unwrap().len(), 6);
    }

    #[test]
    fn partitions() {
        assert_eq!(integer_partitions(4, 2), vec![vec![3, 1], vec![2, 2]]);
        assert_eq!(integer_partitions(0, 0), vec![Vec::<usize>::new()]);
        assert!(integer_partitions(2, 3).is_empty());
    }

    #[test]
    fn defining_roots_are_orthogonal() {
        for c in 1..=4 {
            for f in enumerate_flats(Family::B, 4, c).unwrap() {
                let roots = f.defining_roots().exact().unwrap();
                assert_eq!(roots.len(), c);
                for j in 0..f.dim() {
                    assert!(f.contains_exact(&col(&f, j)).unwrap());
                }
            }
        }
    }
}
