use std::collections::{HashMap, VecDeque};

use super::{vec_eq, RootSystem, VectorList};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::{Rational, Scalar, FLOAT_TOL};

pub const DEFAULT_GROUP_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<C> {
    pub matrix: Matrix<C>,
    /// Number of generating reflections used to reach the element in BFS.
    pub word_length: Option<usize>,
}

/// `w -> w - 2 <w,v>/<v,v> v`.
pub fn reflection<C: Scalar>(root: &[C]) -> Result<GroupElement<C>> {
    let n = root.len();
    let vv = dot(root, root);
    if root.iter().all(Scalar::is_zero) || vv.is_zero() {
        return Err(Error::DegenerateInput("reflection in the zero vector".into()));
    }
    let two = C::from_i64(2);
    let mut m: Matrix<C> = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let t = two.mul(&root[i]).mul(&root[j]).div(&vv);
            m[(i, j)] = m[(i, j)].sub(&t);
        }
    }
    Ok(GroupElement { matrix: m, word_length: Some(1) })
}

/// The finite group generated by the reflections, as explicit matrices.
#[derive(Clone, Debug)]
pub enum Group {
    Exact(Vec<GroupElement<Rational>>),
    Float(Vec<GroupElement<f64>>),
}

impl Group {
    pub fn order(&self) -> usize {
        match self {
            Group::Exact(g) => g.len(),
            Group::Float(g) => g.len(),
        }
    }

    pub fn exact(&self) -> Option<&[GroupElement<Rational>]> {
        match self {
            Group::Exact(g) => Some(g),
            Group::Float(_) => None,
        }
    }

    pub fn matrices_f64(&self) -> Vec<Matrix<f64>> {
        match self {
            Group::Exact(g) => g.iter().map(|e| e.matrix.to_f64()).collect(),
            Group::Float(g) => g.iter().map(|e| e.matrix.clone()).collect(),
        }
    }
}

/// Breadth-first closure of the identity under all root reflections.
pub fn generate_group(rs: &RootSystem, cap: usize) -> Result<Group> {
    match rs.positive_roots() {
        VectorList::Exact(roots) => bfs_exact(roots, rs.dim(), cap).map(Group::Exact),
        VectorList::Float(roots) => bfs_float(roots, rs.dim(), cap).map(Group::Float),
    }
}

fn bfs_exact(roots: &[Vec<Rational>], n: usize, cap: usize) -> Result<Vec<GroupElement<Rational>>> {
    let gens: Vec<Matrix<Rational>> = roots.iter().map(|r| reflection(r).map(|g| g.matrix)).collect::<Result<_>>()?;
    let id = Matrix::identity(n);
    let mut seen: HashMap<Matrix<Rational>, usize> = HashMap::from([(id.clone(), 0)]);
    let mut out = vec![GroupElement { matrix: id.clone(), word_length: Some(0) }];
    let mut queue = VecDeque::from([(id, 0usize)]);
    while let Some((m, depth)) = queue.pop_front() {
        for g in &gens {
            let next = g.matmul(&m)?;
            if seen.contains_key(&next) {
                continue;
            }
            if out.len() == cap {
                return Err(Error::GroupTooLarge { cap });
            }
            seen.insert(next.clone(), out.len());
            out.push(GroupElement { matrix: next.clone(), word_length: Some(depth + 1) });
            queue.push_back((next, depth + 1));
        }
    }
    Ok(out)
}

fn bfs_float(roots: &[Vec<f64>], n: usize, cap: usize) -> Result<Vec<GroupElement<f64>>> {
    let gens: Vec<Matrix<f64>> = roots.iter().map(|r| reflection(r).map(|g| g.matrix)).collect::<Result<_>>()?;
    let id = Matrix::identity(n);
    let mut out = vec![GroupElement { matrix: id.clone(), word_length: Some(0) }];
    let mut queue = VecDeque::from([(id, 0usize)]);
    while let Some((m, depth)) = queue.pop_front() {
        for g in &gens {
            let next = g.matmul(&m)?;
            if out.iter().any(|e| e.matrix.approx_eq(&next, FLOAT_TOL)) {
                continue;
            }
            if out.len() == cap {
                return Err(Error::GroupTooLarge { cap });
            }
            out.push(GroupElement { matrix: next.clone(), word_length: Some(depth + 1) });
            queue.push_back((next, depth + 1));
        }
    }
    Ok(out)
}

/// Distinct images of an exact point.
pub fn orbit_exact(group: &[GroupElement<Rational>], point: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for g in group {
        let img = g.matrix.apply(point);
        if seen.insert(img.clone()) {
            out.push(img);
        }
    }
    out
}

/// Distinct images of a float point, deduplicated at `1e-9`.
pub fn orbit_f64(group: &[Matrix<f64>], point: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for g in group {
        let img = g.apply(point);
        if !out.iter().any(|p| vec_eq(p, &img, FLOAT_TOL)) {
            out.push(img);
        }
    }
    out
}

/// Partition of the positive-root indices into classes under `±W`.
pub fn root_orbits(rs: &RootSystem, group: &Group) -> Vec<Vec<usize>> {
    match (rs.positive_roots(), group) {
        (VectorList::Exact(roots), Group::Exact(g)) => {
            let mats: Vec<&Matrix<Rational>> = g.iter().map(|e| &e.matrix).collect();
            classes(roots, &mats, 0.0)
        }
        _ => {
            let roots = rs.positive_roots().to_f64();
            let mats = group.matrices_f64();
            let refs: Vec<&Matrix<f64>> = mats.iter().collect();
            classes(&roots, &refs, 1e-8)
        }
    }
}

fn classes<C: Scalar>(roots: &[Vec<C>], group: &[&Matrix<C>], tol: f64) -> Vec<Vec<usize>> {
    let mut class_of = vec![usize::MAX; roots.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..roots.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = Vec::new();
        for g in group {
            let img = g.apply(&roots[i]);
            let neg: Vec<C> = img.iter().map(Scalar::neg).collect();
            if let Some(j) = roots.iter().position(|r| vec_eq(r, &img, tol) || vec_eq(r, &neg, tol)) {
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, Family};
    use crate::scalar::q;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn reflection_matrices() {
        assert_eq!(reflection(&[q(1), q(0)]).unwrap().matrix, qm(&[&[-1, 0], &[0, 1]]));
        assert_eq!(reflection(&[q(1), q(-1)]).unwrap().matrix, qm(&[&[0, 1], &[1, 0]]));
        assert_eq!(reflection(&[q(1), q(1)]).unwrap().matrix, qm(&[&[0, -1], &[-1, 0]]));
        assert!(matches!(reflection(&[q(0), q(0)]), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn reflection_is_orthogonal_involution() {
        let r = [q(1), q(-2), q(3)];
        let m = reflection(&r).unwrap().matrix;
        assert!(m.is_orthogonal());
        assert_eq!(m.matmul(&m).unwrap(), Matrix::identity(3));
        let neg: Vec<Rational> = r.iter().map(|v| -v).collect();
        assert_eq!(m.apply(&r), neg);
        let fixed = [q(2), q(1), q(0)];
        assert_eq!(m.apply(&fixed), fixed.to_vec());
    }

    #[test]
    fn small_group_orders() {
        let order = |f, n| generate_group(&build_root_system(f, n).unwrap(), DEFAULT_GROUP_CAP).unwrap().order();
        assert_eq!(order(Family::B, 2), 8);
        assert_eq!(order(Family::Sym, 3), 6);
        assert_eq!(order(Family::Sym, 2), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let rs = build_root_system(Family::B, 3).unwrap();
        assert_eq!(generate_group(&rs, 10).unwrap_err(), Error::GroupTooLarge { cap: 10 });
    }

    #[test]
    fn orbits() {
        let rs = build_root_system(Family::B, 2).unwrap();
        let g = generate_group(&rs, DEFAULT_GROUP_CAP).unwrap();
        let g = g.exact().unwrap();
        assert_eq!(orbit_exact(g, &[q(1), q(2)]).len(), 8);
        assert_eq!(orbit_exact(g, &[q(1), q(0)]).len(), 4);
        let s3 = build_root_system(Family::Sym, 3).unwrap();
        let g3 = generate_group(&s3, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(orbit_exact(g3.exact().unwrap(), &[q(1), q(1), q(1)]).len(), 1);
    }

    #[test]
    fn root_classes() {
        let classes_of = |f, n| {
            let rs = build_root_system(f, n).unwrap();
            let g = generate_group(&rs, DEFAULT_GROUP_CAP).unwrap();
            root_orbits(&rs, &g)
        };
        assert_eq!(classes_of(Family::B, 2), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(classes_of(Family::Sym, 4).len(), 1);
        assert_eq!(classes_of(Family::D, 3).len(), 1);
        assert_eq!(classes_of(Family::I2, 5).len(), 1);
        assert_eq!(classes_of(Family::I2, 6).len(), 2);
    }
}
