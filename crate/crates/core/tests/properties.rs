use proptest::prelude::*;
use witset_core::invariants::{basic_invariants, chevalley_eval, express_in_invariants, random_invariant_form};
use witset_core::jacobian::chevalley_jacobian;
use witset_core::linalg::{dot, Matrix};
use witset_core::parallel::Schedule;
use witset_core::polyalg::{binary_form_nonneg, FPoly, QPoly};
use witset_core::rootsys::{build_root_system, generate_group, orbit_exact, Family, RootSystem};
use witset_core::scalar::{q, Rational, Scalar};
use witset_core::witness::{min_on_sphere, MultistartParams};

fn poly3() -> impl Strategy<Value = QPoly> {
    prop::collection::vec((-5i64..=5, 0u32..3, 0u32..3, 0u32..3), 0..6).prop_map(|terms| {
        QPoly::from_terms(3, terms.into_iter().map(|(c, a, b, e)| (q(c), vec![a, b, e]))).unwrap()
    })
}

/// Homogeneous of degree `d` in 3 variables.
fn form3(d: u32) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((-5i64..=5, 0..=d, 0..=d), 1..6).prop_map(move |terms| {
        let t = terms.into_iter().filter(|(_, a, b)| a + b <= d).map(|(c, a, b)| (q(c), vec![a, b, d - a - b]));
        QPoly::from_terms(3, t).unwrap()
    })
}

fn point3() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-4i64..=4, 3).prop_map(|v| v.into_iter().map(q).collect())
}

fn rs(family: Family, n: usize) -> RootSystem {
    build_root_system(family, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly3(), b in poly3(), c in poly3()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().mul(&c).unwrap(), a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly3(), b in poly3(), p in point3()) {
        prop_assert_eq!(a.mul(&b).unwrap().evaluate(&p), a.evaluate(&p).mul(&b.evaluate(&p)));
        prop_assert_eq!(a.add(&b).unwrap().evaluate(&p), a.evaluate(&p).add(&b.evaluate(&p)));
    }

    #[test]
    fn euler_identity((d, f) in (1u32..6).prop_flat_map(|d| (Just(d), form3(d)))) {
        let mut lhs = QPoly::zero(3);
        for (i, g) in f.gradient().iter().enumerate() {
            lhs = lhs.add(&QPoly::var(3, i).mul(g).unwrap()).unwrap();
        }
        prop_assert_eq!(lhs, f.scale(&q(d as i64)));
    }

    #[test]
    fn substitution_respects_products(a in poly3(), b in poly3(), m in prop::collection::vec(-3i64..=3, 9)) {
        let m = Matrix::from_rows(m.chunks(3).map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap();
        let lhs = a.mul(&b).unwrap().substitute_linear(&m).unwrap();
        let rhs = a.substitute_linear(&m).unwrap().mul(&b.substitute_linear(&m).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gradient_matches_finite_differences(a in poly3(), x in prop::collection::vec(-1.0f64..1.0, 3)) {
        let f: FPoly = a.to_f64();
        let c = f.compile();
        let mut g = vec![0.0; 3];
        let v = c.value_grad(&x, &mut g);
        prop_assert!((v - f.evaluate(&x)).abs() <= 1e-9 * (1.0 + v.abs()));
        let h = 1e-6;
        for i in 0..3 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let fd = (c.value(&xp) - c.value(&xm)) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() <= 1e-5 * (1.0 + g[i].abs()), "i={} fd={} g={}", i, fd, g[i]);
        }
    }

    #[test]
    fn sturm_agrees_with_factored_oracle(
        roots in prop::collection::vec((-6i64..=6, 1u32..=3), 0..4),
        quads in prop::collection::vec((-3i64..=3, 1i64..=4), 0..2),
        negate in any::<bool>(),
    ) {
        // f = ± prod (x - r y)^m * prod ((x - a y)^2 + b y^2).
        let x = QPoly::var(2, 0);
        let y = QPoly::var(2, 1);
        let mut f = QPoly::one(2);
        let mut odd_real_root = false;
        let mut seen = std::collections::BTreeMap::new();
        for &(r, m) in &roots {
            *seen.entry(r).or_insert(0) += m;
            let lin = x.sub(&y.scale(&q(r))).unwrap();
            f = f.mul(&lin.pow(m)).unwrap();
        }
        for m in seen.values() {
            odd_real_root |= m % 2 == 1;
        }
        for &(a, b) in &quads {
            let t = x.sub(&y.scale(&q(a))).unwrap().pow(2).add(&y.pow(2).scale(&q(b))).unwrap();
            f = f.mul(&t).unwrap();
        }
        if negate {
            f = f.neg();
        }
        prop_assume!(f.homogeneous_degree().unwrap_or(0) % 2 == 0);
        let expected = !negate && !odd_real_root;
        prop_assert_eq!(binary_form_nonneg(&f).unwrap(), expected);
    }

    #[test]
    fn express_round_trip(seed in any::<u64>(), pick in 0usize..3) {
        let (family, n, degree) = [(Family::B, 3, 6), (Family::Sym, 3, 4), (Family::D, 3, 6)][pick];
        let basis = basic_invariants(&rs(family, n)).unwrap();
        let f = random_invariant_form(&basis, degree, seed).unwrap();
        let all: Vec<usize> = (0..n).collect();
        let h = express_in_invariants(&f, &basis, &all).unwrap();
        prop_assert_eq!(h.compose(basis.etas()).unwrap(), f);
    }

    #[test]
    fn chevalley_map_constant_on_orbits(p in point3(), pick in 0usize..3) {
        let family = [Family::B, Family::Sym, Family::D][pick];
        let r = rs(family, 3);
        let basis = basic_invariants(&r).unwrap();
        let group = generate_group(&r, 1000).unwrap();
        let v = chevalley_eval(&basis, &p);
        for g in group.exact().unwrap() {
            prop_assert_eq!(chevalley_eval(&basis, &g.matrix.apply(&p)), v.clone());
        }
    }

    #[test]
    fn general_iff_free_orbit_iff_nonsingular_jacobian(p in point3(), pick in 0usize..3) {
        let family = [Family::B, Family::Sym, Family::D][pick];
        let r = rs(family, 3);
        let group = generate_group(&r, 1000).unwrap();
        let elements = group.exact().unwrap();
        let general = r.is_general_exact(&p);
        let orbit = orbit_exact(elements, &p);
        prop_assert_eq!(general, orbit.len() == elements.len());
        prop_assert_eq!(orbit.len() * stabilizer(elements, &p), elements.len());
        let det = chevalley_jacobian(&basic_invariants(&r).unwrap()).det().unwrap();
        prop_assert_eq!(general, !det.evaluate(&p).is_zero());
    }
}

fn stabilizer(elements: &[witset_core::rootsys::GroupElement<Rational>], p: &[Rational]) -> usize {
    elements.iter().filter(|g| g.matrix.apply(p) == p).count()
}

#[test]
fn group_permutes_roots() {
    for (family, n) in [(Family::Sym, 4), (Family::B, 3), (Family::D, 4), (Family::I2, 4)] {
        let r = rs(family, n);
        let roots = r.positive_roots().exact().unwrap().to_vec();
        let group = generate_group(&r, 1000).unwrap();
        for g in group.exact().unwrap() {
            for a in &roots {
                let image = g.matrix.apply(a);
                let neg: Vec<Rational> = image.iter().map(Scalar::neg).collect();
                assert!(roots.iter().any(|b| *b == image || *b == neg), "{} not closed", r.label());
                assert_eq!(dot(&image, &image), dot(a, a));
            }
        }
    }
}

#[test]
fn multistart_is_schedule_independent() {
    let basis = basic_invariants(&rs(Family::B, 3)).unwrap();
    for seed in 0..4 {
        let f = random_invariant_form(&basis, 8, seed).unwrap().to_f64();
        let a = min_on_sphere(&f, &MultistartParams::with_seed(seed).with_schedule(Schedule::Sequential)).unwrap();
        let b = min_on_sphere(&f, &MultistartParams::with_seed(seed).with_schedule(Schedule::Parallel)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.point, b.point);
    }
}
