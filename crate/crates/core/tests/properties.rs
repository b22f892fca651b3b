use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sc_obstruction::calculus::{expand, taylor_shift, Coord, Monomial, Space};
use sc_obstruction::cohomology::{
    d1, d2, is_abelian_2_cocycle, is_abelian_3_cocycle, trace, trivialize_3cocycle, twist, AbelianCochain3, Cochain1,
    Cochain2, Trivialization,
};
use sc_obstruction::group::quotient_group;
use sc_obstruction::quadratic::{cocycle_from_form, QuadraticForm};
use sc_obstruction::testbed::{apply_twist, classify_parity, derive_cocycle, fixtures};
use sc_obstruction::{FiniteAbelianGroup, Rat, Scalar};

const GROUPS: &[&[i64]] = &[&[1], &[2], &[3], &[4], &[5], &[6], &[2, 2], &[4, 2], &[3, 3], &[2, 2, 2], &[8], &[6, 2]];

fn group() -> impl Strategy<Value = FiniteAbelianGroup> {
    (0..GROUPS.len()).prop_map(|k| FiniteAbelianGroup::new(GROUPS[k]).unwrap())
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (1i128..6, 1i128..6, 0i64..24, prop::sample::select(vec![1i64, 2, 3, 4, 6, 8, 12, 24]))
        .prop_map(|(p, q, r, s)| Scalar::new(Rat::new(p, q), num_rational::Ratio::new(r, s)).unwrap())
}

fn scalars(len: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), len)
}

fn group_with_cochain2() -> impl Strategy<Value = Cochain2> {
    group().prop_flat_map(|g| {
        let n = g.order();
        scalars(n * n).prop_map(move |values| Cochain2 { group: g.clone(), values })
    })
}

fn group_with_cochain1() -> impl Strategy<Value = Cochain1> {
    group().prop_flat_map(|g| {
        let n = g.order();
        scalars(n).prop_map(move |values| Cochain1 { group: g.clone(), values })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalars_form_a_group(a in scalar(), b in scalar()) {
        prop_assert!((a * a.inv()).is_one());
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a * b) / b, a);
    }

    #[test]
    fn nth_roots_are_roots(a in scalar(), n in 1u32..7) {
        let a2 = a.pow(n as i64);
        let roots = a2.nth_roots(n).unwrap();
        prop_assert_eq!(roots.len(), n as usize);
        for (k, r) in roots.iter().enumerate() {
            prop_assert_eq!(r.pow(n as i64), a2);
            prop_assert!(roots[..k].iter().all(|s| s != r));
        }
    }

    #[test]
    fn d2_of_d1_is_trivial(phi in group_with_cochain1()) {
        prop_assert!(d2(&d1(&phi)).is_trivial());
    }

    #[test]
    fn two_cocycle_test_matches_d2(f in group_with_cochain2(), phi in group_with_cochain1()) {
        prop_assert_eq!(is_abelian_2_cocycle(&f), d2(&f).is_trivial());
        let mut psi = phi.clone();
        psi.group = f.group.clone();
        psi.values.resize(f.group.order(), Scalar::one());
        prop_assert!(is_abelian_2_cocycle(&d1(&psi)));
    }

    #[test]
    fn coboundaries_are_cocycles_with_trivial_trace(f in group_with_cochain2()) {
        let c = d2(&f);
        prop_assert!(is_abelian_3_cocycle(&c).ok());
        prop_assert!(trace(&c).unwrap().is_trivial());
    }

    #[test]
    fn trace_is_twist_invariant(f in group_with_cochain2(), seed in 0usize..1000) {
        let g = f.group.clone();
        let q = QuadraticForm::from_fn(&g, |i| {
            let c = g.coords_of(i);
            let e: i64 = c.iter().map(|x| x * x * (seed as i64 % 5 + 1)).sum();
            Scalar::root_of_unity(e, 2 * g.exponent())
        });
        prop_assume!(sc_obstruction::quadratic::is_quadratic_form(&q).is_none());
        let c = cocycle_from_form(&q).unwrap();
        let twisted = twist(&c, &f);
        prop_assert!(is_abelian_3_cocycle(&twisted).ok());
        prop_assert_eq!(trace(&twisted).unwrap(), q);
    }

    #[test]
    fn equal_traces_differ_by_a_twist(f in group_with_cochain2()) {
        let g = f.group.clone();
        let q = QuadraticForm::from_fn(&g, |i| {
            let c = g.coords_of(i);
            let orders = g.cyclic_orders();
            let e: i64 = c.iter().zip(orders).map(|(x, n)| x * x * (2 * g.exponent() / n) * if n % 2 == 0 { 1 } else { 2 }).sum();
            Scalar::root_of_unity(e, 2 * g.exponent())
        });
        prop_assume!(sc_obstruction::quadratic::is_quadratic_form(&q).is_none());
        let c1 = cocycle_from_form(&q).unwrap();
        let c2 = twist(&c1, &f);
        match trivialize_3cocycle(&c2.pointwise_mul(&c1.inverse())).unwrap() {
            Trivialization::Trivial(mu) => prop_assert_eq!(d2(&mu), c2.pointwise_mul(&c1.inverse())),
            Trivialization::Obstructed { .. } => prop_assert!(false, "equal traces must be connected"),
        }
    }

    #[test]
    fn twisting_shifts_the_derived_cocycle(values in scalars(9)) {
        let a = fixtures::twisted_z3();
        let mut lambda = Cochain2 { group: a.group.clone(), values };
        for i in 0..3 {
            lambda.set(0, i, Scalar::one());
            lambda.set(i, 0, Scalar::one());
        }
        let c = derive_cocycle(&a).unwrap();
        prop_assert_eq!(derive_cocycle(&apply_twist(&a, &lambda).unwrap()).unwrap(), twist(&c, &lambda));
    }

    #[test]
    fn expansion_is_multiplicative(a in prop::array::uniform6(-2i32..3), b in prop::array::uniform6(-2i32..3)) {
        let mut a = a;
        let mut b = b;
        for e in [&mut a, &mut b] {
            e[Coord::T.index()] = 0;
            e[Coord::ZT.index()] = 0;
            e[Coord::WT.index()] = 0;
        }
        let tower = Space::tower("z;w", &[Coord::Z, Coord::W]);
        let prod: [i32; 6] = std::array::from_fn(|k| a[k] + b[k]);
        let lhs = expand(&Monomial::new(a), &tower, 6).unwrap().mul(&expand(&Monomial::new(b), &tower, 6).unwrap()).unwrap();
        let rhs = expand(&Monomial::new(prod), &tower, 6).unwrap();
        prop_assert!(lhs.agrees_with(&rhs).unwrap());
    }

    #[test]
    fn taylor_shifts_compose(m in -3i32..4, n in -3i32..4) {
        let space = Space::tower("w;z-w", &[Coord::W, Coord::ZW]);
        let s = expand(&Monomial::new([0, m, 0, n, 0, 0]), &space, 8).unwrap();
        let once = taylor_shift(&s, Coord::ZW, Rat::from_integer(1), Coord::W).unwrap();
        let twice = taylor_shift(&once, Coord::ZW, Rat::from_integer(1), Coord::W).unwrap();
        let double = taylor_shift(&s, Coord::ZW, Rat::from_integer(2), Coord::W).unwrap();
        prop_assert!(twice.agrees_with(&double).unwrap());
    }
}

#[test]
fn group_axioms_up_to_order_32() {
    let mut specs: Vec<Vec<i64>> = Vec::new();
    for n in 1..=32 {
        specs.push(vec![n]);
    }
    for (a, b) in [(2, 2), (4, 2), (6, 2), (8, 2), (4, 4), (3, 3), (10, 2), (12, 2), (16, 2), (6, 3), (8, 4)] {
        specs.push(vec![a, b]);
    }
    for s in [
        vec![2, 2, 2],
        vec![4, 2, 2],
        vec![2, 2, 2, 2],
        vec![3, 2, 2],
        vec![8, 2, 2],
        vec![4, 4, 2],
        vec![2, 2, 2, 2, 2],
    ] {
        specs.push(s);
    }
    for s in specs {
        let g = FiniteAbelianGroup::new(&s).unwrap();
        assert!(g.order() <= 32);
        for a in g.elements() {
            assert_eq!(g.add(a, g.zero()), a);
            assert_eq!(g.add(a, g.neg(a)), g.zero());
            for b in g.elements() {
                assert_eq!(g.add(a, b), g.add(b, a));
                for c in g.elements() {
                    assert_eq!(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
                }
            }
        }
    }
}

#[test]
fn quotient_pullback_is_injective_on_coset_functions() {
    let g: FiniteAbelianGroup = "4,2".parse().unwrap();
    let b = g.generated_subgroup(&[g.parse_element("(2,1)").unwrap()]);
    let q = quotient_group(&g, &b).unwrap();
    let k = q.group.order();
    let mut seen = std::collections::HashSet::new();
    for code in 0..(1usize << k) {
        let fbar: Vec<bool> = (0..k).map(|x| code >> x & 1 == 1).collect();
        let f: Vec<bool> = g.elements().map(|a| fbar[q.projection[a]]).collect();
        for a in g.elements() {
            for &x in &b {
                assert_eq!(f[a], f[g.add(a, x)]);
            }
        }
        assert!(seen.insert(f));
    }
}

#[test]
fn trivialization_decided_by_trace_on_small_groups() {
    // Every class on Z/2 and Z/3 with 12th-root values is the class of a form;
    // random twists give non-normalized representatives of each class.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [2i64, 3] {
        let g = FiniteAbelianGroup::cyclic(n);
        for k in 0..12 {
            let q = QuadraticForm::from_fn(&g, |i| Scalar::root_of_unity(k * (i * i) as i64, 12));
            if sc_obstruction::quadratic::is_quadratic_form(&q).is_some() {
                continue;
            }
            let c = cocycle_from_form(&q).unwrap();
            for _ in 0..4 {
                let values = (0..n * n).map(|_| Scalar::root_of_unity(rng.gen_range(0..12), 12)).collect();
                let lambda = Cochain2 { group: g.clone(), values };
                let rep: AbelianCochain3 = twist(&c, &lambda);
                let trivial = matches!(trivialize_3cocycle(&rep).unwrap(), Trivialization::Trivial(_));
                assert_eq!(trivial, q.is_trivial(), "Z/{n}, k = {k}");
            }
        }
    }
}

#[test]
fn parity_matches_omega_on_fixtures() {
    for a in [
        fixtures::exterior_c3(),
        fixtures::z4_parity_wedge(),
        fixtures::twisted_z3(),
        fixtures::twisted_z5(),
        fixtures::truncated_polynomial(),
    ] {
        let c = derive_cocycle(&a).unwrap();
        for i in a.group.elements() {
            let o = c.omega_at(i, i);
            assert!(o.is_one() || o == Scalar::minus_one());
            if let Ok(p) = classify_parity(&a, i) {
                assert_eq!(p.omega, o);
            }
        }
    }
}
