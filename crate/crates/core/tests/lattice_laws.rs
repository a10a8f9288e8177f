use latticestat::{LatticeVector, Scalar, SpaceDescriptor};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (1i64..=3).prop_flat_map(|q| (-5 * q..=5 * q).prop_map(move |p| Scalar::ratio(p, q)))
}

fn vectors(k: usize) -> impl Strategy<Value = Vec<LatticeVector>> {
    (1usize..=4).prop_flat_map(move |d| {
        let space = SpaceDescriptor::finite(d).unwrap();
        prop::collection::vec(prop::collection::vec(scalar(), d), k)
            .prop_map(move |vs| vs.into_iter().map(|c| LatticeVector::new(space, c).unwrap()).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn join_plus_meet_is_sum(vs in vectors(2)) {
        let (u, v) = (&vs[0], &vs[1]);
        let lhs = u.join(v).unwrap().add(&u.meet(v).unwrap()).unwrap();
        prop_assert_eq!(lhs, u.add(v).unwrap());
    }

    #[test]
    fn modulus_splits_into_disjoint_parts(vs in vectors(1)) {
        let u = &vs[0];
        prop_assert_eq!(u.abs(), u.pos_part().add(&u.neg_part()).unwrap());
        prop_assert!(u.pos_part().meet(&u.neg_part()).unwrap().is_zero());
        prop_assert_eq!(u.pos_part().sub(&u.neg_part()).unwrap(), u.clone());
    }

    #[test]
    fn reverse_triangle(vs in vectors(2)) {
        let (u, v) = (&vs[0], &vs[1]);
        let lhs = u.abs().sub(&v.abs()).unwrap().abs();
        prop_assert!(lhs.leq(&u.sub(v).unwrap().abs()).unwrap());
    }

    #[test]
    fn birkhoff(vs in vectors(4)) {
        let (x, y, a, b) = (&vs[0], &vs[1], &vs[2], &vs[3]);
        let rhs = x.sub(a).unwrap().abs().add(&y.sub(b).unwrap().abs()).unwrap();
        let join = x.join(y).unwrap().sub(&a.join(b).unwrap()).unwrap().abs();
        let meet = x.meet(y).unwrap().sub(&a.meet(b).unwrap()).unwrap().abs();
        prop_assert!(join.leq(&rhs).unwrap());
        prop_assert!(meet.leq(&rhs).unwrap());
    }

    #[test]
    fn join_is_least_upper_bound(vs in vectors(3)) {
        let (u, v, w) = (&vs[0], &vs[1], &vs[2]);
        let j = u.join(v).unwrap();
        prop_assert!(u.leq(&j).unwrap() && v.leq(&j).unwrap());
        if u.leq(w).unwrap() && v.leq(w).unwrap() {
            prop_assert!(j.leq(w).unwrap());
        }
        let m = u.meet(v).unwrap();
        prop_assert!(m.leq(u).unwrap() && m.leq(v).unwrap());
    }

    #[test]
    fn sup_list_bounds_every_member(vs in vectors(4)) {
        let s = latticestat::sup_list(&vs).unwrap();
        for v in &vs {
            prop_assert!(v.leq(&s).unwrap());
        }
        let folded = vs[1..].iter().fold(vs[0].clone(), |acc, v| acc.join(v).unwrap());
        prop_assert_eq!(s, folded);
    }
}

#[test]
fn archimedean_scaling_reaches_theta() {
    let space = SpaceDescriptor::finite(3).unwrap();
    let u = LatticeVector::new(space, vec![Scalar::from_int(5), Scalar::ratio(1, 3), Scalar::zero()]).unwrap();
    let mut inf = u.clone();
    for n in 1..=1000i64 {
        inf = inf.meet(&u.scale(&Scalar::ratio(1, n))).unwrap();
    }
    // the infimum over n ≤ N is u/N, which drops below any fixed positive level
    assert_eq!(inf, u.scale(&Scalar::ratio(1, 1000)));
    assert!(inf.coords().iter().all(|c| c <= &Scalar::ratio(1, 100)));
}
