use latticestat::ratfn::Direction;
use latticestat::syntax::{parse_sequence, Env};
use latticestat::{
    IndexSet, OperatorSequence as Seq, OrderBoundedOperator, Polynomial, RationalFunction, Scalar, SpaceDescriptor,
};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (1i64..=3).prop_flat_map(|q| (-4 * q..=4 * q).prop_map(move |p| Scalar::ratio(p, q)))
}

fn square(d: usize) -> impl Strategy<Value = OrderBoundedOperator> {
    prop::collection::vec(scalar(), d * d).prop_map(move |e| {
        let s = SpaceDescriptor::finite(d).unwrap();
        OrderBoundedOperator::from_flat(s, s, e).unwrap()
    })
}

fn ratfn() -> impl Strategy<Value = RationalFunction> {
    // numerator of degree ≤ 2 over n + s or n² + s
    (prop::collection::vec(-3i64..=3, 1..=3), 0i64..=3, any::<bool>()).prop_map(|(num, s, quad)| {
        let den = if quad { vec![s, 0, 1] } else { vec![s, 1] };
        RationalFunction::new(Polynomial::from_ints(&num), Polynomial::from_ints(&den)).unwrap()
    })
}

fn index_set() -> impl Strategy<Value = IndexSet> {
    prop_oneof![
        Just(IndexSet::Squares),
        (1u64..=4, 1u64..=4).prop_map(|(a, d)| IndexSet::ap(a, d).unwrap()),
        prop::collection::vec(1u64..=30, 1..4).prop_map(|xs| IndexSet::finite(xs).unwrap()),
        Just(IndexSet::complement(IndexSet::Squares)),
    ]
}

fn seq(d: usize) -> impl Strategy<Value = Seq> {
    let leaf = prop_oneof![square(d).prop_map(Seq::constant), (ratfn(), square(d)).prop_map(|(c, t)| Seq::scaled(c, t)),];
    leaf.prop_recursive(3, 16, 2, move |inner| {
        prop_oneof![
            (index_set(), inner.clone(), inner.clone()).prop_map(|(j, a, b)| Seq::piecewise(j, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Seq::sum(a, b)),
            (scalar(), inner.clone()).prop_map(|(k, a)| Seq::scale(k, a)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Seq::join(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Seq::meet(a, b)),
            inner.clone().prop_map(Seq::abs),
            inner.clone().prop_map(Seq::pos_part),
            (square(d), inner.clone()).prop_map(|(t, a)| Seq::compose_left(t, a)),
            (inner, square(d)).prop_map(|(a, p)| Seq::compose_right(a, p)),
        ]
    })
}

fn sized_seq() -> impl Strategy<Value = (usize, Seq)> {
    (1usize..=3).prop_flat_map(|d| seq(d).prop_map(move |s| (d, s)))
}

type Mat = Vec<Scalar>;

fn zip(a: &Mat, b: &Mat, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Mat {
    a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn matmul(a: &Mat, b: &Mat, d: usize) -> Mat {
    let mut out = vec![Scalar::zero(); d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out[i * d + j] = out[i * d + j].clone() + a[i * d + k].clone() * b[k * d + j].clone();
            }
        }
    }
    out
}

// Entrywise evaluation: on a finite coordinate space the operator lattice
// is the entrywise order on matrices.
fn mirror(s: &Seq, n: u64, d: usize) -> Mat {
    let zero = Scalar::zero();
    match s {
        Seq::Const(t) => t.entries().to_vec(),
        Seq::ScaledOp(c, t) => {
            let k = c.eval_u64(n);
            t.entries().iter().map(|x| k.clone() * x.clone()).collect()
        }
        Seq::Piecewise(j, a, b) => mirror(if j.contains(n) { a } else { b }, n, d),
        Seq::Sum(a, b) => zip(&mirror(a, n, d), &mirror(b, n, d), |x, y| x.clone() + y.clone()),
        Seq::Scale(k, a) => mirror(a, n, d).into_iter().map(|x| k.clone() * x).collect(),
        Seq::Join(a, b) => zip(&mirror(a, n, d), &mirror(b, n, d), |x, y| x.clone().max(y.clone())),
        Seq::Meet(a, b) => zip(&mirror(a, n, d), &mirror(b, n, d), |x, y| x.clone().min(y.clone())),
        Seq::Abs(a) => mirror(a, n, d).iter().map(Scalar::abs).collect(),
        Seq::PosPart(a) => mirror(a, n, d).into_iter().map(|x| x.max(zero.clone())).collect(),
        Seq::ComposeLeft(t, a) => matmul(&t.entries().to_vec(), &mirror(a, n, d), d),
        Seq::ComposeRight(a, p) => matmul(&mirror(a, n, d), &p.entries().to_vec(), d),
        Seq::CoordFunctional(_) => unreachable!("not generated"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn eval_matches_entrywise_mirror((d, s) in sized_seq()) {
        prop_assert!(s.depth() <= 5);
        for n in 1..=200u64 {
            prop_assert_eq!(s.eval(n).unwrap().entries().to_vec(), mirror(&s, n, d), "n = {}", n);
        }
    }

    #[test]
    fn eval_is_linear(
        (a, b) in (1usize..=3).prop_flat_map(|d| (seq(d), seq(d))),
        alpha in scalar(),
        beta in scalar(),
        n in 1u64..=200,
    ) {
        let combo = Seq::sum(Seq::scale(alpha.clone(), a.clone()), Seq::scale(beta.clone(), b.clone()));
        let expect = a.eval(n).unwrap().scale(&alpha).add(&b.eval(n).unwrap().scale(&beta)).unwrap();
        prop_assert_eq!(combo.eval(n).unwrap(), expect);
    }

    #[test]
    fn display_parses_back((_, s) in sized_seq(), n in 1u64..=50) {
        let back = parse_sequence(&s.to_string(), &Env::default()).unwrap();
        prop_assert_eq!(back.eval(n).unwrap(), s.eval(n).unwrap());
    }

    #[test]
    fn scaled_positive_operator_decreases(c in ratfn(), k in square(2)) {
        let m = c.monotonicity();
        prop_assume!(m.direction == Direction::Decreasing && m.from < 1000);
        let k = k.op_modulus();
        let s = Seq::scaled(c.clone(), k);
        for n in m.from.max(1)..m.from.max(1) + 300 {
            prop_assert!(c.eval_u64(n + 1) <= c.eval_u64(n), "n = {}", n);
            prop_assert!(s.eval(n + 1).unwrap().op_leq(&s.eval(n).unwrap()).unwrap());
        }
    }
}

#[test]
fn coordinate_functionals_step_and_vanish() {
    let s = Seq::CoordFunctional(4);
    for n in 1..=8u64 {
        let t = s.eval(n).unwrap();
        let ones: Vec<usize> = (0..4).filter(|&j| !t.entry(0, j).is_zero()).collect();
        assert_eq!(ones, if n <= 4 { vec![n as usize - 1] } else { vec![] });
    }
    assert!(s.eval(0).is_err());
}
