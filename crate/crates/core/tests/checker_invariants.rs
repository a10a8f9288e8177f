use latticestat::convergence::{
    check_doc, check_dopc, check_o_convergence, check_soc, check_socp, check_stat_order_bounded, reverify, Claim,
};
use latticestat::{
    CheckConfig, IndexSet, OperatorSequence as Seq, OrderBoundedOperator, Polynomial, RationalFunction, Scalar,
    SpaceDescriptor, Verdict,
};
use proptest::prelude::*;

const HORIZON: u64 = 300;

fn op(max: i64) -> impl Strategy<Value = OrderBoundedOperator> {
    prop::collection::vec(-max..=max, 4).prop_map(|e| {
        let s = SpaceDescriptor::finite(2).unwrap();
        OrderBoundedOperator::from_flat(s, s, e.into_iter().map(Scalar::from_int).collect()).unwrap()
    })
}

fn vanishing() -> impl Strategy<Value = RationalFunction> {
    prop_oneof![
        (1i64..=3, 0u64..=2).prop_map(|(k, s)| RationalFunction::harmonic(Scalar::from_int(k), s)),
        (1i64..=3, 0i64..=2).prop_map(|(k, s)| {
            RationalFunction::new(Polynomial::from_ints(&[k]), Polynomial::from_ints(&[s, 0, 1])).unwrap()
        }),
    ]
}

fn bad_set() -> impl Strategy<Value = IndexSet> {
    prop_oneof![
        Just(IndexSet::Squares),
        prop::collection::vec(1u64..=30, 1..4).prop_map(|xs| IndexSet::finite(xs).unwrap()),
        (1u64..=3, 2u64..=3).prop_map(|(a, d)| IndexSet::ap(a, d).unwrap()),
    ]
}

/// A sequence together with a candidate limit.
fn instance() -> impl Strategy<Value = (Seq, OrderBoundedOperator)> {
    let base = (op(3), op(2), vanishing(), 0u8..3).prop_map(|(r, k, c, flavor)| {
        let tail = match flavor {
            0 => Seq::scaled(c, k),
            // decreasing to R
            1 => Seq::scaled(c, k.op_modulus()),
            // increasing to R
            _ => Seq::scale(Scalar::from_int(-1), Seq::scaled(c, k.op_modulus())),
        };
        (Seq::sum(Seq::constant(r.clone()), tail), r)
    });
    let junk = prop_oneof![
        op(5).prop_map(Seq::constant),
        op(2).prop_map(|k| Seq::scaled(RationalFunction::index(), k.op_modulus())),
    ];
    (base, prop::option::of((bad_set(), junk)), 0u8..4, 0usize..4).prop_map(|((seq, r), spoil, shift, at)| {
        let seq = match spoil {
            Some((j, junk)) => Seq::piecewise(j, junk, seq),
            None => seq,
        };
        let mut entries = r.entries().to_vec();
        if shift == 0 {
            entries[at] = entries[at].clone() + Scalar::one();
        }
        (seq, OrderBoundedOperator::from_flat(r.domain(), r.codomain(), entries).unwrap())
    })
}

fn cfg() -> CheckConfig {
    CheckConfig::default().with_horizon(HORIZON)
}

fn replay(seq: &Seq, claim: Claim, v: &Verdict) -> Result<(), TestCaseError> {
    reverify(seq, claim, v, HORIZON).map_err(|e| TestCaseError::fail(format!("{}: {e}", v.certificate.variant())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_hierarchy((seq, r) in instance()) {
        let o = check_o_convergence(&seq, &r, &cfg()).unwrap();
        let soc = check_soc(&seq, &r, &cfg()).unwrap();
        let socp = check_socp(&seq, &r, &cfg()).unwrap();
        let bounded = check_stat_order_bounded(&seq, &cfg()).unwrap();
        if o.is_proven() {
            prop_assert!(soc.is_proven(), "o proven but soc {:?}", soc.status);
        }
        if soc.is_proven() {
            prop_assert!(!socp.is_refuted(), "soc proven but socp refuted");
            prop_assert!(bounded.is_proven(), "soc proven but not statistically bounded");
        }
        if soc.is_refuted() && o.is_proven() {
            prop_assert!(false, "o proven while soc refuted");
        }
        replay(&seq, Claim::Order(&r), &o)?;
        replay(&seq, Claim::Soc(&r), &soc)?;
        replay(&seq, Claim::Socp(&r), &socp)?;
        replay(&seq, Claim::StatBounded, &bounded)?;
    }

    #[test]
    fn doc_implies_dopc((seq, r) in instance()) {
        let doc = check_doc(&seq, &r, &cfg()).unwrap_or_else(|e| panic!("{e}"));
        let dopc = check_dopc(&seq, &r, &cfg()).unwrap();
        if doc.is_proven() {
            prop_assert!(!dopc.is_refuted(), "doc proven but dopc refuted");
        }
        replay(&seq, Claim::Doc(&r), &doc)?;
        replay(&seq, Claim::Dopc(&r), &dopc)?;
    }

    #[test]
    fn limits_are_unique((seq, r) in instance(), bump in op(1)) {
        let other = r.add(&bump).unwrap();
        prop_assume!(other != r);
        let a = check_soc(&seq, &r, &cfg()).unwrap();
        let b = check_soc(&seq, &other, &cfg()).unwrap();
        prop_assert!(!(a.is_proven() && b.is_proven()));
    }
}

#[test]
fn unspoiled_harmonic_tail_is_proven_everywhere() {
    let s = SpaceDescriptor::finite(2).unwrap();
    let r = OrderBoundedOperator::from_ints(&[&[1, 0], &[2, -1]]).unwrap();
    let k = OrderBoundedOperator::identity(s);
    let seq = Seq::sum(Seq::constant(r.clone()), Seq::scaled(RationalFunction::harmonic(Scalar::one(), 0), k));
    let cfg = cfg();
    assert!(check_o_convergence(&seq, &r, &cfg).unwrap().is_proven());
    assert!(check_soc(&seq, &r, &cfg).unwrap().is_proven());
    assert!(check_socp(&seq, &r, &cfg).unwrap().is_proven());
    assert!(check_doc(&seq, &r, &cfg).unwrap().is_proven());
    assert!(check_dopc(&seq, &r, &cfg).unwrap().is_proven());
    assert!(check_stat_order_bounded(&seq, &cfg).unwrap().is_proven());
}
