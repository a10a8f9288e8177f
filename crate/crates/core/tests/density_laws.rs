use latticestat::{count_upto, density_exact, empirical_density, Density, IndexSet, Scalar};
use proptest::prelude::*;

// Independent mirror of the index-set language. Membership here is computed
// by direct arithmetic, never through the library.
#[derive(Debug, Clone)]
enum Tree {
    Finite(Vec<u64>),
    Cofinite(Vec<u64>),
    Ap(u64, u64),
    Squares,
    Union(Box<Tree>, Box<Tree>),
    Inter(Box<Tree>, Box<Tree>),
    Not(Box<Tree>),
}

impl Tree {
    fn has(&self, n: u64) -> bool {
        match self {
            Tree::Finite(xs) => xs.contains(&n),
            Tree::Cofinite(xs) => !xs.contains(&n),
            Tree::Ap(a, d) => n >= *a && (n - a) % d == 0,
            Tree::Squares => (1..=n).take_while(|k| k * k <= n).any(|k| k * k == n),
            Tree::Union(a, b) => a.has(n) || b.has(n),
            Tree::Inter(a, b) => a.has(n) && b.has(n),
            Tree::Not(a) => !a.has(n),
        }
    }

    fn build(&self) -> IndexSet {
        match self {
            Tree::Finite(xs) => IndexSet::finite(xs.clone()).unwrap(),
            Tree::Cofinite(xs) => IndexSet::cofinite(xs.clone()).unwrap(),
            Tree::Ap(a, d) => IndexSet::ap(*a, *d).unwrap(),
            Tree::Squares => IndexSet::Squares,
            Tree::Union(a, b) => IndexSet::union(a.build(), b.build()),
            Tree::Inter(a, b) => IndexSet::inter(a.build(), b.build()),
            Tree::Not(a) => IndexSet::complement(a.build()),
        }
    }

    /// Count deviation allowance: every leaf may shift the count of any
    /// boolean combination by at most its own deviation from `density · N`.
    fn slack(&self, n: u64) -> f64 {
        match self {
            Tree::Finite(xs) | Tree::Cofinite(xs) => xs.len() as f64,
            Tree::Ap(a, _) => 1.0 + *a as f64,
            Tree::Squares => (n as f64).sqrt() + 1.0,
            Tree::Union(a, b) | Tree::Inter(a, b) => a.slack(n) + b.slack(n),
            Tree::Not(a) => a.slack(n),
        }
    }
}

fn leaf() -> impl Strategy<Value = Tree> {
    prop_oneof![
        prop::collection::vec(1u64..=40, 0..4).prop_map(Tree::Finite),
        prop::collection::vec(1u64..=40, 0..4).prop_map(Tree::Cofinite),
        (1u64..=6, 1u64..=6).prop_map(|(a, d)| Tree::Ap(a, d)),
        Just(Tree::Squares),
    ]
}

fn tree() -> impl Strategy<Value = Tree> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Union(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Inter(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Tree::Not(Box::new(a))),
        ]
    })
}

fn density_one() -> impl Strategy<Value = IndexSet> {
    let base = prop_oneof![
        prop::collection::vec(1u64..=40, 0..4).prop_map(|xs| IndexSet::cofinite(xs).unwrap()),
        Just(IndexSet::complement(IndexSet::Squares)),
        prop::collection::vec(1u64..=40, 0..4).prop_map(|xs| IndexSet::complement(IndexSet::finite(xs).unwrap())),
        (1u64..=5).prop_map(|a| IndexSet::ap(a, 1).unwrap()),
    ];
    (base, tree()).prop_map(|(b, t)| IndexSet::union(b, t.build()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn membership_matches_mirror(t in tree()) {
        let set = t.build();
        for n in 1..=10_000u64 {
            prop_assert_eq!(set.contains(n), t.has(n), "n = {}", n);
        }
    }

    #[test]
    fn count_matches_brute_force(t in tree(), n in 1u64..=2000) {
        let brute = (1..=n).filter(|&k| t.has(k)).count() as u64;
        prop_assert_eq!(count_upto(&t.build(), n).unwrap(), brute);
    }

    #[test]
    fn count_is_monotone(t in tree(), n in 1u64..=3000) {
        let set = t.build();
        let (a, b) = (count_upto(&set, n).unwrap(), count_upto(&set, n + 1).unwrap());
        prop_assert!(a <= b && b <= a + 1);
    }

    #[test]
    fn inclusion_exclusion(s in tree(), t in tree(), n in 1u64..=3000) {
        let (a, b) = (s.build(), t.build());
        let union = count_upto(&IndexSet::union(a.clone(), b.clone()), n).unwrap();
        let inter = count_upto(&IndexSet::inter(a.clone(), b.clone()), n).unwrap();
        prop_assert_eq!(union + inter, count_upto(&a, n).unwrap() + count_upto(&b, n).unwrap());
    }

    #[test]
    fn empirical_density_tracks_exact(t in tree(), n in 1000u64..=20_000) {
        let set = t.build();
        if let Density::Exact(q) = density_exact(&set) {
            let err = (empirical_density(&set, n).unwrap().to_f64() - q.to_f64()).abs();
            prop_assert!(err <= t.slack(n) / n as f64 + 1e-12, "err {} at N = {}", err, n);
        }
    }

    #[test]
    fn leaf_density_within_two_over_root_n(t in leaf(), n in 100u64..=50_000) {
        let set = t.build();
        let Density::Exact(q) = density_exact(&set) else { panic!("leaves have exact density") };
        let err = (empirical_density(&set, n).unwrap().to_f64() - q.to_f64()).abs();
        prop_assert!(err <= 2.0 / (n as f64).sqrt());
    }

    #[test]
    fn density_one_closed_under_intersection(a in density_one(), b in density_one()) {
        prop_assert!(density_exact(&a).is_one() && density_exact(&b).is_one());
        let both = IndexSet::inter(a, b);
        prop_assert!(density_exact(&both).is_one());
        let miss = 10_000 - count_upto(&both, 10_000).unwrap();
        // at most the squares, the listed points and a short prefix are missing
        prop_assert!(miss <= 2 * 100 + 16);
    }

    #[test]
    fn display_round_trips(t in tree()) {
        let set = t.build();
        let back: IndexSet = set.to_string().parse().unwrap();
        prop_assert_eq!(back, set);
    }

    #[test]
    fn next_member_is_least(t in tree(), n in 1u64..=500) {
        let set = t.build();
        let expect = (n..=1000).find(|&k| t.has(k));
        prop_assert_eq!(set.next_member(n, 1000), expect);
    }
}

#[test]
fn classical_densities() {
    let cases = [
        (IndexSet::ap(3, 4).unwrap(), Scalar::ratio(1, 4)),
        (IndexSet::Squares, Scalar::zero()),
        (IndexSet::complement(IndexSet::Squares), Scalar::one()),
        (IndexSet::inter(IndexSet::ap(1, 2).unwrap(), IndexSet::cofinite(vec![1, 3]).unwrap()), Scalar::ratio(1, 2)),
    ];
    for (set, q) in cases {
        assert_eq!(density_exact(&set), Density::Exact(q), "{set}");
    }
    // two proper progressions: not resolved structurally
    let unresolved = IndexSet::inter(IndexSet::ap(1, 2).unwrap(), IndexSet::ap(2, 3).unwrap());
    assert_eq!(density_exact(&unresolved), Density::Unknown);
}
