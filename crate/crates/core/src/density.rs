//! Subsets of ℕ = {1, 2, ...} and their natural density.
//!
//! [`IndexSet`] is a small symbolic algebra. [`density_exact`] only answers
//! when a structural rule applies; everything else is [`Density::Unknown`] and
//! is never guessed from counts. [`empirical_density`] gives the exact finite
//! ratio `|J ∩ [1..N]| / N`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratfn::RationalFunction;
use crate::scalar::{isqrt, Scalar};
use crate::verdict::Status;

/// Named pure membership rule.
#[derive(Clone)]
pub struct Predicate {
    name: String,
    rule: Arc<dyn Fn(u64) -> bool + Send + Sync>,
}

impl Predicate {
    pub fn new(name: impl Into<String>, rule: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        Predicate {
            name: name.into(),
            rule: Arc::new(rule),
        }
    }

    /// Built-in rules available from the text syntax.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "primes" => Some(Predicate::new("primes", is_prime)),
            "pow2" => Some(Predicate::new("pow2", |n: u64| n.is_power_of_two())),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.rule)(n)
    }
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Predicate {}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pred({})", self.name)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSet {
    /// Sorted, duplicate-free members.
    Finite(Vec<u64>),
    /// ℕ minus a sorted, duplicate-free list.
    Cofinite(Vec<u64>),
    /// `{offset, offset + step, ...}`, both at least 1.
    Ap { offset: u64, step: u64 },
    /// Perfect squares.
    Squares,
    Union(Box<IndexSet>, Box<IndexSet>),
    Intersection(Box<IndexSet>, Box<IndexSet>),
    Complement(Box<IndexSet>),
    Predicate(Predicate),
}

fn normalize_list(mut xs: Vec<u64>) -> Result<Vec<u64>> {
    if xs.contains(&0) {
        return Err(Error::Usage("index sets live in {1, 2, ...}".into()));
    }
    xs.sort_unstable();
    xs.dedup();
    Ok(xs)
}

impl IndexSet {
    pub fn naturals() -> Self {
        IndexSet::Cofinite(vec![])
    }

    pub fn empty() -> Self {
        IndexSet::Finite(vec![])
    }

    pub fn finite(xs: Vec<u64>) -> Result<Self> {
        Ok(IndexSet::Finite(normalize_list(xs)?))
    }

    pub fn cofinite(xs: Vec<u64>) -> Result<Self> {
        Ok(IndexSet::Cofinite(normalize_list(xs)?))
    }

    pub fn ap(offset: u64, step: u64) -> Result<Self> {
        if offset == 0 || step == 0 {
            return Err(Error::Usage("ap(a, d) needs a >= 1 and d >= 1".into()));
        }
        Ok(IndexSet::Ap { offset, step })
    }

    pub fn union(a: IndexSet, b: IndexSet) -> Self {
        IndexSet::Union(Box::new(a), Box::new(b))
    }

    pub fn inter(a: IndexSet, b: IndexSet) -> Self {
        IndexSet::Intersection(Box::new(a), Box::new(b))
    }

    pub fn complement(a: IndexSet) -> Self {
        IndexSet::Complement(Box::new(a))
    }

    pub fn is_naturals(&self) -> bool {
        matches!(self, IndexSet::Cofinite(v) if v.is_empty())
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            IndexSet::Finite(xs) => xs.binary_search(&n).is_ok(),
            IndexSet::Cofinite(xs) => xs.binary_search(&n).is_err(),
            IndexSet::Ap { offset, step } => n >= *offset && (n - offset) % step == 0,
            IndexSet::Squares => {
                let r = isqrt(n);
                r * r == n
            }
            IndexSet::Union(a, b) => a.contains(n) || b.contains(n),
            IndexSet::Intersection(a, b) => a.contains(n) && b.contains(n),
            IndexSet::Complement(a) => !a.contains(n),
            IndexSet::Predicate(p) => p.contains(n),
        }
    }

    /// Smallest member `>= n`, searching no further than `limit`.
    pub fn next_member(&self, n: u64, limit: u64) -> Option<u64> {
        (n.max(1)..=limit).find(|&k| self.contains(k))
    }

    fn count_closed(&self, n: u64) -> Option<u64> {
        let below = |xs: &[u64]| xs.partition_point(|&x| x <= n) as u64;
        match self {
            IndexSet::Finite(xs) => Some(below(xs)),
            IndexSet::Cofinite(xs) => Some(n - below(xs)),
            IndexSet::Ap { offset, step } => Some(if *offset <= n { (n - offset) / step + 1 } else { 0 }),
            IndexSet::Squares => Some(isqrt(n)),
            IndexSet::Complement(a) => a.count_closed(n).map(|c| n - c),
            IndexSet::Intersection(a, b) | IndexSet::Union(a, b) => {
                let is_union = matches!(self, IndexSet::Union(..));
                let (list, other, cofinite) = match (a.as_ref(), b.as_ref()) {
                    (IndexSet::Finite(xs), o) | (o, IndexSet::Finite(xs)) => (xs, o, false),
                    (IndexSet::Cofinite(xs), o) | (o, IndexSet::Cofinite(xs)) => (xs, o, true),
                    _ => return None,
                };
                let on_list = list.iter().take_while(|&&x| x <= n).filter(|&&x| other.contains(x)).count() as u64;
                let listed = below(list);
                match (is_union, cofinite) {
                    // A ∩ F
                    (false, false) => Some(on_list),
                    // A ∩ (ℕ \ F) = A minus the listed members of A
                    (false, true) => other.count_upto_unchecked(n).map(|c| c - on_list),
                    // A ∪ F
                    (true, false) => other.count_upto_unchecked(n).map(|c| c + listed - on_list),
                    // A ∪ (ℕ \ F): everything except listed non-members of A
                    (true, true) => Some(n - (listed - on_list)),
                }
            }
            IndexSet::Predicate(_) => None,
        }
    }

    fn count_upto_unchecked(&self, n: u64) -> Option<u64> {
        Some(self.count_closed(n).unwrap_or_else(|| (1..=n).filter(|&k| self.contains(k)).count() as u64))
    }

    /// Density-0 / density-1 structure recognized without counting.
    pub fn density(&self) -> Density {
        density_exact(self)
    }

    /// `Some(b)` when the set is provably contained in `[1..b]`.
    pub fn finite_bound(&self) -> Option<u64> {
        match self {
            IndexSet::Finite(xs) => Some(xs.last().copied().unwrap_or(0)),
            IndexSet::Intersection(a, b) => match (a.finite_bound(), b.finite_bound()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                _ => None,
            },
            IndexSet::Union(a, b) => Some(a.finite_bound()?.max(b.finite_bound()?)),
            IndexSet::Complement(a) => a.cofinite_bound(),
            _ => None,
        }
    }

    /// `Some(b)` when every integer above `b` is a member.
    pub fn cofinite_bound(&self) -> Option<u64> {
        match self {
            IndexSet::Cofinite(xs) => Some(xs.last().copied().unwrap_or(0)),
            IndexSet::Complement(a) => a.finite_bound(),
            IndexSet::Union(a, b) => match (a.cofinite_bound(), b.cofinite_bound()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                _ => None,
            },
            IndexSet::Intersection(a, b) => Some(a.cofinite_bound()?.max(b.cofinite_bound()?)),
            _ => None,
        }
    }

    /// Conservative infinitude test.
    pub fn is_provably_infinite(&self) -> bool {
        if let Density::Exact(q) = density_exact(self) {
            if q.is_positive() {
                return true;
            }
        }
        match self {
            IndexSet::Squares | IndexSet::Ap { .. } | IndexSet::Cofinite(_) => true,
            IndexSet::Finite(_) => false,
            IndexSet::Complement(a) => a.finite_bound().is_some(),
            IndexSet::Union(a, b) => a.is_provably_infinite() || b.is_provably_infinite(),
            IndexSet::Intersection(a, b) => {
                (a.is_provably_infinite() && b.cofinite_bound().is_some())
                    || (b.is_provably_infinite() && a.cofinite_bound().is_some())
            }
            IndexSet::Predicate(_) => false,
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, xs: &[u64]| -> fmt::Result {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        };
        match self {
            IndexSet::Cofinite(xs) if xs.is_empty() => write!(f, "naturals"),
            IndexSet::Finite(xs) => {
                write!(f, "finite(")?;
                list(f, xs)?;
                write!(f, ")")
            }
            IndexSet::Cofinite(xs) => {
                write!(f, "cofinite(")?;
                list(f, xs)?;
                write!(f, ")")
            }
            IndexSet::Ap { offset, step } => write!(f, "ap({offset}, {step})"),
            IndexSet::Squares => write!(f, "squares"),
            IndexSet::Union(a, b) => write!(f, "union({a}, {b})"),
            IndexSet::Intersection(a, b) => write!(f, "inter({a}, {b})"),
            IndexSet::Complement(a) => write!(f, "complement({a})"),
            IndexSet::Predicate(p) => write!(f, "pred({})", p.name),
        }
    }
}

impl FromStr for IndexSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::syntax::parse_index_set(s)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Density {
    Exact(Scalar),
    Unknown,
}

impl Density {
    pub fn is_one(&self) -> bool {
        matches!(self, Density::Exact(q) if *q == Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Density::Exact(q) if q.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Density::Exact(q) if q.is_positive())
    }
}

/// `|J ∩ [1..N]|`.
pub fn count_upto(set: &IndexSet, n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::Usage("count_upto needs N >= 1".into()));
    }
    Ok(set.count_upto_unchecked(n).expect("scan always succeeds"))
}

/// `count_upto(J, N) / N` as an exact rational.
pub fn empirical_density(set: &IndexSet, n: u64) -> Result<Scalar> {
    Ok(Scalar::from_u64(count_upto(set, n)?) / Scalar::from_u64(n))
}

/// Structural natural density.
pub fn density_exact(set: &IndexSet) -> Density {
    use Density::*;
    match set {
        IndexSet::Finite(_) | IndexSet::Squares => Exact(Scalar::zero()),
        IndexSet::Cofinite(_) => Exact(Scalar::one()),
        IndexSet::Ap { step, .. } => Exact(Scalar::ratio(1, *step as i64)),
        IndexSet::Complement(a) => match density_exact(a) {
            Exact(q) => Exact(Scalar::one() - q),
            Unknown => Unknown,
        },
        IndexSet::Intersection(a, b) => {
            let (da, db) = (density_exact(a), density_exact(b));
            if da.is_zero() || db.is_zero() {
                Exact(Scalar::zero())
            } else if da.is_one() && db.is_one() {
                Exact(Scalar::one())
            } else if da.is_one() {
                db
            } else if db.is_one() {
                da
            } else {
                Unknown
            }
        }
        IndexSet::Union(a, b) => {
            let (da, db) = (density_exact(a), density_exact(b));
            if da.is_one() || db.is_one() {
                Exact(Scalar::one())
            } else if da.is_zero() && db.is_zero() {
                Exact(Scalar::zero())
            } else if da.is_zero() {
                db
            } else if db.is_zero() {
                da
            } else {
                Unknown
            }
        }
        IndexSet::Predicate(_) => Unknown,
    }
}

/// Conjunction of index-set literals, the region on which one closed form of
/// a piecewise sequence is active. Finite and cofinite literals are absorbed
/// into a threshold: beyond it the region is exactly the conjunction of the
/// remaining literals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    lits: Vec<(IndexSet, bool)>,
}

impl Region {
    pub fn all() -> Self {
        Region::default()
    }

    pub fn literals(&self) -> &[(IndexSet, bool)] {
        &self.lits
    }

    /// Region ∩ (set or its complement). `None` when the result is empty for
    /// every index at or above `threshold` (which may be raised).
    pub fn and(&self, set: &IndexSet, positive: bool, threshold: &mut u64) -> Option<Region> {
        let mut out = self.clone();
        if out.push(set, positive, threshold) {
            Some(out)
        } else {
            None
        }
    }

    fn push(&mut self, set: &IndexSet, positive: bool, threshold: &mut u64) -> bool {
        match (set, positive) {
            (IndexSet::Complement(a), p) => self.push(a, !p, threshold),
            (IndexSet::Intersection(a, b), true) | (IndexSet::Union(a, b), false) => {
                self.push(a, positive, threshold) && self.push(b, positive, threshold)
            }
            (IndexSet::Cofinite(xs), p) | (IndexSet::Finite(xs), p) => {
                let cofinite_like = matches!(set, IndexSet::Cofinite(_)) == p;
                let max = xs.last().copied().unwrap_or(0);
                *threshold = (*threshold).max(max + 1);
                cofinite_like
            }
            (IndexSet::Union(a, b), true) | (IndexSet::Intersection(a, b), false) => {
                match self.resolve(a, b, positive, threshold) {
                    Some(ok) => ok,
                    None => self.atom(set, positive, threshold),
                }
            }
            _ => self.atom(set, positive, threshold),
        }
    }

    fn atom(&mut self, set: &IndexSet, positive: bool, threshold: &mut u64) -> bool {
        if self.lits.iter().any(|(s, p)| s == set && *p != positive) {
            return false;
        }
        if self.lits.iter().any(|(s, p)| s == set && *p == positive) {
            return true;
        }
        self.lits.push((set.clone(), positive));
        // the new literal may settle a stored disjunction
        while let Some(i) = self.lits.iter().position(|(s, p)| self.settles(s, *p)) {
            let (s, p) = self.lits.remove(i);
            if !self.push(&s, p, threshold) {
                return false;
            }
        }
        true
    }

    fn entails(&self, set: &IndexSet, positive: bool) -> bool {
        match set {
            IndexSet::Complement(a) => self.entails(a, !positive),
            _ => self.lits.iter().any(|(s, p)| s == set && *p == positive),
        }
    }

    /// Whether the stored literal is a disjunction one of whose sides is
    /// decided by the other literals.
    fn settles(&self, set: &IndexSet, positive: bool) -> bool {
        match (set, positive) {
            (IndexSet::Union(a, b), true) | (IndexSet::Intersection(a, b), false) => [a, b]
                .iter()
                .any(|x| self.entails(x, positive) || self.entails(x, !positive)),
            _ => false,
        }
    }

    /// `x ∨ y` where each side is read with polarity `positive`. Returns the
    /// result of pushing the reduced form, or `None` if nothing simplifies.
    fn resolve(&mut self, a: &IndexSet, b: &IndexSet, positive: bool, threshold: &mut u64) -> Option<bool> {
        for (x, y) in [(a, b), (b, a)] {
            // x holds at no index from some point on
            let vanishes = if positive { x.finite_bound() } else { x.cofinite_bound() };
            if let Some(m) = vanishes {
                *threshold = (*threshold).max(m + 1);
                return Some(self.push(y, positive, threshold));
            }
            if self.entails(x, !positive) {
                return Some(self.push(y, positive, threshold));
            }
            if self.entails(x, positive) {
                return Some(true);
            }
        }
        None
    }

    pub fn contains(&self, n: u64) -> bool {
        self.lits.iter().all(|(s, p)| s.contains(n) == *p)
    }

    pub fn to_index_set(&self) -> IndexSet {
        let lit = |(s, p): &(IndexSet, bool)| {
            if *p {
                s.clone()
            } else {
                IndexSet::complement(s.clone())
            }
        };
        let mut it = self.lits.iter();
        match it.next() {
            None => IndexSet::naturals(),
            Some(first) => it.fold(lit(first), |acc, l| IndexSet::inter(acc, lit(l))),
        }
    }

    pub fn density(&self) -> Density {
        density_exact(&self.to_index_set())
    }
}

/// `ℕ \ (A₁ ∪ … ∪ A_k)`, or ℕ when the list is empty.
pub fn complement_of_union(sets: &[IndexSet]) -> IndexSet {
    let mut it = sets.iter().cloned();
    match it.next() {
        None => IndexSet::naturals(),
        Some(first) => {
            if sets.len() == 1 {
                IndexSet::complement(first)
            } else {
                IndexSet::complement(it.fold(first, IndexSet::union))
            }
        }
    }
}

/// Real sequence given piecewise by rational functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealSequence {
    Closed(RationalFunction),
    Piecewise(IndexSet, Box<RealSequence>, Box<RealSequence>),
}

impl RealSequence {
    pub fn eval(&self, n: u64) -> Scalar {
        match self {
            RealSequence::Closed(c) => c.eval_u64(n),
            RealSequence::Piecewise(j, on, off) => {
                if j.contains(n) {
                    on.eval(n)
                } else {
                    off.eval(n)
                }
            }
        }
    }

    fn pieces(&self, region: Region, threshold: &mut u64, out: &mut Vec<(Region, RationalFunction)>) {
        match self {
            RealSequence::Closed(c) => out.push((region, c.clone())),
            RealSequence::Piecewise(j, on, off) => {
                if let Some(r) = region.and(j, true, threshold) {
                    on.pieces(r, threshold, out);
                }
                if let Some(r) = region.and(j, false, threshold) {
                    off.pieces(r, threshold, out);
                }
            }
        }
    }
}

/// Outcome of [`stat_converges_real`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealVerdict {
    pub status: Status,
    /// Proven: a density-zero superset of the exceptional set.
    /// Refuted: a positive-density set the exceptional set eventually contains.
    /// Undetermined: the exceptional indices up to the horizon.
    pub exceptional: IndexSet,
    pub exceptional_density: Density,
    pub empirical_density: Scalar,
    pub horizon: u64,
}

/// Statistical convergence of a real sequence to `r` at tolerance `eps`:
/// decides whether `{j : |r_j − r| ≥ eps}` has density zero.
pub fn stat_converges_real(seq: &RealSequence, r: &Scalar, eps: &Scalar, horizon: u64) -> Result<RealVerdict> {
    if !eps.is_positive() {
        return Err(Error::Usage("tolerance must be positive".into()));
    }
    if horizon < 1 {
        return Err(Error::Usage("horizon must be at least 1".into()));
    }
    let mut threshold = 1u64;
    let mut pieces = Vec::new();
    seq.pieces(Region::all(), &mut threshold, &mut pieces);

    let target = RationalFunction::constant(r.clone());
    let tol = RationalFunction::constant(eps.clone());
    let mut persistent = Vec::new();
    let mut cut = threshold;
    for (region, f) in &pieces {
        let dev = f.sub(&target);
        let slack = dev.eventual_abs().sub(&tol);
        cut = cut.max(dev.sign_from()).max(slack.sign_from());
        if slack.eventual_sign() >= 0 {
            persistent.push(region.clone());
        }
    }
    let is_exceptional = |n: u64| (seq.eval(n) - r).abs() >= *eps;
    let empirical = {
        let count = (1..=horizon).filter(|&n| is_exceptional(n)).count() as u64;
        Scalar::from_u64(count) / Scalar::from_u64(horizon)
    };
    if cut > crate::ratfn::SCAN_CAP {
        let listed = (1..=horizon).filter(|&n| is_exceptional(n)).collect();
        return Ok(RealVerdict {
            status: Status::Undetermined { horizon },
            exceptional: IndexSet::Finite(listed),
            exceptional_density: Density::Unknown,
            empirical_density: empirical,
            horizon,
        });
    }

    if let Some(region) = persistent.iter().find(|r| r.density().is_positive()) {
        let set = region.to_index_set();
        return Ok(RealVerdict {
            status: Status::Refuted,
            exceptional_density: density_exact(&set),
            exceptional: set,
            empirical_density: empirical,
            horizon,
        });
    }

    let prefix: Vec<u64> = (1..cut).filter(|&n| is_exceptional(n)).collect();
    let mut superset = IndexSet::Finite(prefix);
    for region in &persistent {
        superset = IndexSet::union(superset, region.to_index_set());
    }
    let density = density_exact(&superset);
    if density.is_zero() {
        return Ok(RealVerdict {
            status: Status::Proven,
            exceptional: superset,
            exceptional_density: density,
            empirical_density: empirical,
            horizon,
        });
    }
    let listed = (1..=horizon).filter(|&n| is_exceptional(n)).collect();
    Ok(RealVerdict {
        status: Status::Undetermined { horizon },
        exceptional: IndexSet::Finite(listed),
        exceptional_density: Density::Unknown,
        empirical_density: empirical,
        horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(a: IndexSet) -> IndexSet {
        IndexSet::complement(a)
    }

    #[test]
    fn count_examples() {
        // enumerate perfect squares directly
        let squares_upto_100 = (1..=100u64).filter(|k| (1..=10).any(|r| r * r == *k)).count() as u64;
        assert_eq!(squares_upto_100, 10);
        assert_eq!(count_upto(&IndexSet::Squares, 100).unwrap(), squares_upto_100);
        assert_eq!(count_upto(&IndexSet::ap(2, 2).unwrap(), 10).unwrap(), 5);
        assert_eq!(count_upto(&comp(IndexSet::Squares), 100).unwrap(), 100 - 10);
        assert!(count_upto(&IndexSet::Squares, 0).is_err());
    }

    #[test]
    fn empirical_examples() {
        assert_eq!(
            empirical_density(&IndexSet::Squares, 1_000_000).unwrap(),
            Scalar::ratio(1, 1000)
        );
        for n in [1, 7, 1000] {
            assert_eq!(empirical_density(&IndexSet::naturals(), n).unwrap(), Scalar::one());
        }
        assert_eq!(
            empirical_density(&IndexSet::ap(1, 3).unwrap(), 9).unwrap(),
            Scalar::ratio(1, 3)
        );
    }

    #[test]
    fn exact_density_examples() {
        assert_eq!(density_exact(&comp(IndexSet::Squares)), Density::Exact(Scalar::one()));
        let both = IndexSet::inter(IndexSet::cofinite(vec![1]).unwrap(), comp(IndexSet::Squares));
        assert_eq!(density_exact(&both), Density::Exact(Scalar::one()));
        assert_eq!(density_exact(&IndexSet::ap(1, 2).unwrap()), Density::Exact(Scalar::ratio(1, 2)));
        let primes = IndexSet::Predicate(Predicate::builtin("primes").unwrap());
        assert_eq!(density_exact(&primes), Density::Unknown);
        // absorbed by an intersection with a density-zero set
        assert!(density_exact(&IndexSet::inter(primes.clone(), IndexSet::Squares)).is_zero());
        assert!(density_exact(&IndexSet::union(primes, IndexSet::naturals())).is_one());
    }

    #[test]
    fn closed_form_counts_match_scan() {
        let sets = [
            IndexSet::inter(IndexSet::Squares, IndexSet::finite(vec![1, 4, 5, 16, 99]).unwrap()),
            IndexSet::inter(IndexSet::Squares, IndexSet::cofinite(vec![1, 4, 5]).unwrap()),
            IndexSet::union(IndexSet::ap(3, 4).unwrap(), IndexSet::finite(vec![3, 4, 8]).unwrap()),
            IndexSet::union(IndexSet::Squares, IndexSet::cofinite(vec![2, 4, 9, 10]).unwrap()),
        ];
        for s in &sets {
            for n in 1..200 {
                let scan = (1..=n).filter(|&k| s.contains(k)).count() as u64;
                assert_eq!(count_upto(s, n).unwrap(), scan, "{s} at {n}");
            }
        }
    }

    #[test]
    fn region_normalization() {
        let mut t = 1;
        let r = Region::all().and(&IndexSet::Squares, true, &mut t).unwrap();
        assert!(r.and(&comp(IndexSet::Squares), true, &mut t).is_none());
        let j = comp(IndexSet::union(IndexSet::Squares, IndexSet::ap(2, 3).unwrap()));
        assert!(r.and(&j, true, &mut t).is_none());
        let mut t = 1;
        assert!(Region::all().and(&IndexSet::finite(vec![3, 7]).unwrap(), true, &mut t).is_none());
        assert_eq!(t, 8);
        let kept = Region::all().and(&IndexSet::cofinite(vec![2]).unwrap(), true, &mut t).unwrap();
        assert_eq!(kept.to_index_set(), IndexSet::naturals());
    }

    #[test]
    fn region_resolves_disjunctions() {
        let s = || IndexSet::Squares;
        let f = || IndexSet::finite(vec![11]).unwrap();
        let e = || IndexSet::ap(2, 2).unwrap();
        // (S ∪ F) ∩ ¬S is finite, in either order
        let mut t = 1;
        let r = Region::all().and(&IndexSet::union(s(), f()), true, &mut t).unwrap();
        assert!(r.and(&s(), false, &mut t).is_none());
        assert_eq!(t, 12);
        let mut t = 1;
        let r = Region::all().and(&IndexSet::union(s(), e()), true, &mut t).unwrap();
        let r = r.and(&s(), false, &mut t).unwrap();
        assert_eq!(r.literals(), &[(s(), false), (e(), true)]);
        assert!(r.and(&e(), false, &mut t).is_none());
        // a disjunction implied by a stored literal is dropped
        let mut t = 1;
        let r = Region::all().and(&e(), true, &mut t).unwrap();
        let r = r.and(&IndexSet::union(s(), e()), true, &mut t).unwrap();
        assert_eq!(r.literals(), &[(e(), true)]);
        // ¬(S ∩ E) with S asserted leaves ¬E
        let mut t = 1;
        let r = Region::all().and(&s(), true, &mut t).unwrap();
        let r = r.and(&IndexSet::inter(s(), e()), false, &mut t).unwrap();
        assert_eq!(r.literals(), &[(s(), true), (e(), false)]);
    }

    #[test]
    fn infinitude() {
        assert!(IndexSet::Squares.is_provably_infinite());
        assert!(!IndexSet::finite(vec![1, 2]).unwrap().is_provably_infinite());
        assert!(comp(IndexSet::finite(vec![1, 2]).unwrap()).is_provably_infinite());
        assert!(IndexSet::inter(IndexSet::Squares, IndexSet::cofinite(vec![4]).unwrap()).is_provably_infinite());
        assert!(!IndexSet::inter(IndexSet::Squares, IndexSet::ap(2, 2).unwrap()).is_provably_infinite());
    }

    fn closed(c: RationalFunction) -> Box<RealSequence> {
        Box::new(RealSequence::Closed(c))
    }

    #[test]
    fn stat_convergence_of_spiky_sequence() {
        // n on squares, 1/n elsewhere
        let seq = RealSequence::Piecewise(
            IndexSet::Squares,
            closed(RationalFunction::index()),
            closed(RationalFunction::harmonic(Scalar::one(), 0)),
        );
        let eps = Scalar::ratio(1, 10);
        let v = stat_converges_real(&seq, &Scalar::zero(), &eps, 1000).unwrap();
        assert_eq!(v.status, Status::Proven);
        assert!(v.exceptional_density.is_zero());
        // counting oracle: 316 squares and 2, 3, 5, 6, 7, 8, 10 up to 10^5
        let n = 100_000u64;
        let exceptional: Vec<u64> = (1..=n).filter(|&k| seq.eval(k).abs() >= eps).collect();
        assert_eq!(exceptional.len(), 323);
        assert!(exceptional.iter().all(|&k| v.exceptional.contains(k)));
        // the 2/1000 bound first holds once the squares thin out further
        let big = 1_000_000u64;
        let mut square = vec![false; big as usize + 1];
        for r in 1..=1000usize {
            square[r * r] = true;
        }
        let count = (1..=big).filter(|&k| k <= 10 || square[k as usize]).count() as u64;
        assert!(Scalar::from_u64(count) / Scalar::from_u64(big) <= Scalar::ratio(2, 1000));
    }

    #[test]
    fn stat_convergence_constant_and_alternating() {
        let c = RealSequence::Closed(RationalFunction::constant(Scalar::from_int(3)));
        let v = stat_converges_real(&c, &Scalar::from_int(3), &Scalar::ratio(1, 100), 50).unwrap();
        assert_eq!(v.status, Status::Proven);
        assert_eq!(count_upto(&v.exceptional, 10_000).unwrap(), 0);

        let alt = RealSequence::Piecewise(
            IndexSet::ap(2, 2).unwrap(),
            closed(RationalFunction::constant(Scalar::one())),
            closed(RationalFunction::constant(Scalar::from_int(-1))),
        );
        let v = stat_converges_real(&alt, &Scalar::one(), &Scalar::ratio(1, 2), 100).unwrap();
        assert_eq!(v.status, Status::Refuted);
        assert_eq!(v.exceptional_density, Density::Exact(Scalar::ratio(1, 2)));
        assert!(stat_converges_real(&alt, &Scalar::one(), &Scalar::zero(), 100).is_err());
    }

    #[test]
    fn predicate_sets_stay_undetermined() {
        let primes = IndexSet::Predicate(Predicate::builtin("primes").unwrap());
        let seq = RealSequence::Piecewise(
            primes,
            closed(RationalFunction::constant(Scalar::one())),
            closed(RationalFunction::zero()),
        );
        let v = stat_converges_real(&seq, &Scalar::zero(), &Scalar::ratio(1, 2), 1000).unwrap();
        assert_eq!(v.status, Status::Undetermined { horizon: 1000 });
        assert_eq!(v.empirical_density, Scalar::ratio(168, 1000));
    }
}
