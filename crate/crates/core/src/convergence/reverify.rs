//! Independent re-checking of certificates.
//!
//! Nothing here consults the closed forms the checkers reason with: each
//! certificate is replayed against exact evaluations up to a horizon, the
//! entrywise order, and the structural density rules. The only symbolic
//! facts taken on trust are the limits of the rational functions the
//! certificates name explicitly.

use crate::density::{count_upto, density_exact, IndexSet};
use crate::error::Result;
use crate::lattice::LatticeVector;
use crate::opseq::OperatorSequence;
use crate::operator::OrderBoundedOperator;
use crate::ratfn::Limit;
use crate::scalar::Scalar;
use crate::verdict::{Certificate, PointwiseEntry, Status, Verdict};

use super::witness::{Decomposition, Witness, WitnessMode};

/// The statement a verdict was issued for.
#[derive(Debug, Clone, Copy)]
pub enum Claim<'a> {
    Order(&'a OrderBoundedOperator),
    Soc(&'a OrderBoundedOperator),
    Doc(&'a OrderBoundedOperator),
    Dopc(&'a OrderBoundedOperator),
    Socp(&'a OrderBoundedOperator),
    StatBounded,
}

impl Claim<'_> {
    fn target(&self) -> Option<&OrderBoundedOperator> {
        match *self {
            Claim::Order(r) | Claim::Soc(r) | Claim::Doc(r) | Claim::Dopc(r) | Claim::Socp(r) => Some(r),
            Claim::StatBounded => None,
        }
    }

    fn pointwise(&self) -> bool {
        matches!(self, Claim::Dopc(_) | Claim::Socp(_))
    }
}

pub type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn density_one(set: &IndexSet) -> Check {
    ensure(density_exact(set).is_one(), || format!("{set} does not have density one"))
}

fn members(set: &IndexSet, from: u64, horizon: u64) -> impl Iterator<Item = u64> + '_ {
    (from.max(1)..=horizon).filter(move |&n| set.contains(n))
}

/// Replays `verdict` for `claim` about `seq` on the indices `1..=horizon`.
/// Undetermined verdicts claim nothing and are accepted.
pub fn reverify(seq: &OperatorSequence, claim: Claim, verdict: &Verdict, horizon: u64) -> Check {
    let shape = lift(seq.shape())?;
    if let Some(t) = claim.target() {
        ensure(t.domain() == shape.domain && t.codomain() == shape.codomain, || "target shape differs".into())?;
    }
    match (&verdict.status, &verdict.certificate) {
        (Status::Undetermined { .. }, Certificate::HorizonEvidence { .. } | Certificate::Pointwise { .. }) => Ok(()),
        (Status::Undetermined { .. }, c) => Err(format!("undetermined verdict carries {}", c.variant())),
        (_, Certificate::HorizonEvidence { .. }) => Err("horizon evidence cannot back a definite verdict".into()),
        (Status::Proven, cert) => proven(seq, claim, cert, horizon),
        (Status::Refuted, cert) => refuted(seq, claim, cert, horizon),
    }
}

fn proven(seq: &OperatorSequence, claim: Claim, cert: &Certificate, h: u64) -> Check {
    match (claim, cert) {
        (Claim::Order(r) | Claim::Soc(r), Certificate::DominatedOnDensityOne { j, dominator, limit }) => {
            ensure(limit == r, || format!("certificate limit {limit} is not {r}"))?;
            if matches!(claim, Claim::Order(_)) {
                ensure(j.is_naturals(), || format!("order convergence needs J = ℕ, got {j}"))?;
            }
            density_one(j)?;
            dominated(seq, r, j, dominator, h)
        }
        (Claim::Order(r), Certificate::TailSupWitness { agreement, source, o_dominator, limit, .. }) => {
            ensure(limit == r, || format!("certificate limit {limit} is not {r}"))?;
            density_one(agreement)?;
            dominated(seq, r, &IndexSet::naturals(), o_dominator, h)?;
            // Y_n = source(d_n), d_n the least member of the agreement set ≥ n
            let mut next: Option<u64> = None;
            let mut y: Vec<Option<OrderBoundedOperator>> = vec![None; h as usize + 1];
            for n in (1..=h).rev() {
                if agreement.contains(n) {
                    next = Some(n);
                }
                if let Some(d) = next {
                    y[n as usize] = Some(lift(source.eval(d))?);
                }
            }
            for n in 1..=h {
                let Some(yn) = &y[n as usize] else { continue };
                let diff = lift(lift(seq.eval(n))?.sub(r))?.op_modulus();
                ensure(lift(diff.op_leq(yn))?, || format!("Y_{n} does not dominate at n = {n}"))?;
                if let Some(Some(prev)) = y.get(n as usize - 1).filter(|_| n > 1) {
                    ensure(lift(yn.op_leq(prev))?, || format!("Y increases at n = {n}"))?;
                }
            }
            Ok(())
        }
        (Claim::Doc(s), Certificate::DecreasingWitness { j, infimum, .. }) => {
            ensure(infimum == s, || format!("certificate infimum {infimum} is not {s}"))?;
            density_one(j)?;
            let mut prev: Option<OrderBoundedOperator> = None;
            for n in members(j, 1, h) {
                let x = lift(seq.eval(n))?;
                ensure(lift(s.op_leq(&x))?, || format!("T_{n} is not above the infimum"))?;
                if let Some(p) = &prev {
                    ensure(lift(x.op_leq(p))?, || format!("not decreasing along J at n = {n}"))?;
                }
                prev = Some(x);
            }
            Ok(())
        }
        (Claim::StatBounded, Certificate::BoundedOnDensityOne { j, bound }) => {
            density_one(j)?;
            for n in members(j, 1, h) {
                let x = lift(seq.eval(n))?.op_modulus();
                ensure(lift(x.op_leq(bound))?, || format!("|T_{n}| exceeds {bound}"))?;
            }
            Ok(())
        }
        (Claim::Dopc(s) | Claim::Socp(s), Certificate::Pointwise { entries }) => {
            ensure(!entries.is_empty(), || "no sampled vectors".into())?;
            pointwise_entries(seq, s, entries, matches!(claim, Claim::Socp(_)), h)
        }
        (claim, cert) => Err(format!("{} cannot prove {claim:?}", cert.variant())),
    }
}

/// `|T_n − r| ≤ dominator_n` on `j`, with the dominator positive, decreasing,
/// and of limit θ.
fn dominated(seq: &OperatorSequence, r: &OrderBoundedOperator, j: &IndexSet, dominator: &OperatorSequence, h: u64) -> Check {
    match dominator {
        OperatorSequence::Const(z) => ensure(z.is_zero(), || "constant dominator is not θ".into())?,
        OperatorSequence::ScaledOp(c, k) => {
            ensure(k.is_positive(), || "dominator operator is not positive".into())?;
            ensure(matches!(c.limit(), Limit::Finite(l) if l.is_zero()), || format!("{c} does not tend to 0"))?;
        }
        other => return Err(format!("unrecognized dominator {other}")),
    }
    let mut prev: Option<OrderBoundedOperator> = None;
    for n in 1..=h {
        let d = lift(dominator.eval(n))?;
        ensure(d.is_positive(), || format!("dominator negative at n = {n}"))?;
        if let Some(p) = &prev {
            ensure(lift(d.op_leq(p))?, || format!("dominator increases at n = {n}"))?;
        }
        if j.contains(n) {
            let diff = lift(lift(seq.eval(n))?.sub(r))?.op_modulus();
            ensure(lift(diff.op_leq(&d))?, || format!("not dominated at n = {n}"))?;
        }
        prev = Some(d);
    }
    Ok(())
}

fn coords_leq(a: &[Scalar], b: &[Scalar]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Per-vector replay state.
struct Replay<'a> {
    e: &'a PointwiseEntry,
    target: Vec<Scalar>,
    support: Vec<usize>,
    prev: Option<Vec<Scalar>>,
}

impl Replay<'_> {
    fn value(&self, t: &OrderBoundedOperator) -> Vec<Scalar> {
        let u = self.e.u.coords();
        (0..t.rows())
            .map(|i| self.support.iter().map(|&k| t.entry(i, k) * &u[k]).sum())
            .collect()
    }

    fn dominator(&self, n: u64) -> std::result::Result<Vec<Scalar>, String> {
        let e = self.e;
        if n >= e.from {
            let n = Scalar::from_u64(n);
            return Ok(e.tail.iter().map(|c| c / &n).collect());
        }
        e.steps
            .iter()
            .find(|(last, _)| n <= *last)
            .map(|(_, s)| s.coords().to_vec())
            .ok_or_else(|| format!("no dominator value at n = {n}"))
    }
}

/// Replays every sampled vector; each `T_n` is evaluated once.
fn pointwise_entries(seq: &OperatorSequence, r: &OrderBoundedOperator, entries: &[PointwiseEntry], socp: bool, h: u64) -> Check {
    let mut states = Vec::with_capacity(entries.len());
    for e in entries {
        ensure(e.status.is_proven(), || format!("vector {} is not proven", e.u))?;
        ensure(e.u.is_positive(), || format!("{} is not positive", e.u))?;
        let target = lift(r.apply(&e.u))?;
        ensure(target == e.target, || format!("target {} is not R(u) = {target}", e.target))?;
        density_one(&e.j)?;
        if socp {
            ensure(e.tail.iter().all(|c| !c.is_negative()), || "negative tail coefficient".into())?;
        }
        let support = (0..e.u.coords().len()).filter(|&k| !e.u.coords()[k].is_zero()).collect();
        states.push(Replay {
            e,
            target: target.coords().to_vec(),
            support,
            prev: None,
        });
    }
    for n in 1..=h {
        // evaluated lazily: only if some vector's set contains n
        let mut t: Option<OrderBoundedOperator> = None;
        for st in states.iter_mut() {
            let member = st.e.j.contains(n);
            if member && t.is_none() {
                t = Some(lift(seq.eval(n))?);
            }
            let u = &st.e.u;
            if !socp {
                if !member {
                    continue;
                }
                let x = st.value(t.as_ref().expect("evaluated"));
                ensure(coords_leq(&st.target, &x), || format!("T_{n}(u) below the target for u = {u}"))?;
                if let Some(p) = &st.prev {
                    ensure(coords_leq(&x, p), || format!("T_n(u) increases at n = {n} for u = {u}"))?;
                }
                st.prev = Some(x);
                continue;
            }
            let s = st.dominator(n)?;
            if let Some(p) = &st.prev {
                ensure(coords_leq(&s, p), || format!("dominator increases at n = {n} for u = {u}"))?;
            }
            if member {
                let x = st.value(t.as_ref().expect("evaluated"));
                let gap: Vec<Scalar> = x.iter().zip(&st.target).map(|(a, b)| (a - b).abs()).collect();
                ensure(coords_leq(&gap, &s), || format!("not dominated at n = {n} for u = {u}"))?;
            }
            st.prev = Some(s);
        }
    }
    Ok(())
}

/// Entry `entry` of `T_n − target`, or of `T_n(u) − target(u)` along `u`.
fn entry_value(
    seq: &OperatorSequence,
    target: &OrderBoundedOperator,
    entry: (usize, usize),
    along: Option<&LatticeVector>,
    n: u64,
) -> std::result::Result<Scalar, String> {
    let x = lift(seq.eval(n))?;
    Ok(match along {
        None => x.entry(entry.0, entry.1) - target.entry(entry.0, entry.1),
        Some(u) => {
            let (xu, tu) = (x.apply_coords(u.coords()), target.apply_coords(u.coords()));
            &xu[entry.0] - &tu[entry.0]
        }
    })
}

fn large_enough(claim: Claim, region: &IndexSet) -> Check {
    let ok = match claim {
        Claim::Order(_) => region.is_provably_infinite() || density_exact(region).is_positive(),
        _ => density_exact(region).is_positive(),
    };
    ensure(ok, || format!("{region} is too small to refute {claim:?}"))
}

fn along_ok(claim: Claim, along: Option<&LatticeVector>) -> Check {
    match along {
        Some(u) => ensure(claim.pointwise() && u.is_positive(), || format!("vector {u} does not fit {claim:?}")),
        None => ensure(!claim.pointwise(), || "pointwise refutation without a vector".into()),
    }
}

fn refuted(seq: &OperatorSequence, claim: Claim, cert: &Certificate, h: u64) -> Check {
    let shape = lift(seq.shape())?;
    let theta = OrderBoundedOperator::zero(shape.domain, shape.codomain);
    let target = claim.target().unwrap_or(&theta);
    match cert {
        Certificate::UnboundedAlong { region, growth, entry, from, along } => {
            along_ok(claim, along.as_ref())?;
            large_enough(claim, region)?;
            ensure(!matches!(growth.limit(), Limit::Finite(_)), || format!("{growth} stays bounded"))?;
            for n in members(region, *from, h) {
                let v = entry_value(seq, target, *entry, along.as_ref(), n)?;
                ensure(v == growth.eval_u64(n), || format!("entry {entry:?} differs from {growth} at n = {n}"))?;
            }
            Ok(())
        }
        Certificate::LimitMismatch { region, entry, gap, from, along } => {
            ensure(claim.target().is_some(), || "a finite gap does not refute boundedness".into())?;
            along_ok(claim, along.as_ref())?;
            large_enough(claim, region)?;
            ensure(gap.is_positive(), || "gap is not positive".into())?;
            for n in members(region, *from, h) {
                let v = entry_value(seq, target, *entry, along.as_ref(), n)?;
                ensure(&v.abs() >= gap, || format!("entry {entry:?} is within {gap} of the target at n = {n}"))?;
            }
            Ok(())
        }
        Certificate::MassLowerBound { m, per_index_mass, truncation, lower_bound } => {
            ensure(!claim.pointwise(), || "mass bounds do not refute pointwise notions".into())?;
            ensure(*seq == OperatorSequence::CoordFunctional(*truncation), || "not a coordinate-functional sequence".into())?;
            ensure(target.is_zero(), || "mass bound only refutes the limit θ".into())?;
            density_one(m)?;
            ensure(*lower_bound == (*truncation as u64).div_ceil(2), || "lower bound is not ⌈D/2⌉".into())?;
            let count = lift(count_upto(m, *truncation as u64))?;
            ensure(count >= *lower_bound, || format!("|M ∩ [1..{truncation}]| = {count} < {lower_bound}"))?;
            for k in members(m, 1, *truncation as u64) {
                let x = lift(seq.eval(k))?;
                let mass = x.entries().iter().fold(Scalar::zero(), |acc, a| &acc + &a.abs());
                ensure(&mass == per_index_mass && x.entry(0, k as usize - 1).abs() == *per_index_mass, || {
                    format!("T_{k} is not e_{k} with mass {per_index_mass}")
                })?;
            }
            Ok(())
        }
        other => Err(format!("{} cannot refute {claim:?}", other.variant())),
    }
}

/// `T_n = R_n` on the agreement set up to the horizon, which has density one.
pub fn reverify_agreement(seq: &OperatorSequence, t_seq: &OperatorSequence, agreement: &IndexSet, h: u64) -> Check {
    density_one(agreement)?;
    for n in members(agreement, 1, h) {
        ensure(lift(seq.eval(n))? == lift(t_seq.eval(n))?, || format!("T_{n} ≠ R_{n} on the agreement set"))?;
    }
    Ok(())
}

pub fn reverify_witness(seq: &OperatorSequence, r: &OrderBoundedOperator, mode: WitnessMode, w: &Witness, h: u64) -> Check {
    reverify_agreement(seq, &w.t_seq, &w.agreement, h)?;
    match mode {
        WitnessMode::Soc => {
            ensure(w.verdict.is_proven(), || "witness verdict is not proven".into())?;
            reverify(&w.t_seq, Claim::Order(r), &w.verdict, h)
        }
        WitnessMode::Doc => {
            let Certificate::DecreasingWitness { j, .. } = &w.verdict.certificate else {
                return Err("doc witness without a decreasing certificate".into());
            };
            ensure(IndexSet::complement(j.clone()).finite_bound().is_some(), || format!("{j} is not cofinite"))?;
            ensure(w.verdict.is_proven(), || "witness verdict is not proven".into())?;
            reverify(&w.t_seq, Claim::Doc(r), &w.verdict, h)
        }
    }
}

pub fn reverify_decomposition(seq: &OperatorSequence, d: &Decomposition, h: u64) -> Check {
    ensure(d.verdict.is_proven(), || "decomposition rests on an unproven verdict".into())?;
    reverify(seq, Claim::StatBounded, &d.verdict, h)?;
    let residual = IndexSet::complement(d.j.clone());
    ensure(density_exact(&residual).is_zero(), || format!("{residual} is not density zero"))?;
    for n in 1..=h {
        let (r, t, u) = (lift(seq.eval(n))?, lift(d.t_seq.eval(n))?, lift(d.u_seq.eval(n))?);
        ensure(lift(t.add(&u))? == r, || format!("T_{n} + U_{n} ≠ R_{n}"))?;
        ensure(lift(t.op_modulus().op_leq(&d.bound))?, || format!("|T_{n}| exceeds the bound"))?;
        ensure(u.is_zero() || residual.contains(n), || format!("U_{n} ≠ θ outside the residual set"))?;
    }
    Ok(())
}
