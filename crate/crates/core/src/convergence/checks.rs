//! Checkers for order, statistical order and statistically decreasing
//! convergence, and statistical order boundedness.
//!
//! Each checker reads the eventual [`Form`] of the tree, splits its pieces
//! into those living on density-zero regions ("bad") and the rest ("good"),
//! and takes `J = ℕ \ ⋃ bad` as the density-one witness set. Indices before
//! the symbolic bounds are handled by exact evaluation. Anything outside the
//! recognized fragment comes back [`Status::Undetermined`] with finite-horizon
//! evidence.

use crate::density::{complement_of_union, IndexSet};
use crate::error::{Error, Result};
use crate::form::{Form, Piece};
use crate::lattice::LatticeVector;
use crate::opseq::{OperatorSequence, Shape};
use crate::operator::OrderBoundedOperator;
use crate::ratfn::{Limit, RationalFunction, SCAN_CAP};
use crate::scalar::Scalar;
use crate::verdict::{Certificate, CheckConfig, PointwiseEntry, Status, Verdict};

/// Longest step table kept in a pointwise dominator before falling back to
/// the `C/n` form.
const STEP_TABLE_CAP: u64 = 1024;

/// Exact terms `T_1, T_2, ...`, computed once each.
pub(crate) struct Evals<'a> {
    seq: &'a OperatorSequence,
    cache: Vec<OrderBoundedOperator>,
}

impl<'a> Evals<'a> {
    pub(crate) fn new(seq: &'a OperatorSequence) -> Self {
        Evals { seq, cache: Vec::new() }
    }

    pub(crate) fn get(&mut self, n: u64) -> Result<&OrderBoundedOperator> {
        while (self.cache.len() as u64) < n {
            let t = self.seq.eval(self.cache.len() as u64 + 1)?;
            self.cache.push(t);
        }
        Ok(&self.cache[n as usize - 1])
    }
}

/// What is compared at each index: whole operators, or their values at `u`.
#[derive(Clone, Copy)]
enum View<'v> {
    Operator,
    Vector(&'v LatticeVector),
}

impl View<'_> {
    fn flatten(&self, t: &OrderBoundedOperator) -> Vec<Scalar> {
        match self {
            View::Operator => t.entries().to_vec(),
            View::Vector(u) => t.apply_coords(u.coords()),
        }
    }

    fn along(&self) -> Option<LatticeVector> {
        match self {
            View::Operator => None,
            View::Vector(u) => Some((*u).clone()),
        }
    }
}

enum Outcome<T> {
    Done(T),
    Refuted(Certificate, String),
    Undetermined(String),
}

fn prepare(seq: &OperatorSequence, target: Option<&OrderBoundedOperator>, cfg: &CheckConfig) -> Result<Shape> {
    cfg.validate()?;
    let shape = seq.shape()?;
    if let Some(t) = target {
        if Shape::of(t) != shape {
            return Err(Error::Shape(format!(
                "sequence maps {} -> {} but the target maps {} -> {}",
                shape.domain,
                shape.codomain,
                t.domain(),
                t.codomain()
            )));
        }
    }
    Ok(shape)
}

fn entry_of(k: usize, cols: usize) -> (usize, usize) {
    (k / cols, k % cols)
}

fn is_bad(p: &Piece) -> bool {
    p.region.density().is_zero()
}

/// Good pieces and the density-one set avoiding the bad ones.
/// A density-zero piece sharing its entries with a positive-density piece
/// is kept on the good side.
fn split(form: &Form) -> (Vec<&Piece>, IndexSet) {
    let twin = |p: &Piece| form.pieces.iter().any(|q| !is_bad(q) && q.entries == p.entries);
    let (good, bad): (Vec<&Piece>, Vec<&Piece>) = form.pieces.iter().partition(|p| !is_bad(p) || twin(p));
    let bad: Vec<IndexSet> = bad.iter().map(|p| p.region.to_index_set()).collect();
    (good, complement_of_union(&bad))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Strength {
    /// Refute when the region has positive density.
    Density,
    /// Refute when the region is provably infinite.
    Infinite,
}

/// Searches the given pieces for an entry whose tail misses `target`.
fn find_refutation(
    form: &Form,
    pieces: &[&Piece],
    target: &[Scalar],
    strength: Strength,
    finite_mismatch: bool,
    view: View,
) -> Outcome<()> {
    let mut doubt = None;
    for p in pieces {
        let region = p.region.to_index_set();
        let qualifies = match strength {
            Strength::Density => region.density().is_positive(),
            Strength::Infinite => region.is_provably_infinite(),
        };
        for (k, f) in p.entries.iter().enumerate() {
            let d = f.sub(&RationalFunction::constant(target[k].clone()));
            let entry = entry_of(k, form.cols);
            match d.limit() {
                Limit::Finite(l) if l.is_zero() => {}
                Limit::Finite(_) if !finite_mismatch => {}
                _ if !qualifies => {
                    doubt.get_or_insert_with(|| {
                        format!("entry {entry:?} misses the target on {region}, whose size is not established")
                    });
                }
                Limit::Finite(l) => {
                    let s = d.eventual_sign();
                    let gap = l.abs() / Scalar::from_int(2);
                    let slack = d.scale(&Scalar::from_int(s as i64)).sub(&RationalFunction::constant(gap.clone()));
                    let from = form.valid_from.max(d.sign_from()).max(slack.sign_from());
                    let msg = format!("entry {entry:?} tends to {} instead of {} on {region}", &target[k] + &l, target[k]);
                    return Outcome::Refuted(
                        Certificate::LimitMismatch {
                            region,
                            entry,
                            gap,
                            from,
                            along: view.along(),
                        },
                        msg,
                    );
                }
                _ => {
                    let msg = format!("entry {entry:?} grows like {d} on {region}");
                    return Outcome::Refuted(
                        Certificate::UnboundedAlong {
                            region,
                            growth: d,
                            entry,
                            from: form.valid_from,
                            along: view.along(),
                        },
                        msg,
                    );
                }
            }
        }
    }
    match doubt {
        Some(note) => Outcome::Undetermined(note),
        None => Outcome::Done(()),
    }
}

/// Data for a dominator of `|T_n − target|` on `j`.
struct Domination {
    j: IndexSet,
    n_cut: u64,
    /// `sup_{n ≥ n_cut} n·|T_n − target|_k` over the pieces.
    tail: Vec<Scalar>,
    /// `|T_n − target|` for members `n < n_cut`.
    prefix: Vec<(u64, Vec<Scalar>)>,
}

impl Domination {
    /// Coefficients `K` with `|T_n − target| ≤ K/n` for every `n ∈ j`.
    fn harmonic(&self) -> Vec<Scalar> {
        let mut k = self.tail.clone();
        for (n, diff) in &self.prefix {
            for (c, d) in k.iter_mut().zip(diff) {
                *c = c.clone().max(d * &Scalar::from_u64(*n));
            }
        }
        k
    }
}

fn dominate(
    form: &Form,
    pieces: &[&Piece],
    j: IndexSet,
    target: &[Scalar],
    evals: &mut Evals,
    view: View,
) -> Result<Outcome<Domination>> {
    let mut n_cut = form.valid_from;
    let mut diffs = Vec::new();
    for p in pieces {
        let ds: Vec<RationalFunction> = p
            .entries
            .iter()
            .zip(target)
            .map(|(f, t)| f.sub(&RationalFunction::constant(t.clone())))
            .collect();
        for d in &ds {
            n_cut = n_cut.max(d.sign_from());
        }
        diffs.push(ds);
    }
    if n_cut > SCAN_CAP {
        return Ok(Outcome::Undetermined(format!("symbolic bound {n_cut} is beyond the scan cap")));
    }
    let mut tail = vec![Scalar::zero(); target.len()];
    for ds in &diffs {
        for (k, d) in ds.iter().enumerate() {
            let scaled = RationalFunction::index().mul(&d.eventual_abs());
            match scaled.tail_sup(n_cut) {
                Some(c) => tail[k] = tail[k].clone().max(c),
                None => {
                    return Ok(Outcome::Undetermined(format!(
                        "no 1/n rate for entry {:?}",
                        entry_of(k, form.cols)
                    )))
                }
            }
        }
    }
    let mut prefix = Vec::new();
    for n in 1..n_cut {
        if !j.contains(n) {
            continue;
        }
        let x = view.flatten(evals.get(n)?);
        prefix.push((n, x.iter().zip(target).map(|(a, t)| (a - t).abs()).collect()));
    }
    Ok(Outcome::Done(Domination { j, n_cut, tail, prefix }))
}

/// Decrease along the good pieces, beyond a symbolic index and through the
/// exact prefix.
struct Decrease {
    j: IndexSet,
    tail_from: u64,
}

fn decreasing(form: &Form, good: &[&Piece], j: IndexSet, evals: &mut Evals, view: View) -> Result<Outcome<Decrease>> {
    let mut n_t = form.valid_from;
    for p in good {
        for (k, f) in p.entries.iter().enumerate() {
            let m = f.monotonicity();
            if m.direction == crate::ratfn::Direction::Increasing {
                return Ok(Outcome::Undetermined(format!(
                    "entry {:?} eventually increases on {}",
                    entry_of(k, form.cols),
                    p.region.to_index_set()
                )));
            }
            n_t = n_t.max(m.from);
        }
    }
    for p in good {
        for q in good {
            if std::ptr::eq(*p, *q) {
                continue;
            }
            for (k, (f, g)) in p.entries.iter().zip(&q.entries).enumerate() {
                let h = f.sub(&g.shift_one());
                if h.eventual_sign() < 0 {
                    return Ok(Outcome::Undetermined(format!(
                        "entry {:?} can increase when moving between regions",
                        entry_of(k, form.cols)
                    )));
                }
                n_t = n_t.max(h.sign_from());
            }
        }
    }
    if n_t > SCAN_CAP {
        return Ok(Outcome::Undetermined(format!("symbolic bound {n_t} is beyond the scan cap")));
    }
    let members: Vec<u64> = (1..n_t).filter(|&n| j.contains(n)).collect();
    let leq = |a: &[Scalar], b: &[Scalar]| a.iter().zip(b).all(|(x, y)| x <= y);
    let mut ok = true;
    let mut prev: Option<Vec<Scalar>> = None;
    for &n in &members {
        let x = view.flatten(evals.get(n)?);
        if let Some(p) = &prev {
            if !leq(&x, p) {
                ok = false;
                break;
            }
        }
        prev = Some(x);
    }
    if ok {
        if let Some(last) = &prev {
            ok = good.iter().all(|q| {
                let next: Vec<Scalar> = q.entries.iter().map(|f| f.eval_u64(n_t)).collect();
                leq(&next, last)
            });
        }
    }
    let j = if ok || members.is_empty() {
        j
    } else {
        IndexSet::inter(j, IndexSet::Cofinite((1..n_t).collect()))
    };
    Ok(Outcome::Done(Decrease { j, tail_from: n_t }))
}

fn zero_entries(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

/// Finite-horizon evidence for an undetermined verdict.
pub(crate) fn horizon_evidence(
    seq: &OperatorSequence,
    target: Option<&OrderBoundedOperator>,
    cfg: &CheckConfig,
    note: String,
) -> Result<Verdict> {
    let mut tail_sup = Scalar::zero();
    let mut exceptional = 0;
    for n in 1..=cfg.horizon {
        let t = seq.eval(n)?;
        let d = match target {
            Some(r) => t.sub(r)?,
            None => t,
        };
        let m = d.max_abs_entry();
        if m >= cfg.tolerance {
            exceptional += 1;
        }
        if n >= cfg.horizon / 2 {
            tail_sup = tail_sup.max(m);
        }
    }
    let narrative = format!("undetermined up to N = {}: {note}", cfg.horizon);
    Ok(Verdict::new(
        Status::Undetermined { horizon: cfg.horizon },
        Certificate::HorizonEvidence {
            horizon: cfg.horizon,
            tail_sup,
            exceptional,
            note,
        },
        narrative,
        cfg,
    )
    .with_truncation(seq.truncation()))
}

/// Refutation for a bare coordinate-functional sequence: any operator
/// dominating it on a density-one set `M` dominates `e_j` for every
/// `j ∈ M ∩ [1..D]`.
fn mass_refutation(seq: &OperatorSequence, target: Option<&OrderBoundedOperator>, cfg: &CheckConfig, what: &str) -> Option<Verdict> {
    let OperatorSequence::CoordFunctional(d) = seq else {
        return None;
    };
    if target.is_some_and(|t| !t.is_zero()) {
        return None;
    }
    let lower_bound = (*d as u64).div_ceil(2);
    let narrative = format!(
        "{what} fails: a dominating functional on a density-one set M must dominate e_j for all j in M ∩ [1..{d}], \
         so its mass is at least |M ∩ [1..{d}]| ≥ {lower_bound}, growing without bound as the truncation grows"
    );
    Some(
        Verdict::new(
            Status::Refuted,
            Certificate::MassLowerBound {
                m: IndexSet::naturals(),
                per_index_mass: Scalar::one(),
                truncation: *d,
                lower_bound,
            },
            narrative,
            cfg,
        )
        .with_truncation(Some(*d)),
    )
}

fn truncated_tree_note(d: usize) -> String {
    format!("coordinate functionals truncated at {d} inside a larger tree; operator-level verdicts are not derived from the truncation")
}

fn refuted(cert: Certificate, msg: String, cfg: &CheckConfig, seq: &OperatorSequence) -> Verdict {
    Verdict::new(Status::Refuted, cert, msg, cfg).with_truncation(seq.truncation())
}

fn harmonic_dominator(shape: Shape, coeffs: Vec<Scalar>) -> Result<OperatorSequence> {
    let k = OrderBoundedOperator::from_flat(shape.domain, shape.codomain, coeffs)?;
    Ok(if k.is_zero() {
        OperatorSequence::Const(k)
    } else {
        OperatorSequence::ScaledOp(RationalFunction::harmonic(Scalar::one(), 0), k)
    })
}

/// Shared body of the order and statistical order convergence checks.
fn check_dominated(seq: &OperatorSequence, r: &OrderBoundedOperator, cfg: &CheckConfig, statistical: bool) -> Result<Verdict> {
    let shape = prepare(seq, Some(r), cfg)?;
    let what = if statistical { "statistical order convergence" } else { "order convergence" };
    if let Some(v) = mass_refutation(seq, Some(r), cfg, what) {
        return Ok(v);
    }
    if let Some(d) = seq.truncation() {
        return horizon_evidence(seq, Some(r), cfg, truncated_tree_note(d));
    }
    let Some(form) = Form::of(seq) else {
        return horizon_evidence(seq, Some(r), cfg, "tree outside the recognized fragment".into());
    };
    let target = r.entries().to_vec();
    let (pieces, j, strength) = if statistical {
        let (good, j) = split(&form);
        (good, j, Strength::Density)
    } else {
        (form.pieces.iter().collect(), IndexSet::naturals(), Strength::Infinite)
    };
    match find_refutation(&form, &pieces, &target, strength, true, View::Operator) {
        Outcome::Refuted(cert, msg) => return Ok(refuted(cert, format!("{what} to {r} fails: {msg}"), cfg, seq)),
        Outcome::Undetermined(note) => return horizon_evidence(seq, Some(r), cfg, note),
        Outcome::Done(()) => {}
    }
    let mut evals = Evals::new(seq);
    let dom = match dominate(&form, &pieces, j, &target, &mut evals, View::Operator)? {
        Outcome::Done(d) => d,
        Outcome::Undetermined(note) | Outcome::Refuted(_, note) => return horizon_evidence(seq, Some(r), cfg, note),
    };
    let dominator = harmonic_dominator(shape, dom.harmonic())?;
    let narrative = if dom.j.is_naturals() {
        format!("|T_n − {r}| ≤ {dominator} for every n, and the dominator decreases to θ: classical order convergence")
    } else {
        format!(
            "|T_n − {r}| ≤ {dominator} for every n in J = {}, which has density one; the dominator decreases to θ",
            dom.j
        )
    };
    Ok(Verdict::new(
        Status::Proven,
        Certificate::DominatedOnDensityOne {
            j: dom.j,
            dominator,
            limit: r.clone(),
        },
        narrative,
        cfg,
    ))
}

/// Order convergence `T_n →ᵒ R`: `|T_n − R| ≤ v_n` for all `n` with `v_n ↓ θ`.
pub fn check_o_convergence(seq: &OperatorSequence, r: &OrderBoundedOperator, cfg: &CheckConfig) -> Result<Verdict> {
    check_dominated(seq, r, cfg, false)
}

/// Statistical order convergence: domination by a sequence decreasing to θ
/// on a set of density one.
pub fn check_soc(seq: &OperatorSequence, r: &OrderBoundedOperator, cfg: &CheckConfig) -> Result<Verdict> {
    check_dominated(seq, r, cfg, true)
}

/// Statistically decreasing to `s`: decreasing along a density-one set with
/// infimum `s`.
pub fn check_doc(seq: &OperatorSequence, s: &OrderBoundedOperator, cfg: &CheckConfig) -> Result<Verdict> {
    prepare(seq, Some(s), cfg)?;
    if let Some(v) = mass_refutation(seq, Some(s), cfg, "statistical decrease") {
        return Ok(v);
    }
    if let Some(d) = seq.truncation() {
        return horizon_evidence(seq, Some(s), cfg, truncated_tree_note(d));
    }
    let Some(form) = Form::of(seq) else {
        return horizon_evidence(seq, Some(s), cfg, "tree outside the recognized fragment".into());
    };
    let target = s.entries().to_vec();
    let (good, j) = split(&form);
    match find_refutation(&form, &good, &target, Strength::Density, true, View::Operator) {
        Outcome::Refuted(cert, msg) => {
            return Ok(refuted(cert, format!("statistical decrease to {s} fails: {msg}"), cfg, seq))
        }
        Outcome::Undetermined(note) => return horizon_evidence(seq, Some(s), cfg, note),
        Outcome::Done(()) => {}
    }
    let mut evals = Evals::new(seq);
    match decreasing(&form, &good, j, &mut evals, View::Operator)? {
        Outcome::Done(dec) => {
            let narrative = if dec.j.is_naturals() {
                format!("T_n decreases to {s} along every index")
            } else {
                format!("T_n decreases to {s} along J = {}, which has density one", dec.j)
            };
            Ok(Verdict::new(
                Status::Proven,
                Certificate::DecreasingWitness {
                    j: dec.j,
                    infimum: s.clone(),
                    tail_from: dec.tail_from,
                },
                narrative,
                cfg,
            ))
        }
        Outcome::Undetermined(note) | Outcome::Refuted(_, note) => horizon_evidence(seq, Some(s), cfg, note),
    }
}

fn pointwise_verdict(
    seq: &OperatorSequence,
    entries: Vec<PointwiseEntry>,
    refutation: Option<(Certificate, String)>,
    what: &str,
    cfg: &CheckConfig,
) -> Verdict {
    let truncation = seq.truncation();
    let mut v = if let Some((cert, msg)) = refutation {
        Verdict::new(Status::Refuted, cert, format!("{what} fails: {msg}"), cfg)
    } else {
        let all = entries.iter().all(|e| e.status.is_proven());
        let status = if all { Status::Proven } else { Status::Undetermined { horizon: cfg.horizon } };
        let mut narrative = if all {
            format!("{what} holds at each of the {} sampled positive vectors", entries.len())
        } else {
            format!("{what} not established at every sampled vector")
        };
        if let Some(d) = truncation {
            narrative.push_str(&format!(" (truncation {d})"));
        }
        Verdict::new(status, Certificate::Pointwise { entries }, narrative, cfg)
    };
    v.truncation = truncation;
    v.cone_sampled = true;
    v
}

fn vector_of(values: Vec<Scalar>, like: &OrderBoundedOperator) -> Result<LatticeVector> {
    LatticeVector::new(like.codomain(), values)
}

/// Pointwise statistical decrease: for each sampled `u ≥ θ`, `T_n(u)`
/// decreases to `S(u)` along a density-one set `J_u`.
pub fn check_dopc(seq: &OperatorSequence, s: &OrderBoundedOperator, cfg: &CheckConfig) -> Result<Verdict> {
    let shape = prepare(seq, Some(s), cfg)?;
    let vectors = cfg.vectors_for(shape.domain)?;
    let what = format!("pointwise statistical decrease to {s}");
    let Some(form) = Form::of(seq) else {
        let mut v = horizon_evidence(seq, Some(s), cfg, "tree outside the recognized fragment".into())?;
        v.cone_sampled = true;
        return Ok(v);
    };
    let mut evals = Evals::new(seq);
    let mut entries = Vec::new();
    for u in &vectors {
        let vform = form.apply(u.coords());
        let target = s.apply_coords(u.coords());
        let target_vec = vector_of(target.clone(), s)?;
        let (good, j) = split(&vform);
        let view = View::Vector(u);
        match find_refutation(&vform, &good, &target, Strength::Density, true, view) {
            Outcome::Refuted(cert, msg) => return Ok(pointwise_verdict(seq, entries, Some((cert, format!("at u = {u}: {msg}"))), &what, cfg)),
            Outcome::Undetermined(note) => {
                entries.push(undetermined_entry(u, j, target_vec, note, cfg));
                continue;
            }
            Outcome::Done(()) => {}
        }
        match decreasing(&vform, &good, j.clone(), &mut evals, view)? {
            Outcome::Done(dec) => entries.push(PointwiseEntry {
                u: u.clone(),
                status: Status::Proven,
                j: dec.j,
                target: target_vec,
                steps: Vec::new(),
                tail: Vec::new(),
                from: dec.tail_from,
                note: "decreasing along J with the target as infimum".into(),
            }),
            Outcome::Undetermined(note) | Outcome::Refuted(_, note) => {
                entries.push(undetermined_entry(u, j, target_vec, note, cfg))
            }
        }
    }
    Ok(pointwise_verdict(seq, entries, None, &what, cfg))
}

fn undetermined_entry(u: &LatticeVector, j: IndexSet, target: LatticeVector, note: String, cfg: &CheckConfig) -> PointwiseEntry {
    PointwiseEntry {
        u: u.clone(),
        status: Status::Undetermined { horizon: cfg.horizon },
        j,
        target,
        steps: Vec::new(),
        tail: Vec::new(),
        from: 1,
        note,
    }
}

/// Pointwise statistical order convergence: for each sampled `u ≥ θ`,
/// `|T_n(u) − R(u)|` is dominated on a density-one set by the tail suprema
/// `s_n(u)`, which decrease to zero.
pub fn check_socp(seq: &OperatorSequence, r: &OrderBoundedOperator, cfg: &CheckConfig) -> Result<Verdict> {
    let shape = prepare(seq, Some(r), cfg)?;
    let vectors = cfg.vectors_for(shape.domain)?;
    let what = format!("pointwise statistical order convergence to {r}");
    let Some(form) = Form::of(seq) else {
        let mut v = horizon_evidence(seq, Some(r), cfg, "tree outside the recognized fragment".into())?;
        v.cone_sampled = true;
        return Ok(v);
    };
    let mut evals = Evals::new(seq);
    let mut entries = Vec::new();
    for u in &vectors {
        let vform = form.apply(u.coords());
        let target = r.apply_coords(u.coords());
        let target_vec = vector_of(target.clone(), r)?;
        let (good, j) = split(&vform);
        let view = View::Vector(u);
        match find_refutation(&vform, &good, &target, Strength::Density, true, view) {
            Outcome::Refuted(cert, msg) => return Ok(pointwise_verdict(seq, entries, Some((cert, format!("at u = {u}: {msg}"))), &what, cfg)),
            Outcome::Undetermined(note) => {
                entries.push(undetermined_entry(u, j, target_vec, note, cfg));
                continue;
            }
            Outcome::Done(()) => {}
        }
        let dom = match dominate(&vform, &good, j.clone(), &target, &mut evals, view)? {
            Outcome::Done(d) => d,
            Outcome::Undetermined(note) | Outcome::Refuted(_, note) => {
                entries.push(undetermined_entry(u, j, target_vec, note, cfg));
                continue;
            }
        };
        entries.push(pointwise_dominator(u, dom, target_vec, r)?);
    }
    Ok(pointwise_verdict(seq, entries, None, &what, cfg))
}

/// Tail-sup dominator: a step table up to the symbolic bound, then `C/n`.
fn pointwise_dominator(u: &LatticeVector, dom: Domination, target: LatticeVector, like: &OrderBoundedOperator) -> Result<PointwiseEntry> {
    if dom.n_cut > STEP_TABLE_CAP {
        return Ok(PointwiseEntry {
            u: u.clone(),
            status: Status::Proven,
            tail: dom.harmonic(),
            j: dom.j,
            target,
            steps: Vec::new(),
            from: 1,
            note: "dominated by C/n along J".into(),
        });
    }
    let floor: Vec<Scalar> = dom.tail.iter().map(|c| c / &Scalar::from_u64(dom.n_cut)).collect();
    // running maximum from the right over members below n_cut
    let mut values = vec![floor.clone(); dom.n_cut as usize];
    let mut run = floor;
    let mut members = dom.prefix.iter().rev().peekable();
    for n in (1..dom.n_cut).rev() {
        if let Some((m, diff)) = members.peek() {
            if *m == n {
                for (r, d) in run.iter_mut().zip(diff) {
                    *r = r.clone().max(d.clone());
                }
                members.next();
            }
        }
        values[n as usize] = run.clone();
    }
    let mut steps: Vec<(u64, LatticeVector)> = Vec::new();
    for n in 1..dom.n_cut {
        let v = vector_of(values[n as usize].clone(), like)?;
        match steps.last_mut() {
            Some((last, prev)) if *prev == v => *last = n,
            _ => steps.push((n, v)),
        }
    }
    Ok(PointwiseEntry {
        u: u.clone(),
        status: Status::Proven,
        j: dom.j,
        target,
        steps,
        tail: dom.tail,
        from: dom.n_cut,
        note: "dominated by the tail suprema of |T_n(u) − R(u)| along J".into(),
    })
}

/// Statistical order boundedness: `|T_j| ≤ S` on a density-one set.
pub fn check_stat_order_bounded(seq: &OperatorSequence, cfg: &CheckConfig) -> Result<Verdict> {
    let shape = prepare(seq, None, cfg)?;
    if let Some(v) = mass_refutation(seq, None, cfg, "statistical order boundedness") {
        return Ok(v);
    }
    if let Some(d) = seq.truncation() {
        return horizon_evidence(seq, None, cfg, truncated_tree_note(d));
    }
    let Some(form) = Form::of(seq) else {
        return horizon_evidence(seq, None, cfg, "tree outside the recognized fragment".into());
    };
    let zeros = zero_entries(shape.rows() * shape.cols());
    let (good, j) = split(&form);
    match find_refutation(&form, &good, &zeros, Strength::Density, false, View::Operator) {
        Outcome::Refuted(cert, msg) => {
            return Ok(refuted(cert, format!("no order bound on any density-one set: {msg}"), cfg, seq))
        }
        Outcome::Undetermined(note) => return horizon_evidence(seq, None, cfg, note),
        Outcome::Done(()) => {}
    }

    // a common limit L along the good pieces gives S = |L| + K from the soc dominator K/n
    let limits: Option<Vec<Vec<Scalar>>> = good
        .iter()
        .map(|p| p.entries.iter().map(|f| f.limit().finite().cloned()).collect())
        .collect();
    if let Some(limits) = limits {
        if let Some(first) = limits.first() {
            if limits.iter().all(|l| l == first) {
                let l = OrderBoundedOperator::from_flat(shape.domain, shape.codomain, first.clone())?;
                let v = check_soc(seq, &l, cfg)?;
                if let Certificate::DominatedOnDensityOne { j, dominator, .. } = &v.certificate {
                    if v.is_proven() {
                        let k = dominator.eval(1)?;
                        let bound = l.op_modulus().add(&k)?;
                        let narrative = format!(
                            "T_n soc {l} with dominator {dominator}, so |T_j| ≤ |{l}| + S_1 = {bound} for every j in J = {j}"
                        );
                        return Ok(Verdict::new(
                            Status::Proven,
                            Certificate::BoundedOnDensityOne { j: j.clone(), bound },
                            narrative,
                            cfg,
                        ));
                    }
                }
            }
        }
    }

    // otherwise bound each entry directly
    let mut n_cut = form.valid_from;
    for p in &good {
        for f in &p.entries {
            n_cut = n_cut.max(f.sign_from());
        }
    }
    if n_cut > SCAN_CAP {
        return horizon_evidence(seq, None, cfg, format!("symbolic bound {n_cut} is beyond the scan cap"));
    }
    let mut bound = zeros;
    for p in &good {
        for (k, f) in p.entries.iter().enumerate() {
            match f.eventual_abs().tail_sup(n_cut) {
                Some(c) => bound[k] = bound[k].clone().max(c),
                None => return horizon_evidence(seq, None, cfg, "entry tail sup not certified".into()),
            }
        }
    }
    let mut evals = Evals::new(seq);
    for n in 1..n_cut {
        if j.contains(n) {
            for (b, x) in bound.iter_mut().zip(evals.get(n)?.entries()) {
                *b = b.clone().max(x.abs());
            }
        }
    }
    let bound = OrderBoundedOperator::from_flat(shape.domain, shape.codomain, bound)?;
    let narrative = format!("|T_j| ≤ {bound} for every j in J = {j}, which has density one");
    Ok(Verdict::new(
        Status::Proven,
        Certificate::BoundedOnDensityOne { j, bound },
        narrative,
        cfg,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SpaceDescriptor;
    use crate::syntax::{parse_sequence, Env};

    fn env() -> Env {
        let mut env = Env::default();
        env.operators.insert("I".into(), OrderBoundedOperator::identity(SpaceDescriptor::finite(2).unwrap()));
        env
    }

    fn seq(text: &str) -> OperatorSequence {
        parse_sequence(text, &env()).unwrap()
    }

    fn theta() -> OrderBoundedOperator {
        OrderBoundedOperator::zero(SpaceDescriptor::finite(2).unwrap(), SpaceDescriptor::finite(2).unwrap())
    }

    fn cfg() -> CheckConfig {
        CheckConfig::default().with_horizon(200)
    }

    const EXAMPLE: &str = "piecewise(squares, scaled(n, I), scaled(1/(n+1), I))";

    #[test]
    fn example_sequence_o_and_soc() {
        let v = check_o_convergence(&seq(EXAMPLE), &theta(), &cfg()).unwrap();
        assert!(v.is_refuted());
        match v.certificate {
            Certificate::UnboundedAlong { region, growth, .. } => {
                assert_eq!(region, IndexSet::Squares);
                assert_eq!(growth, RationalFunction::index());
            }
            other => panic!("{other:?}"),
        }
        let v = check_soc(&seq(EXAMPLE), &theta(), &cfg()).unwrap();
        assert!(v.is_proven());
        match v.certificate {
            Certificate::DominatedOnDensityOne { j, dominator, .. } => {
                assert_eq!(j, IndexSet::complement(IndexSet::Squares));
                assert_eq!(dominator, seq("scaled(1/n, I)"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_cases() {
        let r = OrderBoundedOperator::from_ints(&[&[1, -1], &[2, 0]]).unwrap();
        let c = OperatorSequence::Const(r.clone());
        for v in [check_o_convergence(&c, &r, &cfg()).unwrap(), check_soc(&c, &r, &cfg()).unwrap()] {
            assert!(v.is_proven());
            assert!(matches!(&v.certificate, Certificate::DominatedOnDensityOne { j, dominator: OperatorSequence::Const(z), .. }
                if j.is_naturals() && z.is_zero()));
        }
        assert!(check_doc(&c, &r, &cfg()).unwrap().is_proven());
        let v = check_o_convergence(&seq("scaled(1/n, I)"), &theta(), &cfg()).unwrap();
        assert!(matches!(&v.certificate, Certificate::DominatedOnDensityOne { dominator, .. } if *dominator == seq("scaled(1/n, I)")));
    }

    #[test]
    fn doc_examples() {
        let v = check_doc(&seq("scaled(1/n, I)"), &theta(), &cfg()).unwrap();
        assert!(matches!(&v.certificate, Certificate::DecreasingWitness { j, .. } if j.is_naturals()));
        let v = check_doc(&seq("piecewise(squares, scaled(5, I), scaled(1/n, I))"), &theta(), &cfg()).unwrap();
        assert!(v.is_proven());
        assert!(matches!(&v.certificate, Certificate::DecreasingWitness { j, .. } if *j == IndexSet::complement(IndexSet::Squares)));
        // increasing toward the limit is not a decrease
        let v = check_doc(&seq("scaled(n/(n+1), I)"), &OrderBoundedOperator::identity(SpaceDescriptor::finite(2).unwrap()), &cfg()).unwrap();
        assert!(!v.is_proven());
        // wrong infimum
        let v = check_doc(&seq("scaled(1/n, I)"), &OrderBoundedOperator::identity(SpaceDescriptor::finite(2).unwrap()), &cfg()).unwrap();
        assert!(v.is_refuted());
    }

    #[test]
    fn coord_functionals() {
        let cf = OperatorSequence::CoordFunctional(64);
        let zero = OrderBoundedOperator::zero(
            crate::opseq::coord_functional_shape(64).unwrap().domain,
            SpaceDescriptor::finite(1).unwrap(),
        );
        let v = check_soc(&cf, &zero, &cfg()).unwrap();
        assert!(matches!(v.certificate, Certificate::MassLowerBound { lower_bound: 32, truncation: 64, .. }));
        assert_eq!(v.truncation, Some(64));
        let cfg1 = CheckConfig {
            test_vectors: Some(vec![LatticeVector::basis(zero.domain(), 0).unwrap()]),
            ..cfg()
        };
        let v = check_dopc(&cf, &zero, &cfg1).unwrap();
        assert!(v.is_proven() && v.cone_sampled);
        let v = check_socp(&cf, &zero, &cfg()).unwrap();
        assert!(v.is_proven());
        let Certificate::Pointwise { entries } = &v.certificate else { panic!() };
        assert_eq!(entries.len(), 65);
    }

    #[test]
    fn stat_bounded() {
        let v = check_stat_order_bounded(&seq(EXAMPLE), &cfg()).unwrap();
        assert!(matches!(&v.certificate, Certificate::BoundedOnDensityOne { bound, .. }
            if *bound == OrderBoundedOperator::identity(SpaceDescriptor::finite(2).unwrap())));
        let v = check_stat_order_bounded(&seq("scaled(n, I)"), &cfg()).unwrap();
        assert!(matches!(&v.certificate, Certificate::UnboundedAlong { region, .. } if region.is_naturals()));
        let r = OrderBoundedOperator::from_ints(&[&[1, -3], &[0, 2]]).unwrap();
        let v = check_stat_order_bounded(&OperatorSequence::Const(r.clone()), &cfg()).unwrap();
        assert!(matches!(&v.certificate, Certificate::BoundedOnDensityOne { bound, j } if *bound == r.op_modulus() && j.is_naturals()));
        // oscillating, bounded but not convergent
        let v = check_stat_order_bounded(&seq("piecewise(ap(1, 2), const(I), scaled((n-3)/(n+1), I))"), &cfg()).unwrap();
        assert!(v.is_proven());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let r = OrderBoundedOperator::identity(SpaceDescriptor::finite(3).unwrap());
        assert!(matches!(check_soc(&seq("scaled(1/n, I)"), &r, &cfg()), Err(Error::Shape(_))));
    }
}
