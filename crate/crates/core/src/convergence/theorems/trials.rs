//! One randomized trial per result. Each trial generates an instance,
//! establishes the hypothesis with the relevant checker and then asserts the
//! conclusion at the checkable level. Every definite verdict met on the way
//! is replayed by the re-verifier.

use rand::Rng;

use crate::density::IndexSet;
use crate::lattice::{LatticeVector, SpaceDescriptor};
use crate::opseq::OperatorSequence as Seq;
use crate::operator::{band_contains, band_projection, BandPattern, OrderBoundedOperator as Op};
use crate::scalar::Scalar;
use crate::verdict::{CheckConfig, Verdict};

use super::super::reverify::{reverify, reverify_decomposition, reverify_witness, Claim};
use super::super::witness::{construct_witness, decompose_stat_bounded, WitnessMode};
use super::super::{check_doc, check_dopc, check_o_convergence, check_soc, check_socp, check_stat_order_bounded};
use super::gen::{along, harmonic, Gen};

/// Re-verification looks at most this far.
const REVERIFY_CAP: u64 = 256;
/// Generator invariants such as `S_n ≤ P_n` are sanity-checked this far.
const SANITY: u64 = 64;

pub type Outcome = std::result::Result<(), String>;

pub struct Trial<'a> {
    pub g: Gen,
    pub cfg: &'a CheckConfig,
    pub log: Vec<String>,
    pub reverified: u64,
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

impl Trial<'_> {
    fn rh(&self) -> u64 {
        self.cfg.horizon.min(REVERIFY_CAP)
    }

    fn show(&mut self, name: &str, x: impl std::fmt::Display) {
        self.log.push(format!("{name} = {x}"));
    }

    fn shape(&mut self) -> (SpaceDescriptor, SpaceDescriptor) {
        let (m, k) = (self.g.dim(), self.g.dim());
        (self.g.space(k), self.g.space(m))
    }

    fn square(&mut self) -> SpaceDescriptor {
        let d = self.g.dim();
        self.g.space(d)
    }

    /// Runs the checker for `claim` and replays any definite verdict.
    fn check(&mut self, seq: &Seq, claim: Claim) -> std::result::Result<Verdict, String> {
        let cfg = self.cfg;
        let v = match claim {
            Claim::Order(r) => check_o_convergence(seq, r, cfg),
            Claim::Soc(r) => check_soc(seq, r, cfg),
            Claim::Doc(s) => check_doc(seq, s, cfg),
            Claim::Dopc(s) => check_dopc(seq, s, cfg),
            Claim::Socp(r) => check_socp(seq, r, cfg),
            Claim::StatBounded => check_stat_order_bounded(seq, cfg),
        }
        .map_err(text)?;
        if !matches!(v.status, crate::verdict::Status::Undetermined { .. }) {
            reverify(seq, claim, &v, self.rh()).map_err(|e| format!("re-verification rejected {}: {e}", v.certificate.variant()))?;
            self.reverified += 1;
        }
        Ok(v)
    }

    fn require(&mut self, what: &str, seq: &Seq, claim: Claim) -> Outcome {
        let v = self.check(seq, claim)?;
        if v.is_proven() {
            Ok(())
        } else {
            Err(format!("{what} is {}: {}", v.status.label(), v.narrative))
        }
    }

    /// A Proven verdict for `claim` is only allowed when `allowed` holds.
    fn forbid_unless(&mut self, what: &str, seq: &Seq, claim: Claim, allowed: bool) -> Outcome {
        let v = self.check(seq, claim)?;
        if v.is_proven() && !allowed {
            return Err(format!("{what} proven: {}", v.narrative));
        }
        Ok(())
    }

    fn sanity(&mut self, what: &str, ok: impl Fn(u64) -> crate::error::Result<bool>) -> Outcome {
        for n in 1..=SANITY {
            if !ok(n).map_err(text)? {
                return Err(format!("generator broke {what} at n = {n}"));
            }
        }
        Ok(())
    }

    fn mask(&mut self, len: usize) -> Vec<bool> {
        let mut m: Vec<bool> = (0..len).map(|_| self.g.rng.random_bool(0.5)).collect();
        if len > 1 && m.iter().all(|&b| b) {
            m[0] = false;
        }
        m
    }
}

fn leq_at(a: &Seq, b: &Seq, n: u64) -> crate::error::Result<bool> {
    a.eval(n)?.op_leq(&b.eval(n)?)
}

/// Same or random candidate limit.
fn candidate(t: &mut Trial, limit: &Op) -> Op {
    match t.g.rng.random_range(0..3) {
        0 => limit.clone(),
        1 => t.g.op(limit.domain(), limit.codomain()),
        _ => {
            let mut e = Op::zero(limit.domain(), limit.codomain()).entries().to_vec();
            let k = t.g.rng.random_range(0..e.len());
            e[k] = Scalar::ratio(1, 1000);
            limit.add(&Op::from_flat(limit.domain(), limit.codomain(), e).expect("same shape")).expect("same shape")
        }
    }
}

pub fn implication(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let s = t.g.op(dom, cod);
    let seq = t.g.doc_seq(&s);
    t.show("S_n", &seq);
    t.show("S", &s);
    t.require("hypothesis S_n doc S", &seq, Claim::Doc(&s))?;
    t.require("conclusion S_n dopc S", &seq, Claim::Dopc(&s))
}

pub fn operator_uniqueness(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let s = t.g.op(dom, cod);
    let seq = t.g.doc_seq(&s);
    let p = candidate(t, &s);
    t.show("S_n", &seq);
    t.show("S", &s);
    t.show("P", &p);
    t.require("hypothesis S_n doc S", &seq, Claim::Doc(&s))?;
    t.forbid_unless("S_n doc P with P ≠ S", &seq, Claim::Doc(&p), p == s)?;
    t.forbid_unless("S_n dopc P with P ≠ S", &seq, Claim::Dopc(&p), p == s)
}

pub fn decomposition_monotone(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let s = t.g.op(dom, cod);
    let seq = t.g.doc_seq(&s);
    t.show("S_n", &seq);
    t.show("S", &s);
    t.require("hypothesis S_n doc S", &seq, Claim::Doc(&s))?;
    let w = construct_witness(&seq, &s, WitnessMode::Doc, t.cfg).map_err(text)?;
    t.show("P_n", &w.t_seq);
    reverify_witness(&seq, &s, WitnessMode::Doc, &w, t.rh()).map_err(|e| format!("witness rejected: {e}"))?;
    t.reverified += 1;
    // converse: a decreasing P_n altered on a density-zero set
    let (a, b) = t.g.coeff();
    let dir = t.g.pos_op(dom, cod);
    let p = along(&s, harmonic(a, b), dir);
    let bad = t.g.bad_set();
    let junk = t.g.junk(dom, cod);
    let altered = Seq::piecewise(IndexSet::complement(bad), p.clone(), junk);
    t.show("altered", &altered);
    t.require("hypothesis P_n decreasing to S", &p, Claim::Doc(&s))?;
    t.require("conclusion altered doc S", &altered, Claim::Doc(&s))
}

pub fn additivity(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let (s, p) = (t.g.op(dom, cod), t.g.op(dom, cod));
    let (a, b) = (t.g.doc_seq(&s), t.g.doc_seq(&p));
    let alpha = t.g.nonneg_scalar();
    t.show("S_n", &a);
    t.show("P_n", &b);
    t.show("alpha", &alpha);
    t.require("hypothesis S_n doc S", &a, Claim::Doc(&s))?;
    t.require("hypothesis P_n doc P", &b, Claim::Doc(&p))?;
    let sum = Seq::sum(a.clone(), b);
    let sp = s.add(&p).map_err(text)?;
    t.require("conclusion S_n + P_n doc S + P", &sum, Claim::Doc(&sp))?;
    t.require("conclusion S_n + P_n dopc S + P", &sum, Claim::Dopc(&sp))?;
    t.require("conclusion αS_n doc αS", &Seq::scale(alpha.clone(), a), Claim::Doc(&s.scale(&alpha)))
}

pub fn lattice_operations(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let (s, p) = (t.g.op(dom, cod), t.g.op(dom, cod));
    let (a, b) = (t.g.doc_seq(&s), t.g.doc_seq(&p));
    t.show("S_n", &a);
    t.show("P_n", &b);
    t.require("hypothesis S_n doc S", &a, Claim::Doc(&s))?;
    t.require("hypothesis P_n doc P", &b, Claim::Doc(&p))?;
    let join = Seq::join(a.clone(), b.clone());
    let sj = s.op_join(&p).map_err(text)?;
    t.require("conclusion S_n ∨ P_n doc S ∨ P", &join, Claim::Doc(&sj))?;
    t.require("conclusion S_n ∨ P_n dopc S ∨ P", &join, Claim::Dopc(&sj))?;
    t.require("conclusion S_n ∧ P_n doc S ∧ P", &Seq::meet(a.clone(), b), Claim::Doc(&s.op_meet(&p).map_err(text)?))?;
    t.require("conclusion S_n⁺ doc S⁺", &Seq::pos_part(a), Claim::Doc(&s.pos_part()))
}

pub fn squeeze(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let target = t.g.op(dom, cod);
    let (a, b) = t.g.coeff();
    let dir = t.g.pos_op(dom, cod);
    let mid = along(&target, harmonic(a, b), dir.clone());
    let (a1, b1) = (t.g.rng.random_range(1..=a), t.g.rng.random_range(b..=3));
    let (a2, b2) = (t.g.rng.random_range(a..=t.g.size.mag), t.g.rng.random_range(0..=b));
    let low_junk = Seq::Const(target.sub(&t.g.pos_op(dom, cod)).map_err(text)?);
    // P_1 is the largest term of P, so junk above it keeps Q_n ≥ P_n
    let top = mid.eval(1).map_err(text)?;
    let high_junk = Seq::Const(top.add(&t.g.pos_op(dom, cod)).map_err(text)?);
    let low = along(&target, harmonic(a1, b1), dir.clone());
    let high = along(&target, harmonic(a2, b2), dir);
    let bad_low = t.g.bad_set();
    let bad_high = t.g.bad_set();
    let low = Seq::piecewise(IndexSet::complement(bad_low), low, low_junk);
    let high = Seq::piecewise(IndexSet::complement(bad_high), high, high_junk);
    t.show("S_n", &low);
    t.show("P_n", &mid);
    t.show("Q_n", &high);
    t.sanity("S_n ≤ P_n ≤ Q_n", |n| Ok(leq_at(&low, &mid, n)? && leq_at(&mid, &high, n)?))?;
    t.sanity("P_n decreasing", |n| mid.eval(n + 1)?.op_leq(&mid.eval(n)?))?;
    t.require("hypothesis S_n dopc T", &low, Claim::Dopc(&target))?;
    t.require("hypothesis Q_n dopc T", &high, Claim::Dopc(&target))?;
    t.require("conclusion P_n dopc T", &mid, Claim::Dopc(&target))
}

pub fn composition(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let new = t.square();
    let s = t.g.op(dom, cod);
    let seq = t.g.doc_seq(&s);
    let op = t.g.pos_op(cod, new);
    t.show("S_n", &seq);
    t.show("T", &op);
    t.require("hypothesis S_n doc S", &seq, Claim::Doc(&s))?;
    let composed = Seq::compose_left(op.clone(), seq.clone());
    let ts = op.compose(&s).map_err(text)?;
    t.require("conclusion T∘S_n doc T∘S", &composed, Claim::Doc(&ts))?;
    t.require("hypothesis S_n dopc S", &seq, Claim::Dopc(&s))?;
    t.require("conclusion T∘S_n dopc T∘S", &composed, Claim::Dopc(&ts))
}

pub fn right_composition(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let s = t.g.op(dom, cod);
    let seq = t.g.doc_seq(&s);
    let p = t.g.pos_op(dom, dom);
    t.show("S_n", &seq);
    t.show("P", &p);
    t.require("hypothesis S_n doc S", &seq, Claim::Doc(&s))?;
    let sp = s.compose(&p).map_err(text)?;
    t.require("conclusion S_n∘P doc S∘P", &Seq::compose_right(seq, p), Claim::Doc(&sp))
}

pub fn wedge_zero(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let theta = Op::zero(dom, cod);
    let seq = t.g.doc_seq(&theta);
    let op = t.g.pos_op(dom, cod);
    t.show("S_n", &seq);
    t.show("T", &op);
    t.require("hypothesis S_n doc θ", &seq, Claim::Doc(&theta))?;
    t.require("conclusion S_n ∧ T doc θ", &Seq::meet(seq, Seq::Const(op)), Claim::Doc(&theta))
}

pub fn implication_soc(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    t.show("R_n", &seq);
    t.show("R", &r);
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    t.require("conclusion R_n socp R", &seq, Claim::Socp(&r))
}

pub fn linearity_soc(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let (r, s) = (t.g.op(dom, cod), t.g.op(dom, cod));
    let (a, b) = (t.g.soc_seq(&r), t.g.soc_seq(&s));
    let (alpha, beta) = (t.g.scalar(), t.g.scalar());
    t.show("R_n", &a);
    t.show("T_n", &b);
    t.show("(alpha, beta)", format!("({alpha}, {beta})"));
    t.require("hypothesis R_n soc R", &a, Claim::Soc(&r))?;
    t.require("hypothesis T_n soc T", &b, Claim::Soc(&s))?;
    let combo = Seq::sum(Seq::scale(alpha.clone(), a), Seq::scale(beta.clone(), b));
    let limit = r.scale(&alpha).add(&s.scale(&beta)).map_err(text)?;
    t.require("conclusion αR_n + βT_n soc αR + βT", &combo, Claim::Soc(&limit))
}

pub fn lattice_soc(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let (r, s) = (t.g.op(dom, cod), t.g.op(dom, cod));
    let (a, b) = (t.g.soc_seq(&r), t.g.soc_seq(&s));
    t.show("R_n", &a);
    t.show("T_n", &b);
    t.require("hypothesis R_n soc R", &a, Claim::Soc(&r))?;
    t.require("hypothesis T_n soc T", &b, Claim::Soc(&s))?;
    t.require("conclusion |R_n| soc |R|", &Seq::abs(a.clone()), Claim::Soc(&r.op_modulus()))?;
    t.require("conclusion R_n ∨ T_n soc R ∨ T", &Seq::join(a.clone(), b.clone()), Claim::Soc(&r.op_join(&s).map_err(text)?))?;
    t.require("conclusion R_n ∧ T_n soc R ∧ T", &Seq::meet(a, b), Claim::Soc(&r.op_meet(&s).map_err(text)?))
}

pub fn positive_negative_parts(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    t.show("R_n", &seq);
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    t.require("conclusion R_n⁺ soc R⁺", &Seq::pos_part(seq.clone()), Claim::Soc(&r.pos_part()))?;
    t.require("conclusion R_n⁻ soc R⁻", &Seq::neg_part(seq), Claim::Soc(&r.neg_part()))
}

pub fn monotonicity_soc(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let seq = t.g.increasing_seq(&r);
    t.show("R_n", &seq);
    t.sanity("R_n increasing", |n| seq.eval(n)?.op_leq(&seq.eval(n + 1)?))?;
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    t.require("conclusion R_n →ᵒ R", &seq, Claim::Order(&r))
}

pub fn soc_uniqueness(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    let r2 = candidate(t, &r);
    t.show("R_n", &seq);
    t.show("R1", &r);
    t.show("R2", &r2);
    t.require("hypothesis R_n soc R1", &seq, Claim::Soc(&r))?;
    t.forbid_unless("R_n soc R2 with R2 ≠ R1", &seq, Claim::Soc(&r2), r2 == r)
}

pub fn characterization(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    t.show("R_n", &seq);
    t.show("R", &r);
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    let w = construct_witness(&seq, &r, WitnessMode::Soc, t.cfg).map_err(text)?;
    t.show("T_n", &w.t_seq);
    reverify_witness(&seq, &r, WitnessMode::Soc, &w, t.rh()).map_err(|e| format!("witness rejected: {e}"))?;
    t.reverified += 1;
    t.require("conclusion T_n →ᵒ R", &w.t_seq, Claim::Order(&r))?;
    // converse: an order convergent sequence altered on a density-zero set
    let (a, b) = t.g.coeff();
    let dir = t.g.op(dom, cod);
    let base = along(&r, harmonic(a, b), dir);
    let bad = t.g.bad_set();
    let junk = t.g.junk(dom, cod);
    let altered = Seq::piecewise(IndexSet::complement(bad), base.clone(), junk);
    t.show("altered", &altered);
    t.require("hypothesis T_n →ᵒ R", &base, Claim::Order(&r))?;
    t.require("conclusion altered soc R", &altered, Claim::Soc(&r))
}

pub fn soc_squeeze(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let (a1, b1) = t.g.coeff();
    let (a2, b2) = t.g.coeff();
    let low_dir = t.g.pos_op(dom, cod).neg();
    let high_dir = t.g.pos_op(dom, cod);
    let low_junk = Seq::Const(r.sub(&t.g.pos_op(dom, cod)).map_err(text)?);
    let high_junk = Seq::Const(r.add(&t.g.pos_op(dom, cod)).map_err(text)?);
    let low = along(&r, harmonic(a1, b1), low_dir);
    let low = t.g.spoil_with(low, low_junk);
    let high = along(&r, harmonic(a2, b2), high_dir);
    let high = t.g.spoil_with(high, high_junk);
    let w_limit = t.g.op(dom, cod);
    let wild = t.g.soc_seq(&w_limit);
    let mid = Seq::meet(Seq::join(low.clone(), wild), high.clone());
    t.show("R_n", &low);
    t.show("U_n", &mid);
    t.show("T_n", &high);
    t.sanity("R_n ≤ U_n ≤ T_n", |n| Ok(leq_at(&low, &mid, n)? && leq_at(&mid, &high, n)?))?;
    t.require("hypothesis R_n soc R", &low, Claim::Soc(&r))?;
    t.require("hypothesis T_n soc R", &high, Claim::Soc(&r))?;
    t.require("conclusion U_n soc R", &mid, Claim::Soc(&r))
}

pub fn disjointness(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let mask = t.mask(dom.dim() * cod.dim());
    let off: Vec<bool> = mask.iter().map(|b| !b).collect();
    t.g.mask = Some(mask.clone());
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    t.g.mask = Some(off);
    let u = t.g.op(dom, cod);
    t.g.mask = None;
    let r2 = candidate(t, &r);
    t.show("R_n", &seq);
    t.show("U", &u);
    t.show("candidate", &r2);
    let u_abs = u.op_modulus();
    t.sanity("R_n ⊥ U", |n| Ok(seq.eval(n)?.op_modulus().op_meet(&u_abs)?.is_zero()))?;
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    let disjoint = r2.op_modulus().op_meet(&u_abs).map_err(text)?.is_zero();
    if r2 == r && !disjoint {
        return Err("proven limit is not disjoint from U".into());
    }
    t.forbid_unless("R_n soc R' with R' not disjoint from U", &seq, Claim::Soc(&r2), disjoint)
}

pub fn band_closed(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let mask = t.mask(dom.dim() * cod.dim());
    let cols = dom.dim();
    let pattern = BandPattern::entries(mask.iter().enumerate().filter(|(_, b)| **b).map(|(k, _)| (k / cols, k % cols)));
    t.g.mask = Some(mask);
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    t.g.mask = None;
    let r2 = candidate(t, &r);
    t.show("R_n", &seq);
    t.show("band support", format!("{:?}", pattern.entry_support));
    t.show("candidate", &r2);
    t.sanity("R_n ∈ band", |n| band_contains(&pattern, &seq.eval(n)?))?;
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    if !band_contains(&pattern, &r).map_err(text)? {
        return Err("proven limit left the band".into());
    }
    let inside = band_contains(&pattern, &r2).map_err(text)?;
    t.forbid_unless("R_n soc R' with R' outside the band", &seq, Claim::Soc(&r2), inside)
}

pub fn order_continuous(t: &mut Trial) -> Outcome {
    // every matrix operator is order continuous, so the band is everything
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    t.show("R_n", &seq);
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    if !band_contains(&BandPattern::full(cod.dim(), dom.dim()), &r).map_err(text)? {
        return Err("limit outside the full band".into());
    }
    // R(u/k) ↓ θ in modulus along the decreasing net u/k ↓ θ
    let u = LatticeVector::ones(dom);
    let bound = r.op_modulus().apply(&u).map_err(text)?;
    for k in 1..=SANITY {
        let x = u.scale(&Scalar::ratio(1, k as i64));
        let y = r.apply(&x).map_err(text)?.abs();
        let cap = bound.scale(&Scalar::ratio(1, k as i64));
        if !y.leq(&cap).map_err(text)? {
            return Err(format!("|R(u/{k})| exceeds |R|(u)/{k}"));
        }
    }
    Ok(())
}

pub fn composition_soc(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let new = t.square();
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    let op = t.g.pos_op(cod, new);
    t.show("R_n", &seq);
    t.show("T", &op);
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    let tr = op.compose(&r).map_err(text)?;
    t.require("conclusion T∘R_n soc T∘R", &Seq::compose_left(op, seq), Claim::Soc(&tr))
}

pub fn band_projection_soc(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    let coords: Vec<usize> = (0..cod.dim()).filter(|_| t.g.rng.random_bool(0.5)).collect();
    let p = band_projection(&BandPattern::coords(coords), cod).map_err(text)?;
    t.show("R_n", &seq);
    t.show("P", &p);
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    let pr = p.compose(&r).map_err(text)?;
    t.require("conclusion P∘R_n soc P∘R", &Seq::compose_left(p, seq), Claim::Soc(&pr))
}

pub fn st_conv_implies_st_ob(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let r = t.g.op(dom, cod);
    let seq = t.g.soc_seq(&r);
    t.show("R_n", &seq);
    t.require("hypothesis R_n soc R", &seq, Claim::Soc(&r))?;
    t.require("conclusion R_n statistically order bounded", &seq, Claim::StatBounded)
}

pub fn decomposition_bounded(t: &mut Trial) -> Outcome {
    let (dom, cod) = t.shape();
    let seq = t.g.bounded_seq(dom, cod);
    t.show("R_n", &seq);
    t.require("hypothesis R_n statistically order bounded", &seq, Claim::StatBounded)?;
    let d = decompose_stat_bounded(&seq, t.cfg).map_err(text)?;
    t.show("T_n", &d.t_seq);
    t.show("U_n", &d.u_seq);
    reverify_decomposition(&seq, &d, t.rh()).map_err(|e| format!("decomposition rejected: {e}"))?;
    t.reverified += 1;
    // order convergent part plus a residual vanishing on a density-one set
    let r = t.g.op(dom, cod);
    let conv = t.g.soc_seq(&r);
    t.show("convergent R_n", &conv);
    t.require("hypothesis R_n soc R", &conv, Claim::Soc(&r))?;
    let w = construct_witness(&conv, &r, WitnessMode::Soc, t.cfg).map_err(text)?;
    reverify_witness(&conv, &r, WitnessMode::Soc, &w, t.rh()).map_err(|e| format!("witness rejected: {e}"))?;
    t.reverified += 1;
    t.require("conclusion T_n →ᵒ R", &w.t_seq, Claim::Order(&r))
}
