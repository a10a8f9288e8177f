//! Constructions extracted from the proofs: splitting a statistically order
//! bounded sequence into a bounded part and a density-zero residual, and
//! modifying a statistically convergent sequence on a density-zero set so it
//! converges in order.

use serde::Serialize;

use crate::density::{density_exact, IndexSet};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::opseq::OperatorSequence;
use crate::operator::OrderBoundedOperator;
use crate::verdict::{Certificate, CheckConfig, Status, Verdict};

use super::checks::{check_doc, check_o_convergence, check_soc, check_stat_order_bounded};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Agrees with the input on `j`, θ elsewhere.
    pub t_seq: OperatorSequence,
    /// θ on `j`, the input elsewhere.
    pub u_seq: OperatorSequence,
    pub j: IndexSet,
    pub bound: OrderBoundedOperator,
    /// The statistical order boundedness verdict the split rests on.
    pub verdict: Verdict,
    /// Indices at which the three invariants were rechecked exactly.
    pub checked_upto: u64,
}

fn precondition(reason: &str, verdict: Verdict) -> Error {
    Error::Precondition {
        reason: reason.to_string(),
        verdict: Box::new(verdict),
    }
}

/// `R_n = T_n + U_n` with `T` bounded by the emitted operator and `U`
/// vanishing off a density-zero set. Refuses unless statistical order
/// boundedness is proven.
pub fn decompose_stat_bounded(seq: &OperatorSequence, cfg: &CheckConfig) -> Result<Decomposition> {
    let verdict = check_stat_order_bounded(seq, cfg)?;
    let Certificate::BoundedOnDensityOne { j, bound } = verdict.certificate.clone() else {
        return Err(precondition("statistical order boundedness is not proven", verdict));
    };
    let shape = seq.shape()?;
    let theta = OperatorSequence::Const(OrderBoundedOperator::zero(shape.domain, shape.codomain));
    let (t_seq, u_seq) = if j.is_naturals() {
        (seq.clone(), theta)
    } else {
        (
            OperatorSequence::piecewise(j.clone(), seq.clone(), theta.clone()),
            OperatorSequence::piecewise(j.clone(), theta, seq.clone()),
        )
    };
    if !density_exact(&IndexSet::complement(j.clone())).is_zero() {
        return Err(Error::Refused(format!("residual support {} is not density zero", IndexSet::complement(j))));
    }
    for n in 1..=cfg.horizon {
        let (r, t, u) = (seq.eval(n)?, t_seq.eval(n)?, u_seq.eval(n)?);
        if t.add(&u)? != r {
            return Err(Error::Refused(format!("recombination fails at n = {n}")));
        }
        if !t.op_modulus().op_leq(&bound)? {
            return Err(Error::Refused(format!("bounded part exceeds {bound} at n = {n}")));
        }
    }
    Ok(Decomposition {
        t_seq,
        u_seq,
        j,
        bound,
        verdict,
        checked_upto: cfg.horizon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessMode {
    Soc,
    Doc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub t_seq: OperatorSequence,
    /// `T_n = R_n` for `n` in this density-one set.
    pub agreement: IndexSet,
    /// Order convergence (soc mode) or everywhere-decrease (doc mode) of `T`.
    pub verdict: Verdict,
    /// The verdict the construction started from.
    pub source: Verdict,
}

/// Builds `T` agreeing with the input on a density-one set `D`:
/// in soc mode `T` is order convergent to `r`, in doc mode `T` decreases to
/// `r` (from its first index on, or from a finite point when the original
/// prefix is not monotone).
pub fn construct_witness(seq: &OperatorSequence, r: &OrderBoundedOperator, mode: WitnessMode, cfg: &CheckConfig) -> Result<Witness> {
    match mode {
        WitnessMode::Soc => soc_witness(seq, r, cfg),
        WitnessMode::Doc => doc_witness(seq, r, cfg),
    }
}

fn soc_witness(seq: &OperatorSequence, r: &OrderBoundedOperator, cfg: &CheckConfig) -> Result<Witness> {
    let source = check_soc(seq, r, cfg)?;
    let Certificate::DominatedOnDensityOne { j: d, dominator, .. } = source.certificate.clone() else {
        return Err(precondition("statistical order convergence is not proven", source));
    };
    let t_seq = if d.is_naturals() {
        seq.clone()
    } else {
        OperatorSequence::piecewise(d.clone(), seq.clone(), OperatorSequence::Const(r.clone()))
    };
    let o = check_o_convergence(&t_seq, r, cfg)?;
    let Certificate::DominatedOnDensityOne { dominator: o_dominator, .. } = o.certificate.clone() else {
        return Err(Error::Refused(format!("modified sequence not proven order convergent: {}", o.narrative)));
    };
    let y = if d.is_naturals() {
        format!("Y_n = {dominator} at n")
    } else {
        format!("Y_n = {dominator} at d_n, the least element of {d} with d_n ≥ n")
    };
    let narrative = format!(
        "T agrees with the input on D = {d}, which has density one, and equals {r} elsewhere; \
         the tail suprema {y} decrease to θ and dominate |T_n − {r}|, so T →ᵒ {r} (dominator {o_dominator})"
    );
    let verdict = Verdict::new(
        Status::Proven,
        Certificate::TailSupWitness {
            agreement: d.clone(),
            source: dominator,
            y,
            o_dominator,
            limit: r.clone(),
        },
        narrative,
        cfg,
    );
    Ok(Witness {
        t_seq,
        agreement: d,
        verdict,
        source,
    })
}

fn doc_witness(seq: &OperatorSequence, s: &OrderBoundedOperator, cfg: &CheckConfig) -> Result<Witness> {
    let source = check_doc(seq, s, cfg)?;
    let Certificate::DecreasingWitness { j, .. } = source.certificate.clone() else {
        return Err(precondition("statistical decrease is not proven", source));
    };
    let t_seq = if j.is_naturals() {
        seq.clone()
    } else {
        let form = Form::of(seq).ok_or_else(|| Error::Refused("no closed form to fill the gaps with".into()))?;
        let good: Vec<_> = form.pieces.iter().filter(|p| !p.region.density().is_zero()).collect();
        let [fill] = good.as_slice() else {
            return Err(Error::Refused(format!(
                "{} active closed forms along J; no single form to fill the gaps with",
                good.len()
            )));
        };
        let fill = OperatorSequence::from_entries(seq.shape()?, &fill.entries)?;
        OperatorSequence::piecewise(j.clone(), seq.clone(), fill)
    };
    let verdict = check_doc(&t_seq, s, cfg)?;
    let everywhere = match &verdict.certificate {
        Certificate::DecreasingWitness { j, .. } => IndexSet::complement(j.clone()).finite_bound().is_some(),
        _ => false,
    };
    if !verdict.is_proven() || !everywhere {
        return Err(Error::Refused(format!("filled sequence does not decrease from a finite index on: {}", verdict.narrative)));
    }
    Ok(Witness {
        t_seq,
        agreement: j,
        verdict,
        source,
    })
}
