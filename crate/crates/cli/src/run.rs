use std::time::{SystemTime, UNIX_EPOCH};

use latticestat::convergence::{
    check_doc, check_dopc, check_o_convergence, check_soc, check_socp, check_stat_order_bounded,
    construct_witness, decompose_stat_bounded, reverify, reverify_decomposition, reverify_witness, verify_theorem,
    Claim, Counterexample, Decomposition, TheoremId, Witness, WitnessMode,
};
use latticestat::{CheckConfig, Error as CoreError, LatticeVector, OperatorSequence, OrderBoundedOperator, Scalar, Verdict};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Notion, Plan, Query, QueryKind, RawConfig};
use crate::error::{CliError, CliResult};

pub const TOOL: &str = "latticestat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    /// The only field that differs between two runs of the same config.
    pub generated_at: String,
    pub seed: u64,
    pub settings: Effective,
    pub config: RawConfig,
    pub queries: Vec<QueryReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Effective {
    pub horizon: u64,
    pub tolerance: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_vectors: Option<Vec<LatticeVector>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryReport {
    pub id: String,
    pub kind: &'static str,
    pub query: String,
    pub horizon: u64,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Certificates accepted by the independent re-verifier.
    pub reverified: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Verdict {
        verdict: Verdict,
    },
    Decomposition {
        decomposition: Decomposition,
    },
    Witness {
        witness: Witness,
    },
    /// A construction whose precondition did not hold.
    Refused {
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        verdict: Option<Verdict>,
    },
    Theorem {
        theorem: TheoremSummary,
    },
}

/// Theorem report without wall-clock timing, so reports stay reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremSummary {
    pub theorem: TheoremId,
    pub statement: &'static str,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Outcome {
    pub fn status(&self) -> String {
        match self {
            Outcome::Verdict { verdict } => verdict.status.label().to_string(),
            Outcome::Decomposition { .. } | Outcome::Witness { .. } => "constructed".into(),
            Outcome::Refused { .. } => "refused".into(),
            Outcome::Theorem { theorem } => format!("{}/{} passed", theorem.passed, theorem.trials),
        }
    }
}

fn now_rfc3339() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    humantime::format_rfc3339_seconds(UNIX_EPOCH + std::time::Duration::from_secs(secs)).to_string()
}

/// Executes every query of the plan. Queries run concurrently; the report
/// lists them in config order.
pub fn run(plan: &Plan) -> CliResult<Report> {
    let queries = plan.queries.par_iter().map(execute).collect::<CliResult<Vec<_>>>()?;
    Ok(Report {
        tool: TOOL,
        version: VERSION,
        generated_at: now_rfc3339(),
        seed: plan.cfg.seed,
        settings: Effective {
            horizon: plan.cfg.horizon,
            tolerance: plan.cfg.tolerance.clone(),
            test_vectors: plan.cfg.test_vectors.clone(),
        },
        config: plan.raw.clone(),
        queries,
    })
}

fn claim<'a>(notion: Notion, r: &'a OrderBoundedOperator) -> Claim<'a> {
    match notion {
        Notion::O => Claim::Order(r),
        Notion::Doc => Claim::Doc(r),
        Notion::Dopc => Claim::Dopc(r),
        Notion::Soc => Claim::Soc(r),
        Notion::Socp => Claim::Socp(r),
    }
}

fn check(notion: Notion, seq: &OperatorSequence, r: &OrderBoundedOperator, cfg: &CheckConfig) -> latticestat::Result<Verdict> {
    match notion {
        Notion::O => check_o_convergence(seq, r, cfg),
        Notion::Doc => check_doc(seq, r, cfg),
        Notion::Dopc => check_dopc(seq, r, cfg),
        Notion::Soc => check_soc(seq, r, cfg),
        Notion::Socp => check_socp(seq, r, cfg),
    }
}

/// Runs the re-verifier; a rejected certificate is a bug, not a verdict.
fn replay(q: &Query, what: &str, r: Result<(), String>) -> CliResult<u64> {
    r.map(|()| 1)
        .map_err(|e| CliError::Internal(format!("query {}: {what} certificate rejected by the re-verifier: {e}", q.id)))
}

fn refused(q: &Query, e: CoreError, seq: &OperatorSequence, claim: Claim) -> CliResult<(Outcome, u64)> {
    match e {
        CoreError::Precondition { reason, verdict } => {
            let n = replay(q, "precondition", reverify(seq, claim, &verdict, q.cfg.horizon))?;
            Ok((
                Outcome::Refused {
                    reason,
                    verdict: Some(*verdict),
                },
                n,
            ))
        }
        CoreError::Refused(reason) => Ok((Outcome::Refused { reason, verdict: None }, 0)),
        e => Err(CliError::core(format!("query {}", q.id), e)),
    }
}

fn execute(q: &Query) -> CliResult<QueryReport> {
    let cfg = &q.cfg;
    let h = cfg.horizon;
    let ctx = || format!("query {}", q.id);
    let (outcome, reverified) = match &q.kind {
        QueryKind::Check { notion, seq, target } => {
            let v = check(*notion, seq, target, cfg).map_err(|e| CliError::core(ctx(), e))?;
            let n = replay(q, notion.to_string().as_str(), reverify(seq, claim(*notion, target), &v, h))?;
            (Outcome::Verdict { verdict: v }, n)
        }
        QueryKind::StatBound { seq } => {
            let v = check_stat_order_bounded(seq, cfg).map_err(|e| CliError::core(ctx(), e))?;
            let n = replay(q, "statbound", reverify(seq, Claim::StatBounded, &v, h))?;
            (Outcome::Verdict { verdict: v }, n)
        }
        QueryKind::Decompose { seq } => match decompose_stat_bounded(seq, cfg) {
            Ok(d) => {
                let n = replay(q, "decomposition", reverify_decomposition(seq, &d, h))?;
                (Outcome::Decomposition { decomposition: d }, n)
            }
            Err(e) => refused(q, e, seq, Claim::StatBounded)?,
        },
        QueryKind::Witness { seq, target, mode } => {
            let source_claim = match mode {
                WitnessMode::Soc => Claim::Soc(target),
                WitnessMode::Doc => Claim::Doc(target),
            };
            match construct_witness(seq, target, *mode, cfg) {
                Ok(w) => {
                    let a = replay(q, "source", reverify(seq, source_claim, &w.source, h))?;
                    let b = replay(q, "witness", reverify_witness(seq, target, *mode, &w, h))?;
                    (Outcome::Witness { witness: w }, a + b)
                }
                Err(e) => refused(q, e, seq, source_claim)?,
            }
        }
        QueryKind::Theorem { id, trials } => {
            let r = verify_theorem(*id, *trials, cfg).map_err(|e| CliError::core(ctx(), e))?;
            let summary = TheoremSummary {
                theorem: r.theorem,
                statement: r.statement,
                trials: r.trials,
                passed: r.passed,
                failed: r.failed,
                seed: r.seed,
                counterexample: r.counterexample,
            };
            (Outcome::Theorem { theorem: summary }, r.reverified)
        }
    };
    Ok(QueryReport {
        id: q.id.clone(),
        kind: q.kind.name(),
        query: q.text.clone(),
        horizon: h,
        outcome,
        reverified,
    })
}

/// One line per query for terminal output.
pub fn summary(report: &Report) -> String {
    let width = report.queries.iter().map(|q| q.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for q in &report.queries {
        let detail = match &q.outcome {
            Outcome::Verdict { verdict } => verdict.certificate.variant().to_string(),
            Outcome::Decomposition { decomposition } => format!("J = {}", decomposition.j),
            Outcome::Witness { witness } => format!("agreement {}", witness.agreement),
            Outcome::Refused { reason, .. } => reason.clone(),
            Outcome::Theorem { theorem } => theorem.theorem.to_string(),
        };
        out.push_str(&format!("{:width$}  {:9}  {:14}  {}\n", q.id, q.kind, q.outcome.status(), detail));
    }
    out
}
