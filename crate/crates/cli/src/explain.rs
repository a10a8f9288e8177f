//! Prose rendering of one query of a saved JSON report.

use serde_json::Value;

use crate::error::{CliError, CliResult};

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.strip_suffix("/1").unwrap_or(x).to_string(),
        Value::Null => "?".into(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(s).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn field(v: &Value, k: &str) -> String {
    s(&v[k])
}

fn is_naturals(set: &str) -> bool {
    set == "naturals"
}

fn entry(v: &Value) -> String {
    match v.as_array() {
        Some(ij) if ij.len() == 2 => match (ij[0].as_u64(), ij[1].as_u64()) {
            (Some(i), Some(j)) => format!("({}, {})", i + 1, j + 1),
            _ => s(v),
        },
        _ => s(v),
    }
}

fn along(c: &Value) -> String {
    match &c["along"] {
        Value::Null => "R_n − R".into(),
        u => format!("(R_n − R)({})", s(u)),
    }
}

fn certificate(c: &Value) -> String {
    let variant = c["variant"].as_str().unwrap_or("");
    match variant {
        "DominatedOnDensityOne" => {
            let (j, dom, lim) = (field(c, "j"), field(c, "dominator"), field(c, "limit"));
            if is_naturals(&j) {
                format!(
                    "Classical order convergence to {lim}: |R_n − R| ≤ D_n for every n, where D_n = {dom} \
                     decreases to θ. The witness set is all of ℕ, so no index is discarded."
                )
            } else {
                format!(
                    "Statistical order convergence to {lim}. The witness set J = {j} has natural density \
                     exactly one. For every n in J, |R_n − R| ≤ D_n with D_n = {dom}, a dominator decreasing \
                     to θ. Indices outside J form a density-zero set and are left unconstrained."
                )
            }
        }
        "TailSupWitness" => format!(
            "Order convergence of the modified sequence to {}. The modified sequence agrees with the input \
             on D = {}, which has density one. Off D it takes the limit value. Its dominator is the tail \
             supremum of the statistical dominator Q_n = {} over D: {}. That supremum is {} and decreases to θ.",
            field(c, "limit"),
            field(c, "agreement"),
            field(c, "source"),
            field(c, "y"),
            field(c, "o_dominator"),
        ),
        "DecreasingWitness" => format!(
            "The terms decrease along J = {} with infimum {}. The decrease is checked exactly up to index {} \
             and follows symbolically beyond it.",
            field(c, "j"),
            field(c, "infimum"),
            field(c, "tail_from"),
        ),
        "UnboundedAlong" => format!(
            "For n ≥ {} in {}, entry {} of {} equals {}, which is unbounded. A dominator would have to bound \
             these values along a set that every candidate witness set meets infinitely often, so none exists.",
            field(c, "from"),
            field(c, "region"),
            entry(&c["entry"]),
            along(c),
            field(c, "growth"),
        ),
        "LimitMismatch" => format!(
            "For n ≥ {} in {}, entry {} of {} stays at least {} away from zero. That set is too large to \
             discard, so the proposed limit is wrong.",
            field(c, "from"),
            field(c, "region"),
            entry(&c["entry"]),
            along(c),
            field(c, "gap"),
        ),
        "MassLowerBound" => {
            let d = field(c, "truncation");
            format!(
                "Suppose W dominates |R_n − R| for every n in some density-one set M contained in {}. For each \
                 j in M ∩ [1..{d}] the term R_j is the coordinate functional e_j of mass {}, so W must carry that \
                 mass at coordinate j. Any density-one set meets at least half of [1..{d}], hence W has total \
                 mass at least ⌈{d}/2⌉ = {}. This bound grows without limit in the truncation. In the untruncated \
                 space the coordinate sum of W would diverge, so no dominator exists and the sequence is not \
                 statistically order convergent.",
                field(c, "m"),
                field(c, "per_index_mass"),
                field(c, "lower_bound"),
            )
        }
        "AgreementWitness" => format!(
            "T_n = {} agrees with R_n for every n in {}.",
            field(c, "t_seq"),
            field(c, "agreement"),
        ),
        "BoundedOnDensityOne" => {
            let j = field(c, "j");
            let bound = field(c, "bound");
            if is_naturals(&j) {
                format!("Order bounded: |R_n| ≤ {bound} for every n.")
            } else {
                format!(
                    "Statistically order bounded: |R_n| ≤ {bound} for every n in J = {j}, a set of density one."
                )
            }
        }
        "Pointwise" => {
            let mut out = String::from("Checked vector by vector on a finite set of positive test vectors:");
            for e in c["entries"].as_array().into_iter().flatten() {
                out.push_str(&format!(
                    "\n  u = {}: {} on J_u = {}, target {}",
                    field(e, "u"),
                    e["status"]["kind"].as_str().unwrap_or("?"),
                    field(e, "j"),
                    field(e, "target"),
                ));
                let note = field(e, "note");
                if !note.is_empty() && note != "?" {
                    out.push_str(&format!(" ({note})"));
                }
            }
            out
        }
        "HorizonEvidence" => format!(
            "No symbolic argument applies. Up to N = {} the largest deviation over the upper half of the range \
             is {}, and {} indices deviate by at least ε. {}",
            field(c, "horizon"),
            field(c, "tail_sup"),
            field(c, "exceptional"),
            field(c, "note"),
        ),
        other => format!("Certificate of kind `{other}`."),
    }
}

fn verdict(v: &Value) -> String {
    let status = v["status"]["kind"].as_str().unwrap_or("?");
    let mut out = format!(
        "Status: {status} (horizon {}, tolerance {}, seed {}).\n",
        field(v, "horizon"),
        field(v, "tolerance"),
        field(v, "seed"),
    );
    out.push_str(&certificate(&v["certificate"]));
    if let Some(n) = v["narrative"].as_str().filter(|n| !n.is_empty()) {
        out.push_str(&format!("\nChecker note: {n}"));
    }
    if v["cone_sampled"].as_bool() == Some(true) {
        out.push_str("\nThe positive cone was sampled, not exhausted.");
    }
    out
}

/// Renders query `id` of `report` as text.
pub fn explain(report: &Value, id: &str) -> CliResult<String> {
    let q = report["queries"]
        .as_array()
        .ok_or_else(|| CliError::Config("not a report: no queries array".into()))?
        .iter()
        .find(|q| q["id"].as_str() == Some(id))
        .ok_or_else(|| CliError::UnknownQuery(id.to_string()))?;
    let mut out = format!("{} = {}\n", id, field(q, "query"));
    match q["outcome"].as_str().unwrap_or("") {
        "verdict" => out.push_str(&verdict(&q["verdict"])),
        "decomposition" => {
            let d = &q["decomposition"];
            out.push_str(&format!(
                "R_n = T_n + U_n with T_n = {} and U_n = {}.\nT agrees with R on J = {} and is dominated there \
                 by {}. U vanishes on J, so its support lies in a density-zero set. Recombination and domination \
                 were rechecked exactly up to n = {}.\n",
                field(d, "t_seq"),
                field(d, "u_seq"),
                field(d, "j"),
                field(d, "bound"),
                field(d, "checked_upto"),
            ));
            out.push_str(&verdict(&d["verdict"]));
        }
        "witness" => {
            let w = &q["witness"];
            out.push_str(&format!(
                "T_n = {} agrees with the input on {}.\nConstruction started from:\n{}\nResult for T:\n{}",
                field(w, "t_seq"),
                field(w, "agreement"),
                verdict(&w["source"]),
                verdict(&w["verdict"]),
            ));
        }
        "refused" => {
            out.push_str(&format!("Construction refused: {}", field(q, "reason")));
            if !q["verdict"].is_null() {
                out.push_str(&format!("\nPrecondition verdict:\n{}", verdict(&q["verdict"])));
            }
        }
        "theorem" => {
            let t = &q["theorem"];
            out.push_str(&format!(
                "{}: {}\n{} of {} randomized trials passed (seed {}).",
                field(t, "theorem"),
                field(t, "statement"),
                field(t, "passed"),
                field(t, "trials"),
                field(t, "seed"),
            ));
            if !t["counterexample"].is_null() {
                let c = &t["counterexample"];
                out.push_str(&format!("\nFirst counterexample (trial {}): {}", field(c, "trial"), field(c, "reason")));
                for line in c["instance"].as_array().into_iter().flatten() {
                    out.push_str(&format!("\n  {}", s(line)));
                }
            }
        }
        other => out.push_str(&format!("Unrecognized outcome `{other}`.")),
    }
    if let Some(n) = q["reverified"].as_u64() {
        out.push_str(&format!("\n{n} certificate(s) accepted by the independent re-verifier."));
    }
    out.push('\n');
    Ok(out)
}
