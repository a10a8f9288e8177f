//! Run configuration: a TOML file with named definitions and queries.
//!
//! ```toml
//! [settings]
//! horizon = 10000
//! tolerance = "1/1000000000"
//! seed = 7
//!
//! [operators]
//! I = "id(2)"
//! theta = "zero(2, 2)"
//!
//! [sequences]
//! R = "piecewise(squares, scaled(n, I), scaled(1/(n + 1), I))"
//!
//! [queries]
//! o_theta = "o(R, theta)"
//! soc_theta = { query = "soc(R, theta)", horizon = 2000 }
//! ```
//!
//! Definitions are resolved section by section in the order spaces,
//! operators, indexsets, vectors, sequences; inside a section an entry may
//! refer to any entry above it.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use latticestat::convergence::{TheoremId, WitnessMode};
use latticestat::syntax::{
    parse_index_set_in, parse_operator, parse_scalar, parse_sequence, parse_space, parse_vector, split_call, Env,
};
use latticestat::{CheckConfig, OperatorSequence, OrderBoundedOperator, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_TRIALS: u64 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub settings: Settings,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub spaces: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub operators: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub indexsets: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub vectors: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub sequences: IndexMap<String, String>,
    #[serde(default)]
    pub queries: IndexMap<String, QuerySpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Positive test vectors for the pointwise notions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_vectors: Option<Vec<String>>,
    /// Default trial count for theorem queries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuerySpec {
    Call(String),
    Detailed(DetailedQuery),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetailedQuery {
    pub query: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

impl QuerySpec {
    pub fn text(&self) -> &str {
        match self {
            QuerySpec::Call(s) => s,
            QuerySpec::Detailed(d) => &d.query,
        }
    }
}

impl RawConfig {
    pub fn parse(src: &str) -> CliResult<Self> {
        toml::from_str(src).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Internal(e.to_string()))
    }
}

/// Command-line overrides of the `[settings]` section.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub horizon: Option<u64>,
    pub tolerance: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Notion {
    O,
    Doc,
    Dopc,
    Soc,
    Socp,
}

#[derive(Debug, Clone)]
pub enum QueryKind {
    Check {
        notion: Notion,
        seq: OperatorSequence,
        target: OrderBoundedOperator,
    },
    StatBound {
        seq: OperatorSequence,
    },
    Decompose {
        seq: OperatorSequence,
    },
    Witness {
        seq: OperatorSequence,
        target: OrderBoundedOperator,
        mode: WitnessMode,
    },
    Theorem {
        id: TheoremId,
        trials: u64,
    },
}

impl QueryKind {
    pub fn name(&self) -> &'static str {
        match self {
            QueryKind::Check { notion, .. } => match notion {
                Notion::O => "o",
                Notion::Doc => "doc",
                Notion::Dopc => "dopc",
                Notion::Soc => "soc",
                Notion::Socp => "socp",
            },
            QueryKind::StatBound { .. } => "statbound",
            QueryKind::Decompose { .. } => "decompose",
            QueryKind::Witness { .. } => "witness",
            QueryKind::Theorem { .. } => "theorem",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Query {
    pub id: String,
    pub text: String,
    pub kind: QueryKind,
    pub cfg: CheckConfig,
}

/// A fully resolved configuration.
#[derive(Debug, Clone)]
pub struct Plan {
    pub raw: RawConfig,
    pub env: Env,
    pub cfg: CheckConfig,
    pub queries: Vec<Query>,
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Notion::O => "o",
            Notion::Doc => "doc",
            Notion::Dopc => "dopc",
            Notion::Soc => "soc",
            Notion::Socp => "socp",
        })
    }
}

fn scalar(src: &str, what: &str) -> CliResult<Scalar> {
    parse_scalar(src).map_err(|e| CliError::core(what.to_string(), e))
}

fn define<T>(
    section: &str,
    entries: &IndexMap<String, String>,
    env: &mut Env,
    parse: impl Fn(&str, &Env) -> latticestat::Result<T>,
    store: impl Fn(&mut Env) -> &mut std::collections::BTreeMap<String, T>,
) -> CliResult<()> {
    for (name, src) in entries {
        if !is_name(name) {
            return Err(CliError::Config(format!("[{section}] `{name}` is not a valid name")));
        }
        let v = parse(src, env).map_err(|e| CliError::core(format!("[{section}] {name}"), e))?;
        store(env).insert(name.clone(), v);
    }
    Ok(())
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

impl Plan {
    pub fn resolve(raw: RawConfig, over: &Overrides) -> CliResult<Plan> {
        let mut env = Env::default();
        define("spaces", &raw.spaces, &mut env, parse_space, |e| &mut e.spaces)?;
        define("operators", &raw.operators, &mut env, parse_operator, |e| &mut e.operators)?;
        define("indexsets", &raw.indexsets, &mut env, parse_index_set_in, |e| &mut e.index_sets)?;
        define("vectors", &raw.vectors, &mut env, parse_vector, |e| &mut e.vectors)?;
        define("sequences", &raw.sequences, &mut env, parse_sequence, |e| &mut e.sequences)?;

        let s = &raw.settings;
        let mut cfg = CheckConfig::default();
        if let Some(h) = over.horizon.or(s.horizon) {
            cfg.horizon = h;
        }
        if let Some(t) = over.tolerance.as_ref().or(s.tolerance.as_ref()) {
            cfg.tolerance = scalar(t, "tolerance")?;
        }
        cfg.seed = over.seed.or(s.seed).unwrap_or(0);
        if let Some(vs) = &s.test_vectors {
            let vs = vs
                .iter()
                .map(|v| parse_vector(v, &env).map_err(|e| CliError::core(format!("test vector `{v}`"), e)))
                .collect::<CliResult<Vec<_>>>()?;
            cfg.test_vectors = Some(vs);
        }
        cfg.validate().map_err(|e| CliError::core("settings", e))?;

        if raw.queries.is_empty() {
            return Err(CliError::Config("no queries".into()));
        }
        let trials = s.trials.unwrap_or(DEFAULT_TRIALS);
        let queries = raw
            .queries
            .iter()
            .map(|(id, spec)| resolve_query(id, spec, &env, &cfg, trials))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Plan { raw, env, cfg, queries })
    }
}

fn resolve_query(id: &str, spec: &QuerySpec, env: &Env, base: &CheckConfig, trials: u64) -> CliResult<Query> {
    let text = spec.text();
    let ctx = || format!("query {id}");
    let (head, args) =
        split_call(text).ok_or_else(|| CliError::Config(format!("query {id}: `{text}` is not of the form kind(args)")))?;
    let arity = |n: usize| -> CliResult<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(CliError::Config(format!("query {id}: `{head}` takes {n} arguments, got {}", args.len())))
        }
    };
    let seq = |k: usize| parse_sequence(&args[k], env).map_err(|e| CliError::core(ctx(), e));
    let op = |k: usize| parse_operator(&args[k], env).map_err(|e| CliError::core(ctx(), e));

    let mut cfg = base.clone();
    let mut trials = trials;
    if let QuerySpec::Detailed(d) = spec {
        if let Some(h) = d.horizon {
            cfg.horizon = h;
        }
        if let Some(t) = &d.tolerance {
            cfg.tolerance = scalar(t, &ctx())?;
        }
        if let Some(t) = d.trials {
            trials = t;
        }
        cfg.validate().map_err(|e| CliError::core(ctx(), e))?;
    }

    let check = |notion: Notion| -> CliResult<QueryKind> {
        arity(2)?;
        Ok(QueryKind::Check {
            notion,
            seq: seq(0)?,
            target: op(1)?,
        })
    };
    let kind = match head.as_str() {
        "o" => check(Notion::O)?,
        "doc" => check(Notion::Doc)?,
        "dopc" => check(Notion::Dopc)?,
        "soc" => check(Notion::Soc)?,
        "socp" => check(Notion::Socp)?,
        "statbound" => {
            arity(1)?;
            QueryKind::StatBound { seq: seq(0)? }
        }
        "decompose" => {
            arity(1)?;
            QueryKind::Decompose { seq: seq(0)? }
        }
        "witness" => {
            arity(3)?;
            let mode = match args[2].trim() {
                "soc" => WitnessMode::Soc,
                "doc" => WitnessMode::Doc,
                m => return Err(CliError::Config(format!("query {id}: witness mode `{m}` is not soc or doc"))),
            };
            QueryKind::Witness {
                seq: seq(0)?,
                target: op(1)?,
                mode,
            }
        }
        "theorem" => {
            if args.len() == 2 {
                trials = args[1]
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("query {id}: `{}` is not a trial count", args[1])))?;
            } else {
                arity(1)?;
            }
            if trials == 0 {
                return Err(CliError::Config(format!("query {id}: at least one trial is needed")));
            }
            let id = TheoremId::from_str(&args[0]).map_err(|e| CliError::core(ctx(), e))?;
            QueryKind::Theorem { id, trials }
        }
        other => return Err(CliError::Config(format!("query {id}: unknown query kind `{other}`"))),
    };
    // shape agreement between sequence and target is part of resolution
    if let QueryKind::Check { seq, target, .. } | QueryKind::Witness { seq, target, .. } = &kind {
        let shape = seq.shape().map_err(|e| CliError::core(ctx(), e))?;
        if shape.domain != target.domain() || shape.codomain != target.codomain() {
            return Err(CliError::core(
                ctx(),
                latticestat::Error::Shape(format!(
                    "sequence maps {} to {} but the target maps {} to {}",
                    shape.domain,
                    shape.codomain,
                    target.domain(),
                    target.codomain()
                )),
            ));
        }
    }
    Ok(Query {
        id: id.to_string(),
        text: text.to_string(),
        kind,
        cfg,
    })
}
