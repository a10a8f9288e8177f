use std::path::{Path, PathBuf};
use std::process::Command;

use latticestat_cli::config::{Plan, RawConfig};
use latticestat_cli::{exit, explain, run, to_json, CliError, Overrides};
use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latticestat"))
}

fn plan(src: &str) -> Result<Plan, CliError> {
    Plan::resolve(RawConfig::parse(src)?, &Overrides::default())
}

fn small(queries: &str) -> String {
    format!(
        "[settings]\nhorizon = 300\n\n[operators]\nI = \"id(2)\"\ntheta = \"zero(2, 2)\"\n\n\
         [sequences]\nR = \"piecewise(squares, scaled(n, I), scaled(1/(n + 1), I))\"\n\n[queries]\n{queries}"
    )
}

fn report_json(src: &str) -> Value {
    let report = run(&plan(src).unwrap()).unwrap();
    serde_json::from_str(&to_json(&report).unwrap()).unwrap()
}

#[test]
fn config_round_trips_through_toml() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let raw = RawConfig::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = RawConfig::parse(&raw.to_toml().unwrap()).unwrap();
        assert_eq!(again, raw, "{}", path.display());
        let (a, b) = (Plan::resolve(raw, &Overrides::default()).unwrap(), Plan::resolve(again, &Overrides::default()).unwrap());
        let texts = |p: &Plan| p.queries.iter().map(|q| format!("{}:{:?}", q.id, q.kind)).collect::<Vec<_>>();
        assert_eq!(texts(&a), texts(&b));
    }
}

#[test]
fn detailed_queries_override_settings() {
    let p = plan(&small("a = \"soc(R, theta)\"\nb = { query = \"soc(R, theta)\", horizon = 50 }\n")).unwrap();
    assert_eq!(p.queries[0].cfg.horizon, 300);
    assert_eq!(p.queries[1].cfg.horizon, 50);
    let p = Plan::resolve(
        RawConfig::parse(&small("a = \"o(R, theta)\"\n")).unwrap(),
        &Overrides {
            horizon: Some(40),
            seed: Some(3),
            tolerance: Some("1/100".into()),
        },
    )
    .unwrap();
    assert_eq!((p.cfg.horizon, p.cfg.seed), (40, 3));
    let p = Plan::resolve(
        RawConfig::parse(&small("a = \"o(R, theta)\"\nb = { query = \"o(R, theta)\", horizon = 50 }\n")).unwrap(),
        &Overrides {
            horizon: Some(40),
            ..Overrides::default()
        },
    )
    .unwrap();
    assert_eq!((p.queries[0].cfg.horizon, p.queries[1].cfg.horizon), (40, 50));
}

#[test]
fn error_classes_map_to_exit_codes() {
    let code = |src: &str| plan(src).err().map(|e| e.exit_code());
    assert_eq!(code(&small("")), Some(exit::PARSE));
    assert_eq!(code("[queries\n"), Some(exit::PARSE));
    assert_eq!(code(&small("a = \"soc(R, theta\"\n")), Some(exit::PARSE));
    assert_eq!(code(&small("a = \"soc(R, )\"\n")), Some(exit::PARSE));
    assert_eq!(code(&small("a = \"frobnicate(R)\"\n")), Some(exit::PARSE));
    assert_eq!(code(&small("a = \"soc(Q, theta)\"\n")), Some(exit::RESOLUTION));
    assert_eq!(code(&small("a = \"theorem(no-such)\"\n")), Some(exit::RESOLUTION));
    assert_eq!(code(&small("a = \"soc(R, zero(3, 3))\"\n")), Some(exit::SHAPE));
    assert_eq!(code(&small("a = \"soc(sum(R, const(id(3))), theta)\"\n")), Some(exit::SHAPE));
    assert!(code(&small("a = \"soc(R, theta)\"\n")).is_none());
}

#[test]
fn parse_errors_carry_positions() {
    let err = plan(&small("a = \"soc(scaled(1/(n + ), I), theta)\"\n")).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("query a") && msg.contains("parse error at 1:"), "{msg}");
}

#[test]
fn spiky_report_and_explanations() {
    let report = report_json(&small(
        "o_theta = \"o(R, theta)\"\nsoc_theta = \"soc(R, theta)\"\nplain = \"o(scaled(1/n, I), theta)\"\n\
         decompose = \"decompose(R)\"\nnot_bounded = \"decompose(scaled(n, I))\"\n",
    ));
    let qs = report["queries"].as_array().unwrap();
    let ids: Vec<&str> = qs.iter().map(|q| q["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["o_theta", "soc_theta", "plain", "decompose", "not_bounded"]);
    assert_eq!(qs[0]["verdict"]["status"]["kind"], "refuted");
    assert_eq!(qs[1]["verdict"]["status"]["kind"], "proven");
    assert_eq!(qs[4]["outcome"], "refused");
    for q in &qs[..4] {
        assert!(q["reverified"].as_u64().unwrap() >= 1, "{}", q["id"]);
    }

    let soc = explain(&report, "soc_theta").unwrap();
    assert!(soc.contains("complement(squares)") && soc.contains("scaled(1/n, [[1, 0], [0, 1]])"), "{soc}");
    let plain = explain(&report, "plain").unwrap();
    assert!(plain.contains("Classical order convergence"), "{plain}");
    let refused = explain(&report, "not_bounded").unwrap();
    assert!(refused.contains("refused"), "{refused}");
    assert!(matches!(explain(&report, "missing"), Err(CliError::UnknownQuery(_))));
}

#[test]
fn mass_bound_explanation_names_the_divergence() {
    let src = "[spaces]\nX = \"seq(16, c0)\"\n[operators]\ntheta = \"zero(finite(1), X)\"\n\
               [queries]\nsoc = \"soc(coordfun(16), theta)\"\n";
    let report = report_json(src);
    let text = explain(&report, "soc").unwrap();
    assert!(text.contains("⌈16/2⌉ = 8") && text.contains("diverge"), "{text}");
}

#[test]
fn theorem_queries_report_counts() {
    let report = report_json(&small("t = \"theorem(soc-uniqueness, 4)\"\n"));
    let t = &report["queries"][0]["theorem"];
    assert_eq!(t["trials"], 4);
    assert_eq!(t["passed"], 4);
    assert!(t.get("elapsed_ms").is_none());
}

#[test]
fn binary_run_explain_and_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let status = bin()
        .args(["run", "--quiet", "--horizon", "500", "-o"])
        .arg(&out)
        .arg(configs().join("spiky_squares.toml"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(exit::OK));
    let text = bin().arg("explain").arg(&out).arg("o_theta").output().unwrap();
    assert!(String::from_utf8_lossy(&text.stdout).contains("unbounded"));
    let missing = bin().arg("explain").arg(&out).arg("zzz").output().unwrap();
    assert_eq!(missing.status.code(), Some(exit::RESOLUTION));

    let list = bin().args(["theorems", "--list"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&list.stdout).lines().count(), 24);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[queries]\n").unwrap();
    assert_eq!(bin().arg("run").arg(&bad).output().unwrap().status.code(), Some(exit::PARSE));
    let absent = dir.path().join("absent.toml");
    assert_eq!(bin().arg("run").arg(&absent).output().unwrap().status.code(), Some(exit::PARSE));
}
