use latticestat::convergence::{verify_theorem, TheoremId};
use latticestat::CheckConfig;

#[test]
fn every_theorem_passes_its_trials() {
    let cfg = CheckConfig::default().with_horizon(200);
    let mut failures = Vec::new();
    for id in TheoremId::ALL {
        let report = verify_theorem(*id, 50, &cfg).unwrap();
        println!(
            "{:<26} {}/{} passed, {} certificates replayed, {} ms",
            id.name(),
            report.passed,
            report.trials,
            report.reverified,
            report.elapsed_ms
        );
        if let Some(c) = &report.counterexample {
            println!("  counterexample (trial {}, seed {}, {:?}): {}", c.trial, c.seed, c.size, c.reason);
            for line in &c.instance {
                println!("    {line}");
            }
            failures.push(id.name());
        }
    }
    assert!(failures.is_empty(), "failing theorems: {failures:?}");
}
