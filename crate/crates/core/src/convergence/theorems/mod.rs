//! Randomized verification of the structural results.
//!
//! Trials are independent, seeded per trial from the configured seed, and
//! run in parallel. A failing trial is rerun at smaller generator sizes with
//! the same seed and the smallest failing instance is reported.

mod gen;
mod trials;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::verdict::CheckConfig;

pub use gen::Size;
use gen::Gen;
use trials::{Outcome, Trial};

macro_rules! theorems {
    ($($variant:ident => $name:literal, $trial:path, $statement:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum TheoremId {
            $($variant,)*
        }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(TheoremId::$variant => $name,)*
                }
            }

            /// The conclusion as the harness checks it.
            pub fn statement(self) -> &'static str {
                match self {
                    $(TheoremId::$variant => $statement,)*
                }
            }

            fn trial(self) -> fn(&mut Trial) -> Outcome {
                match self {
                    $(TheoremId::$variant => $trial,)*
                }
            }
        }
    };
}

theorems! {
    Implication => "implication", trials::implication,
        "S_n doc S implies S_n dopc S";
    OperatorUniqueness => "operator-uniqueness", trials::operator_uniqueness,
        "doc and dopc limits are unique";
    DecompositionMonotone => "decomposition-monotone", trials::decomposition_monotone,
        "S_n doc S iff S_n agrees on a density-one set with some P_n decreasing to S";
    Additivity => "additivity", trials::additivity,
        "doc limits add, and scale by nonnegative factors";
    LatticeOperations => "lattice-operations", trials::lattice_operations,
        "S_n ∨ P_n, S_n ∧ P_n and S_n⁺ are doc to S ∨ P, S ∧ P and S⁺";
    Squeeze => "squeeze", trials::squeeze,
        "a decreasing P_n between two dopc-T sequences is dopc T";
    Composition => "composition", trials::composition,
        "T ∘ S_n doc (dopc) T ∘ S for positive T";
    RightComposition => "right-composition", trials::right_composition,
        "S_n ∘ P doc S ∘ P for positive P";
    WedgeZero => "wedge-zero", trials::wedge_zero,
        "S_n doc θ implies S_n ∧ T doc θ for positive T";
    ImplicationSoc => "implication-soc", trials::implication_soc,
        "R_n soc R implies R_n socp R";
    LinearitySoc => "linearity-soc", trials::linearity_soc,
        "αR_n + βT_n soc αR + βT";
    LatticeSoc => "lattice-soc", trials::lattice_soc,
        "|R_n|, R_n ∨ T_n and R_n ∧ T_n are soc to |R|, R ∨ T and R ∧ T";
    PositiveNegativeParts => "positive-negative-parts", trials::positive_negative_parts,
        "R_n⁺ soc R⁺ and R_n⁻ soc R⁻";
    MonotonicitySoc => "monotonicity-soc", trials::monotonicity_soc,
        "an increasing soc sequence order converges to the same limit";
    SocUniqueness => "soc-uniqueness", trials::soc_uniqueness,
        "soc limits are unique";
    Characterization => "characterization", trials::characterization,
        "R_n soc R iff R_n agrees on a density-one set with some T_n →ᵒ R";
    SocSqueeze => "soc-squeeze", trials::soc_squeeze,
        "R_n ≤ U_n ≤ T_n with R_n, T_n soc R implies U_n soc R";
    Disjointness => "disjointness", trials::disjointness,
        "R_n ⊥ U for all n and R_n soc R imply |R| ∧ |U| = θ";
    BandClosed => "band-closed", trials::band_closed,
        "soc limits of sequences in a band stay in the band";
    OrderContinuous => "order-continuous", trials::order_continuous,
        "soc limits of order continuous operators are order continuous";
    CompositionSoc => "composition-soc", trials::composition_soc,
        "T ∘ R_n soc T ∘ R for positive T";
    BandProjection => "band-projection", trials::band_projection_soc,
        "P ∘ R_n soc P ∘ R for a band projection P";
    StConvImpliesStOb => "st-conv-implies-st-ob", trials::st_conv_implies_st_ob,
        "statistically order convergent sequences are statistically order bounded";
    DecompositionBounded => "decomposition-bounded", trials::decomposition_bounded,
        "a statistically order bounded sequence is an order bounded one plus one vanishing off a density-zero set";
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub trial: u64,
    pub seed: u64,
    pub size: Size,
    pub instance: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub statement: &'static str,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    /// Certificates replayed by the re-verifier across all trials.
    pub reverified: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn trial_seed(base: u64, id: TheoremId, k: u64) -> u64 {
    let tag = TheoremId::ALL.iter().position(|t| *t == id).unwrap_or(0) as u64 + 1;
    base ^ (tag << 48) ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct TrialResult {
    reverified: u64,
    failure: Option<(String, Vec<String>)>,
}

fn run_trial(id: TheoremId, cfg: &CheckConfig, seed: u64, size: Size) -> TrialResult {
    let mut trial = Trial {
        g: Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            size,
            mask: None,
        },
        cfg,
        log: Vec::new(),
        reverified: 0,
    };
    let outcome = (id.trial())(&mut trial);
    TrialResult {
        reverified: trial.reverified,
        failure: outcome.err().map(|reason| (reason, trial.log)),
    }
}

/// Runs `trials` independent randomized trials of `id`.
pub fn verify_theorem(id: TheoremId, trials: u64, cfg: &CheckConfig) -> Result<TheoremReport> {
    if trials == 0 {
        return Err(Error::Usage("at least one trial is needed".into()));
    }
    cfg.validate()?;
    let start = Instant::now();
    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|k| run_trial(id, cfg, trial_seed(cfg.seed, id, k), Size::FULL))
        .collect();
    let failed = results.iter().filter(|r| r.failure.is_some()).count() as u64;
    let reverified = results.iter().map(|r| r.reverified).sum();
    let counterexample = results.iter().position(|r| r.failure.is_some()).map(|k| {
        let seed = trial_seed(cfg.seed, id, k as u64);
        let (size, (reason, instance)) = Size::FULL
            .shrinks()
            .into_iter()
            .find_map(|size| run_trial(id, cfg, seed, size).failure.map(|f| (size, f)))
            .unwrap_or_else(|| (Size::FULL, results[k].failure.clone().expect("failed trial")));
        Counterexample {
            trial: k as u64,
            seed,
            size,
            instance,
            reason,
        }
    });
    Ok(TheoremReport {
        theorem: id,
        statement: id.statement(),
        trials,
        passed: trials - failed,
        failed,
        reverified,
        seed: cfg.seed,
        counterexample,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        assert_eq!(TheoremId::ALL.len(), 24);
        for id in TheoremId::ALL {
            assert_eq!(id.name().parse::<TheoremId>().unwrap(), *id);
        }
        assert!(matches!("no-such".parse::<TheoremId>(), Err(Error::UnknownTheorem(_))));
        assert!(verify_theorem(TheoremId::Implication, 0, &CheckConfig::default()).is_err());
    }

    #[test]
    fn reproducible() {
        let cfg = CheckConfig::default().with_horizon(100);
        let a = verify_theorem(TheoremId::SocUniqueness, 8, &cfg).unwrap();
        let b = verify_theorem(TheoremId::SocUniqueness, 8, &cfg).unwrap();
        assert_eq!((a.passed, a.reverified), (b.passed, b.reverified));
    }
}
