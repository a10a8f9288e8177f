use serde::Serialize;

use crate::density::IndexSet;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, SpaceDescriptor};
use crate::opseq::OperatorSequence;
use crate::operator::OrderBoundedOperator;
use crate::ratfn::RationalFunction;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Proven,
    Refuted,
    Undetermined { horizon: u64 },
}

impl Status {
    pub fn is_proven(&self) -> bool {
        matches!(self, Status::Proven)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Status::Refuted)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Proven => "proven",
            Status::Refuted => "refuted",
            Status::Undetermined { .. } => "undetermined",
        }
    }
}

/// Evidence for one positive test vector in a pointwise check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointwiseEntry {
    pub u: LatticeVector,
    pub status: Status,
    /// Density-one index set for this vector.
    pub j: IndexSet,
    /// Pointwise limit (or infimum) the values are compared against.
    pub target: LatticeVector,
    /// Dominator before `from` as a non-increasing step function: `(last, s)`
    /// means `s_n = s` up to and including `n = last`. Empty for monotone
    /// checks.
    pub steps: Vec<(u64, LatticeVector)>,
    /// For `n >= from` the dominator is `tail / n` coordinatewise.
    pub tail: Vec<Scalar>,
    pub from: u64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "variant")]
pub enum Certificate {
    /// `|R_j − R| ≤ dominator_j` for every `j ∈ J`, with the dominator
    /// decreasing to θ. `J = ℕ` is ordinary order convergence.
    DominatedOnDensityOne {
        j: IndexSet,
        dominator: OperatorSequence,
        limit: OrderBoundedOperator,
    },
    /// Tail suprema of a dominator restricted to an agreement set.
    TailSupWitness {
        agreement: IndexSet,
        /// The soc dominator `Q_n` on the agreement set.
        source: OperatorSequence,
        /// `Y_n = sup_{k ≥ n, k ∈ D} Q_k`, which equals `Q_{d_n}` for the
        /// least `d_n ∈ D` with `d_n ≥ n` since `Q` is decreasing.
        y: String,
        /// Dominator proving order convergence of the modified sequence.
        o_dominator: OperatorSequence,
        limit: OrderBoundedOperator,
    },
    /// Decreasing along `J` from its first element, with infimum `infimum`.
    /// Decrease beyond `tail_from` is symbolic.
    DecreasingWitness {
        j: IndexSet,
        infimum: OrderBoundedOperator,
        tail_from: u64,
    },
    /// On `region`, for `n >= from`, entry `entry` of `R_n − R` equals
    /// `growth(n)`, which tends to ±∞.
    UnboundedAlong {
        region: IndexSet,
        growth: RationalFunction,
        entry: (usize, usize),
        from: u64,
        /// When set, `entry.0` indexes `R_n(u) − R(u)` for this vector.
        #[serde(skip_serializing_if = "Option::is_none")]
        along: Option<LatticeVector>,
    },
    /// On `region`, for `n >= from`, entry `entry` of `R_n − R` stays at
    /// least `gap` away from zero.
    LimitMismatch {
        region: IndexSet,
        entry: (usize, usize),
        gap: Scalar,
        from: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        along: Option<LatticeVector>,
    },
    /// Any operator dominating the sequence on `m` dominates the coordinate
    /// functionals `e_j`, `j ∈ m ∩ [1..truncation]`, each of mass
    /// `per_index_mass`.
    MassLowerBound {
        m: IndexSet,
        per_index_mass: Scalar,
        truncation: usize,
        lower_bound: u64,
    },
    /// `T_n = R_n` for all `n ∈ agreement`.
    AgreementWitness {
        t_seq: OperatorSequence,
        agreement: IndexSet,
    },
    /// `|R_j| ≤ bound` for every `j ∈ J`.
    BoundedOnDensityOne {
        j: IndexSet,
        bound: OrderBoundedOperator,
    },
    /// Per-vector evidence for pointwise notions.
    Pointwise { entries: Vec<PointwiseEntry> },
    /// Finite-horizon evidence only.
    HorizonEvidence {
        horizon: u64,
        /// `max_{N/2 ≤ k ≤ N} max_ij |R_k − R|_ij`.
        tail_sup: Scalar,
        /// Indices `n ≤ N` with some entry of `|R_n − R|` at least ε.
        exceptional: u64,
        note: String,
    },
}

impl Certificate {
    pub fn variant(&self) -> &'static str {
        match self {
            Certificate::DominatedOnDensityOne { .. } => "DominatedOnDensityOne",
            Certificate::TailSupWitness { .. } => "TailSupWitness",
            Certificate::DecreasingWitness { .. } => "DecreasingWitness",
            Certificate::UnboundedAlong { .. } => "UnboundedAlong",
            Certificate::LimitMismatch { .. } => "LimitMismatch",
            Certificate::MassLowerBound { .. } => "MassLowerBound",
            Certificate::AgreementWitness { .. } => "AgreementWitness",
            Certificate::BoundedOnDensityOne { .. } => "BoundedOnDensityOne",
            Certificate::Pointwise { .. } => "Pointwise",
            Certificate::HorizonEvidence { .. } => "HorizonEvidence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Certificate,
    pub narrative: String,
    pub horizon: u64,
    pub tolerance: Scalar,
    pub seed: u64,
    /// Truncation dimension of any coordinate-functional node involved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Pointwise checks only sample the positive cone.
    pub cone_sampled: bool,
}

impl Verdict {
    pub fn new(status: Status, certificate: Certificate, narrative: impl Into<String>, cfg: &CheckConfig) -> Self {
        Verdict {
            status,
            certificate,
            narrative: narrative.into(),
            horizon: cfg.horizon,
            tolerance: cfg.tolerance.clone(),
            seed: cfg.seed,
            truncation: None,
            cone_sampled: false,
        }
    }

    pub fn with_truncation(mut self, d: Option<usize>) -> Self {
        self.truncation = d;
        self
    }

    pub fn is_proven(&self) -> bool {
        self.status.is_proven()
    }

    pub fn is_refuted(&self) -> bool {
        self.status.is_refuted()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckConfig {
    pub horizon: u64,
    pub tolerance: Scalar,
    /// `None` selects the standard basis plus the all-ones vector.
    pub test_vectors: Option<Vec<LatticeVector>>,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            horizon: 10_000,
            tolerance: Scalar::ratio(1, 1_000_000_000),
            test_vectors: None,
            seed: 0,
        }
    }
}

impl CheckConfig {
    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 10 {
            return Err(Error::Usage("horizon must be at least 10".into()));
        }
        if !self.tolerance.is_positive() {
            return Err(Error::Usage("tolerance must be positive".into()));
        }
        if let Some(vs) = &self.test_vectors {
            if vs.is_empty() {
                return Err(Error::Usage("no positive test vectors".into()));
            }
            if let Some(v) = vs.iter().find(|v| !v.is_positive()) {
                return Err(Error::Usage(format!("test vector {v} is not positive")));
            }
        }
        Ok(())
    }

    /// Test vectors for the given domain.
    pub fn vectors_for(&self, domain: SpaceDescriptor) -> Result<Vec<LatticeVector>> {
        match &self.test_vectors {
            Some(vs) => {
                if let Some(v) = vs.iter().find(|v| v.space() != domain) {
                    return Err(Error::SpaceMismatch {
                        left: v.space(),
                        right: domain,
                    });
                }
                Ok(vs.clone())
            }
            None => {
                let mut vs = (0..domain.dim())
                    .map(|i| LatticeVector::basis(domain, i))
                    .collect::<Result<Vec<_>>>()?;
                if domain.dim() > 1 {
                    vs.push(LatticeVector::ones(domain));
                }
                Ok(vs)
            }
        }
    }
}
