//! Random instances for the theorem harness.
//!
//! Sequences are built from a convergent "good" branch of the form
//! `L + c(n)·A` with `c(n) = a/(n+b)`, optionally replaced by an arbitrary
//! "junk" branch on a density-zero set drawn from squares or a small finite
//! set.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::density::IndexSet;
use crate::lattice::{SequenceFlavor, SpaceDescriptor};
use crate::opseq::OperatorSequence;
use crate::operator::OrderBoundedOperator;
use crate::ratfn::RationalFunction;
use crate::scalar::Scalar;

/// Generator bounds; shrunk when minimizing a counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Size {
    pub dim: usize,
    pub mag: i64,
}

impl Size {
    pub const FULL: Size = Size { dim: 3, mag: 5 };

    /// Smaller sizes first, ending at `self`.
    pub fn shrinks(self) -> Vec<Size> {
        let mut out = Vec::new();
        for dim in 1..=self.dim {
            for mag in 1..=self.mag {
                out.push(Size { dim, mag });
            }
        }
        out
    }
}

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub size: Size,
    /// Row-major entry positions allowed to be nonzero; `None` allows all.
    pub mask: Option<Vec<bool>>,
}

impl Gen {
    pub fn dim(&mut self) -> usize {
        self.rng.random_range(1..=self.size.dim)
    }

    pub fn space(&mut self, dim: usize) -> SpaceDescriptor {
        if dim > 1 && self.rng.random_bool(0.2) {
            SpaceDescriptor::truncated(dim, SequenceFlavor::C0).expect("positive dimension")
        } else {
            SpaceDescriptor::finite(dim).expect("positive dimension")
        }
    }

    /// `p/q` with `q ∈ {1, 2, 3}` and `|p/q| ≤ mag`.
    pub fn scalar(&mut self) -> Scalar {
        let q = self.rng.random_range(1..=3i64);
        let p = self.rng.random_range(-self.size.mag * q..=self.size.mag * q);
        Scalar::ratio(p, q)
    }

    pub fn nonneg_scalar(&mut self) -> Scalar {
        self.scalar().abs()
    }

    fn fill(&mut self, dom: SpaceDescriptor, cod: SpaceDescriptor, f: impl Fn(&mut Self) -> Scalar) -> OrderBoundedOperator {
        let entries = (0..dom.dim() * cod.dim())
            .map(|k| {
                let x = f(self);
                match &self.mask {
                    Some(m) if !m[k] => Scalar::zero(),
                    _ => x,
                }
            })
            .collect();
        OrderBoundedOperator::from_flat(dom, cod, entries).expect("entry count matches")
    }

    pub fn op(&mut self, dom: SpaceDescriptor, cod: SpaceDescriptor) -> OrderBoundedOperator {
        self.fill(dom, cod, Self::scalar)
    }

    pub fn pos_op(&mut self, dom: SpaceDescriptor, cod: SpaceDescriptor) -> OrderBoundedOperator {
        self.fill(dom, cod, Self::nonneg_scalar)
    }

    /// `a/(n+b)` with `1 ≤ a ≤ mag`, `0 ≤ b ≤ 3`.
    pub fn coeff(&mut self) -> (i64, u64) {
        (self.rng.random_range(1..=self.size.mag), self.rng.random_range(0..=3))
    }

    pub fn bad_set(&mut self) -> IndexSet {
        if self.rng.random_bool(0.5) {
            IndexSet::Squares
        } else {
            let k = self.rng.random_range(1..=3);
            let xs = (0..k).map(|_| self.rng.random_range(1..=30u64)).collect();
            IndexSet::finite(xs).expect("nonempty finite set")
        }
    }

    /// Anything at all, bounded or not.
    pub fn junk(&mut self, dom: SpaceDescriptor, cod: SpaceDescriptor) -> OperatorSequence {
        let b = self.op(dom, cod);
        match self.rng.random_range(0..3) {
            0 => OperatorSequence::Const(b),
            1 => OperatorSequence::ScaledOp(RationalFunction::index(), b),
            _ => OperatorSequence::ScaledOp(RationalFunction::index().mul(&RationalFunction::index()), b),
        }
    }

    /// With probability 2/3, replace `seq` by junk on a density-zero set.
    pub fn spoil(&mut self, seq: OperatorSequence, dom: SpaceDescriptor, cod: SpaceDescriptor) -> OperatorSequence {
        let junk = self.junk(dom, cod);
        self.spoil_with(seq, junk)
    }

    pub fn spoil_with(&mut self, seq: OperatorSequence, junk: OperatorSequence) -> OperatorSequence {
        if self.rng.random_bool(1.0 / 3.0) {
            return seq;
        }
        let bad = self.bad_set();
        OperatorSequence::piecewise(IndexSet::complement(bad), seq, junk)
    }
}

pub fn harmonic(a: i64, b: u64) -> RationalFunction {
    RationalFunction::harmonic(Scalar::from_int(a), b)
}

/// `limit + c(n)·a`.
pub fn along(limit: &OrderBoundedOperator, c: RationalFunction, a: OrderBoundedOperator) -> OperatorSequence {
    OperatorSequence::sum(OperatorSequence::Const(limit.clone()), OperatorSequence::ScaledOp(c, a))
}

impl Gen {
    /// Statistically order convergent to `limit`.
    pub fn soc_seq(&mut self, limit: &OrderBoundedOperator) -> OperatorSequence {
        let (dom, cod) = (limit.domain(), limit.codomain());
        let (a, b) = self.coeff();
        let dir = self.op(dom, cod);
        let good = along(limit, harmonic(a, b), dir);
        self.spoil(good, dom, cod)
    }

    /// Statistically order decreasing to `limit`.
    pub fn doc_seq(&mut self, limit: &OrderBoundedOperator) -> OperatorSequence {
        let (dom, cod) = (limit.domain(), limit.codomain());
        let (a, b) = self.coeff();
        let dir = self.pos_op(dom, cod);
        let good = along(limit, harmonic(a, b), dir);
        self.spoil(good, dom, cod)
    }

    /// Increasing at every index toward `limit`.
    pub fn increasing_seq(&mut self, limit: &OrderBoundedOperator) -> OperatorSequence {
        let (a, b) = self.coeff();
        let dir = self.pos_op(limit.domain(), limit.codomain()).neg();
        along(limit, harmonic(a, b), dir)
    }

    /// Bounded on a density-one set without necessarily converging.
    pub fn bounded_seq(&mut self, dom: SpaceDescriptor, cod: SpaceDescriptor) -> OperatorSequence {
        if self.rng.random_bool(0.5) {
            let limit = self.op(dom, cod);
            return self.soc_seq(&limit);
        }
        let step = self.rng.random_range(2..=4u64);
        let offset = self.rng.random_range(1..=step);
        let good = OperatorSequence::piecewise(
            IndexSet::ap(offset, step).expect("valid progression"),
            OperatorSequence::Const(self.op(dom, cod)),
            OperatorSequence::Const(self.op(dom, cod)),
        );
        self.spoil(good, dom, cod)
    }
}
