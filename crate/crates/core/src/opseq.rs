//! Operator sequences `n ↦ T_n` as closed-form combinator trees.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::density::IndexSet;
use crate::error::{Error, Result};
use crate::lattice::{SequenceFlavor, SpaceDescriptor};
use crate::operator::OrderBoundedOperator;
use crate::ratfn::RationalFunction;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorSequence {
    Const(OrderBoundedOperator),
    ScaledOp(RationalFunction, OrderBoundedOperator),
    /// `e_n` on `seq(D, c0)` for `n ≤ D`, the zero functional after.
    CoordFunctional(usize),
    Piecewise(IndexSet, Box<OperatorSequence>, Box<OperatorSequence>),
    Sum(Box<OperatorSequence>, Box<OperatorSequence>),
    Scale(Scalar, Box<OperatorSequence>),
    Join(Box<OperatorSequence>, Box<OperatorSequence>),
    Meet(Box<OperatorSequence>, Box<OperatorSequence>),
    Abs(Box<OperatorSequence>),
    PosPart(Box<OperatorSequence>),
    /// `T ∘ A_n`.
    ComposeLeft(OrderBoundedOperator, Box<OperatorSequence>),
    /// `A_n ∘ P`.
    ComposeRight(Box<OperatorSequence>, OrderBoundedOperator),
}

use OperatorSequence as Seq;

/// Domain and codomain of every term of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub domain: SpaceDescriptor,
    pub codomain: SpaceDescriptor,
}

impl Shape {
    pub fn rows(&self) -> usize {
        self.codomain.dim()
    }

    pub fn cols(&self) -> usize {
        self.domain.dim()
    }

    pub fn of(t: &OrderBoundedOperator) -> Shape {
        Shape {
            domain: t.domain(),
            codomain: t.codomain(),
        }
    }

    fn same(self, other: Shape, what: &str) -> Result<Shape> {
        if self != other {
            return Err(Error::Shape(format!(
                "{what}: {} -> {} vs {} -> {}",
                self.domain, self.codomain, other.domain, other.codomain
            )));
        }
        Ok(self)
    }
}

pub fn coord_functional_shape(d: usize) -> Result<Shape> {
    Ok(Shape {
        domain: SpaceDescriptor::truncated(d, SequenceFlavor::C0)?,
        codomain: SpaceDescriptor::finite(1)?,
    })
}

impl OperatorSequence {
    pub fn constant(t: OrderBoundedOperator) -> Self {
        Seq::Const(t)
    }

    pub fn scaled(c: RationalFunction, t: OrderBoundedOperator) -> Self {
        Seq::ScaledOp(c, t)
    }

    pub fn piecewise(j: IndexSet, on: Seq, off: Seq) -> Self {
        Seq::Piecewise(j, Box::new(on), Box::new(off))
    }

    pub fn sum(a: Seq, b: Seq) -> Self {
        Seq::Sum(Box::new(a), Box::new(b))
    }

    pub fn scale(alpha: Scalar, a: Seq) -> Self {
        Seq::Scale(alpha, Box::new(a))
    }

    pub fn join(a: Seq, b: Seq) -> Self {
        Seq::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Seq, b: Seq) -> Self {
        Seq::Meet(Box::new(a), Box::new(b))
    }

    pub fn abs(a: Seq) -> Self {
        Seq::Abs(Box::new(a))
    }

    pub fn pos_part(a: Seq) -> Self {
        Seq::PosPart(Box::new(a))
    }

    /// `A_n⁻ = (−A_n)⁺`.
    pub fn neg_part(a: Seq) -> Self {
        Seq::pos_part(Seq::scale(Scalar::from_int(-1), a))
    }

    pub fn compose_left(t: OrderBoundedOperator, a: Seq) -> Self {
        Seq::ComposeLeft(t, Box::new(a))
    }

    pub fn compose_right(a: Seq, p: OrderBoundedOperator) -> Self {
        Seq::ComposeRight(Box::new(a), p)
    }

    /// Checks that all leaves fit together and returns the common shape.
    pub fn shape(&self) -> Result<Shape> {
        match self {
            Seq::Const(t) | Seq::ScaledOp(_, t) => Ok(Shape::of(t)),
            Seq::CoordFunctional(d) => coord_functional_shape(*d),
            Seq::Piecewise(_, a, b) => a.shape()?.same(b.shape()?, "piecewise branches"),
            Seq::Sum(a, b) => a.shape()?.same(b.shape()?, "sum"),
            Seq::Join(a, b) => a.shape()?.same(b.shape()?, "join"),
            Seq::Meet(a, b) => a.shape()?.same(b.shape()?, "meet"),
            Seq::Scale(_, a) | Seq::Abs(a) | Seq::PosPart(a) => a.shape(),
            Seq::ComposeLeft(t, a) => {
                let s = a.shape()?;
                if t.domain() != s.codomain {
                    return Err(Error::Shape(format!(
                        "compose_left: operator domain {} vs sequence codomain {}",
                        t.domain(),
                        s.codomain
                    )));
                }
                Ok(Shape {
                    domain: s.domain,
                    codomain: t.codomain(),
                })
            }
            Seq::ComposeRight(a, p) => {
                let s = a.shape()?;
                if p.codomain() != s.domain {
                    return Err(Error::Shape(format!(
                        "compose_right: operator codomain {} vs sequence domain {}",
                        p.codomain(),
                        s.domain
                    )));
                }
                Ok(Shape {
                    domain: p.domain(),
                    codomain: s.codomain,
                })
            }
        }
    }

    /// `T_n` for `n ≥ 1`.
    pub fn eval(&self, n: u64) -> Result<OrderBoundedOperator> {
        if n == 0 {
            return Err(Error::Usage("sequences are indexed from 1".into()));
        }
        self.eval_at(n)
    }

    fn eval_at(&self, n: u64) -> Result<OrderBoundedOperator> {
        Ok(match self {
            Seq::Const(t) => t.clone(),
            Seq::ScaledOp(c, t) => t.scale(&c.eval_u64(n)),
            Seq::CoordFunctional(d) => {
                let shape = coord_functional_shape(*d)?;
                let mut row = vec![Scalar::zero(); *d];
                if n as usize <= *d {
                    row[n as usize - 1] = Scalar::one();
                }
                OrderBoundedOperator::new(shape.domain, shape.codomain, vec![row])?
            }
            Seq::Piecewise(j, a, b) => {
                if j.contains(n) {
                    a.eval_at(n)?
                } else {
                    b.eval_at(n)?
                }
            }
            Seq::Sum(a, b) => a.eval_at(n)?.add(&b.eval_at(n)?)?,
            Seq::Scale(alpha, a) => a.eval_at(n)?.scale(alpha),
            Seq::Join(a, b) => a.eval_at(n)?.op_join(&b.eval_at(n)?)?,
            Seq::Meet(a, b) => a.eval_at(n)?.op_meet(&b.eval_at(n)?)?,
            Seq::Abs(a) => a.eval_at(n)?.op_modulus(),
            Seq::PosPart(a) => a.eval_at(n)?.pos_part(),
            Seq::ComposeLeft(t, a) => t.compose(&a.eval_at(n)?)?,
            Seq::ComposeRight(a, p) => a.eval_at(n)?.compose(p)?,
        })
    }

    /// Truncation of the first coordinate-functional leaf, if any.
    pub fn truncation(&self) -> Option<usize> {
        match self {
            Seq::CoordFunctional(d) => Some(*d),
            Seq::Const(_) | Seq::ScaledOp(..) => None,
            Seq::Piecewise(_, a, b) | Seq::Sum(a, b) | Seq::Join(a, b) | Seq::Meet(a, b) => {
                a.truncation().or_else(|| b.truncation())
            }
            Seq::Scale(_, a) | Seq::Abs(a) | Seq::PosPart(a) | Seq::ComposeLeft(_, a) | Seq::ComposeRight(a, _) => {
                a.truncation()
            }
        }
    }

    /// Tree depth, leaves counting 1.
    pub fn depth(&self) -> usize {
        match self {
            Seq::Const(_) | Seq::ScaledOp(..) | Seq::CoordFunctional(_) => 1,
            Seq::Piecewise(_, a, b) | Seq::Sum(a, b) | Seq::Join(a, b) | Seq::Meet(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Seq::Scale(_, a) | Seq::Abs(a) | Seq::PosPart(a) | Seq::ComposeLeft(_, a) | Seq::ComposeRight(a, _) => {
                1 + a.depth()
            }
        }
    }

    /// Builds a sequence whose terms are the given entry functions, row-major.
    /// Uses a single scaled operator when all entries share a common
    /// coefficient, otherwise a sum of one scaled unit matrix per entry.
    pub fn from_entries(shape: Shape, entries: &[RationalFunction]) -> Result<Self> {
        let (rows, cols) = (shape.rows(), shape.cols());
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entry functions for a {rows}x{cols} shape", entries.len())));
        }
        let zero = OrderBoundedOperator::zero(shape.domain, shape.codomain);
        let nonzero: Vec<usize> = (0..entries.len()).filter(|&k| !entries[k].is_zero()).collect();
        let Some(&first) = nonzero.first() else {
            return Ok(Seq::Const(zero));
        };
        // common coefficient c with every entry a constant multiple of it
        let c = entries[first].clone();
        let mut ks = vec![Scalar::zero(); entries.len()];
        let mut common = true;
        for &k in &nonzero {
            // a ratio with a pole at some index is not a constant
            match entries[k].div(&c).ok().and_then(|r| r.as_constant()) {
                Some(q) => ks[k] = q,
                None => {
                    common = false;
                    break;
                }
            }
        }
        if common {
            let t = OrderBoundedOperator::from_flat(shape.domain, shape.codomain, ks)?;
            return Ok(match c.as_constant() {
                Some(q) => Seq::Const(t.scale(&q)),
                None => Seq::ScaledOp(c, t),
            });
        }
        let mut terms = nonzero.iter().map(|&k| {
            let mut unit = vec![Scalar::zero(); entries.len()];
            unit[k] = Scalar::one();
            let t = OrderBoundedOperator::from_flat(shape.domain, shape.codomain, unit)?;
            Ok(Seq::ScaledOp(entries[k].clone(), t))
        });
        let head = terms.next().expect("at least one nonzero entry")?;
        terms.try_fold(head, |acc, t| Ok(Seq::sum(acc, t?)))
    }
}

impl fmt::Display for OperatorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Const(t) => write!(f, "const({t})"),
            Seq::ScaledOp(c, t) => write!(f, "scaled({c}, {t})"),
            Seq::CoordFunctional(d) => write!(f, "coordfun({d})"),
            Seq::Piecewise(j, a, b) => write!(f, "piecewise({j}, {a}, {b})"),
            Seq::Sum(a, b) => write!(f, "sum({a}, {b})"),
            Seq::Scale(alpha, a) => write!(f, "scale({alpha}, {a})"),
            Seq::Join(a, b) => write!(f, "join({a}, {b})"),
            Seq::Meet(a, b) => write!(f, "meet({a}, {b})"),
            Seq::Abs(a) => write!(f, "abs({a})"),
            Seq::PosPart(a) => write!(f, "pos({a})"),
            Seq::ComposeLeft(t, a) => write!(f, "compose_left({t}, {a})"),
            Seq::ComposeRight(a, p) => write!(f, "compose_right({a}, {p})"),
        }
    }
}

impl FromStr for OperatorSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::syntax::parse_sequence(s, &crate::syntax::Env::default())
    }
}

impl Serialize for OperatorSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
