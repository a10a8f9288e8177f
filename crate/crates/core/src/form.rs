//! Eventual closed forms of operator sequences.
//!
//! A [`Form`] describes `T_n` for every `n >= valid_from` as a matrix of
//! rational functions chosen by which [`Region`] contains `n`. Lattice nodes
//! are resolved by eventual sign analysis, so the form only speaks about the
//! tail; the checkers handle the finitely many earlier indices by exact
//! evaluation.

use crate::density::Region;
use crate::opseq::OperatorSequence;
use crate::ratfn::{RationalFunction, SCAN_CAP};
use crate::scalar::Scalar;

/// Give up on trees whose pieces multiply beyond this.
const MAX_PIECES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub region: Region,
    /// Row-major entry functions.
    pub entries: Vec<RationalFunction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    pub rows: usize,
    pub cols: usize,
    pub valid_from: u64,
    pub pieces: Vec<Piece>,
    pub truncation: Option<usize>,
}

fn constant_entries(t: &crate::operator::OrderBoundedOperator) -> Vec<RationalFunction> {
    t.entries().iter().map(|a| RationalFunction::constant(a.clone())).collect()
}

/// Eventual lattice choice between two entry functions; returns the chosen
/// function and the index from which the choice is exact.
fn pick(f: &RationalFunction, g: &RationalFunction, join: bool) -> (RationalFunction, u64) {
    let d = f.sub(g);
    let f_wins = (d.eventual_sign() >= 0) == join;
    let chosen = if f_wins { f.clone() } else { g.clone() };
    (chosen, d.sign_from())
}

impl Form {
    /// `None` when the tree is outside the recognized fragment or a bound
    /// exceeds what can be scanned.
    pub fn of(seq: &OperatorSequence) -> Option<Form> {
        use OperatorSequence as S;
        let shape = seq.shape().ok()?;
        let (rows, cols) = (shape.rows(), shape.cols());
        let single = |entries: Vec<RationalFunction>, valid_from: u64, truncation: Option<usize>| Form {
            rows,
            cols,
            valid_from,
            pieces: vec![Piece {
                region: Region::all(),
                entries,
            }],
            truncation,
        };
        let form = match seq {
            S::Const(t) => single(constant_entries(t), 1, None),
            S::ScaledOp(c, t) => single(t.entries().iter().map(|a| c.scale(a)).collect(), 1, None),
            S::CoordFunctional(d) => {
                single(vec![RationalFunction::zero(); *d], *d as u64 + 1, Some(*d))
            }
            S::Piecewise(j, a, b) => {
                let (fa, fb) = (Form::of(a)?, Form::of(b)?);
                let mut threshold = fa.valid_from.max(fb.valid_from);
                let mut pieces = Vec::new();
                for p in &fa.pieces {
                    if let Some(region) = p.region.and(j, true, &mut threshold) {
                        pieces.push(Piece {
                            region,
                            entries: p.entries.clone(),
                        });
                    }
                }
                for p in &fb.pieces {
                    if let Some(region) = p.region.and(j, false, &mut threshold) {
                        pieces.push(Piece {
                            region,
                            entries: p.entries.clone(),
                        });
                    }
                }
                Form {
                    rows,
                    cols,
                    valid_from: threshold,
                    pieces,
                    truncation: fa.truncation.or(fb.truncation),
                }
            }
            S::Sum(a, b) => Form::combine(Form::of(a)?, Form::of(b)?, |f, g| (f.add(g), 1))?,
            S::Join(a, b) => Form::combine(Form::of(a)?, Form::of(b)?, |f, g| pick(f, g, true))?,
            S::Meet(a, b) => Form::combine(Form::of(a)?, Form::of(b)?, |f, g| pick(f, g, false))?,
            S::Scale(alpha, a) => Form::of(a)?.map(|f| (f.scale(alpha), 1)),
            S::Abs(a) => Form::of(a)?.map(|f| (f.eventual_abs(), f.sign_from())),
            S::PosPart(a) => Form::of(a)?.map(|f| {
                let kept = if f.eventual_sign() > 0 { f.clone() } else { RationalFunction::zero() };
                (kept, f.sign_from())
            }),
            S::ComposeLeft(t, a) => {
                let inner = Form::of(a)?;
                let k = inner.rows;
                inner.remap(rows, cols, |e| {
                    (0..rows * cols)
                        .map(|idx| {
                            let (i, j) = (idx / cols, idx % cols);
                            (0..k).fold(RationalFunction::zero(), |acc, l| {
                                acc.add(&e[l * cols + j].scale(t.entry(i, l)))
                            })
                        })
                        .collect()
                })
            }
            S::ComposeRight(a, p) => {
                let inner = Form::of(a)?;
                let k = inner.cols;
                inner.remap(rows, cols, |e| {
                    (0..rows * cols)
                        .map(|idx| {
                            let (i, j) = (idx / cols, idx % cols);
                            (0..k).fold(RationalFunction::zero(), |acc, l| {
                                acc.add(&e[i * k + l].scale(p.entry(l, j)))
                            })
                        })
                        .collect()
                })
            }
        };
        if form.valid_from > SCAN_CAP || form.pieces.len() > MAX_PIECES {
            return None;
        }
        Some(form)
    }

    fn map(mut self, f: impl Fn(&RationalFunction) -> (RationalFunction, u64)) -> Form {
        for p in &mut self.pieces {
            for e in &mut p.entries {
                let (g, from) = f(e);
                *e = g;
                self.valid_from = self.valid_from.max(from);
            }
        }
        self
    }

    fn remap(self, rows: usize, cols: usize, f: impl Fn(&[RationalFunction]) -> Vec<RationalFunction>) -> Form {
        Form {
            rows,
            cols,
            valid_from: self.valid_from,
            pieces: self
                .pieces
                .into_iter()
                .map(|p| Piece {
                    entries: f(&p.entries),
                    region: p.region,
                })
                .collect(),
            truncation: self.truncation,
        }
    }

    fn combine(
        a: Form,
        b: Form,
        f: impl Fn(&RationalFunction, &RationalFunction) -> (RationalFunction, u64),
    ) -> Option<Form> {
        if a.pieces.len() * b.pieces.len() > MAX_PIECES {
            return None;
        }
        let mut valid_from = a.valid_from.max(b.valid_from);
        let mut pieces = Vec::new();
        for p in &a.pieces {
            'next: for q in &b.pieces {
                let mut region = p.region.clone();
                for (set, pol) in q.region.literals() {
                    match region.and(set, *pol, &mut valid_from) {
                        Some(r) => region = r,
                        None => continue 'next,
                    }
                }
                let mut entries = Vec::with_capacity(p.entries.len());
                for (x, y) in p.entries.iter().zip(&q.entries) {
                    let (g, from) = f(x, y);
                    valid_from = valid_from.max(from);
                    entries.push(g);
                }
                pieces.push(Piece { region, entries });
            }
        }
        Some(Form {
            rows: a.rows,
            cols: a.cols,
            valid_from,
            pieces,
            truncation: a.truncation.or(b.truncation),
        })
    }

    /// Piece active at `n`; meaningful for `n >= valid_from`.
    pub fn piece_at(&self, n: u64) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.region.contains(n))
    }

    /// The form of `n ↦ T_n u`, as a one-column form.
    pub fn apply(&self, u: &[Scalar]) -> Form {
        let cols = self.cols;
        Form {
            rows: self.rows,
            cols: 1,
            valid_from: self.valid_from,
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    region: p.region.clone(),
                    entries: (0..self.rows)
                        .map(|i| {
                            (0..cols).fold(RationalFunction::zero(), |acc, j| {
                                acc.add(&p.entries[i * cols + j].scale(&u[j]))
                            })
                        })
                        .collect(),
                })
                .collect(),
            truncation: self.truncation,
        }
    }
}
