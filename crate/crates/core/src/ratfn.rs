//! Rational functions of the sequence index `n`.
//!
//! These are the closed-form coefficients of operator sequences (`1/n`,
//! `1/(n+1)`, `n`, ...). All questions the checkers ask about them (limit,
//! eventual sign, eventual monotonicity, supremum of a tail) are decided
//! exactly from Cauchy root bounds plus finitely many exact evaluations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tail analyses that would need to scan past this index give up.
pub const SCAN_CAP: u64 = 200_000;

/// Dense polynomial in `n`, coefficients stored from the constant term up,
/// without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `n`.
    pub fn var() -> Self {
        Polynomial::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_u64(&self, n: u64) -> Scalar {
        self.eval(&Scalar::from_u64(n))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Scalar::zero();
        Polynomial::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Scalar) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Polynomial::new(out)
    }

    /// `p(n + 1)`.
    pub fn shift_one(&self) -> Polynomial {
        // Horner with (n + 1) in place of n
        let step = Polynomial::from_ints(&[1, 1]);
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, c| acc.mul(&step).add(&Polynomial::constant(c.clone())))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().expect("nonempty") / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let t = &factor * c;
                rem[k + i] = &rem[k + i] - &t;
            }
            quot[k] = factor;
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let lead = a.leading();
            a.scale(&lead.recip())
        }
    }

    /// Every real root lies strictly inside `(-bound, bound)`.
    /// Zero for constants.
    pub fn cauchy_bound(&self) -> Scalar {
        match self.degree() {
            None | Some(0) => Scalar::zero(),
            Some(d) => {
                let lead = self.leading().abs();
                let max = self.coeffs[..d]
                    .iter()
                    .map(|c| c.abs() / &lead)
                    .fold(Scalar::zero(), Scalar::max);
                Scalar::one() + max
            }
        }
    }

    fn fmt_in(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mag_text = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                mag.to_string()
            };
            match (k, mag == Scalar::one()) {
                (0, _) => write!(f, "{mag_text}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag_text}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "n")?,
                _ => write!(f, "n^{k}")?,
            }
        }
        Ok(())
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f)
    }
}

/// Limit of a rational function as `n → ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Limit {
    Finite(Scalar),
    PosInfinite,
    NegInfinite,
}

impl Limit {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Limit::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, Limit::Finite(_))
    }
}

/// Eventual direction of `n ↦ c(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Constant,
    Increasing,
}

/// Eventual behavior, valid for every integer `n >= from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monotonicity {
    pub direction: Direction,
    pub from: u64,
}

/// Quotient of two polynomials in `n`, kept in lowest terms with a monic
/// denominator that has no integer root `>= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Checked constructor; rejects denominators vanishing at some integer `n >= 1`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::RationalFunction("zero denominator".into()));
        }
        let r = RationalFunction::reduced(num, den);
        let bound = r.den.cauchy_bound().ceil_u64();
        if bound > SCAN_CAP {
            return Err(Error::RationalFunction(format!(
                "denominator root bound {bound} too large to certify"
            )));
        }
        for n in 1..=bound.max(1) {
            if r.den.eval_u64(n).is_zero() {
                return Err(Error::RationalFunction(format!(
                    "denominator {} vanishes at n = {n}",
                    r.den
                )));
            }
        }
        Ok(r)
    }

    fn reduced(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().recip();
        RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::constant(Scalar::one()),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        RationalFunction {
            num: Polynomial::constant(c),
            den: Polynomial::constant(Scalar::one()),
        }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::constant(Scalar::one()),
        }
    }

    /// `n`.
    pub fn index() -> Self {
        RationalFunction::polynomial(Polynomial::var())
    }

    /// `k / (n + shift)`, with `shift >= 0`.
    pub fn harmonic(k: Scalar, shift: u64) -> Self {
        RationalFunction::reduced(
            Polynomial::constant(k),
            Polynomial::new(vec![Scalar::from_u64(shift), Scalar::one()]),
        )
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Scalar::zero()),
            (Some(0), Some(0)) => Some(self.num.leading()),
            _ => None,
        }
    }

    pub fn eval_u64(&self, n: u64) -> Scalar {
        let x = Scalar::from_u64(n);
        let d = self.den.eval(&x);
        debug_assert!(!d.is_zero(), "denominator vanishes at {n}");
        self.num.eval(&x) / d
    }

    // Sums and products of admissible functions stay admissible: the reduced
    // denominator divides the product of the operand denominators.
    pub fn add(&self, other: &RationalFunction) -> Self {
        RationalFunction::reduced(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RationalFunction) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalFunction) -> Self {
        RationalFunction::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Checked quotient.
    pub fn div(&self, other: &RationalFunction) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::RationalFunction("division by zero".into()));
        }
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    /// `c(n + 1)`.
    pub fn shift_one(&self) -> Self {
        RationalFunction::reduced(self.num.shift_one(), self.den.shift_one())
    }

    /// Limit as `n → ∞` from the degrees and leading coefficients.
    pub fn limit(&self) -> Limit {
        let (Some(dn), Some(dd)) = (self.num.degree(), self.den.degree()) else {
            return Limit::Finite(Scalar::zero());
        };
        if dn < dd {
            Limit::Finite(Scalar::zero())
        } else if dn == dd {
            Limit::Finite(self.num.leading() / self.den.leading())
        } else if self.num.leading().is_positive() {
            Limit::PosInfinite
        } else {
            Limit::NegInfinite
        }
    }

    /// First index from which the sign of `c(n)` no longer changes.
    pub fn sign_from(&self) -> u64 {
        self.num
            .cauchy_bound()
            .max(self.den.cauchy_bound())
            .ceil_u64()
            .max(1)
    }

    /// Eventual sign (-1, 0, 1); constant for all `n >= sign_from()`.
    pub fn eventual_sign(&self) -> i32 {
        if self.num.is_zero() {
            0
        } else {
            self.num.leading().signum() * self.den.leading().signum()
        }
    }

    /// `|c(n)|` for all `n >= sign_from()`.
    pub fn eventual_abs(&self) -> Self {
        if self.eventual_sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Eventual direction of the sequence `c(1), c(2), ...`, decided from the
    /// sign of `c(n) − c(n+1)` beyond the root bound of that difference.
    pub fn monotonicity(&self) -> Monotonicity {
        let diff = self.sub(&self.shift_one());
        let direction = match diff.eventual_sign() {
            0 => Direction::Constant,
            s if s > 0 => Direction::Decreasing,
            _ => Direction::Increasing,
        };
        Monotonicity {
            direction,
            from: diff.sign_from(),
        }
    }

    /// `Some(true)` when `c(n) ≥ c(n+1)` for all large `n`, `Some(false)`
    /// when it eventually strictly increases, `None` when the root bound is
    /// too large to act on.
    pub fn is_eventually_decreasing(&self) -> Option<bool> {
        let m = self.monotonicity();
        if m.from > SCAN_CAP {
            return None;
        }
        Some(m.direction != Direction::Increasing)
    }

    /// Upper bound for `sup { c(n) : n >= start }`, attained or approached.
    /// `None` when the tail is unbounded above or the scan is too long.
    pub fn tail_sup(&self, start: u64) -> Option<Scalar> {
        self.tail_extreme(start, true)
    }

    /// Lower bound for `inf { c(n) : n >= start }`.
    pub fn tail_inf(&self, start: u64) -> Option<Scalar> {
        self.tail_extreme(start, false)
    }

    fn tail_extreme(&self, start: u64, upper: bool) -> Option<Scalar> {
        let start = start.max(1);
        let mono = self.monotonicity();
        let settle = mono.from.max(start);
        if settle - start > SCAN_CAP {
            return None;
        }
        let pick = |a: Scalar, b: Scalar| if upper { a.max(b) } else { a.min(b) };
        let mut best = self.eval_u64(settle);
        for n in start..settle {
            best = pick(best, self.eval_u64(n));
        }
        // moving away from the extreme we want: the first settled value bounds the tail
        let toward = match (mono.direction, upper) {
            (Direction::Constant, _) => false,
            (Direction::Increasing, true) | (Direction::Decreasing, false) => true,
            _ => false,
        };
        if !toward {
            return Some(best);
        }
        match self.limit() {
            Limit::Finite(l) => Some(pick(best, l)),
            _ => None,
        }
    }

    fn fmt_in(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_is_one = self.den.degree() == Some(0) && self.den.leading() == Scalar::one();
        if den_is_one {
            return self.num.fmt_in(f);
        }
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            self.num.fmt_in(f)?;
        }
        write!(f, "/")?;
        if self.den.term_count() > 1 {
            write!(f, "({})", self.den)
        } else {
            self.den.fmt_in(f)
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f)
    }
}

impl FromStr for RationalFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::syntax::parse_ratfn(s)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Limit of `c(n)`.
pub fn coeff_limit(c: &RationalFunction) -> Limit {
    c.limit()
}

/// Whether `c(n) ≥ c(n+1)` for all large `n`; `None` when undecidable here.
pub fn is_eventually_decreasing(c: &RationalFunction) -> Option<bool> {
    c.is_eventually_decreasing()
}
