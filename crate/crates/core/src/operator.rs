//! Order bounded operators between coordinate lattices, realized as exact
//! rational matrices.
//!
//! The operator order is `S ≤ T` iff `S(u) ≤ T(u)` for every positive `u`.
//! Evaluating on the standard basis (which is positive) forces every entry of
//! `S` below the matching entry of `T`, and conversely entrywise domination
//! gives `S(u) ≤ T(u)` for any `u ≥ θ`. So the order is decided entrywise and
//! the lattice operations are the entrywise max/min/abs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, SpaceDescriptor};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderBoundedOperator {
    domain: SpaceDescriptor,
    codomain: SpaceDescriptor,
    /// Row-major, `codomain.dim()` rows of `domain.dim()` entries.
    entries: Vec<Scalar>,
}

impl OrderBoundedOperator {
    pub fn new(domain: SpaceDescriptor, codomain: SpaceDescriptor, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        if rows.len() != codomain.dim() || rows.iter().any(|r| r.len() != domain.dim()) {
            return Err(Error::Shape(format!(
                "matrix does not match {domain} -> {codomain}"
            )));
        }
        Ok(OrderBoundedOperator {
            domain,
            codomain,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_flat(domain: SpaceDescriptor, codomain: SpaceDescriptor, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != domain.dim() * codomain.dim() {
            return Err(Error::Shape(format!(
                "{} entries for {domain} -> {codomain}",
                entries.len()
            )));
        }
        Ok(OrderBoundedOperator {
            domain,
            codomain,
            entries,
        })
    }

    /// Matrix on finite coordinate spaces from integer rows.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        OrderBoundedOperator::new(SpaceDescriptor::finite(n)?, SpaceDescriptor::finite(m)?, rows)
    }

    pub fn zero(domain: SpaceDescriptor, codomain: SpaceDescriptor) -> Self {
        OrderBoundedOperator {
            domain,
            codomain,
            entries: vec![Scalar::zero(); domain.dim() * codomain.dim()],
        }
    }

    pub fn identity(space: SpaceDescriptor) -> Self {
        let n = space.dim();
        let mut op = OrderBoundedOperator::zero(space, space);
        for i in 0..n {
            op.entries[i * n + i] = Scalar::one();
        }
        op
    }

    pub fn domain(&self) -> SpaceDescriptor {
        self.domain
    }

    pub fn codomain(&self) -> SpaceDescriptor {
        self.codomain
    }

    pub fn rows(&self) -> usize {
        self.codomain.dim()
    }

    pub fn cols(&self) -> usize {
        self.domain.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols() + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.cols()).map(|r| r.to_vec()).collect()
    }

    pub fn same_shape(&self, other: &OrderBoundedOperator) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Shape(format!(
                "{} -> {} vs {} -> {}",
                self.domain, self.codomain, other.domain, other.codomain
            )));
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        OrderBoundedOperator {
            domain: self.domain,
            codomain: self.codomain,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &OrderBoundedOperator, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        self.same_shape(other)?;
        Ok(OrderBoundedOperator {
            domain: self.domain,
            codomain: self.codomain,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, u: &LatticeVector) -> Result<LatticeVector> {
        if u.space() != self.domain {
            return Err(Error::SpaceMismatch {
                left: self.domain,
                right: u.space(),
            });
        }
        LatticeVector::new(self.codomain, self.apply_coords(u.coords()))
    }

    /// Matrix-vector product on raw coordinates; zero entries are skipped.
    pub fn apply_coords(&self, u: &[Scalar]) -> Vec<Scalar> {
        let n = self.cols();
        self.entries
            .chunks(n)
            .map(|row| {
                row.iter()
                    .zip(u)
                    .filter(|(a, x)| !a.is_zero() && !x.is_zero())
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect()
    }

    /// `self ≤ other` in the operator order.
    pub fn op_leq(&self, other: &OrderBoundedOperator) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b))
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|a| !a.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn op_modulus(&self) -> Self {
        self.map(Scalar::abs)
    }

    pub fn op_join(&self, other: &OrderBoundedOperator) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone().max(b.clone()))
    }

    pub fn op_meet(&self, other: &OrderBoundedOperator) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone().min(b.clone()))
    }

    pub fn pos_part(&self) -> Self {
        self.map(|a| a.clone().max(Scalar::zero()))
    }

    pub fn neg_part(&self) -> Self {
        self.map(|a| (-a).max(Scalar::zero()))
    }

    pub fn add(&self, other: &OrderBoundedOperator) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &OrderBoundedOperator) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, alpha: &Scalar) -> Self {
        self.map(|a| a * alpha)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &OrderBoundedOperator) -> Result<Self> {
        if self.domain != inner.codomain {
            return Err(Error::Shape(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.domain, self.codomain, inner.domain, inner.codomain
            )));
        }
        let (m, k, n) = (self.rows(), self.cols(), inner.cols());
        let mut entries = vec![Scalar::zero(); m * n];
        for i in 0..m {
            for l in 0..k {
                let a = self.entry(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = inner.entry(l, j);
                    if !b.is_zero() {
                        entries[i * n + j] += &(a * b);
                    }
                }
            }
        }
        Ok(OrderBoundedOperator {
            domain: inner.domain,
            codomain: self.codomain,
            entries,
        })
    }

    /// Largest absolute entry; zero for the zero operator.
    pub fn max_abs_entry(&self) -> Scalar {
        self.entries
            .iter()
            .map(Scalar::abs)
            .fold(Scalar::zero(), Scalar::max)
    }
}

impl fmt::Display for OrderBoundedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let finite = !self.domain.is_truncated() && !self.codomain.is_truncated();
        if !finite {
            write!(f, "mat({}, {}, ", self.domain, self.codomain)?;
        }
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.cols()).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, a) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "{a}")?;
                }
            }
            write!(f, "]")?;
        }
        write!(f, "]")?;
        if !finite {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for OrderBoundedOperator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vecs().serialize(serializer)
    }
}

/// Support data for bands of the matrix lattice and band projections of the
/// codomain. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BandPattern {
    pub entry_support: BTreeSet<(usize, usize)>,
    pub coord_support: BTreeSet<usize>,
}

impl BandPattern {
    pub fn entries(support: impl IntoIterator<Item = (usize, usize)>) -> Self {
        BandPattern {
            entry_support: support.into_iter().collect(),
            coord_support: BTreeSet::new(),
        }
    }

    pub fn coords(support: impl IntoIterator<Item = usize>) -> Self {
        BandPattern {
            entry_support: BTreeSet::new(),
            coord_support: support.into_iter().collect(),
        }
    }

    /// Pattern covering every entry of an `m × n` matrix.
    pub fn full(m: usize, n: usize) -> Self {
        BandPattern::entries((0..m).flat_map(|i| (0..n).map(move |j| (i, j))))
    }
}

/// Diagonal 0/1 projection onto the coordinates in `pattern.coord_support`.
pub fn band_projection(pattern: &BandPattern, space: SpaceDescriptor) -> Result<OrderBoundedOperator> {
    let m = space.dim();
    let mut p = OrderBoundedOperator::zero(space, space);
    for &i in &pattern.coord_support {
        if i >= m {
            return Err(Error::OutOfRange { index: i, dim: m });
        }
        p.entries[i * m + i] = Scalar::one();
    }
    Ok(p)
}

/// Whether `t` vanishes off `pattern.entry_support`.
pub fn band_contains(pattern: &BandPattern, t: &OrderBoundedOperator) -> Result<bool> {
    for &(i, j) in &pattern.entry_support {
        if i >= t.rows() || j >= t.cols() {
            return Err(Error::Shape(format!(
                "band entry ({i}, {j}) outside a {}x{} matrix",
                t.rows(),
                t.cols()
            )));
        }
    }
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            if !t.entry(i, j).is_zero() && !pattern.entry_support.contains(&(i, j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkKind {
    Modulus,
    Join,
    Meet,
}

/// Largest domain dimension the corner enumeration accepts.
pub const RK_MAX_DIM: usize = 12;

/// Brute-force evaluation of a lattice operation at a positive vector `u`
/// through the Riesz–Kantorovich formulas, enumerating the `2ⁿ` corners of the
/// order interval. Independent of the entrywise implementation; used as a test
/// oracle.
///
/// * modulus: `sup { |S v| : |v| ≤ u }`, attained on sign corners `v_i = ±u_i`
/// * join: `sup { S v + T w : v, w ≥ θ, v + w = u }` over splits `v_i ∈ {0, u_i}`
/// * meet: the matching infimum
pub fn rk_reference(
    kind: RkKind,
    s: &OrderBoundedOperator,
    t: Option<&OrderBoundedOperator>,
    u: &LatticeVector,
) -> Result<LatticeVector> {
    if !u.is_positive() {
        return Err(Error::Refused("Riesz–Kantorovich oracle needs u ≥ θ".into()));
    }
    if u.space() != s.domain() {
        return Err(Error::SpaceMismatch {
            left: s.domain(),
            right: u.space(),
        });
    }
    let n = u.dim();
    if n > RK_MAX_DIM {
        return Err(Error::Refused(format!(
            "corner enumeration refuses dimension {n} > {RK_MAX_DIM}"
        )));
    }
    let other = match kind {
        RkKind::Modulus => None,
        RkKind::Join | RkKind::Meet => {
            let t = t.ok_or_else(|| Error::Usage("join/meet oracle needs two operators".into()))?;
            s.same_shape(t)?;
            Some(t)
        }
    };
    let mut best: Option<Vec<Scalar>> = None;
    for mask in 0u32..(1u32 << n) {
        let picked: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let value: Vec<Scalar> = match other {
            None => {
                let v: Vec<Scalar> = u
                    .coords()
                    .iter()
                    .zip(&picked)
                    .map(|(x, &neg)| if neg { -x } else { x.clone() })
                    .collect();
                s.apply_coords(&v).iter().map(Scalar::abs).collect()
            }
            Some(t) => {
                let v: Vec<Scalar> = u
                    .coords()
                    .iter()
                    .zip(&picked)
                    .map(|(x, &p)| if p { x.clone() } else { Scalar::zero() })
                    .collect();
                let w: Vec<Scalar> = u.coords().iter().zip(&v).map(|(x, y)| x - y).collect();
                s.apply_coords(&v)
                    .into_iter()
                    .zip(t.apply_coords(&w))
                    .map(|(a, b)| a + b)
                    .collect()
            }
        };
        best = Some(match best {
            None => value,
            Some(cur) => cur
                .into_iter()
                .zip(value)
                .map(|(a, b)| if kind == RkKind::Meet { a.min(b) } else { a.max(b) })
                .collect(),
        });
    }
    LatticeVector::new(s.codomain(), best.expect("at least one corner"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> OrderBoundedOperator {
        OrderBoundedOperator::from_ints(rows).unwrap()
    }

    fn v(xs: &[i64]) -> LatticeVector {
        LatticeVector::from_ints(xs).unwrap()
    }

    fn r2() -> SpaceDescriptor {
        SpaceDescriptor::finite(2).unwrap()
    }

    #[test]
    fn apply_examples() {
        let u = v(&[3, -1]);
        assert_eq!(OrderBoundedOperator::identity(r2()).apply(&u).unwrap(), u);
        assert!(OrderBoundedOperator::zero(r2(), r2()).apply(&u).unwrap().is_zero());
        assert_eq!(m(&[&[1, 2], &[0, 1]]).apply(&v(&[1, 1])).unwrap(), v(&[3, 1]));
        // linearity cross-check of the hand product
        let a = m(&[&[1, 2], &[0, 1]]);
        let lhs = a.apply(&v(&[1, 0]).add(&v(&[0, 1])).unwrap()).unwrap();
        let rhs = a.apply(&v(&[1, 0])).unwrap().add(&a.apply(&v(&[0, 1])).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(a.apply(&v(&[1, 1, 1])).is_err());
    }

    #[test]
    fn op_leq_examples() {
        let id = OrderBoundedOperator::identity(r2());
        assert!(OrderBoundedOperator::zero(r2(), r2()).op_leq(&id).unwrap());
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert!(!id.op_leq(&swap).unwrap());
        assert!(!swap.op_leq(&id).unwrap());
        assert!(id.op_leq(&m(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn modulus_examples() {
        let t = m(&[&[1, -2], &[-3, 4]]);
        assert_eq!(t.op_modulus(), m(&[&[1, 2], &[3, 4]]));
        let u = v(&[1, 1]);
        assert_eq!(rk_reference(RkKind::Modulus, &t, None, &u).unwrap(), v(&[3, 7]));
        let p = m(&[&[2, 0], &[1, 5]]);
        assert_eq!(p.op_modulus(), p);
        assert_eq!(t.neg().op_modulus(), t.op_modulus());
    }

    #[test]
    fn join_meet_examples() {
        let t = m(&[&[1, -1], &[0, 2]]);
        let zero = OrderBoundedOperator::zero(r2(), r2());
        assert_eq!(t.op_join(&zero).unwrap(), t.pos_part());
        assert_eq!(t.op_join(&t).unwrap(), t);
        assert_eq!(
            t.op_join(&m(&[&[0, 0], &[1, 1]])).unwrap(),
            m(&[&[1, 0], &[1, 2]])
        );
        let s = m(&[&[0, 0], &[1, 1]]);
        for u in [v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[2, 3])] {
            assert_eq!(
                t.op_join(&s).unwrap().apply(&u).unwrap(),
                rk_reference(RkKind::Join, &t, Some(&s), &u).unwrap()
            );
        }
        assert_eq!(
            t.op_meet(&s).unwrap(),
            t.neg().op_join(&s.neg()).unwrap().neg()
        );
        let id = OrderBoundedOperator::identity(r2());
        let u = v(&[4, 5]);
        assert_eq!(rk_reference(RkKind::Join, &id, Some(&zero), &u).unwrap(), u);
    }

    #[test]
    fn compose_examples() {
        let t = m(&[&[1, -1], &[3, 2]]);
        let id = OrderBoundedOperator::identity(r2());
        assert_eq!(id.compose(&t).unwrap(), t);
        let p = band_projection(&BandPattern::coords([0]), r2()).unwrap();
        assert_eq!(p.compose(&t).unwrap(), m(&[&[1, -1], &[0, 0]]));
        assert!(m(&[&[1, 2, 3]]).compose(&m(&[&[1], &[1]])).is_err());
    }

    #[test]
    fn band_projection_examples() {
        let full = band_projection(&BandPattern::coords([0, 1]), r2()).unwrap();
        assert_eq!(full, OrderBoundedOperator::identity(r2()));
        let empty = band_projection(&BandPattern::default(), r2()).unwrap();
        assert!(empty.is_zero());
        let p = band_projection(&BandPattern::coords([0]), r2()).unwrap();
        let u = m(&[&[-1, 2], &[3, 4]]);
        assert_eq!(p.compose(&u).unwrap(), m(&[&[-1, 2], &[0, 0]]));
        assert_eq!(p.compose(&u).unwrap().op_modulus(), m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p.compose(&u.op_modulus()).unwrap(), m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p.compose(&p).unwrap(), p);
        assert!(matches!(
            band_projection(&BandPattern::coords([2]), r2()),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn band_contains_examples() {
        let zero = OrderBoundedOperator::zero(r2(), r2());
        assert!(band_contains(&BandPattern::default(), &zero).unwrap());
        let any = m(&[&[1, -7], &[2, 9]]);
        assert!(band_contains(&BandPattern::full(2, 2), &any).unwrap());
        let b = BandPattern::entries([(0, 0)]);
        assert!(band_contains(&b, &m(&[&[5, 0], &[0, 0]])).unwrap());
        assert!(!band_contains(&b, &m(&[&[5, 1], &[0, 0]])).unwrap());
        assert!(band_contains(&BandPattern::entries([(3, 0)]), &any).is_err());
    }

    /// Every 2x2 matrix with entries in {-1, 0, 1}.
    fn small_matrices() -> Vec<OrderBoundedOperator> {
        (0..81)
            .map(|mut code| {
                let mut e = [0i64; 4];
                for x in &mut e {
                    *x = code % 3 - 1;
                    code /= 3;
                }
                m(&[&[e[0], e[1]], &[e[2], e[3]]])
            })
            .collect()
    }

    #[test]
    fn entry_supported_sets_are_ideals() {
        let mats = small_matrices();
        for mask in 0u32..16 {
            let pattern = BandPattern::entries(
                (0..4).filter(|k| mask & (1 << k) != 0).map(|k| (k / 2, k % 2)),
            );
            for b in mats.iter().filter(|b| band_contains(&pattern, b).unwrap()) {
                for a in &mats {
                    if a.op_modulus().op_leq(&b.op_modulus()).unwrap() {
                        assert!(band_contains(&pattern, a).unwrap());
                    }
                }
                // closed under the lattice operations with members
                for c in mats.iter().filter(|c| band_contains(&pattern, c).unwrap()) {
                    assert!(band_contains(&pattern, &b.add(c).unwrap()).unwrap());
                    assert!(band_contains(&pattern, &b.op_join(c).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn rk_reference_refusals() {
        let t = m(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            rk_reference(RkKind::Modulus, &t, None, &v(&[1, -1])),
            Err(Error::Refused(_))
        ));
        let big = SpaceDescriptor::finite(13).unwrap();
        let id = OrderBoundedOperator::identity(big);
        assert!(matches!(
            rk_reference(RkKind::Modulus, &id, None, &LatticeVector::ones(big)),
            Err(Error::Refused(_))
        ));
        assert!(rk_reference(RkKind::Join, &t, None, &v(&[1, 1])).is_err());
    }

    #[test]
    fn op_leq_matches_cone_grid() {
        // u ranges over {0,1,2}^2; S ≤ T iff S(u) ≤ T(u) on every grid point
        let mats = small_matrices();
        for s in mats.iter().step_by(5) {
            for t in mats.iter().step_by(3) {
                let mut grid_ok = true;
                for a in 0..3 {
                    for b in 0..3 {
                        let u = v(&[a, b]);
                        if !s.apply(&u).unwrap().leq(&t.apply(&u).unwrap()).unwrap() {
                            grid_ok = false;
                        }
                    }
                }
                assert_eq!(s.op_leq(t).unwrap(), grid_ok);
            }
        }
    }
}
