//! Finite-dimensional coordinate vector lattices.
//!
//! A [`LatticeVector`] lives in a declared [`SpaceDescriptor`] and is ordered
//! coordinate-wise. Truncated sequence spaces are ordinary finite vectors whose
//! descriptor also records which infinite sequence space they stand in for.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceFlavor {
    /// Truncation of `c0`, the null sequences.
    C0,
    /// Truncation of `l1`, the summable sequences.
    L1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    FiniteDim { dim: usize },
    TruncatedSequence { dim: usize, flavor: SequenceFlavor },
}

impl SpaceDescriptor {
    pub fn finite(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("space dimension must be at least 1".into()));
        }
        Ok(SpaceDescriptor::FiniteDim { dim })
    }

    pub fn truncated(dim: usize, flavor: SequenceFlavor) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("truncation must be at least 1".into()));
        }
        Ok(SpaceDescriptor::TruncatedSequence { dim, flavor })
    }

    pub fn dim(&self) -> usize {
        match *self {
            SpaceDescriptor::FiniteDim { dim } => dim,
            SpaceDescriptor::TruncatedSequence { dim, .. } => dim,
        }
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self, SpaceDescriptor::TruncatedSequence { .. })
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDescriptor::FiniteDim { dim } => write!(f, "finite({dim})"),
            SpaceDescriptor::TruncatedSequence { dim, flavor } => {
                let tag = match flavor {
                    SequenceFlavor::C0 => "c0",
                    SequenceFlavor::L1 => "l1",
                };
                write!(f, "seq({dim}, {tag})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    space: SpaceDescriptor,
    coords: Vec<Scalar>,
}

impl LatticeVector {
    pub fn new(space: SpaceDescriptor, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "{} coordinates given for {space}",
                coords.len()
            )));
        }
        Ok(LatticeVector { space, coords })
    }

    /// Vector in `finite(len)` built from integers.
    pub fn from_ints(values: &[i64]) -> Result<Self> {
        let space = SpaceDescriptor::finite(values.len())?;
        LatticeVector::new(space, values.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn zero(space: SpaceDescriptor) -> Self {
        LatticeVector {
            space,
            coords: vec![Scalar::zero(); space.dim()],
        }
    }

    pub fn ones(space: SpaceDescriptor) -> Self {
        LatticeVector {
            space,
            coords: vec![Scalar::one(); space.dim()],
        }
    }

    /// Standard basis vector `e_i`, zero-based.
    pub fn basis(space: SpaceDescriptor, i: usize) -> Result<Self> {
        if i >= space.dim() {
            return Err(Error::OutOfRange {
                index: i,
                dim: space.dim(),
            });
        }
        let mut v = LatticeVector::zero(space);
        v.coords[i] = Scalar::one();
        Ok(v)
    }

    pub fn space(&self) -> SpaceDescriptor {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    fn check_same(&self, other: &LatticeVector) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.space,
                right: other.space,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &LatticeVector, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        self.check_same(other)?;
        Ok(LatticeVector {
            space: self.space,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        })
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        LatticeVector {
            space: self.space,
            coords: self.coords.iter().map(f).collect(),
        }
    }

    /// `u ∨ v`, the coordinate-wise maximum.
    pub fn join(&self, other: &LatticeVector) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone().max(b.clone()))
    }

    /// `u ∧ v`, the coordinate-wise minimum.
    pub fn meet(&self, other: &LatticeVector) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone().min(b.clone()))
    }

    /// `|u| = u ∨ (−u)`.
    pub fn abs(&self) -> Self {
        self.map(Scalar::abs)
    }

    /// `u⁺ = u ∨ θ`.
    pub fn pos_part(&self) -> Self {
        self.map(|a| a.clone().max(Scalar::zero()))
    }

    /// `u⁻ = (−u) ∨ θ`.
    pub fn neg_part(&self) -> Self {
        self.map(|a| (-a).max(Scalar::zero()))
    }

    pub fn leq(&self, other: &LatticeVector) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b))
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &LatticeVector) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &LatticeVector) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, alpha: &Scalar) -> Self {
        self.map(|a| a * alpha)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    /// JSON array of `p/q` strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.coords).expect("scalars always serialize")
    }

    pub fn from_json(space: SpaceDescriptor, text: &str) -> Result<Self> {
        let coords: Vec<Scalar> =
            serde_json::from_str(text).map_err(|e| Error::Usage(format!("bad vector json: {e}")))?;
        LatticeVector::new(space, coords)
    }
}

/// Supremum of a nonempty finite family.
pub fn sup_list(vs: &[LatticeVector]) -> Result<LatticeVector> {
    let (first, rest) = vs
        .split_first()
        .ok_or_else(|| Error::Usage("sup of an empty list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, v| acc.join(v))
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}
