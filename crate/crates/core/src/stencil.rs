//! Finite interaction stencils and binary vectors indexed by them.

use std::fmt;

use crate::error::{Error, Result};

/// Largest stencil size supported by the explicit `2^|Σ|` value table.
pub const MAX_STENCIL_LEN: usize = 20;

/// A finite set of integer offsets `Σ ⊂ Z^N` containing the origin.
///
/// Offsets keep the order in which they were given; bit `i` of every
/// [`BinaryVector`] refers to `offsets[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    dim: usize,
    offsets: Vec<Vec<i64>>,
    origin_index: usize,
    basis_indices: Vec<usize>,
    radius: f64,
}

impl Stencil {
    /// Builds a stencil that contains the origin and every canonical basis
    /// vector `e_1..e_N`, as required for coercive potentials.
    pub fn new(dim: usize, offsets: Vec<Vec<i64>>) -> Result<Self> {
        let stencil = Self::with_origin(dim, offsets)?;
        if stencil.basis_indices.len() != dim {
            return Err(Error::Config(
                "stencil must contain every canonical basis vector e_i".into(),
            ));
        }
        Ok(stencil)
    }

    /// Builds a stencil that only needs to contain the origin. Basis
    /// vectors are located when present; coercivity is then undefined.
    pub fn with_origin(dim: usize, offsets: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("stencil dimension must be positive".into()));
        }
        if offsets.is_empty() || offsets.len() > MAX_STENCIL_LEN {
            return Err(Error::Config(format!(
                "stencil must have between 1 and {MAX_STENCIL_LEN} offsets, got {}",
                offsets.len()
            )));
        }
        for (i, y) in offsets.iter().enumerate() {
            if y.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: y.len(),
                });
            }
            if offsets[..i].contains(y) {
                return Err(Error::Config(format!("duplicate stencil offset {y:?}")));
            }
        }
        let origin_index = offsets
            .iter()
            .position(|y| y.iter().all(|&c| c == 0))
            .ok_or_else(|| Error::Config("stencil must contain the origin".into()))?;
        let basis_indices: Vec<usize> = (0..dim)
            .filter_map(|axis| {
                offsets.iter().position(|y| {
                    y.iter()
                        .enumerate()
                        .all(|(k, &c)| c == i64::from(k == axis))
                })
            })
            .collect();
        let radius = offsets
            .iter()
            .map(|y| y.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        Ok(Stencil {
            dim,
            offsets,
            origin_index,
            basis_indices,
            radius,
        })
    }

    /// `{0, e_1, ..., e_N}`.
    pub fn nearest_neighbor(dim: usize) -> Self {
        let mut offsets = vec![vec![0; dim]];
        for axis in 0..dim {
            let mut e = vec![0; dim];
            e[axis] = 1;
            offsets.push(e);
        }
        Self::new(dim, offsets).expect("nearest-neighbor stencil is well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn offsets(&self) -> &[Vec<i64>] {
        &self.offsets
    }

    pub fn origin_index(&self) -> usize {
        self.origin_index
    }

    /// Indices of `e_1..e_N` in `offsets`; shorter than `dim` when the
    /// stencil lacks some basis vector.
    pub fn basis_indices(&self) -> &[usize] {
        &self.basis_indices
    }

    pub fn has_full_basis(&self) -> bool {
        self.basis_indices.len() == self.dim
    }

    /// `ρ_Σ`, the largest Euclidean norm of an offset.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Number of binary vectors on this stencil, `2^|Σ|`.
    pub fn table_len(&self) -> usize {
        1usize << self.len()
    }

    /// Mask with every bit set.
    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.len()) - 1) as u32
    }

    /// The vector `(ν·y)_{y∈Σ}`.
    pub fn project(&self, nu: &[f64]) -> Result<Vec<f64>> {
        if nu.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: nu.len(),
            });
        }
        Ok(self
            .offsets
            .iter()
            .map(|y| y.iter().zip(nu).map(|(&c, &n)| c as f64 * n).sum())
            .collect())
    }
}

/// An element of `{0,1}^Σ`, stored as a bitmask over the stencil order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    bits: u32,
    len: u8,
}

impl BinaryVector {
    pub fn new(bits: u32, len: usize) -> Result<Self> {
        if len > MAX_STENCIL_LEN {
            return Err(Error::Config(format!("binary vector too long: {len}")));
        }
        if len < 32 && bits >> len != 0 {
            return Err(Error::Domain(format!(
                "bitmask {bits:#b} has bits beyond length {len}"
            )));
        }
        Ok(BinaryVector {
            bits,
            len: len as u8,
        })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mask = bits
            .iter()
            .enumerate()
            .fold(0u32, |m, (i, &b)| m | (u32::from(b) << i));
        Self::new(mask, bits.len())
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn get(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn meet(self, other: Self) -> Self {
        BinaryVector {
            bits: self.bits & other.bits,
            len: self.len,
        }
    }

    pub fn join(self, other: Self) -> Self {
        BinaryVector {
            bits: self.bits | other.bits,
            len: self.len,
        }
    }

    pub fn complement(self) -> Self {
        let full = ((1u64 << self.len) - 1) as u32;
        BinaryVector {
            bits: !self.bits & full,
            len: self.len,
        }
    }

    /// Entries as `0.0` / `1.0`.
    pub fn to_real(self) -> Vec<f64> {
        (0..self.len()).map(|i| f64::from(u8::from(self.get(i)))).collect()
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.len() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}
