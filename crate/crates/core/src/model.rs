//! Vectors over the naturals, the reset/increment step relation and the
//! domination order.
//!
//! Coordinates are 0-indexed. A construction level over an inner sequence of
//! dimension `d` places its two new coordinates at indices `d` and `d + 1`.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigUint;

use crate::cell::Cell;
use crate::error::{Error, Result};

/// One coordinate step: `a -> b` iff `b = a + 1` or `b = 0`.
pub fn step_ok<T: Cell>(a: &T, b: &T) -> bool {
    a.steps_to(b)
}

fn same_dim<T>(v: &[T], w: &[T]) -> Result<()> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch {
            left: v.len(),
            right: w.len(),
        });
    }
    Ok(())
}

/// Coordinatewise step relation `v -> w`.
pub fn vec_step_ok<T: Cell>(v: &[T], w: &[T]) -> Result<bool> {
    same_dim(v, w)?;
    Ok(v.iter().zip(w).all(|(a, b)| a.steps_to(b)))
}

/// First coordinate at which `v -> w` fails, if any.
pub fn first_bad_step<T: Cell>(v: &[T], w: &[T]) -> Result<Option<usize>> {
    same_dim(v, w)?;
    Ok(v.iter().zip(w).position(|(a, b)| !a.steps_to(b)))
}

/// `v <= w` coordinatewise, i.e. `w` dominates `v`.
pub fn leq<T: Cell>(v: &[T], w: &[T]) -> Result<bool> {
    same_dim(v, w)?;
    Ok(leq_unchecked(v, w))
}

#[inline]
pub(crate) fn leq_unchecked<T: Ord>(v: &[T], w: &[T]) -> bool {
    v.iter().zip(w).all(|(a, b)| a <= b)
}

/// An arbitrary-precision point of `N^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector(Vec<BigUint>);

impl Vector {
    pub fn new(coords: Vec<BigUint>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::UnsupportedDimension {
                dim: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        Ok(Vector(coords))
    }

    pub fn from_u64s(coords: &[u64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigUint> {
        self.0
    }

    /// Narrow to machine words, failing on the first coordinate that does not fit.
    pub fn to_u64s(&self) -> Result<Vec<u64>> {
        self.0
            .iter()
            .map(|c| u64::from_big(c).ok_or_else(|| Error::Overflow(c.clone())))
            .collect()
    }
}

impl Deref for Vector {
    type Target = [BigUint];

    fn deref(&self) -> &[BigUint] {
        &self.0
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A materialized sequence of same-dimension vectors, stored row-major in
/// `u64` cells. Producers that could exceed `u64` go through checked
/// arithmetic and fail before anything lands here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorSequence {
    dim: usize,
    cells: Vec<u64>,
}

impl VectorSequence {
    pub fn empty(dim: usize) -> Result<Self> {
        Self::from_cells(dim, Vec::new())
    }

    pub fn from_cells(dim: usize, cells: Vec<u64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension {
                dim,
                min: 1,
                max: usize::MAX,
            });
        }
        if !cells.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: cells.len() % dim,
            });
        }
        Ok(VectorSequence { dim, cells })
    }

    pub fn from_rows<R: AsRef<[u64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut seq = Self::empty(dim)?;
        for r in rows {
            seq.push(r.as_ref())?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, row: &[u64]) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: row.len(),
            });
        }
        self.cells.extend_from_slice(row);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cells.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&[u64]> {
        let start = i.checked_mul(self.dim)?;
        self.cells.get(start..start + self.dim)
    }

    /// Panicking row access for indices known to be in range.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.cells[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u64]> + '_ {
        self.cells.chunks_exact(self.dim)
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [u64] {
        &mut self.cells
    }

    /// History of one coordinate over time.
    pub fn column(&self, coord: usize) -> Vec<u64> {
        self.rows().map(|r| r[coord]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn vector(&self, i: usize) -> Option<Vector> {
        self.get(i).map(|r| Vector::from_u64s(r).expect("dim >= 1"))
    }
}
