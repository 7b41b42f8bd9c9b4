//! The level-stacked cyclic construction.
//!
//! Level 0 is the four-vector base sequence in dimension 2. Each further
//! level takes a cyclic non-dominating sequence `u` of length `n` and produces
//! one of length `m = n(2n + 1)` with two extra coordinates:
//!
//! * inner coordinates: `u[k mod n]`;
//! * `X[k]`: write `k = 2n*i + j` with `0 <= j < 2n`, then `X[k] = max(j - i, 0)`;
//! * `Y[k] = X[(k + n) mod m]`.
//!
//! Because `k mod m_t mod n_t = k mod n_t`, the vector at index `k` of the
//! full construction can be computed level by level without materializing
//! anything. Odd target dimensions append one coordinate that is always 0.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::model::{Vector, VectorSequence};
use crate::verifier;

/// The base cyclic non-dominating sequence of dimension 2.
pub const BASE: [[u64; 2]; 4] = [[1, 1], [0, 2], [1, 0], [0, 0]];

pub const MIN_DIM: usize = 2;
/// Lengths square at every level; beyond this the numbers stop being cheap.
pub const MAX_DIM: usize = 48;
/// Default cap on `length * dim` for anything that materializes.
pub const DEFAULT_CELL_BUDGET: u64 = 100_000_000;

fn check_dim(d: usize) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension {
            dim: d,
            min: MIN_DIM,
            max: MAX_DIM,
        });
    }
    Ok(())
}

pub fn base_sequence() -> VectorSequence {
    VectorSequence::from_rows(2, &BASE).expect("base rows have dimension 2")
}

#[inline]
fn counter_value(k: u64, n: u64) -> u64 {
    let (i, j) = (k / (2 * n), k % (2 * n));
    j.saturating_sub(i)
}

/// One construction level applied to a materialized cyclic sequence.
///
/// With `verify` set the input is first checked for cyclicity and
/// non-domination (the latter under [`verifier::DEFAULT_MAX_COMPARISONS`]).
pub fn extend(u: &VectorSequence, verify: bool) -> Result<VectorSequence> {
    if u.is_empty() {
        return Err(Error::EmptyInput);
    }
    if verify {
        if let Some(v) = verifier::check_cyclic(u) {
            return Err(Error::Rejected(v));
        }
        let opts = verifier::FullCheck::default();
        if let Some(v) = verifier::check_non_dominating_full(u, &opts)? {
            return Err(Error::Rejected(v));
        }
    }
    let n = u.len() as u64;
    let m = (2 * n)
        .checked_add(1)
        .and_then(|t| t.checked_mul(n))
        .ok_or_else(|| Error::Overflow(BigUint::from(n) * (BigUint::from(n) * 2u32 + 1u32)))?;
    let dim = u.dim() + 2;
    let cells = m
        .checked_mul(dim as u64)
        .ok_or_else(|| Error::Overflow(BigUint::from(m) * dim))?;
    if cells > DEFAULT_CELL_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "materializing the extended sequence",
            required: BigUint::from(cells),
            budget: DEFAULT_CELL_BUDGET,
        });
    }
    let mut out = Vec::with_capacity(cells as usize);
    for k in 0..m {
        out.extend_from_slice(u.row((k % n) as usize));
        out.push(counter_value(k, n));
        out.push(counter_value((k + n) % m, n));
    }
    VectorSequence::from_cells(dim, out)
}

/// `L(2) = 4`, `L(d + 2) = L(d) * (2 L(d) + 1)`; odd `d` shares `L(d - 1)`.
pub fn length_of(d: usize) -> Result<BigUint> {
    check_dim(d)?;
    let mut len = BigUint::from(4u32);
    for _ in 1..d / 2 {
        len = next_length(&len);
    }
    Ok(len)
}

fn next_length(n: &BigUint) -> BigUint {
    n * ((n << 1u32) + 1u32)
}

/// `2^(3 * 2^(floor(d/2) - 1) - 1)`.
pub fn closed_form_bound(d: usize) -> Result<BigUint> {
    check_dim(d)?;
    let exp = 3u64 * (1u64 << (d / 2 - 1)) - 1;
    Ok(BigUint::one() << exp)
}

/// Shape of one level, innermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    /// Dimension of the sequence this level produces.
    pub level_dim: usize,
    /// `n`, the length of the sequence being looped; `None` for the base level.
    pub inner_length: Option<BigUint>,
    /// `m`, the length of the sequence this level produces.
    pub length: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Geometry<T> {
    n: T,
    two_n: T,
    m: T,
}

impl<T: Cell> Geometry<T> {
    #[inline]
    fn counter(&self, k: &T) -> T {
        let (i, j) = k.div_rem(&self.two_n);
        j.monus(&i)
    }

    #[inline]
    fn shifted(&self, k: &T) -> T {
        k.add(&self.n).rem(&self.m)
    }

    fn split(&self, k: &T) -> (T, T) {
        k.div_rem(&self.two_n)
    }
}

/// Random access over the construction in a fixed cell type.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Accessor<T> {
    dim: usize,
    padded: bool,
    len: T,
    levels: Vec<Geometry<T>>,
}

impl<T: Cell> Accessor<T> {
    /// `None` when some `index + n` could leave the cell type.
    fn new(spec: &ConstructionSpec) -> Option<Self> {
        let guard = spec.length() << 1u32;
        T::from_big(&guard)?;
        let levels = spec.levels[1..]
            .iter()
            .map(|l| {
                let n = T::from_big(l.inner_length.as_ref().expect("upper level"))?;
                Some(Geometry {
                    two_n: n.add(&n),
                    m: T::from_big(&l.length)?,
                    n,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Accessor {
            dim: spec.target_dim,
            padded: spec.padded,
            len: T::from_big(spec.length())?,
            levels,
        })
    }

    fn fill(&self, k: &T, out: &mut [T]) {
        let b = k.rem(&T::from_u64(4)).to_u64().expect("k mod 4") as usize;
        out[0] = T::from_u64(BASE[b][0]);
        out[1] = T::from_u64(BASE[b][1]);
        for (t, g) in self.levels.iter().enumerate() {
            let kt = k.rem(&g.m);
            out[2 + 2 * t] = g.counter(&kt);
            out[3 + 2 * t] = g.counter(&g.shifted(&kt));
        }
        if self.padded {
            out[self.dim - 1] = T::zero();
        }
    }

    fn get(&self, k: &T) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        self.fill(k, &mut out);
        out
    }

    /// Coordinate where `v[a]` strictly exceeds `v[b]`, following the
    /// structure of the non-domination argument: descend while the pair
    /// differs in the inner phase, then pick X or Y by the position of both
    /// indices within their blocks.
    fn witness(&self, a: &T, b: &T) -> Result<usize> {
        let (mut a, mut b) = (a.clone(), b.clone());
        for (t, g) in self.levels.iter().enumerate().rev() {
            let (an, bn) = (a.rem(&g.n), b.rem(&g.n));
            if an < bn {
                a = an;
                b = bn;
                continue;
            }
            let (ia, ja) = g.split(&a);
            let (ib, jb) = g.split(&b);
            let (x, y) = (2 + 2 * t, 3 + 2 * t);
            let a_low = ja < g.n;
            let b_low = jb < g.n;
            // Cases in proof order: both low, both high, high/low, low/high.
            if a_low && b_low && ja >= jb && ia < ib {
                return Ok(y);
            }
            if !a_low && !b_low && ja >= jb && ia < ib {
                return Ok(x);
            }
            if !a_low && b_low && ja >= jb.add(&g.n) && ia < ib {
                return Ok(x);
            }
            if a_low && !b_low && ja.add(&g.n) >= jb && ia <= ib {
                return Ok(y);
            }
            return Err(Error::NoWitness {
                a: a.to_big(),
                b: b.to_big(),
            });
        }
        let ra = BASE[a.to_u64().expect("base index") as usize];
        let rb = BASE[b.to_u64().expect("base index") as usize];
        (0..2)
            .find(|&l| ra[l] > rb[l])
            .ok_or_else(|| Error::NoWitness {
                a: a.to_big(),
                b: b.to_big(),
            })
    }
}

/// Symbolic description of the construction for one target dimension.
#[derive(Clone, Debug)]
pub struct ConstructionSpec {
    target_dim: usize,
    padded: bool,
    levels: Vec<Level>,
    fast: Option<Accessor<u64>>,
}

impl PartialEq for ConstructionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.target_dim == other.target_dim
            && self.padded == other.padded
            && self.levels == other.levels
    }
}

impl Eq for ConstructionSpec {}

pub fn make_spec(d: usize) -> Result<ConstructionSpec> {
    check_dim(d)?;
    let mut levels = vec![Level {
        level_dim: 2,
        inner_length: None,
        length: BigUint::from(4u32),
    }];
    for t in 1..d / 2 {
        let n = levels[t - 1].length.clone();
        levels.push(Level {
            level_dim: 2 * t + 2,
            length: next_length(&n),
            inner_length: Some(n),
        });
    }
    let mut spec = ConstructionSpec {
        target_dim: d,
        padded: d % 2 == 1,
        levels,
        fast: None,
    };
    spec.fast = Accessor::new(&spec);
    Ok(spec)
}

impl ConstructionSpec {
    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn padded(&self) -> bool {
        self.padded
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn length(&self) -> &BigUint {
        &self.levels.last().expect("at least the base level").length
    }

    /// Length as a machine word, when it fits with headroom for index arithmetic.
    pub fn length_u64(&self) -> Option<u64> {
        self.fast.as_ref().map(|f| f.len)
    }

    fn check_index(&self, k: &BigUint) -> Result<()> {
        if k >= self.length() {
            return Err(Error::IndexOutOfRange {
                index: k.clone(),
                length: self.length().clone(),
            });
        }
        Ok(())
    }

    pub fn index_at(&self, k: &BigUint) -> Result<Vector> {
        self.check_index(k)?;
        let coords = match &self.fast {
            Some(f) => f
                .get(&u64::from_big(k).expect("index below length"))
                .into_iter()
                .map(BigUint::from)
                .collect(),
            None => Accessor::<BigUint>::new(self)
                .expect("big cells always fit")
                .get(k),
        };
        Vector::new(coords)
    }

    /// Machine-word random access; `None` if the length does not fit.
    pub fn index_at_u64(&self, k: u64) -> Result<Option<Vec<u64>>> {
        let Some(f) = &self.fast else { return Ok(None) };
        if k >= f.len {
            return Err(Error::IndexOutOfRange {
                index: k.into(),
                length: self.length().clone(),
            });
        }
        Ok(Some(f.get(&k)))
    }

    /// A coordinate `l` with `v[a][l] > v[b][l]`, for `a < b`.
    pub fn domination_witness(&self, a: &BigUint, b: &BigUint) -> Result<usize> {
        if a >= b {
            return Err(Error::InvalidPair {
                a: a.clone(),
                b: b.clone(),
            });
        }
        self.check_index(b)?;
        match &self.fast {
            Some(f) => f.witness(
                &u64::from_big(a).expect("a < b < len"),
                &u64::from_big(b).expect("b < len"),
            ),
            None => Accessor::<BigUint>::new(self)
                .expect("big cells always fit")
                .witness(a, b),
        }
    }

    /// Machine-word variant of [`Self::domination_witness`] for hot loops.
    pub fn domination_witness_u64(&self, a: u64, b: u64) -> Result<Option<usize>> {
        let Some(f) = &self.fast else { return Ok(None) };
        if a >= b {
            return Err(Error::InvalidPair {
                a: a.into(),
                b: b.into(),
            });
        }
        if b >= f.len {
            return Err(Error::IndexOutOfRange {
                index: b.into(),
                length: self.length().clone(),
            });
        }
        f.witness(&a, &b).map(Some)
    }

    fn check_range(&self, from: &BigUint, count: u64) -> Result<()> {
        let end = from + count;
        if &end > self.length() {
            return Err(Error::IndexOutOfRange {
                index: end,
                length: self.length().clone(),
            });
        }
        Ok(())
    }

    /// Cursor positioned at `from`. It wraps around at the end of the
    /// sequence, which makes the wrap step easy to check.
    pub fn walker<T: Cell>(&self, from: &BigUint) -> Result<Walker<T>> {
        if from >= self.length() {
            return Err(Error::IndexOutOfRange {
                index: from.clone(),
                length: self.length().clone(),
            });
        }
        let acc = Accessor::<T>::new(self).ok_or_else(|| Error::Overflow(self.length().clone()))?;
        Ok(Walker::new(acc, &T::from_big(from).expect("from < len")))
    }

    /// Vectors `from .. from + count` in order.
    pub fn stream<T: Cell>(&self, from: &BigUint, count: u64) -> Result<Stream<T>> {
        self.check_range(from, count)?;
        if count == 0 {
            return Ok(Stream {
                walker: None,
                remaining: 0,
            });
        }
        Ok(Stream {
            walker: Some(self.walker(from)?),
            remaining: count,
        })
    }

    /// The whole sequence, refusing when `length * dim` exceeds `cell_budget`.
    pub fn materialize(&self, cell_budget: u64) -> Result<VectorSequence> {
        let cells = self.length() * self.target_dim;
        if cells > BigUint::from(cell_budget) {
            return Err(Error::BudgetExceeded {
                what: "materializing the construction",
                required: cells,
                budget: cell_budget,
            });
        }
        let len = self.length_u64().expect("fits under cell budget");
        let mut out = Vec::with_capacity(len as usize * self.target_dim);
        let mut w = self.walker::<u64>(&BigUint::ZERO)?;
        for _ in 0..len {
            out.extend_from_slice(w.current());
            w.advance();
        }
        VectorSequence::from_cells(self.target_dim, out)
    }
}

/// The materialized construction for dimension `d` under the default budget.
pub fn construct(d: usize) -> Result<VectorSequence> {
    make_spec(d)?.materialize(DEFAULT_CELL_BUDGET)
}

#[derive(Clone, Debug)]
struct Pos<T> {
    i: T,
    j: T,
}

/// Incremental cursor over the construction.
///
/// Each level keeps the block/offset decomposition of the X position and of
/// the shifted Y position, so advancing costs a few comparisons per level
/// instead of divisions.
#[derive(Clone, Debug)]
pub struct Walker<T> {
    acc: Accessor<T>,
    base: usize,
    pos: Vec<(Pos<T>, Pos<T>)>,
    current: Vec<T>,
}

impl<T: Cell> Walker<T> {
    fn new(acc: Accessor<T>, from: &T) -> Self {
        let mut current = vec![T::zero(); acc.dim];
        acc.fill(from, &mut current);
        let base = from.rem(&T::from_u64(4)).to_u64().expect("k mod 4") as usize;
        let pos = acc
            .levels
            .iter()
            .map(|g| {
                let kt = from.rem(&g.m);
                let (i, j) = g.split(&kt);
                let (yi, yj) = g.split(&g.shifted(&kt));
                (Pos { i, j }, Pos { i: yi, j: yj })
            })
            .collect();
        Walker {
            acc,
            base,
            pos,
            current,
        }
    }

    pub fn current(&self) -> &[T] {
        &self.current
    }

    pub fn advance(&mut self) {
        self.base = (self.base + 1) % 4;
        self.current[0] = T::from_u64(BASE[self.base][0]);
        self.current[1] = T::from_u64(BASE[self.base][1]);
        for (t, (g, (x, y))) in self.acc.levels.iter().zip(self.pos.iter_mut()).enumerate() {
            Self::bump(g, x);
            Self::bump(g, y);
            self.current[2 + 2 * t] = x.j.monus(&x.i);
            self.current[3 + 2 * t] = y.j.monus(&y.i);
        }
    }

    #[inline]
    fn bump(g: &Geometry<T>, p: &mut Pos<T>) {
        p.j.incr();
        if p.j == g.two_n {
            p.j = T::zero();
            p.i.incr();
        }
        // The last block (i = n) is only n long.
        if p.i == g.n && p.j == g.n {
            p.i = T::zero();
            p.j = T::zero();
        }
    }
}

/// Finite run of a [`Walker`].
#[derive(Clone, Debug)]
pub struct Stream<T> {
    walker: Option<Walker<T>>,
    remaining: u64,
}

impl<T: Cell> Iterator for Stream<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.remaining == 0 {
            return None;
        }
        let w = self.walker.as_mut()?;
        let v = w.current().to_vec();
        self.remaining -= 1;
        if self.remaining > 0 {
            w.advance();
        }
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

/// Counting down from all ones to zero in binary, without ever keeping a
/// coordinate fixed: coordinate `l` at time `t` is `t mod 2^l + 1` while bit
/// `l` of the countdown is set and 0 otherwise.
pub fn binary_counter(bits: usize) -> Result<VectorSequence> {
    const MAX_BITS: usize = 24;
    if !(1..=MAX_BITS).contains(&bits) {
        return Err(Error::UnsupportedDimension {
            dim: bits,
            min: 1,
            max: MAX_BITS,
        });
    }
    let len = 1u64 << bits;
    let mut cells = Vec::with_capacity(len as usize * bits);
    for t in 0..len {
        for l in 0..bits {
            let low = 1u64 << l;
            let v = if t % (2 * low) < low { t % low + 1 } else { 0 };
            cells.push(v);
        }
    }
    VectorSequence::from_cells(bits, cells)
}

/// Compares lengths against the closed-form bound, for reporting.
pub fn bound_ordering(d: usize) -> Result<Ordering> {
    Ok(closed_form_bound(d)?.cmp(&length_of(d)?))
}
