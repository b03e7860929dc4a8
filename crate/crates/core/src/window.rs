//! Truncated ground sets `E = ℕ^m ⊔ … ⊔ ℕ^m` and finite subsets of them.

use std::fmt;

use crate::error::{Error, Result};

/// A point of the ground set: the block (differential variable) and the
/// exponent tuple inside that block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub block: usize,
    pub exponent: Vec<u32>,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, (", self.block)?;
        for (i, e) in self.exponent.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "))")
    }
}

/// `n` blocks of `m`-variate exponent boxes, linearised block after block and
/// lexicographically inside each block (last variable fastest).
///
/// Concatenating the blocks is the disjoint-variable merge of an `n`-tuple of
/// series into a single series in `m·n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundWindow {
    bounds: Vec<Vec<u32>>,
    offsets: Vec<usize>,
    size: usize,
}

impl GroundWindow {
    /// `bounds[k][v]` is the number of exponents `0..bounds[k][v]` kept for
    /// variable `v` of block `k`.
    pub fn new(bounds: Vec<Vec<u32>>) -> Result<GroundWindow> {
        let Some(first) = bounds.first() else {
            return Err(Error::InvalidInput("window needs at least one block".into()));
        };
        let m = first.len();
        if m == 0 {
            return Err(Error::InvalidInput("blocks need at least one variable".into()));
        }
        let mut offsets = Vec::with_capacity(bounds.len());
        let mut size = 0usize;
        for b in &bounds {
            if b.len() != m {
                return Err(Error::WindowMismatch(format!("block arities differ ({} vs {m})", b.len())));
            }
            if b.contains(&0) {
                return Err(Error::InvalidInput("window bounds must be positive".into()));
            }
            offsets.push(size);
            size += b.iter().map(|&x| x as usize).product::<usize>();
        }
        Ok(GroundWindow { bounds, offsets, size })
    }

    /// `{0, …, len-1} ⊂ ℕ`.
    pub fn univariate(len: u32) -> Result<GroundWindow> {
        GroundWindow::new(vec![vec![len]])
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn nblocks(&self) -> usize {
        self.bounds.len()
    }

    pub fn nvars(&self) -> usize {
        self.bounds[0].len()
    }

    pub fn bounds(&self) -> &[Vec<u32>] {
        &self.bounds
    }

    pub fn block_len(&self, block: usize) -> usize {
        self.bounds[block].iter().map(|&x| x as usize).product()
    }

    /// Largest total degree appearing in `block`.
    pub fn max_total_degree(&self, block: usize) -> u32 {
        self.bounds[block].iter().map(|b| b - 1).sum()
    }

    pub fn position(&self, index: usize) -> Position {
        assert!(index < self.size, "index {index} outside window of size {}", self.size);
        let block = self.offsets.partition_point(|&o| o <= index) - 1;
        let mut rest = index - self.offsets[block];
        let bounds = &self.bounds[block];
        let mut exponent = vec![0u32; bounds.len()];
        for (slot, &b) in exponent.iter_mut().zip(bounds).rev() {
            *slot = (rest % b as usize) as u32;
            rest /= b as usize;
        }
        Position { block, exponent }
    }

    pub fn index(&self, pos: &Position) -> Option<usize> {
        let bounds = self.bounds.get(pos.block)?;
        if pos.exponent.len() != bounds.len() || pos.exponent.iter().zip(bounds).any(|(e, b)| e >= b) {
            return None;
        }
        let local = pos.exponent.iter().zip(bounds).fold(0usize, |acc, (&e, &b)| acc * b as usize + e as usize);
        Some(self.offsets[pos.block] + local)
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.size).map(|i| self.position(i))
    }

    pub fn full(&self) -> SupportSet {
        SupportSet((0..self.size).collect())
    }

    pub fn render(&self, set: &SupportSet) -> String {
        let parts: Vec<String> = set.iter().map(|i| self.position(i).to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// A finite set of window indices, kept sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn empty() -> SupportSet {
        SupportSet(Vec::new())
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> SupportSet {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SupportSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        SupportSet::from_indices(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &SupportSet) -> SupportSet {
        SupportSet(self.iter().filter(|&i| !other.contains(i)).collect())
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Bitmask form for ground sets of at most 64 elements.
    pub fn mask(&self) -> u64 {
        self.iter().fold(0u64, |m, i| m | (1u64 << i))
    }

    pub fn from_mask(mask: u64) -> SupportSet {
        SupportSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        SupportSet::from_indices(iter)
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_index_round_trip() {
        let w = GroundWindow::new(vec![vec![2, 3], vec![1, 4]]).unwrap();
        assert_eq!(w.len(), 10);
        for i in 0..w.len() {
            assert_eq!(w.index(&w.position(i)), Some(i));
        }
        assert_eq!(w.position(4), Position { block: 0, exponent: vec![1, 1] });
        assert_eq!(w.position(6), Position { block: 1, exponent: vec![0, 0] });
        assert_eq!(w.index(&Position { block: 0, exponent: vec![2, 0] }), None);
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(GroundWindow::new(vec![]).is_err());
        assert!(GroundWindow::new(vec![vec![2], vec![2, 2]]).is_err());
        assert!(GroundWindow::new(vec![vec![0]]).is_err());
    }

    #[test]
    fn rendering_uses_block_and_exponent() {
        let w = GroundWindow::new(vec![vec![3], vec![3]]).unwrap();
        assert_eq!(w.render(&SupportSet::from_indices([0, 4])), "{(0, (0)), (1, (1))}");
    }

    #[test]
    fn set_operations() {
        let a = SupportSet::from_indices([3, 1, 1]);
        let b = SupportSet::from_indices([1, 2, 3]);
        assert_eq!(a.as_slice(), &[1, 3]);
        assert!(a.is_subset(&b));
        assert_eq!(b.difference(&a).as_slice(), &[2]);
        assert_eq!(SupportSet::from_mask(a.mask()), a);
    }
}
