//! Patterns, generalized patterns, and their canonical identifiers.
//!
//! A `k x l` pattern is a grid holding each rank `1..=k*l` exactly once; it
//! is the relative-order template whose density in a square is measured.
//! A generalized pattern additionally allows holes (`*` in files): cells
//! whose relative order is unconstrained. Every pattern has a stable
//! [`PatternId`], the 0-based lexicographic rank of its row-major entry
//! sequence, used as the report key throughout the crate.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

/// Largest cell count for exhaustive pattern enumeration (`(k*l)!` lists).
pub const MAX_ENUM_CELLS: usize = 10;
/// Largest cell count for which a permutation rank fits a `u64`.
pub const MAX_ID_CELLS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern must have at least one row and one column")]
    EmptyDims,
    #[error("entries must contain each of 1..=k*l exactly once")]
    InvalidEntries,
    #[error("k*l = {0} exceeds the supported ceiling of {1}")]
    TooLarge(usize, usize),
    #[error("pattern id {id} out of range: {dims} patterns have ids below {max}")]
    IdOutOfRange { id: u64, dims: usize, max: u64 },
    #[error("non-hole entries must be exactly 1..=m, each once")]
    InvalidGeneralizedEntries,
    #[error("row {0} consists entirely of holes")]
    AllHoleRow(usize),
    #[error("column {0} consists entirely of holes")]
    AllHoleColumn(usize),
}

/// 0-based lexicographic rank of a pattern's row-major entry sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternId(pub u64);

/// A `k x l` grid containing each rank `1..=k*l` exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl Pattern {
    /// Validates a row-major rank grid.
    pub fn new(rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self, PatternError> {
        if rows == 0 || cols == 0 {
            return Err(PatternError::EmptyDims);
        }
        let cells = rows * cols;
        if cells > u8::MAX as usize || entries.len() != cells {
            return Err(PatternError::InvalidEntries);
        }
        let mut seen = vec![false; cells + 1];
        for &e in &entries {
            let e = e as usize;
            if e == 0 || e > cells || seen[e] {
                return Err(PatternError::InvalidEntries);
            }
            seen[e] = true;
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a pattern from nested rows (test and CLI convenience).
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self, PatternError> {
        let k = rows.len();
        let l = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != l) {
            return Err(PatternError::InvalidEntries);
        }
        Pattern::new(k, l, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    /// Rank at 0-based position `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    /// Row-major rank sequence.
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Lexicographic rank of the row-major sequence among all patterns of
    /// the same shape.
    pub fn id(&self) -> Result<PatternId, PatternError> {
        if self.cells() > MAX_ID_CELLS {
            return Err(PatternError::TooLarge(self.cells(), MAX_ID_CELLS));
        }
        Ok(PatternId(permutation_rank(&self.entries)))
    }

    /// Inverse of [`Pattern::id`] for the given shape.
    pub fn from_id(rows: usize, cols: usize, id: PatternId) -> Result<Self, PatternError> {
        if rows == 0 || cols == 0 {
            return Err(PatternError::EmptyDims);
        }
        let cells = rows * cols;
        if cells > MAX_ID_CELLS {
            return Err(PatternError::TooLarge(cells, MAX_ID_CELLS));
        }
        let max = crate::ratio::factorial_u64(cells as u64);
        if id.0 >= max {
            return Err(PatternError::IdOutOfRange { id: id.0, dims: cells, max });
        }
        Ok(Self { rows, cols, entries: permutation_unrank(cells, id.0) })
    }

    /// Transpose: entry `(r, c)` moves to `(c, r)`.
    pub fn transpose(&self) -> Pattern {
        let mut entries = vec![0u8; self.cells()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.get(r, c);
            }
        }
        Pattern { rows: self.cols, cols: self.rows, entries }
    }

    /// Vertical flip: row order reversed.
    pub fn vflip(&self) -> Pattern {
        let mut entries = Vec::with_capacity(self.cells());
        for r in (0..self.rows).rev() {
            entries.extend_from_slice(&self.entries[r * self.cols..(r + 1) * self.cols]);
        }
        Pattern { rows: self.rows, cols: self.cols, entries }
    }

    /// Horizontal flip: column order reversed.
    pub fn hflip(&self) -> Pattern {
        let mut entries = Vec::with_capacity(self.cells());
        for r in 0..self.rows {
            entries.extend(self.entries[r * self.cols..(r + 1) * self.cols].iter().rev());
        }
        Pattern { rows: self.rows, cols: self.cols, entries }
    }

    /// Value complement: rank `a` becomes `k*l + 1 - a`.
    pub fn complement(&self) -> Pattern {
        let top = self.cells() as u8 + 1;
        let entries = self.entries.iter().map(|&e| top - e).collect();
        Pattern { rows: self.rows, cols: self.cols, entries }
    }

    /// Whether the two largest ranks (`k*l - 1` and `k*l`) occupy the same
    /// column. For 2x3 patterns this is the property deciding the corner
    /// statistic weight.
    pub fn top_two_share_column(&self) -> bool {
        let cells = self.cells() as u8;
        let pos = |rank: u8| self.entries.iter().position(|&e| e == rank).unwrap();
        pos(cells) % self.cols == pos(cells - 1) % self.cols
    }

    /// The same grid as a generalized pattern without holes.
    pub fn to_generalized(&self) -> GeneralizedPattern {
        GeneralizedPattern {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
    }
}

/// Enumerates all `(k*l)!` patterns of the given shape in `PatternId` order.
pub fn enumerate_patterns(rows: usize, cols: usize) -> Result<Vec<Pattern>, PatternError> {
    if rows == 0 || cols == 0 {
        return Err(PatternError::EmptyDims);
    }
    let cells = rows * cols;
    if cells > MAX_ENUM_CELLS {
        return Err(PatternError::TooLarge(cells, MAX_ENUM_CELLS));
    }
    let count = crate::ratio::factorial_u64(cells as u64);
    let mut out = Vec::with_capacity(count as usize);
    let mut entries: Vec<u8> = (1..=cells as u8).collect();
    loop {
        out.push(Pattern { rows, cols, entries: entries.clone() });
        if !next_permutation(&mut entries) {
            break;
        }
    }
    debug_assert_eq!(out.len() as u64, count);
    Ok(out)
}

/// Lexicographic successor in place; false once the sequence is descending.
fn next_permutation(seq: &mut [u8]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let j = (i..seq.len()).rev().find(|&j| seq[j] > seq[i - 1]).unwrap();
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Lexicographic rank of a permutation of `1..=len` via its Lehmer code.
pub(crate) fn permutation_rank(seq: &[u8]) -> u64 {
    let len = seq.len();
    let mut rank = 0u64;
    for i in 0..len {
        let smaller_later = seq[i + 1..].iter().filter(|&&e| e < seq[i]).count() as u64;
        rank += smaller_later * crate::ratio::factorial_u64((len - 1 - i) as u64);
    }
    rank
}

/// Permutation of `1..=len` with the given lexicographic rank.
fn permutation_unrank(len: usize, mut rank: u64) -> Vec<u8> {
    let mut pool: Vec<u8> = (1..=len as u8).collect();
    let mut out = Vec::with_capacity(len);
    for i in (0..len).rev() {
        let f = crate::ratio::factorial_u64(i as u64);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// A `k x l` grid over ranks and holes; only non-hole cells constrain order.
///
/// Non-hole entries are exactly `1..=m` where `m` is the non-hole count, and
/// no row or column may consist of holes alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedPattern {
    rows: usize,
    cols: usize,
    /// Row-major, 0 encodes a hole.
    entries: Vec<u8>,
}

impl GeneralizedPattern {
    /// Validates a row-major grid where `None` is a hole.
    pub fn new(rows: usize, cols: usize, cells: Vec<Option<u8>>) -> Result<Self, PatternError> {
        if rows == 0 || cols == 0 {
            return Err(PatternError::EmptyDims);
        }
        if cells.len() != rows * cols || rows * cols > u8::MAX as usize {
            return Err(PatternError::InvalidGeneralizedEntries);
        }
        let m = cells.iter().flatten().count();
        let mut seen = vec![false; m + 1];
        for &cell in cells.iter() {
            if let Some(v) = cell {
                let v = v as usize;
                if v == 0 || v > m || seen[v] {
                    return Err(PatternError::InvalidGeneralizedEntries);
                }
                seen[v] = true;
            }
        }
        let entries: Vec<u8> = cells.iter().map(|c| c.unwrap_or(0)).collect();
        for r in 0..rows {
            if entries[r * cols..(r + 1) * cols].iter().all(|&e| e == 0) {
                return Err(PatternError::AllHoleRow(r + 1));
            }
        }
        for c in 0..cols {
            if (0..rows).all(|r| entries[r * cols + c] == 0) {
                return Err(PatternError::AllHoleColumn(c + 1));
            }
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds from nested rows where 0 encodes a hole (test convenience).
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self, PatternError> {
        let k = rows.len();
        let l = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != l) {
            return Err(PatternError::InvalidGeneralizedEntries);
        }
        let cells = rows
            .concat()
            .iter()
            .map(|&e| if e == 0 { None } else { Some(e) })
            .collect();
        GeneralizedPattern::new(k, l, cells)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Rank at `(r, c)`, or `None` for a hole.
    pub fn entry(&self, r: usize, c: usize) -> Option<u8> {
        match self.entries[r * self.cols + c] {
            0 => None,
            v => Some(v),
        }
    }

    /// Number of non-hole entries.
    pub fn constrained(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    /// Positions of the non-hole cells in increasing rank order.
    pub fn cells_by_rank(&self) -> Vec<(usize, usize)> {
        let mut cells: Vec<(u8, usize, usize)> = Vec::with_capacity(self.constrained());
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Some(v) = self.entry(r, c) {
                    cells.push((v, r, c));
                }
            }
        }
        cells.sort_unstable();
        cells.into_iter().map(|(_, r, c)| (r, c)).collect()
    }

    /// The underlying full pattern when there are no holes.
    pub fn as_full_pattern(&self) -> Option<Pattern> {
        if self.constrained() == self.rows * self.cols {
            Some(Pattern {
                rows: self.rows,
                cols: self.cols,
                entries: self.entries.clone(),
            })
        } else {
            None
        }
    }

    /// Transpose (used by the latinon symmetry checks).
    pub fn transpose(&self) -> GeneralizedPattern {
        let mut entries = vec![0u8; self.rows * self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        GeneralizedPattern { rows: self.cols, cols: self.rows, entries }
    }
}

impl From<&Pattern> for GeneralizedPattern {
    fn from(p: &Pattern) -> Self {
        p.to_generalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_patterns(1, 1).unwrap().len(), 1);
        assert_eq!(enumerate_patterns(2, 2).unwrap().len(), 24);
        assert_eq!(enumerate_patterns(2, 3).unwrap().len(), 720);
        assert!(matches!(
            enumerate_patterns(3, 4),
            Err(PatternError::TooLarge(12, MAX_ENUM_CELLS))
        ));
    }

    #[test]
    fn enumerate_is_sorted_and_distinct() {
        let all = enumerate_patterns(2, 3).unwrap();
        for (i, p) in all.iter().enumerate() {
            assert_eq!(p.id().unwrap(), PatternId(i as u64));
        }
    }

    #[test]
    fn id_examples() {
        let first = Pattern::from_rows(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(first.id().unwrap(), PatternId(0));
        let last = Pattern::from_id(2, 3, PatternId(719)).unwrap();
        assert_eq!(last, Pattern::from_rows(&[&[6, 5, 4], &[3, 2, 1]]).unwrap());
        assert!(matches!(
            Pattern::from_id(2, 3, PatternId(720)),
            Err(PatternError::IdOutOfRange { id: 720, .. })
        ));
    }

    #[test]
    fn id_round_trip_all_2x3() {
        for id in 0..720 {
            let p = Pattern::from_id(2, 3, PatternId(id)).unwrap();
            assert_eq!(p.id().unwrap(), PatternId(id));
        }
    }

    #[test]
    fn transform_examples() {
        let p = Pattern::from_rows(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(p.transpose(), Pattern::from_rows(&[&[1, 3], &[2, 4]]).unwrap());
        assert_eq!(p.complement(), Pattern::from_rows(&[&[4, 3], &[2, 1]]).unwrap());
        let q = Pattern::from_rows(&[&[1, 2, 3], &[4, 5, 6]]).unwrap();
        assert_eq!(q.vflip(), Pattern::from_rows(&[&[4, 5, 6], &[1, 2, 3]]).unwrap());
    }

    #[test]
    fn transforms_are_involutions_on_all_2x3() {
        for p in enumerate_patterns(2, 3).unwrap() {
            assert_eq!(p.transpose().transpose(), p);
            assert_eq!(p.vflip().vflip(), p);
            assert_eq!(p.hflip().hflip(), p);
            assert_eq!(p.complement().complement(), p);
        }
    }

    #[test]
    fn transforms_permute_patterns() {
        use alloc::collections::BTreeSet;
        let ids: BTreeSet<u64> = enumerate_patterns(2, 3)
            .unwrap()
            .iter()
            .map(|p| p.vflip().id().unwrap().0)
            .collect();
        assert_eq!(ids.len(), 720);
    }

    #[test]
    fn invalid_patterns_rejected() {
        assert!(Pattern::new(2, 2, vec![1, 2, 3, 3]).is_err());
        assert!(Pattern::new(2, 2, vec![1, 2, 3, 5]).is_err());
        assert!(Pattern::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn generalized_validation() {
        // Paper-style example: [[2,3,*],[*,4,1]].
        let g = GeneralizedPattern::from_rows(&[&[2, 3, 0], &[0, 4, 1]]).unwrap();
        assert_eq!(g.constrained(), 4);
        assert_eq!(g.entry(0, 2), None);
        assert_eq!(g.entry(1, 1), Some(4));
        // Non-hole entries must be 1..=m.
        assert!(GeneralizedPattern::from_rows(&[&[1, 0], &[0, 3]]).is_err());
        // All-hole lines are rejected.
        assert!(matches!(
            GeneralizedPattern::from_rows(&[&[0, 0], &[1, 2]]),
            Err(PatternError::AllHoleRow(1))
        ));
        assert!(matches!(
            GeneralizedPattern::from_rows(&[&[0, 1], &[0, 2]]),
            Err(PatternError::AllHoleColumn(1))
        ));
    }

    #[test]
    fn cells_by_rank_orders_positions() {
        let g = GeneralizedPattern::from_rows(&[&[2, 3, 0], &[0, 4, 1]]).unwrap();
        assert_eq!(g.cells_by_rank(), vec![(1, 2), (0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn top_two_share_column_examples() {
        let same = Pattern::from_rows(&[&[1, 2, 5], &[3, 4, 6]]).unwrap();
        assert!(same.top_two_share_column());
        let rest = Pattern::from_rows(&[&[1, 2, 5], &[3, 6, 4]]).unwrap();
        assert!(!rest.top_two_share_column());
    }
}
