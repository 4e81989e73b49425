//! Exact pattern and generalized-pattern densities in a Latin square.
//!
//! The density of a `k x l` pattern is the probability that a uniformly
//! chosen sorted `k`-tuple of rows and sorted `l`-tuple of columns select a
//! submatrix order-isomorphic to the pattern. A selection whose submatrix
//! repeats a value is a tie and matches no pattern; tie mass is counted
//! separately rather than discarded so that the density sum stays auditable.
//!
//! [`exact_profile`] classifies every selection once into a histogram over
//! [`PatternId`] instead of matching the `(k*l)!` patterns one by one.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::pattern::{GeneralizedPattern, Pattern, PatternId, MAX_ENUM_CELLS, MAX_ID_CELLS};
use crate::ratio::{binomial, factorial_u64, Rational};
use crate::square::LatinSquare;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("k*l = {0} exceeds the profile ceiling of {1}")]
    TooLarge(usize, usize),
    #[error("selection space C(n,k)*C(n,l) exceeds the enumerable range")]
    SelectionSpaceTooLarge,
    #[error("a Monte Carlo estimate needs at least one sample")]
    ZeroSamples,
}

/// Result of ranking one selected submatrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderClass {
    /// All values distinct: the id of their rank pattern.
    Id(PatternId),
    /// A repeated value; the selection matches no pattern.
    Tie,
}

/// Ranks a row-major value grid. Values need not be grid-sized symbols;
/// only their relative order matters.
pub fn order_class(values: &[u32]) -> OrderClass {
    debug_assert!(values.len() <= MAX_ID_CELLS);
    let len = values.len();
    let mut rank = 0u64;
    for i in 0..len {
        let mut smaller_later = 0u64;
        for j in 0..len {
            if j != i && values[j] == values[i] {
                return OrderClass::Tie;
            }
            if j > i && values[j] < values[i] {
                smaller_later += 1;
            }
        }
        rank += smaller_later * factorial_u64((len - 1 - i) as u64);
    }
    OrderClass::Id(PatternId(rank))
}

/// Exact occurrence counts of every `k x l` pattern in one square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityProfile {
    order: usize,
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    ties: u64,
}

impl DensityProfile {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `C(n,k) * C(n,l)`, the number of selections.
    pub fn total(&self) -> BigUint {
        binomial(self.order as u64, self.rows as u64)
            * binomial(self.order as u64, self.cols as u64)
    }

    /// Number of selections whose submatrix repeats a value.
    pub fn ties(&self) -> u64 {
        self.ties
    }

    pub fn count(&self, id: PatternId) -> u64 {
        self.counts[id.0 as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Exact density `count / total`; zero when there are no selections.
    pub fn density(&self, id: PatternId) -> Rational {
        ratio_over(self.count(id), &self.total())
    }

    /// Densities for all ids in order.
    pub fn densities(&self) -> Vec<Rational> {
        let total = self.total();
        self.counts.iter().map(|&c| ratio_over(c, &total)).collect()
    }

    /// Fraction of selections that tie.
    pub fn tie_fraction(&self) -> Rational {
        ratio_over(self.ties, &self.total())
    }

    /// Densities conditioned on the selection having no repeated value
    /// (`count / (total - ties)`); the finite-square estimator of the
    /// tie-free limit densities.
    pub fn conditional_densities(&self) -> Vec<Rational> {
        let untied = self.total() - BigUint::from(self.ties);
        self.counts.iter().map(|&c| ratio_over(c, &untied)).collect()
    }
}

fn ratio_over(count: u64, total: &BigUint) -> Rational {
    if total.is_zero() {
        return Rational::zero();
    }
    Rational::new(BigInt::from(count), BigInt::from(total.clone()))
}

/// Classifies every selection of `k` rows and `l` columns into a pattern
/// histogram plus a tie count, in a single sweep.
pub fn exact_profile(
    sq: &LatinSquare,
    rows: usize,
    cols: usize,
) -> Result<DensityProfile, DensityError> {
    assert!(rows >= 1 && cols >= 1, "profile dimensions must be positive");
    let cells = rows * cols;
    if cells > MAX_ENUM_CELLS {
        return Err(DensityError::TooLarge(cells, MAX_ENUM_CELLS));
    }
    let n = sq.order();
    let mut counts = vec![0u64; factorial_u64(cells as u64) as usize];
    let mut ties = 0u64;
    if rows <= n && cols <= n {
        let total = binomial(n as u64, rows as u64) * binomial(n as u64, cols as u64);
        if total.to_u64().is_none() {
            return Err(DensityError::SelectionSpaceTooLarge);
        }
        if cells <= 6 {
            let table = comparison_mask_table(cells);
            for_each_selection(sq, rows, cols, |values| {
                match classify_by_mask(values, &table) {
                    OrderClass::Id(id) => counts[id.0 as usize] += 1,
                    OrderClass::Tie => ties += 1,
                }
            });
        } else {
            for_each_selection(sq, rows, cols, |values| match order_class(values) {
                OrderClass::Id(id) => counts[id.0 as usize] += 1,
                OrderClass::Tie => ties += 1,
            });
        }
        debug_assert_eq!(
            BigUint::from(counts.iter().sum::<u64>() + ties),
            total,
            "every selection classified exactly once"
        );
    }
    Ok(DensityProfile { order: n, rows, cols, counts, ties })
}

/// Exact density of one full pattern. Unlike [`exact_profile`] this places
/// no ceiling on `k*l`; it matches selections against the single pattern.
pub fn exact_density(sq: &LatinSquare, pattern: &Pattern) -> Rational {
    let n = sq.order();
    let (k, l) = (pattern.rows(), pattern.cols());
    if k > n || l > n {
        return Rational::zero();
    }
    let chain = pattern.to_generalized().cells_by_rank();
    let mut hits = 0u64;
    for_each_selection(sq, k, l, |values| {
        if chain_matches(values, l, &chain) {
            hits += 1;
        }
    });
    let total = binomial(n as u64, k as u64) * binomial(n as u64, l as u64);
    ratio_over(hits, &total)
}

/// Exact density of a generalized pattern: only non-hole cells constrain
/// the order, and a tie between two constrained cells violates it.
pub fn generalized_exact_density(sq: &LatinSquare, g: &GeneralizedPattern) -> Rational {
    let n = sq.order();
    let (k, l) = (g.rows(), g.cols());
    if k > n || l > n {
        return Rational::zero();
    }
    let chain = g.cells_by_rank();
    let mut hits = 0u64;
    for_each_selection(sq, k, l, |values| {
        if chain_matches(values, l, &chain) {
            hits += 1;
        }
    });
    let total = binomial(n as u64, k as u64) * binomial(n as u64, l as u64);
    ratio_over(hits, &total)
}

/// True when the selected values increase strictly along the rank chain.
#[inline]
pub(crate) fn chain_matches(values: &[u32], cols: usize, chain: &[(usize, usize)]) -> bool {
    let mut prev = 0u32;
    for &(r, c) in chain {
        let v = values[r * cols + c];
        if v <= prev {
            return false;
        }
        prev = v;
    }
    true
}

/// Visits every sorted row/column selection, passing the row-major value
/// grid of the selected submatrix.
pub(crate) fn for_each_selection(
    sq: &LatinSquare,
    rows: usize,
    cols: usize,
    mut visit: impl FnMut(&[u32]),
) {
    let n = sq.order();
    if rows > n || cols > n {
        return;
    }
    let mut row_idx: Vec<usize> = (0..rows).collect();
    let mut col_idx: Vec<usize> = (0..cols).collect();
    let mut values = vec![0u32; rows * cols];
    loop {
        // Restart the column odometer for this row selection.
        for (i, c) in col_idx.iter_mut().enumerate() {
            *c = i;
        }
        loop {
            for (a, &r) in row_idx.iter().enumerate() {
                let row = sq.row(r);
                for (b, &c) in col_idx.iter().enumerate() {
                    values[a * cols + b] = row[c];
                }
            }
            visit(&values);
            if !advance(&mut col_idx, n) {
                break;
            }
        }
        if !advance(&mut row_idx, n) {
            break;
        }
    }
}

/// Advances a sorted index combination to its lexicographic successor.
#[inline]
fn advance(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

const TIE_SENTINEL: u16 = u16::MAX;

/// Lookup from the pairwise less-than bitmask of a value grid to its
/// pattern id. Usable for grids of up to 6 cells (15 comparison bits).
fn comparison_mask_table(cells: usize) -> Vec<u16> {
    debug_assert!(cells <= 6);
    let pairs = cells * (cells - 1) / 2;
    let mut table = vec![TIE_SENTINEL; 1usize << pairs];
    let count = factorial_u64(cells as u64);
    for id in 0..count {
        let perm = Pattern::from_id(1, cells, PatternId(id)).unwrap();
        let seq = perm.entries();
        let mut mask = 0usize;
        let mut bit = 0;
        for i in 0..cells {
            for j in i + 1..cells {
                if seq[i] < seq[j] {
                    mask |= 1 << bit;
                }
                bit += 1;
            }
        }
        table[mask] = id as u16;
    }
    table
}

#[inline]
fn classify_by_mask(values: &[u32], table: &[u16]) -> OrderClass {
    let cells = values.len();
    let mut mask = 0usize;
    let mut tie = false;
    let mut bit = 0;
    for i in 0..cells {
        let vi = values[i];
        for &vj in &values[i + 1..cells] {
            mask |= ((vi < vj) as usize) << bit;
            tie |= vi == vj;
            bit += 1;
        }
    }
    if tie {
        OrderClass::Tie
    } else {
        OrderClass::Id(PatternId(table[mask] as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_cyclic;
    use crate::ratio::ratio;

    fn cyclic3() -> LatinSquare {
        gen_cyclic(3)
    }

    #[test]
    fn order_class_examples() {
        assert_eq!(order_class(&[1, 2, 2, 3]), OrderClass::Tie);
        let sorted = Pattern::from_rows(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(order_class(&[10, 20, 30, 40]), OrderClass::Id(sorted.id().unwrap()));
        let mixed = Pattern::from_rows(&[&[3, 1], &[2, 4]]).unwrap();
        assert_eq!(order_class(&[5, 1, 2, 9]), OrderClass::Id(mixed.id().unwrap()));
    }

    #[test]
    fn density_is_zero_beyond_order() {
        let sq = gen_cyclic(2);
        let p = Pattern::from_rows(&[&[1, 2, 3], &[4, 5, 6]]).unwrap();
        assert_eq!(exact_density(&sq, &p), Rational::zero());
    }

    #[test]
    fn singleton_pattern_density_is_one() {
        let p = Pattern::from_rows(&[&[1]]).unwrap();
        for n in [1usize, 3, 5] {
            assert_eq!(exact_density(&gen_cyclic(n), &p), ratio(1, 1));
        }
    }

    #[test]
    fn cyclic3_all_2x2_selections_tie() {
        let profile = exact_profile(&cyclic3(), 2, 2).unwrap();
        assert_eq!(profile.ties(), 9);
        assert_eq!(profile.total(), BigUint::from(9u32));
        assert!(profile.counts().iter().all(|&c| c == 0));
        let p = Pattern::from_rows(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(exact_density(&cyclic3(), &p), Rational::zero());
    }

    #[test]
    fn singleton_profile() {
        let profile = exact_profile(&cyclic3(), 1, 1).unwrap();
        assert_eq!(profile.ties(), 0);
        assert_eq!(profile.count(PatternId(0)), 9);
    }

    #[test]
    fn profile_total_arithmetic() {
        let profile = exact_profile(&gen_cyclic(10), 2, 3).unwrap();
        assert_eq!(profile.total(), BigUint::from(45u32 * 120u32));
        let mass: u64 = profile.counts().iter().sum::<u64>() + profile.ties();
        assert_eq!(BigUint::from(mass), profile.total());
    }

    #[test]
    fn profile_too_large() {
        assert!(matches!(
            exact_profile(&cyclic3(), 3, 4),
            Err(DensityError::TooLarge(12, _))
        ));
    }

    #[test]
    fn profile_agrees_with_single_pattern_density() {
        let sq = gen_cyclic(5);
        let profile = exact_profile(&sq, 2, 2).unwrap();
        for p in crate::pattern::enumerate_patterns(2, 2).unwrap() {
            assert_eq!(profile.density(p.id().unwrap()), exact_density(&sq, &p));
        }
    }

    #[test]
    fn generalized_matches_full_when_no_holes() {
        let sq = gen_cyclic(5);
        for p in crate::pattern::enumerate_patterns(2, 2).unwrap() {
            let g = p.to_generalized();
            assert_eq!(generalized_exact_density(&sq, &g), exact_density(&sq, &p));
        }
    }

    #[test]
    fn generalized_corner_example_on_cyclic3() {
        // [[1,*],[*,2]]: top-left strictly below bottom-right.
        let g = GeneralizedPattern::from_rows(&[&[1, 0], &[0, 2]]).unwrap();
        assert_eq!(generalized_exact_density(&cyclic3(), &g), ratio(2, 9));
    }

    #[test]
    fn single_constrained_cell_density_is_one() {
        let g = GeneralizedPattern::from_rows(&[&[1]]).unwrap();
        assert_eq!(generalized_exact_density(&cyclic3(), &g), ratio(1, 1));
    }
}
