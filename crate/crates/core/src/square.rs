//! Latin squares: validation and the symmetry maps used by the density
//! identities.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SquareError {
    #[error("grid is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("symbol {value} at row {row}, column {col} is outside 1..={order}")]
    SymbolOutOfRange { row: usize, col: usize, value: u32, order: usize },
    #[error("row {0} repeats a symbol")]
    DuplicateInRow(usize),
    #[error("column {0} repeats a symbol")]
    DuplicateInColumn(usize),
}

/// An order-`n` Latin square over symbols `1..=n`, stored row-major.
///
/// Immutable after construction; every constructor checks the Latin
/// property, so a value of this type is always a valid square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    /// Validates a row-major grid of symbols in `1..=n`.
    ///
    /// Errors name the first offending row or column (1-based).
    pub fn new(order: usize, cells: Vec<u32>) -> Result<Self, SquareError> {
        if cells.len() != order * order {
            return Err(SquareError::NotSquare {
                row: cells.len() / order.max(1) + 1,
                len: cells.len() % order.max(1),
                order,
            });
        }
        let sq = Self { order, cells };
        let n = order;
        let mut seen = vec![false; n + 1];
        for r in 0..n {
            seen.fill(false);
            for c in 0..n {
                let v = sq.get(r, c);
                if v == 0 || v as usize > n {
                    return Err(SquareError::SymbolOutOfRange {
                        row: r + 1,
                        col: c + 1,
                        value: v,
                        order: n,
                    });
                }
                if seen[v as usize] {
                    return Err(SquareError::DuplicateInRow(r + 1));
                }
                seen[v as usize] = true;
            }
        }
        for c in 0..n {
            seen.fill(false);
            for r in 0..n {
                let v = sq.get(r, c);
                if seen[v as usize] {
                    return Err(SquareError::DuplicateInColumn(c + 1));
                }
                seen[v as usize] = true;
            }
        }
        Ok(sq)
    }

    /// Validates a grid given as rows.
    pub fn from_grid(grid: &[Vec<u32>]) -> Result<Self, SquareError> {
        let order = grid.len();
        for (r, row) in grid.iter().enumerate() {
            if row.len() != order {
                return Err(SquareError::NotSquare { row: r + 1, len: row.len(), order });
            }
        }
        Self::new(order, grid.concat())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Symbol at 0-based position `(r, c)`; symbols are 1-based.
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cells[r * self.order + c]
    }

    /// Row-major cells.
    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    #[inline]
    pub(crate) fn row(&self, r: usize) -> &[u32] {
        &self.cells[r * self.order..(r + 1) * self.order]
    }

    pub fn transpose(&self) -> LatinSquare {
        let n = self.order;
        let mut cells = vec![0u32; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[c * n + r] = self.get(r, c);
            }
        }
        LatinSquare { order: n, cells }
    }

    /// Reverses the row order.
    pub fn reverse_rows(&self) -> LatinSquare {
        let n = self.order;
        let mut cells = Vec::with_capacity(n * n);
        for r in (0..n).rev() {
            cells.extend_from_slice(self.row(r));
        }
        LatinSquare { order: n, cells }
    }

    /// Reverses the column order.
    pub fn reverse_cols(&self) -> LatinSquare {
        let n = self.order;
        let mut cells = Vec::with_capacity(n * n);
        for r in 0..n {
            cells.extend(self.row(r).iter().rev());
        }
        LatinSquare { order: n, cells }
    }

    /// Replaces every symbol `s` by `n + 1 - s`.
    pub fn complement_symbols(&self) -> LatinSquare {
        let top = self.order as u32 + 1;
        LatinSquare {
            order: self.order,
            cells: self.cells.iter().map(|&v| top - v).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one() {
        let sq = LatinSquare::from_grid(&[vec![1]]).unwrap();
        assert_eq!(sq.order(), 1);
    }

    #[test]
    fn cyclic_order_three_is_valid() {
        let sq =
            LatinSquare::from_grid(&[vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]).unwrap();
        assert_eq!(sq.get(1, 2), 1);
    }

    #[test]
    fn duplicate_in_column() {
        let err = LatinSquare::from_grid(&[vec![1, 2], vec![1, 2]]).unwrap_err();
        assert_eq!(err, SquareError::DuplicateInColumn(1));
    }

    #[test]
    fn duplicate_in_row() {
        let err = LatinSquare::from_grid(&[vec![1, 1], vec![2, 2]]).unwrap_err();
        assert_eq!(err, SquareError::DuplicateInRow(1));
    }

    #[test]
    fn not_square() {
        let err = LatinSquare::from_grid(&[vec![1, 2], vec![1]]).unwrap_err();
        assert!(matches!(err, SquareError::NotSquare { row: 2, len: 1, .. }));
    }

    #[test]
    fn symbol_out_of_range() {
        let err = LatinSquare::from_grid(&[vec![1, 2], vec![2, 3]]).unwrap_err();
        assert!(matches!(err, SquareError::SymbolOutOfRange { row: 2, col: 2, value: 3, .. }));
    }

    #[test]
    fn symmetry_maps_stay_latin() {
        let sq =
            LatinSquare::from_grid(&[vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]).unwrap();
        for t in [sq.transpose(), sq.reverse_rows(), sq.reverse_cols(), sq.complement_symbols()] {
            assert!(LatinSquare::new(t.order(), t.cells().to_vec()).is_ok());
        }
    }
}
