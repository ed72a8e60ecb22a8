use crate::error::{Error, Result};

/// Sparse binary parity-check matrix, stored as sorted adjacency lists in both
/// directions (checks to bits and bits to checks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryParityCheck {
    row_count: usize,
    col_count: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl BinaryParityCheck {
    /// Builds a matrix from `(row, col)` positions of ones. Duplicates collapse.
    pub fn from_positions<I>(row_count: usize, col_count: usize, positions: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rows = vec![Vec::new(); row_count];
        for (r, c) in positions {
            if r >= row_count || c >= col_count {
                return Err(Error::RelationOutOfBounds {
                    row: r,
                    col: c,
                    rows: row_count,
                    cols: col_count,
                });
            }
            rows[r].push(c);
        }
        for row in &mut rows {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self::from_sorted_rows(row_count, col_count, rows))
    }

    fn from_sorted_rows(row_count: usize, col_count: usize, rows: Vec<Vec<usize>>) -> Self {
        let mut cols = vec![Vec::new(); col_count];
        for (r, row) in rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        BinaryParityCheck {
            row_count,
            col_count,
            rows,
            cols,
        }
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn col_count(&self) -> usize {
        self.col_count
    }

    /// Column indices of the ones in check row `r`, ascending.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    /// Row indices of the ones in bit column `c`, ascending.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.cols[c]
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.rows
            .get(r)
            .is_some_and(|row| row.binary_search(&c).is_ok())
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&c| (r, c)))
    }

    pub fn row_weights(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(Vec::len)
    }

    pub fn col_weights(&self) -> impl Iterator<Item = usize> + '_ {
        self.cols.iter().map(Vec::len)
    }

    /// Parity of each check applied to `bits`.
    pub fn syndrome(&self, bits: &[bool]) -> Result<Vec<bool>> {
        if bits.len() != self.col_count {
            return Err(Error::DimensionMismatch {
                expected: self.col_count,
                found: bits.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(false, |acc, &c| acc ^ bits[c]))
            .collect())
    }

    pub fn is_codeword(&self, bits: &[bool]) -> Result<bool> {
        Ok(self.syndrome(bits)?.iter().all(|&s| !s))
    }

    /// The `rows x cols` top-left corner of this matrix.
    pub fn top_left(&self, rows: usize, cols: usize) -> BinaryParityCheck {
        let rows = rows.min(self.row_count);
        let cols = cols.min(self.col_count);
        let kept = self.rows[..rows]
            .iter()
            .map(|row| row.iter().copied().take_while(|&c| c < cols).collect())
            .collect();
        Self::from_sorted_rows(rows, cols, kept)
    }

    /// Dense rendering, mostly for small matrices in tests and debugging.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut dense = vec![vec![0u8; self.col_count]; self.row_count];
        for (r, c) in self.positions() {
            dense[r][c] = 1;
        }
        dense
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_consistent() {
        let h = BinaryParityCheck::from_positions(2, 3, [(0, 2), (0, 0), (1, 1), (0, 0)]).unwrap();
        assert_eq!(h.row(0), &[0, 2]);
        assert_eq!(h.col(1), &[1]);
        assert_eq!(h.ones(), 3);
        assert!(h.contains(0, 2));
        assert!(!h.contains(1, 2));
        assert!(!h.contains(7, 0));
    }

    #[test]
    fn syndrome_and_errors() {
        let h = BinaryParityCheck::from_positions(1, 2, [(0, 0), (0, 1)]).unwrap();
        assert!(h.is_codeword(&[true, true]).unwrap());
        assert!(!h.is_codeword(&[true, false]).unwrap());
        assert!(h.syndrome(&[true]).is_err());
        assert!(BinaryParityCheck::from_positions(1, 1, [(0, 1)]).is_err());
    }

    #[test]
    fn top_left_truncates() {
        let h = BinaryParityCheck::from_positions(3, 3, [(0, 0), (1, 2), (2, 1), (0, 2)]).unwrap();
        let t = h.top_left(2, 2);
        assert_eq!(t.to_dense(), vec![vec![1, 0], vec![0, 0]]);
    }
}
