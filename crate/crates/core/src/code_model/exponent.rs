use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid of circulant shift exponents, optionally tied to a lifting degree.
///
/// With a lifting degree set, every entry is reduced (`0 <= p < N`) and the
/// matrix describes a QC-LDPC block code. Without one, the entries are treated
/// as unreduced monomial exponents of a convolutional code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawExponentMatrix", into = "RawExponentMatrix")]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
    lifting_degree: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawExponentMatrix {
    m: usize,
    n: usize,
    #[serde(rename = "N")]
    lifting_degree: Option<u64>,
    entries: Vec<Vec<u64>>,
}

impl TryFrom<RawExponentMatrix> for ExponentMatrix {
    type Error = Error;

    fn try_from(raw: RawExponentMatrix) -> Result<Self> {
        let matrix = ExponentMatrix::new(raw.entries, raw.lifting_degree)?;
        if matrix.rows != raw.m || matrix.cols != raw.n {
            return Err(Error::DimensionMismatch {
                expected: raw.m * raw.n,
                found: matrix.rows * matrix.cols,
            });
        }
        Ok(matrix)
    }
}

impl From<ExponentMatrix> for RawExponentMatrix {
    fn from(p: ExponentMatrix) -> Self {
        RawExponentMatrix {
            m: p.rows,
            n: p.cols,
            lifting_degree: p.lifting_degree,
            entries: p.to_rows(),
        }
    }
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u64>>, lifting_degree: Option<u64>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(Error::EmptyMatrix { rows: m, cols: n });
        }
        let mut entries = Vec::with_capacity(m * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRows {
                    row: i,
                    found: row.len(),
                    expected: n,
                });
            }
            entries.extend(row);
        }
        Self::from_flat(m, n, entries, lifting_degree)
    }

    pub fn from_flat(
        rows: usize,
        cols: usize,
        entries: Vec<u64>,
        lifting_degree: Option<u64>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(n) = lifting_degree {
            if n == 0 {
                return Err(Error::ZeroLiftingDegree);
            }
            if let Some(idx) = entries.iter().position(|&p| p >= n) {
                return Err(Error::EntryOutOfRange {
                    row: idx / cols,
                    col: idx % cols,
                    value: entries[idx],
                    lifting_degree: n,
                });
            }
        }
        Ok(ExponentMatrix {
            rows,
            cols,
            entries,
            lifting_degree,
        })
    }

    pub fn zeros(rows: usize, cols: usize, lifting_degree: Option<u64>) -> Result<Self> {
        Self::from_flat(rows, cols, vec![0; rows * cols], lifting_degree)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lifting_degree(&self) -> Option<u64> {
        self.lifting_degree
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.cols + col]
    }

    pub fn column(&self, col: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.cols)
            .map(<[u64]>::to_vec)
            .collect()
    }

    /// Block length `n * N` of the lifted code.
    pub fn code_length(&self) -> Option<u64> {
        self.lifting_degree.map(|n| n * self.cols as u64)
    }

    /// Same grid viewed as unreduced exponents; the lifting degree is dropped.
    pub fn unreduced(&self) -> ExponentMatrix {
        ExponentMatrix {
            lifting_degree: None,
            ..self.clone()
        }
    }

    /// Reduces every entry mod `n` and attaches `n` as the lifting degree.
    pub fn reduced(&self, n: u64) -> Result<ExponentMatrix> {
        if n == 0 {
            return Err(Error::ZeroLiftingDegree);
        }
        let entries = self.entries.iter().map(|&p| p % n).collect();
        Self::from_flat(self.rows, self.cols, entries, Some(n))
    }

    pub fn max_entry(&self) -> u64 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn min_entry(&self) -> u64 {
        self.entries.iter().copied().min().unwrap_or(0)
    }
}
