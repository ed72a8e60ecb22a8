use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::code_model::ExponentMatrix;
use crate::error::{Error, Result};

pub const MIN_HALF_LENGTH: usize = 2;
pub const MAX_HALF_LENGTH: usize = 6;

/// A candidate cycle: a closed path alternating between exponent-matrix rows
/// and columns, written as `(row m_i, column n_i)` pairs with `n_k = n_0`.
///
/// Check row `m_i` joins columns `n_i` and `n_{i+1}`, so the path contributes
/// `p[m_i][n_i] - p[m_i][n_{i+1}]` per step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleRelation {
    path: Vec<(usize, usize)>,
}

impl CycleRelation {
    /// Validates the adjacency constraints: consecutive rows differ along the
    /// path and consecutive columns differ including the closing step.
    /// The closing row pair `(m_{k-1}, m_0)` may coincide.
    pub fn new(path: Vec<(usize, usize)>) -> Result<Self> {
        let k = path.len();
        if k < 2 {
            return Err(Error::InvalidConfig(format!(
                "a relation needs at least 2 steps, got {k}"
            )));
        }
        for i in 0..k {
            let (m_i, n_i) = path[i];
            let (m_next, n_next) = path[(i + 1) % k];
            if n_i == n_next || (i + 1 < k && m_i == m_next) {
                return Err(Error::InvalidConfig(format!(
                    "relation step {i} repeats an adjacent index: {path:?}"
                )));
            }
        }
        Ok(CycleRelation { path })
    }

    pub fn path(&self) -> &[(usize, usize)] {
        &self.path
    }

    /// `k`, the number of row/column steps.
    pub fn half_length(&self) -> usize {
        self.path.len()
    }

    /// Tanner-graph length `2k`.
    pub fn length(&self) -> usize {
        2 * self.path.len()
    }

    pub fn max_column(&self) -> usize {
        self.path.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }

    pub fn max_row(&self) -> usize {
        self.path.iter().map(|&(r, _)| r).max().unwrap_or(0)
    }

    pub fn touches_column(&self, col: usize) -> bool {
        self.path.iter().any(|&(_, c)| c == col)
    }

    /// Signed cells: each step adds `plus` and subtracts `minus`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), (usize, usize))> + '_ {
        let k = self.path.len();
        (0..k).map(move |i| {
            let (m, n) = self.path[i];
            let n_next = self.path[(i + 1) % k].1;
            ((m, n), (m, n_next))
        })
    }

    /// Exact integer value of the alternating sum for `p`.
    pub fn sum(&self, p: &ExponentMatrix) -> Result<i64> {
        if self.max_row() >= p.rows() || self.max_column() >= p.cols() {
            let &(row, col) = self
                .path
                .iter()
                .find(|&&(r, c)| r >= p.rows() || c >= p.cols())
                .expect("some index is out of bounds");
            return Err(Error::RelationOutOfBounds {
                row,
                col,
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        Ok(self.sum_unchecked(p))
    }

    #[inline]
    pub(crate) fn sum_unchecked(&self, p: &ExponentMatrix) -> i64 {
        self.terms()
            .map(|(a, b)| p.get(a.0, a.1) as i64 - p.get(b.0, b.1) as i64)
            .sum()
    }

    /// The path traversed in the opposite direction (negates the sum).
    pub fn reversed(&self) -> Vec<(usize, usize)> {
        let k = self.path.len();
        (0..k)
            .map(|i| (self.path[k - 1 - i].0, self.path[(k - i) % k].1))
            .collect()
    }

    /// Lexicographically smallest path among all rotations and both
    /// directions. Two relations describe the same closed path iff their keys
    /// agree.
    pub fn canonical_key(&self) -> Vec<(usize, usize)> {
        canonical_key(&self.path)
    }
}

fn canonical_key(path: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let k = path.len();
    let rev: Vec<(usize, usize)> = (0..k)
        .map(|i| (path[k - 1 - i].0, path[(k - i) % k].1))
        .collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    for seq in [path, rev.as_slice()] {
        for shift in 0..k {
            let candidate: Vec<_> = (0..k).map(|i| seq[(i + shift) % k]).collect();
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.unwrap_or_default()
}

/// Every relation of length `4..=2k` over a set of columns, one
/// representative per closed path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    rows: usize,
    columns: Vec<usize>,
    max_half_length: usize,
    relations: Vec<CycleRelation>,
    // prefix boundaries: relations[..by_half[h]] have half length <= h
    by_half: Vec<usize>,
}

impl RelationSet {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn max_half_length(&self) -> usize {
        self.max_half_length
    }

    /// Relations ordered by length, then lexicographically by path.
    pub fn relations(&self) -> &[CycleRelation] {
        &self.relations
    }

    /// Relations of half length at most `k`.
    pub fn up_to(&self, k: usize) -> &[CycleRelation] {
        let k = k.min(self.max_half_length);
        &self.relations[..self.by_half.get(k).copied().unwrap_or(0)]
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CycleRelation> {
        self.relations.iter()
    }

    /// Largest `|sum|` over the set, the quantity that a lifting degree must
    /// exceed for every relation to be nonzero mod `N`.
    pub fn max_abs_sum(&self, p: &ExponentMatrix) -> Result<i64> {
        self.relations
            .iter()
            .try_fold(0i64, |acc, r| Ok(acc.max(r.sum(p)?.abs())))
    }
}

impl<'a> IntoIterator for &'a RelationSet {
    type Item = &'a CycleRelation;
    type IntoIter = std::slice::Iter<'a, CycleRelation>;

    fn into_iter(self) -> Self::IntoIter {
        self.relations.iter()
    }
}

fn check_half_length(k: usize) -> Result<()> {
    if (MIN_HALF_LENGTH..=MAX_HALF_LENGTH).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedHalfLength(k))
    }
}

/// Enumerates every closed alternating path of length `4..=2k` over `rows`
/// rows and the given columns.
pub fn enumerate_relations(rows: usize, columns: &[usize], k: usize) -> Result<RelationSet> {
    check_half_length(k)?;
    let mut cols = columns.to_vec();
    cols.sort_unstable();
    cols.dedup();

    let mut relations = Vec::new();
    let mut by_half = vec![0; k + 1];
    if rows >= 2 && cols.len() >= 2 {
        let mut seen = HashSet::new();
        let mut path = Vec::with_capacity(k);
        for (half, end) in by_half.iter_mut().enumerate().skip(MIN_HALF_LENGTH) {
            let start = relations.len();
            extend_paths(rows, &cols, half, &mut path, &mut seen, &mut relations);
            relations[start..].sort();
            *end = relations.len();
        }
    }
    Ok(RelationSet {
        rows,
        columns: cols,
        max_half_length: k,
        relations,
        by_half,
    })
}

fn extend_paths(
    rows: usize,
    cols: &[usize],
    half: usize,
    path: &mut Vec<(usize, usize)>,
    seen: &mut HashSet<Vec<(usize, usize)>>,
    out: &mut Vec<CycleRelation>,
) {
    if path.len() == half {
        if path[half - 1].1 != path[0].1 && seen.insert(canonical_key(path)) {
            out.push(CycleRelation { path: path.clone() });
        }
        return;
    }
    let prev = path.last().copied();
    for r in 0..rows {
        if prev.is_some_and(|(pr, _)| pr == r) {
            continue;
        }
        for &c in cols {
            if prev.is_some_and(|(_, pc)| pc == c) {
                continue;
            }
            path.push((r, c));
            extend_paths(rows, cols, half, path, seen, out);
            path.pop();
        }
    }
}

type CacheKey = (usize, usize, usize);

/// Relation set over columns `0..cols`, computed once per `(rows, cols, k)`
/// and shared afterwards.
pub fn cached_relations(rows: usize, cols: usize, k: usize) -> Result<Arc<RelationSet>> {
    check_half_length(k)?;
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<RelationSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(set) = cache
        .lock()
        .expect("relation cache poisoned")
        .get(&(rows, cols, k))
    {
        return Ok(Arc::clone(set));
    }
    let columns: Vec<usize> = (0..cols).collect();
    let set = Arc::new(enumerate_relations(rows, &columns, k)?);
    cache
        .lock()
        .expect("relation cache poisoned")
        .entry((rows, cols, k))
        .or_insert_with(|| Arc::clone(&set));
    Ok(set)
}

pub fn cycle_sum(p: &ExponentMatrix, r: &CycleRelation) -> Result<i64> {
    r.sum(p)
}
