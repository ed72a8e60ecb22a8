//! Syndrome former memory reduction for convolutional codes unwrapped from a
//! girth-certified QC exponent matrix.
//!
//! Each reduced entry `p_ij` may be replaced by `q_ij = p_ij + t_ij N` for any
//! offset `t_ij >= 0`; the memory order of the resulting monomial code is
//! `max q - min q`. A local search with random restarts looks for offsets that
//! shrink this spread while no relation of the certified length range sums to
//! exactly zero. An exhaustive mode over small offsets serves as an optimality
//! reference on small matrices.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code_model::{ConvCodeSpec, ExponentMatrix};
use crate::cycles::{cached_relations, girth_qc, Girth, RelationSet};
use crate::error::{Error, Result};

/// Offsets `t_ij` applied to a reduced exponent matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftAssignment {
    base: ExponentMatrix,
    offsets: Vec<u64>,
}

impl LiftAssignment {
    pub fn new(base: ExponentMatrix, offsets: Vec<u64>) -> Result<Self> {
        if base.lifting_degree().is_none() {
            return Err(Error::MissingLiftingDegree);
        }
        if offsets.len() != base.rows() * base.cols() {
            return Err(Error::DimensionMismatch {
                expected: base.rows() * base.cols(),
                found: offsets.len(),
            });
        }
        Ok(LiftAssignment { base, offsets })
    }

    pub fn identity(base: ExponentMatrix) -> Result<Self> {
        let offsets = vec![0; base.rows() * base.cols()];
        Self::new(base, offsets)
    }

    pub fn base(&self) -> &ExponentMatrix {
        &self.base
    }

    /// Row-major offsets.
    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn offset_rows(&self) -> Vec<Vec<u64>> {
        self.offsets
            .chunks(self.base.cols())
            .map(<[u64]>::to_vec)
            .collect()
    }

    /// Unreduced entries `q_ij = p_ij + t_ij N`.
    pub fn lifted(&self) -> ExponentMatrix {
        let n = self.base.lifting_degree().expect("checked on construction");
        let entries = lifted_entries(self.base.entries(), &self.offsets, n);
        ExponentMatrix::from_flat(self.base.rows(), self.base.cols(), entries, None)
            .expect("same shape")
    }

    /// Convolutional code with the lifted exponents, shifted to a zero
    /// minimum.
    pub fn to_conv_spec(&self) -> ConvCodeSpec {
        ConvCodeSpec::new(self.lifted())
    }

    pub fn memory_order(&self) -> u64 {
        let n = self.base.lifting_degree().expect("checked on construction");
        spread(&lifted_entries(self.base.entries(), &self.offsets, n))
    }
}

fn lifted_entries(base: &[u64], offsets: &[u64], n: u64) -> Vec<u64> {
    base.iter().zip(offsets).map(|(&p, &t)| p + t * n).collect()
}

fn spread(values: &[u64]) -> u64 {
    let max = values.iter().copied().max().unwrap_or(0);
    let min = values.iter().copied().min().unwrap_or(0);
    max - min
}

pub fn memory_order(spec: &ConvCodeSpec) -> u64 {
    spec.memory_order()
}

/// Smallest spread reachable by any offsets: `N` minus the widest circular
/// gap between the distinct residues.
pub fn spread_lower_bound(p: &ExponentMatrix) -> Result<u64> {
    let n = p.lifting_degree().ok_or(Error::MissingLiftingDegree)?;
    let mut residues = p.entries().to_vec();
    residues.sort_unstable();
    residues.dedup();
    if residues.len() <= 1 {
        return Ok(0);
    }
    let wrap = residues[0] + n - residues[residues.len() - 1];
    let widest = residues
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(wrap, u64::max);
    Ok(n - widest)
}

/// Incremental exact-sum bookkeeping for every relation up to the certified
/// length, indexed by matrix cell.
struct Certifier {
    sums: Vec<i64>,
    // per cell: (relation index, net coefficient of that cell)
    by_cell: Arc<Vec<Vec<(u32, i32)>>>,
}

fn cell_index(set: &RelationSet, cols: usize) -> Vec<Vec<(u32, i32)>> {
    let mut by_cell: Vec<Vec<(u32, i32)>> = vec![Vec::new(); set.rows() * cols];
    for (idx, r) in set.iter().enumerate() {
        let mut local: Vec<(usize, i32)> = Vec::new();
        for (plus, minus) in r.terms() {
            for (cell, sign) in [(plus.0 * cols + plus.1, 1), (minus.0 * cols + minus.1, -1)] {
                match local.iter_mut().find(|(c, _)| *c == cell) {
                    Some(entry) => entry.1 += sign,
                    None => local.push((cell, sign)),
                }
            }
        }
        for (cell, coeff) in local {
            if coeff != 0 {
                by_cell[cell].push((idx as u32, coeff));
            }
        }
    }
    by_cell
}

impl Certifier {
    fn new(set: &RelationSet, by_cell: Arc<Vec<Vec<(u32, i32)>>>, q: &ExponentMatrix) -> Self {
        let sums = set
            .iter()
            .map(|r| r.sum(q).expect("relation fits matrix"))
            .collect();
        Certifier { sums, by_cell }
    }

    fn sound(&self) -> bool {
        self.sums.iter().all(|&s| s != 0)
    }

    /// Applies `delta` to every cell in `cells`; reverts and returns false if
    /// some relation sum becomes exactly zero.
    fn try_shift(&mut self, cells: &[usize], delta: i64) -> bool {
        self.apply(cells, delta);
        let ok = cells.iter().all(|&c| {
            self.by_cell[c]
                .iter()
                .all(|&(r, _)| self.sums[r as usize] != 0)
        });
        if !ok {
            self.apply(cells, -delta);
        }
        ok
    }

    fn apply(&mut self, cells: &[usize], delta: i64) {
        for &c in cells {
            for &(r, coeff) in &self.by_cell[c] {
                self.sums[r as usize] += coeff as i64 * delta;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    /// Total number of candidate moves across all restarts.
    pub budget: u64,
    /// Stop after this many consecutive restarts without improvement.
    pub patience: u64,
    /// Largest offset drawn for a random restart.
    pub max_start_offset: u64,
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            budget: 1_000_000,
            patience: 256,
            max_start_offset: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryMinimization {
    pub best: LiftAssignment,
    pub memory_order: u64,
    /// Memory order of the identity lift.
    pub initial_memory_order: u64,
    /// Spread no lift can beat; the search stops early when it is reached.
    pub lower_bound: u64,
    /// Incumbent memory order after each restart.
    pub history: Vec<u64>,
    pub moves: u64,
    pub restarts: u64,
}

struct Descent {
    offsets: Vec<u64>,
    spread: u64,
    moves: u64,
}

/// Steepest descent on the spread: repeatedly lower every maximal entry by
/// `N` or raise every minimal entry by `N`, whichever shrinks the spread
/// more, as long as certification passes.
fn descend(
    base: &[u64],
    mut offsets: Vec<u64>,
    n: u64,
    certifier: &mut Certifier,
    move_cap: u64,
) -> Descent {
    let mut q = lifted_entries(base, &offsets, n);
    let mut moves = 0;
    while moves < move_cap {
        let max = *q.iter().max().expect("non-empty");
        let min = *q.iter().min().expect("non-empty");
        let current = max - min;
        let top: Vec<usize> = (0..q.len()).filter(|&i| q[i] == max).collect();
        let bottom: Vec<usize> = (0..q.len()).filter(|&i| q[i] == min).collect();

        let mut candidates: Vec<(u64, bool)> = Vec::with_capacity(2);
        if top.iter().all(|&i| offsets[i] > 0) {
            let new_max = (0..q.len())
                .map(|i| if q[i] == max { q[i] - n } else { q[i] })
                .max()
                .expect("non-empty");
            let new_min = min.min(max - n);
            candidates.push((new_max - new_min, true));
        }
        {
            let new_min = (0..q.len())
                .map(|i| if q[i] == min { q[i] + n } else { q[i] })
                .min()
                .expect("non-empty");
            let new_max = max.max(min + n);
            candidates.push((new_max - new_min, false));
        }
        candidates.sort_by_key(|&(s, lower)| (s, !lower));

        let mut accepted = false;
        for (new_spread, lower) in candidates {
            if moves >= move_cap || new_spread >= current {
                break;
            }
            moves += 1;
            let (cells, delta) = if lower {
                (&top, -(n as i64))
            } else {
                (&bottom, n as i64)
            };
            if certifier.try_shift(cells, delta) {
                for &i in cells {
                    if lower {
                        offsets[i] -= 1;
                        q[i] -= n;
                    } else {
                        offsets[i] += 1;
                        q[i] += n;
                    }
                }
                accepted = true;
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    // a uniform offset carries no information
    let floor = offsets.iter().copied().min().unwrap_or(0);
    offsets.iter_mut().for_each(|t| *t -= floor);
    Descent {
        spread: spread(&q),
        offsets,
        moves,
    }
}

fn check_certified(p: &ExponentMatrix, max_half: usize) -> Result<()> {
    let report = girth_qc(p, max_half)?;
    match report.girth {
        Girth::Exact(length) => Err(Error::NotCertified { length }),
        _ => Ok(()),
    }
}

/// Reduces the memory order of the convolutional code unwrapped from `p`.
///
/// `p` must carry a lifting degree and have no cycle of length up to
/// `2 * max_half` mod `N`. The first trial is the identity lift, so the result
/// never exceeds its memory order; later trials start from random offsets in
/// `0..=max_start_offset`. Results are deterministic for a fixed seed, whatever
/// the thread count.
pub fn minimize_memory(
    p: &ExponentMatrix,
    max_half: usize,
    options: &MinimizeOptions,
) -> Result<MemoryMinimization> {
    let n = p.lifting_degree().ok_or(Error::MissingLiftingDegree)?;
    check_certified(p, max_half)?;
    let set = cached_relations(p.rows(), p.cols(), max_half)?;
    let by_cell = Arc::new(cell_index(&set, p.cols()));
    let lower_bound = spread_lower_bound(p)?;
    let cells = p.rows() * p.cols();
    let move_cap = (8 * cells as u64).max(16);

    let run = |restart: u64, cap: u64| -> Descent {
        let offsets: Vec<u64> = if restart == 0 {
            vec![0; cells]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(restart);
            (0..cells)
                .map(|_| rng.gen_range(0..=options.max_start_offset))
                .collect()
        };
        let q = ExponentMatrix::from_flat(
            p.rows(),
            p.cols(),
            lifted_entries(p.entries(), &offsets, n),
            None,
        )
        .expect("same shape");
        let mut certifier = Certifier::new(&set, Arc::clone(&by_cell), &q);
        if !certifier.sound() {
            return Descent {
                spread: u64::MAX,
                offsets,
                moves: 0,
            };
        }
        descend(p.entries(), offsets, n, &mut certifier, cap)
    };

    let initial = spread(p.entries());
    let mut best_offsets = vec![0; cells];
    let mut best = initial;
    let mut history = Vec::new();
    let mut moves = 0u64;
    let mut restarts = 0u64;
    let mut stale = 0u64;
    let batch = 8 * rayon::current_num_threads().max(1) as u64;

    'outer: while moves < options.budget.max(1) && best > lower_bound {
        let cap = move_cap.min(options.budget.max(1) - moves);
        let indices: Vec<u64> = (restarts..restarts + batch).collect();
        let results: Vec<Descent> = indices.par_iter().map(|&i| run(i, cap)).collect();
        for result in results {
            restarts += 1;
            moves += result.moves.max(1);
            if result.spread < best {
                best = result.spread;
                best_offsets = result.offsets;
                stale = 0;
            } else {
                stale += 1;
            }
            history.push(best);
            if best <= lower_bound || stale >= options.patience || moves >= options.budget.max(1) {
                break 'outer;
            }
        }
    }

    let best_lift = LiftAssignment::new(p.clone(), best_offsets)?;
    Ok(MemoryMinimization {
        memory_order: best_lift.memory_order(),
        best: best_lift,
        initial_memory_order: initial,
        lower_bound,
        history,
        moves,
        restarts,
    })
}

/// Exhaustive search over offsets `0..=max_offset` per entry. Only for small
/// matrices (`m n <= 12`). Returns the certified lift with the smallest
/// memory order, preferring the lexicographically smallest offsets on ties.
pub fn minimize_memory_exact(
    p: &ExponentMatrix,
    max_half: usize,
    max_offset: u64,
) -> Result<LiftAssignment> {
    let n = p.lifting_degree().ok_or(Error::MissingLiftingDegree)?;
    let cells = p.rows() * p.cols();
    if cells > 12 {
        return Err(Error::InvalidConfig(format!(
            "exhaustive memory search needs m n <= 12, got {cells}"
        )));
    }
    check_certified(p, max_half)?;
    let set = cached_relations(p.rows(), p.cols(), max_half)?;
    let base = p.entries();
    let radix = max_offset + 1;
    let total = radix.pow(cells as u32);

    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut offsets = vec![0u64; cells];
    for code in 0..total {
        let mut rem = code;
        for t in offsets.iter_mut().rev() {
            *t = rem % radix;
            rem /= radix;
        }
        let q = lifted_entries(base, &offsets, n);
        let s = spread(&q);
        if best.as_ref().is_some_and(|(b, _)| s >= *b) {
            continue;
        }
        let lifted = ExponentMatrix::from_flat(p.rows(), p.cols(), q, None)?;
        if set.iter().all(|r| r.sum_unchecked(&lifted) != 0) {
            best = Some((s, offsets.clone()));
        }
    }
    let (_, offsets) = best.ok_or(Error::NotCertified { length: 0 })?;
    LiftAssignment::new(p.clone(), offsets)
}

/// Compactness figure of one design: lifting degree of a block code or
/// memory order of a convolutional code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    LiftingDegree(u64),
    MemoryOrder(u64),
}

/// Latency/complexity ratio of a new design over a reference:
/// `N_new / N_ref` for block codes, `(m_new + 1) / (m_ref + 1)` for
/// convolutional codes.
pub fn theta_ratio(new: Compactness, reference: Compactness) -> Result<f64> {
    match (new, reference) {
        (Compactness::LiftingDegree(a), Compactness::LiftingDegree(b)) if b > 0 => {
            Ok(a as f64 / b as f64)
        }
        (Compactness::MemoryOrder(a), Compactness::MemoryOrder(b)) => {
            Ok((a + 1) as f64 / (b + 1) as f64)
        }
        _ => Err(Error::InvalidConfig(
            "theta ratio needs two values of the same kind".into(),
        )),
    }
}

pub fn theta_n(new: u64, reference: u64) -> Result<f64> {
    theta_ratio(
        Compactness::LiftingDegree(new),
        Compactness::LiftingDegree(reference),
    )
}

pub fn theta_mh(new: u64, reference: u64) -> f64 {
    (new + 1) as f64 / (reference + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::girth_conv;

    fn matrix(rows: Vec<Vec<u64>>, n: u64) -> ExponentMatrix {
        ExponentMatrix::new(rows, Some(n)).unwrap()
    }

    #[test]
    fn memory_order_of_spec() {
        let spec =
            ConvCodeSpec::new(ExponentMatrix::new(vec![vec![3, 3], vec![3, 3]], None).unwrap());
        assert_eq!(memory_order(&spec), 0);
    }

    #[test]
    fn lift_arithmetic() {
        let lift =
            LiftAssignment::new(matrix(vec![vec![0, 6], vec![1, 5]], 7), vec![1, 0, 1, 0]).unwrap();
        assert_eq!(lift.lifted().to_rows(), vec![vec![7, 6], vec![8, 5]]);
        assert_eq!(lift.memory_order(), 3);
        assert_eq!(
            lift.to_conv_spec().exponents().to_rows(),
            vec![vec![2, 1], vec![3, 0]]
        );
        assert!(LiftAssignment::new(matrix(vec![vec![0]], 7), vec![]).is_err());
    }

    #[test]
    fn lower_bound_from_gaps() {
        assert_eq!(
            spread_lower_bound(&matrix(vec![vec![0, 6], vec![1, 5]], 7)).unwrap(),
            3
        );
        assert_eq!(spread_lower_bound(&matrix(vec![vec![4, 4]], 7)).unwrap(), 0);
        assert_eq!(
            spread_lower_bound(&matrix(vec![vec![0, 1], vec![0, 2]], 3)).unwrap(),
            2
        );
    }

    #[test]
    fn two_by_two_keeps_identity() {
        let p = matrix(vec![vec![0, 0], vec![0, 1]], 2);
        let result = minimize_memory(&p, 2, &MinimizeOptions::default()).unwrap();
        assert_eq!(result.memory_order, 1);
        assert!(result.best.offsets().iter().all(|&t| t == 0));
    }

    #[test]
    fn rejects_uncertified_input() {
        let p = matrix(vec![vec![0, 0], vec![0, 0]], 5);
        assert_eq!(
            minimize_memory(&p, 2, &MinimizeOptions::default()).unwrap_err(),
            Error::NotCertified { length: 4 }
        );
        assert!(
            minimize_memory_exact(&ExponentMatrix::zeros(4, 4, Some(9)).unwrap(), 2, 2).is_err()
        );
    }

    #[test]
    fn wraps_entries_near_n() {
        // residues {0, 1, 8, 9} mod 10: lifting the small ones gives spread 3
        let p = matrix(vec![vec![0, 9], vec![1, 8]], 10);
        let result = minimize_memory(&p, 2, &MinimizeOptions::default()).unwrap();
        assert_eq!(result.initial_memory_order, 9);
        assert_eq!(result.memory_order, 3);
        assert!(girth_conv(&result.best.to_conv_spec(), 2)
            .unwrap()
            .girth
            .at_least(6));
        let exact = minimize_memory_exact(&p, 2, 2).unwrap();
        assert_eq!(exact.memory_order(), 3);
    }

    #[test]
    fn history_is_monotone() {
        let p = matrix(vec![vec![0, 9, 3], vec![1, 8, 5]], 10);
        let options = MinimizeOptions {
            seed: 3,
            patience: 20,
            ..Default::default()
        };
        let result = minimize_memory(&p, 2, &options).unwrap();
        assert!(result.history.windows(2).all(|w| w[1] <= w[0]));
        assert!(result.memory_order <= result.initial_memory_order);
    }

    #[test]
    fn table_ratios() {
        let round = |x: f64| (x * 100.0).round() / 100.0;
        assert_eq!(round(theta_mh(44, 53)), 0.83);
        assert_eq!(round(theta_mh(165, 220)), 0.75);
        assert_eq!(round(theta_mh(44, 88)), 0.51);
        assert_eq!(round(theta_mh(165, 432)), 0.38);
        assert_eq!(theta_mh(7, 7), 1.0);
        assert_eq!(theta_n(127, 254).unwrap(), 0.5);
        assert!(theta_ratio(Compactness::LiftingDegree(3), Compactness::MemoryOrder(3)).is_err());
        assert!(theta_n(3, 0).is_err());
    }
}
