//! Sequentially multiplied column (SMC) exponent matrices and the greedy
//! search that picks their base column and multipliers.
//!
//! An SMC matrix has columns `0, P1, g_2 * P1, ..., g_{n-1} * P1` (products
//! taken mod `N`), where `P1 = (0, 1, p_2, ..., p_{m-1})` is strictly
//! increasing and `2 <= g_2 < g_3 < ... <= N - 1`. Only `m + n - 4` values are
//! free: `m - 2` entries of `P1` and `n - 2` multipliers.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code_model::ExponentMatrix;
use crate::cycles::{cached_relations, enumerate_relations, CycleRelation, RelationSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmcSpec {
    base_column: Vec<u64>,
    multipliers: Vec<u64>,
    #[serde(rename = "N")]
    lifting_degree: u64,
}

impl SmcSpec {
    pub fn new(base_column: Vec<u64>, multipliers: Vec<u64>, lifting_degree: u64) -> Result<Self> {
        validate_base_column(&base_column, lifting_degree)?;
        if let Some(&g) = multipliers.iter().find(|&&g| g < 2 || g >= lifting_degree) {
            return Err(Error::InvalidSmc(format!(
                "multiplier {g} outside [2, {}]",
                lifting_degree.saturating_sub(1)
            )));
        }
        if multipliers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSmc(
                "multipliers must be strictly increasing".into(),
            ));
        }
        Ok(SmcSpec {
            base_column,
            multipliers,
            lifting_degree,
        })
    }

    pub fn base_column(&self) -> &[u64] {
        &self.base_column
    }

    /// `g_2 .. g_{n-1}`.
    pub fn multipliers(&self) -> &[u64] {
        &self.multipliers
    }

    pub fn lifting_degree(&self) -> u64 {
        self.lifting_degree
    }

    pub fn rows(&self) -> usize {
        self.base_column.len()
    }

    pub fn cols(&self) -> usize {
        self.multipliers.len() + 2
    }

    /// Multiplier of column `j`, with `g_0 = 0` and `g_1 = 1`.
    pub fn column_multiplier(&self, j: usize) -> u64 {
        match j {
            0 => 0,
            1 => 1,
            _ => self.multipliers[j - 2],
        }
    }
}

fn validate_base_column(p1: &[u64], n: u64) -> Result<()> {
    if p1.len() < 2 {
        return Err(Error::InvalidSmc(
            "base column needs at least two rows".into(),
        ));
    }
    if p1[0] != 0 || p1[1] != 1 {
        return Err(Error::InvalidSmc("base column must start with 0, 1".into()));
    }
    if p1.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSmc(
            "base column must be strictly increasing".into(),
        ));
    }
    if p1.last().is_some_and(|&p| p >= n) {
        return Err(Error::InvalidSmc(format!(
            "base column entries must be below N = {n}"
        )));
    }
    Ok(())
}

pub fn smc_expand(spec: &SmcSpec) -> ExponentMatrix {
    let n = spec.lifting_degree;
    let (rows, cols) = (spec.rows(), spec.cols());
    let mut entries = Vec::with_capacity(rows * cols);
    for &p in &spec.base_column {
        for j in 0..cols {
            entries.push(spec.column_multiplier(j) * p % n);
        }
    }
    ExponentMatrix::from_flat(rows, cols, entries, Some(n)).expect("SMC entries are reduced")
}

/// True iff `[0 | P1]` has no relation of length at most `2k` whose sum is
/// exactly zero.
pub fn base_column_ok(p1: &[u64], k: usize) -> Result<bool> {
    let rows = p1.len();
    let entries = p1.iter().flat_map(|&p| [0, p]).collect();
    let p = ExponentMatrix::from_flat(rows, 2, entries, None)?;
    let set = enumerate_relations(rows, &[0, 1], k)?;
    Ok(set.iter().all(|r| r.sum_unchecked(&p) != 0))
}

/// Per-column multiplier coefficients of a relation's sum over an SMC matrix
/// with base column `p1`, before any reduction mod `N`.
fn column_coefficients(r: &CycleRelation, p1: &[u64], cols: usize) -> Vec<i64> {
    let mut coeff = vec![0i64; cols];
    for ((m, n), (m2, n2)) in r.terms() {
        coeff[n] += p1[m] as i64;
        coeff[n2] -= p1[m2] as i64;
    }
    coeff
}

/// Certified-safe starting value for the next multiplier.
///
/// `assigned` holds `g_2 .. g_{s-2}`; the newest column is `s - 1 =
/// assigned.len() + 2`. For every relation over columns `0..=s-1` that touches
/// the newest column the sum is `rest + a_{s-1} g_{s-1}`, which cannot vanish
/// once `g_{s-1} > |rest / a_{s-1}|`. The result is the smallest integer
/// strictly above all those ratios and above the previous multiplier.
pub fn gamma_lower_bound(relations: &RelationSet, p1: &[u64], assigned: &[u64]) -> Result<u64> {
    let newest = assigned.len() + 2;
    let previous = assigned.last().copied().unwrap_or(1);
    let multiplier = |j: usize| -> i64 {
        match j {
            0 => 0,
            1 => 1,
            _ => assigned[j - 2] as i64,
        }
    };
    let mut bound = previous + 1;
    for (index, r) in relations.iter().enumerate() {
        if r.max_column() != newest || r.max_row() >= p1.len() {
            continue;
        }
        let coeff = column_coefficients(r, p1, newest + 1);
        let lead = coeff[newest];
        if lead == 0 {
            return Err(Error::ZeroCoefficient { index });
        }
        let rest: i64 = (0..newest).map(|j| coeff[j] * multiplier(j)).sum();
        bound = bound.max((rest.unsigned_abs() / lead.unsigned_abs()) + 1);
    }
    Ok(bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "column")]
pub enum BaseColumnStrategy {
    /// `(m-2)`-combinations of `{2, ..., N-1}` in lexicographic order.
    Lexicographic,
    Fixed(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "N")]
    pub lifting_degree: u64,
    /// Target girth is `2 * half_girth`; relations up to length
    /// `2 * (half_girth - 1)` must be nonzero mod `N`.
    pub half_girth: usize,
    pub base_column_strategy: BaseColumnStrategy,
    /// Upper limit on base columns tried.
    pub exhaust_limit: Option<u64>,
    /// Move on to the next base column after a dead end instead of giving up.
    pub backtrack_base: bool,
    /// Revisit earlier multipliers after a dead end (depth-first over the
    /// multiplier sequence) instead of abandoning the base column.
    pub backtrack_multipliers: bool,
    /// Upper limit on multiplier assignments explored per base column in
    /// depth-first mode.
    pub branch_limit: Option<u64>,
    /// Start each multiplier scan at [`gamma_lower_bound`].
    pub use_gamma_bound: bool,
}

impl SearchConfig {
    /// Default configuration: lexicographic base columns with backtracking
    /// over both base columns and multipliers, which yields the
    /// lexicographically first admissible `(P1, g_2, ..., g_{n-1})`.
    pub fn new(m: usize, n: usize, lifting_degree: u64, half_girth: usize) -> Self {
        SearchConfig {
            m,
            n,
            lifting_degree,
            half_girth,
            base_column_strategy: BaseColumnStrategy::Lexicographic,
            exhaust_limit: None,
            backtrack_base: true,
            backtrack_multipliers: true,
            branch_limit: None,
            use_gamma_bound: false,
        }
    }

    /// Plain one-pass greedy: no backtracking of any kind.
    pub fn literal(mut self) -> Self {
        self.backtrack_base = false;
        self.backtrack_multipliers = false;
        self
    }

    pub fn with_base_column(mut self, p1: Vec<u64>) -> Self {
        self.base_column_strategy = BaseColumnStrategy::Fixed(p1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.m < 2 {
            return bad(format!("m = {} must be at least 2", self.m));
        }
        if self.m > self.n || self.n as u64 > self.lifting_degree {
            return bad(format!(
                "need m <= n <= N, got m = {}, n = {}, N = {}",
                self.m, self.n, self.lifting_degree
            ));
        }
        if !(2..=6).contains(&self.half_girth) {
            return bad(format!("half girth {} outside 2..=6", self.half_girth));
        }
        if let BaseColumnStrategy::Fixed(p1) = &self.base_column_strategy {
            if p1.len() != self.m {
                return bad(format!(
                    "fixed base column has {} entries, m = {}",
                    p1.len(),
                    self.m
                ));
            }
            validate_base_column(p1, self.lifting_degree)?;
        }
        Ok(())
    }

    pub fn target_girth(&self) -> usize {
        2 * self.half_girth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Found,
    Infeasible,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub base_columns_tried: u64,
    /// Base columns rejected because `[0 | P1]` already closes a cycle.
    pub base_columns_rejected: u64,
    /// Multiplier candidates examined for columns `2..n`, index 0 is column 2.
    pub gamma_candidates: Vec<u64>,
    /// Number of relations checked per candidate at full width.
    pub relations: usize,
    /// Values actually chosen by the search: `m - 2` base entries plus
    /// `n - 2` multipliers.
    pub free_values: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub matrix: Option<ExponentMatrix>,
    pub spec: Option<SmcSpec>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        self.status == SearchStatus::Found
    }
}

/// Relations grouped by their largest column, so that column `j` only checks
/// the relations it closes.
struct RelationBuckets {
    by_max_column: Vec<Vec<CycleRelation>>,
    total: usize,
}

impl RelationBuckets {
    fn new(m: usize, n: usize, half: usize) -> Result<Self> {
        let mut by_max_column = vec![Vec::new(); n];
        let mut total = 0;
        if half >= crate::cycles::MIN_HALF_LENGTH {
            let set = cached_relations(m, n, half)?;
            total = set.len();
            for r in set.iter() {
                by_max_column[r.max_column()].push(r.clone());
            }
        }
        Ok(RelationBuckets {
            by_max_column,
            total,
        })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: i64, modulus: i64) -> i64 {
    let (mut old_r, mut r) = (a, modulus);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(modulus)
}

/// A relation's sum over an SMC matrix as a linear form in the column
/// multipliers, reduced mod `N`: `lead * g_column + sum(coeff * g_c)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct LinearForm {
    lead: u64,
    rest: Vec<(usize, u64)>,
}

/// Linear forms of every relation, grouped by the relation's largest column
/// and deduplicated. Depends on the base column, not on the multipliers.
fn linear_forms(buckets: &RelationBuckets, p1: &[u64], n: u64) -> Vec<Vec<LinearForm>> {
    let ni = n as i64;
    buckets
        .by_max_column
        .iter()
        .enumerate()
        .map(|(column, bucket)| {
            let mut forms: Vec<LinearForm> = bucket
                .iter()
                .map(|r| {
                    let coeff = column_coefficients(r, p1, column + 1);
                    LinearForm {
                        lead: coeff[column].rem_euclid(ni) as u64,
                        rest: (1..column)
                            .map(|c| (c, coeff[c].rem_euclid(ni) as u64))
                            .filter(|&(_, a)| a != 0)
                            .collect(),
                    }
                })
                .collect();
            forms.sort_unstable();
            forms.dedup();
            forms
        })
        .collect()
}

/// Multipliers for a column that would close a cycle, given those already
/// assigned. Each form vanishes mod `N` exactly on the solutions of a linear
/// congruence. `None` means every value is forbidden.
fn forbidden_multipliers(forms: &[LinearForm], multipliers: &[u64], n: u64) -> Option<Vec<bool>> {
    let mut forbidden = vec![false; n as usize];
    let col_mult = |j: usize| -> u64 {
        match j {
            0 => 0,
            1 => 1,
            _ => multipliers[j - 2],
        }
    };
    for form in forms {
        let constant = form
            .rest
            .iter()
            .fold(0u64, |acc, &(c, a)| (acc + a * col_mult(c)) % n);
        let a = form.lead;
        let b = (n - constant) % n;
        if a == 0 {
            if b == 0 {
                return None;
            }
            continue;
        }
        let g = gcd(a, n);
        if !b.is_multiple_of(g) {
            continue;
        }
        let step = n / g;
        let root = ((b / g) as i64 * mod_inverse((a / g) as i64, step as i64))
            .rem_euclid(step as i64) as u64;
        let mut x = root;
        while x < n {
            forbidden[x as usize] = true;
            x += step;
        }
    }
    Some(forbidden)
}

struct BaseAttempt {
    rejected: bool,
    gamma_tried: Vec<u64>,
    multipliers: Option<Vec<u64>>,
}

struct ColumnWalker<'a> {
    cfg: &'a SearchConfig,
    buckets: &'a RelationBuckets,
    p1: &'a [u64],
    forms: Vec<Vec<LinearForm>>,
    gamma_tried: Vec<u64>,
    branches_left: u64,
}

impl ColumnWalker<'_> {
    fn start_for(&self, column: usize, multipliers: &[u64]) -> u64 {
        let mut start = multipliers.last().copied().unwrap_or(1) + 1;
        let bucket = &self.buckets.by_max_column[column];
        if self.cfg.use_gamma_bound && !bucket.is_empty() {
            start = start.max(bucket_bound(bucket, self.p1, multipliers));
        }
        start
    }

    /// Literal greedy: the smallest admissible value per column, never
    /// revisited.
    fn greedy(&mut self) -> Option<Vec<u64>> {
        let n = self.cfg.lifting_degree;
        let mut multipliers = Vec::with_capacity(self.cfg.n.saturating_sub(2));
        for column in 2..self.cfg.n {
            let start = self.start_for(column, &multipliers);
            let chosen = forbidden_multipliers(&self.forms[column], &multipliers, n)
                .and_then(|forbidden| (start..n).find(|&g| !forbidden[g as usize]));
            match chosen {
                Some(gamma) => {
                    self.gamma_tried[column - 2] += gamma - start + 1;
                    multipliers.push(gamma);
                }
                None => {
                    self.gamma_tried[column - 2] += n.saturating_sub(start);
                    return None;
                }
            }
        }
        Some(multipliers)
    }

    /// Depth-first variant: on a dead end, revisit the previous column with
    /// its next admissible value. Returns the lexicographically smallest
    /// admissible multiplier sequence.
    fn depth_first(&mut self, multipliers: &mut Vec<u64>) -> bool {
        let column = multipliers.len() + 2;
        if column >= self.cfg.n {
            return true;
        }
        let n = self.cfg.lifting_degree;
        let start = self.start_for(column, multipliers);
        let Some(forbidden) = forbidden_multipliers(&self.forms[column], multipliers, n) else {
            self.gamma_tried[column - 2] += n.saturating_sub(start);
            return false;
        };
        for gamma in start..n {
            self.gamma_tried[column - 2] += 1;
            if forbidden[gamma as usize] {
                continue;
            }
            if self.branches_left == 0 {
                return false;
            }
            self.branches_left -= 1;
            multipliers.push(gamma);
            if self.depth_first(multipliers) {
                return true;
            }
            multipliers.pop();
        }
        false
    }
}

fn try_base_column(cfg: &SearchConfig, buckets: &RelationBuckets, p1: &[u64]) -> BaseAttempt {
    let nn = cfg.lifting_degree as i64;
    let gamma_tried = vec![0; cfg.n.saturating_sub(2)];

    // columns 0 and 1 alone: entries are 0 and p1
    let two_col = |r: &CycleRelation| -> i64 {
        r.terms()
            .map(|((m, c), (m2, c2))| {
                let v = |row: usize, col: usize| if col == 0 { 0 } else { p1[row] as i64 };
                v(m, c) - v(m2, c2)
            })
            .sum()
    };
    let base_cycles = buckets
        .by_max_column
        .iter()
        .take(2)
        .flatten()
        .any(|r| two_col(r).rem_euclid(nn) == 0);
    if base_cycles {
        return BaseAttempt {
            rejected: true,
            gamma_tried,
            multipliers: None,
        };
    }

    let mut walker = ColumnWalker {
        cfg,
        buckets,
        p1,
        forms: linear_forms(buckets, p1, cfg.lifting_degree),
        gamma_tried,
        branches_left: cfg.branch_limit.unwrap_or(u64::MAX),
    };
    let multipliers = if cfg.backtrack_multipliers {
        let mut multipliers = Vec::with_capacity(cfg.n.saturating_sub(2));
        walker.depth_first(&mut multipliers).then_some(multipliers)
    } else {
        walker.greedy()
    };
    BaseAttempt {
        rejected: false,
        gamma_tried: walker.gamma_tried,
        multipliers,
    }
}

fn bucket_bound(bucket: &[CycleRelation], p1: &[u64], assigned: &[u64]) -> u64 {
    let newest = assigned.len() + 2;
    let mut bound = 0u64;
    for r in bucket {
        let coeff = column_coefficients(r, p1, newest + 1);
        let lead = coeff[newest];
        if lead == 0 {
            // the sum does not depend on this multiplier; the scan checks it
            continue;
        }
        let rest: i64 = (0..newest)
            .map(|j| {
                coeff[j]
                    * if j < 2 {
                        j as i64
                    } else {
                        assigned[j - 2] as i64
                    }
            })
            .sum();
        bound = bound.max(rest.unsigned_abs() / lead.unsigned_abs() + 1);
    }
    bound
}

fn base_columns(cfg: &SearchConfig) -> Box<dyn Iterator<Item = Vec<u64>> + Send> {
    match &cfg.base_column_strategy {
        BaseColumnStrategy::Fixed(p1) => Box::new(std::iter::once(p1.clone())),
        BaseColumnStrategy::Lexicographic => {
            let tail = (2..cfg.lifting_degree).combinations(cfg.m - 2);
            Box::new(tail.map(|rest| [0u64, 1].into_iter().chain(rest).collect()))
        }
    }
}

/// Greedy SMC search. Base columns are tried in lexicographic order and each
/// multiplier is the smallest value above its predecessor that closes no
/// cycle of length below the target girth.
///
/// With `backtrack_multipliers` a dead end revisits earlier multipliers;
/// without it the current base column is abandoned. Without `backtrack_base`
/// an abandoned base column ends the whole search as infeasible. Turning both
/// off runs the plain one-pass greedy.
pub fn greedy_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let buckets = RelationBuckets::new(cfg.m, cfg.n, cfg.half_girth - 1)?;
    let mut stats = SearchStats {
        gamma_candidates: vec![0; cfg.n - 2],
        relations: buckets.total,
        free_values: (cfg.m - 2) + (cfg.n - 2),
        ..SearchStats::default()
    };
    let limit = cfg.exhaust_limit.unwrap_or(u64::MAX);
    let chunk = 32 * rayon::current_num_threads().max(1);
    let mut columns = base_columns(cfg)
        .take(limit.min(usize::MAX as u64) as usize)
        .peekable();

    while columns.peek().is_some() {
        let batch: Vec<Vec<u64>> = columns.by_ref().take(chunk).collect();
        let attempts: Vec<BaseAttempt> = if cfg.backtrack_base {
            batch
                .par_iter()
                .map(|p1| try_base_column(cfg, &buckets, p1))
                .collect()
        } else {
            // without backtracking the first non-rejected column decides the
            // outcome, so evaluate lazily
            let mut out = Vec::new();
            for p1 in &batch {
                let a = try_base_column(cfg, &buckets, p1);
                let decisive = !a.rejected;
                out.push(a);
                if decisive {
                    break;
                }
            }
            out
        };
        for (p1, attempt) in batch.into_iter().zip(attempts) {
            stats.base_columns_tried += 1;
            if attempt.rejected {
                stats.base_columns_rejected += 1;
                continue;
            }
            for (total, t) in stats.gamma_candidates.iter_mut().zip(&attempt.gamma_tried) {
                *total += t;
            }
            match attempt.multipliers {
                Some(multipliers) => {
                    let spec = SmcSpec::new(p1, multipliers, cfg.lifting_degree)?;
                    let matrix = smc_expand(&spec);
                    return Ok(SearchOutcome {
                        status: SearchStatus::Found,
                        matrix: Some(matrix),
                        spec: Some(spec),
                        stats,
                    });
                }
                None if cfg.backtrack_base => continue,
                None => return Ok(infeasible(stats)),
            }
        }
    }
    Ok(infeasible(stats))
}

fn infeasible(stats: SearchStats) -> SearchOutcome {
    SearchOutcome {
        status: SearchStatus::Infeasible,
        matrix: None,
        spec: None,
        stats,
    }
}

/// Smallest lifting degree in `range` for which the search succeeds; `cfg`
/// supplies everything except the lifting degree. Degrees below `n` are
/// skipped.
pub fn min_lifting_degree(
    cfg: &SearchConfig,
    range: std::ops::RangeInclusive<u64>,
) -> Result<(Option<u64>, SearchOutcome)> {
    let mut last = None;
    for lifting_degree in range.clone() {
        if lifting_degree < cfg.n as u64 || lifting_degree < 2 {
            continue;
        }
        let trial = SearchConfig {
            lifting_degree,
            ..cfg.clone()
        };
        if let BaseColumnStrategy::Fixed(p1) = &trial.base_column_strategy {
            if p1.last().is_some_and(|&p| p >= lifting_degree) {
                continue;
            }
        }
        let outcome = greedy_search(&trial)?;
        if outcome.is_found() {
            return Ok((Some(lifting_degree), outcome));
        }
        last = Some(outcome);
    }
    let outcome = last.unwrap_or_else(|| infeasible(SearchStats::default()));
    if range.is_empty() {
        return Err(Error::InvalidConfig("empty lifting degree range".into()));
    }
    Ok((None, outcome))
}
