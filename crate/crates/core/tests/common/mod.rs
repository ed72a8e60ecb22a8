#![allow(dead_code)]

use std::collections::HashSet;

use girthforge::cycles::girth_exact;
use girthforge::{
    expand_to_binary, girth_conv, girth_oracle, girth_qc, greedy_search, minimize_memory,
    minimize_memory_exact, smc_expand, terminated_matrix, BinaryParityCheck, ExponentMatrix,
    MinimizeOptions, SearchConfig, SmcSpec,
};
use rand::Rng;

pub fn example_matrix() -> ExponentMatrix {
    smc_expand(&SmcSpec::new(vec![0, 1, 29], vec![3, 7, 67, 144], 271).unwrap())
}

/// Uniformly random codeword of `h`, from a reduced row echelon form over
/// GF(2).
pub fn random_codeword<R: Rng>(h: &BinaryParityCheck, rng: &mut R) -> Vec<bool> {
    let cols = h.col_count();
    let words = cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..h.row_count())
        .map(|r| {
            let mut bits = vec![0u64; words];
            for &c in h.row(r) {
                bits[c / 64] |= 1 << (c % 64);
            }
            bits
        })
        .collect();
    let bit = |row: &[u64], c: usize| row[c / 64] >> (c % 64) & 1 == 1;

    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(found) = (rank..rows.len()).find(|&r| bit(&rows[r], c)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row, c) {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(c);
        rank += 1;
    }

    let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
    let mut x: Vec<bool> = (0..cols)
        .map(|c| !pivot_set.contains(&c) && rng.gen())
        .collect();
    for (r, &c) in pivots.iter().enumerate() {
        // pivot bit equals the parity of the free bits in its row
        let parity = (0..cols)
            .filter(|&j| j != c && bit(&rows[r], j) && x[j])
            .count()
            % 2
            == 1;
        x[c] = parity;
    }
    x
}

pub fn bpsk_llr(bits: &[bool], magnitude: f64) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b { -magnitude } else { magnitude })
        .collect()
}

/// Closed alternating walks counted independently of the library: walks are
/// generated step by step and identified through the node sequence
/// `c0 r0 c1 r1 ...`, up to rotation and reversal.
pub fn brute_force_relation_count(rows: usize, cols: usize, k: usize) -> usize {
    fn key(nodes: &[(char, usize)]) -> Vec<(char, usize)> {
        let len = nodes.len();
        let mut best: Option<Vec<(char, usize)>> = None;
        let mut forward = nodes.to_vec();
        let mut backward: Vec<(char, usize)> = nodes.iter().rev().copied().collect();
        for seq in [&mut forward, &mut backward] {
            for _ in 0..len {
                seq.rotate_left(1);
                if seq[0].0 == 'c' && best.as_ref().is_none_or(|b| *seq < *b) {
                    best = Some(seq.clone());
                }
            }
        }
        best.unwrap()
    }

    fn extend(
        path: &mut Vec<(usize, usize)>,
        rows: usize,
        cols: usize,
        k: usize,
        seen: &mut HashSet<Vec<(char, usize)>>,
    ) {
        if path.len() == k {
            if path[k - 1].1 == path[0].1 {
                return;
            }
            let nodes: Vec<(char, usize)> = path
                .iter()
                .flat_map(|&(m, n)| [('c', n), ('r', m)])
                .collect();
            seen.insert(key(&nodes));
            return;
        }
        for m in 0..rows {
            for n in 0..cols {
                if let Some(&(pm, pn)) = path.last() {
                    if pm == m || pn == n {
                        continue;
                    }
                }
                path.push((m, n));
                extend(path, rows, cols, k, seen);
                path.pop();
            }
        }
    }

    let mut seen = HashSet::new();
    extend(&mut Vec::new(), rows, cols, k, &mut seen);
    seen.len()
}

pub fn random_exponents<R: Rng>(rng: &mut R, rows: usize, cols: usize, n: u64) -> ExponentMatrix {
    let entries = (0..rows * cols).map(|_| rng.gen_range(0..n)).collect();
    ExponentMatrix::from_flat(rows, cols, entries, Some(n)).unwrap()
}

/// Girth from relation enumeration and from the Tanner graph BFS, both
/// capped at `2 * max_half + 2`.
pub fn qc_vs_oracle(p: &ExponentMatrix, max_half: usize) -> (usize, usize) {
    let cap = 2 * max_half + 2;
    let by_relations = girth_qc(p, max_half).unwrap().girth.capped(cap);
    let by_graph = girth_oracle(&expand_to_binary(p).unwrap()).capped(cap);
    (by_relations, by_graph)
}

/// Accepted girth-12 searches on `3 x 4` SMC matrices over a spread of
/// lifting degrees and random base columns.
pub fn accepted_outcomes(count: usize, seed: u64) -> Vec<SmcSpec> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    let mut lift = 60;
    while found.len() < count {
        let x = rng.gen_range(2..lift);
        let cfg = SearchConfig::new(3, 4, lift, 6).with_base_column(vec![0, 1, x]);
        if let Some(spec) = greedy_search(&cfg).unwrap().spec {
            found.push(spec);
        }
        lift = if lift >= 400 { 60 } else { lift + 1 };
    }
    found
}

/// True when no relation up to `max_half` over any set of at least two
/// columns has an exactly zero integer sum.
pub fn strictly_avoidable_free(p: &ExponentMatrix, max_half: usize) -> bool {
    use itertools::Itertools;
    let rows = p.to_rows();
    (2..=p.cols()).all(|size| {
        (0..p.cols()).combinations(size).all(|cols| {
            let sub: Vec<Vec<u64>> = rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect();
            let sub = ExponentMatrix::new(sub, None).unwrap();
            girth_exact(&sub, max_half)
                .unwrap()
                .girth
                .at_least(2 * max_half + 2)
        })
    })
}

/// Small certified exponent matrices (`m n <= 12`) with the relation bound
/// they are certified for.
pub fn memory_instances(count: usize, seed: u64) -> Vec<(ExponentMatrix, usize)> {
    use rand::SeedableRng;
    let shapes = [(2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (3, 4), (4, 3)];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let (m, n) = shapes[rng.gen_range(0..shapes.len())];
        let lift = rng.gen_range(5..=24);
        let p = random_exponents(&mut rng, m, n, lift);
        let max_half = if rng.gen_bool(0.5) { 3 } else { 2 };
        if girth_qc(&p, max_half)
            .unwrap()
            .girth
            .at_least(2 * max_half + 2)
        {
            out.push((p, max_half));
        }
    }
    out
}

pub struct MemoryTrial {
    pub heuristic: u64,
    pub exact: u64,
    pub sound: bool,
}

pub fn memory_trial(p: &ExponentMatrix, max_half: usize, seed: u64) -> MemoryTrial {
    let options = MinimizeOptions {
        seed,
        ..Default::default()
    };
    let result = minimize_memory(p, max_half, &options).unwrap();
    let exact = minimize_memory_exact(p, max_half, 2).unwrap();
    let spec = result.best.to_conv_spec();
    let cap = 2 * max_half + 2;
    let sound = result
        .best
        .lifted()
        .reduced(p.lifting_degree().unwrap())
        .unwrap()
        == *p
        && girth_conv(&spec, max_half).unwrap().girth.at_least(cap)
        && girth_oracle(&terminated_matrix(
            &spec,
            max_half * spec.memory_order() as usize + 1,
        ))
        .at_least(cap)
        && result.history.windows(2).all(|w| w[1] <= w[0])
        && result.memory_order <= result.initial_memory_order;
    MemoryTrial {
        heuristic: result.memory_order,
        exact: exact.memory_order(),
        sound,
    }
}

/// Girth-8 rate-1/2 convolutional code unwrapped from the smallest `3 x 6`
/// SMC block code of girth 8.
pub fn girth8_conv() -> girthforge::ConvCodeSpec {
    let spec = SmcSpec::new(vec![0, 1, 2], vec![3, 12, 14, 15], 19).unwrap();
    minimize_memory(&smc_expand(&spec), 3, &MinimizeOptions::default())
        .unwrap()
        .best
        .to_conv_spec()
}
