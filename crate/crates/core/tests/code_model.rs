mod common;

use common::{example_matrix, random_exponents};
use girthforge::{
    expand_to_binary, read_alist, terminated_matrix, theta_mh, to_conv_spec, to_syndrome_former,
    window_matrix, write_alist, BinaryParityCheck, ConvCodeSpec, ExponentMatrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Rate 4/7 grid whose entries span exactly `0..=memory`.
fn grid_with_memory(memory: u64) -> ConvCodeSpec {
    let mut rows = vec![vec![0; 7]; 3];
    rows[0][0] = memory;
    rows[1][3] = memory / 2;
    rows[2][6] = memory / 3;
    ConvCodeSpec::new(ExponentMatrix::new(rows, None).unwrap())
}

#[test]
fn constraint_lengths_of_the_rate_four_sevenths_codes() {
    let table = [
        (44, 315),
        (165, 1162),
        (53, 378),
        (220, 1547),
        (88, 623),
        (432, 3031),
    ];
    for (memory, v_s) in table {
        let spec = grid_with_memory(memory);
        assert_eq!(spec.memory_order(), memory);
        assert_eq!(spec.constraint_length(), v_s);
        assert_eq!(spec.rate_fraction(), (4, 7));
    }
}

#[test]
fn compactness_ratios_round_to_the_published_values() {
    let pairs = [
        ((44, 53), "0.83"),
        ((165, 220), "0.75"),
        ((44, 88), "0.51"),
        ((165, 432), "0.38"),
    ];
    for ((new, reference), expected) in pairs {
        assert_eq!(format!("{:.2}", theta_mh(new, reference)), expected);
    }
}

#[test]
fn example_lift_and_unwrap() {
    let p = example_matrix();
    assert_eq!(p.code_length(), Some(1626));
    let h = expand_to_binary(&p).unwrap();
    assert!(h.col_weights().all(|w| w == 3));
    assert!(h.row_weights().all(|w| w == 6));
    let spec = to_conv_spec(&p);
    assert_eq!(spec.memory_order(), p.max_entry() - p.min_entry());
    let former = to_syndrome_former(&spec);
    assert_eq!(former.len() as u64, spec.memory_order() + 1);
    let ones: usize = former.blocks().iter().map(BinaryParityCheck::ones).sum();
    assert_eq!(ones, 18);
}

#[test]
fn window_and_terminated_matrices_share_the_band() {
    let spec =
        ConvCodeSpec::new(ExponentMatrix::new(vec![vec![0, 2, 3], vec![1, 0, 3]], None).unwrap());
    let w = window_matrix(&spec, 6).unwrap();
    let t = terminated_matrix(&spec, 6);
    assert_eq!(t.row_count(), (6 + 3) * 2);
    assert!(t.col_weights().all(|c| c == 2));
    for (r, c) in w.positions() {
        assert!(t.contains(r, c));
    }
    assert!(window_matrix(&spec, 3).is_err());
}

proptest! {
    #[test]
    fn alist_round_trip(m in 1usize..=4, n in 1usize..=6, lift in 1u64..=9, seed in any::<u64>()) {
        let p = random_exponents(&mut ChaCha8Rng::seed_from_u64(seed), m, n, lift);
        let h = expand_to_binary(&p).unwrap();
        let text = write_alist(&h);
        prop_assert_eq!(read_alist(&text).unwrap(), h);
    }

    #[test]
    fn every_lifted_column_has_one_entry_per_row_block(
        m in 1usize..=4, n in 1usize..=6, lift in 1u64..=12, seed in any::<u64>()
    ) {
        let p = random_exponents(&mut ChaCha8Rng::seed_from_u64(seed), m, n, lift);
        let h = expand_to_binary(&p).unwrap();
        prop_assert_eq!(h.ones(), m * n * lift as usize);
        for c in 0..h.col_count() {
            let blocks: Vec<usize> = h.col(c).iter().map(|&r| r / lift as usize).collect();
            prop_assert_eq!(blocks, (0..m).collect::<Vec<_>>());
        }
    }
}

#[test]
fn malformed_alist_is_rejected() {
    assert!(read_alist("").is_err());
    assert!(read_alist("2 1\n1 2\n1 1\n2\n1\n1\n1 3\n").is_err());
}
