mod common;

use common::{bpsk_llr, example_matrix, girth8_conv, random_codeword};
use girthforge::sim::{noise_variance, BpDecoder, SlidingWindowDecoder};
use girthforge::{
    decode_bp, decode_sliding_window, expand_to_binary, latency_report, run_ber,
    simulate_awgn_bpsk, terminated_matrix, ConvCodeSpec, DecoderKind, Error, ExponentMatrix,
    SimCode, SimConfig, StopRule,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn example_h() -> girthforge::BinaryParityCheck {
    expand_to_binary(&example_matrix()).unwrap()
}

#[test]
fn girth8_code_parameters() {
    let spec = girth8_conv();
    assert_eq!(spec.memory_order(), 15);
    assert_eq!((spec.check_rows(), spec.bit_cols()), (3, 6));
}

#[test]
fn noiseless_codewords_are_returned_unchanged() {
    let h = example_h();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3 {
        let c = random_codeword(&h, &mut rng);
        assert!(h.is_codeword(&c).unwrap());
        assert!(c.iter().any(|&b| b));
        let out = decode_bp(&h, &bpsk_llr(&c, 4.0), 100).unwrap();
        assert_eq!(out.bits, c);
        assert!(out.syndrome_ok);
        assert_eq!(out.iterations, 0);
    }
}

#[test]
fn single_wrong_bit_is_corrected() {
    let h = example_h();
    let c = random_codeword(&h, &mut ChaCha8Rng::seed_from_u64(2));
    let mut llr = bpsk_llr(&c, 3.0);
    llr[700] = -llr[700] / 3.0;
    let out = decode_bp(&h, &llr, 50).unwrap();
    assert_eq!(out.bits, c);
    assert!(out.iterations >= 1);
}

#[test]
fn decoding_failure_runs_to_the_iteration_limit() {
    let h = example_h();
    let zero = vec![false; h.col_count()];
    let llr = simulate_awgn_bpsk(&zero, -3.0, 0.5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let out = decode_bp(&h, &llr, 7).unwrap();
    assert!(!out.syndrome_ok);
    assert_eq!(out.iterations, 7);
}

#[test]
fn wrong_input_length_is_an_error() {
    let h = example_h();
    assert!(matches!(
        decode_bp(&h, &[1.0; 10], 5),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn decoder_is_symmetric_under_codeword_flips() {
    let h = example_h();
    let mut bp = BpDecoder::new(&h);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let zero = vec![false; h.col_count()];
    for snr in [1.0, 1.5, 2.0] {
        let c = random_codeword(&h, &mut rng);
        let llr = simulate_awgn_bpsk(&zero, snr, 0.5, &mut rng).unwrap();
        let flipped: Vec<f64> = llr
            .iter()
            .zip(&c)
            .map(|(&l, &b)| if b { -l } else { l })
            .collect();
        let a = bp.decode(&llr, 30).unwrap();
        let b = bp.decode(&flipped, 30).unwrap();
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.syndrome_ok, b.syndrome_ok);
        let shifted: Vec<bool> = a.bits.iter().zip(&c).map(|(&x, &y)| x ^ y).collect();
        assert_eq!(b.bits, shifted);
    }
}

#[test]
fn sliding_window_reproduces_a_noiseless_stream() {
    let spec = girth8_conv();
    let blocks = 200;
    let h = terminated_matrix(&spec, blocks);
    let c = random_codeword(&h, &mut ChaCha8Rng::seed_from_u64(5));
    assert!(c.iter().any(|&b| b));
    let out = decode_sliding_window(&spec, &bpsk_llr(&c, 6.0), 10, 100).unwrap();
    assert_eq!(out.bits, c);
    assert_eq!(out.windows, blocks);
    assert_eq!(out.failed_windows, 0);
}

#[test]
fn sliding_window_decodes_moderate_noise() {
    let spec = girth8_conv();
    let mut sw = SlidingWindowDecoder::new(&spec, 3).unwrap();
    assert_eq!(sw.window(), 48);
    let zero = vec![false; 6 * 120];
    let llr = simulate_awgn_bpsk(&zero, 4.0, 0.5, &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
    let out = sw.decode(&llr, 50).unwrap();
    assert_eq!(out.bits, zero);
    assert!(out.avg_iterations() > 0.0);
}

#[test]
fn memoryless_code_decodes_block_by_block() {
    let spec = ConvCodeSpec::new(ExponentMatrix::new(vec![vec![0, 0]], None).unwrap());
    let llr = [2.0, 2.0, -2.0, -2.0, 5.0, -0.5];
    let out = decode_sliding_window(&spec, &llr, 1, 10).unwrap();
    assert_eq!(out.bits, vec![false, false, true, true, false, false]);
}

#[test]
fn channel_noise_matches_the_snr() {
    let zero = vec![false; 200_000];
    let llr = simulate_awgn_bpsk(&zero, 2.0, 0.5, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let sigma2 = noise_variance(2.0, 0.5);
    assert!((sigma2 - 1.0 / 10f64.powf(0.2)).abs() < 1e-12);
    // y = sigma^2 llr / 2
    let y: Vec<f64> = llr.iter().map(|l| l * sigma2 / 2.0).collect();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / y.len() as f64;
    assert!((mean - 1.0).abs() < 0.01);
    assert!((var / sigma2 - 1.0).abs() < 0.02);
    assert!(simulate_awgn_bpsk(&zero, f64::NAN, 0.5, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
}

#[test]
fn window_latency_for_memory_44() {
    let mut rows = vec![vec![0; 7]; 3];
    rows[1][2] = 44;
    let spec = ConvCodeSpec::new(ExponentMatrix::new(rows, None).unwrap());
    let report = latency_report(&spec, 5, 12.0, 2.0).unwrap();
    assert_eq!(report.window_bits, 1575);
    assert_eq!(report.complexity_per_bit, 5.0 * 45.0 * 12.0 * 2.0);
}

fn small_config(decoder: DecoderKind, seed: u64) -> SimConfig {
    SimConfig {
        snr_points: vec![1.0, 2.0],
        max_iterations: 30,
        codeword_length_target: 600,
        window_alpha: 2,
        rng_seed: seed,
        stop_rule: StopRule {
            min_bit_errors: 40,
            max_frames: 12,
        },
        decoder,
        ..SimConfig::default()
    }
}

#[test]
fn ber_runs_are_reproducible() {
    let code = SimCode::Conv(girth8_conv());
    for decoder in [DecoderKind::FullBp, DecoderKind::SlidingWindow] {
        let cfg = small_config(decoder, 42);
        let a = run_ber(&code, &cfg).unwrap().to_csv();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| run_ber(&code, &cfg).unwrap()).to_csv();
        assert_eq!(a, b);
        let c = run_ber(&code, &small_config(decoder, 43)).unwrap().to_csv();
        assert_ne!(a, c);
    }
}

#[test]
fn ber_configuration_errors() {
    let block = SimCode::Block {
        h: example_h(),
        rate: 0.5,
    };
    assert!(run_ber(&block, &small_config(DecoderKind::SlidingWindow, 0)).is_err());
    let mut cfg = small_config(DecoderKind::FullBp, 0);
    cfg.snr_points.clear();
    assert!(run_ber(&block, &cfg).is_err());
    let mut cfg = small_config(DecoderKind::SlidingWindow, 0);
    cfg.window_alpha = 10;
    assert!(matches!(
        run_ber(&SimCode::Conv(girth8_conv()), &cfg),
        Err(Error::StreamTooShort { .. })
    ));
}

#[test]
fn csv_layout() {
    let block = SimCode::Block {
        h: example_h(),
        rate: 0.5,
    };
    let mut cfg = small_config(DecoderKind::FullBp, 1);
    cfg.snr_points = vec![6.0];
    cfg.stop_rule.max_frames = 2;
    let csv = run_ber(&block, &cfg).unwrap().to_csv();
    assert_eq!(
        csv,
        "snr_db,ber,fer,avg_iter,frames\n6,0.000000e0,0.000000e0,2.0000,2\n"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn converged_output_satisfies_every_check(seed in any::<u64>(), snr in 0.5f64..3.0) {
        let spec = girth8_conv();
        let h = terminated_matrix(&spec, 40);
        let zero = vec![false; h.col_count()];
        let llr = simulate_awgn_bpsk(&zero, snr, 0.5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let out = decode_bp(&h, &llr, 40).unwrap();
        prop_assert_eq!(out.syndrome_ok, h.is_codeword(&out.bits).unwrap());
    }
}
