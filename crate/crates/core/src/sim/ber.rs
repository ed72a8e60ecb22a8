use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bp::{BpDecoder, DEFAULT_CLIP};
use super::channel::simulate_awgn_bpsk;
use super::sliding::SlidingWindowDecoder;
use crate::code_model::{terminated_matrix, BinaryParityCheck, ConvCodeSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    FullBp,
    SlidingWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_bit_errors: u64,
    pub max_frames: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Eb/N0 values in dB.
    pub snr_points: Vec<f64>,
    pub max_iterations: usize,
    /// Stream length in bits for convolutional codes; rounded up to whole
    /// blocks. Block codes send one codeword per frame.
    pub codeword_length_target: usize,
    pub window_alpha: usize,
    pub rng_seed: u64,
    pub stop_rule: StopRule,
    pub decoder: DecoderKind,
    /// LLR magnitude limit inside the decoder.
    pub clip: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            snr_points: vec![1.0, 1.5, 2.0, 2.5, 3.0],
            max_iterations: 100,
            codeword_length_target: 10_000,
            window_alpha: 5,
            rng_seed: 0,
            stop_rule: StopRule {
                min_bit_errors: 100,
                max_frames: 100_000,
            },
            decoder: DecoderKind::FullBp,
            clip: DEFAULT_CLIP,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidSimConfig(msg.into()));
        if self.snr_points.is_empty() {
            return fail("at least one SNR point is required");
        }
        if self.snr_points.iter().any(|s| !s.is_finite()) {
            return fail("SNR points must be finite");
        }
        if self.max_iterations == 0 {
            return fail("max_iterations must be at least 1");
        }
        if self.window_alpha == 0 {
            return fail("window_alpha must be at least 1");
        }
        if self.stop_rule.max_frames == 0 {
            return fail("max_frames must be at least 1");
        }
        if !(self.clip > 0.0 && self.clip.is_finite()) {
            return fail("clip must be positive and finite");
        }
        Ok(())
    }
}

/// Code under simulation.
#[derive(Debug, Clone)]
pub enum SimCode {
    Block { h: BinaryParityCheck, rate: f64 },
    Conv(ConvCodeSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub fer: f64,
    pub avg_iterations: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub bits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerCurve {
    pub decoder: DecoderKind,
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,ber,fer,avg_iter,frames\n");
        for p in &self.points {
            writeln!(
                out,
                "{},{:.6e},{:.6e},{:.4},{}",
                p.snr_db, p.ber, p.fer, p.avg_iterations, p.frames
            )
            .expect("writing to a string");
        }
        out
    }
}

enum Engine {
    Block(BpDecoder),
    Sliding(SlidingWindowDecoder),
}

struct Frame {
    bit_errors: u64,
    iterations: f64,
}

struct Setup {
    engine: Engine,
    length: usize,
    rate: f64,
}

fn setup(code: &SimCode, cfg: &SimConfig) -> Result<Setup> {
    match code {
        SimCode::Block { h, rate } => {
            if cfg.decoder == DecoderKind::SlidingWindow {
                return Err(Error::InvalidSimConfig(
                    "sliding-window decoding needs a convolutional code".into(),
                ));
            }
            Ok(Setup {
                engine: Engine::Block(BpDecoder::with_clip(h, cfg.clip)),
                length: h.col_count(),
                rate: *rate,
            })
        }
        SimCode::Conv(spec) => {
            let a = spec.bit_cols();
            let blocks = cfg.codeword_length_target.div_ceil(a).max(1);
            let engine = match cfg.decoder {
                DecoderKind::FullBp => Engine::Block(BpDecoder::with_clip(
                    &terminated_matrix(spec, blocks),
                    cfg.clip,
                )),
                DecoderKind::SlidingWindow => {
                    let dec = SlidingWindowDecoder::with_clip(spec, cfg.window_alpha, cfg.clip)?;
                    if blocks < dec.window() {
                        return Err(Error::StreamTooShort {
                            needed: dec.window() * a,
                            found: blocks * a,
                        });
                    }
                    Engine::Sliding(dec)
                }
            };
            Ok(Setup {
                engine,
                length: blocks * a,
                rate: spec.rate(),
            })
        }
    }
}

const BATCH: u64 = 4;

fn frame_rng(seed: u64, snr_index: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((snr_index as u64) << 40) | frame);
    rng
}

/// Monte Carlo BER of all-zero transmissions. Frames run in fixed batches,
/// each with its own generator derived from the seed, the SNR index and the
/// frame index, so results do not depend on the thread count.
pub fn run_ber(code: &SimCode, cfg: &SimConfig) -> Result<BerCurve> {
    cfg.validate()?;
    let template = setup(code, cfg)?;
    let zero = vec![false; template.length];
    let mut points = Vec::with_capacity(cfg.snr_points.len());

    for (snr_index, &snr_db) in cfg.snr_points.iter().enumerate() {
        let mut frames = 0u64;
        let mut bit_errors = 0u64;
        let mut frame_errors = 0u64;
        let mut iterations = 0.0;
        while frames < cfg.stop_rule.max_frames && bit_errors < cfg.stop_rule.min_bit_errors {
            let batch = BATCH.min(cfg.stop_rule.max_frames - frames);
            let results: Vec<Result<Frame>> = (frames..frames + batch)
                .into_par_iter()
                .map_init(
                    || setup(code, cfg).expect("validated above").engine,
                    |engine, f| {
                        let mut rng = frame_rng(cfg.rng_seed, snr_index, f);
                        let llr = simulate_awgn_bpsk(&zero, snr_db, template.rate, &mut rng)?;
                        let (bits, iters) = match engine {
                            Engine::Block(bp) => {
                                let out = bp.decode(&llr, cfg.max_iterations)?;
                                (out.bits, out.iterations as f64)
                            }
                            Engine::Sliding(sw) => {
                                let out = sw.decode(&llr, cfg.max_iterations)?;
                                let avg = out.avg_iterations();
                                (out.bits, avg)
                            }
                        };
                        let errors = bits.iter().filter(|&&b| b).count() as u64;
                        Ok(Frame {
                            bit_errors: errors,
                            iterations: iters,
                        })
                    },
                )
                .collect();
            for r in results {
                let frame = r?;
                bit_errors += frame.bit_errors;
                frame_errors += u64::from(frame.bit_errors > 0);
                iterations += frame.iterations;
            }
            frames += batch;
        }
        let bits = frames * template.length as u64;
        points.push(BerPoint {
            snr_db,
            ber: bit_errors as f64 / bits as f64,
            fer: frame_errors as f64 / frames as f64,
            avg_iterations: iterations / frames as f64,
            frames,
            bit_errors,
            bits,
        });
    }
    Ok(BerCurve {
        decoder: cfg.decoder,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::ExponentMatrix;

    fn small_conv() -> ConvCodeSpec {
        ConvCodeSpec::new(
            ExponentMatrix::new(vec![vec![0, 1, 3, 4], vec![2, 0, 4, 1]], None).unwrap(),
        )
    }

    fn cfg(decoder: DecoderKind) -> SimConfig {
        SimConfig {
            snr_points: vec![0.0, 20.0],
            max_iterations: 20,
            codeword_length_target: 200,
            window_alpha: 2,
            rng_seed: 11,
            stop_rule: StopRule {
                min_bit_errors: 50,
                max_frames: 40,
            },
            decoder,
            clip: DEFAULT_CLIP,
        }
    }

    #[test]
    fn high_snr_beats_low_snr() {
        for kind in [DecoderKind::FullBp, DecoderKind::SlidingWindow] {
            let curve = run_ber(&SimCode::Conv(small_conv()), &cfg(kind)).unwrap();
            assert!(curve.points[1].ber < curve.points[0].ber, "{kind:?}");
            assert!(curve
                .points
                .iter()
                .all(|p| p.frames > 0 && (0.0..=1.0).contains(&p.ber)));
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let code = SimCode::Conv(small_conv());
        let a = run_ber(&code, &cfg(DecoderKind::FullBp)).unwrap();
        let b = run_ber(&code, &cfg(DecoderKind::FullBp)).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with("snr_db,ber,fer,avg_iter,frames\n0,"));
    }

    #[test]
    fn config_checks() {
        let mut c = cfg(DecoderKind::FullBp);
        c.snr_points.clear();
        assert!(c.validate().is_err());
        let mut c = cfg(DecoderKind::FullBp);
        c.max_iterations = 0;
        assert!(c.validate().is_err());
        let h = BinaryParityCheck::from_positions(1, 2, [(0, 0), (0, 1)]).unwrap();
        let block = SimCode::Block { h, rate: 0.5 };
        assert!(run_ber(&block, &cfg(DecoderKind::SlidingWindow)).is_err());
        let mut c = cfg(DecoderKind::SlidingWindow);
        c.codeword_length_target = 8;
        assert!(matches!(
            run_ber(&SimCode::Conv(small_conv()), &c),
            Err(Error::StreamTooShort { .. })
        ));
    }
}
