//! Monte Carlo evaluation over the binary-input AWGN channel.

mod ber;
mod bp;
mod channel;
mod latency;
mod sliding;

pub use ber::{run_ber, BerCurve, BerPoint, DecoderKind, SimCode, SimConfig, StopRule};
pub use bp::{decode_bp, BpDecoder, BpOutput, DEFAULT_CLIP};
pub use channel::{noise_variance, simulate_awgn_bpsk};
pub use latency::{latency_report, LatencyReport};
pub use sliding::{decode_sliding_window, SlidingOutput, SlidingWindowDecoder};
