use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Noise variance per real dimension for BPSK at `Eb/N0 = snr_db` and code
/// rate `rate`.
pub fn noise_variance(snr_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(snr_db / 10.0))
}

/// Transmits `codeword` as BPSK symbols (bit 0 maps to +1) over AWGN and
/// returns the channel log-likelihood ratios `2 y / sigma^2`, positive
/// values favouring bit 0.
pub fn simulate_awgn_bpsk<R: Rng + ?Sized>(
    codeword: &[bool],
    snr_db: f64,
    rate: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !snr_db.is_finite() {
        return Err(Error::InvalidSimConfig(format!(
            "SNR must be finite, got {snr_db}"
        )));
    }
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidSimConfig(format!(
            "rate must lie in (0, 1], got {rate}"
        )));
    }
    let variance = noise_variance(snr_db, rate);
    let normal =
        Normal::new(0.0, variance.sqrt()).map_err(|e| Error::InvalidSimConfig(e.to_string()))?;
    Ok(codeword
        .iter()
        .map(|&bit| {
            let symbol = if bit { -1.0 } else { 1.0 };
            2.0 * (symbol + normal.sample(rng)) / variance
        })
        .collect())
}
