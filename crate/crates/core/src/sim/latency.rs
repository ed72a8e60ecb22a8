use serde::{Deserialize, Serialize};

use crate::code_model::ConvCodeSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyReport {
    pub alpha: usize,
    pub memory_order: u64,
    /// Window size in bits, `alpha (m_h + 1) a`.
    pub window_bits: u64,
    pub avg_iterations: f64,
    /// Weight per edge update as a function of average degree and rate;
    /// left to the caller.
    pub f_weight: f64,
    /// `alpha (m_h + 1) I_avg f`.
    pub complexity_per_bit: f64,
}

pub fn latency_report(
    spec: &ConvCodeSpec,
    alpha: usize,
    avg_iterations: f64,
    f_weight: f64,
) -> Result<LatencyReport> {
    if alpha == 0 {
        return Err(Error::InvalidSimConfig(
            "window multiplier must be at least 1".into(),
        ));
    }
    if !(avg_iterations >= 0.0 && avg_iterations.is_finite() && f_weight.is_finite()) {
        return Err(Error::InvalidSimConfig(
            "iteration count and weight must be finite".into(),
        ));
    }
    let memory_order = spec.memory_order();
    let window_blocks = alpha as u64 * (memory_order + 1);
    Ok(LatencyReport {
        alpha,
        memory_order,
        window_bits: window_blocks * spec.bit_cols() as u64,
        avg_iterations,
        f_weight,
        complexity_per_bit: window_blocks as f64 * avg_iterations * f_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::ExponentMatrix;

    fn spec_with_memory(m_h: u64) -> ConvCodeSpec {
        ConvCodeSpec::new(
            ExponentMatrix::new(vec![vec![0, m_h, 1, 2, 3, 4, 5], vec![0; 7]], None).unwrap(),
        )
    }

    #[test]
    fn window_size_identity() {
        let report = latency_report(&spec_with_memory(44), 5, 3.0, 1.0).unwrap();
        assert_eq!(report.window_bits, 1575);
        assert_eq!(report.complexity_per_bit, 5.0 * 45.0 * 3.0);
        let trivial = ConvCodeSpec::new(ExponentMatrix::zeros(2, 7, None).unwrap());
        assert_eq!(
            latency_report(&trivial, 1, 1.0, 1.0).unwrap().window_bits,
            7
        );
    }

    #[test]
    fn complexity_is_linear_in_iterations() {
        let spec = spec_with_memory(20);
        let one = latency_report(&spec, 3, 2.0, 1.5)
            .unwrap()
            .complexity_per_bit;
        let two = latency_report(&spec, 3, 4.0, 1.5)
            .unwrap()
            .complexity_per_bit;
        assert_eq!(two, 2.0 * one);
        assert!(latency_report(&spec, 0, 2.0, 1.0).is_err());
    }
}
