use serde::{Deserialize, Serialize};

use super::{BinaryParityCheck, ExponentMatrix};
use crate::error::{Error, Result};

/// Monomial time-invariant convolutional code given by a `c x a` grid of
/// unreduced exponents.
///
/// Exponents are shifted so the smallest one is zero; the memory order, the
/// constraint length and the rate are always derived from the grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConvSpec", into = "RawConvSpec")]
pub struct ConvCodeSpec {
    exponents: ExponentMatrix,
}

#[derive(Serialize, Deserialize)]
struct RawConvSpec {
    c: usize,
    a: usize,
    exponents: Vec<Vec<u64>>,
    #[serde(default)]
    m_h: Option<u64>,
    #[serde(default)]
    v_s: Option<u64>,
    #[serde(default)]
    rate: Option<f64>,
}

impl TryFrom<RawConvSpec> for ConvCodeSpec {
    type Error = Error;

    fn try_from(raw: RawConvSpec) -> Result<Self> {
        let spec = ConvCodeSpec::new(ExponentMatrix::new(raw.exponents, None)?);
        if spec.check_rows() != raw.c || spec.bit_cols() != raw.a {
            return Err(Error::DimensionMismatch {
                expected: raw.c * raw.a,
                found: spec.check_rows() * spec.bit_cols(),
            });
        }
        if raw.m_h.is_some_and(|m| m != spec.memory_order())
            || raw.v_s.is_some_and(|v| v != spec.constraint_length())
        {
            return Err(Error::InvalidConfig(
                "stored m_h/v_s disagree with the exponent grid".into(),
            ));
        }
        Ok(spec)
    }
}

impl From<ConvCodeSpec> for RawConvSpec {
    fn from(spec: ConvCodeSpec) -> Self {
        RawConvSpec {
            c: spec.check_rows(),
            a: spec.bit_cols(),
            m_h: Some(spec.memory_order()),
            v_s: Some(spec.constraint_length()),
            rate: Some(spec.rate()),
            exponents: spec.exponents.to_rows(),
        }
    }
}

impl ConvCodeSpec {
    /// Reinterprets `exponents` as a monomial symbolic matrix. Any lifting
    /// degree is ignored and the grid is normalized to a zero minimum.
    pub fn new(exponents: ExponentMatrix) -> Self {
        let min = exponents.min_entry();
        let shifted = exponents.entries().iter().map(|&p| p - min).collect();
        let exponents =
            ExponentMatrix::from_flat(exponents.rows(), exponents.cols(), shifted, None)
                .expect("shape preserved");
        ConvCodeSpec { exponents }
    }

    /// `c`, the number of check rows per block.
    pub fn check_rows(&self) -> usize {
        self.exponents.rows()
    }

    /// `a`, the number of code bits per block.
    pub fn bit_cols(&self) -> usize {
        self.exponents.cols()
    }

    pub fn exponents(&self) -> &ExponentMatrix {
        &self.exponents
    }

    /// Syndrome former memory order: the largest absolute difference between
    /// two exponents.
    pub fn memory_order(&self) -> u64 {
        self.exponents.max_entry() - self.exponents.min_entry()
    }

    /// `v_s = (m_h + 1) a`.
    pub fn constraint_length(&self) -> u64 {
        (self.memory_order() + 1) * self.bit_cols() as u64
    }

    /// Asymptotic rate as the exact fraction `(a - c, a)`.
    pub fn rate_fraction(&self) -> (i64, u64) {
        (
            self.bit_cols() as i64 - self.check_rows() as i64,
            self.bit_cols() as u64,
        )
    }

    pub fn rate(&self) -> f64 {
        let (num, den) = self.rate_fraction();
        num as f64 / den as f64
    }

    /// Number of blocks in the syndrome former.
    pub fn band_blocks(&self) -> usize {
        self.memory_order() as usize + 1
    }
}

/// Syndrome former blocks `H_0 .. H_{m_h}`, each `c x a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeFormer {
    blocks: Vec<BinaryParityCheck>,
}

impl SyndromeFormer {
    pub fn blocks(&self) -> &[BinaryParityCheck] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

pub fn to_conv_spec(p: &ExponentMatrix) -> ConvCodeSpec {
    ConvCodeSpec::new(p.clone())
}

pub fn to_syndrome_former(spec: &ConvCodeSpec) -> SyndromeFormer {
    let (c, a) = (spec.check_rows(), spec.bit_cols());
    let mut placements = vec![Vec::new(); spec.band_blocks()];
    for i in 0..c {
        for j in 0..a {
            placements[spec.exponents.get(i, j) as usize].push((i, j));
        }
    }
    let blocks = placements
        .into_iter()
        .map(|pos| BinaryParityCheck::from_positions(c, a, pos).expect("positions in range"))
        .collect();
    SyndromeFormer { blocks }
}

fn banded(spec: &ConvCodeSpec, block_rows: usize, block_cols: usize) -> BinaryParityCheck {
    let (c, a) = (spec.check_rows(), spec.bit_cols());
    let mut positions = Vec::with_capacity(block_cols * c * a);
    for s in 0..block_cols {
        for i in 0..c {
            for j in 0..a {
                let t = s + spec.exponents.get(i, j) as usize;
                if t < block_rows {
                    positions.push((t * c + i, s * a + j));
                }
            }
        }
    }
    BinaryParityCheck::from_positions(block_rows * c, block_cols * a, positions)
        .expect("positions in range")
}

/// Top-left `W c x W a` corner of the semi-infinite banded parity-check
/// matrix.
pub fn window_matrix(spec: &ConvCodeSpec, window: usize) -> Result<BinaryParityCheck> {
    let needed = spec.band_blocks();
    if window < needed {
        return Err(Error::WindowTooSmall { window, needed });
    }
    Ok(banded(spec, window, window))
}

/// Parity-check matrix of `blocks` code blocks followed by a zero tail: every
/// check row that touches the first `blocks` bit blocks is kept, giving
/// `(blocks + m_h) c` rows and uniform column weight `c`.
pub fn terminated_matrix(spec: &ConvCodeSpec, blocks: usize) -> BinaryParityCheck {
    banded(spec, blocks + spec.memory_order() as usize, blocks)
}
