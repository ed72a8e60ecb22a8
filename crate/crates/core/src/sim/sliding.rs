use serde::{Deserialize, Serialize};

use super::bp::{BpDecoder, DEFAULT_CLIP};
use crate::code_model::{BinaryParityCheck, ConvCodeSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlidingOutput {
    pub bits: Vec<bool>,
    pub windows: usize,
    pub total_iterations: usize,
    /// Windows whose local syndrome did not vanish.
    pub failed_windows: usize,
}

impl SlidingOutput {
    pub fn avg_iterations(&self) -> f64 {
        if self.windows == 0 {
            0.0
        } else {
            self.total_iterations as f64 / self.windows as f64
        }
    }
}

/// Window decoder for a zero-tail terminated stream of a monomial
/// convolutional code.
///
/// At position `t` the window holds check blocks `t .. t + W` and bit blocks
/// `t - m_h .. t + W`, with `W = alpha (m_h + 1)`. Blocks outside the stream
/// (known zeros) enter pinned at the clipping level. After BP the `a` bits of
/// block `t` are decided and the window advances by one block; later windows
/// see a decided bit through its final posterior LLR rather than a hard
/// value, which keeps a wrong decision from dragging its neighbours along.
#[derive(Debug, Clone)]
pub struct SlidingWindowDecoder {
    a: usize,
    memory: usize,
    window: usize,
    clip: f64,
    bp: BpDecoder,
}

fn window_graph(spec: &ConvCodeSpec, window: usize) -> BinaryParityCheck {
    let (c, a) = (spec.check_rows(), spec.bit_cols());
    let memory = spec.memory_order() as usize;
    let mut positions = Vec::new();
    for u in 0..window + memory {
        for i in 0..c {
            for j in 0..a {
                // bit block u sits in check block u - m_h + p
                let r = u + spec.exponents().get(i, j) as usize;
                if r >= memory && r - memory < window {
                    positions.push(((r - memory) * c + i, u * a + j));
                }
            }
        }
    }
    BinaryParityCheck::from_positions(window * c, (window + memory) * a, positions)
        .expect("positions in range")
}

impl SlidingWindowDecoder {
    pub fn new(spec: &ConvCodeSpec, alpha: usize) -> Result<Self> {
        Self::with_clip(spec, alpha, DEFAULT_CLIP)
    }

    pub fn with_clip(spec: &ConvCodeSpec, alpha: usize, clip: f64) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidSimConfig(
                "window multiplier must be at least 1".into(),
            ));
        }
        let memory = spec.memory_order() as usize;
        let window = alpha * (memory + 1);
        let graph = window_graph(spec, window);
        Ok(SlidingWindowDecoder {
            a: spec.bit_cols(),
            memory,
            window,
            clip,
            bp: BpDecoder::with_clip(&graph, clip),
        })
    }

    /// Window size in blocks.
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn decode(&mut self, llr: &[f64], max_iter: usize) -> Result<SlidingOutput> {
        let a = self.a;
        if llr.len() < self.window * a {
            return Err(Error::StreamTooShort {
                needed: self.window * a,
                found: llr.len(),
            });
        }
        if !llr.len().is_multiple_of(a) {
            return Err(Error::InvalidSimConfig(format!(
                "stream length {} is not a multiple of the block length {a}",
                llr.len()
            )));
        }
        let blocks = llr.len() / a;
        let span = self.window + self.memory;
        let mut committed: Vec<bool> = Vec::with_capacity(llr.len());
        let mut committed_llr: Vec<f64> = Vec::with_capacity(llr.len());
        let mut local = vec![0.0; span * a];
        let mut total_iterations = 0;
        let mut failed_windows = 0;

        for t in 0..blocks {
            for u in 0..span {
                let s = (t + u) as isize - self.memory as isize;
                let dst = &mut local[u * a..(u + 1) * a];
                if s < 0 || s as usize >= blocks {
                    dst.fill(self.clip);
                } else if (s as usize) < t {
                    dst.copy_from_slice(&committed_llr[s as usize * a..(s as usize + 1) * a]);
                } else {
                    dst.copy_from_slice(&llr[s as usize * a..(s as usize + 1) * a]);
                }
            }
            let out = self.bp.decode(&local, max_iter)?;
            total_iterations += out.iterations;
            failed_windows += usize::from(!out.syndrome_ok);
            let target = self.memory * a..(self.memory + 1) * a;
            committed.extend_from_slice(&out.bits[target.clone()]);
            let clip = self.clip;
            committed_llr.extend(
                self.bp.posteriors()[target]
                    .iter()
                    .map(|l| l.clamp(-clip, clip)),
            );
        }
        Ok(SlidingOutput {
            bits: committed,
            windows: blocks,
            total_iterations,
            failed_windows,
        })
    }
}

pub fn decode_sliding_window(
    spec: &ConvCodeSpec,
    llr: &[f64],
    alpha: usize,
    max_iter: usize,
) -> Result<SlidingOutput> {
    SlidingWindowDecoder::new(spec, alpha)?.decode(llr, max_iter)
}
