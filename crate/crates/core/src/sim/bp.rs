use serde::{Deserialize, Serialize};

use crate::code_model::BinaryParityCheck;
use crate::error::{Error, Result};

/// Default magnitude limit for channel and extrinsic LLRs.
pub const DEFAULT_CLIP: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpOutput {
    /// Hard decisions, `true` for bit 1.
    pub bits: Vec<bool>,
    pub iterations: usize,
    pub syndrome_ok: bool,
}

/// Sum-product decoder in the tanh domain with preallocated message buffers,
/// reusable across frames of the same code.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    cols: usize,
    clip: f64,
    // edges are numbered check by check
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_start: Vec<usize>,
    var_edges: Vec<usize>,
    to_check: Vec<f64>,
    to_var: Vec<f64>,
    tanh_buf: Vec<f64>,
    total: Vec<f64>,
}

impl BpDecoder {
    pub fn new(h: &BinaryParityCheck) -> Self {
        Self::with_clip(h, DEFAULT_CLIP)
    }

    pub fn with_clip(h: &BinaryParityCheck, clip: f64) -> Self {
        let mut check_start = Vec::with_capacity(h.row_count() + 1);
        let mut edge_var = Vec::with_capacity(h.ones());
        check_start.push(0);
        for r in 0..h.row_count() {
            edge_var.extend_from_slice(h.row(r));
            check_start.push(edge_var.len());
        }
        let mut var_start = vec![0; h.col_count() + 1];
        for &v in &edge_var {
            var_start[v + 1] += 1;
        }
        for v in 0..h.col_count() {
            var_start[v + 1] += var_start[v];
        }
        let mut fill = var_start.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        let edges = edge_var.len();
        BpDecoder {
            cols: h.col_count(),
            clip,
            check_start,
            edge_var,
            var_start,
            var_edges,
            to_check: vec![0.0; edges],
            to_var: vec![0.0; edges],
            tanh_buf: vec![0.0; edges],
            total: vec![0.0; h.col_count()],
        }
    }

    pub fn clip(&self) -> f64 {
        self.clip
    }

    fn syndrome_ok(&self, bits: &[bool]) -> bool {
        self.check_start.windows(2).all(|w| {
            !self.edge_var[w[0]..w[1]]
                .iter()
                .fold(false, |acc, &v| acc ^ bits[v])
        })
    }

    pub fn decode(&mut self, llr: &[f64], max_iter: usize) -> Result<BpOutput> {
        if llr.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: llr.len(),
            });
        }
        let clip = self.clip;
        let channel: Vec<f64> = llr.iter().map(|l| l.clamp(-clip, clip)).collect();
        let mut bits: Vec<bool> = channel.iter().map(|&l| l < 0.0).collect();
        if self.syndrome_ok(&bits) {
            self.total.copy_from_slice(&channel);
            return Ok(BpOutput {
                bits,
                iterations: 0,
                syndrome_ok: true,
            });
        }
        for (e, &v) in self.edge_var.iter().enumerate() {
            self.to_check[e] = channel[v];
        }

        for iteration in 1..=max_iter {
            for w in self.check_start.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                for e in lo..hi {
                    self.tanh_buf[e] = (0.5 * self.to_check[e]).tanh();
                }
                // leave-one-out products from a forward and a backward sweep
                let mut prefix = 1.0;
                for e in lo..hi {
                    self.to_var[e] = prefix;
                    prefix *= self.tanh_buf[e];
                }
                let mut suffix = 1.0;
                for e in (lo..hi).rev() {
                    let product = (self.to_var[e] * suffix).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                    self.to_var[e] = (2.0 * product.atanh()).clamp(-clip, clip);
                    suffix *= self.tanh_buf[e];
                }
            }
            for v in 0..self.cols {
                let edges = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
                let total = channel[v] + edges.iter().map(|&e| self.to_var[e]).sum::<f64>();
                for &e in edges {
                    self.to_check[e] = (total - self.to_var[e]).clamp(-clip, clip);
                }
                self.total[v] = total;
                bits[v] = total < 0.0;
            }
            if self.syndrome_ok(&bits) {
                return Ok(BpOutput {
                    bits,
                    iterations: iteration,
                    syndrome_ok: true,
                });
            }
        }
        Ok(BpOutput {
            bits,
            iterations: max_iter,
            syndrome_ok: false,
        })
    }

    /// Posterior LLRs from the last iteration of the most recent decode.
    pub fn posteriors(&self) -> &[f64] {
        &self.total
    }
}

/// One-shot sum-product decoding of `llr` on the Tanner graph of `h`.
pub fn decode_bp(h: &BinaryParityCheck, llr: &[f64], max_iter: usize) -> Result<BpOutput> {
    BpDecoder::new(h).decode(llr, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming() -> BinaryParityCheck {
        // [7,4] Hamming code
        let rows = [[0, 1, 2, 4], [0, 1, 3, 5], [0, 2, 3, 6]];
        BinaryParityCheck::from_positions(
            3,
            7,
            rows.iter()
                .enumerate()
                .flat_map(|(r, cs)| cs.iter().map(move |&c| (r, c))),
        )
        .unwrap()
    }

    #[test]
    fn valid_word_needs_no_iterations() {
        let h = hamming();
        let word = [true, false, false, false, true, true, true];
        assert!(h.is_codeword(&word).unwrap());
        let llr: Vec<f64> = word.iter().map(|&b| if b { -8.0 } else { 8.0 }).collect();
        let out = decode_bp(&h, &llr, 50).unwrap();
        assert_eq!(
            (out.bits.as_slice(), out.iterations, out.syndrome_ok),
            (&word[..], 0, true)
        );
    }

    #[test]
    fn corrects_weak_flip() {
        let h = hamming();
        let mut llr = vec![4.0; 7];
        llr[3] = -1.0;
        let out = decode_bp(&h, &llr, 50).unwrap();
        assert!(out.syndrome_ok);
        assert!(out.bits.iter().all(|&b| !b));
        assert!(out.iterations >= 1);
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            decode_bp(&hamming(), &[1.0; 6], 5).unwrap_err(),
            Error::DimensionMismatch {
                expected: 7,
                found: 6
            }
        );
    }
}
