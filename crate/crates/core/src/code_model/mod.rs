//! Code representations and the conversions between them: exponent matrix,
//! lifted binary parity-check matrix, and the syndrome former view of a
//! monomial convolutional code.

mod alist;
mod binary;
mod conv;
mod exponent;

pub use alist::{read_alist, write_alist};
pub use binary::BinaryParityCheck;
pub use conv::{
    terminated_matrix, to_conv_spec, to_syndrome_former, window_matrix, ConvCodeSpec,
    SyndromeFormer,
};
pub use exponent::ExponentMatrix;

use crate::error::{Error, Result};

/// Lifts `p` into its `mN x nN` binary parity-check matrix. Block `(i, j)` is
/// the identity with its rows cyclically shifted by `p_ij`, i.e. row `r` of
/// the block has its one in column `(r + p_ij) mod N`.
pub fn expand_to_binary(p: &ExponentMatrix) -> Result<BinaryParityCheck> {
    let n = p.lifting_degree().ok_or(Error::MissingLiftingDegree)? as usize;
    let mut positions = Vec::with_capacity(p.rows() * p.cols() * n);
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            let shift = p.get(i, j) as usize;
            positions.extend((0..n).map(|r| (i * n + r, j * n + (r + shift) % n)));
        }
    }
    BinaryParityCheck::from_positions(p.rows() * n, p.cols() * n, positions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_shift_is_identity() {
        let h = expand_to_binary(&ExponentMatrix::new(vec![vec![0]], Some(3)).unwrap()).unwrap();
        assert_eq!(
            h.to_dense(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn unit_shift_positions() {
        let h = expand_to_binary(&ExponentMatrix::new(vec![vec![1]], Some(3)).unwrap()).unwrap();
        assert_eq!(
            h.positions().collect::<Vec<_>>(),
            vec![(0, 1), (1, 2), (2, 0)]
        );
    }

    #[test]
    fn needs_lifting_degree() {
        let p = ExponentMatrix::new(vec![vec![1]], None).unwrap();
        assert_eq!(expand_to_binary(&p), Err(Error::MissingLiftingDegree));
    }
}
