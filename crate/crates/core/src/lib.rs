//! Construction and validation of compact QC-LDPC block codes and monomial
//! SC-LDPC convolutional codes with large girth.
//!
//! The crate covers the whole design flow: greedy search of sequentially
//! multiplied column exponent matrices ([`smc`]), girth certification by
//! relation enumeration and by Tanner graph search ([`cycles`]), reduction of
//! the syndrome former memory of the derived convolutional code
//! ([`memory`]), and Monte Carlo evaluation under belief propagation
//! ([`sim`]).

pub mod code_model;
pub mod cycles;
pub mod error;
pub mod memory;
pub mod sim;
pub mod smc;

pub use code_model::{
    expand_to_binary, read_alist, terminated_matrix, to_conv_spec, to_syndrome_former,
    window_matrix, write_alist, BinaryParityCheck, ConvCodeSpec, ExponentMatrix, SyndromeFormer,
};
pub use cycles::{
    classify, cycle_sum, enumerate_relations, girth_conv, girth_oracle, girth_qc, CycleClass,
    CycleKind, CycleRelation, Girth, GirthReport, RelationSet,
};
pub use error::{Error, Result};
pub use memory::{
    minimize_memory, minimize_memory_exact, theta_mh, theta_n, theta_ratio, Compactness,
    LiftAssignment, MemoryMinimization, MinimizeOptions,
};
pub use sim::{
    decode_bp, decode_sliding_window, latency_report, run_ber, simulate_awgn_bpsk, BerCurve,
    BerPoint, DecoderKind, LatencyReport, SimCode, SimConfig, StopRule,
};
pub use smc::{
    base_column_ok, gamma_lower_bound, greedy_search, min_lifting_degree, smc_expand,
    BaseColumnStrategy, SearchConfig, SearchOutcome, SearchStats, SearchStatus, SmcSpec,
};
