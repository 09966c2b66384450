//! Statistical testing of texts against the Zipf–Mandelbrot word-frequency
//! law.  The pipeline: tokenize a text, record how its distinct-word count
//! Rₖ grows, estimate the law's exponent and shift from that trajectory,
//! form the normalized deviation path, and convert its integrated square
//! into a p-value via the eigenvalues of the limiting covariance kernel.

// `!(x > 0.0)` checks reject NaN along with the out-of-range values; the
// long literals are published constants kept with their source's digits.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]
#![allow(clippy::needless_range_loop)]

pub mod bridge;
pub mod error;
pub mod estimate;
pub mod occupancy;
pub mod pipeline;
pub mod quad;
pub mod simulate;
pub mod smirnov;
pub mod special;
pub mod spectral;
pub mod tokenize;
pub mod zm;

pub use bridge::{empirical_bridge, empirical_text_bridge, omega_square, BridgeKind, BridgePath};
pub use error::{Error, Result};
pub use estimate::{estimate_theta, estimate_theta_general, AFunctional, ThetaEstimate};
pub use occupancy::{distinct_word_trajectory, WordTrajectory};
pub use pipeline::{analyze_text, ingest, Ingest, RunConfig, SpectrumCache};
pub use simulate::{
    analyze_ranks, ks_distance_uniform, mc_quadratic_form, null_pvalue_experiment, sample_text,
    sample_tokens, EmpiricalCdf, Experiment, SimConfig, ZmSampler, RNG_ALGORITHM,
};
pub use smirnov::{cdf_w2, p_value, CdfValue, Diagnostics, TestReport};
pub use spectral::{
    kernel_k, kernel_k0, kernel_khat, q_matrix, KernelConfig, SpectralDecomposition,
};
pub use tokenize::{Mode, TokenSequence, Tokenizer};
pub use zm::{fit_shift, ShiftFit, ZMParams};
