use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no analyzable content after tokenization")]
    NoAnalyzableContent,

    #[error("text too short: need at least 2 tokens, got {n}")]
    TextTooShort { n: usize },

    #[error(
        "shift out of range: r(n) - R_n has the same sign at both bracket ends \
         (residual {lo_resid:.3} at q={lo}, {hi_resid:.3} at q={hi})"
    )]
    ShiftOutOfRange {
        lo: f64,
        hi: f64,
        lo_resid: f64,
        hi_resid: f64,
    },

    #[error("degenerate spectrum: fewer than 2 positive eigenvalues")]
    DegenerateSpectrum,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
