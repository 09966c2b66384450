//! Bridge processes built from the distinct-word trajectory, and the ω²
//! statistic of their linearly interpolated paths.

use crate::error::{Error, Result};
use crate::occupancy::WordTrajectory;
use crate::zm::ZMParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BridgeKind {
    /// centering by the pure power curve (k/n)^θ̂ Rₙ
    ZHat,
    /// centering by the fitted expectation r(k)
    ZTilde,
}

#[derive(Debug, Clone)]
pub struct BridgePath {
    /// a₀..aₙ at grid points k/n; the path is the linear interpolant
    pub values: Vec<f64>,
    pub n: usize,
    pub kind: BridgeKind,
}

/// Ẑₙ(k/n) = (Rₖ − (k/n)^θ̂ Rₙ)/√Rₙ.  Both endpoints are exactly zero.
pub fn empirical_bridge(traj: &WordTrajectory, theta_hat: f64) -> Result<BridgePath> {
    if traj.n < 2 {
        return Err(Error::TextTooShort { n: traj.n });
    }
    let n = traj.n;
    let rn = traj.r_n() as f64;
    let scale = rn.sqrt();
    let values = (0..=n)
        .map(|k| (traj.r[k] as f64 - (k as f64 / n as f64).powf(theta_hat) * rn) / scale)
        .collect();
    Ok(BridgePath {
        values,
        n,
        kind: BridgeKind::ZHat,
    })
}

/// Z̃ₙ(k/n) = (Rₖ − r(k))/√Rₙ with r the fitted expected-distinct curve.
/// |aₙ| is bounded by (fit residual)/√Rₙ when params came from fit_shift.
pub fn empirical_text_bridge(traj: &WordTrajectory, params_hat: &ZMParams) -> Result<BridgePath> {
    empirical_text_bridge_trunc(traj, params_hat, crate::zm::DEFAULT_M_TRUNC)
}

pub fn empirical_text_bridge_trunc(
    traj: &WordTrajectory,
    params_hat: &ZMParams,
    m_trunc: usize,
) -> Result<BridgePath> {
    if traj.n < 2 {
        return Err(Error::TextTooShort { n: traj.n });
    }
    let n = traj.n;
    let scale = (traj.r_n() as f64).sqrt();
    let ks: Vec<u64> = (0..=n as u64).collect();
    let r = params_hat.expected_distinct_curve(&ks, m_trunc)?;
    let values = (0..=n).map(|k| (traj.r[k] as f64 - r[k]) / scale).collect();
    Ok(BridgePath {
        values,
        n,
        kind: BridgeKind::ZTilde,
    })
}

/// ω² = (1/3n) Σ_{k=1}^{n−1} aₖ(2aₖ + a_{k+1}); with pinned endpoints this
/// is exactly ∫₀¹ of the squared linear interpolant.
pub fn omega_square(path: &BridgePath) -> f64 {
    let a = &path.values;
    let n = path.n;
    let mut acc = 0.0;
    for k in 1..n {
        acc += a[k] * (2.0 * a[k] + a[k + 1]);
    }
    acc / (3.0 * n as f64)
}

/// max_k |x_k − y_k| over shared grid points.
pub fn max_abs_gap(x: &BridgePath, y: &BridgePath) -> f64 {
    x.values
        .iter()
        .zip(&y.values)
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max)
}
