//! Estimators of θ from the distinct-word trajectory: the half-text
//! log-ratio and its generalization to weighted functionals of log R.

use crate::error::{Error, Result};
use crate::occupancy::WordTrajectory;

pub const DEFAULT_THETA_FLOOR: f64 = 0.05;
pub const DEFAULT_THETA_CAP: f64 = 0.95;

#[derive(Debug, Clone, Copy)]
pub struct ThetaEstimate {
    /// clamped to [floor, cap]
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

fn clamp(raw: f64, floor: f64, cap: f64) -> ThetaEstimate {
    let value = raw.max(floor).min(cap);
    ThetaEstimate {
        value,
        raw,
        clamped: value != raw,
    }
}

/// θ̂ = log₂(Rₙ / R_{⌊n/2⌋}), clamped.
pub fn estimate_theta(traj: &WordTrajectory) -> Result<ThetaEstimate> {
    estimate_theta_with(traj, DEFAULT_THETA_FLOOR, DEFAULT_THETA_CAP)
}

pub fn estimate_theta_with(traj: &WordTrajectory, floor: f64, cap: f64) -> Result<ThetaEstimate> {
    if traj.n < 2 {
        return Err(Error::TextTooShort { n: traj.n });
    }
    let half = traj.r[traj.n / 2] as f64;
    let raw = (traj.r_n() as f64 / half).log2();
    Ok(clamp(raw, floor, cap))
}

/// A weighted functional t ↦ A(t) on (0, 1], given by atoms and optionally a
/// density, defining the estimator θ̂ = ∫₀¹ log⁺R_{[nt]} dA(t).
///
/// Admissibility requires ∫₀¹ log t dA(t) = 1 (to 1e-10) and support
/// bounded away from 0.
pub struct AFunctional {
    /// (location in (0,1], weight)
    pub atoms: Vec<(f64, f64)>,
    /// density on [lo, hi] ⊂ (0,1], integrated by composite Simpson
    pub density: Option<Density>,
}

pub struct Density {
    pub lo: f64,
    pub hi: f64,
    pub w: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

const SIMPSON_CELLS: usize = 4096;

fn simpson(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let h = (hi - lo) / SIMPSON_CELLS as f64;
    let mut acc = f(lo) + f(hi);
    for j in 1..SIMPSON_CELLS {
        let coef = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += coef * f(lo + h * j as f64);
    }
    acc * h / 3.0
}

impl AFunctional {
    /// The two-atom functional reproducing `estimate_theta`:
    /// mass -1/log2 at t = 1/2 and +1/log2 at t = 1.
    pub fn half_text() -> Self {
        let l2 = std::f64::consts::LN_2;
        AFunctional {
            atoms: vec![(0.5, -1.0 / l2), (1.0, 1.0 / l2)],
            density: None,
        }
    }

    /// ∫₀¹ log t dA(t), which admissibility requires to equal 1.
    pub fn log_moment(&self) -> f64 {
        let mut m: f64 = self.atoms.iter().map(|&(t, w)| w * t.ln()).sum();
        if let Some(d) = &self.density {
            m += simpson(d.lo, d.hi, |t| (d.w)(t) * t.ln());
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        for &(t, _) in &self.atoms {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::Config(format!("atom location {t} outside (0, 1]")));
            }
        }
        if let Some(d) = &self.density {
            if !(d.lo > 0.0 && d.lo < d.hi && d.hi <= 1.0) {
                return Err(Error::Config(format!(
                    "density support [{}, {}] not inside (0, 1]",
                    d.lo, d.hi
                )));
            }
        }
        let m = self.log_moment();
        if (m - 1.0).abs() > 1e-10 {
            return Err(Error::Config(format!(
                "functional not admissible: ∫ log t dA = {m}, need 1"
            )));
        }
        Ok(())
    }
}

/// θ̂ = ∫₀¹ log⁺R_{[nt]} dA(t): exact sum over atoms, composite quadrature
/// over the density part, then the usual clamp.
pub fn estimate_theta_general(
    traj: &WordTrajectory,
    a: &AFunctional,
    floor: f64,
    cap: f64,
) -> Result<ThetaEstimate> {
    if traj.n < 2 {
        return Err(Error::TextTooShort { n: traj.n });
    }
    a.validate()?;
    let n = traj.n as f64;
    let log_r = |t: f64| -> f64 {
        let k = (n * t).floor() as usize;
        let r = traj.r[k.min(traj.n)] as f64;
        if r > 1.0 {
            r.ln()
        } else {
            0.0
        }
    };
    let mut raw: f64 = self_atoms(a, &log_r);
    if let Some(d) = &a.density {
        raw += simpson(d.lo, d.hi, |t| (d.w)(t) * log_r(t));
    }
    Ok(clamp(raw, floor, cap))
}

fn self_atoms(a: &AFunctional, log_r: &impl Fn(f64) -> f64) -> f64 {
    a.atoms.iter().map(|&(t, w)| w * log_r(t)).sum()
}
