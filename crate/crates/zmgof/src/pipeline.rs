//! End-to-end analysis: raw text in, one report row out.
//!
//! The flow is tokenize → distinct-word trajectory → tail-ratio estimate of
//! θ → shift fit of q → fitted-expectation bridge → ω² → spectrum lookup →
//! p-value.  The eigensolve is by far the most expensive step, so spectra
//! are cached under the rounded estimate and shared across texts.

use crate::bridge::{empirical_bridge, empirical_text_bridge_trunc, max_abs_gap, omega_square};
use crate::error::Result;
use crate::estimate::{estimate_theta_with, ThetaEstimate, DEFAULT_THETA_CAP, DEFAULT_THETA_FLOOR};
use crate::occupancy::{distinct_word_trajectory, WordTrajectory};
use crate::smirnov::{p_value, Diagnostics, TestReport};
use crate::spectral::{KernelConfig, SpectralDecomposition, DEFAULT_BASIS_SIZE};
use crate::tokenize::{TokenSequence, Tokenizer};
use crate::zm::{fit_shift, ZMParams, DEFAULT_M_TRUNC};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Knobs for a single analysis run.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub tokenizer: Tokenizer,
    pub theta_floor: f64,
    pub theta_cap: f64,
    pub m_trunc: usize,
    pub basis_size: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tokenizer: Tokenizer::default(),
            theta_floor: DEFAULT_THETA_FLOOR,
            theta_cap: DEFAULT_THETA_CAP,
            m_trunc: DEFAULT_M_TRUNC,
            basis_size: DEFAULT_BASIS_SIZE,
        }
    }
}

/// Spectra keyed by (θ̂ rounded to 1e−6, basis size).  The estimate is
/// rounded before the eigensolve as well, so a cache hit and a fresh
/// computation yield the same numbers no matter which text arrived first.
pub struct SpectrumCache {
    map: Mutex<HashMap<(i64, usize), Arc<SpectralDecomposition>>>,
}

impl SpectrumCache {
    pub fn new() -> Self {
        SpectrumCache {
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn get_or_compute(
        &self,
        theta: f64,
        basis_size: usize,
    ) -> Result<Arc<SpectralDecomposition>> {
        let key = ((theta * 1e6).round() as i64, basis_size);
        if let Some(hit) = self.map.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        // computed outside the lock: a concurrent miss on another θ̂ should
        // not wait for this eigensolve
        let canonical = key.0 as f64 / 1e6;
        let spec = Arc::new(SpectralDecomposition::compute(&KernelConfig::with_basis(
            canonical, basis_size,
        )?)?);
        Ok(self.map.lock().unwrap().entry(key).or_insert(spec).clone())
    }
}

impl Default for SpectrumCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Everything derivable from a text before any model fitting: the token
/// sequence, its trajectory, and the θ estimate.  Kept separate so a
/// failed fit can still produce a partial table row.
pub struct Ingest {
    pub seq: TokenSequence,
    pub traj: WordTrajectory,
    pub theta: ThetaEstimate,
}

pub fn ingest(raw: &str, source_id: &str, cfg: &RunConfig) -> Result<Ingest> {
    let seq = cfg.tokenizer.tokenize(raw, source_id)?;
    let traj = distinct_word_trajectory(&seq.tokens)?;
    let theta = estimate_theta_with(&traj, cfg.theta_floor, cfg.theta_cap)?;
    Ok(Ingest { seq, traj, theta })
}

/// Fit, bridge, and score an ingested text.
pub fn complete(ing: &Ingest, cfg: &RunConfig, cache: &SpectrumCache) -> Result<TestReport> {
    let theta_hat = ing.theta.value;
    let traj = &ing.traj;
    let fit = fit_shift(theta_hat, traj.n as u64, traj.r_n(), cfg.m_trunc)?;
    let params = ZMParams::new(theta_hat, fit.q_hat)?;

    let ztilde = empirical_text_bridge_trunc(traj, &params, cfg.m_trunc)?;
    let omega2 = omega_square(&ztilde);
    let zhat = empirical_bridge(traj, theta_hat)?;
    let bridge_gap = max_abs_gap(&zhat, &ztilde);

    let spectrum = cache.get_or_compute(theta_hat, cfg.basis_size)?;
    let p = p_value(&spectrum, omega2)?;

    Ok(TestReport {
        source_id: ing.seq.source_id.clone(),
        n: traj.n as u64,
        r_n: traj.r_n(),
        theta_hat,
        q_hat: fit.q_hat,
        omega2,
        p_value: p.value,
        diagnostics: Diagnostics {
            singleton_ratio: traj.singleton_ratio(),
            clamped: ing.theta.clamped,
            fit_residual: fit.residual,
            bridge_gap,
            cdf_warning: p.pair_warning,
        },
    })
}

/// Convenience wrapper: full pipeline in one call.
pub fn analyze_text(
    raw: &str,
    source_id: &str,
    cfg: &RunConfig,
    cache: &SpectrumCache,
) -> Result<TestReport> {
    let ing = ingest(raw, source_id, cfg)?;
    complete(&ing, cfg, cache)
}
