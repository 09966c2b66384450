//! The Zipf-Mandelbrot law: p_i = c(i+q)^{-α}, its expected distinct-word
//! curve r(k), and the bisection solve for the shift parameter.

use crate::error::{Error, Result};
use crate::special::{hurwitz_zeta, lower_inc_gamma};

/// Default truncation rank for the exact head of r(k).
pub const DEFAULT_M_TRUNC: usize = 1000;

/// Bracket for the shift bisection.
pub const Q_BRACKET: (f64, f64) = (-0.9, 40.0);

/// Number of bisection steps in `fit_shift`.
pub const FIT_ITERATIONS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZMParams {
    pub theta: f64,
    pub q: f64,
    /// α = 1/θ
    pub alpha: f64,
    /// normalizer c = 1/ζ(α, q+1)
    pub c: f64,
}

impl ZMParams {
    pub fn new(theta: f64, q: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Domain(format!("theta = {theta} outside (0, 1)")));
        }
        if !(q > -1.0) {
            return Err(Error::Domain(format!("shift q = {q} must exceed -1")));
        }
        let alpha = 1.0 / theta;
        let c = 1.0 / hurwitz_zeta(alpha, q + 1.0)?;
        Ok(ZMParams { theta, q, alpha, c })
    }

    /// p_i = c(i+q)^{-α}, i ≥ 1.
    pub fn probability(&self, i: u64) -> f64 {
        assert!(i >= 1, "word rank starts at 1");
        self.c * (i as f64 + self.q).powf(-self.alpha)
    }

    /// Expected number of distinct words among k i.i.d. draws:
    /// exact sum over the first M ranks plus an integral tail,
    ///   r(k) = Σ_{i≤M} (1-(1-p_i)^k)
    ///        + (kc)^θ γ(1-θ, kcN^{-α}) - N(1 - e^{-kcN^{-α}}),  N = M + 1/2 + q.
    pub fn expected_distinct(&self, k: u64, m_trunc: usize) -> Result<f64> {
        Ok(self.expected_distinct_curve(&[k], m_trunc)?[0])
    }

    /// r(k) for several k, amortizing the per-rank head setup.
    pub fn expected_distinct_curve(&self, ks: &[u64], m_trunc: usize) -> Result<Vec<f64>> {
        if m_trunc < 1 {
            return Err(Error::Config("m_trunc must be at least 1".into()));
        }
        let m = m_trunc;
        // log(1 - p_i) for the exact head; log1p keeps accuracy for tiny p_i
        let l_head: Vec<f64> = (1..=m as u64)
            .map(|i| (-self.probability(i)).ln_1p())
            .collect();
        let n_eff = m as f64 + 0.5 + self.q;
        let u_coef = self.c * n_eff.powf(-self.alpha);
        let mut out = Vec::with_capacity(ks.len());
        for &k in ks {
            if k == 0 {
                out.push(0.0);
                continue;
            }
            let kf = k as f64;
            let mut head = 0.0;
            for &l in &l_head {
                head += 1.0 - (kf * l).exp();
            }
            let u = kf * u_coef;
            let tail = (kf * self.c).powf(self.theta) * lower_inc_gamma(1.0 - self.theta, u)?
                - n_eff * (1.0 - (-u).exp());
            out.push(head + tail);
        }
        Ok(out)
    }
}

/// Result of the shift fit: the bisection midpoint and diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct ShiftFit {
    pub q_hat: f64,
    /// r(n; θ̂, q̂) - Rₙ at the returned midpoint
    pub residual: f64,
}

/// Solve r(n; θ̂, q) = Rₙ for q by exactly 20 bisections of [-0.9, 40].
///
/// The direction of r(n; ·) in q is detected from the endpoint evaluations
/// rather than assumed. Equal signs at both ends fail with the endpoint
/// residuals attached.
pub fn fit_shift(theta_hat: f64, n: u64, r_n: u64, m_trunc: usize) -> Result<ShiftFit> {
    if !(theta_hat > 0.0 && theta_hat <= 0.95) {
        return Err(Error::Domain(format!(
            "theta_hat = {theta_hat} outside (0, 0.95]"
        )));
    }
    if r_n < 1 || r_n > n {
        return Err(Error::Domain(format!("R_n = {r_n} outside [1, n = {n}]")));
    }
    let target = r_n as f64;
    let g = |q: f64| -> Result<f64> {
        Ok(ZMParams::new(theta_hat, q)?.expected_distinct(n, m_trunc)? - target)
    };
    let (mut lo, mut hi) = Q_BRACKET;
    let g_lo = g(lo)?;
    let g_hi = g(hi)?;
    if g_lo * g_hi > 0.0 {
        return Err(Error::ShiftOutOfRange {
            lo,
            hi,
            lo_resid: g_lo,
            hi_resid: g_hi,
        });
    }
    let increasing = g_hi > g_lo;
    for _ in 0..FIT_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if (gm > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let q_hat = 0.5 * (lo + hi);
    let residual = g(q_hat)?;
    Ok(ShiftFit { q_hat, residual })
}
