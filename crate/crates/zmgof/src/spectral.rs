//! Covariance kernels of the limiting deviation process and their
//! eigenvalues via Galerkin projection on the sine basis.

use crate::error::{Error, Result};
use crate::quad::{integrate_cells, osc_edges};
use std::f64::consts::{LN_2, PI};

/// eigenvalues below this are truncation noise and excluded from `lambda`
pub const NU_CUTOFF: f64 = 1e-8;
pub const DEFAULT_BASIS_SIZE: usize = 100;

/// K(s,t) = (s+t)^θ − max(s^θ, t^θ).
pub fn kernel_k(s: f64, t: f64, theta: f64) -> f64 {
    (s + t).powf(theta) - s.powf(theta).max(t.powf(theta))
}

/// K⁰(s,t) = K(s,t) − s^θK(1,t) − t^θK(s,1) + s^θt^θK(1,1); vanishes on
/// the s=1 and t=1 edges.
pub fn kernel_k0(s: f64, t: f64, theta: f64) -> f64 {
    let st = s.powf(theta);
    let tt = t.powf(theta);
    kernel_k(s, t, theta) - st * kernel_k(1.0, t, theta) - tt * kernel_k(s, 1.0, theta)
        + st * tt * kernel_k(1.0, 1.0, theta)
}

/// K̂(s,t): K⁰ plus the four log-correction terms induced by estimating θ
/// from the half-text ratio.  Vanishes at s=1, t=1, s=0, t=0 and on the
/// diagonal point (1/2, 1/2).
pub fn kernel_khat(s: f64, t: f64, theta: f64) -> f64 {
    if s == 0.0 || t == 0.0 {
        // s^θ log s → 0 and K(0,·) = 0
        return 0.0;
    }
    let p2 = 2f64.powf(theta);
    let st = s.powf(theta);
    let tt = t.powf(theta);
    let ls = s.ln();
    let lt = t.ln();
    let k11 = p2 - 1.0;
    let k1h = 1.5f64.powf(theta) - 1.0;
    let khh = 1.0 - 0.5f64.powf(theta);
    let ks1 = kernel_k(s, 1.0, theta);
    let kt1 = kernel_k(t, 1.0, theta);
    let ksh = kernel_k(s, 0.5, theta);
    let kth = kernel_k(t, 0.5, theta);
    let c1 = k11 - p2 * k1h;
    let c2 = k11 - 2.0 * p2 * k1h + p2 * p2 * khh;
    let k0 = kernel_k(s, t, theta) - st * kt1 - tt * ks1 + st * tt * k11;
    k0 - tt * lt * (ks1 - p2 * ksh) / LN_2 - st * ls * (kt1 - p2 * kth) / LN_2
        + st * tt * (ls + lt) * c1 / LN_2
        + st * tt * ls * lt * c2 / (LN_2 * LN_2)
}

/// ∫₀¹ K̂(t,t) dt by dyadic-cell quadrature (integrand has unbounded
/// derivatives at 0 and a kink at 1/2, which is a cell edge).
pub fn khat_trace(theta: f64) -> f64 {
    let mut edges = vec![0.0];
    for j in (1..=60).rev() {
        edges.push((0.5f64).powi(j));
    }
    edges.extend_from_slice(&[0.625, 0.75, 0.875, 1.0]);
    integrate_cells(|t| kernel_khat(t, t, theta), &edges)
}

/// ∫₀ˣ t^θ sin(πkt) dt (or cos with `cosine`), one half-period per cell
/// scaled by `refine`, first cell dyadically split for the t^θ kink.
fn power_trig_integral(theta: f64, k: usize, x: f64, cosine: bool, refine: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if k == 0 {
        return if cosine {
            x.powf(theta + 1.0) / (theta + 1.0)
        } else {
            0.0
        };
    }
    let ncell = ((2.0 * k as f64 * x).ceil() as usize).max(1) * refine;
    let kk = PI * k as f64;
    let edges = osc_edges(x, ncell);
    if cosine {
        integrate_cells(|t| t.powf(theta) * (kk * t).cos(), &edges)
    } else {
        integrate_cells(|t| t.powf(theta) * (kk * t).sin(), &edges)
    }
}

pub fn power_sine_integral(theta: f64, k: usize, x: f64) -> f64 {
    power_trig_integral(theta, k, x, false, 1)
}

pub fn power_cosine_integral(theta: f64, k: usize, x: f64) -> f64 {
    power_trig_integral(theta, k, x, true, 1)
}

/// same integral on a doubled grid, erroring if the two grids disagree
fn power_trig_checked(theta: f64, k: usize, x: f64, cosine: bool, label: &str) -> Result<f64> {
    let coarse = power_trig_integral(theta, k, x, cosine, 1);
    let fine = power_trig_integral(theta, k, x, cosine, 2);
    if (coarse - fine).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "quadrature for {label} at index {k}, x = {x} disagrees between grids by {:.2e}",
            (coarse - fine).abs()
        )));
    }
    Ok(fine)
}

fn log_sine_edges(i: usize, refine: usize) -> Vec<f64> {
    // dyadic cells handle the log singularity on [0, b0], half-period
    // cells the oscillation on [b0, 1]
    let b0 = (1.0 / (2.0 * i as f64)).min(0.5);
    let mut edges = vec![0.0];
    for j in (1..=60).rev() {
        edges.push(b0 * (0.5f64).powi(j));
    }
    let ncell = ((2.0 * i as f64 * (1.0 - b0)).ceil() as usize).max(1) * refine;
    for c in 0..=ncell {
        edges.push(b0 + (1.0 - b0) * c as f64 / ncell as f64);
    }
    edges
}

/// ∫₀¹ t^θ log t sin(πit) dt.
pub fn power_log_sine_integral(theta: f64, i: usize) -> f64 {
    let f = |t: f64| t.powf(theta) * t.ln() * (PI * i as f64 * t).sin();
    integrate_cells(f, &log_sine_edges(i, 1))
}

fn power_log_sine_checked(theta: f64, i: usize) -> Result<f64> {
    let coarse = power_log_sine_integral(theta, i);
    let f = |t: f64| t.powf(theta) * t.ln() * (PI * i as f64 * t).sin();
    let fine = integrate_cells(f, &log_sine_edges(i, 2));
    if (coarse - fine).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "log-weighted quadrature at index {i} disagrees between grids by {:.2e}",
            (coarse - fine).abs()
        )));
    }
    Ok(fine)
}

/// (cos(πi/2), sin(πi/2)) exactly for integer i
fn quarter_turn(i: usize) -> (f64, f64) {
    match i % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

/// The scalar integral tables the matrix assembly is built from, all at a
/// fixed θ.  Index 0 is unused (identically 0).
pub struct Blocks {
    pub basis: usize,
    /// a[k] = ∫₀¹ t^θ sin(πkt) dt for k ≤ 2·basis
    pub a: Vec<f64>,
    /// b[i] = ∫₁² t^θ sin(πit) dt
    pub b: Vec<f64>,
    /// c[i] = ∫₀¹ t^{θ+1} cos(πit) dt
    pub c: Vec<f64>,
    /// d[i] = ∫₁² t^θ (2−t) cos(πit) dt
    pub d: Vec<f64>,
    /// f[i] = ∫₀¹ K(t,1) sin(πit) dt = (−1)^i b[i] + ((−1)^i − 1)/(πi)
    pub f: Vec<f64>,
    /// g[i] = ∫₀¹ t^θ log t sin(πit) dt
    pub g: Vec<f64>,
    /// h[i] = ∫₀¹ K(t,1/2) sin(πit) dt, assembled from shifted moments
    pub h: Vec<f64>,
}

pub fn building_blocks(theta: f64, basis: usize) -> Result<Blocks> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, 1)")));
    }
    if basis < 1 {
        return Err(Error::Config("basis size must be at least 1".into()));
    }
    let mut a = vec![0.0; 2 * basis + 1];
    for (k, slot) in a.iter_mut().enumerate().skip(1) {
        *slot = power_trig_checked(theta, k, 1.0, false, "t^θ sin")?;
    }
    let n1 = basis + 1;
    let (mut b, mut c, mut d) = (vec![0.0; n1], vec![0.0; n1], vec![0.0; n1]);
    let (mut f, mut g, mut h) = (vec![0.0; n1], vec![0.0; n1], vec![0.0; n1]);
    let p2neg = (0.5f64).powf(theta);
    for i in 1..=basis {
        let a2 = power_trig_checked(theta, i, 2.0, false, "t^θ sin")?;
        b[i] = a2 - a[i];
        c[i] = power_trig_checked(theta + 1.0, i, 1.0, true, "t^{θ+1} cos")?;
        let b_t_2 = power_trig_checked(theta, i, 2.0, true, "t^θ cos")?;
        let b_t_1 = power_trig_checked(theta, i, 1.0, true, "t^θ cos")?;
        let b_t1_2 = power_trig_checked(theta + 1.0, i, 2.0, true, "t^{θ+1} cos")?;
        d[i] = 2.0 * b_t_2 - 2.0 * b_t_1 - b_t1_2 + c[i];
        let sgn = if i % 2 == 1 { -1.0 } else { 1.0 };
        f[i] = sgn * b[i] + (sgn - 1.0) / (PI * i as f64);
        g[i] = power_log_sine_checked(theta, i)?;
        let (ci, si) = quarter_turn(i);
        let a_15 = power_trig_checked(theta, i, 1.5, false, "t^θ sin")?;
        let a_05 = power_trig_checked(theta, i, 0.5, false, "t^θ sin")?;
        let b_15 = power_trig_checked(theta, i, 1.5, true, "t^θ cos")?;
        let b_05 = power_trig_checked(theta, i, 0.5, true, "t^θ cos")?;
        h[i] = ci * (a_15 - a_05) - si * (b_15 - b_05) + (ci - 1.0) * p2neg / (PI * i as f64)
            - a[i]
            + a_05;
    }
    Ok(Blocks {
        basis,
        a,
        b,
        c,
        d,
        f,
        g,
        h,
    })
}

/// J_ij = ∫₀¹∫₀¹ (s+t)^θ sin(πis) sin(πjt) ds dt by its closed forms.
pub(crate) fn j_entry(bl: &Blocks, i: usize, j: usize) -> f64 {
    if i == j {
        (bl.a[i] - bl.b[i]) / (2.0 * PI * i as f64) - (bl.c[i] + bl.d[i]) / 2.0
    } else {
        let sgn = if (i + j) % 2 == 1 { -1.0 } else { 1.0 };
        let (fi, fj) = (i as f64, j as f64);
        (fi * bl.a[j] - fj * bl.a[i] - sgn * (fi * bl.b[j] - fj * bl.b[i]))
            / (PI * (fi * fi - fj * fj))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    pub theta: f64,
    pub basis_size: usize,
}

impl KernelConfig {
    pub fn new(theta: f64) -> Result<Self> {
        Self::with_basis(theta, DEFAULT_BASIS_SIZE)
    }

    pub fn with_basis(theta: f64, basis_size: usize) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Domain(format!("theta = {theta} outside (0, 1)")));
        }
        if basis_size < 1 {
            return Err(Error::Config("basis size must be at least 1".into()));
        }
        Ok(KernelConfig { theta, basis_size })
    }
}

/// q_ij = ∫₀¹∫₀¹ K̂(s,t) sin(πis) sin(πjt) ds dt, assembled from the
/// closed-form blocks.  Exactly symmetric by construction.
pub fn q_matrix(cfg: &KernelConfig) -> Result<Vec<Vec<f64>>> {
    let bl = building_blocks(cfg.theta, cfg.basis_size)?;
    Ok(q_from_blocks(cfg.theta, &bl))
}

fn q_from_blocks(theta: f64, bl: &Blocks) -> Vec<Vec<f64>> {
    let nb = bl.basis;
    let p2 = 2f64.powf(theta);
    let k11 = p2 - 1.0;
    let k1h = 1.5f64.powf(theta) - 1.0;
    let khh = 1.0 - 0.5f64.powf(theta);
    let c1 = (k11 - p2 * k1h) / LN_2;
    let c2 = (k11 - 2.0 * p2 * k1h + p2 * p2 * khh) / (LN_2 * LN_2);
    // E_ij = (a_{i+j} + a_{i−j})/2 with a_{−k} = −a_k, a₀ = 0
    let signed_a = |k: isize| -> f64 {
        match k {
            0 => 0.0,
            k if k > 0 => bl.a[k as usize],
            k => -bl.a[(-k) as usize],
        }
    };
    let mut q = vec![vec![0.0; nb]; nb];
    for i in 1..=nb {
        for j in 1..=i {
            let (ai, aj) = (bl.a[i], bl.a[j]);
            let diff = signed_a(i as isize - j as isize);
            let e_ij = 0.5 * (bl.a[i + j] + diff);
            let e_ji = 0.5 * (bl.a[i + j] - diff);
            let val = j_entry(bl, i, j)
                - (ai - e_ij) / (PI * j as f64)
                - (aj - e_ji) / (PI * i as f64)
                - ai * bl.f[j]
                - aj * bl.f[i]
                + k11 * ai * aj
                - bl.g[j] * (bl.f[i] - p2 * bl.h[i]) / LN_2
                - bl.g[i] * (bl.f[j] - p2 * bl.h[j]) / LN_2
                + (ai * bl.g[j] + aj * bl.g[i]) * c1
                + bl.g[i] * bl.g[j] * c2;
            q[i - 1][j - 1] = val;
            q[j - 1][i - 1] = val;
        }
    }
    q
}

/// Cyclic Jacobi for a symmetric matrix; returns unsorted eigenvalues and
/// the orthogonal matrix whose columns are the matching eigenvectors.
/// Off-diagonal residual is driven below 1e-13 of the Frobenius norm.
pub(crate) fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (r, row) in v.iter_mut().enumerate() {
        row[r] = 1.0;
    }
    let fro: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() <= 1e-13 * fro.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[r][p];
                        let arq = a[r][q];
                        a[r][p] = arp - s * (arq + tau * arp);
                        a[p][r] = a[r][p];
                        a[r][q] = arq + s * (arp - tau * arq);
                        a[q][r] = a[r][q];
                    }
                }
                for row in v.iter_mut() {
                    let vrp = row[p];
                    let vrq = row[q];
                    row[p] = vrp - s * (vrq + tau * vrp);
                    row[q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i]).collect();
    (diag, v)
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub theta: f64,
    pub basis_size: usize,
    /// kernel eigenvalue approximations, descending: eigenvalues of 2Q
    /// (the assembly uses non-normalized sines; ∫sin²(πkt)dt = 1/2, so the
    /// operator matrix in the orthonormal basis {√2 sin πkt} is 2Q)
    pub nu: Vec<f64>,
    /// weights of the limiting quadratic form, ascending: λ = 2/ν = 1/eig(Q)
    /// over ν > NU_CUTOFF; simulation calibration pins Q, not 2Q, here
    pub lambda: Vec<f64>,
    /// vectors[k] = coordinates of the k-th eigenfunction (aligned with
    /// nu[k]) in the orthonormal sine basis
    pub vectors: Vec<Vec<f64>>,
}

pub fn eigen_decompose(q: &[Vec<f64>], theta: f64, basis_size: usize) -> SpectralDecomposition {
    let n = q.len();
    let doubled: Vec<Vec<f64>> = q
        .iter()
        .map(|row| row.iter().map(|x| 2.0 * x).collect())
        .collect();
    let (vals, vecs) = jacobi_eigen(doubled);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
    let nu: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|r| vecs[r][col]).collect())
        .collect();
    let lambda: Vec<f64> = nu
        .iter()
        .take_while(|&&v| v > NU_CUTOFF)
        .map(|&v| 2.0 / v)
        .collect();
    SpectralDecomposition {
        theta,
        basis_size,
        nu,
        lambda,
        vectors,
    }
}

impl SpectralDecomposition {
    pub fn compute(cfg: &KernelConfig) -> Result<Self> {
        let q = q_matrix(cfg)?;
        Ok(eigen_decompose(&q, cfg.theta, cfg.basis_size))
    }

    /// value of the k-th eigenfunction at t
    pub fn eigenfunction(&self, k: usize, t: f64) -> f64 {
        let root2 = std::f64::consts::SQRT_2;
        self.vectors[k]
            .iter()
            .enumerate()
            .map(|(j, &cj)| cj * root2 * (PI * (j + 1) as f64 * t).sin())
            .sum()
    }
}

// ---------------------------------------------------------------------
// Series evaluation of the same integrals (generalized hypergeometric
// closed forms).  The alternating series cancels catastrophically as k·x
// grows, so terms accumulate in double-double arithmetic and every value
// is returned with a self-assessed absolute error bound; callers must
// ignore values whose bound is above their tolerance.
// ---------------------------------------------------------------------

mod dd {
    //! minimal double-double arithmetic (~31 significant digits)

    #[derive(Debug, Clone, Copy)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    impl Dd {
        pub fn new(x: f64) -> Dd {
            Dd { hi: x, lo: 0.0 }
        }

        /// exact a + b; `Dd::new(a + b)` would round to 53 bits first
        pub fn from_sum(a: f64, b: f64) -> Dd {
            let (hi, lo) = two_sum(a, b);
            Dd { hi, lo }
        }

        pub fn add(self, o: Dd) -> Dd {
            // full-accuracy form; the cheaper variant loses low bits when
            // the high parts cancel, which alternating series do constantly
            let (s1, s2) = two_sum(self.hi, o.hi);
            let (t1, t2) = two_sum(self.lo, o.lo);
            let (s1, s2) = quick_two_sum(s1, s2 + t1);
            let (hi, lo) = quick_two_sum(s1, s2 + t2);
            Dd { hi, lo }
        }

        pub fn mul(self, o: Dd) -> Dd {
            let (p, e) = two_prod(self.hi, o.hi);
            let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
            Dd { hi, lo }
        }

        pub fn div(self, o: Dd) -> Dd {
            let q1 = self.hi / o.hi;
            let r1 = self.add(o.mul(Dd::new(-q1)));
            let q2 = r1.hi / o.hi;
            let r2 = r1.add(o.mul(Dd::new(-q2)));
            let q3 = r2.hi / o.hi;
            let (hi, lo) = quick_two_sum(q1, q2);
            Dd { hi, lo }.add(Dd::new(q3))
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }
    }
}

use dd::Dd;

/// relative rounding floor of the double-double accumulation
const DD_EPS: f64 = 1e-31;

/// ₁F₂(a; b1, b2; z) with an absolute error bound from the largest term
fn hyp_1f2(a: f64, b1: f64, b2: f64, z: Dd) -> (f64, f64) {
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    let mut max_abs = 1.0f64;
    let mut last = 1.0f64;
    for m in 0..700 {
        let mf = m as f64;
        let num = Dd::from_sum(a, mf).mul(z);
        let den = Dd::from_sum(b1, mf)
            .mul(Dd::from_sum(b2, mf))
            .mul(Dd::new(mf + 1.0));
        term = term.mul(num).div(den);
        sum = sum.add(term);
        last = term.to_f64().abs();
        max_abs = max_abs.max(last);
        if last < 1e-34 * sum.to_f64().abs().max(1e-280) {
            break;
        }
    }
    (sum.to_f64(), max_abs * DD_EPS + last)
}

/// series form of ∫₀ˣ t^θ sin(πkt) dt:
/// πk x^{θ+2}/(θ+2) · ₁F₂(θ/2+1; 3/2, θ/2+2; −(πkx)²/4)
pub fn power_sine_series(theta: f64, k: usize, x: f64) -> (f64, f64) {
    if k == 0 || x == 0.0 {
        return (0.0, 0.0);
    }
    let pkx = dd::PI.mul(Dd::new(k as f64)).mul(Dd::new(x));
    let z = pkx.mul(pkx).mul(Dd::new(-0.25));
    let (fval, ferr) = hyp_1f2(theta / 2.0 + 1.0, 1.5, theta / 2.0 + 2.0, z);
    let pref = PI * k as f64 * x.powf(theta + 2.0) / (theta + 2.0);
    (pref * fval, pref.abs() * ferr)
}

/// series form of ∫₀ˣ t^θ cos(πkt) dt:
/// x^{θ+1}/(θ+1) · ₁F₂(θ/2+1/2; 1/2, θ/2+3/2; −(πkx)²/4)
pub fn power_cosine_series(theta: f64, k: usize, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 0.0);
    }
    if k == 0 {
        return (x.powf(theta + 1.0) / (theta + 1.0), 0.0);
    }
    let pkx = dd::PI.mul(Dd::new(k as f64)).mul(Dd::new(x));
    let z = pkx.mul(pkx).mul(Dd::new(-0.25));
    let (fval, ferr) = hyp_1f2(theta / 2.0 + 0.5, 0.5, theta / 2.0 + 1.5, z);
    let pref = x.powf(theta + 1.0) / (theta + 1.0);
    (pref * fval, pref.abs() * ferr)
}

/// series form of ∫₀¹ t^θ log t sin(πit) dt:
/// −Σ_m (−1)^m (πi)^{2m+1} / ((2m+1)! (2m+θ+2)²)
pub fn power_log_sine_series(theta: f64, i: usize) -> (f64, f64) {
    let pi_i = dd::PI.mul(Dd::new(i as f64));
    let u = pi_i.mul(pi_i);
    let d0 = Dd::from_sum(theta, 2.0);
    let mut term = pi_i.div(d0.mul(d0));
    let mut sum = term;
    let mut max_abs = term.to_f64().abs();
    let mut last = max_abs;
    for m in 0..700 {
        let mf = m as f64;
        // (−1) u / ((2m+2)(2m+3)) · ((2m+θ+2)/(2m+θ+4))²
        let dm = Dd::from_sum(2.0 * mf + 2.0, theta);
        let dm2 = Dd::from_sum(2.0 * mf + 4.0, theta);
        let ratio = dm.div(dm2);
        term = term
            .mul(u)
            .mul(Dd::new(-1.0))
            .div(Dd::new((2.0 * mf + 2.0) * (2.0 * mf + 3.0)))
            .mul(ratio)
            .mul(ratio);
        sum = sum.add(term);
        last = term.to_f64().abs();
        max_abs = max_abs.max(last);
        if last < 1e-34 * sum.to_f64().abs().max(1e-280) {
            break;
        }
    }
    (-sum.to_f64(), max_abs * DD_EPS + last)
}
