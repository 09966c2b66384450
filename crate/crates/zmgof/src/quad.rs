//! Gauss-Legendre quadrature and cell-subdivided integration of
//! oscillatory integrands.

use std::sync::OnceLock;

/// Nodes and weights of the n-point Gauss-Legendre rule on (-1, 1).
///
/// Newton iteration on P_n with the three-term recurrence; standard
/// construction (cf. Numerical Recipes, gauleg).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root (descending order)
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(z) and P'_n(z)
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(16))
}

pub fn gl64() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(64))
}

/// Integrate f over consecutive cells [edges[i], edges[i+1]] with 16-point
/// Gauss-Legendre per cell.
pub fn integrate_cells<F: FnMut(f64) -> f64>(mut f: F, edges: &[f64]) -> f64 {
    let (x, w) = gl16();
    let mut total = 0.0;
    for win in edges.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for k in 0..x.len() {
            acc += w[k] * f(mid + half * x[k]);
        }
        total += half * acc;
    }
    total
}

/// Cell edges for ∫₀ˣ t^θ·(trig of πkt) dt: one cell per half-period so the
/// integrand keeps one sign per cell, with the first cell refined dyadically
/// because t^θ has unbounded derivatives at 0.
pub fn osc_edges(x: f64, ncells: usize) -> Vec<f64> {
    let ncells = ncells.max(1);
    let h = x / ncells as f64;
    let mut edges = Vec::with_capacity(ncells + 31);
    edges.push(0.0);
    for j in (1..=30).rev() {
        edges.push(h * (0.5f64).powi(j));
    }
    for c in 1..=ncells {
        edges.push(x * c as f64 / ncells as f64);
    }
    edges
}
