//! Conserved-charge densities of the Ablowitz-Ladik chain from the
//! `g`-series recursion.
//!
//! With `R_n = conj(q_{n+2})` and `Q_n = -q_{n+2}` the coefficients obey
//!
//! ```text
//! g_n^(0) = 1
//! g_n^(1) = R_{n-1} Q_{n-2}                         = -conj(q_{n+1}) q_n
//! g_n^(m) = (R_{n-1}/R_{n-2}) g_{n-1}^(m-1) - sum_{l=1}^{m-1} g_{n-1}^(m-l) g_n^(l)
//! ```
//!
//! and the densities `f_m^(n)` are the coefficients of
//! `log(sum_m g_n^(m) z^{2m})`.
//!
//! Every `g_n^(m)` with `m >= 1` carries the factor `conj(q_{n+1})`, so the
//! recursion is run on `h_n^(m) = g_n^(m) / conj(q_{n+1})`:
//!
//! ```text
//! h_n^(1) = -q_n
//! h_n^(m) = h_{n-1}^(m-1) - sum_{l=1}^{m-1} g_{n-1}^(m-l) h_n^(l)
//! ```
//!
//! which is the same recursion with the ratio `R_{n-1}/R_{n-2}` cancelled
//! analytically. Fields with zeros need no special handling.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Coefficients `f_1..f_M` of `log(1 + g_1 x + g_2 x^2 + ...)`, given
/// `g = [g_1, .., g_M]`.
///
/// Uses `f_m = g_m - (1/m) sum_{j=1}^{m-1} j f_j g_{m-j}`.
pub fn log_series(g: &[Complex64]) -> Vec<Complex64> {
    let mut f: Vec<Complex64> = Vec::with_capacity(g.len());
    for m in 1..=g.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..m {
            acc += f[j - 1] * g[m - j - 1] * j as f64;
        }
        f.push(g[m - 1] - acc / m as f64);
    }
    f
}

/// `g_n^(1..=m_max)` for every site of `q`. Sites outside the slice are zero.
pub fn g_coefficients(q: &[Complex64], m_max: usize) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut g_rows: Vec<Vec<Complex64>> = Vec::with_capacity(q.len());
    let mut h_prev = vec![zero; m_max];
    let mut g_prev = vec![zero; m_max];
    let mut h = vec![zero; m_max];
    for n in 0..q.len() {
        let next = q.get(n + 1).copied().unwrap_or(zero).conj();
        let mut g = vec![zero; m_max];
        for m in 1..=m_max {
            let hm = if m == 1 {
                -q[n]
            } else {
                let mut acc = h_prev[m - 2];
                for l in 1..m {
                    acc -= g_prev[m - l - 1] * h[l - 1];
                }
                acc
            };
            h[m - 1] = hm;
            g[m - 1] = next * hm;
        }
        core::mem::swap(&mut h_prev, &mut h);
        g_prev.clone_from(&g);
        g_rows.push(g);
    }
    g_rows
}

/// Densities `f_m^(n)` for `m = 1..=m_max` at every site of `q`.
pub fn densities(q: &[Complex64], m_max: usize) -> Vec<Vec<Complex64>> {
    g_coefficients(q, m_max)
        .iter()
        .map(|g| log_series(g))
        .collect()
}

/// `C_m = sum_n f_m^(n)` for `m = 1..=m_max` on a chain that is zero
/// outside the given sites.
pub fn higher_constants_recursive(chain_field: &[Complex64], m_max: usize) -> Vec<Complex64> {
    // f_m^(n) reaches m - 1 sites to the left; pad so those sites exist.
    let mut padded = vec![Complex64::new(0.0, 0.0); m_max];
    padded.extend_from_slice(chain_field);
    padded.push(Complex64::new(0.0, 0.0));
    let mut totals = vec![Complex64::new(0.0, 0.0); m_max];
    for row in densities(&padded, m_max) {
        for (t, f) in totals.iter_mut().zip(row) {
            *t += f;
        }
    }
    totals
}
