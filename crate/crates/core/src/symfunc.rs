//! Power sums, elementary and complete homogeneous symmetric polynomials.
//!
//! Newton's identity links the power sums `c_ν = Σ β_j^ν` of a tuple to the
//! coefficients of `∏ (x + β_j)`; every local coefficient in [`crate::lrep`]
//! goes through these three conversions.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `c_1..c_K` as a vector of length `K` (index 0 holds `c_1`).
pub fn power_sums(roots: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); k];
    for &b in roots {
        let mut p = b;
        for c in out.iter_mut() {
            *c += p;
            p *= b;
        }
    }
    out
}

/// `e_0..e_n` from the power sums `c_1..` (slice index 0 holds `c_1`).
///
/// `ν e_ν = Σ_{j=1}^{ν} (−1)^{j−1} e_{ν−j} c_j`. Entries past `n` are not
/// computed; see [`elementary_at`] for the zero convention.
pub fn elementary_from_power_sums(c: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if c.len() < n {
        return Err(Error::Input(format!("need {n} power sums, got {}", c.len())));
    }
    let mut e = Vec::with_capacity(n + 1);
    e.push(Complex64::new(1.0, 0.0));
    for nu in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=nu {
            let term = e[nu - j] * c[j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / nu as f64);
    }
    Ok(e)
}

/// `e_ν` with the convention `e_ν = 0` for `ν > n`.
pub fn elementary_at(e: &[Complex64], nu: usize) -> Complex64 {
    e.get(nu).copied().unwrap_or(Complex64::new(0.0, 0.0))
}

/// Coefficients of `∏ (x + β_j)` by direct expansion, `e_0..e_n`.
pub fn elementary_direct(roots: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for &b in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); e.len() + 1];
        for (i, &v) in e.iter().enumerate() {
            next[i] += v;
            next[i + 1] += v * b;
        }
        e = next;
    }
    e
}

/// `h_0..h_K`, the coefficients of `1/∏(1 − β_j x)`.
pub fn complete_homogeneous_from_roots(roots: &[Complex64], k: usize) -> Vec<Complex64> {
    let e = elementary_direct(roots);
    complete_from_elementary(&e, k)
}

/// `h_m = Σ_{j=1}^{min(m,n)} (−1)^{j−1} e_j h_{m−j}`.
pub fn complete_from_elementary(e: &[Complex64], k: usize) -> Vec<Complex64> {
    let n = e.len() - 1;
    let mut h = Vec::with_capacity(k + 1);
    h.push(Complex64::new(1.0, 0.0));
    for m in 1..=k {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=m.min(n) {
            let term = e[j] * h[m - j];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        h.push(acc);
    }
    h
}

/// Default relative tolerance for complex comparisons.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor used near zero.
pub const ABS_FLOOR: f64 = 1e-12;

/// Relative distance, with the scale floored so that `REL_TOL` relative
/// corresponds to `ABS_FLOOR` absolute near zero.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm()).max(ABS_FLOOR / REL_TOL);
    (a - b).norm() / scale
}
