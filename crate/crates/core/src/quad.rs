//! Adaptive Gauss-Legendre quadrature.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ORDER: usize = 16;
const MAX_DEPTH: u32 = 48;

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(ORDER))
}

fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let (x, w) = rule();
    let (c, h) = ((a + b) / 2.0, (b - a) / 2.0);
    let mut s = Complex64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        s += f(c + h * xi) * *wi;
    }
    s * h
}

/// `∫_a^b f` to relative accuracy `rel`, or absolute `abs` when the
/// integral is smaller than `abs/rel`.
pub fn integrate_c<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, rel: f64, abs: f64) -> Result<Complex64> {
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        whole: Complex64,
        rel: f64,
        abs: f64,
        depth: u32,
    ) -> Result<Complex64> {
        let m = (a + b) / 2.0;
        let l = panel(f, a, m);
        let r = panel(f, m, b);
        let both = l + r;
        if (both - whole).norm() <= (rel * both.norm()).max(abs) {
            return Ok(both);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Numerical(format!("quadrature did not converge on [{a}, {b}]")));
        }
        Ok(rec(f, a, m, l, rel, abs / 2.0, depth + 1)? + rec(f, m, b, r, rel, abs / 2.0, depth + 1)?)
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let whole = panel(&f, a, b);
    rec(&f, a, b, whole, rel, abs, 0)
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64, abs: f64) -> Result<f64> {
    integrate_c(|x| Complex64::new(f(x), 0.0), a, b, rel, abs).map(|z| z.re)
}
