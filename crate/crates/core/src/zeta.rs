//! Hardy's `Z` function on the critical line and its zeros.
//!
//! Below `t = 250` `Z` is evaluated from the Euler–Maclaurin expansion of
//! `ζ(1/2+it)`; above it from the Riemann–Siegel formula with the first
//! three correction terms.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::correlations::ZeroList;
use crate::error::{Error, Result};

/// Switch from Euler–Maclaurin to Riemann–Siegel.
pub const EM_CUTOFF: f64 = 250.0;

// Taylor coefficients of the Riemann–Siegel corrections in z = 1 − 2p;
// C0 and C2 are even in z (listed in powers of z²), C1 is odd (z·(z²)^j).
#[allow(clippy::excessive_precision)]
const C0: [f64; 22] = [
    0.38268343236508977173,
    0.43724046807752044936,
    0.13237657548034352332,
    -0.013605026047674188655,
    -0.013567621970103580888,
    -0.0016237253231444652829,
    0.00029705353733379690783,
    0.00007943300879521469588,
    4.6556124614504505037e-7,
    -1.4327251630955105754e-6,
    -1.0354847112312946075e-7,
    1.2357927083861738056e-8,
    1.7881083857954904986e-9,
    -3.3914143899270359069e-11,
    -1.6326633902565905101e-11,
    -3.7851093185412203829e-13,
    9.3274232592017248457e-14,
    5.2218430159781368553e-15,
    -3.3506730727442637895e-16,
    -3.4124265228117264941e-17,
    5.7512033414323991603e-19,
    1.4895301363211505455e-19,
];
#[allow(clippy::excessive_precision)]
const C1: [f64; 23] = [
    0.02682510262837534703,
    -0.01378477342635185305,
    -0.038491250482235082229,
    -0.009871066299062076472,
    0.0033107597608584043329,
    0.0014647808577954150825,
    0.000013207940624876963675,
    -0.000059227487018471413232,
    -5.9802425853734485877e-6,
    9.6413224561698263527e-7,
    1.833473372271441176e-7,
    -4.4670875627178335996e-9,
    -2.7096350821772743217e-9,
    -7.7852886543158510463e-11,
    2.3437626010893688532e-11,
    1.5830172789987521642e-12,
    -1.2119941573723791247e-13,
    -1.4583781161108307018e-14,
    2.8786305258131917505e-16,
    8.6628629021237241225e-17,
    8.4307227271370412716e-19,
    -3.6308072230973462002e-19,
    -1.1626698212838296719e-20,
];
#[allow(clippy::excessive_precision)]
const C2: [f64; 22] = [
    0.0051885428302931684938,
    0.00030946583880634746033,
    -0.011335941078229373382,
    0.0022330457419581447721,
    0.0051966374088623302051,
    0.00034399144076208336695,
    -0.00059106484274705828217,
    -0.00010229972547935857454,
    0.000020888392216992755408,
    5.9276654930965359579e-6,
    -1.6423838362436275978e-7,
    -1.5161199700940682862e-7,
    -5.9078036982066679629e-9,
    2.0911514859478188978e-9,
    1.7815649583292351054e-10,
    -1.6164072455353830753e-11,
    -2.3806962496667615707e-12,
    5.3982652955425949182e-14,
    1.9750142196969515273e-14,
    2.3332868732882634831e-16,
    -1.1187517610048080208e-16,
    -4.1640094888837671885e-18,
];

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

/// Riemann–Siegel theta by its Stirling series; accurate to ~1e−13 for `t >= 10`.
pub fn theta(t: f64) -> f64 {
    let t2 = 1.0 / (t * t);
    t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
        + (1.0 / 48.0 + t2 * (7.0 / 5760.0 + t2 * (31.0 / 80640.0 + t2 * (127.0 / 430080.0 + t2 * 511.0 / 1216512.0))))
            / t
}

pub fn z_rs(t: f64) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let th = theta(t);
    let mut s = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        s += (th - t * kf.ln()).cos() / kf.sqrt();
    }
    let z = 1.0 - 2.0 * p;
    let z2 = z * z;
    let corr = horner(&C0, z2) + z * horner(&C1, z2) / a + horner(&C2, z2) / (a * a);
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * s + sign * corr / a.sqrt()
}

/// `B_{2k}/(2k)!` for `k = 1..=m`, from `2(−1)^{k+1} ζ(2k)/(2π)^{2k}`.
fn bernoulli_ratios(m: usize) -> Vec<f64> {
    (1..=m)
        .map(|k| {
            let s = 2.0 * k as f64;
            let nmax = 100usize;
            let mut z: f64 = (1..nmax).rev().map(|n| (n as f64).powf(-s)).sum();
            let nf = nmax as f64;
            z += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0);
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * 2.0 * z / (2.0 * PI).powf(s)
        })
        .collect()
}

/// `ζ(s)` by Euler–Maclaurin summation, for `Re s > 0`, `s != 1`.
pub fn zeta_em(s: Complex64) -> Complex64 {
    const M: usize = 12;
    let n = (s.im.abs().ceil() as usize) + 10;
    let one = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_s = (-s * ln_n).exp();
    sum += n_s * nf / (s - one) + 0.5 * n_s;
    let b = bernoulli_ratios(M);
    // rising factorial s(s+1)...(s+2k−2) times N^{−s−2k+1}
    let mut fac = s * n_s / nf;
    for (k, bk) in b.iter().enumerate() {
        sum += fac * *bk;
        let j = 2.0 * k as f64 + 1.0;
        fac *= (s + j) * (s + j + 1.0) / (nf * nf);
    }
    sum
}

pub fn z_em(t: f64) -> f64 {
    (Complex64::from_polar(1.0, theta(t)) * zeta_em(Complex64::new(0.5, t))).re
}

/// `Z(t)`, choosing the evaluation method by height.
pub fn hardy_z(t: f64) -> f64 {
    if t < EM_CUTOFF {
        z_em(t)
    } else {
        z_rs(t)
    }
}

/// Illinois-modified regula falsi on a sign change.
fn refine(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    let mut side = 0;
    for _ in 0..100 {
        if (b - a).abs() < 1e-12 * b.abs().max(1.0) {
            break;
        }
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
    }
    (a * fb - b * fa) / (fb - fa)
}

/// Average gap between consecutive ordinates near height `t`.
pub fn mean_spacing(t: f64) -> f64 {
    2.0 * PI / (t / (2.0 * PI)).ln().max(0.5)
}

/// The first `count` positive ordinates, located by sign changes of `Z`
/// on a grid of about 1/20 of the mean spacing and refined to ~1e−12.
pub fn zeta_zeros(count: usize) -> Result<ZeroList> {
    let mut zeros: Vec<f64> = Vec::with_capacity(count);
    let mut t0 = 10.0;
    while zeros.len() < count {
        let step = (mean_spacing(t0) / 20.0).min(0.1);
        let pts = 4096;
        let grid: Vec<(f64, f64)> = (0..=pts)
            .into_par_iter()
            .map(|i| {
                let t = t0 + i as f64 * step;
                (t, hardy_z(t))
            })
            .collect();
        let found: Vec<f64> = grid
            .par_windows(2)
            .filter(|w| w[0].1.signum() != w[1].1.signum())
            .map(|w| refine(hardy_z, w[0].0, w[1].0, w[0].1, w[1].1))
            .collect();
        zeros.extend(found);
        t0 = grid[pts].0;
    }
    zeros.truncate(count);
    let tail = zeros.last().copied().unwrap_or(10.0);
    let expected = theta(tail) / PI + 1.0;
    if (zeros.len() as f64 - expected).abs() > 1.5 {
        return Err(Error::Numerical(format!(
            "found {} zeros up to {tail}, expected about {expected:.1}",
            zeros.len()
        )));
    }
    ZeroList::new(zeros, format!("zeta, first {count}"))
}

pub fn write_zero_file(path: &Path, zl: &ZeroList) -> Result<()> {
    let mut f = std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?,
    );
    let io = |e: std::io::Error| Error::Input(e.to_string());
    writeln!(f, "# {}", zl.source_label).map_err(io)?;
    for g in &zl.ordinates {
        writeln!(f, "{g:.12}").map_err(io)?;
    }
    f.flush().map_err(io)
}
