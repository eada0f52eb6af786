//! Smoothed `m`-level correlation sums of zero ordinates and their GUE
//! predictions, for `m = 2, 3`.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::block_sum;
use crate::quad::{gauss_legendre, integrate};

/// Positive zero ordinates in increasing order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroList {
    pub ordinates: Vec<f64>,
    pub source_label: String,
}

const DUP_TOL: f64 = 1e-9;

impl ZeroList {
    pub fn new(ordinates: Vec<f64>, source_label: impl Into<String>) -> Result<Self> {
        for (i, &g) in ordinates.iter().enumerate() {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::Input(format!("ordinate #{} = {g} is not positive", i + 1)));
            }
            if i > 0 && g <= ordinates[i - 1] + DUP_TOL {
                return Err(Error::Input(format!("ordinate #{} = {g} does not increase", i + 1)));
            }
        }
        if ordinates.is_empty() {
            return Err(Error::Input("empty zero list".into()));
        }
        Ok(ZeroList { ordinates, source_label: source_label.into() })
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn prefix(&self, n: usize) -> ZeroList {
        ZeroList {
            ordinates: self.ordinates[..n.min(self.len())].to_vec(),
            source_label: format!("{} (first {n})", self.source_label),
        }
    }

    pub fn max(&self) -> f64 {
        *self.ordinates.last().expect("nonempty")
    }
}

/// One ordinate per line; blank lines and `#` comments are skipped.
pub fn parse_zeros(text: &str, label: &str) -> Result<ZeroList> {
    let mut out: Vec<f64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = i + 1;
        let g: f64 = line.parse().map_err(|_| Error::Parse { line: n, msg: format!("not a number: {line:?}") })?;
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Parse { line: n, msg: format!("ordinate {g} is not positive") });
        }
        if let Some(&prev) = out.last() {
            if g <= prev + DUP_TOL {
                let what = if (g - prev).abs() <= DUP_TOL { "duplicates" } else { "is below" };
                return Err(Error::Parse { line: n, msg: format!("ordinate {g} {what} the previous {prev}") });
            }
        }
        out.push(g);
    }
    if out.is_empty() {
        return Err(Error::Input(format!("{label}: no ordinates")));
    }
    Ok(ZeroList { ordinates: out, source_label: label.to_string() })
}

pub fn ingest_zeros(path: &Path) -> Result<ZeroList> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_zeros(&text, &path.display().to_string())
}

/// `γ̃ = (n/2π) γ log|γ|`.
pub fn normalize_zeros(zl: &ZeroList, n: usize) -> Vec<f64> {
    zl.ordinates.iter().map(|&g| n as f64 / (2.0 * PI) * g * g.abs().ln()).collect()
}

/// `sin(πx)/(πx)`, with `K(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let y = PI * x;
        y.sin() / y
    }
}

/// `det(K(x_i − x_j))` for `m = 2, 3`.
pub fn w_m(x: &[f64]) -> Result<f64> {
    match *x {
        [a, b] => {
            let k = sinc(a - b);
            Ok(1.0 - k * k)
        }
        [a, b, c] => {
            let (p, q, r) = (sinc(a - b), sinc(b - c), sinc(a - c));
            Ok(1.0 - p * p - q * q - r * r + 2.0 * p * q * r)
        }
        _ => Err(Error::Input(format!("W_m is implemented for m = 2, 3, got m = {}", x.len()))),
    }
}

/// Translation-invariant test function `f(x) = Π_{i<j} F(x_i − x_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FSpec {
    /// `F(v) = β sinc²(βv)`, unit mass.
    Fejer { beta: f64 },
    /// Even `F`, linear between samples at `step` spacing from 0, zero beyond.
    Tabulated { step: f64, values: Vec<f64> },
}

const F_CUT: f64 = 1e-12;

impl FSpec {
    pub fn fejer(beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Input(format!("beta must be positive, got {beta}")));
        }
        Ok(FSpec::Fejer { beta })
    }

    pub fn tabulated(step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || values.is_empty() {
            return Err(Error::Input("tabulated profile needs step > 0 and samples".into()));
        }
        Ok(FSpec::Tabulated { step, values })
    }

    pub fn zero() -> Self {
        FSpec::Tabulated { step: 1.0, values: vec![0.0] }
    }

    pub fn pair(&self, v: f64) -> f64 {
        match self {
            FSpec::Fejer { beta } => {
                let s = sinc(beta * v);
                beta * s * s
            }
            FSpec::Tabulated { step, values } => {
                let u = v.abs() / step;
                let i = u.floor() as usize;
                if i + 1 >= values.len() {
                    return if i + 1 == values.len() && u == i as f64 { values[i] } else { 0.0 };
                }
                let fr = u - i as f64;
                values[i] * (1.0 - fr) + values[i + 1] * fr
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut v = 1.0;
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                v *= self.pair(x[i] - x[j]);
            }
        }
        v
    }

    /// Distance beyond which `|F| < 1e−12`.
    pub fn cutoff(&self) -> f64 {
        match self {
            FSpec::Fejer { beta } => 1.0 / (PI * (beta * F_CUT).sqrt()),
            FSpec::Tabulated { step, values } => step * values.len() as f64,
        }
    }

    /// Fourier transform of the pair profile, `∫F(v)e(−vξ)dv`.
    pub fn pair_transform(&self, xi: f64) -> Option<f64> {
        match self {
            FSpec::Fejer { beta } => Some((1.0 - xi.abs() / beta).max(0.0)),
            FSpec::Tabulated { .. } => None,
        }
    }

    /// Width of the Fourier support of the pair profile, if known.
    fn fourier_radius(&self) -> Option<f64> {
        match self {
            FSpec::Fejer { beta } => Some(*beta),
            FSpec::Tabulated { .. } => None,
        }
    }
}

const GHAT_STEP: f64 = 1.0 / 64.0;
const GHAT_MAX: f64 = 40.0;

fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

/// `(ĝ₁(r), ĝ₁'(r))` at the table nodes, `g₁(x) = exp(−1/(1−x²))` on `[−1,1]`.
fn ghat_table() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = (GHAT_MAX / GHAT_STEP).round() as usize;
        use rayon::prelude::*;
        (0..=n)
            .into_par_iter()
            .map(|i| {
                let r = i as f64 * GHAT_STEP;
                let w = 2.0 * PI * r;
                let v = 2.0 * integrate(|x| bump(x) * (w * x).cos(), 0.0, 1.0, 1e-13, 1e-17).expect("smooth integrand");
                let d = -2.0
                    * integrate(|x| bump(x) * 2.0 * PI * x * (w * x).sin(), 0.0, 1.0, 1e-13, 1e-17)
                        .expect("smooth integrand");
                (v, d)
            })
            .collect()
    })
}

/// `ĝ₁(r) = ∫g₁(x)e(−rx)dx`, cubic Hermite between tabulated nodes;
/// zero beyond `|r| = 40`, where `|ĝ₁| < 1e−9`.
pub fn ghat(r: f64) -> f64 {
    let t = ghat_table();
    let u = r.abs() / GHAT_STEP;
    let i = u.floor() as usize;
    if i + 1 >= t.len() {
        return 0.0;
    }
    let s = u - i as f64;
    let (y0, d0) = (t[i].0, t[i].1 * GHAT_STEP);
    let (y1, d1) = (t[i + 1].0, t[i + 1].1 * GHAT_STEP);
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1
}

/// `h(r) = scale·ĝ₁(scale·r)`: the Fourier transform of `g₁(·/scale)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BumpH {
    pub scale: f64,
}

pub fn bump_h(scale: f64) -> Result<BumpH> {
    if !(scale > 0.0) {
        return Err(Error::Input(format!("scale must be positive, got {scale}")));
    }
    Ok(BumpH { scale })
}

impl BumpH {
    pub fn eval(&self, r: f64) -> f64 {
        self.scale * ghat(self.scale * r)
    }

    /// `∫ h(r)^m dr`.
    pub fn power_integral(&self, m: u32) -> Result<f64> {
        let unit = ghat_power_integral(m)?;
        Ok(self.scale.powi(m as i32 - 1) * unit)
    }
}

fn ghat_power_integral(m: u32) -> Result<f64> {
    let mut s = 0.0;
    let panels = (GHAT_MAX * 4.0) as usize;
    for k in 0..panels {
        let a = k as f64 * 0.25;
        s += integrate(|r| ghat(r).powi(m as i32), a, a + 0.25, 1e-12, 1e-20)?;
    }
    Ok(2.0 * s)
}

/// Smallest `r` with `∫_{|u|>r} ĝ₁² <= 1e−4 ∫ ĝ₁²`.
pub fn coverage_radius() -> f64 {
    static R: OnceLock<f64> = OnceLock::new();
    *R.get_or_init(|| {
        let t = ghat_table();
        let sq: Vec<f64> = t.iter().map(|(v, _)| v * v).collect();
        let total: f64 = sq.iter().sum();
        let mut tail = 0.0;
        for i in (0..sq.len()).rev() {
            tail += sq[i];
            if tail > 1e-4 * total {
                return (i + 1) as f64 * GHAT_STEP;
            }
        }
        0.0
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationConfig {
    pub m: usize,
    pub t: f64,
    pub degree: usize,
    pub f: FSpec,
    pub h: BumpH,
}

impl CorrelationConfig {
    pub fn new(m: usize, t: f64, degree: usize, f: FSpec, h: BumpH) -> Result<Self> {
        if !(m == 2 || m == 3) {
            return Err(Error::Input(format!("m must be 2 or 3, got {m}")));
        }
        if !(t > 1.0) || degree == 0 {
            return Err(Error::Input(format!("need T > 1 and n >= 1, got T = {t}, n = {degree}")));
        }
        if let Some(beta) = f.fourier_radius() {
            // Σ|ξ_j| <= 2·(number of pairs)·β must stay below 2/n
            let pairs = (m * (m - 1) / 2) as f64;
            let cap = 0.9 / (degree as f64 * pairs);
            if beta > cap {
                return Err(Error::Contract(format!(
                    "Fourier support too wide: beta = {beta} exceeds {cap:.4} for m = {m}, n = {degree}"
                )));
            }
        }
        Ok(CorrelationConfig { m, t, degree, f, h })
    }

    /// `L = n log T`.
    pub fn big_l(&self) -> f64 {
        self.degree as f64 * self.t.ln()
    }
}

/// Height below which zeros are needed for `h(γ/T)` to be spent.
pub fn required_height(cfg: &CorrelationConfig) -> f64 {
    cfg.t * coverage_radius() / cfg.h.scale
}

fn approx_count(h: f64) -> f64 {
    let x = h / (2.0 * PI);
    (x * x.ln() - x + 7.0 / 8.0).max(0.0)
}

struct Prepared {
    x: Vec<f64>,
    w: Vec<f64>,
}

fn prepare(zl: &ZeroList, cfg: &CorrelationConfig) -> Result<Prepared> {
    let need = required_height(cfg);
    if zl.max() < need {
        return Err(Error::Input(format!(
            "zeros reach {:.3} but h(γ/T) needs them up to {need:.3}: about {:.0} zeros required, {} given",
            zl.max(),
            approx_count(need),
            zl.len()
        )));
    }
    let c = cfg.big_l() / (2.0 * PI);
    let g: Vec<f64> = zl.ordinates.iter().rev().map(|g| -g).chain(zl.ordinates.iter().copied()).collect();
    Ok(Prepared { x: g.iter().map(|v| c * v).collect(), w: g.iter().map(|v| cfg.h.eval(v / cfg.t)).collect() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowStats {
    pub points: usize,
    pub cutoff: f64,
    pub mean_window: f64,
    pub max_window: usize,
}

/// `Σ h(γ_{j1}/T)···h(γ_{jm}/T) f((L/2π)γ_{j1}, …)` over ordered tuples
/// of distinct indices of `±γ`, skipping tuples whose spread exceeds the
/// effective support of `f`.
pub fn r_m_smooth(zl: &ZeroList, cfg: &CorrelationConfig) -> Result<f64> {
    Ok(r_m_windowed(zl, cfg)?.0)
}

pub fn r_m_windowed(zl: &ZeroList, cfg: &CorrelationConfig) -> Result<(f64, WindowStats)> {
    let p = prepare(zl, cfg)?;
    let n = p.x.len();
    let cut = cfg.f.cutoff();
    let lo: Vec<usize> = p.x.iter().map(|&v| p.x.partition_point(|&y| y < v - cut)).collect();
    let hi: Vec<usize> = p.x.iter().map(|&v| p.x.partition_point(|&y| y <= v + cut)).collect();
    let f = &cfg.f;
    let value = match cfg.m {
        2 => block_sum(0, n, 256, 0.0, |j| {
            let mut s = 0.0;
            for k in lo[j]..hi[j] {
                if k != j {
                    s += p.w[k] * f.pair(p.x[j] - p.x[k]);
                }
            }
            p.w[j] * s
        }),
        _ => block_sum(0, n, 64, 0.0, |j| {
            let mut s = 0.0;
            for k in lo[j]..hi[j] {
                if k == j {
                    continue;
                }
                let fjk = f.pair(p.x[j] - p.x[k]);
                for l in lo[j].max(lo[k])..hi[j].min(hi[k]) {
                    if l != j && l != k {
                        s += p.w[k] * p.w[l] * fjk * f.pair(p.x[j] - p.x[l]) * f.pair(p.x[k] - p.x[l]);
                    }
                }
            }
            p.w[j] * s
        }),
    };
    let widths: Vec<usize> = (0..n).map(|j| hi[j] - lo[j]).collect();
    let stats = WindowStats {
        points: n,
        cutoff: cut,
        mean_window: widths.iter().sum::<usize>() as f64 / n as f64,
        max_window: widths.iter().copied().max().unwrap_or(0),
    };
    Ok((value, stats))
}

/// Every ordered tuple of distinct indices, no window.
pub fn r_m_bruteforce(zl: &ZeroList, cfg: &CorrelationConfig) -> Result<f64> {
    let p = prepare(zl, cfg)?;
    let n = p.x.len();
    let mut total = 0.0;
    for j in 0..n {
        for k in 0..n {
            if k == j {
                continue;
            }
            if cfg.m == 2 {
                total += p.w[j] * p.w[k] * cfg.f.eval(&[p.x[j], p.x[k]]);
            } else {
                for l in 0..n {
                    if l != j && l != k {
                        total += p.w[j] * p.w[k] * p.w[l] * cfg.f.eval(&[p.x[j], p.x[k], p.x[l]]);
                    }
                }
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GueLimit {
    /// `∫ f(x) W_m(x) δ((x₁+…+x_m)/m) dx`.
    pub reduced_integral: f64,
    /// Estimated contribution of the truncated region, already included.
    pub truncation: f64,
    /// `∫ h(r)^m dr`.
    pub h_integral: f64,
    /// `(n/2π) T log T`.
    pub prefactor: f64,
    pub prediction: f64,
}

/// `∫_{−∞}^{∞} F(v)(1 − sinc²v) dv`; for Fejér profiles the region past
/// `V = 2000/β` is replaced by its mean `∫_V^∞ 1/(2π²βv²) dv` on each side.
fn reduced_pair(f: &FSpec) -> Result<(f64, f64)> {
    let (end, tail) = match f {
        FSpec::Fejer { beta } => {
            let v = 2000.0 / beta;
            (v, 2.0 / (2.0 * PI * PI * beta * v))
        }
        FSpec::Tabulated { .. } => (f.cutoff(), 0.0),
    };
    let panels = (end / 0.5).ceil() as usize;
    let h = end / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        let a = k as f64 * h;
        s += integrate(|v| f.pair(v) * w_m(&[v, 0.0]).expect("m=2"), a, a + h, 1e-13, 1e-18)?;
    }
    Ok((2.0 * s + tail, tail))
}

/// `3∫∫ f(a, b, −a−b) W_3 da db` over `[−R, R]²` with `R = 32/β` (or the
/// table support); the estimate of the remainder uses the `r^{−4}` decay.
fn reduced_triple(f: &FSpec) -> Result<(f64, f64)> {
    let (r, width) = match f {
        FSpec::Fejer { beta } => (32.0 / beta, 1.0),
        FSpec::Tabulated { .. } => (2.0 * f.cutoff(), (f.cutoff() / 16.0).min(1.0)),
    };
    let integrand = |a: f64, b: f64| {
        let x = [a, b, -a - b];
        f.eval(&x) * w_m(&x).expect("m=3")
    };
    let rule = |order: usize| {
        let (nodes, weights) = gauss_legendre(order);
        let panels = (2.0 * r / width).ceil() as usize;
        let h = 2.0 * r / panels as f64;
        let pts: Vec<(f64, f64)> = (0..panels)
            .flat_map(|k| {
                let a = -r + k as f64 * h;
                nodes.iter().zip(&weights).map(move |(x, w)| (a + h * (x + 1.0) / 2.0, w * h / 2.0)).collect::<Vec<_>>()
            })
            .collect();
        let mut s = 0.0;
        for &(a, wa) in &pts {
            let mut inner = 0.0;
            for &(b, wb) in &pts {
                inner += wb * integrand(a, b);
            }
            s += wa * inner;
        }
        3.0 * s
    };
    let fine = rule(16);
    let coarse = rule(12);
    if (fine - coarse).abs() > 1e-6 * fine.abs().max(1e-300) {
        return Err(Error::Numerical(format!("triple integral unconverged: {fine} vs {coarse}")));
    }
    let trunc = match f {
        FSpec::Fejer { .. } => fine.abs() / (r * r),
        FSpec::Tabulated { .. } => 0.0,
    };
    Ok((fine, trunc))
}

/// Limit predicted by the GUE model, `(n/2π) T log T ∫h^m · reduced`.
pub fn gue_limit(cfg: &CorrelationConfig) -> Result<GueLimit> {
    let (reduced, truncation) = match cfg.m {
        2 => reduced_pair(&cfg.f)?,
        _ => reduced_triple(&cfg.f)?,
    };
    let h_integral = cfg.h.power_integral(cfg.m as u32)?;
    let prefactor = cfg.degree as f64 / (2.0 * PI) * cfg.t * cfg.t.ln();
    Ok(GueLimit {
        reduced_integral: reduced,
        truncation,
        h_integral,
        prefactor,
        prediction: prefactor * h_integral * reduced,
    })
}

/// `(T, scale)` for a finite zero list.
///
/// `log T` is the mean of `log(γ/2π)` weighted by `h(γ/T)²`, and the scale
/// puts the largest ordinate at the coverage radius of `h`, so that
/// `h(γ/T)² = scale²·ĝ₁(r_cov γ/γ_max)²` does not depend on `T`.
pub fn auto_t(zl: &ZeroList) -> Result<(f64, f64)> {
    let gmax = zl.max();
    let rc = coverage_radius();
    let mut num = 0.0;
    let mut den = 0.0;
    for &g in &zl.ordinates {
        let w = ghat(rc * g / gmax).powi(2);
        num += w * (g / (2.0 * PI)).ln();
        den += w;
    }
    let t = (num / den).exp();
    if !(t > 1.0) {
        return Err(Error::Input(format!("zero list too low for a T > 1 (got {t})")));
    }
    Ok((t, t * rc / gmax))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub m: usize,
    pub beta: f64,
    pub t: f64,
    pub scale: f64,
    pub zeros: usize,
    pub r_m: f64,
    pub prediction: f64,
    pub ratio: f64,
    pub limit: GueLimit,
    pub window_stats: WindowStats,
}

/// Fejér experiment for degree 1; `t = None` applies [`auto_t`].
pub fn run_correlation(zl: &ZeroList, m: usize, beta: f64, t: Option<(f64, f64)>) -> Result<CorrelationReport> {
    let (t, scale) = match t {
        Some(v) => v,
        None => auto_t(zl)?,
    };
    let cfg = CorrelationConfig::new(m, t, 1, FSpec::fejer(beta)?, bump_h(scale)?)?;
    let (r, stats) = r_m_windowed(zl, &cfg)?;
    let limit = gue_limit(&cfg)?;
    Ok(CorrelationReport {
        m,
        beta,
        t,
        scale,
        zeros: zl.len(),
        r_m: r,
        prediction: limit.prediction,
        ratio: r / limit.prediction,
        limit,
        window_stats: stats,
    })
}
