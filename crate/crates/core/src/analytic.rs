//! Smoothed sums, the test function `V`, Mellin transforms and prime sums.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lrep::{satake_at, CoeffTable, RepModel};
use crate::numfield::enumerate_prime_ideals;
use crate::par::{block_sum, block_sum_slice, DEFAULT_BLOCK};
use crate::quad::integrate_c;

/// Support of `V`.
pub const V_SUPPORT: (f64, f64) = (0.5, 2.5);
/// Highest derivative order tracked by the jets.
pub const JET_ORDER: usize = 8;
/// Smallest admissible real part in [`v_mellin`].
pub const MELLIN_MIN_RE: f64 = 0.01;

const N: usize = JET_ORDER + 1;

/// Truncated Taylor series `Σ c_k h^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Jet([f64; N]);

impl Jet {
    fn constant(c: f64) -> Self {
        let mut v = [0.0; N];
        v[0] = c;
        Jet(v)
    }
    fn var(x: f64, slope: f64) -> Self {
        let mut v = [0.0; N];
        v[0] = x;
        v[1] = slope;
        Jet(v)
    }
    fn add(self, o: Jet) -> Jet {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(o.0) {
            *a += b;
        }
        Jet(v)
    }
    fn scale(self, s: f64) -> Jet {
        Jet(self.0.map(|a| a * s))
    }
    fn mul(self, o: Jet) -> Jet {
        let mut v = [0.0; N];
        for i in 0..N {
            for j in 0..N - i {
                v[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(v)
    }
    fn div(self, o: Jet) -> Jet {
        let mut q = [0.0; N];
        for k in 0..N {
            let mut s = self.0[k];
            for j in 1..=k {
                s -= o.0[j] * q[k - j];
            }
            q[k] = s / o.0[0];
        }
        Jet(q)
    }
    fn exp(self) -> Jet {
        let mut f = [0.0; N];
        f[0] = self.0[0].exp();
        for k in 1..N {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * self.0[j] * f[k - j];
            }
            f[k] = s / k as f64;
        }
        Jet(f)
    }
}

/// `ρ(u) = exp(−1/(1−u²))` on `|u| < 1`.
fn rho(u: Jet) -> Jet {
    let g = Jet::constant(1.0).add(u.mul(u).scale(-1.0));
    // exp(−1/g) underflows for g0 < 1e-3
    if g.0[0] < 1e-3 {
        return Jet::constant(0.0);
    }
    Jet::constant(-1.0).div(g).exp()
}

/// Rising shoulder `S(t) = ρ(1−t)/(ρ(1−t)+ρ(t))`, from 0 at `t=0` to 1 at `t=1`.
fn shoulder(t: Jet) -> Jet {
    if t.0[0] <= 0.0 {
        return Jet::constant(0.0);
    }
    if t.0[0] >= 1.0 {
        return Jet::constant(1.0);
    }
    let a = rho(Jet::constant(1.0).add(t.scale(-1.0)));
    let b = rho(t);
    a.div(a.add(b))
}

fn v_jet(x: f64) -> Jet {
    let (lo, hi) = V_SUPPORT;
    if x <= lo || x >= hi {
        Jet::constant(0.0)
    } else if x < 1.0 {
        shoulder(Jet::var(2.0 * x - 1.0, 2.0))
    } else if x <= 2.0 {
        Jet::constant(1.0)
    } else {
        shoulder(Jet::var(5.0 - 2.0 * x, -2.0))
    }
}

/// The smooth cutoff: 1 on `[1,2]`, 0 outside `(1/2, 5/2)`.
pub fn v_eval(x: f64) -> f64 {
    v_jet(x).0[0]
}

/// `V^{(j)}(x)` for `j <= JET_ORDER`.
pub fn v_derivative(x: f64, j: usize) -> f64 {
    assert!(j <= JET_ORDER, "derivative order above the jet cap");
    let f: f64 = (1..=j).map(|k| k as f64).product();
    v_jet(x).0[j] * f
}

/// The test function as a value, with its derivative cap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestFunctionV {
    pub support: (f64, f64),
    pub order_cap: usize,
}

impl Default for TestFunctionV {
    fn default() -> Self {
        TestFunctionV { support: V_SUPPORT, order_cap: JET_ORDER }
    }
}

impl TestFunctionV {
    pub fn eval(&self, x: f64) -> f64 {
        v_eval(x)
    }
    pub fn derivative(&self, x: f64, j: usize) -> Result<f64> {
        if j > self.order_cap {
            return Err(Error::Input(format!("derivative order {j} above cap {}", self.order_cap)));
        }
        Ok(v_derivative(x, j))
    }
}

fn check_strip(s: Complex64) -> Result<()> {
    if !(MELLIN_MIN_RE..=2.0).contains(&s.re) {
        return Err(Error::Contract(format!(
            "Mellin transform of V evaluated at Re s = {} outside [{MELLIN_MIN_RE}, 2]",
            s.re
        )));
    }
    Ok(())
}

/// `∫ V(x) x^{s−1} dx` after `j` integrations by parts:
/// `(−1)^j / (s(s+1)…(s+j−1)) · ∫ V^{(j)}(x) x^{s+j−1} dx`.
pub fn v_mellin_ibp(s: Complex64, j: usize) -> Result<Complex64> {
    check_strip(s)?;
    if j > JET_ORDER {
        return Err(Error::Input(format!("integration-by-parts order {j} above {JET_ORDER}")));
    }
    let e = s + (j as f64 - 1.0);
    let f = |x: f64| Complex64::new(x, 0.0).powc(e) * v_derivative(x, j);
    let (rel, abs) = (1e-10, 1e-15);
    let mut total = integrate_c(f, 0.5, 1.0, rel, abs)? + integrate_c(f, 2.0, 2.5, rel, abs)?;
    if j == 0 {
        total += (Complex64::new(2.0, 0.0).powc(s) - 1.0) / s;
    }
    let mut den = Complex64::new(1.0, 0.0);
    for i in 0..j {
        den *= s + i as f64;
    }
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    Ok(total * sign / den)
}

/// `∫ V(x) x^{s−1} dx` on the strip `MELLIN_MIN_RE <= Re s <= 2`.
pub fn v_mellin(s: Complex64) -> Result<Complex64> {
    v_mellin_ibp(s, 0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MellinDecay {
    pub sigma: f64,
    pub order: usize,
    pub slope: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Least-squares slope of `log|M(σ+it)|` against `log t` on `[t_lo, t_hi]`.
pub fn mellin_decay(sigma: f64, order: usize, t_lo: f64, t_hi: f64, points: usize) -> Result<MellinDecay> {
    let points = points.max(2);
    let mut samples = Vec::with_capacity(points);
    for i in 0..points {
        let t = t_lo * (t_hi / t_lo).powf(i as f64 / (points - 1) as f64);
        let m = v_mellin_ibp(Complex64::new(sigma, t), order)?.norm();
        samples.push((t, m));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(t, m)| (t.ln(), m.max(1e-300).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(MellinDecay { sigma, order, slope: sxy / sxx, samples })
}

/// A sum with an optional reference value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumReport {
    pub x: f64,
    pub y: Option<f64>,
    pub value: Complex64,
    pub comparison: Option<f64>,
    pub residual: Option<Complex64>,
}

impl SumReport {
    pub fn new(x: f64, y: Option<f64>, value: Complex64, comparison: Option<f64>) -> Self {
        SumReport { x, y, value, comparison, residual: comparison.map(|c| value - c) }
    }
}

fn same_domain(t1: &CoeffTable, t2: &CoeffTable) -> Result<()> {
    if t1.field != t2.field || t1.limit != t2.limit {
        return Err(Error::Input(format!(
            "tables differ in field or limit ({} ≤ {}, {} ≤ {})",
            t1.field, t1.limit, t2.field, t2.limit
        )));
    }
    Ok(())
}

/// Smallest norm at which the two coefficient sequences differ by more
/// than `tol`; 0 when they agree on the whole range.
pub fn first_disagreement(t1: &CoeffTable, t2: &CoeffTable, tol: f64) -> Result<u64> {
    same_domain(t1, t2)?;
    if t1.field.is_rational() {
        for n in 1..=t1.limit {
            if (t1.get(n) - t2.get(n)).norm() > tol {
                return Ok(n);
            }
        }
        return Ok(0);
    }
    for ((i1, v1), (i2, v2)) in t1.ideals.iter().zip(&t2.ideals) {
        debug_assert_eq!(i1, i2);
        if (v1 - v2).norm() > tol {
            return Ok(i1.norm());
        }
    }
    Ok(0)
}

/// `Σ_n λ₁(n)·conj(λ₂(n))·V(n/X)`. With `diagonal` the comparison is
/// `X·∫V`, the main term for a simple pole of residue one.
pub fn smoothed_pair_sum(t1: &CoeffTable, t2: &CoeffTable, x: f64, diagonal: bool) -> Result<SumReport> {
    same_domain(t1, t2)?;
    let hi = (V_SUPPORT.1 * x).floor() as u64;
    if hi > t1.limit {
        return Err(Error::Input(format!("tables end at {} but the sum needs {hi}", t1.limit)));
    }
    let lo = (V_SUPPORT.0 * x).floor() as u64 + 1;
    let zero = Complex64::new(0.0, 0.0);
    let value = if t1.field.is_rational() {
        block_sum(lo as usize, hi as usize + 1, DEFAULT_BLOCK, zero, |n| {
            t1.values[n] * t2.values[n].conj() * v_eval(n as f64 / x)
        })
    } else {
        block_sum(0, t1.ideals.len(), DEFAULT_BLOCK, zero, |i| {
            let (id, v1) = &t1.ideals[i];
            let v2 = t2.ideals[i].1;
            v1 * v2.conj() * v_eval(id.norm() as f64 / x)
        })
    };
    let comparison = if diagonal { Some(x * v_mellin(Complex64::new(1.0, 0.0))?.re) } else { None };
    Ok(SumReport::new(x, None, value, comparison))
}

/// `Σ_{x−y < N𝔭^k <= x, 2<=k<=K} a_{π×π'}(𝔭^k) log N𝔭`, compared with
/// `x^{1−1/(max(n,n')²+1)}`.
pub fn prime_power_gap(rep1: &RepModel, rep2: &RepModel, x: f64, y: f64, kcap: u32) -> Result<SumReport> {
    if !(y > 0.0 && y <= x) {
        return Err(Error::Input(format!("need 0 < y <= x, got x={x}, y={y}")));
    }
    let m = rep1.degree.max(rep2.degree) as f64;
    let comparison = x.powf(1.0 - 1.0 / (m * m + 1.0));
    let xs = x.floor() as u64;
    let root = (x.sqrt().floor() as u64).max(2);
    let primes = enumerate_prime_ideals(&rep1.field, root)?;
    let mut value = Complex64::new(0.0, 0.0);
    for pr in &primes {
        let a = satake_at(rep1, pr)?;
        let b = satake_at(rep2, pr)?;
        let ln = (pr.norm as f64).ln();
        let mut q = pr.norm;
        let mut k = 1u32;
        while let Some(next) = q.checked_mul(pr.norm) {
            q = next;
            k += 1;
            if q > xs || k > kcap {
                break;
            }
            if (q as f64) > x - y {
                let ak: Complex64 = a.alphas.iter().flat_map(|&u| b.alphas.iter().map(move |&v| (u * v).powu(k))).sum();
                value += ak * ln;
            }
        }
    }
    Ok(SumReport::new(x, Some(y), value, Some(comparison)))
}

/// `a_{π×π̃}(𝔭) = |a_π(𝔭)|²` summed with weight `log N𝔭` over
/// `lo < N𝔭 <= hi`.
fn prime_sum_rs_diag(rep: &RepModel, lo: f64, hi: f64) -> Result<f64> {
    if hi < 2.0 {
        return Ok(0.0);
    }
    let primes = enumerate_prime_ideals(&rep.field, hi.floor() as u64)?;
    let primes: Vec<_> = primes.into_iter().filter(|p| p.norm as f64 > lo).collect();
    let terms: Vec<f64> = primes
        .iter()
        .map(|pr| {
            let a: Complex64 = satake_at(rep, pr)?.alphas.iter().sum();
            Ok(a.norm_sqr() * (pr.norm as f64).ln())
        })
        .collect::<Result<_>>()?;
    Ok(block_sum_slice(&terms, DEFAULT_BLOCK, 0.0, |v| *v))
}

/// `Σ_{N𝔭<=x} a_{π×π̃}(𝔭) log N𝔭`, compared with `x`.
pub fn pnt_partial(rep: &RepModel, x: f64) -> Result<SumReport> {
    let v = prime_sum_rs_diag(rep, 0.0, x)?;
    Ok(SumReport::new(x, None, Complex64::new(v, 0.0), Some(x)))
}

/// `Σ_{x<N𝔭<=x+h} a_{π×π̃}(𝔭) log N𝔭`, compared with `h`.
pub fn hoheisel_window(rep: &RepModel, x: f64, h: f64) -> Result<SumReport> {
    if h <= 0.0 {
        return Err(Error::Input(format!("window length must be positive, got {h}")));
    }
    let v = prime_sum_rs_diag(rep, x, x + h)?;
    Ok(SumReport::new(x, Some(h), Complex64::new(v, 0.0), Some(h)))
}

/// `Σ_{N𝔭<=X} a_π(𝔭)a_π'(𝔭)/N𝔭` at each checkpoint (ascending), compared
/// with `log log X` when `rep2` is the contragredient of `rep1`.
pub fn selberg_checkpoints(rep1: &RepModel, rep2: &RepModel, xs: &[f64]) -> Result<Vec<SumReport>> {
    if rep1.field != rep2.field {
        return Err(Error::Config("representations over different fields".into()));
    }
    let xmax = xs.iter().cloned().fold(0.0, f64::max);
    let diag = rep1.is_dual_of(rep2);
    let primes = if xmax >= 2.0 { enumerate_prime_ideals(&rep1.field, xmax.floor() as u64)? } else { Vec::new() };
    let terms: Vec<Complex64> = primes
        .iter()
        .map(|pr| {
            let a1: Complex64 = satake_at(rep1, pr)?.alphas.iter().sum();
            let a2: Complex64 = satake_at(rep2, pr)?.alphas.iter().sum();
            Ok(a1 * a2 / pr.norm as f64)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        let end = primes.partition_point(|p| (p.norm as f64) <= x);
        let v = block_sum(0, end, DEFAULT_BLOCK, Complex64::new(0.0, 0.0), |i| terms[i]);
        let cmp = if diag && x > 1.0 {
            Some(x.ln().ln())
        } else if diag {
            None
        } else {
            Some(0.0)
        };
        out.push(SumReport::new(x, None, v, cmp));
    }
    Ok(out)
}

pub fn selberg_sum(rep1: &RepModel, rep2: &RepModel, x: f64) -> Result<SumReport> {
    Ok(selberg_checkpoints(rep1, rep2, &[x])?.remove(0))
}

/// Asymptotic value of `−∫_x^∞ y^{iu−1}/log y dy` truncated after `m`
/// correction terms: `x^{iu}/(iu log x)·Σ_{k<=m} k!/(iu log x)^k`.
/// This is an expansion, not a convergent evaluation; it is accurate only
/// when `|u| log x` is large.
pub fn twisted_tail_expansion(x: f64, u: f64, m: usize) -> Result<Complex64> {
    if x <= 1.0 || u == 0.0 {
        return Err(Error::Input("expansion needs x > 1 and u != 0".into()));
    }
    let z = Complex64::new(0.0, u * x.ln());
    let lead = Complex64::from_polar(1.0, u * x.ln()) / z;
    let mut s = Complex64::new(0.0, 0.0);
    let mut fact = 1.0;
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 0..=m {
        if k > 0 {
            fact *= k as f64;
            zk *= z;
        }
        s += fact / zk;
    }
    Ok(lead * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrep::lambda_table;
    use crate::numfield::FieldDesc;
    use crate::quad::integrate;

    #[test]
    fn v_examples() {
        assert_eq!(v_eval(1.5), 1.0);
        assert_eq!(v_eval(3.0), 0.0);
        assert_eq!(v_eval(0.5), 0.0);
        assert_eq!(v_eval(1.0), 1.0);
        assert_eq!(v_eval(2.0), 1.0);
        assert!((v_eval(0.75) - 0.5).abs() < 1e-15);
        assert!((v_eval(2.25) - 0.5).abs() < 1e-15);
        for i in 0..=2000 {
            let x = 0.4 + 2.2 * i as f64 / 2000.0;
            let v = v_eval(x);
            assert!((0.0..=1.0).contains(&v));
            assert!((v_eval(3.0 - x) - v).abs() < 1e-14, "symmetric about 3/2");
        }
    }

    #[test]
    fn jet_derivatives_match_finite_differences() {
        let h = 1e-5;
        for &x in &[0.6, 0.8, 0.93, 2.1, 2.3] {
            for j in 1..=3 {
                let fd = (v_derivative(x + h, j - 1) - v_derivative(x - h, j - 1)) / (2.0 * h);
                let d = v_derivative(x, j);
                assert!((fd - d).abs() < 1e-5 * (1.0 + d.abs()), "x={x} j={j}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn glue_points_are_smooth() {
        for &x0 in &[0.5, 1.0, 2.0, 2.5] {
            for j in 0..=4 {
                for &eps in &[1e-4, 1e-3] {
                    let l = v_derivative(x0 - eps, j);
                    let r = v_derivative(x0 + eps, j);
                    assert!((l - r).abs() < 1e-6, "x0={x0} j={j} eps={eps}: {l} {r}");
                }
            }
        }
    }

    #[test]
    fn mellin_at_one_is_integral_of_v() {
        let m = v_mellin(Complex64::new(1.0, 0.0)).unwrap();
        let direct = integrate(v_eval, 0.5, 2.5, 1e-13, 0.0).unwrap();
        assert!((m.re - direct).abs() < 1e-10);
        assert!(m.re > 1.0 && m.re < 2.0);
        // S(t) + S(1−t) = 1, so each shoulder of width 1/2 contributes 1/4
        assert!((m.re - 1.5).abs() < 1e-10);
        assert!(m.im.abs() < 1e-15);
        assert!(v_mellin(Complex64::new(0.0, 1.0)).is_err());
        assert!(v_mellin(Complex64::new(2.5, 1.0)).is_err());
    }

    #[test]
    fn ibp_forms_agree() {
        for &s in &[Complex64::new(0.5, 3.0), Complex64::new(1.0, 17.0), Complex64::new(2.0, -40.0)] {
            let m0 = v_mellin_ibp(s, 0).unwrap();
            for j in 1..=3 {
                let mj = v_mellin_ibp(s, j).unwrap();
                assert!((m0 - mj).norm() < 1e-9 * (1.0 + m0.norm()), "s={s} j={j}");
            }
        }
    }

    #[test]
    fn mellin_decays_faster_than_ibp_order() {
        for j in [2usize, 3] {
            let d = mellin_decay(0.5, j, 10.0, 1000.0, 12).unwrap();
            assert!(d.slope <= -(j as f64) + 0.2, "j={j} slope={}", d.slope);
        }
    }

    #[test]
    fn trivial_smoothed_sum_tracks_integral() {
        let q = FieldDesc::rationals();
        let x = 1e5;
        let t = lambda_table(&crate::lrep::RepModel::gl1_trivial(q), 250_000).unwrap();
        let r = smoothed_pair_sum(&t, &t, x, true).unwrap();
        let ratio = r.value.re / r.comparison.unwrap();
        assert!((ratio - 1.0).abs() < 0.01);
        assert_eq!(r.residual.unwrap(), r.value - r.comparison.unwrap());
        let small = lambda_table(&crate::lrep::RepModel::gl1_trivial(q), 10).unwrap();
        assert_eq!(smoothed_pair_sum(&small, &small, 0.3, false).unwrap().value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn twisted_expansion_terms_shrink() {
        let a = twisted_tail_expansion(1e4, 50.0, 3).unwrap();
        let b = twisted_tail_expansion(1e4, 50.0, 4).unwrap();
        let z = 50.0 * 1e4f64.ln();
        assert!((a - b).norm() <= 24.0 / z.powi(5) * 1.0001);
        assert!(twisted_tail_expansion(1.0, 3.0, 3).is_err());
    }
}
