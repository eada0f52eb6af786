//! Truncated Euler products, Hypothesis H sums and the correction factors
//! relating the naive convolution `Σ λ_π(𝔫)λ_π'(𝔫)N𝔫^{−s}` to `L(s, π×π')`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{spf_table, squarefree_flags};
use crate::error::{Error, Result};
use crate::lrep::{
    delta_n, extend_multiplicative, lambda_table, rs_lambda_local, rs_local_params, rs_mu_local, satake_at,
    standard_lambda_local, CoeffKind, LocalParams, RepModel,
};
use crate::numfield::{enumerate_ideals, enumerate_prime_ideals, PrimeIdeal};
use crate::par::{block_sum, block_sum_slice, DEFAULT_BLOCK};
use crate::symfunc::power_sums;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Default slack above the convergence threshold.
pub const DEFAULT_EPS: f64 = 0.01;

/// `1 − 1/(n²+1)`.
pub fn sigma_threshold(n: usize) -> f64 {
    1.0 - 1.0 / ((n * n + 1) as f64)
}

/// Per-prime factors of a truncated Euler product, in norm order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductLedger {
    pub sigma: f64,
    pub kmin: usize,
    pub kmax: usize,
    pub x: f64,
    pub per_prime_factors: Vec<(u64, Complex64)>,
    pub running_product: Complex64,
    /// Bound (or next-terms estimate) for the omitted exponents `k > kmax`.
    pub tail_estimate: f64,
    pub strict_grc: bool,
    /// Failures of `a(𝔭^k) <= (n²+1)λ(𝔭^k)`, as `(norm, k)`.
    pub violations: Vec<(u64, usize)>,
}

impl ProductLedger {
    fn assemble(sigma: f64, kmin: usize, kmax: usize, x: f64, factors: Vec<(u64, Complex64)>) -> Self {
        let running = factors.iter().fold(ONE, |acc, (_, f)| acc * f);
        ProductLedger {
            sigma,
            kmin,
            kmax,
            x,
            per_prime_factors: factors,
            running_product: running,
            tail_estimate: 0.0,
            strict_grc: false,
            violations: Vec::new(),
        }
    }

    /// Product over factors with norm `<= y`.
    pub fn product_upto(&self, y: f64) -> Complex64 {
        self.per_prime_factors.iter().take_while(|(n, _)| *n as f64 <= y).fold(ONE, |acc, (_, f)| acc * f)
    }

    /// Ratios of the running product across successive dyadic blocks
    /// `(2^j, 2^{j+1}]`, starting at `2^j0`.
    pub fn dyadic_multipliers(&self, j0: u32) -> Vec<(u32, Complex64)> {
        let mut out = Vec::new();
        let mut j = j0;
        while ((1u64 << j) as f64) < self.x {
            let lo = (1u64 << j) as f64;
            let hi = (lo * 2.0).min(self.x);
            let m = self
                .per_prime_factors
                .iter()
                .filter(|(n, _)| (*n as f64) > lo && (*n as f64) <= hi)
                .fold(ONE, |acc, (_, f)| acc * f);
            out.push((j, m));
            j += 1;
        }
        out
    }
}

fn primes_to(rep: &RepModel, x: f64) -> Result<Vec<PrimeIdeal>> {
    if x < 2.0 {
        return Ok(Vec::new());
    }
    enumerate_prime_ideals(&rep.field, x.floor() as u64)
}

fn ordered<T: Send, F>(primes: &[PrimeIdeal], f: F) -> Result<Vec<T>>
where
    F: Fn(&PrimeIdeal) -> Result<T> + Sync + Send,
{
    primes.par_iter().map(f).collect()
}

/// `Σ_{N𝔭<=X} (log N𝔭)² |a_π(𝔭^k)|² / N𝔭^k`.
pub fn hyp_h_partial(rep: &RepModel, k: usize, x: f64) -> Result<f64> {
    Ok(hyp_h_terms(rep, k, x)?.iter().map(|(_, t)| t).sum::<f64>())
}

fn hyp_h_terms(rep: &RepModel, k: usize, x: f64) -> Result<Vec<(u64, f64)>> {
    if k < 2 {
        return Err(Error::Input(format!("Hypothesis H needs k >= 2, got {k}")));
    }
    let primes = primes_to(rep, x)?;
    ordered(&primes, |pr| {
        let lp = satake_at(rep, pr)?;
        let a = power_sums(&lp.alphas, k)[k - 1];
        let ln = (pr.norm as f64).ln();
        Ok((pr.norm, ln * ln * a.norm_sqr() / (pr.norm as f64).powi(k as i32)))
    })
}

/// Dyadic pieces `T_j = Σ_{2^j < N𝔭 <= 2^{j+1}}` of the Hypothesis H sum
/// for `j = 0..jmax`.
pub fn hyp_h_dyadic(rep: &RepModel, k: usize, jmax: u32) -> Result<Vec<f64>> {
    let terms = hyp_h_terms(rep, k, (1u64 << (jmax + 1)) as f64)?;
    let mut out = vec![0.0; jmax as usize + 1];
    for (n, t) in terms {
        let j = 63 - (n - 1).leading_zeros();
        if (j as usize) < out.len() {
            out[j as usize] += t;
        }
    }
    Ok(out)
}

fn check_sigma(sigma: f64, n: usize, eps: f64, strict: bool) -> Result<()> {
    let th = sigma_threshold(n);
    let ok = if strict { sigma > th + eps } else { sigma >= th + eps };
    if !ok {
        return Err(Error::Contract(format!(
            "sigma = {sigma} is below the convergence threshold 1 - 1/(n^2+1) = {th:.6} (+ eps = {eps}) for n = {n}; \
             the product is only controlled to the right of it"
        )));
    }
    Ok(())
}

/// Options shared by the two Rankin–Selberg products.
#[derive(Clone, Copy, Debug)]
pub struct ProductOptions {
    pub eps: f64,
    /// Use `δ = 0` in the tail bound instead of `δ_n`.
    pub strict_grc: bool,
}

impl Default for ProductOptions {
    fn default() -> Self {
        ProductOptions { eps: DEFAULT_EPS, strict_grc: false }
    }
}

/// `Σ_{k>kmax} (k+1)^{n²} N^{k(2δ−σ)}`, summed until the terms are spent.
fn tail_bound(norm: u64, n: usize, delta: f64, sigma: f64, kmax: usize) -> f64 {
    let r = (norm as f64).powf(2.0 * delta - sigma);
    let e = (n * n) as i32;
    let mut s = 0.0;
    let mut k = kmax.max(1) + 1;
    let mut prev = f64::INFINITY;
    loop {
        let t = ((k + 1) as f64).powi(e) * r.powi(k as i32);
        s += t;
        if (t < prev && t <= 1e-17 * s) || k > 100_000 {
            break;
        }
        prev = t;
        k += 1;
    }
    s
}

fn rs_self_product(
    rep: &RepModel,
    sigma: f64,
    x: f64,
    kmax: usize,
    opts: ProductOptions,
    a_variant: bool,
) -> Result<ProductLedger> {
    let n = rep.degree;
    check_sigma(sigma, n, opts.eps, false)?;
    let dual = rep.contragredient();
    let primes = primes_to(rep, x)?;
    let delta = if opts.strict_grc { 0.0 } else { delta_n(n) };
    let cap = kmax.max(n * n + 1);
    let rows: Vec<((u64, Complex64), f64, Vec<usize>)> = ordered(&primes, |pr| {
        let params = rs_local_params(&satake_at(rep, pr)?, &satake_at(&dual, pr)?)?;
        let lam = rs_lambda_local(&params, cap);
        let a = power_sums(&params, cap);
        let q = pr.norm as f64;
        let mut f = ONE;
        for k in 2..=kmax {
            let c = if a_variant { a[k - 1] } else { lam[k] };
            f += c / q.powf(k as f64 * sigma);
        }
        let mut bad = Vec::new();
        if a_variant {
            for k in 1..=n * n + 1 {
                let (ak, lk) = (a[k - 1].re, lam[k].re);
                if ak > (n * n + 1) as f64 * lk + 1e-9 * (1.0 + ak.abs()) {
                    bad.push(k);
                }
            }
        }
        Ok(((pr.norm, f), tail_bound(pr.norm, n, delta, sigma, kmax), bad))
    })?;
    let tail: f64 = rows.iter().map(|r| r.1).sum();
    let violations = rows.iter().flat_map(|((q, _), _, b)| b.iter().map(move |&k| (*q, k))).collect();
    let factors = rows.into_iter().map(|r| r.0).collect();
    let mut led = ProductLedger::assemble(sigma, 2, kmax, x, factors);
    led.tail_estimate = tail;
    led.strict_grc = opts.strict_grc;
    led.violations = violations;
    Ok(led)
}

/// `∏_{N𝔭<=X} (1 + Σ_{k=2}^{kmax} λ_{π×π̃}(𝔭^k) N𝔭^{−kσ})`; refused below
/// `σ = 1 − 1/(n²+1) + ε`.
pub fn rs_square_product(
    rep: &RepModel,
    sigma: f64,
    x: f64,
    kmax: usize,
    opts: ProductOptions,
) -> Result<ProductLedger> {
    rs_self_product(rep, sigma, x, kmax, opts, false)
}

/// The same product with `a_{π×π̃}` coefficients; also records failures of
/// `a(𝔭^k) <= (n²+1)λ(𝔭^k)` for `k <= n²+1`.
pub fn rs_square_a_product(
    rep: &RepModel,
    sigma: f64,
    x: f64,
    kmax: usize,
    opts: ProductOptions,
) -> Result<ProductLedger> {
    rs_self_product(rep, sigma, x, kmax, opts, true)
}

/// `Σ_{𝔫 squarefree, N𝔫<=X} λ_{π×π̃}(𝔫^k) N𝔫^{−kσ}`.
pub fn iterative_diagnostic_d(rep: &RepModel, k: usize, sigma: f64, x: f64) -> Result<f64> {
    if !(sigma > 0.5 && sigma <= 1.1) {
        return Err(Error::Input(format!("sigma must lie in (0.5, 1.1], got {sigma}")));
    }
    if x < 1.0 {
        return Ok(0.0);
    }
    let dual = rep.contragredient();
    let primes = primes_to(rep, x)?;
    let local: Vec<f64> = ordered(&primes, |pr| {
        let params = rs_local_params(&satake_at(rep, pr)?, &satake_at(&dual, pr)?)?;
        let v = rs_lambda_local(&params, k)[k];
        Ok(v.re / (pr.norm as f64).powf(k as f64 * sigma))
    })?;
    let xs = x.floor() as usize;
    if rep.field.is_rational() {
        let spf = spf_table(xs);
        let sqf = squarefree_flags(xs);
        let mut slot = vec![0u32; xs + 1];
        for (i, pr) in primes.iter().enumerate() {
            slot[pr.p as usize] = i as u32;
        }
        let mut val = vec![0.0; xs + 1];
        val[1] = 1.0;
        for m in 2..=xs {
            if sqf[m] {
                let p = spf[m] as usize;
                val[m] = val[m / p] * local[slot[p] as usize];
            }
        }
        return Ok(block_sum(1, xs + 1, DEFAULT_BLOCK, 0.0, |m| val[m]));
    }
    let index: std::collections::HashMap<_, _> = primes.iter().enumerate().map(|(i, p)| (p.key(), i)).collect();
    let terms: Vec<f64> = enumerate_ideals(&rep.field, xs as u64)?
        .iter()
        .filter(|id| id.is_squarefree())
        .map(|id| id.factors().iter().map(|f| local[index[&f.key]]).product())
        .collect();
    Ok(block_sum_slice(&terms, DEFAULT_BLOCK, 0.0, |v| *v))
}

/// `b(0..K)`: `b(k) = Σ_{ν<=k} λ_π(𝔭^ν)λ_π'(𝔭^ν) μ_{π×π'}(𝔭^{k−ν})`.
pub fn local_b_coeffs(lp: &LocalParams, lp2: &LocalParams, k: usize) -> Result<Vec<Complex64>> {
    let l1 = standard_lambda_local(lp, k);
    let l2 = standard_lambda_local(lp2, k);
    let mu = rs_mu_local(&rs_local_params(lp, lp2)?, k);
    Ok((0..=k).map(|m| (0..=m).map(|nu| l1[nu] * l2[nu] * mu[m - nu]).sum()).collect())
}

/// `d(0..K)`: `d(k) = Σ_{ν<=k} λ_{π×π̃}(𝔭^ν) μ_{π⊗π̃}(𝔭^{k−ν})`, where
/// `μ_{π⊗π̃}` inverts the series `Σ |λ_π(𝔭^j)|² x^j`.
pub fn local_d_coeffs(lp: &LocalParams, k: usize) -> Result<Vec<Complex64>> {
    let dual = lp.conj();
    let lam = standard_lambda_local(lp, k);
    let sq: Vec<f64> = lam.iter().map(|v| v.norm_sqr()).collect();
    let mut mu = vec![ONE];
    for m in 1..=k {
        let s: Complex64 = (1..=m).map(|j| mu[m - j] * sq[j]).sum();
        mu.push(-s);
    }
    let rs = rs_lambda_local(&rs_local_params(lp, &dual)?, k);
    Ok((0..=k).map(|m| (0..=m).map(|nu| rs[nu] * mu[m - nu]).sum()).collect())
}

fn pair_threshold(rep: &RepModel, rep2: &RepModel, sigma: f64, k: usize) -> Result<usize> {
    if rep.field != rep2.field {
        return Err(Error::Config("representations over different fields".into()));
    }
    if k < 2 {
        return Err(Error::Input(format!("K must be >= 2, got {k}")));
    }
    let n = rep.degree.max(rep2.degree);
    check_sigma(sigma, n, 0.0, true)?;
    Ok(n)
}

/// `∏_{N𝔭<=X} Σ_{k<=K} b(k,𝔭) N𝔭^{−kσ}`. The tail field carries the
/// size of the next `K` terms summed over the same primes.
pub fn h_partial(rep: &RepModel, rep2: &RepModel, sigma: f64, x: f64, k: usize) -> Result<ProductLedger> {
    pair_threshold(rep, rep2, sigma, k)?;
    let primes = primes_to(rep, x)?;
    let rows: Vec<((u64, Complex64), f64)> = ordered(&primes, |pr| {
        let b = local_b_coeffs(&satake_at(rep, pr)?, &satake_at(rep2, pr)?, 2 * k)?;
        let q = pr.norm as f64;
        let f: Complex64 = (0..=k).map(|j| b[j] / q.powf(j as f64 * sigma)).sum();
        let tail: f64 = (k + 1..=2 * k).map(|j| b[j].norm() / q.powf(j as f64 * sigma)).sum();
        Ok(((pr.norm, f), tail))
    })?;
    let tail = rows.iter().map(|r| r.1).sum();
    let mut led = ProductLedger::assemble(sigma, 0, k, x, rows.into_iter().map(|r| r.0).collect());
    led.tail_estimate = tail;
    Ok(led)
}

/// Square-free variant: `∏ (1 + λ_π(𝔭)λ_π'(𝔭)N𝔭^{−σ}) L_𝔭(σ, π×π')^{−1}`.
/// Each local factor is an exact polynomial in `N𝔭^{−σ}`.
pub fn g_partial(rep: &RepModel, rep2: &RepModel, sigma: f64, x: f64, k: usize) -> Result<ProductLedger> {
    pair_threshold(rep, rep2, sigma, k)?;
    let primes = primes_to(rep, x)?;
    let factors: Vec<(u64, Complex64)> = ordered(&primes, |pr| {
        let (a, b) = (satake_at(rep, pr)?, satake_at(rep2, pr)?);
        let params = rs_local_params(&a, &b)?;
        let deg = params.len();
        let mu = rs_mu_local(&params, deg);
        let lam1: Complex64 = a.alphas.iter().sum::<Complex64>() * b.alphas.iter().sum::<Complex64>();
        let t = (pr.norm as f64).powf(-sigma);
        let inv: Complex64 = (0..=deg).rev().fold(ZERO, |acc, m| acc * t + mu[m]);
        Ok((pr.norm, (ONE + lam1 * t) * inv))
    })?;
    Ok(ProductLedger::assemble(sigma, 0, k, x, factors))
}

/// Two-sided truncation of `Σ λ_π(n)λ_π'(n) n^{−σ} = L(σ, π×π')·H(σ)` over ℚ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationCheck {
    pub sigma: f64,
    pub x: f64,
    /// `Σ_{n<=X} λ_π(n)λ_π'(n) n^{−σ}` from the coefficient tables.
    pub naive_sum: Complex64,
    /// `Σ_{n<=X} (λ_{π×π'} ⋆ b)(n) n^{−σ}` from local data.
    pub convolved_sum: Complex64,
    pub rel_gap: f64,
    /// `∏_{p<=X} L_p(σ, π×π')·H_p(σ)`, for information.
    pub euler_product: Complex64,
    pub euler_rel_gap: f64,
}

pub fn global_factorization_check(
    rep: &RepModel,
    rep2: &RepModel,
    sigma: f64,
    x: f64,
    k: usize,
) -> Result<FactorizationCheck> {
    pair_threshold(rep, rep2, sigma, k)?;
    if !rep.field.is_rational() {
        return Err(Error::Config("the global factorization check runs over Q".into()));
    }
    let xs = x.floor().max(1.0) as u64;
    let t1 = lambda_table(rep, xs)?;
    let t2 = lambda_table(rep2, xs)?;
    let naive =
        block_sum(1, xs as usize + 1, DEFAULT_BLOCK, ZERO, |n| t1.values[n] * t2.values[n] / (n as f64).powf(sigma));
    let conv_table = extend_multiplicative(&rep.field, xs, CoeffKind::Lambda, String::new(), |pr, e| {
        let (a, b) = (satake_at(rep, pr)?, satake_at(rep2, pr)?);
        let rs = rs_lambda_local(&rs_local_params(&a, &b)?, e);
        let bb = local_b_coeffs(&a, &b, e)?;
        Ok((0..=e).map(|m| (0..=m).map(|j| rs[j] * bb[m - j]).sum()).collect())
    })?;
    let conv = block_sum(1, xs as usize + 1, DEFAULT_BLOCK, ZERO, |n| conv_table.values[n] / (n as f64).powf(sigma));
    let h = h_partial(rep, rep2, sigma, x, k)?;
    let primes = primes_to(rep, x)?;
    let lfac: Vec<Complex64> = ordered(&primes, |pr| {
        let params = rs_local_params(&satake_at(rep, pr)?, &satake_at(rep2, pr)?)?;
        let t = (pr.norm as f64).powf(-sigma);
        Ok(params.iter().fold(ONE, |acc, g| acc / (ONE - g * t)))
    })?;
    let euler = lfac.iter().zip(&h.per_prime_factors).fold(ONE, |acc, (l, (_, hf))| acc * l * hf);
    Ok(FactorizationCheck {
        sigma,
        x,
        naive_sum: naive,
        convolved_sum: conv,
        rel_gap: (naive - conv).norm() / naive.norm(),
        euler_product: euler,
        euler_rel_gap: (naive - euler).norm() / naive.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_upto;
    use crate::numfield::{primes_above, FieldDesc, PrimeKey};
    use crate::symfunc::rel_err;
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};

    fn q() -> FieldDesc {
        FieldDesc::rationals()
    }

    fn unitary(seed: u64, n: usize) -> LocalParams {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let al = (0..n).map(|_| Complex64::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>())).collect();
        LocalParams::new(PrimeKey { p: 2, index: 0 }, 2, al)
    }

    #[test]
    fn hyp_h_trivial() {
        let t = RepModel::gl1_trivial(q());
        let want: f64 = primes_upto(1000).iter().map(|&p| (p as f64).ln().powi(2) / (p * p) as f64).sum();
        assert!((hyp_h_partial(&t, 2, 1000.0).unwrap() - want).abs() < 1e-12);
        assert_eq!(hyp_h_partial(&t, 2, 1.5).unwrap(), 0.0);
        assert!(hyp_h_partial(&t, 2, 500.0).unwrap() < hyp_h_partial(&t, 2, 1000.0).unwrap());
        let d = hyp_h_dyadic(&t, 2, 9).unwrap();
        let total: f64 = d.iter().sum();
        assert!((total - hyp_h_partial(&t, 2, 1024.0).unwrap()).abs() < 1e-12);
        assert!((d[1] - 3f64.ln().powi(2) / 9.0).abs() < 1e-15);
    }

    #[test]
    fn trivial_product_is_geometric() {
        let t = RepModel::gl1_trivial(q());
        let led = rs_square_product(&t, 0.9, 100.0, 200, ProductOptions { eps: 0.01, strict_grc: true }).unwrap();
        for (p, f) in &led.per_prime_factors {
            let x = (*p as f64).powf(-0.9);
            assert!((f.re - (1.0 + x * x / (1.0 - x))).abs() < 1e-12, "p={p}");
        }
        let r = rs_square_product(&t, 0.9, 1.0, 5, ProductOptions::default()).unwrap();
        assert_eq!(r.running_product, ONE);
        assert!(rs_square_product(&t, 0.5, 100.0, 5, ProductOptions::default()).unwrap_err().is_contract());
        let empty = rs_square_a_product(&t, 0.9, 100.0, 1, ProductOptions::default()).unwrap();
        assert!(empty.per_prime_factors.iter().all(|(_, f)| *f == ONE));
    }

    #[test]
    fn weight12_a_square_at_two() {
        let d = RepModel::gl2(12, 100).unwrap();
        let led = rs_square_a_product(&d, 0.81, 10.0, 2, ProductOptions::default()).unwrap();
        let lam = -24.0 / 2f64.powf(5.5);
        let c = lam / 2.0;
        let c2 = 2.0 * c * c - 1.0;
        assert!((c2 + 0.859375).abs() < 1e-6);
        let a2 = (2.0 * c2).powi(2);
        assert!((a2 - 2.954).abs() < 1e-3);
        let (_, f) = led.per_prime_factors[0];
        assert!((f.re - 1.0 - a2 / 2f64.powf(1.62)).abs() < 1e-12);
        assert!(led.violations.is_empty());
        assert!(led.per_prime_factors.iter().all(|(_, f)| f.re >= 1.0 - 1e-9));
    }

    #[test]
    fn products_nondecreasing_and_consistent() {
        let d = RepModel::gl2(12, 20_000).unwrap();
        let led = rs_square_product(&d, 0.81, 20_000.0, 5, ProductOptions::default()).unwrap();
        let mut acc = ONE;
        let mut last = 0.0;
        for (_, f) in &led.per_prime_factors {
            assert!(f.re >= 1.0 - 1e-9);
            acc *= f;
            assert!(acc.re >= last);
            last = acc.re;
        }
        assert!(rel_err(led.running_product, acc) < 1e-12);
        assert!(led.tail_estimate.is_finite() && led.tail_estimate > 0.0);
        let strict = rs_square_product(&d, 0.81, 20_000.0, 5, ProductOptions { eps: 0.01, strict_grc: true }).unwrap();
        assert!(strict.tail_estimate < led.tail_estimate);
    }

    #[test]
    fn diagnostic_d_trivial() {
        let t = RepModel::gl1_trivial(q());
        let sqf = squarefree_flags(1000);
        let want: f64 = (1..=1000).filter(|&n| sqf[n]).map(|n| (n as f64).powf(-1.6)).sum();
        assert!((iterative_diagnostic_d(&t, 2, 0.8, 1000.0).unwrap() - want).abs() < 1e-12);
        assert_eq!(iterative_diagnostic_d(&t, 2, 0.8, 1.0).unwrap(), 1.0);
        assert!(iterative_diagnostic_d(&t, 2, 0.4, 10.0).is_err());
        let g = FieldDesc::quadratic(-1).unwrap();
        let tg = RepModel::gl1_trivial(g);
        let ids = enumerate_ideals(&g, 500).unwrap();
        let want: f64 = ids.iter().filter(|i| i.is_squarefree()).map(|i| (i.norm() as f64).powf(-1.6)).sum();
        assert!((iterative_diagnostic_d(&tg, 2, 0.8, 500.0).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn b_and_d_vanish_at_one() {
        for seed in 0..50 {
            let (a, b) = (unitary(seed, 1 + seed as usize % 4), unitary(seed + 1000, 1 + seed as usize % 3));
            let bb = local_b_coeffs(&a, &b, 6).unwrap();
            assert_eq!(bb[0], ONE);
            assert!(bb[1].norm() < 1e-12);
            let d = local_d_coeffs(&a, 6).unwrap();
            assert!(d[1].norm() < 1e-12);
        }
    }

    /// `L(π×π̃)/L(π⊗π̃)` by power-series division, against the convolution.
    #[test]
    fn d_matches_series_division() {
        let d = RepModel::gl2(12, 10).unwrap();
        let pr = &primes_above(&q(), 2)[0];
        let lp = satake_at(&d, pr).unwrap();
        let k = 4;
        let rs = rs_lambda_local(&rs_local_params(&lp, &lp.conj()).unwrap(), k);
        let naive: Vec<Complex64> =
            standard_lambda_local(&lp, k).iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
        let mut quo = vec![ZERO; k + 1];
        for m in 0..=k {
            let s: Complex64 = (1..=m).map(|j| naive[j] * quo[m - j]).sum();
            quo[m] = (rs[m] - s) / naive[0];
        }
        let dd = local_d_coeffs(&lp, k).unwrap();
        for m in 0..=k {
            assert!((quo[m] - dd[m]).norm() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn h_trivial_is_one() {
        let t = RepModel::gl1_trivial(q());
        let led = h_partial(&t, &t, 1.0, 1000.0, 2).unwrap();
        for (_, f) in &led.per_prime_factors {
            assert!((f - ONE).norm() < 1e-14);
        }
        assert!(h_partial(&t, &t, 0.5, 100.0, 2).unwrap_err().is_contract());
        let g = g_partial(&t, &t, 1.0, 1000.0, 2).unwrap();
        for (p, f) in &g.per_prime_factors {
            let x = 1.0 / *p as f64;
            assert!((f.re - (1.0 + x) * (1.0 - x)).abs() < 1e-14);
        }
    }

    #[test]
    fn h_self_dual_real_positive() {
        let d = RepModel::gl2(12, 20_000).unwrap();
        let led = h_partial(&d, &d.contragredient(), 1.0, 20_000.0, 5).unwrap();
        assert!(led.running_product.im.abs() < 1e-10);
        assert!(led.running_product.re > 0.0);
        let late: Vec<_> = led.dyadic_multipliers(14);
        assert!(late.iter().all(|(_, m)| (m - ONE).norm() < 1e-4), "{late:?}");
    }

    #[test]
    fn global_factorization_weight12() {
        let d = RepModel::gl2(12, 10_000).unwrap();
        let c = global_factorization_check(&d, &d.contragredient(), 1.5, 10_000.0, 5).unwrap();
        assert!(c.rel_gap < 1e-10, "{c:?}");
        assert!(c.euler_rel_gap < 1e-2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        /// `Σ λλ' x^m = (Σ λ_{π×π'} x^m)(Σ b x^m)` up to degree `K`.
        #[test]
        fn local_factorization_identity(seed in 0u64..1_000_000, n in 1usize..5, n2 in 1usize..5) {
            let (a, b) = (unitary(seed, n), unitary(seed ^ 0xabcdef, n2));
            let k = n * n2 + 1;
            let l1 = standard_lambda_local(&a, k);
            let l2 = standard_lambda_local(&b, k);
            let rs = rs_lambda_local(&rs_local_params(&a, &b).unwrap(), k);
            let bb = local_b_coeffs(&a, &b, k).unwrap();
            for m in 0..=k {
                let lhs = l1[m] * l2[m];
                let rhs: Complex64 = (0..=m).map(|j| rs[j] * bb[m - j]).sum();
                prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
            }
        }
    }
}
