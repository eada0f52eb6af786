//! Fourier coefficients of the level-one Hecke eigenforms of weight 12
//! and 16: `Δ = q∏(1−q^m)^24` and `E₄Δ`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::divisor_counts;
use crate::error::{Error, Result};
use crate::series::{check_bound, mul_trunc, multimodular, Mont};

/// Largest supported coefficient index.
pub const MAX_LIMIT: usize = 1_000_000;

/// `a(0..=x)` (entry 0 is zero) of the weight-`weight` eigenform.
pub fn gl2_fourier_coefficients(weight: u32, x: usize) -> Result<Vec<BigInt>> {
    if weight != 12 && weight != 16 {
        return Err(Error::Config(format!("no level-one eigenform of weight {weight} is modeled")));
    }
    if x == 0 || x > MAX_LIMIT {
        return Err(Error::Input(format!("coefficient limit must be in 1..={MAX_LIMIT}, got {x}")));
    }
    let d = divisor_counts(x);
    let half = (weight as f64 - 1.0) / 2.0;
    let bound = (1..=x).map(|n| d[n] as f64 * (n as f64).powf(half)).fold(0.0, f64::max);
    check_bound(bound * 1.01)?;

    // η³ = Σ_k (−1)^k (2k+1) q^{k(k+1)/2}, needed to q^{x−1}
    let len = x;
    let mut eta3 = vec![0i64; len];
    let mut k = 0usize;
    while k * (k + 1) / 2 < len {
        let s = if k % 2 == 0 { 1 } else { -1 };
        eta3[k * (k + 1) / 2] = s * (2 * k as i64 + 1);
        k += 1;
    }
    let sigma3 = if weight == 16 { Some(sigma3_table(x)) } else { None };

    Ok(multimodular(|m: &Mont, g| {
        let p = m.p;
        let e: Vec<u64> = eta3.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
        let e2 = mul_trunc(m, g, &e, &e, len);
        let e4 = mul_trunc(m, g, &e2, &e2, len);
        let e8 = mul_trunc(m, g, &e4, &e4, len);
        let mut delta = vec![0u64; x + 1];
        delta[1..].copy_from_slice(&e8[..x]);
        match &sigma3 {
            None => delta,
            Some(s3) => {
                let e4s: Vec<u64> = (0..=x)
                    .map(|n| if n == 0 { 1 } else { ((240u128 * (s3[n] % p as u128)) % p as u128) as u64 })
                    .collect();
                mul_trunc(m, g, &e4s, &delta, x + 1)
            }
        }
    }))
}

fn sigma3_table(x: usize) -> Vec<u128> {
    let mut s = vec![0u128; x + 1];
    for dd in 1..=x {
        let c = (dd as u128).pow(3);
        let mut j = dd;
        while j <= x {
            s[j] += c;
            j += dd;
        }
    }
    s
}

/// `a(n)/n^{(w−1)/2}` for `n` in `0..=x` (entry 0 is zero).
pub fn normalized_coefficients(weight: u32, x: usize) -> Result<Vec<f64>> {
    let a = gl2_fourier_coefficients(weight, x)?;
    let half = (weight as f64 - 1.0) / 2.0;
    Ok(a.iter()
        .enumerate()
        .map(|(n, v)| if n == 0 { 0.0 } else { v.to_f64().unwrap_or(f64::NAN) / (n as f64).powf(half) })
        .collect())
}
