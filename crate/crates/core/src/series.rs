//! Exact integer power series by multi-modular number-theoretic transforms.
//!
//! Products are computed modulo three NTT-friendly primes below `2^62` and
//! recombined with Garner's algorithm. The caller supplies an a-priori bound
//! on the absolute size of the result; if it does not fit below half the
//! combined modulus the computation fails with [`Error::Overflow`].

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::{invmod, mulmod, powmod};
use crate::error::{Error, Result};

/// `(p, primitive root)` with `p − 1` divisible by a large power of two.
pub const NTT_PRIMES: [(u64, u64); 3] = [(4179340454199820289, 3), (1945555039024054273, 5), (882705526964617217, 5)];

/// Montgomery arithmetic modulo an odd `p < 2^62`.
#[derive(Clone, Copy, Debug)]
pub struct Mont {
    pub p: u64,
    /// `−p^{-1} mod 2^64`
    ninv: u64,
    r2: u64,
    one: u64,
}

impl Mont {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1 << 62));
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = mulmod(r, r, p);
        Mont { p, ninv: inv.wrapping_neg(), r2, one: r }
    }

    #[inline(always)]
    pub fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    pub fn from_mont(&self, x: u64) -> u64 {
        self.reduce(x as u128)
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = self.one;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
}

/// In-place transform of a power-of-two length slice in Montgomery form.
pub fn ntt(m: &Mont, g: u64, a: &mut [u64], invert: bool) {
    let n = a.len();
    assert!(n.is_power_of_two());
    assert!((m.p - 1) % n as u64 == 0, "transform length exceeds 2-adic order");
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let gm = m.to_mont(g);
    let mut len = 2;
    let mut tw = Vec::with_capacity(n / 2);
    while len <= n {
        let mut w = m.pow(gm, (m.p - 1) / len as u64);
        if invert {
            w = m.pow(w, m.p - 2);
        }
        tw.clear();
        let mut cur = m.one;
        for _ in 0..len / 2 {
            tw.push(cur);
            cur = m.mul(cur, w);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(len / 2);
            for ((u, v), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(tw.iter()) {
                let x = *u;
                let y = m.mul(*v, t);
                *u = m.add(x, y);
                *v = m.sub(x, y);
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = m.pow(m.to_mont(n as u64), m.p - 2);
        for x in a.iter_mut() {
            *x = m.mul(*x, ninv);
        }
    }
}

/// Truncated product `a·b mod x^len` of residue vectors (plain form).
pub fn mul_trunc(m: &Mont, g: u64, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let need = (a.len().min(len) + b.len().min(len)).saturating_sub(1).max(1);
    let n = need.next_power_of_two();
    let mut fa = vec![0u64; n];
    let mut fb = vec![0u64; n];
    for (d, &s) in fa.iter_mut().zip(a.iter().take(len)) {
        *d = m.to_mont(s);
    }
    for (d, &s) in fb.iter_mut().zip(b.iter().take(len)) {
        *d = m.to_mont(s);
    }
    let square = a.as_ptr() == b.as_ptr() && a.len() == b.len();
    ntt(m, g, &mut fa, false);
    if square {
        for x in fa.iter_mut() {
            *x = m.mul(*x, *x);
        }
    } else {
        ntt(m, g, &mut fb, false);
        for (x, y) in fa.iter_mut().zip(fb.iter()) {
            *x = m.mul(*x, *y);
        }
    }
    ntt(m, g, &mut fa, true);
    fa.truncate(len);
    fa.resize(len, 0);
    fa.into_iter().map(|x| m.from_mont(x)).collect()
}

/// Residues of a signed integer sequence modulo `p`.
pub fn residues(v: &[i128], p: u64) -> Vec<u64> {
    v.iter().map(|&x| x.rem_euclid(p as i128) as u64).collect()
}

/// Combined modulus of [`NTT_PRIMES`].
pub fn modulus() -> BigInt {
    NTT_PRIMES.iter().fold(BigInt::from(1), |acc, &(p, _)| acc * BigInt::from(p))
}

/// Garner recombination of per-prime residue vectors to symmetric
/// representatives in `(−M/2, M/2]`.
pub fn crt(res: &[Vec<u64>; 3]) -> Vec<BigInt> {
    let [p1, p2, p3] = [NTT_PRIMES[0].0, NTT_PRIMES[1].0, NTT_PRIMES[2].0];
    let inv_p1_mod_p2 = invmod(p1 % p2, p2);
    let inv_p1_mod_p3 = invmod(p1 % p3, p3);
    let inv_p2_mod_p3 = invmod(p2 % p3, p3);
    let p12 = p1 as u128 * p2 as u128;
    let big_m = modulus();
    let half: BigInt = &big_m / 2;
    let big_p12 = BigInt::from(p12);
    (0..res[0].len())
        .into_par_iter()
        .map(|i| {
            let v1 = res[0][i];
            let v2 = mulmod((res[1][i] + p2 - v1 % p2) % p2, inv_p1_mod_p2, p2);
            let t = (res[2][i] + p3 - v1 % p3) % p3;
            let t = mulmod(t, inv_p1_mod_p3, p3);
            let v3 = mulmod((t + p3 - v2 % p3) % p3, inv_p2_mod_p3, p3);
            let low = v1 as u128 + v2 as u128 * p1 as u128;
            let x = BigInt::from(low) + BigInt::from(v3) * &big_p12;
            if x > half {
                x - &big_m
            } else {
                x
            }
        })
        .collect()
}

/// Fails unless `bound < M/2`.
pub fn check_bound(bound: f64) -> Result<()> {
    let half = NTT_PRIMES.iter().map(|&(p, _)| p as f64).product::<f64>() / 2.0;
    if !(bound < half) {
        return Err(Error::Overflow(format!(
            "coefficient bound {bound:.3e} exceeds the multi-modular range {half:.3e}"
        )));
    }
    Ok(())
}

/// Runs `f` once per NTT prime (in parallel) and recombines.
pub fn multimodular<F>(f: F) -> Vec<BigInt>
where
    F: Fn(&Mont, u64) -> Vec<u64> + Sync,
{
    let out: Vec<Vec<u64>> = NTT_PRIMES.par_iter().map(|&(p, g)| f(&Mont::new(p), g)).collect();
    let [a, b, c]: [Vec<u64>; 3] = out.try_into().expect("three primes");
    crt(&[a, b, c])
}

#[allow(dead_code)]
fn primitive_root_ok(p: u64, g: u64) -> bool {
    crate::arith::factorize(p - 1).iter().all(|&(l, _)| powmod(g, (p - 1) / l, p) != 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes_and_roots() {
        for &(p, g) in &NTT_PRIMES {
            assert!(crate::arith::is_prime(p));
            assert!(primitive_root_ok(p, g));
            assert_eq!((p - 1) % (1 << 22), 0);
        }
    }

    #[test]
    fn montgomery_roundtrip() {
        let m = Mont::new(NTT_PRIMES[0].0);
        for x in [0u64, 1, 2, 12345, m.p - 1] {
            assert_eq!(m.from_mont(m.to_mont(x)), x);
        }
        let a = m.to_mont(123456789);
        let b = m.to_mont(987654321);
        assert_eq!(m.from_mont(m.mul(a, b)), mulmod(123456789, 987654321, m.p));
    }

    proptest! {
        #[test]
        fn product_matches_schoolbook(a in prop::collection::vec(-1_000_000i64..1_000_000, 1..60),
                                      b in prop::collection::vec(-1_000_000i64..1_000_000, 1..60)) {
            let len = a.len() + b.len() - 1;
            let mut want = vec![0i128; len];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    want[i + j] += x as i128 * y as i128;
                }
            }
            let ai: Vec<i128> = a.iter().map(|&x| x as i128).collect();
            let bi: Vec<i128> = b.iter().map(|&x| x as i128).collect();
            let got = multimodular(|m, g| mul_trunc(m, g, &residues(&ai, m.p), &residues(&bi, m.p), len));
            for (g, w) in got.iter().zip(want.iter()) {
                prop_assert_eq!(g, &BigInt::from(*w));
            }
        }
    }

    #[test]
    fn crt_handles_large_signed_values() {
        let v: i128 = -(1i128 << 120) + 17;
        let r = [residues(&[v], NTT_PRIMES[0].0), residues(&[v], NTT_PRIMES[1].0), residues(&[v], NTT_PRIMES[2].0)];
        assert_eq!(crt(&r)[0], BigInt::from(v));
        assert!(check_bound(1e50).is_ok());
        assert!(check_bound(1e60).is_err());
    }
}
