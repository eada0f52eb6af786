//! The power sieve: order-`k` residue characters over a set of primes
//! that split completely, and the sieve weights built from them.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{v_eval, V_SUPPORT};
use crate::error::{Error, Result};
use crate::lrep::{rs_table, CoeffKind, RepModel};
use crate::numfield::{
    enumerate_prime_ideals, ideal_generator, primes_above, splits_completely_in_l, unit_generators, FieldDesc, Ideal,
    PrimeIdeal, RElt, ResidueField,
};
use crate::par::{block_sum, DEFAULT_BLOCK};

/// An order-`k` character of `(O/𝔭)^×`, `χ(g^t) = e(t/k)` for the
/// designated generator `g`.
#[derive(Clone, Debug)]
pub struct Character {
    pub prime: PrimeIdeal,
    pub k: u64,
    rf: ResidueField,
    /// `ζ^j` for `ζ = g^{(q−1)/k}`, `j < k`.
    zeta_pows: Vec<RElt>,
}

impl Character {
    pub fn residue_field(&self) -> &ResidueField {
        &self.rf
    }

    /// `t mod k` where `x = g^t`, read off from `x^{(q−1)/k} = ζ^t`;
    /// `None` on zero.
    pub fn exponent(&self, x: RElt) -> Option<u32> {
        if self.rf.is_zero(x) {
            return None;
        }
        let y = self.rf.pow(x, (self.rf.q - 1) / self.k);
        let j = self.zeta_pows.iter().position(|&z| z == y).expect("x^((q-1)/k) is a k-th root of unity");
        Some(j as u32)
    }

    pub fn exponent_int(&self, n: i64) -> Option<u32> {
        self.exponent(self.rf.from_int(n))
    }

    pub fn value(&self, x: RElt) -> Complex64 {
        match self.exponent(x) {
            None => Complex64::new(0.0, 0.0),
            Some(j) => root_of_unity(j, self.k),
        }
    }

    /// Smallest `j >= 1` with `χ^j` trivial, by exhausting the residue group.
    pub fn exact_order(&self) -> u64 {
        let exps: Vec<u64> =
            (1..self.rf.q).filter_map(|i| self.exponent(self.rf.from_index(i)).map(u64::from)).collect();
        (1..=self.k).find(|&j| exps.iter().all(|&e| (j * e) % self.k == 0)).unwrap_or(self.k)
    }
}

/// `e(j/k)`, exactly `1` for `j ≡ 0`.
pub fn root_of_unity(j: u32, k: u64) -> Complex64 {
    let j = j as u64 % k;
    if j == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * j == k {
        Complex64::new(-1.0, 0.0)
    } else if 4 * j == k {
        Complex64::new(0.0, 1.0)
    } else if 4 * j == 3 * k {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, TAU * j as f64 / k as f64)
    }
}

/// Builds `χ_𝔭`; refused unless `𝔭` splits completely in the sense of
/// [`splits_completely_in_l`].
pub fn build_character(field: &FieldDesc, pr: &PrimeIdeal, k: u64) -> Result<Character> {
    if !splits_completely_in_l(field, k, pr)? {
        return Err(Error::Contract(format!(
            "prime of norm {} over {} does not admit an order-{k} character trivial on units",
            pr.norm, pr.p
        )));
    }
    let rf = pr.residue_field();
    let zeta = rf.pow(rf.generator, (rf.q - 1) / k);
    let mut zeta_pows = Vec::with_capacity(k as usize);
    let mut z = rf.one();
    for _ in 0..k {
        zeta_pows.push(z);
        z = rf.mul(z, zeta);
    }
    Ok(Character { prime: pr.clone(), k, rf, zeta_pows })
}

/// The family `{χ_𝔭 : 𝔭 ∈ 𝒫}`.
#[derive(Clone, Debug)]
pub struct CharacterSystem {
    pub field: FieldDesc,
    pub k: u64,
    pub p_cap: u64,
    pub avoid: Ideal,
    pub chars: Vec<Character>,
    pub logs: Vec<f64>,
}

impl CharacterSystem {
    pub fn primes(&self) -> Vec<&PrimeIdeal> {
        self.chars.iter().map(|c| &c.prime).collect()
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// Exponent of `χ_i` on the integer ideal `nℤ`, through its positive
    /// generator; `None` when `𝔭_i | n`. Only over ℚ.
    pub fn exponent_int(&self, i: usize, n: u64) -> Option<u32> {
        debug_assert!(self.field.is_rational());
        self.chars[i].exponent_int((n % self.chars[i].prime.p) as i64)
    }

    /// Exponent of `χ_i` on an ideal: the sum over its factorization of the
    /// exponents at a generator of each prime factor.
    pub fn exponent_ideal(&self, i: usize, n: &Ideal) -> Result<Option<u32>> {
        let ch = &self.chars[i];
        if n.divisible_by(ch.prime.key()) {
            return Ok(None);
        }
        let mut t = 0u64;
        for f in n.factors() {
            let pr = primes_above(&self.field, f.key.p)
                .into_iter()
                .find(|p| p.key() == f.key)
                .ok_or_else(|| Error::Input(format!("unknown prime {:?}", f.key)))?;
            let g = ideal_generator(&self.field, &pr)?;
            let e = ch.exponent(ch.prime.reduce(g)).expect("coprime factor");
            t += e as u64 * f.exp as u64;
        }
        Ok(Some((t % self.k) as u32))
    }
}

/// `𝒫 = {𝔭 : N𝔭 <= P, splits completely, 𝔭 ∤ 𝔞}` with one character each.
pub fn build_system(field: &FieldDesc, k: u64, p_cap: u64, avoid: &Ideal) -> Result<CharacterSystem> {
    if k < 2 {
        return Err(Error::Input(format!("k must be >= 2, got {k}")));
    }
    unit_generators(field)?;
    let candidates: Vec<PrimeIdeal> = if p_cap >= 2 {
        enumerate_prime_ideals(field, p_cap)?
            .into_iter()
            .filter(|pr| k % pr.p != 0 && field.discriminant % pr.p as i64 != 0)
            .filter(|pr| !avoid.divisible_by(pr.key()))
            .collect()
    } else {
        Vec::new()
    };
    let chars: Vec<Option<Character>> = candidates
        .par_iter()
        .map(|pr| -> Result<Option<Character>> {
            if splits_completely_in_l(field, k, pr)? {
                Ok(Some(build_character(field, pr, k)?))
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;
    let chars: Vec<Character> = chars.into_iter().flatten().collect();
    if chars.is_empty() {
        return Err(Error::Input(format!("no prime of norm <= {p_cap} qualifies for k = {k} over {field}; raise P")));
    }
    let logs = chars.iter().map(|c| (c.prime.norm as f64).ln()).collect();
    Ok(CharacterSystem { field: *field, k, p_cap, avoid: avoid.clone(), chars, logs })
}

pub fn char_on_ideal(sys: &CharacterSystem, i: usize, n: &Ideal) -> Result<Complex64> {
    Ok(match sys.exponent_ideal(i, n)? {
        None => Complex64::new(0.0, 0.0),
        Some(j) => root_of_unity(j, sys.k),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveWeightReport {
    pub norm: u64,
    pub char_sum: Complex64,
    pub weight: f64,
    /// `Σ log N𝔭` over system primes not dividing the ideal.
    pub usable_log_sum: f64,
    /// Whether every nonvanishing character read exponent 0.
    pub all_trivial: bool,
}

fn weight_from_exponents(
    sys: &CharacterSystem,
    norm: u64,
    exps: impl Iterator<Item = Option<u32>>,
) -> SieveWeightReport {
    let mut char_sum = Complex64::new(0.0, 0.0);
    let mut usable = 0.0;
    let mut all_trivial = true;
    for (e, &l) in exps.zip(&sys.logs) {
        if let Some(j) = e {
            char_sum += root_of_unity(j, sys.k) * l;
            usable += l;
            all_trivial &= j == 0;
        }
    }
    let big = (2.0 + sys.avoid.norm() as f64 * norm as f64).ln();
    SieveWeightReport { norm, char_sum, weight: char_sum.norm_sqr() + big * big, usable_log_sum: usable, all_trivial }
}

/// Weight of the integer ideal `nℤ` (ℚ only).
pub fn sieve_weight_int(sys: &CharacterSystem, n: u64) -> SieveWeightReport {
    weight_from_exponents(sys, n, (0..sys.len()).map(|i| sys.exponent_int(i, n)))
}

/// `|Σ χ_𝔭(𝔫) log N𝔭|² + log²(2 + N(𝔞𝔫))`.
pub fn sieve_weight(sys: &CharacterSystem, n: &Ideal) -> Result<SieveWeightReport> {
    let exps: Vec<Option<u32>> = (0..sys.len()).map(|i| sys.exponent_ideal(i, n)).collect::<Result<_>>()?;
    Ok(weight_from_exponents(sys, n.norm(), exps.into_iter()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveBound {
    pub p_cap: u64,
    pub system_size: usize,
    /// `Σ_m f(m^k)`.
    pub left_side: f64,
    /// `P^{−2} Σ_n f(n)·weight(n)`, without the absolute constants.
    pub raw_bound: f64,
    pub ratio: f64,
}

fn check_nonneg(f: &[f64]) -> Result<()> {
    if let Some((n, v)) = f.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::Input(format!("sieve input f({n}) = {v} is negative")));
    }
    Ok(())
}

fn kth_powers(k: u64, limit: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = 1usize;
    while let Some(v) = (m as u64).checked_pow(k as u32) {
        if v as usize > limit {
            break;
        }
        out.push(v as usize);
        m += 1;
    }
    out
}

/// Both sides of the sieve inequality for `f` on `1..f.len()` over ℚ
/// (entry 0 is ignored).
pub fn sieve_upper_bound(f: &[f64], sys: &CharacterSystem) -> Result<SieveBound> {
    if !sys.field.is_rational() {
        return Err(Error::Config("integer-indexed sieve input needs F = Q".into()));
    }
    check_nonneg(f)?;
    let top = f.len().saturating_sub(1);
    let total = block_sum(1, top + 1, DEFAULT_BLOCK, 0.0, |n| {
        if f[n] == 0.0 {
            0.0
        } else {
            f[n] * sieve_weight_int(sys, n as u64).weight
        }
    });
    let left: f64 = kth_powers(sys.k, top).iter().map(|&n| f[n]).sum();
    let raw = total / (sys.p_cap as f64).powi(2);
    Ok(SieveBound {
        p_cap: sys.p_cap,
        system_size: sys.len(),
        left_side: left,
        raw_bound: raw,
        ratio: if left > 0.0 { raw / left } else { f64::INFINITY },
    })
}

/// Both sides over explicit ideals, for any supported field.
pub fn sieve_upper_bound_ideals(f: &[(Ideal, f64)], sys: &CharacterSystem) -> Result<SieveBound> {
    let vals: Vec<f64> = f.iter().map(|(_, v)| *v).collect();
    check_nonneg(&vals)?;
    let weights: Vec<f64> = f
        .par_iter()
        .map(|(id, v)| Ok(if *v == 0.0 { 0.0 } else { v * sieve_weight(sys, id)?.weight }))
        .collect::<Result<_>>()?;
    let total = block_sum(0, weights.len(), DEFAULT_BLOCK, 0.0, |i| weights[i]);
    let left: f64 = f.iter().filter(|(id, _)| id.is_kth_power(sys.k as u32)).map(|(_, v)| v).sum();
    let raw = total / (sys.p_cap as f64).powi(2);
    Ok(SieveBound {
        p_cap: sys.p_cap,
        system_size: sys.len(),
        left_side: left,
        raw_bound: raw,
        ratio: if left > 0.0 { raw / left } else { f64::INFINITY },
    })
}

/// `(Σ_m f(m^k)·usable(m^k)², Σ_n f(n)·weight(n))`: the inequality inside
/// the sieve argument, before dividing by `P²`.
pub fn structural_sides(f: &[f64], sys: &CharacterSystem) -> Result<(f64, f64)> {
    check_nonneg(f)?;
    let top = f.len().saturating_sub(1);
    let rhs = block_sum(1, top + 1, DEFAULT_BLOCK, 0.0, |n| {
        if f[n] == 0.0 {
            0.0
        } else {
            f[n] * sieve_weight_int(sys, n as u64).weight
        }
    });
    let lhs: f64 =
        kth_powers(sys.k, top).iter().map(|&n| f[n] * sieve_weight_int(sys, n as u64).usable_log_sum.powi(2)).sum();
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpiReport {
    pub x: f64,
    pub k: u64,
    pub p_used: u64,
    pub system_size: usize,
    /// `Σ_m λ_{π×π̃}(m^k) V(m^k/X)`.
    pub direct: f64,
    pub sieve_bound: f64,
    pub ratio: f64,
}

/// Smoothed sum of `λ_{π×π̃}` over `k`-th powers and its sieve bound, with
/// `P = ⌈X^{1/(n²+1)}⌉` unless given.
pub fn s_pi_experiment(rep: &RepModel, k: u64, x: f64, p_cap: Option<u64>) -> Result<SpiReport> {
    if !rep.field.is_rational() {
        return Err(Error::Config("the smoothed power-sum experiment runs over Q".into()));
    }
    let n = rep.degree as f64;
    let p = p_cap.unwrap_or_else(|| x.powf(1.0 / (n * n + 1.0)).ceil() as u64);
    let top = (V_SUPPORT.1 * x).floor() as u64;
    let table = rs_table(rep, &rep.contragredient(), CoeffKind::Lambda, top.max(1))?;
    let f: Vec<f64> = (0..=top as usize)
        .map(|m| {
            if m == 0 {
                return 0.0;
            }
            let v = table.values[m].re;
            debug_assert!(v > -1e-9, "λ_(π×π̃)({m}) = {v}");
            v.max(0.0) * v_eval(m as f64 / x)
        })
        .collect();
    let sys = build_system(&rep.field, k, p, &Ideal::unit())?;
    let b = sieve_upper_bound(&f, &sys)?;
    Ok(SpiReport {
        x,
        k,
        p_used: p,
        system_size: sys.len(),
        direct: b.left_side,
        sieve_bound: b.raw_bound,
        ratio: b.ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_upto;
    use crate::lrep::RepModel;

    fn q() -> FieldDesc {
        FieldDesc::rationals()
    }

    #[test]
    fn legendre_and_order_three() {
        let c5 = build_character(&q(), &primes_above(&q(), 5)[0], 2).unwrap();
        assert_eq!(c5.exponent_int(4), Some(0));
        assert_eq!(c5.exponent_int(2), Some(1));
        assert_eq!(c5.value(c5.residue_field().from_int(2)), Complex64::new(-1.0, 0.0));
        let c13 = build_character(&q(), &primes_above(&q(), 13)[0], 2).unwrap();
        assert_eq!(c13.exponent_int(-1), Some(0));
        let c7 = build_character(&q(), &primes_above(&q(), 7)[0], 3).unwrap();
        let g = c7.residue_field().generator;
        assert_eq!(g.c0, 3);
        let v = c7.value(g);
        assert!((v.powu(3) - 1.0).norm() < 1e-14);
        assert!((v - 1.0).norm() > 0.5);
        assert!(build_character(&q(), &primes_above(&q(), 7)[0], 2).is_err());
    }

    #[test]
    fn system_examples() {
        let s = build_system(&q(), 2, 30, &Ideal::unit()).unwrap();
        let ps: Vec<u64> = s.primes().iter().map(|p| p.p).collect();
        assert_eq!(ps, vec![5, 13, 17, 29]);
        let s3 = build_system(&q(), 3, 20, &Ideal::unit()).unwrap();
        let ps: Vec<u64> = s3.primes().iter().map(|p| p.p).collect();
        assert_eq!(ps, vec![7, 13, 19]);
        assert!(build_system(&q(), 2, 4, &Ideal::unit()).is_err());
        let avoid = Ideal::from_integer(&q(), 13).unwrap();
        let s = build_system(&q(), 2, 30, &avoid).unwrap();
        assert_eq!(s.primes().iter().map(|p| p.p).collect::<Vec<_>>(), vec![5, 17, 29]);
    }

    #[test]
    fn gaussian_system_matches_residue_oracle() {
        let f = FieldDesc::quadratic(-1).unwrap();
        let s = build_system(&f, 2, 50, &Ideal::unit()).unwrap();
        let mut want = Vec::new();
        for pr in enumerate_prime_ideals(&f, 50).unwrap() {
            if pr.p == 2 {
                continue;
            }
            let rf = pr.residue_field();
            let i_res = pr.reduce(crate::numfield::Elt::new(0, 1));
            let squares: std::collections::HashSet<RElt> = (1..rf.q).map(|j| rf.pow(rf.from_index(j), 2)).collect();
            if squares.contains(&i_res) && squares.contains(&rf.from_int(-1)) {
                want.push(pr.key());
            }
        }
        let got: Vec<_> = s.primes().iter().map(|p| p.key()).collect();
        assert_eq!(got, want);
        // degree-one members are exactly the primes over p ≡ 1 mod 8
        for p in s.primes() {
            if p.norm == p.p {
                assert_eq!(p.p % 8, 1);
            }
        }
    }

    #[test]
    fn characters_are_trivial_on_units_and_well_defined() {
        for d in [-1i64, -3, 2, 5, 13] {
            let f = FieldDesc::quadratic(d).unwrap();
            for k in [2u64, 3] {
                let Ok(s) = build_system(&f, k, 400, &Ideal::unit()) else { continue };
                let units = unit_generators(&f).unwrap().all();
                for ch in &s.chars {
                    for &u in &units {
                        assert_eq!(ch.exponent(ch.prime.reduce(u)), Some(0));
                    }
                }
                // χ(nO) through generators equals χ(n) directly
                for n in 1..60u64 {
                    let id = Ideal::from_integer(&f, n).unwrap();
                    for (i, ch) in s.chars.iter().enumerate() {
                        let direct = ch.exponent(ch.prime.reduce(crate::numfield::Elt::int(n as i64)));
                        assert_eq!(s.exponent_ideal(i, &id).unwrap(), direct, "d={d} k={k} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn exact_order_small() {
        for k in [2u64, 3, 4, 5] {
            let s = build_system(&q(), k, 2000, &Ideal::unit()).unwrap();
            for ch in &s.chars {
                assert_eq!(ch.exact_order(), k);
            }
        }
    }

    #[test]
    fn ideal_characters() {
        let s = build_system(&q(), 2, 30, &Ideal::unit()).unwrap();
        for i in 0..s.len() {
            assert_eq!(s.exponent_int(i, 9), Some(0));
            let p = s.chars[i].prime.p;
            assert_eq!(s.exponent_int(i, p), None);
        }
        let i5 = 0;
        assert_eq!(char_on_ideal(&s, i5, &Ideal::from_integer(&q(), 2).unwrap()).unwrap(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn weight_examples() {
        let s = build_system(&q(), 2, 30, &Ideal::unit()).unwrap();
        let w = sieve_weight_int(&s, 4);
        let want = 5f64.ln() + 13f64.ln() + 17f64.ln() + 29f64.ln();
        assert!((w.char_sum.re - want).abs() < 1e-12);
        assert!((want - 32045f64.ln()).abs() < 1e-12);
        assert!(w.all_trivial);
        assert!(w.weight >= w.usable_log_sum.powi(2));
        let w5 = sieve_weight_int(&s, 5);
        assert!((w5.usable_log_sum - (want - 5f64.ln())).abs() < 1e-12);
        let wi = sieve_weight(&s, &Ideal::from_integer(&q(), 4).unwrap()).unwrap();
        assert_eq!(wi.char_sum, w.char_sum);
    }

    #[test]
    fn indicator_bound() {
        let s = build_system(&q(), 2, 100, &Ideal::unit()).unwrap();
        let f: Vec<f64> = (0..=10_000).map(|n| if n == 0 { 0.0 } else { 1.0 }).collect();
        let b = sieve_upper_bound(&f, &s).unwrap();
        assert_eq!(b.left_side, 100.0);
        assert!(b.ratio.is_finite() && b.ratio > 1.0);
        let mut g = f.clone();
        g[3] = -1.0;
        assert!(sieve_upper_bound(&g, &s).is_err());
    }

    #[test]
    fn structural_inequality_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in [2u64, 3] {
            let s = build_system(&q(), k, 100, &Ideal::unit()).unwrap();
            for _ in 0..10 {
                let f: Vec<f64> = (0..=3000).map(|_| rng.gen::<f64>()).collect();
                let (l, r) = structural_sides(&f, &s).unwrap();
                assert!(l <= r);
            }
        }
    }

    #[test]
    fn character_orthogonality_sanity() {
        let s = build_system(&q(), 2, 60, &Ideal::unit()).unwrap();
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i == j {
                    continue;
                }
                let (p, qq) = (s.chars[i].prime.p, s.chars[j].prime.p);
                let mut sum = Complex64::new(0.0, 0.0);
                for n in 1..=100_000u64 {
                    let (Some(a), Some(b)) = (s.exponent_int(i, n), s.exponent_int(j, n)) else { continue };
                    sum += root_of_unity(a, 2) * root_of_unity(b, 2).conj();
                }
                assert!(sum.norm() <= (p * qq) as f64);
            }
        }
    }

    #[test]
    fn spi_examples() {
        let t = RepModel::gl1_trivial(q());
        let r = s_pi_experiment(&t, 2, 1e4, None).unwrap();
        assert_eq!(r.p_used, 100);
        let plain: f64 = (1..=158u64).map(|m| v_eval((m * m) as f64 / 1e4)).sum();
        assert!((r.direct - plain).abs() < 1e-12);
        // integer count of m with X <= m² <= 2X, plus shoulders
        let inner = (100..=141).count() as f64;
        assert!(r.direct >= inner && r.direct <= inner + 60.0);

        let d = RepModel::gl2(12, 30_000).unwrap();
        let r = s_pi_experiment(&d, 2, 1e4, None).unwrap();
        assert_eq!(r.p_used, 7);
        let tab = rs_table(&d, &d, CoeffKind::Lambda, 25_000).unwrap();
        let plain: f64 = (1..=158usize).map(|m| tab.values[m * m].re * v_eval((m * m) as f64 / 1e4)).sum();
        assert!((r.direct - plain).abs() < 1e-9 * plain.abs().max(1.0));
        let big = s_pi_experiment(&t, 40, 1e4, Some(300)).unwrap();
        assert_eq!(big.direct, v_eval(1.0 / 1e4));
    }

    #[test]
    fn inert_primes_join_the_gaussian_system() {
        let f = FieldDesc::quadratic(-1).unwrap();
        let s = build_system(&f, 2, 50, &Ideal::unit()).unwrap();
        let inert: Vec<u64> = s.primes().iter().filter(|p| p.norm != p.p).map(|p| p.norm).collect();
        assert_eq!(inert, vec![9, 49]);
        let _ = primes_upto(2);
    }
}
