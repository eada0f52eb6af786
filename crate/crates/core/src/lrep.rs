//! Representation models, Satake parameters and local/global coefficients.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{primes_upto, spf_table};
use crate::error::{Error, Result};
use crate::gl2;
use crate::numfield::{enumerate_ideals, enumerate_prime_ideals, primes_above, FieldDesc, Ideal, PrimeIdeal, PrimeKey};
use crate::symfunc::{complete_homogeneous_from_roots, power_sums};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Source {
    SyntheticUnitary { seed: u64 },
    SyntheticBounded { seed: u64, delta: f64 },
    Gl2Weight12,
    Gl2Weight16,
    Gl1Trivial,
}

/// Conductor descriptor; carried for reporting only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConductorMeta {
    pub norm: u64,
    pub archimedean: Vec<Complex64>,
}

/// `C(π) = N·∏(3 + |μ_j|)`.
pub fn analytic_conductor(meta: &ConductorMeta) -> f64 {
    meta.norm as f64 * meta.archimedean.iter().map(|m| 3.0 + m.norm()).product::<f64>()
}

/// `δ_n = 1/2 − 1/(n²+1)`, the known exponent in `|α| <= N𝔭^{δ_n}`.
pub fn delta_n(n: usize) -> f64 {
    0.5 - 1.0 / ((n * n) as f64 + 1.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct RepModel {
    pub degree: usize,
    pub field: FieldDesc,
    pub source: Source,
    pub conductor: ConductorMeta,
    /// Twist by `N𝔫^{−it}`.
    pub twist: f64,
    /// Whether this is the contragredient of the underlying model.
    pub dual: bool,
    #[serde(skip)]
    hecke: Option<Arc<Vec<f64>>>,
}

impl RepModel {
    fn base(degree: usize, field: FieldDesc, source: Source, arch: Vec<Complex64>) -> Self {
        RepModel {
            degree,
            field,
            source,
            conductor: ConductorMeta { norm: 1, archimedean: arch },
            twist: 0.0,
            dual: false,
            hecke: None,
        }
    }

    pub fn gl1_trivial(field: FieldDesc) -> Self {
        Self::base(1, field, Source::Gl1Trivial, vec![ZERO])
    }

    pub fn synthetic_unitary(field: FieldDesc, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("degree must be >= 1".into()));
        }
        Ok(Self::base(n, field, Source::SyntheticUnitary { seed }, vec![ZERO; n]))
    }

    /// Pairs `(N^{δu}e^{iθ}, N^{−δu}e^{iθ})`; requires `δ <= δ_n`.
    pub fn synthetic_bounded(field: FieldDesc, n: usize, seed: u64, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("degree must be >= 1".into()));
        }
        if !(0.0..=delta_n(n)).contains(&delta) {
            return Err(Error::Config(format!("delta {delta} outside [0, {}] for degree {n}", delta_n(n))));
        }
        Ok(Self::base(n, field, Source::SyntheticBounded { seed, delta }, vec![ZERO; n]))
    }

    /// Level-one eigenform of weight 12 or 16, with local data to `limit`.
    pub fn gl2(weight: u32, limit: usize) -> Result<Self> {
        let source = match weight {
            12 => Source::Gl2Weight12,
            16 => Source::Gl2Weight16,
            _ => return Err(Error::Config(format!("no weight-{weight} model"))),
        };
        let half = (weight as f64 - 1.0) / 2.0;
        let arch = vec![Complex64::new(half, 0.0), Complex64::new(half + 1.0, 0.0)];
        let mut r = Self::base(2, FieldDesc::rationals(), source, arch);
        r.hecke = Some(Arc::new(gl2::normalized_coefficients(weight, limit.max(2))?));
        Ok(r)
    }

    pub fn twisted(mut self, t: f64) -> Self {
        self.twist = t;
        self
    }

    pub fn contragredient(&self) -> Self {
        let mut r = self.clone();
        r.dual = !r.dual;
        r
    }

    pub fn label(&self) -> String {
        let base = match &self.source {
            Source::SyntheticUnitary { seed } => format!("unitary(n={},seed={seed})", self.degree),
            Source::SyntheticBounded { seed, delta } => {
                format!("bounded(n={},seed={seed},delta={delta})", self.degree)
            }
            Source::Gl2Weight12 => "gl2w12".into(),
            Source::Gl2Weight16 => "gl2w16".into(),
            Source::Gl1Trivial => "trivial".into(),
        };
        let mut s = format!("{base}@{}", self.field);
        if self.twist != 0.0 {
            s.push_str(&format!("*n^(-i{})", self.twist));
        }
        if self.dual {
            s.push('~');
        }
        s
    }

    /// Whether `other` is the contragredient of `self`.
    pub fn is_dual_of(&self, other: &RepModel) -> bool {
        let self_dual_base =
            matches!(self.source, Source::Gl2Weight12 | Source::Gl2Weight16 | Source::Gl1Trivial) && self.twist == 0.0;
        self.source == other.source
            && self.field == other.field
            && self.degree == other.degree
            && self.twist == other.twist
            && (self.dual != other.dual || self_dual_base)
    }

    /// Normalized Hecke eigenvalues `λ(n)`, `n <= limit`, for GL(2) models.
    pub fn hecke(&self) -> Option<&[f64]> {
        self.hecke.as_deref().map(|v| v.as_slice())
    }

    /// Parses `gl1`, `gl2w12`, `gl2w16`, `unitary:<n>[:<seed>]` or
    /// `bounded:<n>[:<seed>[:<delta>]]`, followed by any of the modifiers
    /// `/twist=<t>` and `/dual`. A missing seed falls back to `seed`, a
    /// missing `delta` to `δ_n`; eigenform data is generated to `limit`.
    pub fn parse(spec: &str, field: FieldDesc, seed: u64, limit: usize) -> Result<Self> {
        let mut parts = spec.trim().split('/');
        let base = parts.next().unwrap_or("");
        let bad = || Error::Input(format!("unrecognized representation spec {spec:?}"));
        let fields: Vec<&str> = base.split(':').collect();
        let num = |i: usize| -> Result<Option<f64>> {
            fields.get(i).map(|s| s.parse::<f64>().map_err(|_| bad())).transpose()
        };
        let mut rep = match fields[0] {
            "gl1" | "trivial" if fields.len() == 1 => RepModel::gl1_trivial(field),
            "gl2w12" | "gl2w16" if fields.len() == 1 => {
                if !field.is_rational() {
                    return Err(Error::Config("GL(2) eigenform models live over Q".into()));
                }
                RepModel::gl2(if fields[0] == "gl2w12" { 12 } else { 16 }, limit.max(2))?
            }
            "unitary" if (2..=3).contains(&fields.len()) => {
                let n = num(1)?.ok_or_else(bad)? as usize;
                RepModel::synthetic_unitary(field, n, num(2)?.map_or(seed, |v| v as u64))?
            }
            "bounded" if (2..=4).contains(&fields.len()) => {
                let n = num(1)?.ok_or_else(bad)? as usize;
                let delta = num(3)?.unwrap_or_else(|| delta_n(n));
                RepModel::synthetic_bounded(field, n, num(2)?.map_or(seed, |v| v as u64), delta)?
            }
            _ => return Err(bad()),
        };
        for m in parts {
            if m == "dual" {
                rep = rep.contragredient();
            } else if let Some(t) = m.strip_prefix("twist=") {
                rep = rep.twisted(t.parse().map_err(|_| bad())?);
            } else {
                return Err(bad());
            }
        }
        Ok(rep)
    }

    /// Largest prime for which local data is available.
    pub fn data_limit(&self) -> Option<u64> {
        self.hecke.as_ref().map(|h| (h.len() - 1) as u64)
    }
}

/// Satake parameters at one prime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalParams {
    pub prime: PrimeKey,
    pub norm: u64,
    pub alphas: Vec<Complex64>,
}

impl LocalParams {
    pub fn new(prime: PrimeKey, norm: u64, alphas: Vec<Complex64>) -> Self {
        LocalParams { prime, norm, alphas }
    }

    /// Parameters of the contragredient: complex conjugates.
    pub fn conj(&self) -> Self {
        LocalParams { alphas: self.alphas.iter().map(|a| a.conj()).collect(), ..self.clone() }
    }
}

fn synthetic_rng(seed: u64, pr: &PrimeIdeal) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&pr.norm.to_le_bytes());
    key[16..24].copy_from_slice(&pr.p.to_le_bytes());
    key[24] = pr.tag.index();
    ChaCha8Rng::from_seed(key)
}

pub fn satake_at(rep: &RepModel, pr: &PrimeIdeal) -> Result<LocalParams> {
    let n = rep.degree;
    let mut alphas = match &rep.source {
        Source::Gl1Trivial => vec![ONE],
        Source::SyntheticUnitary { seed } => {
            let mut rng = synthetic_rng(*seed, pr);
            (0..n).map(|_| Complex64::from_polar(1.0, TAU * rng.gen::<f64>())).collect()
        }
        Source::SyntheticBounded { seed, delta } => {
            let mut rng = synthetic_rng(*seed, pr);
            let ln = (pr.norm as f64).ln();
            let mut v = Vec::with_capacity(n);
            while v.len() + 1 < n {
                let u: f64 = rng.gen_range(-1.0..=1.0);
                let th = TAU * rng.gen::<f64>();
                let r = (delta * u * ln).exp();
                v.push(Complex64::from_polar(r, th));
                v.push(Complex64::from_polar(1.0 / r, th));
            }
            if v.len() < n {
                v.push(Complex64::from_polar(1.0, TAU * rng.gen::<f64>()));
            }
            v
        }
        Source::Gl2Weight12 | Source::Gl2Weight16 => {
            if !rep.field.is_rational() {
                return Err(Error::Config("GL(2) eigenform models live over Q".into()));
            }
            let h = rep.hecke().expect("gl2 model carries coefficients");
            let lam = *h
                .get(pr.p as usize)
                .ok_or_else(|| Error::Input(format!("no eigenform data at p = {} (limit {})", pr.p, h.len() - 1)))?;
            let c = (lam / 2.0).clamp(-1.0, 1.0);
            let a = Complex64::from_polar(1.0, c.acos());
            vec![a, a.conj()]
        }
    };
    if rep.twist != 0.0 {
        let tw = Complex64::from_polar(1.0, -rep.twist * (pr.norm as f64).ln());
        for a in alphas.iter_mut() {
            *a *= tw;
        }
    }
    let lp = LocalParams::new(pr.key(), pr.norm, alphas);
    Ok(if rep.dual { lp.conj() } else { lp })
}

/// `λ_π(𝔭^0..𝔭^K)` as complete homogeneous polynomials.
pub fn standard_lambda_local(lp: &LocalParams, k: usize) -> Vec<Complex64> {
    complete_homogeneous_from_roots(&lp.alphas, k)
}

/// `a_π(𝔭^0..𝔭^K)`; entry 0 is the degree.
pub fn standard_a_local(lp: &LocalParams, k: usize) -> Vec<Complex64> {
    rs_a_local(&lp.alphas, k)
}

/// All products `α_i β_j`, row-major.
pub fn rs_local_params(lp: &LocalParams, lp2: &LocalParams) -> Result<Vec<Complex64>> {
    if lp.prime != lp2.prime {
        return Err(Error::Input(format!("local parameters at different primes {:?} and {:?}", lp.prime, lp2.prime)));
    }
    Ok(lp.alphas.iter().flat_map(|&a| lp2.alphas.iter().map(move |&b| a * b)).collect())
}

/// `a(𝔭^0..𝔭^K)` with `a(𝔭^k) = Σ γ^k`; entry 0 holds the tuple length.
pub fn rs_a_local(params: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(Complex64::new(params.len() as f64, 0.0));
    out.extend(power_sums(params, k));
    out
}

/// `ν λ(𝔭^ν) = Σ_{l=1}^{ν} a(𝔭^l) λ(𝔭^{ν−l})`.
pub fn rs_lambda_local(params: &[Complex64], k: usize) -> Vec<Complex64> {
    let a = rs_a_local(params, k);
    let mut lam = vec![ONE];
    for nu in 1..=k {
        let mut s = ZERO;
        for l in 1..=nu {
            s += a[l] * lam[nu - l];
        }
        lam.push(s / nu as f64);
    }
    lam
}

/// `ν μ(𝔭^ν) = −Σ_{l=1}^{ν} a(𝔭^l) μ(𝔭^{ν−l})`. Entries past the tuple
/// length vanish in exact arithmetic and are left as computed.
pub fn rs_mu_local(params: &[Complex64], k: usize) -> Vec<Complex64> {
    let a = rs_a_local(params, k);
    let mut mu = vec![ONE];
    for nu in 1..=k {
        let mut s = ZERO;
        for l in 1..=nu {
            s += a[l] * mu[nu - l];
        }
        mu.push(-s / nu as f64);
    }
    mu
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoeffKind {
    Lambda,
    Mu,
    A,
}

impl CoeffKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(CoeffKind::Lambda),
            "mu" => Ok(CoeffKind::Mu),
            "a" => Ok(CoeffKind::A),
            _ => Err(Error::Config(format!("unknown coefficient kind '{s}'"))),
        }
    }
}

/// Coefficients over all ideals of norm `<= limit`.
///
/// Over ℚ `values[n]` is the coefficient at `n`. Over quadratic fields the
/// per-ideal values are in `ideals` and `values[m]` aggregates all ideals of
/// norm `m`.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub kind: CoeffKind,
    pub label: String,
    pub field: FieldDesc,
    pub limit: u64,
    pub values: Vec<Complex64>,
    pub ideals: Vec<(Ideal, Complex64)>,
}

impl CoeffTable {
    pub fn get(&self, n: u64) -> Complex64 {
        self.values[n as usize]
    }
}

/// Largest `e` with `q^e <= x`.
pub fn max_exponent(q: u64, x: u64) -> usize {
    let mut e = 0;
    let mut v = 1u64;
    while v.saturating_mul(q) <= x {
        v *= q;
        e += 1;
    }
    e
}

/// Builds a table from per-prime local lists `c(𝔭^0..𝔭^e)`.
///
/// Multiplicative kinds combine by products over the factorization; the
/// additive kind `A` lives on prime powers only.
pub fn extend_multiplicative<F>(
    field: &FieldDesc,
    x: u64,
    kind: CoeffKind,
    label: String,
    local: F,
) -> Result<CoeffTable>
where
    F: Fn(&PrimeIdeal, usize) -> Result<Vec<Complex64>> + Sync,
{
    let xs = x as usize;
    let mut values = vec![ZERO; xs + 1];
    let mut ideals = Vec::new();
    if x >= 1 && kind != CoeffKind::A && field.is_rational() {
        values[1] = ONE;
    }
    if x < 2 {
        if !field.is_rational() && x >= 1 {
            let v = if kind == CoeffKind::A { ZERO } else { ONE };
            values[1] = v;
            ideals.push((Ideal::unit(), v));
        }
        return Ok(CoeffTable { kind, label, field: *field, limit: x, values, ideals });
    }
    if field.is_rational() {
        let primes = primes_upto(x);
        let locals: Vec<Vec<Complex64>> = primes
            .par_iter()
            .map(|&p| {
                let pr = &primes_above(field, p)[0];
                let e = max_exponent(p, x);
                let v = local(pr, e)?;
                if v.len() <= e {
                    return Err(Error::Input(format!("local data at {p} too short")));
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        if kind == CoeffKind::A {
            for (p, loc) in primes.iter().zip(&locals) {
                let mut q = *p;
                for v in loc.iter().skip(1) {
                    values[q as usize] = *v;
                    match q.checked_mul(*p) {
                        Some(n) if n <= x => q = n,
                        _ => break,
                    }
                }
            }
        } else {
            let mut slot = vec![u32::MAX; xs + 1];
            for (i, &p) in primes.iter().enumerate() {
                slot[p as usize] = i as u32;
            }
            let spf = spf_table(xs);
            for n in 2..=xs {
                let p = spf[n] as usize;
                let mut m = n;
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                values[n] = values[m] * locals[slot[p] as usize][e];
            }
        }
        return Ok(CoeffTable { kind, label, field: *field, limit: x, values, ideals });
    }

    let primes = enumerate_prime_ideals(field, x)?;
    let locals: Vec<Vec<Complex64>> =
        primes.par_iter().map(|pr| local(pr, max_exponent(pr.norm, x))).collect::<Result<_>>()?;
    let index: std::collections::HashMap<PrimeKey, usize> =
        primes.iter().enumerate().map(|(i, pr)| (pr.key(), i)).collect();
    for ideal in enumerate_ideals(field, x)? {
        let v = if kind == CoeffKind::A {
            match ideal.factors() {
                [f] => locals[index[&f.key]][f.exp as usize],
                _ => ZERO,
            }
        } else {
            ideal.factors().iter().fold(ONE, |acc, f| acc * locals[index[&f.key]][f.exp as usize])
        };
        values[ideal.norm() as usize] += v;
        ideals.push((ideal, v));
    }
    Ok(CoeffTable { kind, label, field: *field, limit: x, values, ideals })
}

/// `λ_π` over all ideals of norm `<= x`.
pub fn lambda_table(rep: &RepModel, x: u64) -> Result<CoeffTable> {
    extend_multiplicative(&rep.field, x, CoeffKind::Lambda, rep.label(), |pr, e| {
        Ok(standard_lambda_local(&satake_at(rep, pr)?, e))
    })
}

/// `λ`, `μ` or `a` of `π×π'` over all ideals of norm `<= x`.
pub fn rs_table(rep: &RepModel, rep2: &RepModel, kind: CoeffKind, x: u64) -> Result<CoeffTable> {
    if rep.field != rep2.field {
        return Err(Error::Config("representations over different fields".into()));
    }
    let label = format!("{}x{}", rep.label(), rep2.label());
    extend_multiplicative(&rep.field, x, kind, label, |pr, e| {
        let params = rs_local_params(&satake_at(rep, pr)?, &satake_at(rep2, pr)?)?;
        Ok(match kind {
            CoeffKind::Lambda => rs_lambda_local(&params, e),
            CoeffKind::Mu => rs_mu_local(&params, e),
            CoeffKind::A => rs_a_local(&params, e),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub prime: PrimeKey,
    pub nu: usize,
    pub check: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

/// The four local inequalities at one prime, `1 <= ν <= K`, plus the
/// vanishing of `μ` past the degree when `K > nn'`.
pub fn check_local_inequalities(lp: &LocalParams, lp2: &LocalParams, k: usize, tol: f64) -> Result<Vec<Violation>> {
    let rs = rs_local_params(lp, lp2)?;
    let rs11 = rs_local_params(lp, &lp.conj())?;
    let rs22 = rs_local_params(lp2, &lp2.conj())?;
    let mu = rs_mu_local(&rs, k);
    let a = rs_a_local(&rs, k);
    let lam = rs_lambda_local(&rs, k);
    let (l11, l22) = (rs_lambda_local(&rs11, k), rs_lambda_local(&rs22, k));
    let (a11, a22) = (rs_a_local(&rs11, k), rs_a_local(&rs22, k));
    let lpi = standard_lambda_local(lp, k);
    let nn = rs.len();
    let mut out = Vec::new();
    let mut push = |nu, check, lhs: f64, rhs: f64| {
        if !(lhs <= rhs + tol) {
            out.push(Violation { prime: lp.prime, nu, check, lhs, rhs });
        }
    };
    for nu in 1..=k {
        let lam_rhs = (l11[nu].re * l22[nu].re).max(0.0).sqrt();
        push(nu, "mu", mu[nu].norm(), lam_rhs);
        push(nu, "a", a[nu].norm(), (a11[nu].re * a22[nu].re).max(0.0).sqrt());
        push(nu, "lambda", lam[nu].norm(), lam_rhs);
        push(nu, "coeffpair", lpi[nu].norm_sqr(), l11[nu].re);
        if nu > nn {
            push(nu, "mu-degree", mu[nu].norm(), 0.0);
        }
    }
    Ok(out)
}

/// Runs [`check_local_inequalities`] over a list of primes.
pub fn check_coefficient_inequalities(
    rep: &RepModel,
    rep2: &RepModel,
    primes: &[PrimeIdeal],
    k: usize,
    tol: f64,
) -> Result<Vec<Violation>> {
    let per: Vec<Vec<Violation>> = primes
        .par_iter()
        .map(|pr| check_local_inequalities(&satake_at(rep, pr)?, &satake_at(rep2, pr)?, k, tol))
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::rel_err;
    use proptest::prelude::{prop, prop_assert, prop_assert_eq, proptest, Strategy};

    fn q() -> FieldDesc {
        FieldDesc::rationals()
    }

    fn pr(p: u64) -> PrimeIdeal {
        primes_above(&q(), p)[0].clone()
    }

    fn lp(alphas: Vec<Complex64>) -> LocalParams {
        LocalParams::new(PrimeKey { p: 2, index: 0 }, 2, alphas)
    }

    #[test]
    fn parse_specs() {
        let q = q();
        assert_eq!(RepModel::parse("gl1", q, 0, 10).unwrap().degree, 1);
        let u = RepModel::parse("unitary:3:7", q, 0, 10).unwrap();
        assert_eq!(u.label(), RepModel::synthetic_unitary(q, 3, 7).unwrap().label());
        assert_eq!(RepModel::parse("unitary:3", q, 7, 10).unwrap().label(), u.label());
        let b = RepModel::parse("bounded:2:1/dual", q, 0, 10).unwrap();
        assert!(b.dual);
        let t = RepModel::parse("gl2w12/twist=1", q, 0, 100).unwrap();
        assert_eq!(t.twist, 1.0);
        assert_eq!(t.data_limit(), Some(100));
        for bad in ["", "gl3", "unitary", "unitary:x", "gl1/foo", "bounded:2:1:0.9"] {
            assert!(RepModel::parse(bad, q, 0, 10).is_err(), "{bad}");
        }
        assert!(RepModel::parse("gl2w16", FieldDesc::quadratic(-1).unwrap(), 0, 10).is_err());
    }

    #[test]
    fn satake_examples() {
        let d = RepModel::gl2(12, 100).unwrap();
        let l = satake_at(&d, &pr(2)).unwrap();
        let lam = standard_lambda_local(&l, 2);
        assert!((lam[1].re + 0.530330).abs() < 1e-6);
        let l3 = standard_lambda_local(&satake_at(&d, &pr(3)).unwrap(), 1);
        assert!((l3[1].re - 252.0 / 3f64.powf(5.5)).abs() < 1e-12);
        assert!((l3[1].re - 0.5987336).abs() < 1e-7);
        for a in &l.alphas {
            assert!((a.norm() - 1.0).abs() < 1e-14);
        }
        let t = RepModel::gl1_trivial(q());
        assert_eq!(satake_at(&t, &pr(97)).unwrap().alphas, vec![ONE]);
        let u = RepModel::synthetic_unitary(q(), 3, 7).unwrap();
        let a1 = satake_at(&u, &pr(5)).unwrap();
        let a2 = satake_at(&u, &pr(5)).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(a1.alphas.len(), 3);
        assert!(a1.alphas.iter().all(|a| (a.norm() - 1.0).abs() < 1e-14));
        assert!(satake_at(&d, &pr(101)).is_err());
    }

    #[test]
    fn gl2_over_quadratic_field_is_refused() {
        let mut d = RepModel::gl2(12, 100).unwrap();
        d.field = FieldDesc::quadratic(-1).unwrap();
        let p = &primes_above(&d.field, 5)[0];
        assert!(matches!(satake_at(&d, p), Err(Error::Config(_))));
    }

    #[test]
    fn bounded_model_respects_delta() {
        assert!(RepModel::synthetic_bounded(q(), 2, 1, 0.31).is_err());
        let b = RepModel::synthetic_bounded(q(), 3, 1, delta_n(3)).unwrap();
        for p in primes_upto(500) {
            let l = satake_at(&b, &pr(p)).unwrap();
            for a in &l.alphas {
                assert!(a.norm().ln() <= delta_n(3) * (p as f64).ln() + 1e-12);
            }
        }
    }

    #[test]
    fn local_examples() {
        let i = Complex64::new(0.0, 1.0);
        let l = lp(vec![i, -i]);
        let lam = standard_lambda_local(&l, 2);
        assert!((lam[2] + 1.0).norm() < 1e-15);
        let one = lp(vec![ONE]);
        assert!(standard_lambda_local(&one, 5).iter().all(|&v| v == ONE));
        let b = lp(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.9)]);
        assert_eq!(rs_local_params(&one, &b).unwrap(), b.alphas);
        let a = Complex64::from_polar(1.0, 0.4);
        let p = rs_local_params(&lp(vec![a, a.conj()]), &lp(vec![a.conj(), a])).unwrap();
        let want = [ONE, a * a, a.conj() * a.conj(), ONE];
        for (x, y) in p.iter().zip(want) {
            assert!((x - y).norm() < 1e-15);
        }
        let other = LocalParams::new(PrimeKey { p: 3, index: 0 }, 3, vec![ONE]);
        assert!(rs_local_params(&one, &other).is_err());
        assert!(rs_a_local(&[ONE], 4)[1..].iter().all(|&v| v == ONE));
        assert!(rs_lambda_local(&[ONE], 4).iter().all(|&v| v == ONE));
        let mu = rs_mu_local(&[ONE], 4);
        assert_eq!(mu, vec![ONE, -ONE, ZERO, ZERO, ZERO]);
    }

    #[test]
    fn unitary_self_pair_a_is_square_modulus() {
        let a = Complex64::from_polar(1.0, 1.1);
        let b = Complex64::from_polar(1.0, -0.3);
        let l = lp(vec![a, b]);
        let rs = rs_local_params(&l, &l.conj()).unwrap();
        let av = rs_a_local(&rs, 6);
        for k in 1..=6 {
            let s = a.powu(k as u32) + b.powu(k as u32);
            assert!((av[k].re - s.norm_sqr()).abs() < 1e-12);
            assert!(av[k].im.abs() < 1e-12);
        }
        // θ = π/2 GL(2): λ_{π×π̃}(𝔭) = 0
        let t = lp(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]);
        let rs = rs_local_params(&t, &t.conj()).unwrap();
        assert!(rs_lambda_local(&rs, 1)[1].norm() < 1e-15);
    }

    #[test]
    fn mu_gl2_times_trivial() {
        let a = Complex64::from_polar(1.0, 0.8);
        let l = lp(vec![a, a.conj()]);
        let rs = rs_local_params(&l, &lp(vec![ONE])).unwrap();
        let mu = rs_mu_local(&rs, 5);
        let lam = standard_lambda_local(&l, 1);
        assert!((mu[1] + lam[1]).norm() < 1e-14);
        assert!((mu[2] - a * a.conj()).norm() < 1e-14);
        assert!(mu[3].norm() < 1e-10);
    }

    fn tuple(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((0.2f64..1.8, 0.0f64..TAU), n)
            .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
    }

    proptest! {
        #[test]
        fn rs_params_match_double_loop(x in tuple(3), y in tuple(2)) {
            let p = rs_local_params(&lp(x.clone()), &lp(y.clone())).unwrap();
            let mut want = Vec::new();
            for a in &x { for b in &y { want.push(a * b); } }
            prop_assert_eq!(p, want);
        }

        #[test]
        fn a_matches_direct_sum(x in tuple(4)) {
            let a = rs_a_local(&x, 6);
            for k in 1..=6 {
                let s: Complex64 = x.iter().map(|v| v.powu(k as u32)).sum();
                prop_assert!(rel_err(a[k], s) < 1e-12);
            }
        }

        #[test]
        fn lambda_matches_generating_function(x in tuple(6)) {
            let lam = rs_lambda_local(&x, 10);
            let h = complete_homogeneous_from_roots(&x, 10);
            for k in 0..=10 {
                prop_assert!(rel_err(lam[k], h[k]) < 1e-9);
            }
        }

        #[test]
        fn lambda_times_mu_is_one(x in tuple(4)) {
            let k = 10;
            let lam = rs_lambda_local(&x, k);
            let mu = rs_mu_local(&x, k);
            for m in 0..=k {
                let s: Complex64 = (0..=m).map(|j| lam[j] * mu[m - j]).sum();
                let want = if m == 0 { ONE } else { ZERO };
                let scale: f64 = lam.iter().chain(mu.iter()).map(|v| v.norm()).fold(1.0, f64::max);
                prop_assert!((s - want).norm() < 1e-10 * scale);
            }
            for nu in x.len() + 1..=k {
                prop_assert!(mu[nu].norm() < 1e-10 * lam.iter().map(|v| v.norm()).fold(1.0, f64::max));
            }
        }

        #[test]
        fn inequalities_hold_for_unitary(x in prop::collection::vec(0.0f64..TAU, 1..=4),
                                         y in prop::collection::vec(0.0f64..TAU, 1..=4)) {
            let a = lp(x.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect());
            let b = lp(y.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect());
            let k = a.alphas.len() * b.alphas.len() + 2;
            prop_assert!(check_local_inequalities(&a, &b, k, 1e-9).unwrap().is_empty());
        }
    }

    #[test]
    fn tables_are_multiplicative() {
        let d = RepModel::gl2(12, 2000).unwrap();
        let t = lambda_table(&d, 2000).unwrap();
        assert_eq!(t.get(1), ONE);
        assert!((t.get(6).re - (-24.0 / 2f64.powf(5.5)) * (252.0 / 3f64.powf(5.5))).abs() < 1e-12);
        assert!((t.get(6).re + 0.3175264).abs() < 1e-7);
        let h = d.hecke().unwrap();
        for n in 1..=2000 {
            assert!((t.get(n as u64).re - h[n]).abs() < 1e-9, "n={n}");
        }
        let u = RepModel::synthetic_unitary(q(), 3, 11).unwrap();
        let v = RepModel::synthetic_unitary(q(), 2, 5).unwrap();
        for kind in [CoeffKind::Lambda, CoeffKind::Mu] {
            let t = rs_table(&u, &v, kind, 1000).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for _ in 0..1000 {
                let m = rng.gen_range(1..=31u64);
                let n = rng.gen_range(1..=31u64);
                if crate::arith::gcd(m, n) == 1 {
                    assert!((t.get(m * n) - t.get(m) * t.get(n)).norm() < 1e-10);
                }
            }
        }
        let a = rs_table(&u, &v, CoeffKind::A, 1000).unwrap();
        assert_eq!(a.get(6), ZERO);
        assert_eq!(a.get(1), ZERO);
        assert!(a.get(8).norm() > 0.0);
    }

    #[test]
    fn quadratic_field_tables() {
        let f = FieldDesc::quadratic(-1).unwrap();
        let t = lambda_table(&RepModel::gl1_trivial(f), 200).unwrap();
        // trivial coefficients count ideals: r_2(n)/4
        for n in 1..=200u64 {
            let r2 = (-15i64..=15)
                .flat_map(|a| (-15i64..=15).map(move |b| (a, b)))
                .filter(|&(a, b)| (a * a + b * b) as u64 == n)
                .count();
            assert!((t.get(n).re - r2 as f64 / 4.0).abs() < 1e-12, "n={n}");
        }
        let u = RepModel::synthetic_unitary(f, 2, 3).unwrap();
        let t = rs_table(&u, &u.contragredient(), CoeffKind::Lambda, 500).unwrap();
        for (_, v) in &t.ideals {
            assert!(v.im.abs() < 1e-10 && v.re > -1e-9);
        }
    }

    #[test]
    fn gl2_inequalities_and_conductor() {
        let d = RepModel::gl2(12, 1000).unwrap();
        let ps = enumerate_prime_ideals(&q(), 1000).unwrap();
        assert!(check_coefficient_inequalities(&d, &d, &ps, 4, 1e-9).unwrap().is_empty());
        let t = RepModel::gl1_trivial(q());
        assert!(check_coefficient_inequalities(&t, &t, &ps, 3, 0.0).unwrap().is_empty());
        assert!((analytic_conductor(&d.conductor) - (3.0 + 5.5) * (3.0 + 6.5)).abs() < 1e-12);
        assert!(d.is_dual_of(&d));
        let u = RepModel::synthetic_unitary(q(), 2, 1).unwrap();
        assert!(!u.is_dual_of(&u));
        assert!(u.is_dual_of(&u.contragredient()));
    }
}
