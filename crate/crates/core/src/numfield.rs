//! Rational and quadratic number fields of class number one.
//!
//! Elements of `ℚ(√d)` are stored as `a + bω` with `ω = √d`, or
//! `ω = (1+√d)/2` when `d ≡ 1 mod 4`, so that `ω² = tω + c` with
//! `(t, c) = (0, d)` or `(1, (d−1)/4)`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::arith::{factorize, gcd, kronecker_prime, mulmod, primes_upto, rem, sqrt_mod};
use crate::error::{Error, Result};

/// Supported quadratic radicands.
pub const SUPPORTED_D: [i64; 9] = [-1, -2, -3, -7, -11, 2, 3, 5, 13];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FieldKind {
    Rationals,
    Quadratic(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldDesc {
    pub kind: FieldKind,
    pub discriminant: i64,
    pub degree: u32,
    pub unit_rank: u32,
}

/// `a + bω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Elt {
    pub a: i64,
    pub b: i64,
}

impl Elt {
    pub const fn new(a: i64, b: i64) -> Self {
        Elt { a, b }
    }
    pub const fn int(a: i64) -> Self {
        Elt { a, b: 0 }
    }
}

impl FieldDesc {
    pub fn rationals() -> Self {
        FieldDesc { kind: FieldKind::Rationals, discriminant: 1, degree: 1, unit_rank: 0 }
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        if !SUPPORTED_D.contains(&d) {
            return Err(Error::Config(format!(
                "unsupported quadratic field Q(sqrt({d})); supported d: {SUPPORTED_D:?}"
            )));
        }
        let discriminant = if rem(d, 4) == 1 { d } else { 4 * d };
        Ok(FieldDesc { kind: FieldKind::Quadratic(d), discriminant, degree: 2, unit_rank: if d > 0 { 1 } else { 0 } })
    }

    /// Accepts `Q`, `Qi`, `Qsqrt<d>` (e.g. `Qsqrt2`, `Qsqrt-3`).
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Q" => Ok(Self::rationals()),
            "Qi" => Self::quadratic(-1),
            _ => {
                let d = s
                    .strip_prefix("Qsqrt")
                    .and_then(|r| r.parse::<i64>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown field '{s}'")))?;
                Self::quadratic(d)
            }
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            FieldKind::Rationals => "Q".into(),
            FieldKind::Quadratic(-1) => "Qi".into(),
            FieldKind::Quadratic(d) => format!("Qsqrt{d}"),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.kind == FieldKind::Rationals
    }

    /// `(t, c)` with `ω² = tω + c`; `(0, 0)` for ℚ.
    pub fn omega_relation(&self) -> (i64, i64) {
        match self.kind {
            FieldKind::Rationals => (0, 0),
            FieldKind::Quadratic(d) if rem(d, 4) == 1 => (1, (d - 1) / 4),
            FieldKind::Quadratic(d) => (0, d),
        }
    }

    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        let (t, c) = self.omega_relation();
        let bb = x.b * y.b;
        Elt { a: x.a * y.a + bb * c, b: x.a * y.b + x.b * y.a + bb * t }
    }

    pub fn conj(&self, x: Elt) -> Elt {
        let (t, _) = self.omega_relation();
        Elt { a: x.a + t * x.b, b: -x.b }
    }

    pub fn norm(&self, x: Elt) -> i64 {
        let (t, c) = self.omega_relation();
        x.a * x.a + t * x.a * x.b - c * x.b * x.b
    }

    pub fn pow(&self, x: Elt, e: u32) -> Elt {
        let mut r = Elt::int(1);
        for _ in 0..e {
            r = self.mul(r, x);
        }
        r
    }

    /// Real embedding value for real fields (ω taken positive), used to
    /// order units; `None` for imaginary fields.
    pub fn real_value(&self, x: Elt) -> Option<f64> {
        match self.kind {
            FieldKind::Rationals => Some(x.a as f64),
            FieldKind::Quadratic(d) if d > 0 => {
                let s = (d as f64).sqrt();
                let w = if rem(d, 4) == 1 { (1.0 + s) / 2.0 } else { s };
                Some(x.a as f64 + x.b as f64 * w)
            }
            _ => None,
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Splitting {
    Rational,
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SplitTag {
    Split(u8),
    Inert,
    Ramified,
    Rational,
}

impl SplitTag {
    pub fn index(&self) -> u8 {
        match self {
            SplitTag::Split(i) => *i,
            _ => 0,
        }
    }
    pub fn label(&self) -> &'static str {
        match self {
            SplitTag::Split(_) => "split",
            SplitTag::Inert => "inert",
            SplitTag::Ramified => "ramified",
            SplitTag::Rational => "rational",
        }
    }
}

/// Identifies a prime ideal: residue characteristic plus split index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimeKey {
    pub p: u64,
    pub index: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub norm: u64,
    pub tag: SplitTag,
    /// Image of ω in `O/𝔭` for degree-one primes.
    pub root: Option<u64>,
    /// `(t, c)` reduced mod p, the relation `x² = tx + c` of the residue
    /// field when `𝔭` is inert.
    ext: Option<(u64, u64)>,
}

impl PrimeIdeal {
    pub fn key(&self) -> PrimeKey {
        PrimeKey { p: self.p, index: self.tag.index() }
    }

    /// Residue field `O/𝔭` with its designated generator.
    pub fn residue_field(&self) -> ResidueField {
        ResidueField::new(self.p, self.norm, self.ext)
    }

    /// Reduction of a field element modulo `𝔭`.
    pub fn reduce(&self, x: Elt) -> RElt {
        match self.ext {
            Some(_) => RElt { c0: rem(x.a, self.p), c1: rem(x.b, self.p) },
            None => {
                let r = self.root.unwrap_or(0);
                let v = (rem(x.a, self.p) as u128 + mulmod(rem(x.b, self.p), r, self.p) as u128) % self.p as u128;
                RElt { c0: v as u64, c1: 0 }
            }
        }
    }
}

fn cmp_records(x: &PrimeIdeal, y: &PrimeIdeal) -> Ordering {
    (x.norm, x.p, x.tag.index()).cmp(&(y.norm, y.p, y.tag.index()))
}

/// Residue-field element `c0 + c1·x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RElt {
    pub c0: u64,
    pub c1: u64,
}

/// `F_p`, or `F_{p²} = F_p[x]/(x² − tx − c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u64,
    pub q: u64,
    ext: Option<(u64, u64)>,
    /// Distinct primes dividing `q − 1`.
    order_primes: Vec<u64>,
    pub generator: RElt,
}

impl ResidueField {
    fn new(p: u64, q: u64, ext: Option<(u64, u64)>) -> Self {
        let order_primes = factorize(q - 1).into_iter().map(|(l, _)| l).collect();
        let mut rf = ResidueField { p, q, ext, order_primes, generator: RElt { c0: 1, c1: 0 } };
        let mut i = 1;
        loop {
            let g = rf.from_index(i);
            if rf.is_generator(g) {
                rf.generator = g;
                break;
            }
            i += 1;
        }
        rf
    }

    /// Fixed ordering of the residue system: index `c1·p + c0`.
    pub fn index(&self, x: RElt) -> u64 {
        x.c1 * self.p + x.c0
    }

    pub fn from_index(&self, i: u64) -> RElt {
        RElt { c0: i % self.p, c1: i / self.p }
    }

    pub fn one(&self) -> RElt {
        RElt { c0: 1 % self.p, c1: 0 }
    }

    pub fn is_zero(&self, x: RElt) -> bool {
        x.c0 == 0 && x.c1 == 0
    }

    pub fn from_int(&self, n: i64) -> RElt {
        RElt { c0: rem(n, self.p), c1: 0 }
    }

    pub fn mul(&self, x: RElt, y: RElt) -> RElt {
        let p = self.p;
        match self.ext {
            None => RElt { c0: mulmod(x.c0, y.c0, p), c1: 0 },
            Some((t, c)) => {
                let hi = mulmod(x.c1, y.c1, p);
                let c0 = (mulmod(x.c0, y.c0, p) + mulmod(hi, c, p)) % p;
                let c1 = ((mulmod(x.c0, y.c1, p) + mulmod(x.c1, y.c0, p)) % p + mulmod(hi, t, p)) % p;
                RElt { c0, c1 }
            }
        }
    }

    pub fn pow(&self, mut x: RElt, mut e: u64) -> RElt {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        r
    }

    pub fn is_generator(&self, x: RElt) -> bool {
        if self.is_zero(x) {
            return false;
        }
        let one = self.one();
        self.order_primes.iter().all(|&l| self.pow(x, (self.q - 1) / l) != one)
    }

    /// Exact multiplicative order of a nonzero element.
    pub fn order(&self, x: RElt) -> u64 {
        let one = self.one();
        let mut ord = self.q - 1;
        for &l in &self.order_primes {
            while ord % l == 0 && self.pow(x, ord / l) == one {
                ord /= l;
            }
        }
        ord
    }
}

/// Splitting of a rational prime, from the Kronecker symbol of the
/// discriminant.
pub fn splitting_type(field: &FieldDesc, p: u64) -> Splitting {
    match field.kind {
        FieldKind::Rationals => Splitting::Rational,
        FieldKind::Quadratic(_) => match kronecker_prime(field.discriminant, p) {
            0 => Splitting::Ramified,
            1 => Splitting::Split,
            _ => Splitting::Inert,
        },
    }
}

/// Roots of `x² − tx − c` modulo p, ascending.
fn minpoly_roots(field: &FieldDesc, p: u64) -> Vec<u64> {
    let (t, c) = field.omega_relation();
    if p == 2 {
        return (0..2u64).filter(|&x| rem((x * x) as i64 - t * x as i64 - c, 2) == 0).collect();
    }
    let disc = rem(field.discriminant, p);
    let Some(s) = sqrt_mod(disc, p) else {
        return Vec::new();
    };
    let inv2 = p.div_ceil(2);
    let tt = rem(t, p);
    let mut r = vec![mulmod((tt + s) % p, inv2, p), mulmod((tt + p - s) % p, inv2, p)];
    r.sort_unstable();
    r.dedup();
    r
}

/// Prime ideals above the rational prime `p`, in split-index order.
pub fn primes_above(field: &FieldDesc, p: u64) -> Vec<PrimeIdeal> {
    match splitting_type(field, p) {
        Splitting::Rational => vec![PrimeIdeal { p, norm: p, tag: SplitTag::Rational, root: Some(0), ext: None }],
        Splitting::Inert => {
            let (t, c) = field.omega_relation();
            vec![PrimeIdeal { p, norm: p * p, tag: SplitTag::Inert, root: None, ext: Some((rem(t, p), rem(c, p))) }]
        }
        Splitting::Ramified => {
            let r = minpoly_roots(field, p);
            vec![PrimeIdeal { p, norm: p, tag: SplitTag::Ramified, root: Some(r[0]), ext: None }]
        }
        Splitting::Split => minpoly_roots(field, p)
            .into_iter()
            .enumerate()
            .map(|(i, r)| PrimeIdeal { p, norm: p, tag: SplitTag::Split(i as u8), root: Some(r), ext: None })
            .collect(),
    }
}

/// All prime ideals of norm `<= x`, ascending by norm, then residue
/// characteristic, then split index.
pub fn enumerate_prime_ideals(field: &FieldDesc, x: u64) -> Result<Vec<PrimeIdeal>> {
    if x < 2 {
        return Err(Error::Input(format!("prime enumeration needs X >= 2, got {x}")));
    }
    let mut out = Vec::new();
    for p in primes_upto(x) {
        for pr in primes_above(field, p) {
            if pr.norm <= x {
                out.push(pr);
            }
        }
    }
    out.sort_by(cmp_records);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitGenerators {
    pub torsion: Elt,
    pub torsion_order: u32,
    pub fundamental: Vec<Elt>,
}

impl UnitGenerators {
    pub fn all(&self) -> Vec<Elt> {
        std::iter::once(self.torsion).chain(self.fundamental.iter().copied()).collect()
    }
}

/// Unit-group generators from a fixed table, checked on every call.
pub fn unit_generators(field: &FieldDesc) -> Result<UnitGenerators> {
    let minus_one = Elt::int(-1);
    let omega = Elt::new(0, 1);
    let u = match field.kind {
        FieldKind::Rationals => UnitGenerators { torsion: minus_one, torsion_order: 2, fundamental: vec![] },
        FieldKind::Quadratic(d) => {
            let (torsion, torsion_order) = match d {
                -1 => (omega, 4),
                -3 => (omega, 6),
                _ => (minus_one, 2),
            };
            let fundamental = match d {
                2 => vec![Elt::new(1, 1)],
                3 => vec![Elt::new(2, 1)],
                5 => vec![Elt::new(0, 1)],
                13 => vec![Elt::new(1, 1)],
                _ => vec![],
            };
            UnitGenerators { torsion, torsion_order, fundamental }
        }
    };
    if u.fundamental.len() as u32 != field.unit_rank {
        return Err(Error::Config(format!("unit table rank mismatch for {field}")));
    }
    for e in u.all() {
        if field.norm(e).abs() != 1 {
            return Err(Error::Config(format!("unit table entry {e:?} of {field} is not a unit")));
        }
    }
    let t = u.torsion;
    if field.pow(t, u.torsion_order) != Elt::int(1) || (1..u.torsion_order).any(|j| field.pow(t, j) == Elt::int(1)) {
        return Err(Error::Config(format!("torsion generator of {field} has wrong order")));
    }
    Ok(u)
}

/// `x^((q−1)/gcd(k, q−1)) = 1`.
pub fn residue_power_test(rf: &ResidueField, x: RElt, k: u64) -> Result<bool> {
    if rf.is_zero(x) {
        return Err(Error::Input("residue power test on zero".into()));
    }
    let g = gcd(k, rf.q - 1);
    Ok(rf.pow(x, (rf.q - 1) / g) == rf.one())
}

/// Whether `𝔭` belongs to the sieve prime set for exponent `k`: `N𝔭 ≡ 1
/// mod k` and every unit generator reduces to a `k`-th power.
pub fn splits_completely_in_l(field: &FieldDesc, k: u64, pr: &PrimeIdeal) -> Result<bool> {
    if k < 2 {
        return Err(Error::Input(format!("k must be >= 2, got {k}")));
    }
    if k % pr.p == 0 || field.discriminant % pr.p as i64 == 0 {
        return Err(Error::Input(format!("prime over {} divides k·disc = {}·{}", pr.p, k, field.discriminant)));
    }
    if pr.norm % k != 1 {
        return Ok(false);
    }
    let rf = pr.residue_field();
    for u in unit_generators(field)?.all() {
        if !residue_power_test(&rf, pr.reduce(u), k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut s = (n as f64).sqrt() as i128;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    Some(s)
}

/// A generator of the principal ideal `𝔭`: `p` itself for rational and
/// inert primes, otherwise an element of norm `±p` lying in `𝔭`.
pub fn ideal_generator(field: &FieldDesc, pr: &PrimeIdeal) -> Result<Elt> {
    match pr.tag {
        SplitTag::Rational | SplitTag::Inert => return Ok(Elt::int(pr.p as i64)),
        _ => {}
    }
    let (t, c) = field.omega_relation();
    let (t, c, p) = (t as i128, c as i128, pr.p as i128);
    let real = field.unit_rank > 0;
    let cap: i128 = 4 * isqrt(p).unwrap_or(1) * 64 + 64;
    for b in 1..=cap {
        for target in [p, -p] {
            if target < 0 && !real {
                continue;
            }
            // a² + t·a·b − c·b² = target
            let disc = t * t * b * b + 4 * (c * b * b + target);
            let Some(s) = isqrt(disc) else { continue };
            if s * s != disc {
                continue;
            }
            for num in [-t * b + s, -t * b - s] {
                if num % 2 != 0 {
                    continue;
                }
                let x = Elt::new((num / 2) as i64, b as i64);
                for cand in [x, field.conj(x)] {
                    if pr.reduce(cand) == (RElt { c0: 0, c1: 0 }) {
                        return Ok(cand);
                    }
                }
            }
        }
    }
    Err(Error::Numerical(format!("no generator found for the prime over {} in {field}", pr.p)))
}

/// One prime-power factor of an ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealFactor {
    pub key: PrimeKey,
    pub prime_norm: u64,
    pub exp: u32,
}

/// Nonzero integral ideal as a sorted factorization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ideal {
    factors: Vec<IdealFactor>,
}

impl Ideal {
    pub fn unit() -> Self {
        Ideal::default()
    }

    pub fn from_factors(mut factors: Vec<IdealFactor>) -> Self {
        factors.retain(|f| f.exp > 0);
        factors.sort();
        let mut out: Vec<IdealFactor> = Vec::with_capacity(factors.len());
        for f in factors {
            match out.last_mut() {
                Some(l) if l.key == f.key => l.exp += f.exp,
                _ => out.push(f),
            }
        }
        Ideal { factors: out }
    }

    pub fn prime_power(pr: &PrimeIdeal, exp: u32) -> Self {
        Self::from_factors(vec![IdealFactor { key: pr.key(), prime_norm: pr.norm, exp }])
    }

    /// The ideal `nO_F` of a positive rational integer.
    pub fn from_integer(field: &FieldDesc, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("zero ideal".into()));
        }
        let mut f = Vec::new();
        for (p, e) in factorize(n) {
            for pr in primes_above(field, p) {
                let exp = if pr.tag == SplitTag::Ramified { 2 * e } else { e };
                f.push(IdealFactor { key: pr.key(), prime_norm: pr.norm, exp });
            }
        }
        Ok(Self::from_factors(f))
    }

    pub fn factors(&self) -> &[IdealFactor] {
        &self.factors
    }

    pub fn norm(&self) -> u64 {
        self.factors.iter().map(|f| f.prime_norm.pow(f.exp)).product()
    }

    pub fn mul(&self, other: &Ideal) -> Ideal {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        Self::from_factors(f)
    }

    pub fn pow(&self, k: u32) -> Ideal {
        Ideal { factors: self.factors.iter().map(|f| IdealFactor { exp: f.exp * k, ..*f }).collect() }
    }

    pub fn divisible_by(&self, key: PrimeKey) -> bool {
        self.factors.iter().any(|f| f.key == key)
    }

    pub fn is_kth_power(&self, k: u32) -> bool {
        self.factors.iter().all(|f| f.exp % k == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|f| f.exp == 1)
    }

    pub fn is_coprime(&self, other: &Ideal) -> bool {
        self.factors.iter().all(|f| !other.divisible_by(f.key))
    }
}

/// Every ideal of norm `<= x`, ascending by norm then factorization.
pub fn enumerate_ideals(field: &FieldDesc, x: u64) -> Result<Vec<Ideal>> {
    let primes = if x >= 2 { enumerate_prime_ideals(field, x)? } else { Vec::new() };
    let mut out = Vec::new();
    fn rec(
        primes: &[PrimeIdeal],
        start: usize,
        x: u64,
        norm: u64,
        acc: &mut Vec<IdealFactor>,
        out: &mut Vec<(u64, Ideal)>,
    ) {
        out.push((norm, Ideal::from_factors(acc.clone())));
        for i in start..primes.len() {
            let pn = primes[i].norm;
            if norm.saturating_mul(pn) > x {
                break;
            }
            let mut n = norm;
            let mut e = 0;
            while n.saturating_mul(pn) <= x {
                n *= pn;
                e += 1;
                acc.push(IdealFactor { key: primes[i].key(), prime_norm: pn, exp: e });
                rec(primes, i + 1, x, n, acc, out);
                acc.pop();
            }
        }
    }
    let mut tmp = Vec::new();
    rec(&primes, 0, x, 1, &mut Vec::new(), &mut tmp);
    tmp.sort();
    out.extend(tmp.into_iter().map(|(_, i)| i));
    Ok(out)
}
