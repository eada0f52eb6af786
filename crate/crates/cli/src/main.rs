//! `rankin` command-line front end.
//!
//! Every subcommand writes CSV (or JSON for `correlation`) headed by its
//! resolved configuration. Exit status: 0 on success, 2 for input,
//! parse and usage errors, 3 for contract violations, 1 otherwise.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rankin::acceptance;
use rankin::analytic::{
    first_disagreement, hoheisel_window, pnt_partial, selberg_checkpoints, smoothed_pair_sum, SumReport,
};
use rankin::correlations::{ingest_zeros, run_correlation, ZeroList};
use rankin::eulerprod::{
    g_partial, h_partial, hyp_h_dyadic, iterative_diagnostic_d, rs_square_a_product, rs_square_product, ProductLedger,
    ProductOptions, DEFAULT_EPS,
};
use rankin::lrep::{lambda_table, rs_table, CoeffKind, RepModel};
use rankin::numfield::{enumerate_ideals, enumerate_prime_ideals, splits_completely_in_l, FieldDesc, Ideal};
use rankin::par::DEFAULT_BLOCK;
use rankin::sieve::{build_system, s_pi_experiment, sieve_weight, sieve_weight_int};
use rankin::zeta::zeta_zeros;
use rankin::{Error, Result};

use output::{emit, fmt_num, Config, Table};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(
    name = "rankin",
    version,
    about = "Rankin-Selberg coefficients, power sieve, Euler products and zero correlations"
)]
struct Cli {
    /// Worker threads for the parallel kernels (results do not depend on it).
    #[arg(long, global = true, env = "RANKIN_WORKERS")]
    workers: Option<usize>,
    /// Seed for synthetic representations.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Number-field utilities.
    Numfield {
        #[command(subcommand)]
        action: NumfieldCmd,
    },
    /// Dirichlet coefficients of a representation or a Rankin-Selberg pair.
    Coeffs(CoeffsArgs),
    /// Power-sieve weights and the k-th power experiment.
    Sieve {
        #[command(subcommand)]
        action: SieveCmd,
    },
    /// Truncated Euler products and the Hypothesis H sums.
    Products(ProductsArgs),
    /// Strong multiplicity one: first disagreement and the smoothed pair sum.
    Smo(SmoArgs),
    /// Selberg orthogonality partial sums over primes.
    Orthogonality(OrthArgs),
    /// Prime number theorem sum for the Rankin-Selberg square.
    Pnt(PntArgs),
    /// Smoothed m-level correlation of zeta zeros against its limit.
    Correlation(CorrArgs),
    /// Run an acceptance suite; one line per criterion.
    Accept(AcceptArgs),
}

#[derive(Subcommand, Debug)]
enum NumfieldCmd {
    /// Prime ideals of norm at most the limit.
    Primes {
        /// Q, Qi or Qsqrt<d>.
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        /// Keep only primes splitting completely in F(zeta_k, units^(1/k)).
        #[arg(long)]
        splits_completely: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    /// Representation, e.g. gl2w12, unitary:3:7, bounded:2/twist=0.5/dual.
    #[arg(long)]
    rep: String,
    /// Second representation; the pair's Rankin-Selberg coefficients are emitted.
    #[arg(long)]
    rep2: Option<String>,
    #[arg(long, value_enum, default_value_t = Kind::Lambda)]
    kind: Kind,
    #[arg(long, value_parser = parse_count)]
    limit: u64,
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Lambda,
    Mu,
    A,
}

#[derive(Subcommand, Debug)]
enum SieveCmd {
    /// Character sums and weights for every n (or ideal) up to the limit.
    Weights {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        k: u64,
        /// Bound on the norms of the sieving primes.
        #[arg(long = "P")]
        p_cap: u64,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        /// Integer whose prime divisors are excluded from the system.
        #[arg(long, default_value_t = 1)]
        avoid: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smoothed sum over k-th powers against its sieve bound.
    Spx {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        k: u64,
        #[arg(long = "X", value_parser = parse_count)]
        x: u64,
        /// Sieve prime bound; defaults to ceil(X^(1/(n^2+1))).
        #[arg(long = "P")]
        p_cap: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Euler product of L(s, pi x dual pi) with lambda coefficients.
    Thm12,
    /// The same product with a coefficients and inequality ledger.
    Thm12a,
    /// Dyadic blocks of the Hypothesis H sum.
    Hyph,
    /// Correction factor H(s) of the coefficient convolution.
    #[value(name = "H")]
    H,
    /// Square-free correction factor G(s).
    #[value(name = "G")]
    G,
    /// Square-free sum of lambda(n^k) n^(-k sigma) at dyadic checkpoints.
    #[value(name = "D")]
    D,
}

#[derive(Args, Debug)]
struct ProductsArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    rep: String,
    /// Partner for H and G; defaults to the contragredient of --rep.
    #[arg(long)]
    rep2: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, value_parser = parse_count)]
    limit: u64,
    /// Largest exponent kept in each local factor (thm12, thm12a); default n^2+1.
    #[arg(long)]
    kmax: Option<usize>,
    /// Power k (hyph, D) or truncation order K (H, G).
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Use delta = 0 in the tail bound.
    #[arg(long)]
    strict_grc: bool,
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SmoArgs {
    #[arg(long)]
    rep1: String,
    #[arg(long)]
    rep2: String,
    #[arg(long, value_parser = parse_count)]
    limit: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OrthArgs {
    #[arg(long)]
    rep1: String,
    #[arg(long)]
    rep2: String,
    #[arg(long, value_parser = parse_count)]
    limit: u64,
    /// Report every power of two below the limit as well.
    #[arg(long)]
    dyadic: bool,
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PntArgs {
    #[arg(long)]
    rep: String,
    #[arg(long, value_parser = parse_count)]
    x: u64,
    /// Sum over the window (x, x+h] instead of [1, x].
    #[arg(long)]
    window: Option<f64>,
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["zeros", "generate"])))]
struct CorrArgs {
    /// Zero ordinates, one per line, ascending; '#' starts a comment.
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Compute the first N zeros instead of reading a file.
    #[arg(long, value_parser = parse_count)]
    generate: Option<u64>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// `auto` or a positive height.
    #[arg(long = "T", default_value = "auto")]
    t: String,
    /// Bump scale; with a numeric T defaults to coverage_radius * T / max zero.
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AcceptArgs {
    #[arg(long, default_value = "primary")]
    suite: String,
}

/// Accepts plain integers and exact float notation such as `1e6`.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 => Ok(v as u64),
        _ => Err(format!("expected a non-negative integer, got '{s}'")),
    }
}

fn base_config(cli: &Cli, cmd: &str) -> Config {
    let mut c = Config::new();
    c.insert("command".into(), cmd.into());
    c.insert("seed".into(), cli.seed.to_string());
    c.insert("block_size".into(), DEFAULT_BLOCK.to_string());
    c.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    c
}

fn set(c: &mut Config, k: &str, v: impl ToString) {
    c.insert(k.into(), v.to_string());
}

fn load_rep(spec: &str, field: FieldDesc, seed: u64, limit: u64) -> Result<RepModel> {
    let limit = usize::try_from(limit).map_err(|_| Error::Input(format!("limit {limit} too large")))?;
    RepModel::parse(spec, field, seed, limit)
}

fn sum_row(r: &SumReport) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
    vec![fmt_num(r.x), fmt_num(r.value.re), opt(r.comparison), opt(r.residual.map(|z| z.re)), fmt_num(r.value.im)]
}

const SUM_COLUMNS: [&str; 5] = ["X", "value", "comparison", "residual", "value_im"];

fn ideal_label(id: &Ideal) -> String {
    if id.factors().is_empty() {
        return "1".into();
    }
    id.factors()
        .iter()
        .map(|f| {
            let p = format!("{}.{}", f.key.p, f.key.index);
            if f.exp == 1 {
                p
            } else {
                format!("{p}^{}", f.exp)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn numfield_primes(cli: &Cli, field: &str, limit: u64, k: Option<u64>) -> Result<Table> {
    let f = FieldDesc::parse(field)?;
    let mut cfg = base_config(cli, "numfield primes");
    set(&mut cfg, "field", f.name());
    set(&mut cfg, "limit", limit);
    if let Some(k) = k {
        set(&mut cfg, "splits_completely", k);
    }
    let mut t = Table::new(cfg, &["norm", "residue_char", "split_tag"]);
    for pr in enumerate_prime_ideals(&f, limit)? {
        if let Some(k) = k {
            let excluded = k % pr.p == 0 || f.discriminant % pr.p as i64 == 0;
            if excluded || !splits_completely_in_l(&f, k, &pr)? {
                continue;
            }
        }
        t.push(vec![pr.norm.to_string(), pr.p.to_string(), pr.tag.label().into()]);
    }
    Ok(t)
}

fn coeffs(cli: &Cli, a: &CoeffsArgs) -> Result<Table> {
    let field = FieldDesc::parse(&a.field)?;
    let rep = load_rep(&a.rep, field, cli.seed, a.limit)?;
    let kind = match a.kind {
        Kind::Lambda => CoeffKind::Lambda,
        Kind::Mu => CoeffKind::Mu,
        Kind::A => CoeffKind::A,
    };
    let table = match (&a.rep2, kind) {
        (None, CoeffKind::Lambda) => lambda_table(&rep, a.limit)?,
        (None, _) => rs_table(&rep, &RepModel::gl1_trivial(field), kind, a.limit)?,
        (Some(s), _) => rs_table(&rep, &load_rep(s, field, cli.seed, a.limit)?, kind, a.limit)?,
    };
    let mut cfg = base_config(cli, "coeffs");
    set(&mut cfg, "field", field.name());
    set(&mut cfg, "rep", rep.label());
    if let Some(s) = &a.rep2 {
        set(&mut cfg, "rep2", load_rep(s, field, cli.seed, 2)?.label());
    }
    set(&mut cfg, "kind", format!("{kind:?}").to_lowercase());
    set(&mut cfg, "limit", a.limit);
    let mut t = Table::new(cfg, &["norm", "real", "imag"]);
    for n in 1..=a.limit {
        let v = table.get(n);
        t.push(vec![n.to_string(), fmt_num(v.re), fmt_num(v.im)]);
    }
    Ok(t)
}

fn sieve_weights(cli: &Cli, field: &str, k: u64, p_cap: u64, limit: u64, avoid: u64) -> Result<Table> {
    let f = FieldDesc::parse(field)?;
    if avoid == 0 {
        return Err(Error::Input("--avoid must be a positive integer".into()));
    }
    let sys = build_system(&f, k, p_cap, &Ideal::from_integer(&f, avoid)?)?;
    let mut cfg = base_config(cli, "sieve weights");
    set(&mut cfg, "field", f.name());
    set(&mut cfg, "k", k);
    set(&mut cfg, "P", p_cap);
    set(&mut cfg, "limit", limit);
    set(&mut cfg, "avoid", avoid);
    set(&mut cfg, "system_size", sys.len());
    let cols: &[&str] = if f.is_rational() {
        &["n", "char_sum_re", "char_sum_im", "weight"]
    } else {
        &["n", "char_sum_re", "char_sum_im", "weight", "ideal"]
    };
    let mut t = Table::new(cfg, cols);
    let row = |n: u64, z: rankin::sieve::SieveWeightReport| {
        vec![n.to_string(), fmt_num(z.char_sum.re), fmt_num(z.char_sum.im), fmt_num(z.weight)]
    };
    if f.is_rational() {
        for n in 1..=limit {
            t.push(row(n, sieve_weight_int(&sys, n)));
        }
    } else {
        for id in enumerate_ideals(&f, limit)? {
            let mut r = row(id.norm(), sieve_weight(&sys, &id)?);
            r.push(ideal_label(&id));
            t.push(r);
        }
    }
    Ok(t)
}

fn sieve_spx(cli: &Cli, rep: &str, k: u64, x: u64, p_cap: Option<u64>) -> Result<Table> {
    let rep = load_rep(rep, FieldDesc::rationals(), cli.seed, x * 5 / 2 + 2)?;
    let r = s_pi_experiment(&rep, k, x as f64, p_cap)?;
    let mut cfg = base_config(cli, "sieve spx");
    set(&mut cfg, "rep", rep.label());
    set(&mut cfg, "k", k);
    set(&mut cfg, "X", x);
    set(&mut cfg, "P", r.p_used);
    let mut t = Table::new(cfg, &["X", "k", "P", "system_size", "direct", "sieve_bound", "ratio"]);
    t.push(vec![
        x.to_string(),
        k.to_string(),
        r.p_used.to_string(),
        r.system_size.to_string(),
        fmt_num(r.direct),
        fmt_num(r.sieve_bound),
        fmt_num(r.ratio),
    ]);
    Ok(t)
}

fn ledger_table(cfg: Config, led: &ProductLedger) -> Table {
    let mut cfg = cfg;
    set(&mut cfg, "kmin", led.kmin);
    set(&mut cfg, "kmax", led.kmax);
    set(&mut cfg, "product_re", fmt_num(led.running_product.re));
    set(&mut cfg, "product_im", fmt_num(led.running_product.im));
    set(&mut cfg, "tail_estimate", fmt_num(led.tail_estimate));
    set(&mut cfg, "strict_grc", led.strict_grc);
    set(&mut cfg, "violations", led.violations.len());
    let mut t = Table::new(cfg, &["norm", "factor_re", "factor_im", "running_re", "running_im"]);
    let mut run = Complex64::new(1.0, 0.0);
    for (n, f) in &led.per_prime_factors {
        run *= f;
        t.push(vec![n.to_string(), fmt_num(f.re), fmt_num(f.im), fmt_num(run.re), fmt_num(run.im)]);
    }
    t
}

/// Powers of two below `limit`, then `limit` itself.
fn checkpoints(limit: u64) -> Vec<u64> {
    let mut xs: Vec<u64> = (1..64).map(|j| 1u64 << j).take_while(|&x| x < limit).collect();
    xs.push(limit);
    xs
}

fn products(cli: &Cli, a: &ProductsArgs) -> Result<Table> {
    let field = FieldDesc::parse(&a.field)?;
    let rep = load_rep(&a.rep, field, cli.seed, a.limit)?;
    let n = rep.degree;
    let mut cfg = base_config(cli, "products");
    set(&mut cfg, "mode", format!("{:?}", a.mode).to_lowercase());
    set(&mut cfg, "field", field.name());
    set(&mut cfg, "rep", rep.label());
    set(&mut cfg, "sigma", fmt_num(a.sigma));
    set(&mut cfg, "limit", a.limit);
    let x = a.limit as f64;
    match a.mode {
        Mode::Thm12 | Mode::Thm12a => {
            let kmax = a.kmax.unwrap_or(n * n + 1);
            let opts = ProductOptions { eps: a.eps, strict_grc: a.strict_grc };
            set(&mut cfg, "eps", fmt_num(a.eps));
            let led = if a.mode == Mode::Thm12 {
                rs_square_product(&rep, a.sigma, x, kmax, opts)?
            } else {
                rs_square_a_product(&rep, a.sigma, x, kmax, opts)?
            };
            Ok(ledger_table(cfg, &led))
        }
        Mode::H | Mode::G => {
            let rep2 = match &a.rep2 {
                Some(s) => load_rep(s, field, cli.seed, a.limit)?,
                None => rep.contragredient(),
            };
            set(&mut cfg, "rep2", rep2.label());
            set(&mut cfg, "K", a.k);
            let led = if a.mode == Mode::H {
                h_partial(&rep, &rep2, a.sigma, x, a.k)?
            } else {
                g_partial(&rep, &rep2, a.sigma, x, a.k)?
            };
            Ok(ledger_table(cfg, &led))
        }
        Mode::Hyph => {
            if a.limit < 2 {
                return Err(Error::Input("hyph needs --limit >= 2".into()));
            }
            let jmax = (63 - a.limit.leading_zeros()).saturating_sub(1);
            cfg.remove("sigma");
            set(&mut cfg, "k", a.k);
            set(&mut cfg, "jmax", jmax);
            let pieces = hyp_h_dyadic(&rep, a.k, jmax)?;
            set(&mut cfg, "total", fmt_num(pieces.iter().sum::<f64>()));
            let mut t = Table::new(cfg, &["j", "lo", "hi", "T_j"]);
            for (j, v) in pieces.iter().enumerate() {
                t.push(vec![j.to_string(), (1u64 << j).to_string(), (2u64 << j).to_string(), fmt_num(*v)]);
            }
            Ok(t)
        }
        Mode::D => {
            set(&mut cfg, "k", a.k);
            let mut t = Table::new(cfg, &["X", "value"]);
            for c in checkpoints(a.limit) {
                let v = iterative_diagnostic_d(&rep, a.k, a.sigma, c as f64)?;
                t.push(vec![c.to_string(), fmt_num(v)]);
            }
            Ok(t)
        }
    }
}

fn smo(cli: &Cli, a: &SmoArgs) -> Result<Table> {
    let field = FieldDesc::parse(&a.field)?;
    let r1 = load_rep(&a.rep1, field, cli.seed, a.limit)?;
    let r2 = load_rep(&a.rep2, field, cli.seed, a.limit)?;
    let t1 = lambda_table(&r1, a.limit)?;
    let t2 = lambda_table(&r2, a.limit)?;
    let first = first_disagreement(&t1, &t2, a.tol)?;
    // V is supported on [1/2, 5/2], so the tables reach 5X/2.
    let x = (a.limit as f64 / 2.5).floor();
    let s = smoothed_pair_sum(&t1, &t2, x, r1.label() == r2.label())?;
    let mut cfg = base_config(cli, "smo");
    set(&mut cfg, "field", field.name());
    set(&mut cfg, "rep1", r1.label());
    set(&mut cfg, "rep2", r2.label());
    set(&mut cfg, "limit", a.limit);
    set(&mut cfg, "tol", fmt_num(a.tol));
    set(&mut cfg, "first_disagreement", first);
    let mut t = Table::new(cfg, &SUM_COLUMNS);
    t.push(sum_row(&s));
    Ok(t)
}

fn orthogonality(cli: &Cli, a: &OrthArgs) -> Result<Table> {
    let field = FieldDesc::parse(&a.field)?;
    let r1 = load_rep(&a.rep1, field, cli.seed, a.limit)?;
    let r2 = load_rep(&a.rep2, field, cli.seed, a.limit)?;
    let xs: Vec<f64> =
        if a.dyadic { checkpoints(a.limit) } else { vec![a.limit] }.into_iter().map(|v| v as f64).collect();
    let rows = selberg_checkpoints(&r1, &r2.contragredient(), &xs)?;
    let mut cfg = base_config(cli, "orthogonality");
    set(&mut cfg, "field", field.name());
    set(&mut cfg, "rep1", r1.label());
    set(&mut cfg, "rep2", r2.label());
    set(&mut cfg, "limit", a.limit);
    set(&mut cfg, "dyadic", a.dyadic);
    let mut t = Table::new(cfg, &SUM_COLUMNS);
    for r in &rows {
        t.push(sum_row(r));
    }
    Ok(t)
}

fn pnt(cli: &Cli, a: &PntArgs) -> Result<Table> {
    let field = FieldDesc::parse(&a.field)?;
    let reach = a.x + a.window.map_or(0, |h| h.max(0.0).ceil() as u64);
    let rep = load_rep(&a.rep, field, cli.seed, reach)?;
    let r = match a.window {
        Some(h) => hoheisel_window(&rep, a.x as f64, h)?,
        None => pnt_partial(&rep, a.x as f64)?,
    };
    let mut cfg = base_config(cli, "pnt");
    set(&mut cfg, "field", field.name());
    set(&mut cfg, "rep", rep.label());
    set(&mut cfg, "x", a.x);
    if let Some(h) = a.window {
        set(&mut cfg, "window", fmt_num(h));
    }
    let mut t = Table::new(cfg, &SUM_COLUMNS);
    t.push(sum_row(&r));
    Ok(t)
}

fn correlation(cli: &Cli, a: &CorrArgs) -> Result<String> {
    let zl: ZeroList = match (&a.zeros, a.generate) {
        (Some(p), _) => ingest_zeros(p)?,
        (None, Some(n)) => zeta_zeros(n as usize)?,
        (None, None) => return Err(Error::Input("give --zeros or --generate".into())),
    };
    let t = if a.t == "auto" {
        if a.scale.is_some() {
            return Err(Error::Input("--scale needs a numeric --T".into()));
        }
        None
    } else {
        let t: f64 =
            a.t.parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v > 0.0)
                .ok_or_else(|| Error::Input(format!("--T must be 'auto' or a positive number, got '{}'", a.t)))?;
        let scale = a.scale.unwrap_or(rankin::correlations::coverage_radius() * t / zl.max());
        Some((t, scale))
    };
    let report = run_correlation(&zl, a.m, a.beta, t)?;
    let mut v = serde_json::to_value(&report).map_err(|e| Error::Numerical(e.to_string()))?;
    let mut cfg = serde_json::Map::new();
    for (k, val) in base_config(cli, "correlation") {
        cfg.insert(k, val.into());
    }
    cfg.insert("source".into(), zl.source_label.clone().into());
    cfg.insert("m".into(), a.m.into());
    cfg.insert("beta".into(), a.beta.into());
    cfg.insert("T".into(), a.t.clone().into());
    if let Some(s) = a.scale {
        cfg.insert("scale".into(), s.into());
    }
    v.as_object_mut().expect("report is an object").insert("config".into(), cfg.into());
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn accept(a: &AcceptArgs, seed: u64) -> Result<bool> {
    if a.suite != "primary" {
        return Err(Error::Input(format!("unknown suite '{}'; available: primary", a.suite)));
    }
    let alt = if rayon::current_num_threads() == 3 { 2 } else { 3 };
    let report = acceptance::run_primary_with_repro(seed, alt)?;
    print!("{}", report.render());
    Ok(report.all_passed())
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let (text, out): (String, Option<&Path>) = match &cli.cmd {
        Cmd::Numfield { action: NumfieldCmd::Primes { field, limit, splits_completely } } => {
            (numfield_primes(cli, field, *limit, *splits_completely)?.render(), None)
        }
        Cmd::Coeffs(a) => (coeffs(cli, a)?.render(), a.out.as_deref()),
        Cmd::Sieve { action } => match action {
            SieveCmd::Weights { field, k, p_cap, limit, avoid, out } => {
                (sieve_weights(cli, field, *k, *p_cap, *limit, *avoid)?.render(), out.as_deref())
            }
            SieveCmd::Spx { rep, k, x, p_cap, out } => (sieve_spx(cli, rep, *k, *x, *p_cap)?.render(), out.as_deref()),
        },
        Cmd::Products(a) => (products(cli, a)?.render(), a.out.as_deref()),
        Cmd::Smo(a) => (smo(cli, a)?.render(), a.out.as_deref()),
        Cmd::Orthogonality(a) => (orthogonality(cli, a)?.render(), a.out.as_deref()),
        Cmd::Pnt(a) => (pnt(cli, a)?.render(), a.out.as_deref()),
        Cmd::Correlation(a) => (correlation(cli, a)?, a.out.as_deref()),
        Cmd::Accept(a) => {
            return Ok(if accept(a, cli.seed)? { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    emit(&text, out)?;
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Parse { .. } | Error::Config(_) => 2,
        Error::Contract(_) => 3,
        Error::Overflow(_) | Error::Numerical(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: cannot start {w} workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
