//! Command-line front end: argument types, the five commands, and output formatting.
//!
//! Every command returns a [`Report`]: the rendered output plus whether all
//! certificates passed. Nothing is printed until the whole report exists.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellipcmr::bethe::{solve_bethe, BetheOptions};
use ellipcmr::field::{FdConfig, GroundState, PlaneWave, Permuted, SmoothField, Translated};
use ellipcmr::kernels::{
    elliptic_gamma, eta1_over_omega1, heat_constant_c0, heat_residual, theta1, theta1_neg_d2log, weight_w, wp1,
    zeta1,
};
use ellipcmr::operators::{
    apply_deformed_ecs, apply_ecs, apply_generalized_ecs, kernel_identity_residual, nonstationary_residual,
    CouplingSet, Env, KernelSpec,
};
use ellipcmr::pseries::{certify_ncap, relative_residual, solve_variant_i, solve_variant_ii, PSeriesTable};
use ellipcmr::transform::{assemble_p_lambda, eigen_residual, ContourConfig, Partition2};
use ellipcmr::{EllipticDomain, Error, RuijsenaarsParams, Truncation, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const SCHEMA: u32 = 1;
pub const DEFAULT_K: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "ellipcmr", version, about = "Elliptic CMR special functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate a kernel function along a line.
    Eval(EvalArgs),
    /// Solve the Bethe equations of the Lame equation.
    Bethe(BetheArgs),
    /// Solve the two-particle p-series recursion.
    Perturb(PerturbArgs),
    /// Assemble P_lambda from the double contour.
    Transform(TransformArgs),
    /// Run an identity suite and report residuals.
    Verify(VerifyArgs),
}

/// Exactly one of `--delta` and `--p`.
#[derive(Args, Debug, Clone)]
pub struct DomainArgs {
    #[arg(long, default_value_t = 1.0)]
    pub ell: f64,
    #[arg(long, conflicts_with = "p", required_unless_present = "p")]
    pub delta: Option<f64>,
    /// Nome; 0 selects the trigonometric limit.
    #[arg(long)]
    pub p: Option<f64>,
}

impl DomainArgs {
    pub fn domain(&self) -> Result<EllipticDomain, Error> {
        match (self.delta, self.p) {
            (Some(d), None) => EllipticDomain::new(self.ell, d),
            (None, Some(p)) => EllipticDomain::from_nome(self.ell, p),
            _ => Err(Error::InvalidInput("give exactly one of --delta and --p")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Func {
    Theta,
    Wp1,
    Zeta,
    /// Gamma(e^{i pi x / l}; p, q).
    Gamma,
    /// W(e^{i pi x / l}, 1) for two particles.
    Weight,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub dom: DomainArgs,
    #[arg(long = "fn", value_enum)]
    pub func: Func,
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    /// Start of the real range (default 0.05 l).
    #[arg(long)]
    pub from: Option<f64>,
    /// End of the real range (default 1.95 l).
    #[arg(long)]
    pub to: Option<f64>,
    /// Imaginary part shared by all points.
    #[arg(long, default_value_t = 0.0)]
    pub im: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Args, Debug)]
pub struct BetheArgs {
    #[command(flatten)]
    pub dom: DomainArgs,
    #[arg(long)]
    pub n: usize,
    /// Tolerance for the ODE residual and energy spread.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Variant {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    /// `s1,s2`; decimals or fractions like `3/10,-1/5`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long = "K", default_value_t = DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value_t = 16)]
    pub n_cap: usize,
    #[arg(long, value_enum, default_value_t = Variant::I)]
    pub variant: Variant,
    /// `re,im`; required for variant II.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Only used to convert eigenvalues to E = (pi/l)^2 eps.
    #[arg(long, default_value_t = 1.0)]
    pub ell: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[command(flatten)]
    pub dom: DomainArgs,
    /// `l1,l2`; repeat for several partitions.
    #[arg(long, required = true)]
    pub lambda: Vec<String>,
    #[arg(long)]
    pub g: f64,
    /// Order in p. Without it: 6, lowered to stay below the first resonance.
    #[arg(long = "K")]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    /// Real coordinates `x1,x2`.
    #[arg(long, default_value = "0.9,0.25", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Heat,
    QuasiPeriodicity,
    KernelIdentity,
    Duality,
    CalogeroTrick,
    NonstationaryThetaPower,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Defaults to p = 0.1 when neither --p nor --delta is given.
    #[arg(long, default_value_t = 1.0)]
    pub ell: f64,
    #[arg(long, conflicts_with = "p")]
    pub delta: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 1.5)]
    pub g: f64,
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
    #[arg(long = "M", default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

/// Rendered output and the certificate verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub pass: bool,
}

/// A failure before any output exists.
#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Usage(_) => "usage",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type R<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> R<Report> {
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, cli.format),
        Command::Bethe(a) => cmd_bethe(a, cli.format),
        Command::Perturb(a) => cmd_perturb(a, cli.format),
        Command::Transform(a) => cmd_transform(a, cli.format),
        Command::Verify(a) => cmd_verify(a, cli.format),
    }
}

/// `"3/10"`, `"-0.2"` or `"1e-3"`.
pub fn parse_number(s: &str) -> R<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let r: num_rational::Ratio<i64> = s.parse().map_err(|_| CliError::Usage(format!("not a number: {s:?}")))?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

fn parse_list(s: &str, len: usize) -> R<Vec<f64>> {
    let v: Vec<f64> = s.split(',').map(parse_number).collect::<R<_>>()?;
    if v.len() != len {
        return Err(CliError::Usage(format!("expected {len} comma-separated values, got {s:?}")));
    }
    Ok(v)
}

fn parse_pair_i(s: &str) -> R<(i64, i64)> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad integer pair {s:?}"))))
        .collect::<R<_>>()?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Usage(format!("bad integer pair {s:?}"))),
    }
}

fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn cplx(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

/// Seventeen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub x_re: f64,
    pub x_im: f64,
    pub f_re: f64,
    pub f_im: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EvalTable {
    pub schema: u32,
    #[serde(rename = "fn")]
    pub func: String,
    pub ell: f64,
    pub delta: Option<f64>,
    pub p: f64,
    pub rows: Vec<EvalRow>,
}

pub fn cmd_eval(a: &EvalArgs, fmt: Format) -> R<Report> {
    let dom = a.dom.domain()?;
    let pol = Truncation::default();
    if a.grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let l = dom.ell();
    let (x0, x1) = (a.from.unwrap_or(0.05 * l), a.to.unwrap_or(1.95 * l));
    let par = match a.func {
        Func::Gamma => {
            let q = a.q.ok_or_else(|| CliError::Usage("--fn gamma needs --q".into()))?;
            Some(RuijsenaarsParams::with_any_t(dom.p(), q, 1.0)?)
        }
        _ => None,
    };
    let rows: Vec<EvalRow> = (0..a.grid)
        .into_par_iter()
        .map(|j| {
            let t = if a.grid == 1 { 0.0 } else { j as f64 / (a.grid - 1) as f64 };
            let x = C64::new(x0 + (x1 - x0) * t, a.im);
            let f = match a.func {
                Func::Theta => theta1(x, &dom, &pol)?,
                Func::Wp1 => wp1(x, &dom, &pol)?,
                Func::Zeta => zeta1(x, &dom, &pol)?,
                Func::Gamma => elliptic_gamma(dom.z(x), par.as_ref().expect("checked"), &pol)?,
                Func::Weight => C64::new(weight_w(&[dom.z(x), C64::new(1.0, 0.0)], a.g, dom.p(), &pol)?, 0.0),
            };
            Ok(EvalRow { x_re: x.re, x_im: x.im, f_re: f.re, f_im: f.im })
        })
        .collect::<Result<_, Error>>()?;
    let text = match fmt {
        Format::Json => to_json(&EvalTable {
            schema: SCHEMA,
            func: a.func.to_possible_value().expect("named").get_name().to_string(),
            ell: l,
            delta: finite_or_none(dom.delta()),
            p: dom.p(),
            rows,
        }),
        Format::Csv => to_csv(
            &["x_re", "x_im", "f_re", "f_im"],
            rows.iter().map(|r| vec![num(r.x_re), num(r.x_im), num(r.f_re), num(r.f_im)]),
        ),
    };
    Ok(Report { text, pass: true })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BetheCertificates {
    pub bethe_residual: f64,
    pub ode_residual: f64,
    pub xi_identity: f64,
    pub energy_spread: f64,
    pub saddle_gradient: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BetheOutput {
    pub schema: u32,
    pub n: usize,
    pub ell: f64,
    pub delta: Option<f64>,
    pub p: f64,
    pub roots: Vec<[f64; 2]>,
    pub xi: [f64; 2],
    pub energy: [f64; 2],
    pub constant: [f64; 2],
    pub wronskian: f64,
    pub degenerate: bool,
    pub certificates: BetheCertificates,
    pub pass: bool,
}

pub fn cmd_bethe(a: &BetheArgs, fmt: Format) -> R<Report> {
    let dom = a.dom.domain()?;
    if dom.p() == 0.0 {
        return Err(Error::InvalidInput("bethe needs p > 0").into());
    }
    let st = solve_bethe(a.n, &dom, None, &Truncation::default(), &BetheOptions::default())?;
    let certs = BetheCertificates {
        bethe_residual: st.bethe_residual,
        ode_residual: st.ode_residual,
        xi_identity: st.xi_identity,
        energy_spread: st.energy_spread,
        saddle_gradient: st.saddle_gradient,
    };
    let pass = certs.bethe_residual <= 1e-10
        && certs.ode_residual <= a.tol
        && certs.xi_identity <= 1e-10
        && certs.energy_spread <= a.tol
        && certs.saddle_gradient <= 1e-9;
    let text = match fmt {
        Format::Json => to_json(&BetheOutput {
            schema: SCHEMA,
            n: st.n,
            ell: dom.ell(),
            delta: finite_or_none(dom.delta()),
            p: dom.p(),
            roots: st.roots.iter().map(|&t| cplx(t)).collect(),
            xi: cplx(st.xi),
            energy: cplx(st.energy),
            constant: cplx(st.constant),
            wronskian: st.wronskian,
            degenerate: st.degenerate,
            certificates: certs,
            pass,
        }),
        Format::Csv => to_csv(
            &["j", "root_re", "root_im"],
            st.roots.iter().enumerate().map(|(j, t)| vec![j.to_string(), num(t.re), num(t.im)]),
        ),
    };
    Ok(Report { text, pass })
}

/// The exported table; `entries` are `[n, k, re, im]`, `eps` are `[re, im]`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PerturbTable {
    pub schema: u32,
    pub variant: Variant,
    pub s: [f64; 2],
    pub s_exact: [String; 2],
    pub gamma: f64,
    pub gamma_exact: String,
    pub kappa: [f64; 2],
    #[serde(rename = "K")]
    pub k: usize,
    pub n_cap: usize,
    /// Upper end of the stored n-window per row k.
    pub n_max: Vec<i64>,
    pub entries: Vec<[f64; 4]>,
    pub eps: Vec<[f64; 2]>,
    /// `(pi/l)^2 eps`.
    pub energy: Vec<[f64; 2]>,
    pub ell: f64,
    pub residual: f64,
    pub ncap_change: f64,
    pub pass: bool,
}

impl PerturbTable {
    /// `-k <= n <= n_max(k)` for every stored entry.
    pub fn support_ok(&self) -> bool {
        self.entries.iter().all(|e| {
            let (n, k) = (e[0] as i64, e[1] as usize);
            k <= self.k && n >= -(k as i64) && n <= self.n_max[k]
        })
    }
}

fn build_table(a: &PerturbArgs) -> R<(PSeriesTable, [String; 2])> {
    let parts: Vec<&str> = a.s.split(',').collect();
    let s = parse_list(&a.s, 2)?;
    let gamma = parse_number(&a.gamma)?;
    let t = match a.variant {
        Variant::I => solve_variant_i([s[0], s[1]], gamma, a.k, a.n_cap)?,
        Variant::II => {
            let kap = a.kappa.as_deref().ok_or_else(|| CliError::Usage("variant II needs --kappa re,im".into()))?;
            let kv = parse_list(kap, 2)?;
            solve_variant_ii([s[0], s[1]], gamma, C64::new(kv[0], kv[1]), a.k, a.n_cap)?
        }
    };
    Ok((t, [parts[0].trim().to_string(), parts[1].trim().to_string()]))
}

pub fn cmd_perturb(a: &PerturbArgs, fmt: Format) -> R<Report> {
    let (t, s_exact) = build_table(a)?;
    let residual = relative_residual(&t);
    let ncap_change = certify_ncap(&t)?;
    let pass = residual <= a.tol && ncap_change <= 1e-12;
    let k2 = (PI / a.ell).powi(2);
    let entries: Vec<[f64; 4]> = t.entries().map(|(n, k, v)| [n as f64, k as f64, v.re, v.im]).collect();
    let text = match fmt {
        Format::Json => to_json(&PerturbTable {
            schema: SCHEMA,
            variant: a.variant,
            s: t.s,
            s_exact,
            gamma: t.gamma,
            gamma_exact: a.gamma.trim().to_string(),
            kappa: cplx(t.kappa),
            k: t.k_max,
            n_cap: t.n_cap,
            n_max: (0..=t.k_max).map(|k| t.n_max(k)).collect(),
            entries,
            eps: t.eps.iter().map(|&e| cplx(e)).collect(),
            energy: t.eps.iter().map(|&e| cplx(e * k2)).collect(),
            ell: a.ell,
            residual,
            ncap_change,
            pass,
        }),
        Format::Csv => to_csv(
            &["n", "k", "re", "im"],
            entries.iter().map(|e| vec![(e[0] as i64).to_string(), (e[1] as i64).to_string(), num(e[2]), num(e[3])]),
        ),
    };
    Ok(Report { text, pass })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TransformResult {
    pub lambda: [i64; 2],
    pub x: [f64; 2],
    pub z: [[f64; 2]; 2],
    pub p: f64,
    pub g: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub value_re: f64,
    pub value_im: f64,
    pub node_delta: f64,
    pub eigen_residual: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TransformOutput {
    pub schema: u32,
    pub ell: f64,
    pub nodes: usize,
    pub results: Vec<TransformResult>,
    pub pass: bool,
}

pub fn cmd_transform(a: &TransformArgs, fmt: Format) -> R<Report> {
    let dom = a.dom.domain()?;
    let pol = Truncation::default();
    let mut cfg = ContourConfig::default_for(dom.p());
    cfg.nodes = a.nodes;
    let xv = parse_list(&a.x, 2)?;
    let x = [C64::new(xv[0], 0.0), C64::new(xv[1], 0.0)];
    let z = [dom.z(x[0]), dom.z(x[1])];
    let lams: Vec<(i64, i64)> = a.lambda.iter().map(|s| parse_pair_i(s)).collect::<R<_>>()?;
    let results: Vec<TransformResult> = lams
        .par_iter()
        .map(|&(l1, l2)| {
            let lam = Partition2::new(l1, l2)?;
            let gamma = a.g * (a.g - 1.0);
            let (t, k) = match a.k {
                Some(k) => (solve_variant_i(lam.s(a.g), gamma, k, 16)?, k),
                None => match solve_variant_i(lam.s(a.g), gamma, DEFAULT_K, 16) {
                    Err(Error::Resonance { k, .. }) if k > 0 => (solve_variant_i(lam.s(a.g), gamma, k - 1, 16)?, k - 1),
                    r => (r?, DEFAULT_K),
                },
            };
            let v = assemble_p_lambda(&lam, &t, k, z, a.g, &dom, &cfg, &pol)?;
            let r = eigen_residual(&lam, &t, k, x, a.g, &dom, &cfg, &pol)?;
            Ok(TransformResult {
                lambda: [l1, l2],
                x: xv.clone().try_into().expect("two values"),
                z: [cplx(z[0]), cplx(z[1])],
                p: dom.p(),
                g: a.g,
                k,
                value_re: v.value.re,
                value_im: v.value.im,
                node_delta: v.delta,
                eigen_residual: r,
            })
        })
        .collect::<Result<_, Error>>()?;
    let pass = results.iter().all(|r| r.node_delta <= a.tol);
    let text = match fmt {
        Format::Json => to_json(&TransformOutput { schema: SCHEMA, ell: dom.ell(), nodes: a.nodes, results, pass }),
        Format::Csv => to_csv(
            &["lambda1", "lambda2", "K", "x1", "x2", "value_re", "value_im", "node_delta", "eigen_residual"],
            results.iter().map(|r| {
                vec![
                    r.lambda[0].to_string(),
                    r.lambda[1].to_string(),
                    r.k.to_string(),
                    num(r.x[0]),
                    num(r.x[1]),
                    num(r.value_re),
                    num(r.value_im),
                    num(r.node_delta),
                    num(r.eigen_residual),
                ]
            }),
        ),
    };
    Ok(Report { text, pass })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerifyOutput {
    pub schema: u32,
    pub suite: String,
    pub ell: f64,
    pub delta: Option<f64>,
    pub p: f64,
    pub g: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub tol: f64,
    pub residuals: Vec<Residual>,
    pub max_residual: f64,
    pub pass: bool,
}

fn grid20(d: &EllipticDomain) -> Vec<C64> {
    let h = d.delta().min(1.0) * d.ell();
    (0..20).map(|j| C64::new(d.ell() * (0.07 + 0.093 * j as f64), 0.6 * h * (1.3 * j as f64).sin())).collect()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn coords(count: usize, start: f64, ell: f64) -> Vec<C64> {
    (0..count)
        .map(|i| C64::new(ell * (start + 0.41 * i as f64), 0.07 * ell * (1.0 + i as f64).sin()))
        .collect()
}

fn suite_residuals(a: &VerifyArgs, dom: &EllipticDomain) -> R<Vec<Residual>> {
    let pol = Truncation::default();
    let env = Env::new(*dom);
    let l = dom.ell();
    let mut out = vec![];
    let mut push = |name: &str, value: f64| out.push(Residual { name: name.to_string(), value });
    match a.suite {
        Suite::Heat => {
            let c0 = heat_constant_c0(dom, &pol)?;
            let mut heat = 0.0f64;
            let mut link = 0.0f64;
            for x in grid20(dom) {
                let w = wp1(x, dom, &pol)?;
                let z = zeta1(x, dom, &pol)?;
                heat = heat.max(heat_residual(x, dom, &pol)?.norm() / (z.norm_sqr() + w.norm() + c0.abs()));
                link = link.max(rel(theta1_neg_d2log(x, dom, &pol)?, w));
            }
            push("heat", heat);
            push("wp1_link", link);
            let cross = c0 - 2.0 * eta1_over_omega1(dom, &pol)? - (PI / l).powi(2) / 12.0;
            push("c0_cross", cross.abs() / c0.abs());
        }
        Suite::QuasiPeriodicity => {
            let (mut anti, mut qd) = (0.0f64, 0.0f64);
            for x in grid20(dom) {
                let t = theta1(x, dom, &pol)?;
                anti = anti.max(rel(theta1(x + 2.0 * l, dom, &pol)?, -t));
                if dom.p() > 0.0 {
                    let s = theta1(x + C64::new(0.0, 2.0 * dom.delta()), dom, &pol)?;
                    let f = -(PI * dom.delta() / l).exp() * (C64::new(0.0, -PI / l) * x).exp();
                    qd = qd.max(rel(s, f * t));
                }
            }
            push("shift_2l_antiperiodic", anti);
            if dom.p() > 0.0 {
                push("shift_2i_delta", qd);
            }
        }
        Suite::KernelIdentity => {
            let spec = KernelSpec::new(a.n, a.m, a.g)?;
            let vals: Vec<C64> = (0..5)
                .map(|c| {
                    let s = 0.13 + 0.29 * c as f64;
                    kernel_identity_residual(&spec, &coords(a.n, s, l), &coords(a.m, s + 0.2, l), &env)
                })
                .collect::<Result<_, Error>>()?;
            if a.n == a.m {
                push("residual", vals.iter().map(|v| v.norm()).fold(0.0, f64::max));
            } else {
                let spread = vals.iter().map(|v| (v - vals[0]).norm()).fold(0.0, f64::max);
                push("constancy_spread", spread / vals[0].norm().max(1.0));
            }
        }
        Suite::Duality => {
            let (n, m) = (a.n, a.m);
            let k: Vec<C64> = (0..n + m).map(|i| C64::new(0.7 - 0.45 * i as f64, 0.1 * (i as f64).cos())).collect();
            let f = PlaneWave { k };
            let x = coords(n + m, 0.3, l);
            let sigma: Vec<usize> = (0..n + m).map(|i| (i + m) % (n + m)).collect();
            let swapped = Permuted { inner: &f, sigma, fd: FdConfig::default() };
            let mut x2 = x[n..].to_vec();
            x2.extend_from_slice(&x[..n]);
            let lhs = apply_deformed_ecs(n, m, &f, &x, a.g, &env)?;
            let rhs = apply_deformed_ecs(m, n, &swapped, &x2, 1.0 / a.g, &env)? * a.g;
            push("duality", (lhs + rhs).norm() / lhs.norm().max(1.0));
        }
        Suite::CalogeroTrick => {
            if dom.p() == 0.0 {
                return Err(Error::InvalidInput("calogero-trick needs p > 0").into());
            }
            let (n1, n2) = (a.n, a.m);
            let k: Vec<C64> = (0..n1 + n2).map(|i| C64::new(0.7 - 0.45 * i as f64, 0.1 * (i as f64).cos())).collect();
            let f = PlaneWave { k };
            let x = coords(n1 + n2, 0.3, l);
            let lhs = apply_generalized_ecs([n1, 0, n2, 0], &f, &x, a.g, &env)?;
            let mut shift = vec![C64::new(0.0, 0.0); n1 + n2];
            let mut moved = x.clone();
            for j in n1..n1 + n2 {
                shift[j] = C64::new(0.0, dom.delta());
                moved[j] -= C64::new(0.0, dom.delta());
            }
            let tr = Translated { inner: &f, shift, fd: FdConfig::default() };
            let rhs = apply_ecs(&tr, &moved, &CouplingSet::ecs(a.g), &env)?;
            push("calogero_trick", rel(lhs, rhs));
        }
        Suite::NonstationaryThetaPower => {
            let n = a.n;
            if n < 2 {
                return Err(Error::InvalidInput("nonstationary-theta-power needs N >= 2").into());
            }
            // strictly decreasing real coordinates spanning less than 2l
            let pts = |shift: f64| -> Vec<C64> {
                let w = 1.6 * l / n as f64;
                (0..n).map(|i| C64::new(1.75 * l - (w + shift * l) * i as f64, 0.0)).collect()
            };
            let spec = KernelSpec::new(n, 0, a.g)?;
            let en = kernel_identity_residual(&spec, &pts(0.0), &[], &env)?;
            let psi = GroundState { n, g: a.g, dom: *dom, pol };
            let cs = CouplingSet::ecs(a.g);
            let mut worst = 0.0f64;
            for sh in [-0.03, 0.02, 0.05] {
                let x = pts(sh);
                let r = nonstationary_residual(&psi, C64::new(n as f64 * a.g, 0.0), en, &x, &cs, &env)?;
                worst = worst.max(r.norm() / psi.value(&x)?.norm());
            }
            push("nonstationary", worst);
            if n == 2 {
                let want = heat_constant_c0(dom, &pol)? * a.g * a.g;
                push("energy_vs_g2_c0", (en.re - want).abs().max(en.im.abs()) / want.abs().max(1.0));
            }
        }
    }
    Ok(out)
}

pub fn cmd_verify(a: &VerifyArgs, fmt: Format) -> R<Report> {
    let dom = match (a.delta, a.p) {
        (Some(d), _) => EllipticDomain::new(a.ell, d)?,
        (None, Some(p)) => EllipticDomain::from_nome(a.ell, p)?,
        (None, None) => EllipticDomain::from_nome(a.ell, 0.1)?,
    };
    let residuals = suite_residuals(a, &dom)?;
    let max_residual = residuals.iter().map(|r| r.value).fold(0.0, f64::max);
    let pass = residuals.iter().all(|r| r.value <= a.tol);
    let suite = a.suite.to_possible_value().expect("named").get_name().to_string();
    let text = match fmt {
        Format::Json => to_json(&VerifyOutput {
            schema: SCHEMA,
            suite,
            ell: dom.ell(),
            delta: finite_or_none(dom.delta()),
            p: dom.p(),
            g: a.g,
            n: a.n,
            m: a.m,
            tol: a.tol,
            residuals,
            max_residual,
            pass,
        }),
        Format::Csv => to_csv(
            &["name", "value", "tol", "pass"],
            residuals
                .iter()
                .map(|r| vec![r.name.clone(), num(r.value), num(a.tol), (r.value <= a.tol).to_string()]),
        ),
    };
    Ok(Report { text, pass })
}
