//! Command-line front end for the exact star-product calculus.
//!
//! Exit codes: `0` success, `1` a verification command found a failing
//! identity, `2` expression / command-line parse error, `3` configuration
//! error, `4` mathematical precondition failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use projstar_core::{
    cayley_exp_tan_identity, cayley_log_arctan_identity, cayley_matrix, cayley_series,
    h0_dimension, localize, riccati_solve, star_exp_closed_form, star_exp_series, GradedPoly,
    HomPoly, IncidenceContext, Matrix, MatrixSeries, PoissonMatrix, ScalarSeries, StarContext,
    SymMatrix,
};

use projstar_cli::config::RunConfig;
use projstar_cli::expr::{self, ParseError};
use projstar_cli::output::*;

#[derive(Parser)]
#[command(
    name = "projstar",
    version,
    about = "Exact star-product calculus on complex projective space"
)]
struct Cli {
    /// Configuration file (.toml or .json) with nvars, lambda, quad_a, ...
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Star product of two polynomial expressions
    Star { f: String, g: String },
    /// Star commutator of two polynomial expressions
    Commutator { f: String, g: String },
    /// Star exponential series of the configured quadratic form, with the
    /// closed form and an oracle verdict when available
    StarExp {
        /// Truncation order in t (overrides the config)
        #[arg(long)]
        order: Option<usize>,
    },
    /// Verify the Cayley-transform identities on the configured data
    CayleyCheck {
        /// Truncation order in t (overrides the config)
        #[arg(long)]
        order: Option<usize>,
    },
    /// Dimension of the space of degree-M sections on projective N-space
    H0 {
        n: usize,
        #[arg(allow_hyphen_values = true)]
        m: i64,
    },
    /// Normalized degree-zero fraction G / F^M
    Localize { g: String, f: String, m: u32 },
    /// Verify the incidence commutation relations for the configured data
    TwistorCheck,
}

enum CliError {
    Parse(ParseError),
    Config(String),
    Math(projstar_core::Error),
    ChecksFailed,
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<projstar_core::Error> for CliError {
    fn from(e: projstar_core::Error) -> Self {
        CliError::Math(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ChecksFailed) => {
            eprintln!("error[E_CHECK]: one or more checks failed");
            ExitCode::from(1)
        }
        Err(CliError::Parse(e)) => {
            eprintln!("error[E_PARSE]: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error[E_CONFIG]: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Math(e)) => {
            eprintln!("error[E_MATH]: {e}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli
        .config
        .as_deref()
        .map(RunConfig::load)
        .transpose()
        .map_err(CliError::Config)?;
    let json = cli.json || cfg.as_ref().map(|c| c.json).unwrap_or(false);
    match cli.command {
        Command::Star { f, g } => binary_product(&cfg, json, &f, &g, false),
        Command::Commutator { f, g } => binary_product(&cfg, json, &f, &g, true),
        Command::StarExp { order } => star_exp(&cfg, json, order),
        Command::CayleyCheck { order } => cayley_check(&cfg, json, order),
        Command::H0 { n, m } => {
            let value = h0_dimension(n, m);
            if json {
                print_json(&H0Json {
                    n,
                    m,
                    value: value.to_string(),
                });
            } else {
                println!("{value}");
            }
            Ok(())
        }
        Command::Localize { g, f, m } => localize_cmd(&cfg, json, &g, &f, m),
        Command::TwistorCheck => twistor_check(&cfg, json),
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn require_config(cfg: &Option<RunConfig>) -> Result<&RunConfig, CliError> {
    cfg.as_ref()
        .ok_or_else(|| CliError::Config("this command requires --config".to_string()))
}

fn require_lambda(cfg: &RunConfig) -> Result<&PoissonMatrix, CliError> {
    cfg.lambda
        .as_ref()
        .ok_or_else(|| CliError::Config("config is missing `lambda`".to_string()))
}

fn require_quad_a(cfg: &RunConfig) -> Result<&SymMatrix, CliError> {
    cfg.quad_a
        .as_ref()
        .ok_or_else(|| CliError::Config("config is missing `quad_a`".to_string()))
}

/// Variable table: `z0..z{nvars-1}` always; the incidence aliases
/// `x11, x12, x21, x22, pi1, pi2` when the ring has six variables.
fn resolver(nvars: usize) -> impl Fn(&str) -> Option<usize> {
    move |name: &str| {
        if let Some(rest) = name.strip_prefix('z') {
            if let Ok(k) = rest.parse::<usize>() {
                if k < nvars && rest == k.to_string() {
                    return Some(k);
                }
            }
        }
        if nvars == 6 {
            return match name {
                "x11" => Some(0),
                "x12" => Some(1),
                "x21" => Some(2),
                "x22" => Some(3),
                "pi1" => Some(4),
                "pi2" => Some(5),
                _ => None,
            };
        }
        None
    }
}

fn binary_product(
    cfg: &Option<RunConfig>,
    json: bool,
    f_src: &str,
    g_src: &str,
    commutator: bool,
) -> Result<(), CliError> {
    let cfg = require_config(cfg)?;
    let lambda = require_lambda(cfg)?;
    let ctx = StarContext::new(lambda.clone());
    let resolve = resolver(cfg.nvars);
    let f = expr::parse_poly(f_src, cfg.nvars, &resolve)?;
    let g = expr::parse_poly(g_src, cfg.nvars, &resolve)?;
    let result = if commutator {
        ctx.commutator(&f, &g)?
    } else {
        ctx.star(&f, &g)?
    };
    if json {
        print_json(&PolyJson::from_poly(&result));
    } else {
        println!("{result}");
    }
    Ok(())
}

fn fmt_scalar_series(s: &ScalarSeries) -> String {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (j, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative_for_render();
        let magnitude = if negative { -c } else { c.clone() };
        let coeff = if magnitude.is_one() && j != 0 {
            String::new()
        } else {
            format!("({magnitude})")
        };
        let body = match (j, coeff.is_empty()) {
            (0, _) => format!("{magnitude}"),
            (1, true) => "t".to_string(),
            (1, false) => format!("{coeff}*t"),
            (_, true) => format!("t^{j}"),
            (_, false) => format!("{coeff}*t^{j}"),
        };
        pieces.push((negative, body));
    }
    if pieces.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (negative, body)) in pieces.into_iter().enumerate() {
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

fn star_exp(cfg: &Option<RunConfig>, json: bool, order: Option<usize>) -> Result<(), CliError> {
    let cfg = require_config(cfg)?;
    let lambda = require_lambda(cfg)?;
    let a = require_quad_a(cfg)?;
    let order = order.unwrap_or(cfg.order);
    let ctx = StarContext::new(lambda.clone());
    let series = star_exp_series(&ctx, a, order)?;

    let invertible = lambda.as_matrix().inverse().is_some();
    let closed = if invertible {
        let b = cfg
            .quad_b
            .clone()
            .unwrap_or_else(|| SymMatrix::zero(cfg.nvars));
        let ansatz = star_exp_closed_form(&ctx, a, &b, order)?;
        let oracle = if b.as_matrix().is_zero() {
            Some(ansatz.expand()? == series)
        } else {
            None
        };
        Some((ansatz, oracle))
    } else {
        None
    };

    if json {
        print_json(&StarExpJson {
            order,
            series: SeriesJson::from_series(&series),
            closed_form: closed.as_ref().map(|(ansatz, oracle)| ClosedFormJson {
                amplitude: scalar_series_json(ansatz.amplitude()),
                phase: matrix_series_json(ansatz.phase()),
                oracle_equivalence: *oracle,
            }),
        });
        return Ok(());
    }

    for (k, coeff) in series.coeffs().iter().enumerate() {
        println!("t^{k}: {coeff}");
    }
    match closed {
        None => println!("closed form: skipped (poisson matrix is singular)"),
        Some((ansatz, oracle)) => {
            println!("amplitude: {}", fmt_scalar_series(ansatz.amplitude()));
            for j in 0..=ansatz.order() {
                let m = ansatz.phase().coeff(j);
                if !m.is_zero() {
                    println!("phase t^{j}: {m}");
                }
            }
            match oracle {
                Some(true) => println!("oracle equivalence through t^{order}: verified"),
                Some(false) => println!("oracle equivalence through t^{order}: FAILED"),
                None => println!("oracle equivalence: not applicable (nonzero initial phase)"),
            }
            if oracle == Some(false) {
                return Err(CliError::ChecksFailed);
            }
        }
    }
    Ok(())
}

enum ItemStatus {
    Pass,
    Fail,
    Skipped(String),
}

impl ItemStatus {
    fn from_bool(pass: bool) -> Self {
        if pass {
            ItemStatus::Pass
        } else {
            ItemStatus::Fail
        }
    }
    fn text(&self) -> String {
        match self {
            ItemStatus::Pass => "pass".to_string(),
            ItemStatus::Fail => "fail".to_string(),
            ItemStatus::Skipped(reason) => format!("skipped: {reason}"),
        }
    }
}

fn cayley_check(
    cfg: &Option<RunConfig>,
    json: bool,
    order: Option<usize>,
) -> Result<(), CliError> {
    let cfg = require_config(cfg)?;
    let lambda = require_lambda(cfg)?;
    let a_sym = require_quad_a(cfg)?;
    let order = order.unwrap_or(cfg.order);
    let lam = lambda.as_matrix();
    let a = lam * a_sym.as_matrix();
    let b = cfg
        .quad_b
        .clone()
        .map(|m| lam * m.as_matrix())
        .unwrap_or_else(|| Matrix::zero(cfg.nvars));

    // item 1: lambda X symmetric => C(X) preserves lambda
    let item1 = match lam.inverse() {
        None => ItemStatus::Skipped("poisson matrix is singular".to_string()),
        Some(lam_inv) => {
            let x = &lam_inv * a_sym.as_matrix();
            match cayley_matrix(&x) {
                Err(_) => ItemStatus::Skipped("1 + X is singular".to_string()),
                Ok(c) => ItemStatus::from_bool(&(&c.transpose() * lam) * &c == *lam),
            }
        }
    };

    // item 2: the transform is an involution
    let item2 = match cayley_matrix(&a) {
        Err(_) => ItemStatus::Skipped("1 + a is singular".to_string()),
        Ok(c) => ItemStatus::from_bool(cayley_matrix(&c).map(|cc| cc == a).unwrap_or(false)),
    };

    let item3 = ItemStatus::from_bool(cayley_exp_tan_identity(&a, order));
    let item4 = ItemStatus::from_bool(cayley_log_arctan_identity(&a, order));

    // item 5: linearized flow, checked by residuals on the solved series
    let item5 = match riccati_solve(&a, &b, order) {
        Err(_) => ItemStatus::Skipped("1 + b is singular".to_string()),
        Ok(q) => {
            let id = MatrixSeries::identity(cfg.nvars, order);
            let a_s = MatrixSeries::constant(a.clone(), order);
            let rhs = id.add(&q).mul(&a_s).mul(&id.sub(&q));
            let riccati_ok = q.derivative().sub(&rhs).is_zero_through(order.saturating_sub(1));
            let flow_ok = match cayley_series(&q) {
                Err(_) => false,
                Ok(cq) => {
                    let rhs = cq
                        .mul_const_left(&a)
                        .scale(&projstar_core::GaussRational::from_int(-2));
                    cq.derivative().sub(&rhs).is_zero_through(order.saturating_sub(1))
                }
            };
            ItemStatus::from_bool(riccati_ok && flow_ok)
        }
    };

    let items = [
        (1u8, "symplectic membership", item1),
        (2, "involution", item2),
        (3, "exponential-tangent identity", item3),
        (4, "logarithm-arctangent identity", item4),
        (5, "linearized flow", item5),
    ];
    let failed = items
        .iter()
        .any(|(_, _, status)| matches!(status, ItemStatus::Fail));
    if json {
        print_json(&CayleyCheckJson {
            order,
            items: items
                .iter()
                .map(|(item, name, status)| CayleyItemJson {
                    item: *item,
                    name,
                    status: status.text(),
                })
                .collect(),
        });
    } else {
        for (item, name, status) in &items {
            println!("item {item} ({name}): {}", status.text());
        }
    }
    if failed {
        Err(CliError::ChecksFailed)
    } else {
        Ok(())
    }
}

fn localize_cmd(
    cfg: &Option<RunConfig>,
    json: bool,
    g_src: &str,
    f_src: &str,
    m: u32,
) -> Result<(), CliError> {
    let g_expr = expr::parse(g_src)?;
    let f_expr = expr::parse(f_src)?;
    let nvars = match cfg {
        Some(cfg) => cfg.nvars,
        None => inferred_nvars(&[&g_expr, &f_expr])?,
    };
    let resolve = resolver(nvars);
    let g = plain_poly(&expr::eval(&g_expr, nvars, &resolve)?)?;
    let f = plain_poly(&expr::eval(&f_expr, nvars, &resolve)?)?;
    let fraction = localize(g, f, m)?;
    if json {
        print_json(&localize_json(&fraction));
    } else {
        println!("{fraction}");
    }
    Ok(())
}

fn plain_poly(p: &HomPoly) -> Result<GradedPoly, CliError> {
    Ok(GradedPoly::from_hom_poly(p)?)
}

/// Smallest ring containing every variable mentioned: `z<k>` forces
/// `k + 1` slots, the incidence aliases force the six-variable ring.
fn inferred_nvars(exprs: &[&expr::Expr]) -> Result<usize, CliError> {
    let mut names = Vec::new();
    for e in exprs {
        expr::variables(e, &mut names);
    }
    let mut nvars = 1usize;
    for (name, offset) in names {
        if let Some(rest) = name.strip_prefix('z') {
            if let Ok(k) = rest.parse::<usize>() {
                if rest == k.to_string() {
                    nvars = nvars.max(k + 1);
                    continue;
                }
            }
        }
        if matches!(name.as_str(), "x11" | "x12" | "x21" | "x22" | "pi1" | "pi2") {
            nvars = nvars.max(6);
            continue;
        }
        return Err(CliError::Parse(ParseError {
            offset,
            message: format!("unknown variable `{name}`"),
            expected: vec![],
        }));
    }
    Ok(nvars)
}

fn twistor_check(cfg: &Option<RunConfig>, json: bool) -> Result<(), CliError> {
    let cfg = require_config(cfg)?;
    let d = cfg
        .twistor_d
        .clone()
        .ok_or_else(|| CliError::Config("config is missing `twistor_d`".to_string()))?;
    let ctx = IncidenceContext::new(d)?;
    let mut pairs = Vec::new();
    let mut all = true;
    for b1 in 0..2 {
        for b2 in 0..2 {
            let pass = ctx.commutator_pair_check(b1, b2);
            all &= pass;
            pairs.push(TwistorPairJson { b1, b2, pass });
        }
    }
    if json {
        print_json(&TwistorCheckJson { pairs, pass: all });
    } else {
        for p in &pairs {
            println!(
                "[z^{}, z^{}]: {}",
                p.b1 + 1,
                p.b2 + 1,
                if p.pass { "pass" } else { "fail" }
            );
        }
        println!(
            "incidence relations: {}",
            if all { "pass" } else { "fail" }
        );
    }
    if all {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}
