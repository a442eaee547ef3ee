//! Command-line front end: argument model, dispatch and exit codes.

use clap::{Parser, Subcommand, ValueEnum};
use modunit::classfield::{conjugate_products, enumerate_reciprocity, make_field};
use modunit::identities::{run_suite, Identity, IdentityReport, SuiteOptions};
use modunit::numerics::{decimal_digits, log2_f64, relative_residual, to_decimal_string};
use modunit::pipeline::{certified_product, certify, CertifyOptions};
use modunit::qseries::{delta, eta, jfun, phi, phi_ratio, siegel};
use modunit::siegel::{eval_products, SiegelIndex};
use modunit::{Error, EvalContext, TauSpec};
use rug::{Complex, Float};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CERTIFICATION: i32 = 3;
pub const EXIT_IDENTITY: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "modunit",
    version,
    about = "Modular units at CM points, evaluated and certified"
)]
pub struct Cli {
    /// Target precision in bits (default 256; identity-check defaults to 192).
    #[arg(long, global = true)]
    pub prec: Option<u32>,
    /// Guard bits added to the working precision.
    #[arg(long, global = true, default_value_t = 32)]
    pub guard: u32,
    /// Seed for randomized identity checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub out: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Func {
    Eta,
    Phi,
    Delta,
    J,
    Siegel,
    #[value(name = "phi_ratio", alias = "phi-ratio")]
    PhiRatio,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a function at τ.
    Eval {
        #[arg(value_enum)]
        func: Func,
        /// `quad:D:p,q,r` for (p + q√D)/r, or `c:re,im`.
        #[arg(long)]
        tau: String,
        /// Siegel index `p/q,p/q`.
        #[arg(long)]
        index: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
    },
    /// Check the product identities at random points.
    IdentityCheck {
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Conjugates of x = (√m·φ(mθ)/φ(θ))^{2e} under the reciprocity group.
    Conjugates {
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Certify x = (√m·φ(mθ)/φ(θ))^{2e} as an algebraic integer.
    Certify {
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        /// Precision doublings allowed after the first attempt.
        #[arg(long, default_value_t = 2)]
        max_retries: u32,
    },
}

/// What a run printed and how it ended.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: impl Into<String>) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::InvalidPrecision(_)
        | Error::EvenOrSmallM(_)
        | Error::NotFundamentalDiscriminant(_)
        | Error::NonPositiveImaginaryPart
        | Error::IntegerIndex(_)
        | Error::NotPrime(_) => EXIT_USAGE,
        _ => EXIT_CERTIFICATION,
    }
}

fn from_error(e: Error) -> Outcome {
    Outcome::fail(exit_code(&e), format!("error: {e}"))
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let default_prec = match cli.command {
        Command::IdentityCheck { .. } => 192,
        _ => 256,
    };
    let ctx = match EvalContext::new(cli.prec.unwrap_or(default_prec), cli.guard) {
        Ok(c) => c,
        Err(e) => return from_error(e),
    };
    let result = match &cli.command {
        Command::Eval { func, tau, index, m } => cmd_eval(*func, tau, index.as_deref(), *m, &ctx, cli.out),
        Command::IdentityCheck { points, inject_fault } => {
            return cmd_identity_check(&ctx, cli.seed, *points, inject_fault.as_deref(), cli.out)
        }
        Command::Conjugates { disc, m } => cmd_conjugates(*disc, *m, &ctx, cli.out),
        Command::Certify { disc, m, max_retries } => cmd_certify(*disc, *m, *max_retries, &ctx, cli.out),
    };
    match result {
        Ok(s) => Outcome::ok(s),
        Err(e) => from_error(e),
    }
}

fn digits(ctx: &EvalContext) -> usize {
    decimal_digits(ctx.prec_bits())
}

fn complex_json(z: &Complex, ctx: &EvalContext) -> serde_json::Value {
    json!({
        "re": to_decimal_string(z.real(), digits(ctx)),
        "im": to_decimal_string(z.imag(), digits(ctx)),
    })
}

/// Plain decimal while the integer part fits in the resolved digits,
/// scientific notation beyond that.
fn real_text(x: &Float, digits: usize) -> String {
    let big = x.is_finite() && !x.is_zero() && x.clone().abs().log10().to_f64() >= digits as f64;
    if big {
        x.to_string_radix(10, Some(digits))
    } else {
        to_decimal_string(x, digits)
    }
}

fn complex_text(z: &Complex, ctx: &EvalContext) -> String {
    let re = real_text(z.real(), digits(ctx));
    // imaginary parts below the resolved precision are rounding noise
    let scale = Float::with_val(64, z.abs_ref()) >> ctx.prec_bits();
    let im = z.imag();
    if Float::with_val(64, im.abs_ref()) <= scale {
        return re;
    }
    let sign = if im.is_sign_negative() { "-" } else { "+" };
    format!(
        "{re} {sign} {}i",
        real_text(&Float::with_val(im.prec(), im.abs_ref()), digits(ctx))
    )
}

fn eval_at(
    func: Func,
    tau: &Complex,
    index: Option<&SiegelIndex>,
    m: Option<i64>,
    ctx: &EvalContext,
) -> modunit::Result<Complex> {
    match func {
        Func::Eta => eta(tau, ctx),
        Func::Phi => phi(tau, ctx),
        Func::Delta => delta(tau, ctx),
        Func::J => jfun(tau, ctx),
        Func::Siegel => siegel(index.expect("checked by caller"), tau, ctx),
        Func::PhiRatio => phi_ratio(m.expect("checked by caller"), tau, ctx),
    }
}

/// Value at the requested precision, with the distance to a rerun at
/// doubled precision as the error estimate.
pub fn cmd_eval(
    func: Func,
    tau: &str,
    index: Option<&str>,
    m: Option<i64>,
    ctx: &EvalContext,
    out: Output,
) -> modunit::Result<String> {
    let spec: TauSpec = tau.parse()?;
    let index = match (func, index) {
        (Func::Siegel, None) => return Err(Error::InvalidArgument("siegel needs --index".into())),
        (_, Some(s)) => Some(s.parse::<SiegelIndex>()?),
        (_, None) => None,
    };
    if func == Func::PhiRatio && m.is_none() {
        return Err(Error::InvalidArgument("phi_ratio needs --m".into()));
    }
    let value = eval_at(func, &spec.to_complex(ctx)?, index.as_ref(), m, ctx)?;
    let fine = ctx.doubled()?;
    let reference = eval_at(func, &spec.to_complex(&fine)?, index.as_ref(), m, &fine)?;
    let diff = Complex::with_val(reference.prec(), &value - &reference);
    // below the working precision the comparison only sees rounding
    let floor = -(ctx.working_prec() as f64);
    let abs_err =
        log2_f64(&Float::with_val(64, diff.abs_ref())).max(floor + log2_f64(&Float::with_val(64, reference.abs_ref())));
    let rel_err = log2_f64(&relative_residual(&value, &reference)).max(floor);
    let round1 = |x: f64| (x * 10.0).round() / 10.0;
    Ok(match out {
        Output::Json => serde_json::to_string_pretty(&json!({
            "function": format!("{func:?}").to_lowercase(),
            "tau": spec.to_string(),
            "value": complex_json(&value, ctx),
            "log2_abs_error": round1(abs_err),
            "log2_relative_error": round1(rel_err),
            "prec_bits": ctx.prec_bits(),
        }))
        .expect("json"),
        Output::Text => format!(
            "{}\nerror ≈ 2^{abs_err:.1} (relative 2^{rel_err:.1})\n",
            complex_text(&value, ctx)
        ),
    })
}

fn report_text(report: &IdentityReport) -> String {
    let mut s = format!(
        "seed {:#x}, prec {} bits, bound 2^{}\n",
        report.seed, report.prec_bits, report.bound_log2
    );
    for r in &report.results {
        let m = r.m.map(|m| format!(" m={m}")).unwrap_or_default();
        s.push_str(&format!(
            "{} {}{m}: max residual 2^{:.1} at τ = {} + {}i\n",
            if r.passed { "ok  " } else { "FAIL" },
            r.name,
            r.max_log2_residual,
            r.worst_tau.0,
            r.worst_tau.1
        ));
    }
    s
}

pub fn cmd_identity_check(ctx: &EvalContext, seed: u64, points: usize, fault: Option<&str>, out: Output) -> Outcome {
    let inject_fault = match fault {
        None => None,
        Some(name) => match Identity::from_name(name) {
            Some(id) => Some(id),
            None => return Outcome::fail(EXIT_USAGE, format!("error: unknown identity {name:?}")),
        },
    };
    let opts = SuiteOptions {
        seed,
        points,
        inject_fault,
    };
    let report = match run_suite(ctx, &opts) {
        Ok(r) => r,
        Err(e) => return from_error(e),
    };
    let body = match out {
        Output::Json => serde_json::to_string_pretty(&report).expect("json"),
        Output::Text => report_text(&report),
    };
    if report.passed() {
        Outcome::ok(body)
    } else {
        let names: Vec<String> = report
            .failures()
            .map(|r| match r.m {
                Some(m) => format!("{} (m={m}) at τ = {} + {}i", r.name, r.worst_tau.0, r.worst_tau.1),
                None => format!("{} at τ = {} + {}i", r.name, r.worst_tau.0, r.worst_tau.1),
            })
            .collect();
        Outcome {
            code: EXIT_IDENTITY,
            stdout: body,
            stderr: format!("identity violated: {}", names.join("; ")),
        }
    }
}

pub fn cmd_conjugates(disc: i64, m: i64, ctx: &EvalContext, out: Output) -> modunit::Result<String> {
    let field = make_field(disc)?;
    let (product, power_taken) = certified_product(m)?;
    let products = conjugate_products(&product, &field)?;
    let cosets = if product.level() >= 2 {
        enumerate_reciprocity(&field, product.level())?.cosets().to_vec()
    } else {
        Vec::new()
    };
    let values = eval_products(&products, &field.theta().to_complex(ctx), ctx)?;
    let rows: Vec<_> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let alpha = cosets
                .get(i)
                .map(|a| a.to_string())
                .unwrap_or_else(|| "identity".into());
            (alpha, v)
        })
        .collect();
    Ok(match out {
        Output::Json => serde_json::to_string_pretty(&json!({
            "disc": disc,
            "m": m,
            "power_taken": power_taken,
            "level": product.level(),
            "conjugates": rows.iter().map(|(a, v)| json!({"alpha": a, "value": complex_json(v, ctx)})).collect::<Vec<_>>(),
            "prec_bits": ctx.prec_bits(),
        }))
        .expect("json"),
        Output::Text => {
            let mut s = format!(
                "x = (√{m}·φ({m}θ)/φ(θ))^{power_taken} over disc {disc}, level {}\n",
                product.level()
            );
            for (i, (a, v)) in rows.iter().enumerate() {
                s.push_str(&format!("x{} (α = {a}) = {}\n", i + 1, complex_text(v, ctx)));
            }
            s
        }
    })
}

pub fn cmd_certify(disc: i64, m: i64, max_retries: u32, ctx: &EvalContext, out: Output) -> modunit::Result<String> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::EvenOrSmallM(m));
    }
    let cert = certify(disc, m, ctx, CertifyOptions { max_retries })?;
    Ok(match out {
        Output::Json => cert.to_json(),
        Output::Text => {
            let mut s = format!(
                "x = (√{m}·φ({m}θ)/φ(θ))^{} ≈ {}\n",
                cert.power_taken,
                complex_text(&cert.value, ctx)
            );
            s.push_str(&format!("minimal polynomial multiple: {}\n", cert.polynomial));
            s.push_str(&format!("algebraic integer: {}\n", cert.is_algebraic_integer));
            if let Some(n) = &cert.divides {
                s.push_str(&format!("divides: {n}\n"));
            }
            s.push_str(&format!("unit: {}\n", cert.is_unit));
            if let Some(h) = &cert.hypothesis {
                let primes: Vec<String> = h
                    .primes
                    .iter()
                    .map(|p| format!("{} {}", p.p, if p.splits { "splits" } else { "does not split" }))
                    .collect();
                s.push_str(&format!("unit hypothesis: {} ({})\n", h.holds, primes.join(", ")));
            }
            match &cert.radical {
                Some(r) => s.push_str(&format!("√{m}·φ({m}θ)/φ(θ) = {r}\n")),
                None => s.push_str("no quadratic radical form\n"),
            }
            s.push_str(&format!("precision: {} bits\n", cert.prec_bits));
            s
        }
    })
}
