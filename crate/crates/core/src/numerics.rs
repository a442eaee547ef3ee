//! Precision control and the small amount of big-float plumbing shared by
//! every evaluator.
//!
//! Values are carried as [`rug::Complex`] at the context's working precision
//! (`prec_bits + guard_bits`). Truncation lengths for the q-products come
//! from an analytic geometric tail bound ([`truncation_terms`]); no interval
//! arithmetic is used.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

pub type BigComplex = Complex;
pub type BigReal = Float;

pub const DEFAULT_PREC_BITS: u32 = 256;
pub const DEFAULT_GUARD_BITS: u32 = 32;
pub const MIN_PREC_BITS: u32 = 64;

/// Constants reused by every evaluation at one precision.
#[derive(Debug)]
struct Constants {
    pi: Float,
    sqrt_two_pi: Float,
    /// e^{πi/4}
    eighth_root: Complex,
}

/// Working precision, guard bits and truncation policy.
///
/// Cloning is cheap: the transcendental constants are shared.
#[derive(Clone, Debug)]
pub struct EvalContext {
    prec_bits: u32,
    guard_bits: u32,
    max_terms: Option<usize>,
    consts: Arc<Constants>,
}

impl EvalContext {
    pub fn new(prec_bits: u32, guard_bits: u32) -> Result<Self> {
        if prec_bits < MIN_PREC_BITS {
            return Err(Error::InvalidPrecision(format!(
                "prec_bits = {prec_bits} is below the minimum of {MIN_PREC_BITS}"
            )));
        }
        if guard_bits == 0 || guard_bits >= prec_bits {
            return Err(Error::InvalidPrecision(format!(
                "guard_bits = {guard_bits} must be positive and below prec_bits = {prec_bits}"
            )));
        }
        let wp = prec_bits + guard_bits + 16;
        let pi = Float::with_val(wp, Constant::Pi);
        let sqrt_two_pi = Float::with_val(wp, &pi * 2u32).sqrt();
        let eighth_root = root_of_unity(&Rational::from((1, 8)), wp);
        Ok(EvalContext {
            prec_bits,
            guard_bits,
            max_terms: None,
            consts: Arc::new(Constants {
                pi,
                sqrt_two_pi,
                eighth_root,
            }),
        })
    }

    /// Fixes the q-product length instead of deriving it from the tail bound.
    pub fn with_max_terms(mut self, terms: usize) -> Self {
        self.max_terms = Some(terms.max(1));
        self
    }

    pub fn prec_bits(&self) -> u32 {
        self.prec_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    pub fn max_terms(&self) -> Option<usize> {
        self.max_terms
    }

    /// Mantissa precision used for intermediate values.
    pub fn working_prec(&self) -> u32 {
        self.prec_bits + self.guard_bits
    }

    /// Same guard and truncation policy at twice the precision.
    pub fn doubled(&self) -> Result<Self> {
        let mut next = EvalContext::new(self.prec_bits * 2, self.guard_bits)?;
        next.max_terms = self.max_terms;
        Ok(next)
    }

    pub fn pi(&self) -> &Float {
        &self.consts.pi
    }

    pub fn sqrt_two_pi(&self) -> &Float {
        &self.consts.sqrt_two_pi
    }

    pub fn eighth_root_of_unity(&self) -> &Complex {
        &self.consts.eighth_root
    }

    /// Number of q-product factors needed for a tail below 2^{-extra_target}
    /// relative to the working precision.
    pub(crate) fn terms_for(&self, abs_q: &Float, extra_bits: u32) -> Result<usize> {
        match self.max_terms {
            Some(t) => Ok(t),
            None => truncation_terms(abs_q, self.working_prec() + extra_bits),
        }
    }
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext::new(DEFAULT_PREC_BITS, DEFAULT_GUARD_BITS).expect("default precision is valid")
    }
}

/// e^{2πik} for exact rational k.
pub fn root_of_unity(k: &Rational, prec: u32) -> Complex {
    // reduce mod 1 first so the angle stays small
    let frac = k.clone() - k.clone().floor();
    let pi = Float::with_val(prec + 8, Constant::Pi);
    let angle = Float::with_val(prec + 8, &pi * 2u32) * Float::with_val(prec + 8, &frac);
    let (s, c) = angle.sin_cos(Float::new(prec + 8));
    Complex::with_val(prec, (c, s))
}

/// exp(2πi·x) at precision `prec`.
pub fn exp_two_pi_i(x: &Complex, ctx: &EvalContext, prec: u32) -> Complex {
    let two_pi = Float::with_val(prec, ctx.pi() * 2u32);
    let i_two_pi = Complex::with_val(prec, (0, two_pi));
    let arg = Complex::with_val(prec, x * &i_two_pi);
    arg.exp()
}

/// A point (p + q√D)/r of the upper half-plane with D < 0, stored in
/// canonical form: gcd(p, q, r) = 1 and r > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticPoint {
    d: i64,
    p: i64,
    q: i64,
    r: i64,
}

impl QuadraticPoint {
    pub fn new(d: i64, p: i64, q: i64, r: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::Parse(format!("radicand D = {d} must be negative")));
        }
        if r == 0 {
            return Err(Error::Parse("denominator r must be nonzero".into()));
        }
        let (mut p, mut q, mut r) = (p, q, r);
        if r < 0 {
            let overflow = || Error::Parse("point coordinates out of range".into());
            p = p.checked_neg().ok_or_else(overflow)?;
            q = q.checked_neg().ok_or_else(overflow)?;
            r = r.checked_neg().ok_or_else(overflow)?;
        }
        if q <= 0 {
            return Err(Error::NonPositiveImaginaryPart);
        }
        let g = gcd_i64(gcd_i64(p, q), r);
        Ok(QuadraticPoint {
            d,
            p: p / g,
            q: q / g,
            r: r / g,
        })
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn parts(&self) -> (i64, i64, i64) {
        (self.p, self.q, self.r)
    }

    /// `(p + q·√|D|·i) / r` at the working precision.
    pub fn to_complex(&self, ctx: &EvalContext) -> Complex {
        let wp = ctx.working_prec();
        let root = Float::with_val(wp, self.d.unsigned_abs()).sqrt();
        let re = Float::with_val(wp, self.p) / self.r;
        let im = root * self.q / self.r;
        Complex::with_val(wp, (re, im))
    }
}

impl fmt::Display for QuadraticPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quad:{}:{},{},{}", self.d, self.p, self.q, self.r)
    }
}

impl FromStr for QuadraticPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rest = s
            .strip_prefix("quad:")
            .ok_or_else(|| Error::Parse(format!("expected `quad:D:p,q,r`, got {s:?}")))?;
        let (d, pqr) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing `:` after D in {s:?}")))?;
        let d = parse_i64(d)?;
        let parts: Vec<&str> = pqr.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three integers p,q,r in {s:?}")));
        }
        QuadraticPoint::new(d, parse_i64(parts[0])?, parse_i64(parts[1])?, parse_i64(parts[2])?)
    }
}

/// A point of the upper half-plane as given on the command line: either an
/// exact quadratic point or a decimal complex number `c:<re>,<im>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauSpec {
    Quadratic(QuadraticPoint),
    Decimal { re: String, im: String },
}

impl TauSpec {
    pub fn to_complex(&self, ctx: &EvalContext) -> Result<Complex> {
        match self {
            TauSpec::Quadratic(pt) => Ok(pt.to_complex(ctx)),
            TauSpec::Decimal { re, im } => {
                let wp = ctx.working_prec();
                let re = parse_float(re, wp)?;
                let im = parse_float(im, wp)?;
                let z = Complex::with_val(wp, (re, im));
                ensure_upper(&z)?;
                Ok(z)
            }
        }
    }
}

impl fmt::Display for TauSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauSpec::Quadratic(pt) => pt.fmt(f),
            TauSpec::Decimal { re, im } => write!(f, "c:{re},{im}"),
        }
    }
}

impl FromStr for TauSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.starts_with("quad:") {
            return s.parse().map(TauSpec::Quadratic);
        }
        let rest = s
            .strip_prefix("c:")
            .ok_or_else(|| Error::Parse(format!("expected `quad:D:p,q,r` or `c:re,im`, got {s:?}")))?;
        let (re, im) = rest
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `c:re,im`, got {s:?}")))?;
        let (re, im) = (re.trim(), im.trim());
        // validate now so that bad input fails at parse time
        parse_float(re, 64)?;
        let im_val = parse_float(im, 64)?;
        if im_val <= 0 {
            return Err(Error::NonPositiveImaginaryPart);
        }
        Ok(TauSpec::Decimal {
            re: re.to_string(),
            im: im.to_string(),
        })
    }
}

fn parse_i64(s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

fn parse_float(s: &str, prec: u32) -> Result<Float> {
    let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("bad decimal {s:?}: {e}")))?;
    let f = Float::with_val(prec, parsed);
    if !f.is_finite() {
        return Err(Error::Parse(format!("decimal {s:?} is not finite")));
    }
    Ok(f)
}

pub(crate) fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1) as i64
}

pub fn ensure_upper(tau: &Complex) -> Result<()> {
    if !tau.real().is_finite() || !tau.imag().is_finite() {
        return Err(Error::NonFinite("input point"));
    }
    if *tau.imag() <= 0 {
        return Err(Error::NonPositiveImaginaryPart);
    }
    Ok(())
}

pub(crate) fn ensure_finite(z: Complex, what: &'static str) -> Result<Complex> {
    if z.real().is_finite() && z.imag().is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// The nome q = e^{2πiτ}.
pub fn nome(tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    ensure_upper(tau)?;
    let q = exp_two_pi_i(tau, ctx, ctx.working_prec());
    ensure_finite(q, "nome")
}

/// Smallest T ≥ 1 with Σ_{n>T} |q|^{n-1/2} / (1-|q|) < 2^{-target_bits}.
///
/// The sum is geometric, so the condition reads
/// |q|^{T+1/2} / (1-|q|)^2 < 2^{-target_bits}.
pub fn truncation_terms(abs_q: &Float, target_bits: u32) -> Result<usize> {
    if abs_q.is_nan() || *abs_q < 0 {
        return Err(Error::NonFinite("|q|"));
    }
    if *abs_q == 0 {
        return Ok(1);
    }
    let one_minus = Float::with_val(abs_q.prec().max(64), 1u32 - abs_q);
    let limit = Float::with_val(64, Float::i_exp(1, -((target_bits / 2) as i32)));
    if one_minus <= limit {
        return Err(Error::QTooCloseToOne { target_bits });
    }
    // -log2|q| and -log2(1-|q|); both positive and finite here
    let neg_log_q = -Float::with_val(64, abs_q.log2_ref()).to_f64();
    let neg_log_gap = -Float::with_val(64, one_minus.log2_ref()).to_f64();
    let need = f64::from(target_bits) + 2.0 * neg_log_gap;
    let tail_ok = |t: f64| (t + 0.5) * neg_log_q > need;
    let mut t = ((need / neg_log_q) - 0.5).floor().max(0.0) + 1.0;
    // step back if the f64 estimate overshot, forward if it undershot
    while t > 1.0 && tail_ok(t - 1.0) {
        t -= 1.0;
    }
    while !tail_ok(t) {
        t += 1.0;
    }
    if !t.is_finite() || t > 1e9 {
        return Err(Error::QTooCloseToOne { target_bits });
    }
    Ok(t.max(1.0) as usize)
}

/// |a - b| / |b|, or |a| when b = 0.
pub fn relative_residual(a: &Complex, b: &Complex) -> Float {
    let prec = a.prec().0.max(b.prec().0);
    let diff = Complex::with_val(prec, a - b);
    let num = Float::with_val(prec, diff.abs_ref());
    let den = Float::with_val(prec, b.abs_ref());
    if den == 0 {
        num
    } else {
        num / den
    }
}

/// log2 of a nonnegative float as f64; -inf for zero.
pub fn log2_f64(x: &Float) -> f64 {
    if *x == 0 {
        f64::NEG_INFINITY
    } else {
        Float::with_val(64, x.log2_ref()).to_f64()
    }
}

/// 2^{exp} as a float of precision `prec`.
pub fn pow2(exp: i32, prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, exp))
}

/// Number of decimal digits carried by `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    ((f64::from(bits) * std::f64::consts::LOG10_2).floor() as usize).max(1)
}

/// Positional decimal rendering of `x` with `digits` significant digits.
pub fn to_decimal_string(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = x.to_string_radix(10, Some(digits.max(1)));
    let (neg, body) = match sci.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, sci.as_str()),
    };
    let (mant, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let all: String = format!("{int_part}{frac_part}");
    // value = 0.all × 10^{point}
    let point = int_part.len() as i64 + exp;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&all);
    } else if point as usize >= all.len() {
        out.push_str(&all);
        out.extend(std::iter::repeat_n('0', point as usize - all.len()));
    } else {
        out.push_str(&all[..point as usize]);
        out.push('.');
        out.push_str(&all[point as usize..]);
    }
    trim_fraction(out)
}

fn trim_fraction(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Nearest integer to a finite float.
pub fn round_to_integer(x: &Float) -> Integer {
    let r = Float::with_val(x.prec(), x.round_ref());
    r.to_integer().unwrap_or_default()
}

/// (a + b·√d)^e over Z[√d], exact.
pub fn quadratic_pow(a: &Integer, b: &Integer, d: &Integer, e: u32) -> (Integer, Integer) {
    let mut acc = (Integer::from(1), Integer::new());
    let mut base = (a.clone(), b.clone());
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = quadratic_mul(&acc, &base, d);
        }
        base = quadratic_mul(&base, &base, d);
        k >>= 1;
    }
    acc
}

fn quadratic_mul(x: &(Integer, Integer), y: &(Integer, Integer), d: &Integer) -> (Integer, Integer) {
    let re = Integer::from(&x.0 * &y.0) + Integer::from(&x.1 * &y.1) * d;
    let im = Integer::from(&x.0 * &y.1) + Integer::from(&x.1 * &y.0);
    (re, im)
}

/// m^e for small m.
pub fn int_pow(m: i64, e: u32) -> Integer {
    Integer::from(m).pow(e)
}
