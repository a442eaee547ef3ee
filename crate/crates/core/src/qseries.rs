//! Numeric evaluation of η, φ, Δ, j and the Siegel functions g_r from
//! their product expansions, with q = e^{2πiτ}.
//!
//! η carries the normalization √(2π)·e^{πi/4}·q^{1/24}∏(1-qⁿ). All products
//! are multiplied out term by term; the number of factors comes from
//! [`truncation_terms`](crate::numerics::truncation_terms), and the
//! intermediate precision is raised by 2·log₂(T) bits to absorb the
//! rounding of T multiplications.

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::{ensure_finite, ensure_upper, exp_two_pi_i, root_of_unity, EvalContext};
use crate::siegel::SiegelIndex;

/// B₂(x) = x² - x + 1/6.
pub fn bernoulli2(x: &Rational) -> Rational {
    let sq = Rational::from(x * x);
    sq - x + Rational::from((1, 6))
}

fn product_prec(ctx: &EvalContext, terms: usize) -> u32 {
    let log_t = usize::BITS - terms.leading_zeros();
    ctx.working_prec() + 2 * log_t + 8
}

fn abs_of(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

fn scale_tau(tau: &Complex, k: &Rational, prec: u32) -> Complex {
    let k = Float::with_val(prec, k);
    Complex::with_val(prec, tau * k)
}

/// ∏_{n=1}^{T} (1 - qⁿ)
fn euler_product(q: &Complex, terms: usize, prec: u32) -> Complex {
    let mut acc = Complex::with_val(prec, 1);
    let mut qn = Complex::with_val(prec, q);
    for _ in 0..terms {
        acc *= Complex::with_val(prec, 1 - &qn);
        qn *= q;
    }
    acc
}

/// Nome, truncation length and product precision for one evaluation point.
fn setup(tau: &Complex, ctx: &EvalContext, extra_bits: u32) -> Result<(Complex, usize, u32)> {
    ensure_upper(tau)?;
    let coarse = exp_two_pi_i(tau, ctx, 64);
    let terms = ctx.terms_for(&abs_of(&coarse), extra_bits)?;
    let prec = product_prec(ctx, terms);
    let q = exp_two_pi_i(tau, ctx, prec);
    Ok((q, terms, prec))
}

/// q^{1/24} ∏(1 - qⁿ), the eta product without the constant prefactor.
pub fn eta_product(tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    let (q, terms, prec) = setup(tau, ctx, 1)?;
    let q24 = exp_two_pi_i(&scale_tau(tau, &Rational::from((1, 24)), prec), ctx, prec);
    let v = euler_product(&q, terms, prec) * q24;
    ensure_finite(Complex::with_val(ctx.working_prec(), v), "eta")
}

/// η(τ) = √(2π)·e^{πi/4}·q^{1/24}∏(1 - qⁿ).
pub fn eta(tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    let core = eta_product(tau, ctx)?;
    let prefactor = Complex::with_val(ctx.working_prec(), ctx.eighth_root_of_unity() * ctx.sqrt_two_pi());
    ensure_finite(core * prefactor, "eta")
}

/// φ(τ) = ∏(1 + q^{n-1/2})²(1 - qⁿ).
pub fn phi(tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    let (q, terms, prec) = setup(tau, ctx, 2)?;
    let qh = exp_two_pi_i(&scale_tau(tau, &Rational::from((1, 2)), prec), ctx, prec);
    let mut acc = Complex::with_val(prec, 1);
    let mut odd = qh; // q^{n-1/2}
    let mut qn = Complex::with_val(prec, &q);
    for _ in 0..terms {
        let plus = Complex::with_val(prec, 1 + &odd);
        acc *= Complex::with_val(prec, plus.square_ref());
        acc *= Complex::with_val(prec, 1 - &qn);
        odd *= &q;
        qn *= &q;
    }
    ensure_finite(Complex::with_val(ctx.working_prec(), acc), "phi")
}

/// √m·φ(mτ)/φ(τ) for odd m, 2√m·φ(mτ)/φ(τ) for even m.
pub fn phi_ratio(m: i64, tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("m = {m} must be positive")));
    }
    let wp = ctx.working_prec();
    let mt = Complex::with_val(wp, tau * m);
    let num = phi(&mt, ctx)?;
    let den = phi(tau, ctx)?;
    let mut scale = Float::with_val(wp, m).sqrt();
    if m % 2 == 0 {
        scale *= 2u32;
    }
    ensure_finite(num / den * scale, "phi_ratio")
}

/// Δ(τ) = (2π)¹² q ∏(1 - qⁿ)²⁴.
pub fn delta(tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    let (q, terms, prec) = setup(tau, ctx, 6)?;
    let prod = euler_product(&q, terms, prec);
    let prod24 = Complex::with_val(prec, (&prod).pow(24u32));
    let two_pi = Float::with_val(prec, ctx.pi() * 2u32);
    let scale = two_pi.pow(12u32);
    let v = prod24 * q * scale;
    ensure_finite(Complex::with_val(ctx.working_prec(), v), "delta")
}

/// j(τ) = ((η(τ)²⁴ + 2⁸η(2τ)²⁴) / (η(τ)¹⁶η(2τ)⁸))³.
pub fn jfun(tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    ensure_upper(tau)?;
    let inner = EvalContext::new(ctx.prec_bits(), ctx.guard_bits() + 16)?;
    let wp = inner.working_prec();
    let e1 = eta(tau, &inner)?;
    let tau2 = Complex::with_val(wp, tau * 2u32);
    let e2 = eta(&tau2, &inner)?;
    let e1_8 = Complex::with_val(wp, (&e1).pow(8u32));
    let e2_8 = Complex::with_val(wp, (&e2).pow(8u32));
    let e1_16 = Complex::with_val(wp, e1_8.square_ref());
    let e1_24 = Complex::with_val(wp, &e1_16 * &e1_8);
    let e2_24 = Complex::with_val(wp, (&e2_8).pow(3u32));
    let num = e1_24 + e2_24 * 256u32;
    let den = e1_16 * e2_8;
    let ratio = num / den;
    let v = ratio.pow(3u32);
    ensure_finite(Complex::with_val(ctx.working_prec(), v), "j")
}

/// The Siegel function
/// g_r(τ) = -q^{B₂(r₁)/2} e^{πi r₂(r₁-1)} (1 - q_z) ∏(1 - qⁿq_z)(1 - qⁿ/q_z),
/// z = r₁τ + r₂, evaluated literally for the given (unreduced) index.
pub fn siegel(r: &SiegelIndex, tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    ensure_upper(tau)?;
    let shift = r.r1().clone().abs().ceil();
    let shift = shift.numer().to_usize().unwrap_or(usize::MAX / 4);
    let coarse = exp_two_pi_i(tau, ctx, 64);
    let base_terms = ctx.terms_for(&abs_of(&coarse), 2)?;
    let terms = if ctx.max_terms().is_some() {
        base_terms
    } else {
        base_terms + 1 + shift
    };
    let prec = product_prec(ctx, terms);
    let q = exp_two_pi_i(tau, ctx, prec);

    let r1 = Float::with_val(prec, r.r1());
    let r2 = Float::with_val(prec, r.r2());
    let z = Complex::with_val(prec, tau * &r1) + &r2;
    let qz = exp_two_pi_i(&z, ctx, prec);
    let qz_inv = Complex::with_val(prec, qz.recip_ref());

    let half_b2 = bernoulli2(r.r1()) / 2u32;
    let lead = exp_two_pi_i(&scale_tau(tau, &half_b2, prec), ctx, prec);
    // e^{πi r₂(r₁-1)} = e^{2πi·r₂(r₁-1)/2}
    let twist = Rational::from(r.r1() - 1u32) * r.r2() / 2u32;
    let twist = root_of_unity(&twist, prec);

    let mut acc = Complex::with_val(prec, 1 - &qz);
    let mut qn = Complex::with_val(prec, &q);
    for _ in 0..terms {
        acc *= Complex::with_val(prec, 1 - Complex::with_val(prec, &qn * &qz));
        acc *= Complex::with_val(prec, 1 - Complex::with_val(prec, &qn * &qz_inv));
        qn *= &q;
    }
    let v = -(acc * lead * twist);
    let v = ensure_finite(Complex::with_val(ctx.working_prec(), v), "siegel")?;
    if v.real().is_zero() && v.imag().is_zero() {
        return Err(Error::NumericalZero);
    }
    Ok(v)
}
