//! End-to-end certification of x = (√m·φ(mθ_K)/φ(θ_K))^{2e}, e the
//! Galois-stable power of the squared ratio's Siegel product.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Complex, Integer};

use crate::classfield::{
    class_number, conjugate_products, make_field, prime_split_status, unit_theorem_hypothesis, QuadField,
};
use crate::error::{Error, Result};
use crate::numerics::{int_pow, log2_f64, relative_residual, EvalContext};
use crate::qseries::phi_ratio;
use crate::recognition::{
    build_polynomial, certify_algebraic_integer, certify_divides, certify_unit, quadratic_radicand, simplify_radical,
    AlgebraicCertificate, HypothesisReport, IntPolynomial, PrimeSplit,
};
use crate::siegel::{eval_product, eval_products, galois_stable_power, phi_ratio_squared_product, SiegelProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Precision doublings allowed after the first attempt.
    pub max_retries: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { max_retries: 2 }
    }
}

/// The formal product for x together with the exponent 2e it represents.
pub fn certified_product(m: i64) -> Result<(SiegelProduct, u64)> {
    let squared = phi_ratio_squared_product(m)?;
    let e = galois_stable_power(&squared);
    let exp = i64::try_from(e).map_err(|_| Error::InvalidArgument(format!("stable power {e} too large")))?;
    Ok((squared.pow(exp), 2 * e))
}

pub fn hypothesis_report(m: i64, field: &QuadField) -> HypothesisReport {
    let primes = if m >= 1 {
        prime_split_status(m as u64, field)
            .into_iter()
            .map(|(p, splits)| PrimeSplit { p, splits })
            .collect()
    } else {
        Vec::new()
    };
    HypothesisReport {
        disc: field.disc(),
        m,
        m_odd: m % 2 != 0,
        primes,
        holds: unit_theorem_hypothesis(m, field),
        class_number: class_number(field),
    }
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::CoefficientTooLarge { .. } | Error::CoefficientNotNearInteger { .. } | Error::ResidualTooLarge { .. }
    )
}

/// Integer polynomial vanishing at every conjugate. When the conjugates'
/// symmetric functions are non-real (they lie in K, class number one),
/// the list is closed under complex conjugation, which takes the norm to Q.
fn polynomial_over_q(xs: &[Complex], field: &QuadField, ctx: &EvalContext) -> Result<IntPolynomial> {
    match build_polynomial(xs, ctx) {
        Err(Error::ImaginaryResidue { index, magnitude }) => {
            let h = class_number(field);
            if h != 1 {
                return Err(Error::CertificationFailure(format!(
                    "coefficient {index} is non-real ({magnitude}) and class number {h} > 1"
                )));
            }
            let mut closed = xs.to_vec();
            closed.extend(xs.iter().map(|x| Complex::with_val(x.prec(), x.conj_ref())));
            build_polynomial(&closed, ctx)
        }
        other => other,
    }
}

/// Distinct conjugate products (r and -r identified) and the common number
/// of cosets giving each. The orbit of an abelian group action has equal
/// stabilizers, so the multiset of conjugates is the distinct list
/// repeated `multiplicity` times.
pub fn conjugate_classes(product: &SiegelProduct, field: &QuadField) -> Result<(Vec<SiegelProduct>, u32)> {
    let all = conjugate_products(product, field)?;
    let mut counts: BTreeMap<SiegelProduct, u32> = BTreeMap::new();
    let mut distinct = Vec::new();
    for p in &all {
        let slot = counts.entry(p.merged()).or_insert(0);
        if *slot == 0 {
            distinct.push(p.clone());
        }
        *slot += 1;
    }
    let k = counts.values().next().copied().unwrap_or(1);
    if counts.values().any(|&c| c != k) {
        return Err(Error::CertificationFailure(
            "conjugate classes have unequal sizes".into(),
        ));
    }
    Ok((distinct, k))
}

/// Groups conjugate values agreeing to half the working precision. Galois
/// conjugates form one orbit of an abelian group, so the groups must have
/// equal sizes; the caller re-verifies the resulting polynomial exactly.
pub fn value_classes(values: &[Complex], ctx: &EvalContext) -> Result<(Vec<Complex>, u32)> {
    let bound = -(ctx.prec_bits() as f64) / 2.0;
    let mut reps: Vec<Complex> = Vec::new();
    let mut counts: Vec<u32> = Vec::new();
    for v in values {
        match reps.iter().position(|r| log2_f64(&relative_residual(v, r)) < bound) {
            Some(i) => counts[i] += 1,
            None => {
                reps.push(v.clone());
                counts.push(1);
            }
        }
    }
    let k = counts.first().copied().unwrap_or(1);
    if counts.iter().any(|&c| c != k) {
        return Err(Error::CertificationFailure(
            "conjugate values cluster into unequal classes".into(),
        ));
    }
    Ok((reps, k))
}

fn attempt(
    field: &QuadField,
    m: i64,
    product: &SiegelProduct,
    power_taken: u64,
    ctx: &EvalContext,
) -> Result<AlgebraicCertificate> {
    let theta = field.theta().to_complex(ctx);
    let x = eval_product(product, &theta, ctx)?;

    let exp = u32::try_from(power_taken).map_err(|_| Error::InvalidArgument("power too large".into()))?;
    let direct = Complex::with_val(ctx.working_prec(), phi_ratio(m, &theta, ctx)?.pow(exp));
    let res = log2_f64(&relative_residual(&x, &direct));
    if res >= -(ctx.prec_bits() as f64) + 16.0 {
        return Err(Error::CertificationFailure(format!(
            "Siegel product disagrees with the direct ratio (relative residual 2^{res:.1})"
        )));
    }

    let (distinct, sym_mult) = conjugate_classes(product, field)?;
    let values = eval_products(&distinct, &theta, ctx)?;
    let (xs, num_mult) = value_classes(&values, ctx)?;
    let poly = polynomial_over_q(&xs, field, ctx)?.pow(sym_mult * num_mult);

    let target = int_pow(m, exp / 2);
    if !certify_divides(&poly, &target)? {
        return Err(Error::CertificationFailure(format!("x does not divide {target}")));
    }
    let is_unit = certify_unit(&poly);
    let hypothesis = hypothesis_report(m, field);
    if hypothesis.holds && !is_unit {
        return Err(Error::CertificationFailure(
            "unit hypothesis holds but the constant term is not ±1".into(),
        ));
    }

    let radical = match quadratic_radicand(&poly) {
        Ok(Some(d)) => simplify_radical(&x, &poly, power_taken, d)?,
        Ok(None) => simplify_radical(&x, &poly, power_taken, 1)?,
        Err(_) => None,
    };

    Ok(AlgebraicCertificate {
        value: x,
        power_taken,
        is_algebraic_integer: certify_algebraic_integer(&poly),
        divides: Some(Integer::from(&target)),
        is_unit,
        radical,
        polynomial: poly,
        prec_bits: ctx.prec_bits(),
        hypothesis: Some(hypothesis),
    })
}

/// Certificate for x = (√m·φ(mθ_K)/φ(θ_K))^{power_taken}, doubling the
/// precision while coefficients are not yet resolved.
pub fn certify(disc: i64, m: i64, ctx: &EvalContext, opts: CertifyOptions) -> Result<AlgebraicCertificate> {
    let field = make_field(disc)?;
    let (product, power_taken) = certified_product(m)?;
    let mut ctx = ctx.clone();
    let mut last = None;
    for round in 0..=opts.max_retries {
        match attempt(&field, m, &product, power_taken, &ctx) {
            Ok(cert) => return Ok(cert),
            Err(e) if retryable(&e) => {
                last = Some(e);
                if round < opts.max_retries {
                    ctx = ctx.doubled()?;
                }
            }
            Err(e) => return Err(e),
        }
    }
    let why = last.map(|e| e.to_string()).unwrap_or_default();
    Err(Error::CertificationFailure(format!(
        "precision exhausted at {} bits after {} retries: {why}",
        ctx.prec_bits(),
        opts.max_retries
    )))
}
