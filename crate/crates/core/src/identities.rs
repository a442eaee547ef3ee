//! Numeric checks of the product identities relating φ, η and the Siegel
//! functions, at seeded random points of the upper half-plane.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::Serialize;

use crate::error::Result;
use crate::numerics::{log2_f64, relative_residual, to_decimal_string, EvalContext};
use crate::qseries::{eta, phi, siegel};
use crate::siegel::SiegelIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// φ = -η·g_{(1/2,1/2)}/√(2π)
    PhiEtaSiegel,
    /// g_{(0,1/2)} g_{(1/2,0)} g_{(1/2,1/2)} = 2e^{πi/4}
    HalfPeriodProduct,
    /// g_{(1/2,1/2)}(mτ)/g_{(1/2,1/2)}(τ) = (-1)^{(m-1)/2} ∏ g_{(1/2,1/2+k/m)}(τ)
    HalfPeriodMultiplication,
    /// ∏_{(a,b)≠0} g_{(a/m,b/m)}^{12m} = m^{12m}
    TorsionProduct,
    /// ∏ g_{(0,k/m)} = i^{m-1}(√m·η(mτ)/η(τ))²
    EtaQuotientProduct,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::PhiEtaSiegel,
        Identity::HalfPeriodProduct,
        Identity::HalfPeriodMultiplication,
        Identity::TorsionProduct,
        Identity::EtaQuotientProduct,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::PhiEtaSiegel => "phi-eta-siegel",
            Identity::HalfPeriodProduct => "half-period-product",
            Identity::HalfPeriodMultiplication => "half-period-multiplication",
            Identity::TorsionProduct => "torsion-product",
            Identity::EtaQuotientProduct => "eta-quotient-product",
        }
    }

    pub fn from_name(s: &str) -> Option<Identity> {
        Identity::ALL.into_iter().find(|i| i.name() == s)
    }

    /// Values of m each identity is checked for (none for m-free ones).
    pub fn parameters(&self) -> Vec<Option<i64>> {
        match self {
            Identity::PhiEtaSiegel | Identity::HalfPeriodProduct => vec![None],
            Identity::HalfPeriodMultiplication => vec![Some(3), Some(5), Some(7)],
            Identity::TorsionProduct => vec![Some(2), Some(3)],
            Identity::EtaQuotientProduct => (2..=7).map(Some).collect(),
        }
    }

    /// (left side, right side) at τ.
    pub fn sides(&self, m: Option<i64>, tau: &Complex, ctx: &EvalContext) -> Result<(Complex, Complex)> {
        let wp = ctx.working_prec();
        let g = |n1, d1, n2, d2| -> Result<Complex> { siegel(&SiegelIndex::frac(n1, d1, n2, d2)?, tau, ctx) };
        let m = m.unwrap_or(1);
        Ok(match self {
            Identity::PhiEtaSiegel => {
                let rhs = -(eta(tau, ctx)? * g(1, 2, 1, 2)?) / ctx.sqrt_two_pi();
                (phi(tau, ctx)?, rhs)
            }
            Identity::HalfPeriodProduct => {
                let lhs = g(0, 1, 1, 2)? * g(1, 2, 0, 1)? * g(1, 2, 1, 2)?;
                (lhs, Complex::with_val(wp, ctx.eighth_root_of_unity() * 2u32))
            }
            Identity::HalfPeriodMultiplication => {
                let half = SiegelIndex::frac(1, 2, 1, 2)?;
                let mt = Complex::with_val(wp, tau * m);
                let lhs = siegel(&half, &mt, ctx)? / g(1, 2, 1, 2)?;
                let mut rhs = Complex::with_val(wp, if (m - 1) / 2 % 2 == 0 { 1 } else { -1 });
                for k in 1..m {
                    // 1/2 + k/m = (m + 2k) / 2m
                    rhs *= g(1, 2, m + 2 * k, 2 * m)?;
                }
                (lhs, rhs)
            }
            Identity::TorsionProduct => {
                let e = i32::try_from(12 * m).expect("small m");
                let mut lhs = Complex::with_val(wp, 1);
                for a in 0..m {
                    for b in 0..m {
                        if (a, b) != (0, 0) {
                            lhs *= g(a, m, b, m)?.pow(e);
                        }
                    }
                }
                let rhs = Complex::with_val(wp, Float::with_val(wp, m).pow(e));
                (lhs, rhs)
            }
            Identity::EtaQuotientProduct => {
                let mut lhs = Complex::with_val(wp, 1);
                for k in 1..m {
                    lhs *= g(0, 1, k, m)?;
                }
                let mt = Complex::with_val(wp, tau * m);
                let ratio = eta(&mt, ctx)? / eta(tau, ctx)? * Float::with_val(wp, m).sqrt();
                let i_pow = match (m - 1).rem_euclid(4) {
                    0 => (1, 0),
                    1 => (0, 1),
                    2 => (-1, 0),
                    _ => (0, -1),
                };
                let rhs = ratio.square() * Complex::with_val(wp, i_pow);
                (lhs, rhs)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub identity: Identity,
    pub name: &'static str,
    pub m: Option<i64>,
    pub points: usize,
    /// log₂ of the largest relative residual seen.
    pub max_log2_residual: f64,
    pub worst_tau: (String, String),
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub prec_bits: u32,
    pub bound_log2: f64,
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub points: usize,
    /// Negates the left side of this identity (negative control).
    pub inject_fault: Option<Identity>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0x5eed,
            points: 20,
            inject_fault: None,
        }
    }
}

/// Random τ with Re τ ∈ [-1/2, 1/2), Im τ ∈ [1/2, 3).
pub fn random_points(seed: u64, count: usize, ctx: &EvalContext) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let re: f64 = rng.gen_range(-0.5..0.5);
            let im: f64 = rng.gen_range(0.5..3.0);
            Complex::with_val(ctx.working_prec(), (re, im))
        })
        .collect()
}

pub fn run_suite(ctx: &EvalContext, opts: &SuiteOptions) -> Result<IdentityReport> {
    let bound = -(ctx.prec_bits() as f64) + 16.0;
    let points = random_points(opts.seed, opts.points, ctx);
    let mut results = Vec::new();
    for id in Identity::ALL {
        for m in id.parameters() {
            let mut worst = f64::NEG_INFINITY;
            let mut worst_tau = (String::new(), String::new());
            for tau in &points {
                let (mut lhs, rhs) = id.sides(m, tau, ctx)?;
                if opts.inject_fault == Some(id) {
                    lhs = -lhs;
                }
                let r = log2_f64(&relative_residual(&lhs, &rhs));
                if r > worst || worst_tau.0.is_empty() {
                    worst = r;
                    worst_tau = (to_decimal_string(tau.real(), 17), to_decimal_string(tau.imag(), 17));
                }
            }
            results.push(IdentityResult {
                identity: id,
                name: id.name(),
                m,
                points: points.len(),
                max_log2_residual: worst,
                worst_tau,
                passed: worst < bound,
            });
        }
    }
    Ok(IdentityReport {
        seed: opts.seed,
        prec_bits: ctx.prec_bits(),
        bound_log2: bound,
        results,
    })
}
