//! From numerical conjugates to exact statements: the integer polynomial
//! ∏(X - x_k), divisibility and unit tests on it, and closed forms
//! (a + b√d)^{1/n} for values whose polynomial is a power of a quadratic.

use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{decimal_digits, log2_f64, quadratic_pow, round_to_integer, to_decimal_string, EvalContext};

/// Integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Integer::new());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == 1)
    }

    pub fn constant(&self) -> &Integer {
        &self.coeffs[0]
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        IntPolynomial::new(out)
    }

    pub fn pow(&self, k: u32) -> IntPolynomial {
        let mut acc = IntPolynomial::from_i64(&[1]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horner evaluation at precision `prec`.
    pub fn eval(&self, x: &Complex, prec: u32) -> Complex {
        let mut acc = Complex::with_val(prec, 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Σ|a_i|·|x|^i, the scale against which evaluation residuals are judged.
    pub fn eval_scale(&self, x: &Complex, prec: u32) -> Float {
        let ax = Float::with_val(prec, x.abs_ref());
        let mut acc = Float::with_val(prec, 0);
        for c in self.coeffs.iter().rev() {
            acc *= &ax;
            acc += Integer::from(c.abs_ref());
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(Integer::to_string).collect()
    }

    pub fn from_strings(items: &[String]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| {
                s.parse::<Integer>()
                    .map_err(|_| Error::Parse(format!("bad integer coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        Ok(IntPolynomial::new(coeffs))
    }

    pub fn max_coeff_bits(&self) -> u32 {
        self.coeffs.iter().map(|c| c.significant_bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(first && i == 0) {
                continue;
            }
            let neg = *c < 0;
            let mag = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = mag != 1 || i == 0;
            match (show_coeff, i) {
                (true, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}*X")?,
                (true, _) => write!(f, "{mag}*X^{i}")?,
                (false, 1) => write!(f, "X")?,
                (false, _) => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Expands ∏(X - x_k), rounds every coefficient to an integer and checks
/// that the rounded polynomial still vanishes at each x_k.
pub fn build_polynomial(conjugates: &[Complex], ctx: &EvalContext) -> Result<IntPolynomial> {
    if conjugates.is_empty() {
        return Err(Error::EmptyConjugates);
    }
    let deg = conjugates.len();
    let log_d = usize::BITS - deg.leading_zeros();
    let wp = ctx.working_prec() + 2 * log_d + 8;

    let mut poly = vec![Complex::with_val(wp, 1)];
    for x in conjugates {
        let mut next = vec![Complex::with_val(wp, 0); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= Complex::with_val(wp, c * x);
        }
        poly = next;
    }

    let guard = ctx.guard_bits() as i32;
    let tol = Float::with_val(wp, Float::i_exp(1, -2 * guard));
    let limit = ctx.prec_bits().saturating_sub(2 * ctx.guard_bits());
    let mut coeffs = Vec::with_capacity(poly.len());
    for (index, c) in poly.iter().enumerate() {
        let n = round_to_integer(c.real());
        let bits = n.significant_bits();
        if bits > limit {
            return Err(Error::CoefficientTooLarge { index, bits, limit });
        }
        let im = Float::with_val(wp, c.imag().abs_ref());
        if im > tol {
            return Err(Error::ImaginaryResidue {
                index,
                magnitude: to_decimal_string(&im, 6),
            });
        }
        let dist = Float::with_val(wp, c.real() - &n).abs();
        if dist > tol {
            return Err(Error::CoefficientNotNearInteger {
                index,
                distance: to_decimal_string(&dist, 6),
            });
        }
        coeffs.push(n);
    }
    let p = IntPolynomial::new(coeffs);

    let bound = -(ctx.prec_bits() as f64) + 16.0;
    for (index, x) in conjugates.iter().enumerate() {
        let v = p.eval(x, wp);
        let scale = p.eval_scale(x, wp);
        let rel = Float::with_val(wp, v.abs_ref()) / scale;
        let lr = log2_f64(&rel);
        if lr >= bound {
            return Err(Error::ResidualTooLarge {
                index,
                log2_residual: lr.ceil() as i64,
            });
        }
    }
    Ok(p)
}

/// Monic with integer coefficients.
pub fn certify_algebraic_integer(p: &IntPolynomial) -> bool {
    p.is_monic()
}

/// For a root x of the monic polynomial p = Σ a_i X^i, decides whether n/x
/// is an algebraic integer: its polynomial Σ a_i n^i Y^{d-i} / a_0 must
/// have integer coefficients, i.e. a_0 | a_i n^i for every i.
pub fn certify_divides(p: &IntPolynomial, n: &Integer) -> Result<bool> {
    let a0 = p.constant();
    if a0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if n.is_zero() || !p.is_monic() {
        return Ok(false);
    }
    let mut npow = Integer::from(1);
    for a in &p.coeffs[1..] {
        npow *= n;
        let t = Integer::from(a * &npow);
        if !t.is_divisible(a0) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn certify_unit(p: &IntPolynomial) -> bool {
    p.is_monic() && Integer::from(p.constant().abs_ref()) == 1
}

/// (a', b') with (a' + b'√d)^e = a + b√d exactly, if such integers exist.
pub fn pth_power_in_quadratic(a: &Integer, b: &Integer, d: &Integer, e: u32) -> Option<(Integer, Integer)> {
    if e == 0 || *d <= 0 {
        return None;
    }
    if e == 1 {
        return Some((a.clone(), b.clone()));
    }
    let bits = a.significant_bits().max(b.significant_bits()) + d.significant_bits() + 64;
    let sd = Float::with_val(bits, d).sqrt();
    let bsd = Float::with_val(bits, b * &sd);
    let x = Float::with_val(bits, a + &bsd);
    let xc = Float::with_val(bits, a - &bsd);
    if x <= 0 {
        return None;
    }
    let root = |v: &Float| -> Option<Float> {
        let mag = Float::with_val(bits, v.abs_ref()).pow(Float::with_val(bits, e).recip());
        if *v < 0 {
            if e.is_multiple_of(2) {
                None
            } else {
                Some(-mag)
            }
        } else {
            Some(mag)
        }
    };
    let y = root(&x)?;
    let yc = root(&xc)?;
    let mut candidates = vec![yc.clone()];
    if e.is_multiple_of(2) {
        candidates.push(-yc);
    }
    let target = (a.clone(), b.clone());
    for yc in candidates {
        let ap = round_to_integer(&(Float::with_val(bits, &y + &yc) / 2u32));
        let bp = round_to_integer(&(Float::with_val(bits, &y - &yc) / (Float::with_val(bits, &sd * 2u32))));
        if quadratic_pow(&ap, &bp, d, e) == target {
            return Some((ap, bp));
        }
    }
    None
}

/// x^{1/root} = (a + b√d)^{1/root}, with x the certified value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalForm {
    pub a: Integer,
    pub b: Integer,
    pub d: i64,
    pub root: u64,
}

impl RadicalForm {
    /// Exact equality of the two positive reals, same d required.
    pub fn same_value(&self, other: &RadicalForm) -> bool {
        if self.d != other.d || self.root == 0 || other.root == 0 {
            return false;
        }
        let (Ok(n1), Ok(n2)) = (u32::try_from(other.root), u32::try_from(self.root)) else {
            return false;
        };
        let d = Integer::from(self.d);
        quadratic_pow(&self.a, &self.b, &d, n1) == quadratic_pow(&other.a, &other.b, &d, n2)
    }
}

impl fmt::Display for RadicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.b.is_zero() {
            self.a.to_string()
        } else {
            let sign = if self.b < 0 { '-' } else { '+' };
            format!(
                "{} {} {}*sqrt({})",
                self.a,
                sign,
                Integer::from(self.b.abs_ref()),
                self.d
            )
        };
        if self.root == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})^(1/{})", self.root)
        }
    }
}

/// p = q^k with q monic of degree 1 or 2, taking the largest such k.
pub fn as_quadratic_power(p: &IntPolynomial) -> Result<(IntPolynomial, u32)> {
    let deg = p.degree();
    if !p.is_monic() || deg == 0 {
        return Err(Error::NotQuadraticPower);
    }
    let sub = &p.coeffs[deg - 1];
    for qdeg in [1usize, 2] {
        if !deg.is_multiple_of(qdeg) {
            continue;
        }
        let k = (deg / qdeg) as u32;
        // a_{deg-1} = k·(q's X^{qdeg-1} coefficient)
        if !sub.is_divisible_u(k) {
            continue;
        }
        let c1 = Integer::from(sub / k);
        let cands: Vec<Integer> = if qdeg == 1 {
            vec![c1.clone()]
        } else {
            kth_roots(p.constant(), k)
        };
        for c0 in cands {
            let q = if qdeg == 1 {
                IntPolynomial::new(vec![c0, Integer::from(1)])
            } else {
                IntPolynomial::new(vec![c0, c1.clone(), Integer::from(1)])
            };
            if q.pow(k) == *p {
                return Ok((q, k));
            }
        }
    }
    Err(Error::NotQuadraticPower)
}

fn kth_roots(n: &Integer, k: u32) -> Vec<Integer> {
    if *n < 0 && k.is_multiple_of(2) {
        return Vec::new();
    }
    let mag = Integer::from(n.abs_ref());
    let (r, rem) = mag.root_rem(Integer::new(), k);
    if !rem.is_zero() {
        return Vec::new();
    }
    if *n < 0 {
        vec![-r]
    } else if k.is_multiple_of(2) {
        vec![r.clone(), -r]
    } else {
        vec![r]
    }
}

/// n = d·w² with d squarefree, when the part of n free of primes below
/// 2¹⁶ is a perfect square.
pub fn squarefree_decomposition(n: &Integer) -> Option<(Integer, Integer)> {
    if n.is_zero() {
        return None;
    }
    let mut rest = Integer::from(n.abs_ref());
    let mut d = Integer::from(n.signum_ref());
    let mut w = Integer::from(1);
    for p in 2u32..(1 << 16) {
        if rest < Integer::from(p) * p {
            break;
        }
        let mut e = 0u32;
        while rest.is_divisible_u(p) {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 {
            d *= p;
        }
        w *= Integer::from(p).pow(e / 2);
    }
    if rest.is_perfect_square() {
        w *= rest.sqrt();
        Some((d, w))
    } else if rest < 1u64 << 32 {
        // fewer than two prime factors left above the trial bound
        d *= rest;
        Some((d, w))
    } else {
        None
    }
}

/// Radicand d of the quadratic q = X² - uX + v when x_poly = q^k, read off
/// the discriminant u² - 4v.
pub fn quadratic_radicand(x_poly: &IntPolynomial) -> Result<Option<i64>> {
    let (q, _) = as_quadratic_power(x_poly)?;
    if q.degree() != 2 {
        return Ok(None);
    }
    let disc = Integer::from(q.coeffs[1].square_ref()) - Integer::from(&q.coeffs[0] * 4u32);
    Ok(squarefree_decomposition(&disc).and_then(|(d, _)| d.to_i64()))
}

/// Writes x^{1/total_root} as (a + b√d)^{1/root} with root as small as
/// possible.
pub fn simplify_radical(
    x_value: &Complex,
    x_poly: &IntPolynomial,
    total_root: u64,
    d: i64,
) -> Result<Option<RadicalForm>> {
    let (q, _) = as_quadratic_power(x_poly)?;
    if total_root == 0 || x_value.real().is_sign_negative() {
        return Ok(None);
    }
    let dd = Integer::from(d);
    let (a, b) = if q.degree() == 1 {
        (Integer::from(-&q.coeffs[0]), Integer::new())
    } else {
        // q = X² + c1·X + c0 = X² - uX + v, roots (u ± w√d)/2
        let u = Integer::from(-&q.coeffs[1]);
        let disc = Integer::from(u.square_ref()) - Integer::from(&q.coeffs[0] * 4u32);
        if d <= 0 || disc <= 0 || !disc.is_divisible(&dd) {
            return Ok(None);
        }
        let w2 = Integer::from(&disc / &dd);
        if !w2.is_perfect_square() {
            return Ok(None);
        }
        let w = w2.sqrt();
        if u.is_odd() || w.is_odd() {
            return Ok(None);
        }
        let a = Integer::from(&u / 2u32);
        let half_w = Integer::from(&w / 2u32);
        // pick the root closest to x
        let prec = x_value.prec().0;
        let sd = Float::with_val(prec, &dd).sqrt();
        let plus = Float::with_val(prec, &a + Float::with_val(prec, &half_w * &sd));
        let minus = Float::with_val(prec, &a - Float::with_val(prec, &half_w * &sd));
        let dp = Float::with_val(prec, x_value.real() - &plus).abs();
        let dm = Float::with_val(prec, x_value.real() - &minus).abs();
        if dp <= dm {
            (a, half_w)
        } else {
            (a, -half_w)
        }
    };
    if a.is_zero() && b.is_zero() {
        return Ok(None);
    }
    let mut divisors: Vec<u64> = (1..=total_root).filter(|e| total_root.is_multiple_of(*e)).collect();
    divisors.reverse();
    for e in divisors {
        let Ok(e32) = u32::try_from(e) else { continue };
        let found = if b.is_zero() {
            integer_root(&a, e32).map(|r| (r, Integer::new()))
        } else {
            pth_power_in_quadratic(&a, &b, &dd, e32)
        };
        if let Some((ap, bp)) = found {
            return Ok(Some(RadicalForm {
                a: ap,
                b: bp,
                d,
                root: total_root / e,
            }));
        }
    }
    Ok(None)
}

fn integer_root(n: &Integer, e: u32) -> Option<Integer> {
    if *n < 0 {
        return None;
    }
    let (r, rem) = n.clone().root_rem(Integer::new(), e);
    rem.is_zero().then_some(r)
}

/// Split status of the primes of m, as reported next to a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub disc: i64,
    pub m: i64,
    pub m_odd: bool,
    pub primes: Vec<PrimeSplit>,
    pub holds: bool,
    pub class_number: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSplit {
    pub p: u64,
    pub splits: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicCertificate {
    pub value: Complex,
    pub power_taken: u64,
    pub polynomial: IntPolynomial,
    pub is_algebraic_integer: bool,
    pub divides: Option<Integer>,
    pub is_unit: bool,
    pub radical: Option<RadicalForm>,
    pub prec_bits: u32,
    pub hypothesis: Option<HypothesisReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueJson {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalJson {
    pub a: String,
    pub b: String,
    pub d: i64,
    pub root: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub value: ValueJson,
    pub power_taken: u64,
    pub minpoly: Vec<String>,
    pub is_algebraic_integer: bool,
    pub divides: Option<String>,
    pub is_unit: bool,
    pub radical: Option<RadicalJson>,
    pub prec_bits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisReport>,
}

impl AlgebraicCertificate {
    pub fn to_json_struct(&self) -> CertificateJson {
        let digits = decimal_digits(self.prec_bits);
        CertificateJson {
            value: ValueJson {
                re: to_decimal_string(self.value.real(), digits),
                im: to_decimal_string(self.value.imag(), digits),
            },
            power_taken: self.power_taken,
            minpoly: self.polynomial.to_strings(),
            is_algebraic_integer: self.is_algebraic_integer,
            divides: self.divides.as_ref().map(Integer::to_string),
            is_unit: self.is_unit,
            radical: self.radical.as_ref().map(|r| RadicalJson {
                a: r.a.to_string(),
                b: r.b.to_string(),
                d: r.d,
                root: r.root,
            }),
            prec_bits: self.prec_bits,
            hypothesis: self.hypothesis.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_struct()).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: CertificateJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        AlgebraicCertificate::try_from(j)
    }

    /// Re-derives every exact claim from the polynomial and radical.
    pub fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::CertificationFailure(what.to_string()));
        if self.is_algebraic_integer != certify_algebraic_integer(&self.polynomial) {
            return fail("is_algebraic_integer disagrees with the polynomial");
        }
        if self.is_unit != certify_unit(&self.polynomial) {
            return fail("is_unit disagrees with the constant term");
        }
        if let Some(n) = &self.divides {
            if !certify_divides(&self.polynomial, n)? {
                return fail("divisibility test fails");
            }
        }
        if let Some(r) = &self.radical {
            if r.root == 0 || !self.power_taken.is_multiple_of(r.root) {
                return fail("radical root does not divide power_taken");
            }
            let e = u32::try_from(self.power_taken / r.root)
                .map_err(|_| Error::CertificationFailure("radical exponent too large".into()))?;
            let (a, b) = quadratic_pow(&r.a, &r.b, &Integer::from(r.d), e);
            // x = a + b√d is a root of X² - 2aX + (a² - d·b²)
            let c0 = Integer::from(a.square_ref()) - Integer::from(b.square_ref()) * r.d;
            let c1 = Integer::from(-&a) * 2u32;
            let q = if b.is_zero() {
                IntPolynomial::new(vec![Integer::from(-&a), Integer::from(1)])
            } else {
                IntPolynomial::new(vec![c0, c1, Integer::from(1)])
            };
            match as_quadratic_power(&self.polynomial) {
                Ok((base, _)) if base == q => {}
                _ => return fail("radical does not match the polynomial"),
            }
            let prec = self.value.prec().0.max(64);
            let sd = Float::with_val(prec, r.d).sqrt();
            let xr = Float::with_val(prec, &a + Float::with_val(prec, &b * &sd));
            let diff = Float::with_val(prec, &xr - self.value.real()).abs();
            let scale = Float::with_val(prec, xr.abs_ref()).max(&Float::with_val(prec, 1));
            if log2_f64(&(diff / scale)) > -32.0 {
                return fail("radical picks the wrong root of the polynomial");
            }
        }
        Ok(())
    }
}

/// Bounds on decoded certificates, far above anything the pipeline emits.
const MAX_DECODED_DEGREE: usize = 1 << 12;
const MAX_DECODED_POWER: u64 = 1 << 20;
const MAX_DECODED_BITS: u64 = 1 << 24;

impl TryFrom<CertificateJson> for AlgebraicCertificate {
    type Error = Error;

    fn try_from(j: CertificateJson) -> Result<Self> {
        if j.prec_bits == 0 || j.prec_bits > 1 << 20 {
            return Err(Error::Parse(format!("prec_bits {} out of range", j.prec_bits)));
        }
        let prec = j.prec_bits + 64;
        let parse = |s: &str| -> Result<Float> {
            let v = Float::parse(s).map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
            let f = Float::with_val(prec, v);
            if f.is_finite() {
                Ok(f)
            } else {
                Err(Error::Parse(format!("non-finite decimal {s:?}")))
            }
        };
        let value = Complex::with_val(prec, (parse(&j.value.re)?, parse(&j.value.im)?));
        let int = |s: &str| -> Result<Integer> {
            s.parse::<Integer>()
                .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
        };
        if j.minpoly.len() > MAX_DECODED_DEGREE + 1 || j.power_taken > MAX_DECODED_POWER {
            return Err(Error::Parse("certificate too large".into()));
        }
        let polynomial = IntPolynomial::from_strings(&j.minpoly)?;
        let divides = j.divides.as_deref().map(int).transpose()?;
        // verify() expands n^deg and (a + b√d)^{power/root}; keep both bounded
        if let Some(n) = &divides {
            if u64::from(n.significant_bits()) * polynomial.degree() as u64 > MAX_DECODED_BITS {
                return Err(Error::Parse("divides too large for the polynomial degree".into()));
            }
        }
        let radical = j
            .radical
            .map(|r| -> Result<RadicalForm> {
                let (a, b) = (int(&r.a)?, int(&r.b)?);
                if r.root == 0 || r.root > j.power_taken.max(1) {
                    return Err(Error::Parse(format!("radical root {} out of range", r.root)));
                }
                let size = u64::from(a.significant_bits() + b.significant_bits()) + 64;
                if size * (j.power_taken / r.root) > MAX_DECODED_BITS {
                    return Err(Error::Parse("radical expansion too large".into()));
                }
                Ok(RadicalForm {
                    a,
                    b,
                    d: r.d,
                    root: r.root,
                })
            })
            .transpose()?;
        Ok(AlgebraicCertificate {
            value,
            power_taken: j.power_taken,
            polynomial,
            is_algebraic_integer: j.is_algebraic_integer,
            divides,
            is_unit: j.is_unit,
            radical,
            prec_bits: j.prec_bits,
            hypothesis: j.hypothesis,
        })
    }
}
