//! Exact algebra of Siegel indices r = (r₁, r₂) ∈ Q² \ Z² and of formal
//! products ∏ g_r^{e_r}.
//!
//! Roots of unity are tracked exactly as a [`Phase`] k ∈ Q/Z standing for
//! e^{2πik}. The rules used are
//!
//! * g_{-r} = -g_r,
//! * g_{r+s} = (-1)^{s₁s₂+s₁+s₂} e^{-πi(s₁r₂-s₂r₁)} g_r for s ∈ Z²,
//! * g_r ∘ S = ζ₁₂⁹ g_{rS} and g_r ∘ T = ζ₁₂ g_{rT},
//! * α ∈ GL₂(Z/N) sends g_r^{12N/gcd(6,N)} to g_{rα}^{12N/gcd(6,N)}.
//!
//! Products keep each index reduced to [0,1)² and do not identify r with
//! -r; [`SiegelProduct::merged`] gives the sign-folded form when wanted.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Complex, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{root_of_unity, EvalContext};
use crate::qseries::{self, bernoulli2};

/// Numerators and denominators of indices are kept below this bound.
const INDEX_LIMIT: u32 = 1 << 30;

/// A pair (r₁, r₂) of rationals not both integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiegelIndex {
    r1: Rational,
    r2: Rational,
}

impl SiegelIndex {
    pub fn new(r1: Rational, r2: Rational) -> Result<Self> {
        for r in [&r1, &r2] {
            let big =
                r.denom().significant_bits() > 30 || r.numer().significant_bits() > 62 || r.clone().abs() > INDEX_LIMIT;
            if big {
                return Err(Error::Parse(format!("index component {r} is out of range")));
            }
        }
        if r1.is_integer() && r2.is_integer() {
            return Err(Error::IntegerIndex(format!("{r1},{r2}")));
        }
        Ok(SiegelIndex { r1, r2 })
    }

    /// Shorthand for `(n1/d1, n2/d2)`.
    pub fn frac(n1: i64, d1: i64, n2: i64, d2: i64) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        SiegelIndex::new(Rational::from((n1, d1)), Rational::from((n2, d2)))
    }

    pub fn r1(&self) -> &Rational {
        &self.r1
    }

    pub fn r2(&self) -> &Rational {
        &self.r2
    }

    pub fn negate(&self) -> SiegelIndex {
        SiegelIndex {
            r1: Rational::from(-&self.r1),
            r2: Rational::from(-&self.r2),
        }
    }

    pub fn is_reduced(&self) -> bool {
        in_unit_interval(&self.r1) && in_unit_interval(&self.r2)
    }

    /// r·γ for an integer matrix (row vector times matrix).
    pub fn times(&self, m: &Mat2) -> Result<SiegelIndex> {
        let r1 = Rational::from(&self.r1 * m.a) + Rational::from(&self.r2 * m.c);
        let r2 = Rational::from(&self.r1 * m.b) + Rational::from(&self.r2 * m.d);
        SiegelIndex::new(r1, r2)
    }
}

fn in_unit_interval(x: &Rational) -> bool {
    *x >= 0 && *x < 1
}

fn floor_int(x: &Rational) -> Integer {
    x.clone().floor().into_numer_denom().0
}

impl fmt::Display for SiegelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.r1, self.r2)
    }
}

impl FromStr for SiegelIndex {
    type Err = Error;

    /// Parses `p/q,p/q` (integers may omit the denominator).
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `p/q,p/q`, got {s:?}")))?;
        SiegelIndex::new(parse_rational(a)?, parse_rational(b)?)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() || s.len() > 64 {
        return Err(Error::Parse(format!("bad rational {s:?}")));
    }
    let parsed = Rational::parse(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    Ok(Rational::from(parsed))
}

/// A root of unity e^{2πik}, stored as k reduced into [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(Rational);

impl Phase {
    pub fn zero() -> Self {
        Phase(Rational::new())
    }

    pub fn new(k: Rational) -> Self {
        let f = floor_int(&k);
        Phase(k - f)
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Phase::new(Rational::from((n, d)))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == 0
    }

    /// Smallest n ≥ 1 with n·k ∈ Z.
    pub fn order(&self) -> u64 {
        self.0.denom().to_u64().unwrap_or(u64::MAX)
    }

    pub fn add(&self, other: &Phase) -> Phase {
        Phase::new(Rational::from(&self.0 + &other.0))
    }

    pub fn scale(&self, e: i64) -> Phase {
        Phase::new(Rational::from(&self.0 * e))
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        root_of_unity(&self.0, prec)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k = parse_rational(s)?;
        if k.denom().significant_bits() > 62 {
            return Err(Error::Parse(format!("phase {s:?} out of range")));
        }
        Ok(Phase::new(k))
    }
}

/// Primitive denominator N of an index, with N composite meaning N has at
/// least two distinct prime factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimitiveDenominator {
    pub value: u64,
    pub composite: bool,
}

pub fn primitive_denominator(r: &SiegelIndex) -> PrimitiveDenominator {
    let d1 = r.r1.denom().to_u64().expect("index denominators are bounded");
    let d2 = r.r2.denom().to_u64().expect("index denominators are bounded");
    let n = lcm_u64(d1, d2);
    PrimitiveDenominator {
        value: n,
        composite: distinct_prime_factors(n).len() >= 2,
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u64(a, b) * b
}

pub(crate) fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// k with g_{r+s} = e^{2πik} g_r.
fn translation_phase(r: &SiegelIndex, s1: &Integer, s2: &Integer) -> Rational {
    let sign = Integer::from(s1 * s2) + s1 + s2;
    let cross = Rational::from(s1 * &r.r2) - Rational::from(s2 * &r.r1);
    Rational::from((sign, 2)) - cross / 2u32
}

/// Representative of r modulo Z² with both components in [0, 1), and the
/// exact phase p with g_r = e^{2πip} g_{r'}.
pub fn reduce_index(r: &SiegelIndex) -> (SiegelIndex, Phase) {
    let s1 = floor_int(&r.r1);
    let s2 = floor_int(&r.r2);
    let base = SiegelIndex {
        r1: Rational::from(&r.r1 - &s1),
        r2: Rational::from(&r.r2 - &s2),
    };
    let k = translation_phase(&base, &s1, &s2);
    (base, Phase::new(k))
}

/// Like [`reduce_index`], but also identifies r with -r (g_{-r} = -g_r) and
/// returns the lexicographically smaller of the two reduced representatives.
pub fn fold_sign(r: &SiegelIndex) -> (SiegelIndex, Phase) {
    let (base, phase) = reduce_index(r);
    let (other, other_phase) = reduce_index(&base.negate());
    if other < base {
        // g_base = -g_{-base} = -e^{2πi·other_phase} g_other
        let k = phase.add(&other_phase).add(&Phase::from_frac(1, 2));
        (other, k)
    } else {
        (base, phase)
    }
}

/// Second Bernoulli polynomial of the fractional part, halved: the order of
/// g_r at the cusp at infinity, in powers of q.
pub fn order_at_infinity(r: &SiegelIndex) -> Rational {
    let frac = Rational::from(&r.r1 - floor_int(&r.r1));
    bernoulli2(&frac) / 2u32
}

/// 2×2 integer matrix [[a, b], [c, d]].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Mat2 = Mat2 {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    pub const T: Mat2 = Mat2 { a: 1, b: 1, c: 0, d: 1 };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Entries reduced into [0, n).
    pub fn reduce_mod(&self, n: u64) -> Mat2 {
        let n = n as i64;
        Mat2::new(
            self.a.rem_euclid(n),
            self.b.rem_euclid(n),
            self.c.rem_euclid(n),
            self.d.rem_euclid(n),
        )
    }

    pub fn mul_mod(&self, o: &Mat2, n: u64) -> Mat2 {
        self.reduce_mod(n).mul(&o.reduce_mod(n)).reduce_mod(n)
    }

    pub fn tpow(k: i64) -> Mat2 {
        Mat2::new(1, k, 0, 1)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Generator of SL₂(Z) used in word decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    S,
    /// T^k
    T(i64),
    /// -1₂
    NegI,
}

impl Generator {
    pub fn matrix(&self) -> Mat2 {
        match *self {
            Generator::S => Mat2::S,
            Generator::T(k) => Mat2::tpow(k),
            Generator::NegI => Mat2::IDENTITY.neg(),
        }
    }
}

/// Writes γ ∈ SL₂(Z) as a product W₁W₂⋯W_k of generators by Euclidean
/// reduction of the first column.
pub fn sl2_word(gamma: &Mat2) -> Result<Vec<Generator>> {
    if gamma.det() != 1 {
        return Err(Error::NotUnimodular(gamma.det()));
    }
    let mut word = Vec::new();
    let mut m = *gamma;
    while m.c != 0 {
        let k = m.a.div_euclid(m.c);
        if k != 0 {
            word.push(Generator::T(k));
            m = Mat2::tpow(-k).mul(&m);
        }
        word.push(Generator::S);
        // S⁻¹ = [[0,1],[-1,0]]
        m = Mat2::new(m.c, m.d, -m.a, -m.b);
    }
    if m.a == 1 {
        if m.b != 0 {
            word.push(Generator::T(m.b));
        }
    } else {
        word.push(Generator::NegI);
        if m.b != 0 {
            word.push(Generator::T(-m.b));
        }
    }
    Ok(word)
}

/// g_r ∘ γ = e^{2πi·phase} g_{r'} with r' = rγ reduced.
pub fn act_sl2(r: &SiegelIndex, gamma: &Mat2) -> Result<(SiegelIndex, Phase)> {
    let word = sl2_word(gamma)?;
    let mut cur = r.clone();
    let mut k = Rational::new();
    for g in &word {
        match *g {
            Generator::S => {
                k += Rational::from((9, 12));
                cur = SiegelIndex {
                    r1: cur.r2.clone(),
                    r2: Rational::from(-&cur.r1),
                };
            }
            Generator::T(n) => {
                k += Rational::from((n, 12));
                let r2 = Rational::from(&cur.r1 * n) + &cur.r2;
                cur = SiegelIndex { r1: cur.r1, r2 };
            }
            Generator::NegI => {
                k += Rational::from((1, 2));
                cur = cur.negate();
            }
        }
    }
    let (reduced, red_phase) = reduce_index(&cur);
    Ok((reduced, Phase::new(k).add(&red_phase)))
}

/// Formal product e^{2πi·phase} ∏ g_r^{e_r} with reduced indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SiegelProduct {
    factors: BTreeMap<SiegelIndex, i64>,
    phase: Phase,
}

impl SiegelProduct {
    pub fn one() -> Self {
        SiegelProduct::default()
    }

    pub fn from_factors<I>(factors: I, phase: Phase) -> Self
    where
        I: IntoIterator<Item = (SiegelIndex, i64)>,
    {
        let mut p = SiegelProduct {
            factors: BTreeMap::new(),
            phase,
        };
        for (r, e) in factors {
            p.push(&r, e);
        }
        p
    }

    /// Multiplies in g_r^e, reducing r.
    pub fn push(&mut self, r: &SiegelIndex, e: i64) {
        if e == 0 {
            return;
        }
        let (reduced, ph) = reduce_index(r);
        self.phase = self.phase.add(&ph.scale(e));
        let slot = self.factors.entry(reduced.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&reduced);
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = (&SiegelIndex, i64)> {
        self.factors.iter().map(|(r, e)| (r, *e))
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent(&self, r: &SiegelIndex) -> i64 {
        self.factors.get(r).copied().unwrap_or(0)
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.phase.is_trivial()
    }

    /// lcm of the primitive denominators of all factors (1 for no factors).
    pub fn level(&self) -> u64 {
        self.factors
            .keys()
            .fold(1, |acc, r| lcm_u64(acc, primitive_denominator(r).value))
    }

    pub fn mul(&self, other: &SiegelProduct) -> SiegelProduct {
        let mut out = self.clone();
        out.phase = out.phase.add(&other.phase);
        for (r, e) in other.factors() {
            out.push(r, e);
        }
        out
    }

    pub fn pow(&self, e: i64) -> SiegelProduct {
        if e == 0 {
            return SiegelProduct::one();
        }
        SiegelProduct {
            factors: self.factors.iter().map(|(r, x)| (r.clone(), x * e)).collect(),
            phase: self.phase.scale(e),
        }
    }

    /// Same function with r and -r identified (see [`fold_sign`]).
    pub fn merged(&self) -> SiegelProduct {
        let mut out = SiegelProduct {
            factors: BTreeMap::new(),
            phase: self.phase.clone(),
        };
        for (r, e) in self.factors() {
            let (folded, ph) = fold_sign(r);
            out.phase = out.phase.add(&ph.scale(e));
            *out.factors.entry(folded).or_insert(0) += e;
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    pub fn eval(&self, tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
        eval_product(self, tau, ctx)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ProductJson::from(self)).expect("product serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: ProductJson = serde_json::from_str(s).map_err(|e| Error::Parse(format!("product JSON: {e}")))?;
        raw.try_into()
    }
}

impl fmt::Display for SiegelProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.phase.is_trivial() {
            write!(f, "e(2πi·{})", self.phase)?;
            first = false;
        }
        for (r, e) in self.factors() {
            if !first {
                write!(f, " · ")?;
            }
            write!(f, "g({r})^{e}")?;
            first = false;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// JSON shape: `{"factors": [["r1", "r2", e], ...], "phase": "k"}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProductJson {
    pub factors: Vec<(String, String, i64)>,
    pub phase: String,
}

impl From<&SiegelProduct> for ProductJson {
    fn from(p: &SiegelProduct) -> Self {
        ProductJson {
            factors: p
                .factors()
                .map(|(r, e)| (r.r1.to_string(), r.r2.to_string(), e))
                .collect(),
            phase: p.phase.to_string(),
        }
    }
}

impl TryFrom<ProductJson> for SiegelProduct {
    type Error = Error;

    fn try_from(raw: ProductJson) -> Result<Self> {
        let phase: Phase = raw.phase.parse()?;
        let mut factors = Vec::with_capacity(raw.factors.len());
        for (a, b, e) in raw.factors {
            if e.unsigned_abs() > u64::from(INDEX_LIMIT) {
                return Err(Error::Parse(format!("exponent {e} out of range")));
            }
            factors.push((SiegelIndex::new(parse_rational(&a)?, parse_rational(&b)?)?, e));
        }
        Ok(SiegelProduct::from_factors(factors, phase))
    }
}

/// 12N/gcd(6, N): the power of g_r on which GL₂(Z/N) acts through indices.
pub fn canonical_stable_exponent(n: u64) -> u64 {
    12 * n / gcd_u64(6, n)
}

/// Smallest e ≥ 1 making every exponent of `p^e` a multiple of its factor's
/// canonical stable exponent and the phase of `p^e` trivial.
pub fn galois_stable_power(p: &SiegelProduct) -> u64 {
    let mut e = p.phase.order();
    for (r, x) in p.factors() {
        let need = canonical_stable_exponent(primitive_denominator(r).value);
        let k = need / gcd_u64(need, x.unsigned_abs());
        e = lcm_u64(e, k);
    }
    e
}

/// Applies α ∈ GL₂(Z/N), N = level(p), to a Galois-stable product.
pub fn act_gl2_on_power(p: &SiegelProduct, alpha: &Mat2) -> Result<SiegelProduct> {
    let stable = galois_stable_power(p);
    if stable != 1 {
        return Err(Error::NotGaloisStable(stable));
    }
    let n = p.level();
    let alpha = alpha.reduce_mod(n);
    let det = alpha.det().rem_euclid(n as i64);
    if n > 1 && gcd_u64(det as u64, n) != 1 {
        return Err(Error::NotInvertibleDeterminant { det, modulus: n });
    }
    let mut out = SiegelProduct {
        factors: BTreeMap::new(),
        phase: p.phase.clone(),
    };
    for (r, e) in p.factors() {
        let moved = r.times(&alpha)?;
        let (reduced, ph) = reduce_index(&moved);
        // stable exponents kill the translation phase
        debug_assert!(ph.scale(e).is_trivial());
        *out.factors.entry(reduced).or_insert(0) += e;
    }
    Ok(out)
}

/// The product (-1)^{(1-m)/2} ∏_{k=1}^{m-1} g_{(0,k/m)} g_{(1/2,1/2+k/m)}²,
/// equal to (√m·φ(mτ)/φ(τ))² for odd m ≥ 3.
pub fn phi_ratio_squared_product(m: i64) -> Result<SiegelProduct> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::EvenOrSmallM(m));
    }
    let mut p = SiegelProduct::one();
    // (-1)^{(1-m)/2}
    if ((1 - m) / 2).rem_euclid(2) == 1 {
        p.phase = Phase::from_frac(1, 2);
    }
    for k in 1..m {
        p.push(&SiegelIndex::frac(0, 1, k, m)?, 1);
        let half_shift = Rational::from((1, 2)) + Rational::from((k, m));
        p.push(&SiegelIndex::new(Rational::from((1, 2)), half_shift)?, 2);
    }
    Ok(p)
}

/// Context for evaluating the factors of products whose exponents sum to
/// at most `total`: the guard grows by log₂(total) bits.
fn factor_context(total: u64, ctx: &EvalContext) -> Result<EvalContext> {
    let extra = 64 - (total + 1).leading_zeros() + 4;
    let inner = EvalContext::new(ctx.prec_bits(), ctx.guard_bits() + extra)?;
    Ok(match ctx.max_terms() {
        Some(t) => inner.with_max_terms(t),
        None => inner,
    })
}

fn total_exponent(p: &SiegelProduct) -> u64 {
    p.factors().map(|(_, e)| e.unsigned_abs()).sum()
}

fn combine(p: &SiegelProduct, values: &BTreeMap<SiegelIndex, Complex>, wp: u32, ctx: &EvalContext) -> Result<Complex> {
    let mut acc = p.phase.to_complex(wp);
    for (r, e) in p.factors() {
        let exp = i32::try_from(e).map_err(|_| Error::InvalidArgument(format!("exponent {e} out of range")))?;
        let powered = Complex::with_val(wp, rug::ops::Pow::pow(&values[r], exp));
        acc *= powered;
    }
    crate::numerics::ensure_finite(Complex::with_val(ctx.working_prec(), acc), "eval_product")
}

/// e^{2πi·phase} ∏ g_r(τ)^{e_r}.
pub fn eval_product(p: &SiegelProduct, tau: &Complex, ctx: &EvalContext) -> Result<Complex> {
    Ok(eval_products(std::slice::from_ref(p), tau, ctx)?.remove(0))
}

/// Evaluates several products at one point, computing each distinct g_r
/// once.
pub fn eval_products(ps: &[SiegelProduct], tau: &Complex, ctx: &EvalContext) -> Result<Vec<Complex>> {
    crate::numerics::ensure_upper(tau)?;
    let total = ps.iter().map(total_exponent).max().unwrap_or(0);
    let inner = factor_context(total, ctx)?;
    let wp = inner.working_prec();
    let indices: Vec<SiegelIndex> = ps
        .iter()
        .flat_map(|p| p.factors.keys().cloned())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let values = indices
        .par_iter()
        .map(|r| Ok((r.clone(), qseries::siegel(r, tau, &inner)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    ps.par_iter().map(|p| combine(p, &values, wp, ctx)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(n1: i64, d1: i64, n2: i64, d2: i64) -> SiegelIndex {
        SiegelIndex::frac(n1, d1, n2, d2).unwrap()
    }

    #[test]
    fn index_validation_and_parsing() {
        assert!(matches!(SiegelIndex::frac(1, 1, 0, 1), Err(Error::IntegerIndex(_))));
        assert!(matches!(SiegelIndex::frac(0, 1, 0, 1), Err(Error::IntegerIndex(_))));
        let r: SiegelIndex = "1/2, 5/6".parse().unwrap();
        assert_eq!(r, idx(1, 2, 5, 6));
        assert_eq!(r.to_string(), "1/2,5/6");
        let whole: SiegelIndex = "0,1/3".parse().unwrap();
        assert_eq!(whole, idx(0, 1, 1, 3));
        for bad in ["", "1/2", "1/0,1/2", "a,b", "1/2,1/2,1/2", "1,2"] {
            assert!(bad.parse::<SiegelIndex>().is_err(), "{bad}");
        }
    }

    #[test]
    fn primitive_denominator_examples() {
        assert_eq!(
            primitive_denominator(&idx(1, 2, 1, 2)),
            PrimitiveDenominator {
                value: 2,
                composite: false
            }
        );
        assert_eq!(
            primitive_denominator(&idx(1, 2, 5, 6)),
            PrimitiveDenominator {
                value: 6,
                composite: true
            }
        );
        assert_eq!(
            primitive_denominator(&idx(0, 1, 1, 3)),
            PrimitiveDenominator {
                value: 3,
                composite: false
            }
        );
        assert!(!primitive_denominator(&idx(1, 4, 0, 1)).composite);
        assert!(primitive_denominator(&idx(1, 10, 3, 10)).composite);
    }

    #[test]
    fn reduce_index_examples() {
        assert_eq!(
            reduce_index(&idx(1, 2, 3, 2)),
            (idx(1, 2, 1, 2), Phase::from_frac(3, 4))
        );
        assert_eq!(
            reduce_index(&idx(-1, 2, -1, 2)),
            (idx(1, 2, 1, 2), Phase::from_frac(1, 2))
        );
        assert_eq!(reduce_index(&idx(1, 4, 0, 1)), (idx(1, 4, 0, 1), Phase::zero()));
    }

    #[test]
    fn fold_sign_prefers_smaller_representative() {
        let (r, ph) = fold_sign(&idx(2, 3, 1, 3));
        assert_eq!(r, idx(1, 3, 2, 3));
        // g_{(1/3,2/3)} = e^{-πi/3} g_{(2/3,1/3)}, so g_{(2/3,1/3)} = e^{πi/3} g_{(1/3,2/3)}
        assert_eq!(ph, Phase::from_frac(1, 6));
        let (r, ph) = fold_sign(&idx(0, 1, 2, 3));
        assert_eq!(r, idx(0, 1, 1, 3));
        assert_eq!(ph, Phase::zero());
    }

    #[test]
    fn order_at_infinity_examples() {
        assert_eq!(order_at_infinity(&idx(1, 2, 1, 2)), Rational::from((-1, 24)));
        assert_eq!(order_at_infinity(&idx(0, 1, 1, 2)), Rational::from((1, 12)));
        assert_eq!(order_at_infinity(&idx(1, 3, 0, 1)), Rational::from((-1, 36)));
        assert_eq!(order_at_infinity(&idx(4, 3, 0, 1)), Rational::from((-1, 36)));
    }

    #[test]
    fn sl2_word_reconstructs_matrix() {
        let samples = [
            Mat2::IDENTITY,
            Mat2::S,
            Mat2::T,
            Mat2::IDENTITY.neg(),
            Mat2::new(2, 1, 1, 1),
            Mat2::new(7, 3, -12, -5),
            Mat2::new(5, -2, -17, 7),
            Mat2::new(-1, 4, 0, -1),
        ];
        for g in samples {
            let word = sl2_word(&g).unwrap();
            let prod = word.iter().fold(Mat2::IDENTITY, |acc, w| acc.mul(&w.matrix()));
            assert_eq!(prod, g, "{word:?}");
        }
        assert_eq!(sl2_word(&Mat2::new(2, 0, 0, 1)), Err(Error::NotUnimodular(2)));
    }

    #[test]
    fn act_sl2_examples() {
        let r = idx(1, 2, 1, 2);
        assert_eq!(act_sl2(&r, &Mat2::IDENTITY).unwrap(), (r.clone(), Phase::zero()));

        // S: ζ₁₂⁹ g_{(1/2,-1/2)}, and (1/2,-1/2) = (1/2,1/2) + (0,-1)
        let (rs, ph) = act_sl2(&r, &Mat2::S).unwrap();
        let (red, red_ph) = reduce_index(&idx(1, 2, -1, 2));
        assert_eq!(rs, red);
        assert_eq!(ph, Phase::from_frac(9, 12).add(&red_ph));

        let (rt, ph) = act_sl2(&r, &Mat2::T).unwrap();
        let (red, red_ph) = reduce_index(&idx(1, 2, 1, 1));
        assert_eq!(rt, red);
        assert_eq!(ph, Phase::from_frac(1, 12).add(&red_ph));
    }

    #[test]
    fn product_canonicalization_and_json() {
        let p = phi_ratio_squared_product(3).unwrap();
        assert_eq!(p.level(), 6);
        assert_eq!(p.exponent(&idx(0, 1, 1, 3)), 1);
        assert_eq!(p.exponent(&idx(0, 1, 2, 3)), 1);
        assert_eq!(p.exponent(&idx(1, 2, 5, 6)), 2);
        // (1/2, 7/6) reduces to (1/2, 1/6) with factor -i, squared: -1
        assert_eq!(p.exponent(&idx(1, 2, 1, 6)), 2);
        // sign (-1)^{-1} times (-i)^2
        assert!(p.phase().is_trivial());

        let merged = p.merged();
        assert_eq!(merged.num_factors(), 2);
        assert_eq!(merged.exponent(&idx(0, 1, 1, 3)), 2);
        assert_eq!(merged.exponent(&idx(1, 2, 1, 6)), 4);
        assert_eq!(merged.phase(), &Phase::from_frac(2, 3));

        let round = SiegelProduct::from_json(&p.to_json()).unwrap();
        assert_eq!(round, p);
        assert!(SiegelProduct::from_json("{\"factors\":[[\"1\",\"2\",3]],\"phase\":\"0\"}").is_err());
        assert!(SiegelProduct::from_json("[]").is_err());
    }

    #[test]
    fn phi_ratio_product_for_five() {
        let p = phi_ratio_squared_product(5).unwrap();
        assert_eq!(p.level(), 10);
        assert_eq!(p.num_factors(), 8);
        for k in 1..5 {
            assert_eq!(p.exponent(&idx(0, 1, k, 5)), 1);
        }
        for b in [1, 3, 7, 9] {
            assert_eq!(p.exponent(&idx(1, 2, b, 10)), 2);
        }
        assert!(p.phase().is_trivial());
        assert_eq!(phi_ratio_squared_product(4), Err(Error::EvenOrSmallM(4)));
        assert_eq!(phi_ratio_squared_product(1), Err(Error::EvenOrSmallM(1)));
    }

    #[test]
    fn stable_power_examples() {
        assert_eq!(galois_stable_power(&phi_ratio_squared_product(3).unwrap()), 12);
        assert_eq!(galois_stable_power(&phi_ratio_squared_product(5).unwrap()), 60);
        for b in [2i64, 3, 5, 6, 7] {
            let p = SiegelProduct::from_factors([(idx(0, 1, 1, b), 12 * b)], Phase::zero());
            assert_eq!(galois_stable_power(&p), 1, "b = {b}");
        }
        let odd = SiegelProduct::from_factors([(idx(1, 2, 1, 2), 1)], Phase::zero());
        assert_eq!(galois_stable_power(&odd), 12);
    }

    #[test]
    fn gl2_action_examples() {
        let p = SiegelProduct::from_factors([(idx(0, 1, 1, 3), 24), (idx(1, 2, 1, 6), 48)], Phase::zero());
        assert_eq!(act_gl2_on_power(&p, &Mat2::IDENTITY).unwrap(), p);
        let moved = act_gl2_on_power(&p, &Mat2::new(1, -2, 2, 1)).unwrap();
        let expect = SiegelProduct::from_factors([(idx(2, 3, 1, 3), 24), (idx(5, 6, 1, 6), 48)], Phase::zero());
        assert_eq!(moved, expect);

        for (a, b) in [(1i64, 5i64), (2, 5), (3, 7), (5, 6)] {
            let p = SiegelProduct::from_factors([(idx(0, 1, 1, b), 12 * b)], Phase::zero());
            let q = act_gl2_on_power(&p, &Mat2::new(a, 0, 0, a)).unwrap();
            let expect = SiegelProduct::from_factors([(idx(0, 1, a, b), 12 * b)], Phase::zero());
            assert_eq!(q, expect);
        }

        let bad = SiegelProduct::from_factors([(idx(1, 2, 1, 2), 1)], Phase::zero());
        assert_eq!(act_gl2_on_power(&bad, &Mat2::IDENTITY), Err(Error::NotGaloisStable(12)));
        assert_eq!(
            act_gl2_on_power(&p, &Mat2::new(2, 0, 0, 1)),
            Err(Error::NotInvertibleDeterminant { det: 2, modulus: 6 })
        );
    }
}
