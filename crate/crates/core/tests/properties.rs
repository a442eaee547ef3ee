use modunit::identities::random_points;
use modunit::numerics::{log2_f64, quadratic_pow, relative_residual};
use modunit::pipeline::{certify, CertifyOptions};
use modunit::qseries::{delta, eta, jfun, phi, phi_ratio, siegel};
use modunit::recognition::{pth_power_in_quadratic, AlgebraicCertificate};
use modunit::siegel::{
    act_gl2_on_power, act_sl2, galois_stable_power, order_at_infinity, reduce_index, Mat2, Phase, SiegelIndex,
    SiegelProduct,
};
use modunit::{EvalContext, Result};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rug::ops::Pow;
use rug::{Complex, Integer};

fn index() -> impl Strategy<Value = SiegelIndex> {
    (-12i64..=12, 1i64..=12, -12i64..=12, 1i64..=12).prop_filter_map("integer pair", |(n1, d1, n2, d2)| {
        SiegelIndex::frac(n1, d1, n2, d2).ok()
    })
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// SL₂(Z) elements with entries in [-20, 20].
fn sl2() -> impl Strategy<Value = Mat2> {
    (-20i64..=20, -20i64..=20, -40i64..=40).prop_filter_map("no small solution", |(a, c, k)| {
        let (g, x, y) = ext_gcd(a, c);
        if g != 1 {
            return None;
        }
        // a·x + c·y = 1, so d = x, b = -y; shift along (a, c)
        let (b, d) = (-y + k * a, x + k * c);
        let m = Mat2::new(a, b, c, d);
        (b.abs() <= 20 && d.abs() <= 20 && m.det() == 1).then_some(m)
    })
}

fn moebius(g: &Mat2, tau: &Complex, prec: u32) -> Complex {
    let num = Complex::with_val(prec, tau * g.a) + g.b;
    let den = Complex::with_val(prec, tau * g.c) + g.d;
    num / den
}

/// A point where cτ + d has modulus about one, so neither τ nor γτ has
/// imaginary part much below 1/|c|.
fn base_point(g: &Mat2, x: f64, y: f64, prec: u32) -> Complex {
    if g.c == 0 {
        return Complex::with_val(prec, (x, 1.0 + y));
    }
    let c = g.c as f64;
    Complex::with_val(prec, (-(g.d as f64) / c + x / c.abs(), y / c.abs()))
}

fn phase_value(p: &Phase, prec: u32) -> Complex {
    p.to_complex(prec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn transformation_law(r in index(), g in sl2(), x in -0.3f64..0.3, y in 0.8f64..1.5) {
        let ctx = EvalContext::new(128, 32).unwrap();
        let wp = ctx.working_prec();
        let tau = base_point(&g, x, y, wp);
        let (moved, ph) = act_sl2(&r, &g).unwrap();
        let lhs = siegel(&r, &moebius(&g, &tau, wp), &ctx).unwrap();
        let rhs = phase_value(&ph, wp) * siegel(&moved, &tau, &ctx).unwrap();
        let res = log2_f64(&relative_residual(&lhs, &rhs));
        prop_assert!(res < -128.0 + 16.0, "r={r} γ={g} residual 2^{res}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reduction_is_idempotent_and_exact(r in index()) {
        let (base, ph) = reduce_index(&r);
        prop_assert!(base.is_reduced());
        prop_assert_eq!(reduce_index(&base), (base.clone(), Phase::zero()));

        let ctx = EvalContext::new(64, 32).unwrap();
        let tau = Complex::with_val(ctx.working_prec(), (0.1, 1.1));
        let direct = siegel(&r, &tau, &ctx).unwrap();
        let via = phase_value(&ph, ctx.working_prec()) * siegel(&base, &tau, &ctx).unwrap();
        prop_assert!(log2_f64(&relative_residual(&direct, &via)) < -48.0);
    }

    #[test]
    fn negation_is_a_sign(r in index()) {
        let ctx = EvalContext::new(64, 32).unwrap();
        let tau = Complex::with_val(ctx.working_prec(), (-0.2, 0.9));
        let (base, _) = reduce_index(&r);
        let pos = siegel(&base, &tau, &ctx).unwrap();
        let neg = siegel(&base.negate(), &tau, &ctx).unwrap();
        prop_assert!(log2_f64(&relative_residual(&neg, &(-pos))) < -48.0);
    }

    #[test]
    fn identity_matrix_acts_trivially(
        r in index(), s in index(), e in -3i64..=3, k in (-2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2),
    ) {
        let raw = SiegelProduct::from_factors([(r, 1), (s, e)], Phase::zero());
        let p = raw.pow(galois_stable_power(&raw) as i64);
        let n = p.level() as i64;
        let alpha = Mat2::new(1 + n * k.0, n * k.1, n * k.2, 1 + n * k.3);
        prop_assert_eq!(act_gl2_on_power(&p, &alpha).unwrap(), p);
    }

    #[test]
    fn level_is_preserved(r in index(), s in index(), g in sl2(), t in 1i64..=12) {
        let raw = SiegelProduct::from_factors([(r, 2), (s, -1)], Phase::zero());
        let p = raw.pow(galois_stable_power(&raw) as i64);
        let n = p.level() as i64;
        // [[1, 0], [0, t]]·γ has determinant t; keep it a unit mod n
        prop_assume!(ext_gcd(t, n).0 == 1);
        let alpha = Mat2::new(1, 0, 0, t).mul(&g);
        let moved = act_gl2_on_power(&p, &alpha).unwrap();
        prop_assert_eq!(moved.level(), p.level());
        prop_assert_eq!(galois_stable_power(&moved), 1);
    }

    #[test]
    fn quadratic_roots_re_expand(a in 1i64..200, b in 0i64..200, d in 2i64..30, e in 1u32..12) {
        let (a, b, d) = (Integer::from(a), Integer::from(b), Integer::from(d));
        let (x, y) = quadratic_pow(&a, &b, &d, e);
        let (ra, rb) = pth_power_in_quadratic(&x, &y, &d, e).expect("a power has a root");
        prop_assert_eq!(quadratic_pow(&ra, &rb, &d, e), (x, y));
    }

    #[test]
    fn quadratic_root_successes_are_exact(x in -10_000i64..10_000, y in -10_000i64..10_000, d in 2i64..30, e in 2u32..6) {
        let (x, y, d) = (Integer::from(x), Integer::from(y), Integer::from(d));
        if let Some((ra, rb)) = pth_power_in_quadratic(&x, &y, &d, e) {
            prop_assert_eq!(quadratic_pow(&ra, &rb, &d, e), (x, y));
        }
    }

    #[test]
    fn product_json_round_trips(r in index(), s in index(), e in -5i64..=5, k in 0i64..12) {
        let p = SiegelProduct::from_factors([(r, 3), (s, e)], Phase::from_frac(k, 12));
        prop_assert_eq!(SiegelProduct::from_json(&p.to_json()).unwrap(), p);
    }
}

#[test]
fn order_matches_decay_rate() {
    let ctx = EvalContext::new(128, 32).unwrap();
    let wp = ctx.working_prec();
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..10 {
        let r = index().new_tree(&mut runner).unwrap().current();
        let at = |t: f64| -> f64 {
            let v = siegel(&r, &Complex::with_val(wp, (0, t)), &ctx).unwrap();
            v.abs().real().clone().ln().to_f64()
        };
        // log|g_r(it)| = -2πt·ord + O(e^{-2πtδ}), δ ≥ 1/12 the distance of r₁
        // to the nearest integer; t = 60 makes the correction negligible
        let slope = (at(61.0) - at(60.0)) / (-2.0 * std::f64::consts::PI);
        let ord = order_at_infinity(&r).to_f64();
        assert!((slope - ord).abs() < 1e-6, "{r}: slope {slope} vs order {ord}");
    }
}

type Eval = fn(&Complex, &EvalContext) -> Result<Complex>;

#[test]
fn doubling_precision_is_stable() {
    let lo = EvalContext::new(64, 32).unwrap();
    let hi = EvalContext::new(128, 32).unwrap();
    let g: Eval = |t, c| siegel(&SiegelIndex::frac(1, 3, 3, 4).unwrap(), t, c);
    let ratio: Eval = |t, c| phi_ratio(3, t, c);
    let fs: [(&str, Eval); 6] = [
        ("eta", eta),
        ("phi", phi),
        ("delta", delta),
        ("j", jfun),
        ("siegel", g),
        ("phi_ratio", ratio),
    ];
    let bound = -64.0 + 32.0;
    for tau in random_points(99, 20, &hi) {
        for (name, f) in fs {
            let a = f(&tau, &lo).unwrap();
            let b = f(&tau, &hi).unwrap();
            let res = log2_f64(&relative_residual(&a, &b));
            assert!(res < bound, "{name} at {tau}: 2^{res}");
        }
    }
}

#[test]
fn certificates_are_deterministic() {
    let ctx = EvalContext::default();
    let a = certify(-4, 3, &ctx, CertifyOptions::default()).unwrap();
    let b = certify(-4, 3, &ctx, CertifyOptions::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let back = AlgebraicCertificate::from_json(&a.to_json()).unwrap();
    assert_eq!(back.to_json(), a.to_json());
    back.verify().unwrap();
}

#[test]
fn example_one_divisibility_is_two_sided() {
    use modunit::recognition::{certify_divides, IntPolynomial};
    let p = IntPolynomial::from_i64(&[729, -72954, 1]);
    let n = Integer::from(729);
    assert!(certify_divides(&p, &n).unwrap());
    // the complement 729/x is the other root, the same polynomial; x is 27
    // times a unit, so 9/x is not integral
    assert!(certify_divides(&p, &Integer::from(27)).unwrap());
    assert!(!certify_divides(&p, &Integer::from(9)).unwrap());
    // complement of x relative to 3¹²: 3¹²/x = 729·x̄, polynomial X² - 729·72954·X + 729³
    let comp = IntPolynomial::from_i64(&[729 * 729 * 729, -729 * 72954, 1]);
    assert!(certify_divides(&comp, &Integer::from(3).pow(12)).unwrap());
    assert!(certify_divides(&p, &Integer::from(3).pow(12)).unwrap());
}
