//! Imaginary quadratic fields K = Q(√d_K), the reciprocity group W_{K,N}
//! modulo its kernel, and conjugates of Siegel-product values at θ_K.

use rug::Complex;

use crate::error::{Error, Result};
use crate::numerics::{EvalContext, QuadraticPoint};
use crate::siegel::{
    act_gl2_on_power, distinct_prime_factors, eval_products, galois_stable_power, gcd_u64, Mat2, SiegelProduct,
};

/// K = Q(√d_K) with θ_K the standard generator of its ring of integers and
/// min(θ_K, Q) = X² + BX + C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d_k: i64,
    b: i64,
    c: i64,
    theta: QuadraticPoint,
}

impl QuadField {
    pub fn disc(&self) -> i64 {
        self.d_k
    }

    /// (B, C)
    pub fn min_poly(&self) -> (i64, i64) {
        (self.b, self.c)
    }

    pub fn theta(&self) -> QuadraticPoint {
        self.theta
    }

    /// The matrix [[t - Bs, -Cs], [s, t]] reduced mod n.
    pub fn element(&self, t: i64, s: i64, n: u64) -> Mat2 {
        Mat2::new(t - self.b * s, -self.c * s, s, t).reduce_mod(n)
    }

    /// Kernel of W_{K,N} → Gal(K_(N)/H_K) as (t, s) pairs.
    pub fn kernel_pairs(&self) -> &'static [(i64, i64)] {
        match self.d_k {
            -4 => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            -3 => &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)],
            _ => &[(1, 0), (-1, 0)],
        }
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if !(-(1i64 << 40)..0).contains(&d) {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

pub fn make_field(d_k: i64) -> Result<QuadField> {
    if !is_fundamental_discriminant(d_k) {
        return Err(Error::NotFundamentalDiscriminant(d_k));
    }
    let (b, c, theta) = if d_k.rem_euclid(4) == 0 {
        // √d_K / 2 = √(d_K/4)
        (0, -d_k / 4, QuadraticPoint::new(d_k / 4, 0, 1, 1)?)
    } else {
        (1, (1 - d_k) / 4, QuadraticPoint::new(d_k, -1, 1, 2)?)
    };
    Ok(QuadField { d_k, b, c, theta })
}

/// Number of reduced primitive forms of discriminant d_K.
pub fn class_number(field: &QuadField) -> u64 {
    let d = field.d_k;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            let g = gcd_u64(gcd_u64(a as u64, b.unsigned_abs()), c as u64);
            if g == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

fn is_prime(p: u64) -> bool {
    p >= 2 && distinct_prime_factors(p) == [p]
}

/// Kronecker symbol (d | p) for a prime p.
pub fn kronecker(d: i64, p: u64) -> Result<i32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        });
    }
    let p_i = p as i128;
    let a = (d as i128).rem_euclid(p_i);
    if a == 0 {
        return Ok(0);
    }
    // Euler's criterion
    let mut result: i128 = 1;
    let mut base = a;
    let mut e = (p_i - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p_i;
        }
        base = base * base % p_i;
        e >>= 1;
    }
    Ok(if result == 1 { 1 } else { -1 })
}

pub fn splits(p: u64, field: &QuadField) -> Result<bool> {
    Ok(kronecker(field.d_k, p)? == 1)
}

/// m ≥ 3 odd with every prime factor split in K.
pub fn unit_theorem_hypothesis(m: i64, field: &QuadField) -> bool {
    if m < 3 || m % 2 == 0 {
        return false;
    }
    distinct_prime_factors(m as u64)
        .into_iter()
        .all(|p| splits(p, field).unwrap_or(false))
}

/// Split status of each distinct prime factor of m.
pub fn prime_split_status(m: u64, field: &QuadField) -> Vec<(u64, bool)> {
    distinct_prime_factors(m)
        .into_iter()
        .map(|p| (p, splits(p, field).unwrap_or(false)))
        .collect()
}

/// W_{K,N} modulo the kernel, one representative per coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityGroup {
    field: QuadField,
    n: u64,
    cosets: Vec<Mat2>,
}

impl ReciprocityGroup {
    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn cosets(&self) -> &[Mat2] {
        &self.cosets
    }

    pub fn kernel(&self) -> Vec<Mat2> {
        let mut k: Vec<Mat2> = self
            .field
            .kernel_pairs()
            .iter()
            .map(|&(t, s)| self.field.element(t, s, self.n))
            .collect();
        k.sort_by_key(|m| (m.d, m.c));
        k.dedup();
        k
    }

    /// Index of the coset containing `alpha`, if `alpha` lies in W_{K,N}.
    pub fn coset_of(&self, alpha: &Mat2) -> Option<usize> {
        let alpha = alpha.reduce_mod(self.n);
        let rep = coset_min(&self.field, alpha.d, alpha.c, self.n);
        if self.field.element(alpha.d, alpha.c, self.n) != alpha {
            return None;
        }
        self.cosets.iter().position(|m| (m.d, m.c) == rep)
    }
}

fn unit_mod(det: i64, n: u64) -> bool {
    n == 1 || gcd_u64(det.rem_euclid(n as i64) as u64, n) == 1
}

/// Lexicographically smallest (t, s) in the kernel coset of (t, s).
fn coset_min(field: &QuadField, t: i64, s: i64, n: u64) -> (i64, i64) {
    let x = field.element(t, s, n);
    field
        .kernel_pairs()
        .iter()
        .map(|&(kt, ks)| {
            let y = x.mul_mod(&field.element(kt, ks, n), n);
            (y.d, y.c)
        })
        .min()
        .expect("kernel is nonempty")
}

pub fn enumerate_reciprocity(field: &QuadField, n: u64) -> Result<ReciprocityGroup> {
    if !(2..=1 << 20).contains(&n) {
        return Err(Error::InvalidPrecision(format!("level N = {n} out of range")));
    }
    let ni = n as i64;
    let mut cosets = Vec::new();
    for t in 0..ni {
        for s in 0..ni {
            let m = field.element(t, s, n);
            if !unit_mod(m.det(), n) {
                continue;
            }
            if coset_min(field, t, s, n) == (t, s) {
                cosets.push(m);
            }
        }
    }
    Ok(ReciprocityGroup {
        field: *field,
        n,
        cosets,
    })
}

/// The products p^α over the coset representatives α of W_{K,N},
/// N = level(p), in coset order.
pub fn conjugate_products(p: &SiegelProduct, field: &QuadField) -> Result<Vec<SiegelProduct>> {
    let stable = galois_stable_power(p);
    if stable != 1 {
        return Err(Error::NotGaloisStable(stable));
    }
    let n = p.level();
    if n < 2 {
        return Ok(vec![p.clone()]);
    }
    enumerate_reciprocity(field, n)?
        .cosets()
        .iter()
        .map(|alpha| act_gl2_on_power(p, alpha))
        .collect()
}

/// Values of p^α at θ_K over the coset representatives α of W_{K,N},
/// N = level(p), in coset order.
pub fn conjugates(p: &SiegelProduct, field: &QuadField, ctx: &EvalContext) -> Result<Vec<Complex>> {
    let products = conjugate_products(p, field)?;
    eval_products(&products, &field.theta().to_complex(ctx), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{log2_f64, relative_residual};
    use crate::siegel::{eval_product, phi_ratio_squared_product, SiegelIndex};

    fn field(d: i64) -> QuadField {
        make_field(d).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let k = field(-4);
        assert_eq!(k.min_poly(), (0, 1));
        assert_eq!(k.theta(), QuadraticPoint::new(-1, 0, 1, 1).unwrap());
        let k = field(-3);
        assert_eq!(k.min_poly(), (1, 1));
        assert_eq!(k.theta(), QuadraticPoint::new(-3, -1, 1, 2).unwrap());
        assert_eq!(field(-7).min_poly(), (1, 2));
        assert_eq!(field(-8).min_poly(), (0, 2));
        for bad in [-1, -2, -12, -16, -27, 5, 0] {
            assert_eq!(make_field(bad), Err(Error::NotFundamentalDiscriminant(bad)));
        }
    }

    #[test]
    fn theta_is_root_of_min_poly() {
        let ctx = EvalContext::new(128, 16).unwrap();
        for d in [-3, -4, -7, -8, -11, -15, -20, -23] {
            let k = field(d);
            let (b, c) = k.min_poly();
            let th = k.theta().to_complex(&ctx);
            let v = Complex::with_val(ctx.working_prec(), th.square_ref())
                + Complex::with_val(ctx.working_prec(), &th * b)
                + c;
            let mag = Complex::with_val(64, v.abs_ref()).real().to_f64();
            assert!(mag < 1e-30, "d = {d}");
        }
    }

    #[test]
    fn class_numbers() {
        for (d, h) in [
            (-3, 1),
            (-4, 1),
            (-7, 1),
            (-8, 1),
            (-15, 2),
            (-20, 2),
            (-23, 3),
            (-47, 5),
            (-84, 4),
        ] {
            assert_eq!(class_number(&field(d)), h, "d = {d}");
        }
    }

    /// Brute force: p splits iff p = N(x + yθ) has a solution that is not
    /// a rational multiple, i.e. the norm form represents p.
    fn norm_form_represents(k: &QuadField, p: i64) -> bool {
        let (b, c) = k.min_poly();
        // N(x + yθ) = x² - Bxy + Cy²
        for x in -p..=p {
            for y in 1..=p {
                if x * x - b * x * y + c * y * y == p {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn splitting_examples() {
        assert!(splits(5, &field(-4)).unwrap());
        assert!(!splits(3, &field(-4)).unwrap());
        assert!(splits(2, &field(-7)).unwrap());
        assert_eq!(splits(9, &field(-4)), Err(Error::NotPrime(9)));
        assert_eq!(splits(1, &field(-4)), Err(Error::NotPrime(1)));
        // class number one: split primes are exactly the norms of integers
        for d in [-3, -4, -7, -8, -11] {
            let k = field(d);
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
                let ramified = d.rem_euclid(p as i64) == 0 || (p == 2 && d % 4 == 0);
                if ramified {
                    assert!(!splits(p, &k).unwrap());
                } else {
                    assert_eq!(
                        splits(p, &k).unwrap(),
                        norm_form_represents(&k, p as i64),
                        "d={d} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn hypothesis_examples() {
        let k = field(-4);
        assert!(!unit_theorem_hypothesis(15, &k));
        assert!(unit_theorem_hypothesis(5, &k));
        assert!(unit_theorem_hypothesis(25, &k));
        assert!(!unit_theorem_hypothesis(3, &k));
        assert!(!unit_theorem_hypothesis(10, &k));
        assert!(!unit_theorem_hypothesis(1, &k));
        assert_eq!(prime_split_status(15, &k), vec![(3, false), (5, true)]);
    }

    fn pairs(g: &ReciprocityGroup) -> Vec<(i64, i64)> {
        g.cosets().iter().map(|m| (m.d, m.c)).collect()
    }

    #[test]
    fn gaussian_group_matches_listed_cosets() {
        let k = field(-4);
        let g6 = enumerate_reciprocity(&k, 6).unwrap();
        assert_eq!(g6.cosets().len(), 4);
        let listed6 = [
            Mat2::new(1, 0, 0, 1),
            Mat2::new(1, -2, 2, 1),
            Mat2::new(1, -4, 4, 1),
            Mat2::new(3, -2, 2, 3),
        ];
        let mut hit: Vec<usize> = listed6.iter().map(|a| g6.coset_of(a).unwrap()).collect();
        hit.sort();
        assert_eq!(hit, vec![0, 1, 2, 3]);

        let g10 = enumerate_reciprocity(&k, 10).unwrap();
        assert_eq!(g10.cosets().len(), 8);
        let listed10 = [
            Mat2::new(1, 0, 0, 1),
            Mat2::new(1, -4, 4, 1),
            Mat2::new(1, -6, 6, 1),
            Mat2::new(2, -3, 3, 2),
            Mat2::new(2, -5, 5, 2),
            Mat2::new(2, -7, 7, 2),
            Mat2::new(3, 0, 0, 3),
            Mat2::new(4, -5, 5, 4),
        ];
        let mut hit: Vec<usize> = listed10.iter().map(|a| g10.coset_of(a).unwrap()).collect();
        hit.sort();
        assert_eq!(hit, (0..8).collect::<Vec<_>>());
        assert_eq!(g10.coset_of(&Mat2::new(1, 1, 0, 1)), None);
    }

    #[test]
    fn level_two_counts_all_pairs() {
        for d in [-3, -4, -7, -8, -15] {
            let k = field(d);
            let g = enumerate_reciprocity(&k, 2).unwrap();
            let mut valid = Vec::new();
            for t in 0..2 {
                for s in 0..2 {
                    if k.element(t, s, 2).det().rem_euclid(2) == 1 {
                        valid.push((t, s));
                    }
                }
            }
            // ±1 coincide mod 2
            let expect = match d {
                -4 => valid.len() / 2,
                -3 => valid.len() / 3,
                _ => valid.len(),
            };
            assert_eq!(pairs(&g).len(), expect, "d = {d}");
        }
    }

    #[test]
    fn group_closure_and_partition() {
        for d in [-3, -4, -7, -8] {
            let k = field(d);
            for n in 2..=12u64 {
                let g = enumerate_reciprocity(&k, n).unwrap();
                let ni = n as i64;
                let mut elems = Vec::new();
                for t in 0..ni {
                    for s in 0..ni {
                        let m = k.element(t, s, n);
                        if unit_mod(m.det(), n) {
                            elems.push(m);
                        }
                    }
                }
                for x in &elems {
                    for y in &elems {
                        let z = x.mul_mod(y, n);
                        assert!(g.coset_of(&z).is_some(), "d={d} N={n}: {x}·{y} left W");
                    }
                }
                let kernel = g.kernel();
                assert_eq!(elems.len() % kernel.len(), 0);
                assert_eq!(g.cosets().len() * kernel.len(), elems.len(), "d={d} N={n}");
            }
        }
    }

    #[test]
    fn example_one_conjugates() {
        let ctx = EvalContext::new(128, 32).unwrap();
        let k = field(-4);
        let p = phi_ratio_squared_product(3).unwrap().pow(12);
        let xs = conjugates(&p, &k, &ctx).unwrap();
        assert_eq!(xs.len(), 4);
        let x1 = xs[0].real().to_f64();
        assert!((x1 - 72954.0).abs() < 0.1, "{x1}");
        for x in &xs {
            assert!(x.imag().to_f64().abs() < 1e-20 * x.real().to_f64().abs().max(1.0));
        }
        // (X² - 72954X + 729)²: both roots appear twice
        let mut re: Vec<f64> = xs.iter().map(|x| x.real().to_f64()).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let small = (72954.0 - (72954.0f64 * 72954.0 - 4.0 * 729.0).sqrt()) / 2.0;
        assert!((re[0] - small).abs() < 1e-9 && (re[1] - small).abs() < 1e-9);
        assert!((re[2] - re[3]).abs() < 1e-6);
    }

    #[test]
    fn kernel_representatives_give_same_values() {
        let ctx = EvalContext::new(128, 32).unwrap();
        let k = field(-4);
        let theta = k.theta().to_complex(&ctx);
        let p = phi_ratio_squared_product(3).unwrap().pow(12);
        let g = enumerate_reciprocity(&k, p.level()).unwrap();
        for alpha in g.cosets() {
            let base = eval_product(&act_gl2_on_power(&p, alpha).unwrap(), &theta, &ctx).unwrap();
            for kappa in g.kernel() {
                let other = alpha.mul_mod(&kappa, g.modulus());
                let v = eval_product(&act_gl2_on_power(&p, &other).unwrap(), &theta, &ctx).unwrap();
                let res = log2_f64(&relative_residual(&v, &base));
                assert!(res < -(ctx.prec_bits() as f64) + 16.0, "{alpha} {kappa}: 2^{res}");
            }
        }
    }

    #[test]
    fn trivial_level_gives_singleton() {
        let ctx = EvalContext::new(96, 16).unwrap();
        let k = field(-7);
        // W_{K,2} = {1} for d_K = -7
        let mut p = SiegelProduct::one();
        p.push(&SiegelIndex::frac(1, 2, 1, 2).unwrap(), 24);
        let g = enumerate_reciprocity(&k, 2).unwrap();
        let xs = conjugates(&p, &k, &ctx).unwrap();
        assert_eq!(g.cosets().len(), 1);
        assert_eq!(xs.len(), 1);
        let direct = eval_product(&p, &k.theta().to_complex(&ctx), &ctx).unwrap();
        assert_eq!(xs[0], direct);
    }

    #[test]
    fn rejects_unstable_products() {
        let ctx = EvalContext::default();
        let p = phi_ratio_squared_product(3).unwrap();
        assert_eq!(conjugates(&p, &field(-4), &ctx), Err(Error::NotGaloisStable(12)));
    }
}
