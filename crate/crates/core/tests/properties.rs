use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use scv::form::CoefficientTable;
use scv::poincare::SumControl;
use scv::qalg::{eta_power, eta_power_f64, ExactSeries, QSeries};
use scv::rcproj::{g_poly, rc_bracket, GPolyParams, WeightedSeries};
use scv::shiftconv::{alpha_coeff, beta_coeff, dhat, ConvolutionRequest};
use scv::specialfun::{bessel, kloosterman_uncached, BesselQuery};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Sum over `x` coprime to `c` with the inverse found by search.
fn kloosterman_oracle(m: i64, n: i64, c: i64) -> f64 {
    (0..c)
        .filter(|&x| gcd(x, c) == 1)
        .map(|x| {
            let xbar = (0..c).find(|&y| (x * y).rem_euclid(c) == 1 % c).unwrap();
            let phase = (m * x + n * xbar).rem_euclid(c) as f64 / c as f64;
            (2.0 * PI * phase).cos()
        })
        .sum()
}

/// Trapezoid rule for `J_n(x) = (2 pi)^{-1} int_0^{2 pi} cos(n t - x sin t) dt`,
/// exact to rounding for a periodic analytic integrand.
fn bessel_j_oracle(n: u32, x: f64) -> f64 {
    let pts = 512;
    (0..pts)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / pts as f64;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / pts as f64
}

/// `I_n(x) = (2 pi)^{-1} int_0^{2 pi} exp(x cos t) cos(n t) dt`.
fn bessel_i_oracle(n: u32, x: f64) -> f64 {
    let pts = 512;
    (0..pts)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / pts as f64;
            (x * t.cos()).exp() * (n as f64 * t).cos()
        })
        .sum::<f64>()
        / pts as f64
}

/// `x (x-1) ... (x-j+1) / j!` for any integer `x`.
fn binomial_oracle(x: i64, j: i64) -> BigInt {
    if j < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j {
        num *= x - i;
        den *= i + 1;
    }
    num / den
}

/// `q^{P S / 24} prod_n (1 - q^{S n})^P` by repeated multiplication.
fn eta_oracle(power: u32, scale: u32, nmax: i64) -> Vec<(i64, BigInt)> {
    let start = (power * scale / 24) as i64;
    let len = (nmax - start + 1).max(0) as usize;
    let mut prod = vec![BigInt::zero(); len];
    if len == 0 {
        return Vec::new();
    }
    prod[0] = BigInt::one();
    for n in 1.. {
        let step = (scale as usize) * n;
        if step >= len {
            break;
        }
        for _ in 0..power {
            for i in (step..len).rev() {
                let t = prod[i - step].clone();
                prod[i] -= t;
            }
        }
    }
    prod.into_iter().enumerate().map(|(i, c)| (start + i as i64, c)).collect()
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn exact_series(start: i64, coeffs: &[i64]) -> ExactSeries {
    QSeries::new(start, start + coeffs.len() as i64 - 1, coeffs.iter().map(|&c| rational(c)).collect()).unwrap()
}

fn small_series() -> impl Strategy<Value = (i64, Vec<i64>)> {
    (-2i64..3, prop::collection::vec(-20i64..20, 4..12))
}

const ETA_SHAPES: [(u32, u32); 8] = [(24, 1), (12, 2), (8, 3), (6, 4), (4, 6), (2, 12), (48, 1), (16, 3)];

/// Naive oracle for the windowed symmetrized sum: the two one-sided series
/// are accumulated separately and subtracted at every cutoff.
fn naive_dhat(a: &[f64], h: usize, s: f64, terms: usize, window: usize) -> f64 {
    let (mut d_plus, mut d_minus) = (0.0, 0.0);
    let mut partials = Vec::with_capacity(terms);
    for n in 1..=terms {
        let c = a[n + h] * a[n];
        d_plus += c * (n as f64).powf(-s);
        d_minus += c * ((n + h) as f64).powf(-s);
        partials.push(d_plus - d_minus);
    }
    partials[terms - window..].iter().sum::<f64>() / window as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kloosterman_matches_brute_force(m in -60i64..60, n in -60i64..60, c in 1i64..=50) {
        let got = kloosterman_uncached(m, n, c);
        let want = kloosterman_oracle(m, n, c);
        prop_assert!((got - want).abs() < 1e-9, "K({m},{n},{c}) = {got}, oracle {want}");
    }

    #[test]
    fn kloosterman_is_symmetric(m in -1000i64..1000, n in -1000i64..1000, c in 1i64..400) {
        prop_assert!((kloosterman_uncached(m, n, c) - kloosterman_uncached(n, m, c)).abs() < 1e-9);
    }

    #[test]
    fn bessel_matches_integral_oracle(order in 0u32..30, x in 0.0f64..30.0) {
        let j = bessel(BesselQuery::j(order, x), 1e-14).unwrap();
        let jo = bessel_j_oracle(order, x);
        prop_assert!((j - jo).abs() < 1e-12, "J_{order}({x}) = {j}, oracle {jo}");
        let i = bessel(BesselQuery::i(order, x), 1e-14).unwrap();
        let io = bessel_i_oracle(order, x);
        // the oracle's quadrature rounds at the size of its integrand, e^x
        prop_assert!((i - io).abs() <= 1e-14 * x.exp().max(1.0), "I_{order}({x}) = {i}, oracle {io}");
    }

    #[test]
    fn rc_bracket_parity(
        (fs, fc) in small_series(),
        (gs, gc) in small_series(),
        k in -4i64..14,
        l in -4i64..14,
        nu in 0u32..5,
    ) {
        let f = WeightedSeries::new(exact_series(fs, &fc), k);
        let g = WeightedSeries::new(exact_series(gs, &gc), l);
        let fg = rc_bracket(&f, &g, nu).unwrap();
        let gf = rc_bracket(&g, &f, nu).unwrap();
        let sign = if nu % 2 == 0 { rational(1) } else { rational(-1) };
        prop_assert_eq!(fg.series, gf.series.scale(&sign));
        prop_assert_eq!(fg.weight, k + l + 2 * nu as i64);
    }

    #[test]
    fn rc_bracket_zero_is_product((fs, fc) in small_series(), (gs, gc) in small_series(), k in -4i64..14, l in -4i64..14) {
        let f = exact_series(fs, &fc);
        let g = exact_series(gs, &gc);
        let b = rc_bracket(&WeightedSeries::new(f.clone(), k), &WeightedSeries::new(g.clone(), l), 0).unwrap();
        prop_assert_eq!(b.series, f.mul(&g));
    }

    #[test]
    fn g_poly_is_homogeneous(a in 2i64..9, b in 0i64..14, x in -30i64..30, y in -30i64..30, t in -5i64..6) {
        let p = GPolyParams::new(a, b).unwrap();
        let lhs = g_poly(p, &rational(t * x), &rational(t * y));
        let mut tp = rational(1);
        for _ in 0..a - 2 {
            tp *= rational(t);
        }
        prop_assert_eq!(lhs, tp * g_poly(p, &rational(x), &rational(y)));
        let two = GPolyParams::new(2, b).unwrap();
        prop_assert_eq!(g_poly(two, &rational(x), &rational(y)), rational(1));
    }

    #[test]
    fn alpha_beta_match_falling_factorials(nu in 0u32..8, k1 in 2u32..30, k2 in 2u32..30) {
        let mut total = BigInt::zero();
        for mu in 0..=nu {
            let want = binomial_oracle(nu as i64 - k1 as i64 + 1, (nu - mu) as i64)
                * binomial_oracle(nu as i64 + k2 as i64 - 1, mu as i64);
            prop_assert_eq!(alpha_coeff(nu, k1, k2, mu), want.clone());
            total += want;
        }
        prop_assert_eq!(beta_coeff(nu, k1, k2), total);
    }

    #[test]
    fn eta_power_matches_pentagonal_product(shape in 0usize..ETA_SHAPES.len(), nmax in 0i64..80) {
        let (p, s) = ETA_SHAPES[shape];
        let series = eta_power(p, s, nmax).unwrap();
        for (n, c) in eta_oracle(p, s, nmax) {
            prop_assert_eq!(series.at(n), BigRational::from_integer(c), "eta({}tau)^{} at q^{}", s, p, n);
        }
    }

    #[test]
    fn eta_3tau_8_lives_on_one_mod_three(nmax in 1i64..400) {
        let f = eta_power(8, 3, nmax).unwrap();
        for n in f.start()..=nmax {
            if n.rem_euclid(3) != 1 {
                prop_assert!(f.at(n).is_zero(), "q^{n}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn paired_summation_matches_naive_difference(h in 1u64..30, which in 0usize..2) {
        let terms = 10_000;
        let (power, scale, weight, level) = [(24, 1, 12, 1), (8, 3, 4, 9)][which];
        let f = eta_power_f64(power, scale, (terms + 40) as i64).unwrap();
        let table = CoefficientTable::from_series("oracle", weight, level, &f).unwrap();
        let control = SumControl::default();
        let v = dhat(&table, &table, &ConvolutionRequest::new(h, terms).with_control(control)).unwrap();
        let window = control.tail_window.min((terms / 10).max(1));
        let naive = naive_dhat(table.coeffs(), h as usize, weight as f64 - 1.0, terms, window);
        let scale_of = v.value.abs().max(1.0);
        prop_assert!((v.value - naive).abs() < 1e-7 * scale_of, "h={h}: paired {} naive {naive}", v.value);
    }
}
