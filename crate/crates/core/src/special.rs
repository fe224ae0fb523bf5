//! Reference special functions: Bernoulli and Euler numbers, Bernoulli
//! polynomials, complex Γ, ζ and ψ, and the constants γ, ln√(2π), ln A.
//!
//! These serve as oracles for the umbral routes, so nothing here calls into
//! the evaluation engine except [`constants`], which deliberately checks the
//! engine's value of γ against an independent limit.

use crate::error::{Error, Result};
use crate::numerics::{expm1, richardson_doubling, CompensatedSum, C64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Largest index served by the Bernoulli and Euler tables.
pub const TABLE_MAX: usize = 60;

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let prev = row[k - 1].clone();
        row.push(prev * BigInt::from(n + 1 - k) / BigInt::from(k));
    }
    row
}

fn bernoulli_exact() -> &'static Vec<BigRational> {
    static T: OnceLock<Vec<BigRational>> = OnceLock::new();
    T.get_or_init(|| {
        // Σ_{k=0}^{n} C(n+1, k) B_k = 0, B_0 = 1.
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for n in 1..=TABLE_MAX {
            let row = binomial_row(n + 1);
            let mut acc = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(row[k].clone()) * bk;
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
        }
        b
    })
}

fn bernoulli_f64() -> &'static Vec<f64> {
    static T: OnceLock<Vec<f64>> = OnceLock::new();
    T.get_or_init(|| bernoulli_exact().iter().map(|r| r.to_f64().unwrap()).collect())
}

/// Bernoulli numbers B_0..=B_{n_max} with the convention B_1 = −1/2.
pub fn bernoulli_numbers(n_max: usize) -> Result<Vec<f64>> {
    if n_max > TABLE_MAX {
        return Err(Error::Domain(format!("n_max = {n_max} exceeds {TABLE_MAX}")));
    }
    Ok(bernoulli_f64()[..=n_max].to_vec())
}

/// B_n, convention B_1 = −1/2. Panics past the table.
pub fn bernoulli(n: usize) -> f64 {
    bernoulli_f64()[n]
}

/// B_n(1), which differs from B_n only at n = 1 (+1/2). These are the
/// moments of the Bernoulli umbra.
pub fn bernoulli_at_one(n: usize) -> f64 {
    if n == 1 {
        0.5
    } else {
        bernoulli(n)
    }
}

/// Bernoulli polynomial B_n(x) = Σ C(n,k) B_k x^{n−k}.
pub fn bernoulli_poly(n: usize, x: C64) -> Result<C64> {
    if n > TABLE_MAX {
        return Err(Error::Domain(format!("degree {n} exceeds {TABLE_MAX}")));
    }
    // Horner in x over the coefficients C(n,k) B_k.
    let mut acc = C64::new(0.0, 0.0);
    let mut c = 1.0f64;
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        coeffs.push(c * bernoulli(k));
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    for k in 0..=n {
        acc = acc * x + coeffs[k];
    }
    Ok(acc)
}

/// Euler numbers E_0..=E_{n_max} (sech z = Σ E_n z^n/n!).
pub fn euler_numbers(n_max: usize) -> Result<Vec<f64>> {
    static T: OnceLock<Vec<f64>> = OnceLock::new();
    if n_max > TABLE_MAX {
        return Err(Error::Domain(format!("n_max = {n_max} exceeds {TABLE_MAX}")));
    }
    let t = T.get_or_init(|| {
        let mut e: Vec<BigInt> = vec![BigInt::one()];
        for n in 1..=TABLE_MAX {
            if n % 2 == 1 {
                e.push(BigInt::zero());
                continue;
            }
            let row = binomial_row(n);
            let mut acc = BigInt::zero();
            for k in (0..n).step_by(2) {
                acc += &row[k] * &e[k];
            }
            e.push(-acc);
        }
        e.iter().map(|v| v.to_f64().unwrap()).collect()
    });
    Ok(t[..=n_max].to_vec())
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Complex Γ(z): Lanczos (g = 7) with reflection for Re z < 1/2.
pub fn gamma(z: C64) -> Result<C64> {
    if nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Ok(C64::new(PI, 0.0) / (s * gamma(C64::new(1.0, 0.0) - z)?));
    }
    let x = z - 1.0;
    let mut a = C64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += *c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powc(x + 0.5) * (-t).exp() * a)
}

/// Γ(z) by shifting to Re z ≥ 20 with the recurrence and applying the
/// Stirling series. Independent of [`gamma`]; kept as its cross-check.
pub fn gamma_stirling(z: C64) -> Result<C64> {
    if nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Ok(C64::new(PI, 0.0) / (s * gamma_stirling(C64::new(1.0, 0.0) - z)?));
    }
    let mut w = z;
    let mut prod = C64::new(1.0, 0.0);
    while w.re < 20.0 {
        prod *= w;
        w += 1.0;
    }
    Ok((ln_gamma_asymptotic(w)).exp() / prod)
}

fn ln_gamma_asymptotic(w: C64) -> C64 {
    let mut acc = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = w * w;
    let mut wp = w;
    for k in 1..12 {
        let b = bernoulli(2 * k);
        acc += b / ((2 * k) as f64 * (2 * k - 1) as f64) / wp;
        wp *= w2;
    }
    acc
}

/// Digamma ψ(z) by recurrence to Re z ≥ 10 and the asymptotic series;
/// reflection for Re z < 1/2.
pub fn digamma(z: C64) -> Result<C64> {
    if nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        let cot = (z * PI).cos() / (z * PI).sin();
        return Ok(digamma(C64::new(1.0, 0.0) - z)? - cot * PI);
    }
    let mut w = z;
    let mut acc = C64::new(0.0, 0.0);
    while w.re < 10.0 {
        acc -= w.inv();
        w += 1.0;
    }
    acc += w.ln() - 0.5 / w;
    let w2 = w * w;
    let mut wp = w2;
    for k in 1..10 {
        acc -= bernoulli(2 * k) / (2 * k) as f64 / wp;
        wp *= w2;
    }
    Ok(acc)
}

fn borwein_coefficients() -> &'static Vec<f64> {
    static D: OnceLock<Vec<f64>> = OnceLock::new();
    D.get_or_init(|| {
        let n = 60usize;
        let nf = n as f64;
        let mut d = Vec::with_capacity(n + 1);
        let mut term = 1.0;
        let mut acc = 1.0;
        d.push(acc);
        for i in 1..=n {
            let fi = i as f64;
            term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
            acc += term;
            d.push(acc);
        }
        d
    })
}

/// Dirichlet η(s) by Borwein's accelerated alternating series (n = 60).
pub fn eta(s: C64) -> C64 {
    let d = borwein_coefficients();
    let n = d.len() - 1;
    let dn = d[n];
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let base = C64::new((k + 1) as f64, 0.0);
        acc.add((-s * base.ln()).exp() * (sign * (d[k] - dn)));
    }
    -acc.value() / dn
}

/// Riemann ζ(s): η-series for Re s ≥ −1.5, functional equation elsewhere.
pub fn zeta(s: C64) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::Pole(s));
    }
    if s.re < -1.5 {
        let one = C64::new(1.0, 0.0);
        let t = one - s;
        let factor = C64::new(2.0, 0.0).powc(s) * C64::new(PI, 0.0).powc(s - 1.0) * (s * (PI / 2.0)).sin() * gamma(t)?;
        return Ok(factor * zeta(t)?);
    }
    // 1 − 2^{1−s} = −expm1((1−s) ln 2), exact near the pole.
    let denom = -expm1((C64::new(1.0, 0.0) - s) * 2f64.ln());
    Ok(eta(s) / denom)
}

/// Mathematical constants, each computed rather than stored.
#[derive(Clone, Debug)]
pub struct ConstantsTable {
    pub euler_gamma: f64,
    pub log_sqrt_2pi: f64,
    /// ln A, A the Glaisher–Kinkelin constant.
    pub glaisher_log: f64,
    pub notes: Vec<(&'static str, String)>,
}

/// γ as the limit of H_n − ln n, Richardson-extrapolated on a doubling grid.
pub fn euler_gamma_limit() -> f64 {
    let mut vals = Vec::new();
    let mut h = CompensatedSum::new();
    let mut k = 0usize;
    for j in 0..12 {
        let n = 16usize << j;
        while k < n {
            k += 1;
            h.add(C64::new(1.0 / k as f64, 0.0));
        }
        vals.push(h.value() - (n as f64).ln());
    }
    richardson_doubling(&vals, 1.0).value.re
}

/// ζ′(s) by the Cauchy-circle derivative service.
pub fn zeta_derivative(s: C64) -> Result<C64> {
    let f = crate::analytic::AnalyticFn::new(|w| zeta(w).unwrap_or(C64::new(f64::NAN, f64::NAN)))
        .with_singularity(crate::analytic::Singularity::pole(C64::new(1.0, 0.0), 1));
    Ok(crate::analytic::derivative(&f, s, 1)?.value)
}

/// Builds the constants table. γ comes from the Euler–Maclaurin route for
/// ln B and is cross-checked against the H_n − ln n limit; ln A comes from
/// ζ′(−1).
pub fn constants() -> Result<ConstantsTable> {
    static T: OnceLock<std::result::Result<ConstantsTable, Error>> = OnceLock::new();
    T.get_or_init(|| {
        let ln = crate::analytic::AnalyticFn::log();
        let em = crate::eval::eval_em(&ln, &crate::eval::EmParams::default())?;
        let gamma_em = -em.value.re;
        let gamma_lim = euler_gamma_limit();
        if (gamma_em - gamma_lim).abs() > 1e-10 {
            return Err(Error::CrossCheck(format!("gamma: EM route {gamma_em} vs limit {gamma_lim}")));
        }
        let zp = zeta_derivative(C64::new(-1.0, 0.0))?;
        let glaisher_log = 1.0 / 12.0 - zp.re;
        Ok(ConstantsTable {
            euler_gamma: gamma_em,
            log_sqrt_2pi: 0.5 * (2.0 * PI).ln(),
            glaisher_log,
            notes: vec![
                ("euler_gamma", format!("-ln B by Euler-Maclaurin; limit H_n - ln n gives {gamma_lim}")),
                ("log_sqrt_2pi", "0.5 ln(2 pi)".to_string()),
                ("glaisher_log", format!("1/12 - zeta'(-1), zeta'(-1) = {}", zp.re)),
            ],
        })
    })
    .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn bernoulli_small_values() {
        let b = bernoulli_numbers(12).unwrap();
        assert_eq!(b[1], -0.5);
        assert!((b[2] - 1.0 / 6.0).abs() < 1e-16);
        assert_eq!(b[3], 0.0);
        assert!((b[12] + 691.0 / 2730.0).abs() < 1e-15);
        assert_eq!(bernoulli_at_one(1), 0.5);
        assert!(bernoulli_numbers(61).is_err());
    }

    #[test]
    fn bernoulli_polynomial_values() {
        let v = bernoulli_poly(2, c(0.5)).unwrap();
        assert!((v.re + 1.0 / 12.0).abs() < 1e-16);
        // B_n(1) = B_n for n ≥ 2, B_1(1) = 1/2
        for n in 2..20 {
            assert!((bernoulli_poly(n, c(1.0)).unwrap().re - bernoulli(n)).abs() < 1e-9 * (1.0 + bernoulli(n).abs()));
        }
        // B_n(x+1) − B_n(x) = n x^{n−1}
        let x = C64::new(0.3, -0.7);
        let d = bernoulli_poly(7, x + 1.0).unwrap() - bernoulli_poly(7, x).unwrap();
        assert!((d - x.powu(6) * 7.0).norm() < 1e-12);
    }

    #[test]
    fn euler_numbers_match_sech_series() {
        let e = euler_numbers(10).unwrap();
        assert_eq!(e[..11], [1.0, 0.0, -1.0, 0.0, 5.0, 0.0, -61.0, 0.0, 1385.0, 0.0, -50521.0]);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(c(0.5)).unwrap().re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(5.0)).unwrap().re - 24.0).abs() < 1e-12);
        let g = gamma(C64::new(1.0, 1.0)).unwrap();
        assert!((g.re - 0.498_015_668_118_356).abs() < 1e-12);
        assert!((g.im + 0.154_949_828_301_810_7).abs() < 1e-12);
        let f = gamma_stirling(C64::new(1.0, 1.0)).unwrap();
        assert!((g - f).norm() < 1e-13);
        assert!(gamma(c(-2.0)).is_err());
    }

    #[test]
    fn gamma_functional_equation_on_grid() {
        for i in 0..20 {
            let z = C64::new(-4.3 + 0.61 * i as f64, 3.0 - 0.37 * i as f64);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "z = {z}");
            let alt = gamma_stirling(z).unwrap();
            assert!((gamma(z).unwrap() - alt).norm() <= 1e-12 * alt.norm(), "z = {z}");
        }
    }

    #[test]
    fn legendre_duplication_quarter() {
        // Γ(z)Γ(z+1/2) = 2^{1−2z} √π Γ(2z) at z = 1/4
        let z = c(0.25);
        let lhs = gamma(z).unwrap() * gamma(z + 0.5).unwrap();
        let rhs = C64::new(2f64.powf(0.5) * PI.sqrt(), 0.0) * gamma(c(0.5)).unwrap();
        assert!((lhs - rhs).norm() < 1e-13 * rhs.norm());
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(c(2.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-13);
        assert!((zeta(c(-1.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-12);
        assert!((zeta(c(0.0)).unwrap().re + 0.5).abs() < 1e-13);
        assert!((zeta(c(0.5)).unwrap().re + 1.460_354_508_809_586_8).abs() < 1e-12);
        assert!((zeta(c(-3.0)).unwrap().re - 1.0 / 120.0).abs() < 1e-13);
        assert!((zeta(c(-7.0)).unwrap().re - 1.0 / 240.0).abs() < 1e-12);
        assert!(zeta(c(1.0)).is_err());
        // continuation agrees with the eta branch in the overlap
        let s = C64::new(-1.6, 0.4);
        let one = C64::new(1.0, 0.0);
        let fe = C64::new(2.0, 0.0).powc(s)
            * C64::new(PI, 0.0).powc(s - 1.0)
            * (s * (PI / 2.0)).sin()
            * gamma(one - s).unwrap()
            * zeta(one - s).unwrap();
        let direct = eta(s) / (one - C64::new(2.0, 0.0).powc(one - s));
        assert!((fe - direct).norm() < 1e-11);
    }

    #[test]
    fn zeta_near_pole_and_slope_at_zero() {
        for s in [1e-2, 1e-3, 1e-4] {
            let z = zeta(c(1.0 + s)).unwrap().re;
            assert!((z * s - 1.0).abs() < 2.0 * s);
        }
        let g = euler_gamma_limit();
        let s = 1e-5;
        assert!((zeta(c(1.0 + s)).unwrap().re - 1.0 / s - g).abs() < 1e-6);
        let slope = zeta_derivative(c(0.0)).unwrap().re;
        assert!((slope + 0.5 * (2.0 * PI).ln()).abs() < 1e-10);
    }

    #[test]
    fn digamma_values() {
        let g = euler_gamma_limit();
        assert!((digamma(c(1.0)).unwrap().re + g).abs() < 1e-13);
        let z = C64::new(0.3, 1.2);
        let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap();
        assert!((d - z.inv()).norm() < 1e-13);
    }

    #[test]
    fn euler_gamma_limit_digits() {
        assert!((euler_gamma_limit() - 0.577_215_664_901_532_9).abs() < 1e-13);
    }
}
