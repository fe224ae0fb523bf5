//! Gosper-type series for even kernels J(z) = Σ a_{2n} z^{2n}/(2n)!.
//!
//! Kernels are evaluated as functions of u = z², which makes them
//! independent of the square-root branch. The Bessel family
//! J(z) = z^{−ν} J_ν(z) uses its power series for |z| ≤ 8, the Poisson
//! integral up to |z| = 30 and the Hankel expansion beyond.

use crate::analytic::{AnalyticFn, Singularity};
use crate::error::{Error, Result};
use crate::fracsum::{FracSumParams, FracSummer, MixedSeries};
use crate::numerics::{richardson_doubling, CompensatedSum, Estimate, C64};
use crate::special::gamma;
use std::f64::consts::PI;

const SERIES_RADIUS: f64 = 8.0;
const HANKEL_RADIUS: f64 = 30.0;

#[derive(Clone, Debug, PartialEq)]
pub enum KernelKind {
    /// z^{−ν} J_ν(z).
    Bessel { nu: f64 },
    /// a_0, a_2, a_4, … of a finite even series.
    Coefficients(Vec<C64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    /// Constant factor applied to the kernel.
    pub scale: C64,
}

impl KernelSpec {
    pub fn bessel(nu: f64) -> Result<Self> {
        if nu < 0.0 && nu.fract() == 0.0 {
            return Err(Error::Domain(format!("kernel order {nu} is a negative integer")));
        }
        Ok(KernelSpec { kind: KernelKind::Bessel { nu }, scale: C64::new(1.0, 0.0) })
    }

    pub fn coefficients(a_even: Vec<C64>) -> Self {
        KernelSpec { kind: KernelKind::Coefficients(a_even), scale: C64::new(1.0, 0.0) }
    }

    /// sin z / z, the ν = 1/2 kernel without its √(2/π).
    pub fn sin_kernel() -> Self {
        KernelSpec { kind: KernelKind::Bessel { nu: 0.5 }, scale: C64::new((PI / 2.0).sqrt(), 0.0) }
    }

    /// cos z, the ν = −1/2 kernel without its √(2/π).
    pub fn cos_kernel() -> Self {
        KernelSpec { kind: KernelKind::Bessel { nu: -0.5 }, scale: C64::new((PI / 2.0).sqrt(), 0.0) }
    }

    pub fn with_scale(mut self, scale: C64) -> Self {
        self.scale = scale;
        self
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.eval_sq(z * z)
    }

    /// J(√u).
    pub fn eval_sq(&self, u: C64) -> Result<C64> {
        let v = match &self.kind {
            KernelKind::Bessel { nu } => bessel_kernel_sq(*nu, u)?,
            KernelKind::Coefficients(a) => {
                let c = coefficient_series(a);
                horner(&c, u)
            }
        };
        Ok(v * self.scale)
    }

    /// J′(z)/z as a function of u = z².
    pub fn derivative_over_z_sq(&self, u: C64) -> Result<C64> {
        let v = match &self.kind {
            // (z^{−ν}J_ν)′ = −z·z^{−ν−1}J_{ν+1}
            KernelKind::Bessel { nu } => -bessel_kernel_sq(nu + 1.0, u)?,
            KernelKind::Coefficients(a) => {
                let c = coefficient_series(a);
                let d: Vec<C64> = c.iter().enumerate().skip(1).map(|(k, ck)| ck * (2 * k) as f64).collect();
                horner(&d, u)
            }
        };
        Ok(v * self.scale)
    }

    /// Coefficients c_k of J(√u) = Σ c_k u^k, k ≤ k_max.
    pub fn u_coefficients(&self, k_max: usize) -> Result<Vec<C64>> {
        let c = match &self.kind {
            KernelKind::Bessel { nu } => {
                let mut t = C64::new(2f64.powf(-nu), 0.0) / gamma(C64::new(nu + 1.0, 0.0))?;
                let mut out = Vec::with_capacity(k_max + 1);
                for k in 0..=k_max {
                    out.push(t);
                    t *= -1.0 / (4.0 * (k as f64 + 1.0) * (k as f64 + nu + 1.0));
                }
                out
            }
            KernelKind::Coefficients(a) => {
                let mut c = coefficient_series(a);
                c.resize(k_max + 1, C64::new(0.0, 0.0));
                c
            }
        };
        Ok(c.into_iter().map(|v| v * self.scale).collect())
    }

    /// Power of 1/|z| in the kernel's envelope along the real axis: ν + ½
    /// for the Bessel family, unknown for coefficient kernels.
    pub fn envelope_decay(&self) -> Option<f64> {
        match self.kind {
            KernelKind::Bessel { nu } => Some(nu + 0.5),
            KernelKind::Coefficients(_) => None,
        }
    }

    /// Growth exponents (ν_a, ν_J) stated for the Bessel family.
    pub fn claimed_exponents(&self) -> Option<(f64, f64)> {
        match self.kind {
            KernelKind::Bessel { nu } => Some((-(nu + 0.5), 0.0)),
            KernelKind::Coefficients(_) => None,
        }
    }
}

fn coefficient_series(a: &[C64]) -> Vec<C64> {
    let mut fact = 1.0;
    a.iter()
        .enumerate()
        .map(|(k, ak)| {
            if k > 0 {
                fact *= ((2 * k - 1) * 2 * k) as f64;
            }
            ak / fact
        })
        .collect()
}

fn horner(c: &[C64], u: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, ck| acc * u + ck)
}

/// z^{−ν} J_ν(z).
pub fn bessel_kernel(nu: f64, z: C64) -> Result<C64> {
    bessel_kernel_sq(nu, z * z)
}

fn bessel_kernel_sq(nu: f64, u: C64) -> Result<C64> {
    if nu < 0.0 && nu.fract() == 0.0 {
        return Err(Error::Domain(format!("kernel order {nu} is a negative integer")));
    }
    let norm = (2.0 / PI).sqrt();
    if nu == 0.5 && u.norm() > 1e-6 {
        let z = u.sqrt();
        return Ok(z.sin() / z * norm);
    }
    if nu == -0.5 {
        return Ok(u.sqrt().cos() * norm);
    }
    if u.norm() <= SERIES_RADIUS * SERIES_RADIUS {
        return kernel_series(nu, u);
    }
    if nu <= -0.5 {
        // K_ν = 2(ν + 1) K_{ν+1} − u K_{ν+2}
        return Ok(bessel_kernel_sq(nu + 1.0, u)? * (2.0 * (nu + 1.0)) - u * bessel_kernel_sq(nu + 2.0, u)?);
    }
    let z = u.sqrt();
    if z.norm() >= HANKEL_RADIUS {
        Ok(hankel(nu, z) * (-nu * z.ln()).exp())
    } else {
        poisson(nu, z)
    }
}

fn kernel_series(nu: f64, u: C64) -> Result<C64> {
    let mut t = C64::new(2f64.powf(-nu), 0.0) / gamma(C64::new(nu + 1.0, 0.0))?;
    let mut acc = CompensatedSum::new();
    let mut n = 0usize;
    loop {
        acc.add(t);
        t *= -u / (4.0 * (n as f64 + 1.0) * (n as f64 + nu + 1.0));
        n += 1;
        let past_peak = (n as f64) * (n as f64 + nu) > u.norm();
        if past_peak && t.norm() <= 1e-17 * acc.value().norm().max(1e-300) {
            return Ok(acc.value());
        }
        if n > 400 {
            return Err(Error::NonConvergent("kernel power series".into()));
        }
    }
}

/// J_ν(z) for large |z|, Re z ≥ 0, from the asymptotic P, Q series
/// truncated at their smallest term.
fn hankel(nu: f64, z: C64) -> C64 {
    let mu = 4.0 * nu * nu;
    let mut p = C64::new(1.0, 0.0);
    let mut q = C64::new(0.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kk = (2 * k - 1) as f64;
        term *= (mu - kk * kk) / (k as f64 * 8.0) / z;
        let m = term.norm();
        if m > last || m < 1e-18 {
            break;
        }
        last = m;
        // a_k/z^k enters Q for odd k and P for even k, alternating in pairs
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let chi = z - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// 2/(2^ν Γ(ν+½) √π) ∫_0^{π/2} cos(z cos θ) sin^{2ν}θ dθ, by tanh-sinh
/// quadrature (the endpoint θ = 0 may be singular).
fn poisson(nu: f64, z: C64) -> Result<C64> {
    let pref = 2.0 / (2f64.powf(nu) * PI.sqrt()) / gamma(C64::new(nu + 0.5, 0.0))?;
    let g = |theta: f64| (z * theta.cos()).cos() * theta.sin().powf(2.0 * nu);
    // θ(u) = (π/2)/(1 + e^{−2s}), s = (π/2) sinh u
    let node = |u: f64| {
        let s = 0.5 * PI * u.sinh();
        let theta = if s < 0.0 {
            let e = (2.0 * s).exp();
            0.5 * PI * e / (1.0 + e)
        } else {
            0.5 * PI / (1.0 + (-2.0 * s).exp())
        };
        let w = 0.25 * PI * 0.5 * PI * u.cosh() / (s.cosh() * s.cosh());
        (theta, w)
    };
    // each level returns the sum and the sum of magnitudes
    let level = |h: f64, odd_only: bool| -> (C64, f64) {
        let mut acc = CompensatedSum::new();
        let mut mag = 0.0;
        let n = (4.0 / h).round() as i64;
        for j in -n..=n {
            if odd_only && j % 2 == 0 {
                continue;
            }
            let (theta, w) = node(j as f64 * h);
            if theta <= 0.0 || w == 0.0 {
                continue;
            }
            let v = g(theta) * w;
            if v.re.is_finite() && v.im.is_finite() {
                acc.add(v);
                mag += v.norm();
            }
        }
        (acc.value(), mag)
    };
    let mut h = 0.5;
    let (first, mut mag) = level(h, false);
    let mut total = first * h;
    mag *= h;
    for _ in 0..10 {
        h *= 0.5;
        let (odd, odd_mag) = level(h, true);
        let next = total * 0.5 + odd * h;
        mag = mag * 0.5 + odd_mag * h;
        // cancellation limits the attainable accuracy to rounding of ∫|g|
        if (next - total).norm() <= 1e-15 * next.norm().max(mag) {
            return Ok(next * pref);
        }
        total = next;
    }
    Err(Error::NonConvergent("Poisson integral for the kernel".into()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectPolicy {
    pub n0: usize,
    pub n_max: usize,
    pub tol: f64,
}

impl Default for DirectPolicy {
    fn default() -> Self {
        DirectPolicy { n0: 64, n_max: 1 << 18, tol: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DirectSum {
    pub value: C64,
    pub err: f64,
    pub terms: usize,
    /// n⁻² majorant of the tail left after the last partial sum.
    pub tail_bound: f64,
}

/// Σ_{n≥start} term(n) with Richardson extrapolation: the terms are smooth
/// in n for large n (the kernel's sign change cancels the (−1)ⁿ), so the
/// tail expands in N^{−(g0 + k)}.
fn direct_series<T: Fn(usize) -> Result<C64>>(
    term: T,
    start: usize,
    g0: f64,
    policy: &DirectPolicy,
) -> Result<DirectSum> {
    let mut acc = CompensatedSum::new();
    let mut next = start;
    let mut n = policy.n0;
    let mut partials = Vec::new();
    let mut last_tail = f64::INFINITY;
    while n <= policy.n_max {
        let mut last = C64::new(0.0, 0.0);
        while next <= n {
            last = term(next)?;
            acc.add(last);
            next += 1;
        }
        partials.push(acc.value());
        let tail = last.norm() * n as f64 / g0;
        if tail >= last_tail && partials.len() > 3 {
            return Err(Error::NonConvergent("tail bound stalls; growth exponents violated".into()));
        }
        last_tail = tail;
        if partials.len() >= 3 {
            let r = richardson_doubling(&partials, g0);
            let err = r.err + 1e-15 * acc.magnitude();
            if err <= policy.tol.max(1e-15 * r.value.norm()) {
                return Ok(DirectSum { value: r.value, err, terms: n, tail_bound: tail });
            }
        }
        n *= 2;
    }
    let r = richardson_doubling(&partials, g0);
    if r.err <= 1e-8 * r.value.norm().max(1.0) {
        return Ok(DirectSum { value: r.value, err: r.err, terms: policy.n_max, tail_bound: last_tail });
    }
    Err(Error::NonConvergent(format!("direct Gosper sum, error {:.3e}", r.err)))
}

/// Σ_{n≥0} (−1)ⁿ/(n + ½) · J(√(b² + π²(n + ½)²)).
pub fn gosper_direct_sin(kernel: &KernelSpec, b: C64, policy: &DirectPolicy) -> Result<DirectSum> {
    let b2 = b * b;
    direct_series(
        |n| {
            let h = n as f64 + 0.5;
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(kernel.eval_sq(b2 + PI * PI * h * h)? * (s / h))
        },
        0,
        kernel.envelope_decay().filter(|&d| d > 0.0).unwrap_or(1.0),
        policy,
    )
}

/// Σ_{n≥1} (−1)ⁿ/n² · J(√(b² + π²n²)).
pub fn gosper_direct_cos(kernel: &KernelSpec, b: C64, policy: &DirectPolicy) -> Result<DirectSum> {
    let b2 = b * b;
    direct_series(
        |n| {
            let m = n as f64;
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(kernel.eval_sq(b2 + PI * PI * m * m)? * (s / (m * m)))
        },
        1,
        1.0 + kernel.envelope_decay().filter(|&d| d > -1.0).unwrap_or(0.0),
        policy,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Sin,
    Cos,
}

/// Closed forms of the direct series: (π/2) J(b) and
/// −π² J(b)/12 − π² J′(b)/(4b).
pub fn gosper_rhs(kernel: &KernelSpec, b: C64, family: Family) -> Result<C64> {
    let u = b * b;
    Ok(match family {
        Family::Sin => kernel.eval_sq(u)? * (PI / 2.0),
        Family::Cos => -(kernel.eval_sq(u)? * (PI * PI / 12.0)) - kernel.derivative_over_z_sq(u)? * (PI * PI / 4.0),
    })
}

/// Summand of the fractional-sum form: J(√(b² + (2πn)²))/n (sin family) or
/// the same over n² (cos family).
pub fn umbral_summand(kernel: &KernelSpec, b: C64, family: Family) -> AnalyticFn {
    let k = kernel.clone();
    let b2 = b * b;
    let power = match family {
        Family::Sin => 1,
        Family::Cos => 2,
    };
    AnalyticFn::new(move |n: C64| match k.eval_sq(b2 + n * n * (4.0 * PI * PI)) {
        Ok(v) => v / n.powi(power),
        Err(_) => C64::new(f64::NAN, f64::NAN),
    })
    .with_singularity(Singularity::pole(C64::new(0.0, 0.0), power as u32))
}

/// The fractional-sum side: Σ_{n=1/4}^{−1/4} J(…)/n (compare with π J(b))
/// or Σ_{n=1}^{−1/2} J(…)/n² (compare with −π²J(b)/3 − π²J′(b)/b).
pub fn gosper_umbral(kernel: &KernelSpec, b: C64, family: Family) -> Result<Estimate> {
    let f = umbral_summand(kernel, b, family);
    let s = FracSummer::new(f, FracSumParams::default())?;
    match family {
        Family::Sin => s.sum(C64::new(0.25, 0.0), C64::new(-0.25, 0.0)),
        Family::Cos => s.sum(C64::new(1.0, 0.0), C64::new(-0.5, 0.0)),
    }
}

/// The umbral side's closed form: π J(b) or −π²J(b)/3 − π²J′(b)/b.
pub fn gosper_umbral_rhs(kernel: &KernelSpec, b: C64, family: Family) -> Result<C64> {
    Ok(gosper_rhs(kernel, b, family)?
        * match family {
            Family::Sin => 2.0,
            Family::Cos => 4.0,
        })
}

/// Expansion of the fractional-sum summand around n = 0 as
/// Σ b_m n^{−m} + Σ a_k n^k/k!, from J(√(b² + 4π²n²)) = Σ_m d_m n^{2m}.
pub fn umbral_expansion(kernel: &KernelSpec, b: C64, family: Family, m_max: usize) -> Result<MixedSeries> {
    let extra = 80;
    let c = kernel.u_coefficients(m_max + extra)?;
    let b2 = b * b;
    let four_pi2 = 4.0 * PI * PI;
    let mut d = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        // d_m = (4π²)^m Σ_{k≥m} c_k C(k, m) b^{2(k−m)}
        let mut acc = CompensatedSum::new();
        let mut binom = 1.0;
        let mut bp = C64::new(1.0, 0.0);
        for (j, ck) in c.iter().enumerate().skip(m) {
            if j > m {
                binom *= j as f64 / (j - m) as f64;
                bp *= b2;
            }
            acc.add(ck * bp * binom);
        }
        d.push(acc.value() * four_pi2.powi(m as i32));
    }
    let mut s = MixedSeries::default();
    let shift = match family {
        Family::Sin => 1,
        Family::Cos => 2,
    };
    s.inverse = vec![C64::new(0.0, 0.0); shift];
    // d_m n^{2m − shift}
    let mut taylor = vec![C64::new(0.0, 0.0); 2 * m_max];
    for (m, dm) in d.iter().enumerate() {
        let e = 2 * m as i64 - shift as i64;
        if e < 0 {
            s.inverse[(-e - 1) as usize] = *dm;
        } else if (e as usize) < taylor.len() {
            let k = e as usize;
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            taylor[k] = dm * fact;
        }
    }
    s.taylor = taylor;
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    /// Fitted exponent of |a_n| against (1 + n).
    pub nu_a: f64,
    /// Fitted exponent of e^{−|Im z|}|J(z)| against (1 + |z|), worst ray.
    pub nu_j: f64,
    pub claimed: Option<(f64, f64)>,
    /// The z^{−n} prefactor is admissible for n strictly above this.
    pub min_power: f64,
    pub sin_family: bool,
    pub cos_family: bool,
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Measures ν_a from the coefficients and ν_J along rays in Re z > 0.
pub fn growth_validate(kernel: &KernelSpec) -> Result<GrowthReport> {
    // ln|a_{2m}| for m in a window of large indices
    let mut pts = Vec::new();
    match &kernel.kind {
        KernelKind::Bessel { nu } => {
            // a_{2m} = (2m)! c_m, with the ratio of consecutive terms in closed form
            let mut ln_a = (2f64.powf(-nu) / gamma(C64::new(nu + 1.0, 0.0))?.norm()).ln();
            for m in 0..400usize {
                let mf = m as f64;
                if m >= 20 {
                    pts.push(((1.0 + 2.0 * mf).ln(), ln_a));
                }
                // a_{2m+2}/a_{2m} = (2m+1)(2m+2)/(4(m+1)(m+ν+1))
                ln_a += ((2.0 * mf + 1.0) * (2.0 * mf + 2.0) / (4.0 * (mf + 1.0) * (mf + nu + 1.0)).abs()).ln();
            }
        }
        KernelKind::Coefficients(a) => {
            for (m, am) in a.iter().enumerate() {
                if am.norm() > 0.0 && m > 0 {
                    pts.push(((1.0 + 2.0 * m as f64).ln(), am.norm().ln()));
                }
            }
        }
    }
    let nu_a = if pts.len() >= 2 { slope(&pts) } else { 0.0 };

    let mut nu_j = f64::NEG_INFINITY;
    for angle in [0.0, PI / 6.0, PI / 3.0] {
        let mut ray = Vec::new();
        for r in [20.0, 40.0, 80.0, 160.0] {
            // envelope over a short window, for the oscillating real ray
            let mut m: f64 = 0.0;
            for j in 0..16 {
                let z = C64::from_polar(r * (1.0 + j as f64 / 64.0), angle);
                let v = kernel.eval(z)?.norm() * (-z.im.abs()).exp();
                m = m.max(v);
            }
            if m > 0.0 {
                ray.push(((1.0 + r).ln(), m.ln()));
            }
        }
        if ray.len() >= 2 {
            nu_j = nu_j.max(slope(&ray));
        }
    }
    if !nu_j.is_finite() {
        nu_j = 0.0;
    }
    let worst = nu_a.max(nu_j);
    // small tolerance for the fits
    let tol = 0.05;
    Ok(GrowthReport {
        nu_a,
        nu_j,
        claimed: kernel.claimed_exponents(),
        min_power: worst + 1.0,
        sin_family: worst < -tol,
        cos_family: worst < 1.0 - tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kernel_values() {
        let norm = (2.0 / PI).sqrt();
        let v = bessel_kernel(0.5, c(2.0)).unwrap();
        assert!((v - norm * 2f64.sin() / 2.0).norm() < 1e-15);
        let v = bessel_kernel(-0.5, c(2.0)).unwrap();
        assert!((v - norm * 2f64.cos()).norm() < 1e-15);
        assert!((bessel_kernel(0.5, c(0.0)).unwrap() - norm).norm() < 1e-15);
        assert!(bessel_kernel(-2.0, c(1.0)).is_err());
        // J_0 and J_1 reference values in all three regimes
        for (x, j0) in [
            (1.0, 0.7651976865579666),
            (10.0, -0.2459357644513483),
            (20.0, 0.1670246643405831),
            (50.0, 0.05581232766925181),
        ] {
            let v = bessel_kernel(0.0, c(x)).unwrap();
            assert!((v.re - j0).abs() < 1e-13, "J0({x}) = {v}");
        }
        for (x, j1) in [(10.0, 0.04347274616886144), (40.0, 0.126038318037585)] {
            let v = bessel_kernel(1.0, c(x)).unwrap() * x;
            assert!((v.re - j1).abs() < 1e-13, "J1({x}) = {v}");
        }
        // generic order against the half-integer closed form
        for z in [C64::new(3.0, 1.0), C64::new(12.0, -2.0), C64::new(35.0, 0.5)] {
            let generic = bessel_kernel_sq(1.5, z * z).unwrap();
            let closed = (z.sin() / z - z.cos()) / (z * z) * (2.0 / PI).sqrt();
            assert!((generic - closed).norm() < 1e-12 * closed.norm().max(1e-3), "{z}: {generic} vs {closed}");
        }
        // evenness, bit for bit
        let k = KernelSpec::bessel(0.3).unwrap();
        let z = C64::new(1.7, -0.4);
        assert_eq!(k.eval(z).unwrap(), k.eval(-z).unwrap());
    }

    #[test]
    fn direct_series_match_closed_forms() {
        let sin = KernelSpec::sin_kernel();
        let cos = KernelSpec::cos_kernel();
        let p = DirectPolicy::default();
        for b in [c(0.5), c(1.0), c(2.0), C64::new(1.0, 1.0), C64::new(0.0, 2.0)] {
            let d = gosper_direct_sin(&sin, b, &p).unwrap();
            let want = b.sin() / b * (PI / 2.0);
            assert!((d.value - want).norm() < 1e-9, "b = {b}: {d:?} vs {want}");
            assert!((gosper_rhs(&sin, b, Family::Sin).unwrap() - want).norm() < 1e-13);
            let d = gosper_direct_cos(&cos, b, &p).unwrap();
            let want = (b.sin() / b - b.cos() / 3.0) * (PI * PI / 4.0);
            assert!((d.value - want).norm() < 1e-9, "b = {b}: {d:?} vs {want}");
            assert!((gosper_rhs(&cos, b, Family::Cos).unwrap() - want).norm() < 1e-12);
        }
        // b → 0: π/2 and the Basel value
        let d = gosper_direct_cos(&cos, c(1e-9), &p).unwrap();
        assert!((d.value - PI * PI / 6.0).norm() < 1e-9);
    }

    #[test]
    fn umbral_route() {
        let sin = KernelSpec::sin_kernel();
        let cos = KernelSpec::cos_kernel();
        for b in [c(0.5), c(1.0)] {
            let u = gosper_umbral(&sin, b, Family::Sin).unwrap();
            let want = gosper_umbral_rhs(&sin, b, Family::Sin).unwrap();
            assert!((u.value - want).norm() < 1e-7, "sin b = {b}: {u:?} vs {want}");
            let u = gosper_umbral(&cos, b, Family::Cos).unwrap();
            let want = gosper_umbral_rhs(&cos, b, Family::Cos).unwrap();
            assert!((u.value - want).norm() < 1e-7, "cos b = {b}: {u:?} vs {want}");
        }
    }

    #[test]
    fn growth_exponents() {
        let r = growth_validate(&KernelSpec::bessel(0.5).unwrap()).unwrap();
        assert!((r.nu_a + 1.0).abs() < 0.05, "{r:?}");
        // |sin z / z| e^{−|Im z|} decays like 1/|z|: sharper than the bound 0
        assert!(r.nu_j < 0.0 && r.sin_family, "{r:?}");
        let r = growth_validate(&KernelSpec::bessel(-0.5).unwrap()).unwrap();
        assert!(r.nu_a.abs() < 0.05 && r.nu_j.abs() < 0.05, "{r:?}");
        assert!((r.min_power - 1.0).abs() < 0.1 && r.cos_family && !r.sin_family, "{r:?}");
        let r = growth_validate(&KernelSpec::coefficients(vec![c(1.0)])).unwrap();
        assert_eq!(r.nu_a, 0.0);
    }

    #[test]
    fn expansion_matches_summand() {
        let sin = KernelSpec::sin_kernel();
        let b = c(1.0);
        let s = umbral_expansion(&sin, b, Family::Sin, 12).unwrap();
        let f = umbral_summand(&sin, b, Family::Sin);
        for n in [c(0.1), C64::new(0.2, 0.1)] {
            assert!((s.eval(n) - f.eval(n)).norm() < 1e-10, "{n}");
        }
        assert!((s.inverse[0] - b.sin() / b).norm() < 1e-14);
    }
}
