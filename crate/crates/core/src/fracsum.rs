//! Fractional sums Σ_{k=x}^{y} f(k) with complex endpoints.
//!
//! The sum is F(B + y) − F(B + x − 1) for an antiderivative F. Writing both
//! terms as Euler–Maclaurin limits, everything that involves F alone
//! collapses to the segment integral ∫_{n+x−1}^{n+y} f, so
//!
//! S(x, y) = lim_n [ ∫_{n+x−1}^{n+y} f
//!                   + Σ_{k=1}^{p} B_k(1)/k!·(f^{(k−1)}(n+y) − f^{(k−1)}(n+x−1))
//!                   + Σ_{j=1}^{n} (f(j+x−1) − f(j+y)) ].

use crate::analytic::{antiderivative, derivative_decay_probe, hierarchy_check, taylor, AnalyticFn, HierarchyParams};
use crate::error::{Error, Result};
use crate::eval::{eval_em, EmParams};
use crate::numerics::{richardson_doubling, CompensatedSum, Estimate, C64, EPS};
use crate::special::{bernoulli_at_one, bernoulli_poly};
use std::f64::consts::PI;

/// Endpoints need Re > −1 + η for the limit formula.
pub const ENDPOINT_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FracSumParams {
    pub n_start: usize,
    pub n_max: usize,
    /// Euler–Maclaurin order.
    pub p: usize,
    pub tol: f64,
    pub admission: bool,
}

impl Default for FracSumParams {
    fn default() -> Self {
        FracSumParams { n_start: 4, n_max: 1024, p: 10, tol: 1e-12, admission: true }
    }
}

#[derive(Clone)]
pub struct FracSumRequest {
    pub f: AnalyticFn,
    pub x: C64,
    pub y: C64,
    pub params: FracSumParams,
}

/// A summand that passed admission; sums over many endpoint pairs reuse it.
#[derive(Clone)]
pub struct FracSummer {
    f: AnalyticFn,
    params: FracSumParams,
    pub notes: Vec<String>,
}

impl FracSummer {
    pub fn new(f: AnalyticFn, params: FracSumParams) -> Result<Self> {
        if params.p == 0 || params.p > 16 {
            return Err(Error::Domain(format!("expansion order p = {} outside 1..=16", params.p)));
        }
        let mut notes = Vec::new();
        if params.admission {
            let probe = derivative_decay_probe(&f, params.p);
            if !probe.decays {
                return Err(Error::Inadmissible(format!("f^({}) does not decay along the real axis", params.p)));
            }
            let h = hierarchy_check(&f, &HierarchyParams::bernoulli(params.p - 1), &[5.0, 10.0, 20.0]);
            if !h.consistent {
                return Err(Error::Inadmissible(format!("hierarchy check: {}", h.reason)));
            }
            notes.push(format!("hierarchy: {}", h.reason));
        }
        Ok(FracSummer { f, params, notes })
    }

    pub fn f(&self) -> &AnalyticFn {
        &self.f
    }

    /// S(x, y). Endpoints left of −1 + η are moved right by whole steps
    /// using S(x, y) = S(x, y + m) − Σ_{j=1}^{m} f(y + j) and
    /// S(x, y) = Σ_{j<m} f(x + j) + S(x + m, y).
    pub fn sum(&self, x: C64, y: C64) -> Result<Estimate> {
        let floor = -1.0 + ENDPOINT_MARGIN;
        let steps = |z: C64| if z.re > floor { 0 } else { (floor - z.re).floor() as usize + 1 };
        let (mx, my) = (steps(x), steps(y));
        let mut acc = CompensatedSum::new();
        let mut err = 0.0;
        for j in 0..mx {
            let v = self.f.eval(x + j as f64);
            check_finite(v, x + j as f64)?;
            acc.add(v);
        }
        for j in 1..=my {
            let v = self.f.eval(y + j as f64);
            check_finite(v, y + j as f64)?;
            acc.add(-v);
        }
        if mx + my > 0 {
            err += 8.0 * EPS * acc.magnitude();
        }
        let core = self.limit(x + mx as f64, y + my as f64)?;
        acc.add(core.value);
        Ok(Estimate::new(acc.value(), err + core.err))
    }

    fn limit(&self, x: C64, y: C64) -> Result<Estimate> {
        let f = &self.f;
        let p = self.params.p;
        let lo = |n: usize| x + (n as f64 - 1.0);
        let hi = |n: usize| y + n as f64;
        // Σ_{k=1}^{p} B_k(1)/k · c_{k−1}(w), c the Taylor coefficients at w
        let correction = |w: C64| -> Result<(C64, f64)> {
            let c = taylor(f, w, p - 1)?;
            let mut acc = CompensatedSum::new();
            let mut err = 0.0;
            for k in 1..=p {
                let b = bernoulli_at_one(k) / k as f64;
                acc.add(c[k - 1].value * b);
                err += c[k - 1].err * b.abs();
            }
            Ok((acc.value(), err + 8.0 * EPS * acc.magnitude()))
        };
        let mut sums = CompensatedSum::new();
        let mut done = 0usize;
        let mut trail: Vec<C64> = Vec::new();
        let mut noise: f64 = 0.0;
        let mut best: Option<(C64, f64)> = None;
        let mut n = self.params.n_start.max(1);
        while n <= self.params.n_max {
            for j in done + 1..=n {
                let a = f.eval(x + (j as f64 - 1.0));
                let b = f.eval(y + j as f64);
                check_finite(a, x + (j as f64 - 1.0))?;
                check_finite(b, y + j as f64)?;
                sums.add(a);
                sums.add(-b);
            }
            done = n;
            let seg = antiderivative(f, lo(n), hi(n))?;
            let (ch, eh) = correction(hi(n))?;
            let (cl, el) = correction(lo(n))?;
            let l = seg.value + ch - cl + sums.value();
            noise = noise.max(seg.err + eh + el + 8.0 * EPS * sums.magnitude());
            trail.push(l);
            if trail.len() >= 2 {
                let raw = (trail[trail.len() - 1] - trail[trail.len() - 2]).norm();
                let rich = richardson_doubling(&trail, 1.0);
                let (v, e) = if rich.err < raw { (rich.value, rich.err) } else { (trail[trail.len() - 1], raw) };
                let e = e + noise;
                best = Some(match best {
                    Some((bv, be)) if be <= e => (bv, be),
                    _ => (v, e),
                });
                if e <= self.params.tol.max(4.0 * noise) {
                    break;
                }
            }
            n *= 2;
        }
        let (v, e) = best.ok_or_else(|| Error::NonConvergent("fewer than two terms of the limit".into()))?;
        if !(e <= 1e-6 * v.norm().max(1.0)) {
            return Err(Error::NonConvergent(format!("fractional sum limit unsettled, error {e:.3e}")));
        }
        Ok(Estimate::new(v, e))
    }
}

fn check_finite(v: C64, at: C64) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Pole(at))
    }
}

pub fn frac_sum(req: &FracSumRequest) -> Result<Estimate> {
    FracSummer::new(req.f.clone(), req.params)?.sum(req.x, req.y)
}

/// Exact fractional sum of Σ_m coeffs[m]·k^m from Bernoulli polynomials:
/// Σ_{k=x}^{y} k^m = (B_{m+1}(y + 1) − B_{m+1}(x))/(m + 1).
pub fn frac_sum_poly(coeffs: &[C64], x: C64, y: C64) -> Result<C64> {
    let mut acc = CompensatedSum::new();
    for (m, c) in coeffs.iter().enumerate() {
        if *c == C64::new(0.0, 0.0) {
            continue;
        }
        let d = bernoulli_poly(m + 1, y + 1.0)? - bernoulli_poly(m + 1, x)?;
        acc.add(c * d / (m + 1) as f64);
    }
    Ok(acc.value())
}

/// Both sides of d/dz Σ_{k=1}^{z} f(k) = f(B) + Σ_{k=1}^{z} f′(k).
#[derive(Clone, Debug)]
pub struct DerivativeIdentity {
    pub lhs: Estimate,
    pub rhs: Estimate,
    /// f(B) from the Euler–Maclaurin route.
    pub c_f: Estimate,
    pub gap: f64,
}

/// Checks the derivative identity at z. `fprime` overrides the numerical
/// derivative of f when a closed form is at hand.
pub fn frac_sum_derivative(
    f: &AnalyticFn,
    fprime: Option<&AnalyticFn>,
    z: C64,
    params: &FracSumParams,
) -> Result<DerivativeIdentity> {
    let summer = FracSummer::new(f.clone(), *params)?;
    let one = C64::new(1.0, 0.0);
    // circle small enough to keep the upper endpoint right of −1
    let r = 0.1f64.min(0.5 * (z.re + 1.0 - ENDPOINT_MARGIN)).max(1e-3);
    let ring = |m: usize| -> Result<(C64, f64)> {
        let mut acc = C64::new(0.0, 0.0);
        let mut err = 0.0;
        for j in 0..m {
            let w = C64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / m as f64);
            let v = summer.sum(one, z + w * r)?;
            acc += v.value / w;
            err += v.err;
        }
        Ok((acc / (m as f64 * r), err / (m as f64 * r)))
    };
    let (d8, _) = ring(8)?;
    let (d16, e16) = ring(16)?;
    let lhs = Estimate::new(d16, (d16 - d8).norm() + e16);

    let derived;
    let fp = match fprime {
        Some(g) => g,
        None => {
            derived = f.derivative_fn();
            &derived
        }
    };
    let em = eval_em(f, &EmParams { p: params.p, ..EmParams::default() })?;
    let c_f = Estimate::new(em.value, em.err_est);
    let tail = FracSummer::new(fp.clone(), *params)?.sum(one, z)?;
    let rhs = Estimate::new(c_f.value + tail.value, c_f.err + tail.err);
    Ok(DerivativeIdentity { lhs, rhs, c_f, gap: (lhs.value - rhs.value).norm() })
}

/// Smallest fitted decay exponent accepted as evidence of convergence.
pub const LICENSE_DECAY: f64 = 1.1;

/// Least-squares slope of −ln t against ln n.
fn fit_decay(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| -p.1.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return f64::INFINITY;
    }
    xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx
}

/// f(k) = Σ_{m=1}^{M} b_m k^{−m} + Σ_{n=0}^{N} a_n kⁿ/n!.
#[derive(Clone, Debug, Default)]
pub struct MixedSeries {
    /// b_1, b_2, … for k^{−1}, k^{−2}, …
    pub inverse: Vec<C64>,
    /// a_0, a_1, … for kⁿ/n!.
    pub taylor: Vec<C64>,
}

impl MixedSeries {
    pub fn eval(&self, k: C64) -> C64 {
        let mut inv = C64::new(0.0, 0.0);
        let r = k.inv();
        for b in self.inverse.iter().rev() {
            inv = (inv + b) * r;
        }
        let mut acc = C64::new(0.0, 0.0);
        let mut fact = 1.0;
        let coeffs: Vec<C64> = self
            .taylor
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if n > 0 {
                    fact *= n as f64;
                }
                a / fact
            })
            .collect();
        for c in coeffs.iter().rev() {
            acc = acc * k + c;
        }
        inv + acc
    }

    /// Σ (2π)^{−n}|a_n| over the stored terms, with the power-law decay
    /// exponent of those terms fitted over the upper half of the nonzero
    /// ones (∞ when fewer than two are nonzero). An exponent above 1 means
    /// the full series converges.
    pub fn coefficient_test(&self) -> (f64, f64) {
        let terms: Vec<(f64, f64)> = self
            .taylor
            .iter()
            .enumerate()
            .map(|(n, a)| (n as f64, a.norm() * (2.0 * PI).powi(-(n as i32))))
            .filter(|&(_, t)| t > 0.0)
            .collect();
        let total: f64 = terms.iter().map(|t| t.1).sum();
        let fit: Vec<(f64, f64)> = terms.into_iter().filter(|p| p.0 > 0.0).collect();
        let tail = if fit.len() >= 4 { &fit[fit.len() / 2..] } else { &fit[..] };
        (total, fit_decay(tail))
    }

    pub fn to_fn(&self) -> AnalyticFn {
        let s = self.clone();
        let f = AnalyticFn::new(move |k| s.eval(k));
        if self.inverse.iter().any(|b| b.norm() > 0.0) {
            f.with_singularity(crate::analytic::Singularity::pole(C64::new(0.0, 0.0), self.inverse.len() as u32))
        } else {
            f
        }
    }
}

#[derive(Clone, Debug)]
pub struct TermwiseReport {
    pub termwise: C64,
    pub direct: Estimate,
    pub gap: f64,
    /// The terms (2π)^{−n}|a_n| decay faster than n^{−LICENSE_DECAY}.
    pub licensed: bool,
}

/// Fractional sum of a mixed series term by term against the sum of the
/// function it expands (`full`, or the truncated series itself). Both sides
/// are computed even when the coefficient test fails; the report marks the
/// interchange as unlicensed.
pub fn termwise_sum(
    series: &MixedSeries,
    full: Option<&AnalyticFn>,
    x: C64,
    y: C64,
    params: &FracSumParams,
) -> Result<TermwiseReport> {
    let (total, decay) = series.coefficient_test();
    let licensed = total.is_finite() && decay > LICENSE_DECAY;
    let mut acc = CompensatedSum::new();
    for (m, b) in series.inverse.iter().enumerate() {
        if b.norm() == 0.0 {
            continue;
        }
        let f = AnalyticFn::power(C64::new(-((m + 1) as f64), 0.0));
        let s = FracSummer::new(f, *params)?.sum(x, y)?;
        acc.add(b * s.value);
    }
    let mut fact = 1.0;
    let mut poly = Vec::with_capacity(series.taylor.len());
    for (n, a) in series.taylor.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        poly.push(a / fact);
    }
    acc.add(frac_sum_poly(&poly, x, y)?);
    let termwise = acc.value();
    let f = full.cloned().unwrap_or_else(|| series.to_fn());
    let direct = FracSummer::new(f, *params)?.sum(x, y)?;
    Ok(TermwiseReport { termwise, direct, gap: (termwise - direct.value).norm(), licensed })
}

/// f(x) + f(x + 1) + … over `count` terms.
pub fn direct_sum(f: &AnalyticFn, x: C64, count: usize) -> C64 {
    let mut acc = CompensatedSum::new();
    for j in 0..count {
        acc.add(f.eval(x + j as f64));
    }
    acc.value()
}
