//! Integrals along horizontal lines ℝ − it, Gauss–Weierstrass damping with
//! extrapolation in ε, and the strip Fourier transform
//!
//!   f̂(ξ − is) = (1/√(2π)) ∫_{ℝ−it} f(z) e^{−i(ξ−is)z} dz.

use crate::analytic::AnalyticFn;
use crate::error::{Error, Result};
use crate::numerics::{gl16, gl_panel, least_squares, CompensatedSum, Estimate, C64, EPS};
use crate::umbra::{index_estimate, ProbePolicy, Umbra};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rule {
    TanhSinh,
    /// Gauss–Legendre panels of the given width (16 nodes each).
    GaussLegendre {
        panel_width: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rule: Rule,
    /// Initial truncation half-width; doubled while the tail is too large.
    pub x: f64,
    /// Largest half-width tried before declaring a divergent tail.
    pub x_max: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rule: Rule::TanhSinh, x: 8.0, x_max: 1e5, abs_tol: 1e-12, rel_tol: 1e-12 }
    }
}

impl QuadratureSpec {
    pub fn panels(width: f64) -> Self {
        QuadratureSpec { rule: Rule::GaussLegendre { panel_width: width }, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GwSchedule {
    pub eps: Vec<f64>,
    /// Degree of the least-squares polynomial in ε.
    pub order: usize,
    /// Largest acceptable extrapolation error estimate (absolute, scaled by
    /// max(1, |value|)).
    pub tol: f64,
}

impl Default for GwSchedule {
    fn default() -> Self {
        GwSchedule { eps: (0..6).map(|j| 1e-2 * 0.5f64.powi(j)).collect(), order: 3, tol: 1e-7 }
    }
}

fn tanh_sinh<G: Fn(f64) -> C64>(g: &G, x: f64, tol: f64) -> Estimate {
    // x(u) = X tanh(π/2 sinh u), u ∈ [−4, 4]
    let node = |u: f64| {
        let s = 0.5 * PI * u.sinh();
        let xu = x * s.tanh();
        let w = x * 0.5 * PI * u.cosh() / (s.cosh() * s.cosh());
        (xu, w)
    };
    let umax = 4.0;
    let mut h = 1.0;
    let mut sum = CompensatedSum::new();
    let mut k = 0i64;
    while (k as f64) * h <= umax {
        for u in if k == 0 { vec![0.0] } else { vec![k as f64 * h, -(k as f64) * h] } {
            let (xu, w) = node(u);
            if w > 1e-300 && xu.abs() < x {
                sum.add(g(xu) * w);
            }
        }
        k += 1;
    }
    let mut prev = sum.value() * h;
    for _level in 1..14 {
        h *= 0.5;
        let mut k = 1i64;
        while (k as f64) * h <= umax {
            for u in [k as f64 * h, -(k as f64) * h] {
                let (xu, w) = node(u);
                if w > 1e-300 && xu.abs() < x {
                    sum.add(g(xu) * w);
                }
            }
            k += 2;
        }
        let cur = sum.value() * h;
        let diff = (cur - prev).norm();
        if diff <= tol.max(1e-15 * cur.norm()) && h < 0.2 {
            return Estimate::new(cur, diff + 8.0 * EPS * sum.magnitude() * h);
        }
        prev = cur;
    }
    Estimate::new(prev, f64::INFINITY)
}

fn gl_panels<G: Fn(f64) -> C64>(g: &G, a: f64, b: f64, width: f64, tol: f64) -> Estimate {
    let rule = gl16();
    let run = |w: f64| {
        let n = ((b - a) / w).ceil().max(1.0) as usize;
        let mut acc = CompensatedSum::new();
        for i in 0..n {
            let pa = a + (b - a) * i as f64 / n as f64;
            let pb = a + (b - a) * (i + 1) as f64 / n as f64;
            acc.add(gl_panel(rule, pa, pb, g));
        }
        (acc.value(), acc.magnitude())
    };
    let mut w = width;
    let (mut prev, _) = run(w);
    for _ in 0..8 {
        w *= 0.5;
        let (cur, mag) = run(w);
        let diff = (cur - prev).norm();
        let noise = 64.0 * EPS * mag;
        if diff <= tol.max(1e-15 * cur.norm()).max(noise) {
            return Estimate::new(cur, diff + noise);
        }
        prev = cur;
    }
    Estimate::new(prev, f64::INFINITY)
}

/// Tail estimate beyond ±X from the envelope at X and 2X. Returns the
/// signed tail value (zero when the phase is unstable) and a bound.
/// Tail of ∫ g beyond ±x: the part integrated explicitly (steady-phase
/// power laws) and a bound on what is left out.
fn tail_model<G: Fn(f64) -> C64>(g: &G, x: f64) -> (C64, f64) {
    let mut value = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    for sgn in [1.0, -1.0] {
        let envelope = |at: f64| -> (f64, C64) {
            let mut m = 0.0;
            let mut v0 = C64::new(0.0, 0.0);
            for j in 0..8 {
                let v = g(sgn * at * (1.0 + j as f64 / 32.0));
                if j == 0 {
                    v0 = v;
                }
                m = f64::max(m, v.norm());
            }
            (m, v0)
        };
        let (m1, v1) = envelope(x);
        let (m2, v2) = envelope(2.0 * x);
        if !m1.is_finite() || !m2.is_finite() {
            return (value, f64::INFINITY);
        }
        if m1 == 0.0 {
            continue;
        }
        if m2 == 0.0 || m2 < 1e-300 {
            bound += m1 * 1e-3;
            continue;
        }
        let q = (m1 / m2).log2();
        if q <= 1.2 {
            return (value, f64::INFINITY);
        }
        let stable = v1.norm() > 0.0 && v2.norm() > 0.0 && (v1 / v1.norm() - v2 / v2.norm()).norm() < 0.1;
        // a power law keeps its exponent from 2x to 4x; exponential decay
        // steepens and is covered by the plain bound
        let power_law = stable && q < 30.0 && {
            let (m3, _) = envelope(4.0 * x);
            m3 > 0.0 && ((m2 / m3).log2() - q).abs() < 0.25 * q
        };
        if power_law {
            // ∫_x^∞ g(±y) dy = ∫_0^1 g(±x/u) x/u² du, smooth enough in u
            // for tanh-sinh whatever the power
            let mapped = |s: f64| {
                let u = 0.5 * (s + 1.0);
                if u <= 0.0 {
                    return C64::new(0.0, 0.0);
                }
                g(sgn * x / u) * (0.5 * x / (u * u))
            };
            let part = tanh_sinh(&mapped, 1.0, 1e-14 * m1 * x);
            value += part.value;
            bound += part.err;
        } else {
            bound += m1 * x / (q - 1.0);
        }
    }
    (value, bound)
}

/// ∫_ℝ g(x) dx with geometric growth of the truncation half-width.
pub fn integrate_real_line<G: Fn(f64) -> C64>(g: G, spec: &QuadratureSpec) -> Result<Estimate> {
    let mut x = spec.x;
    // Gauss–Legendre cores are extended by the new shells only.
    let mut core_acc: Option<Estimate> = None;
    loop {
        let core = match spec.rule {
            Rule::TanhSinh => tanh_sinh(&g, x, spec.abs_tol / 10.0),
            Rule::GaussLegendre { panel_width } => {
                let tol = spec.abs_tol / 10.0;
                let next = match core_acc {
                    None => gl_panels(&g, -x, x, panel_width, tol),
                    Some(prev) => {
                        let l = gl_panels(&g, -x, -x / 2.0, panel_width, tol);
                        let r = gl_panels(&g, x / 2.0, x, panel_width, tol);
                        Estimate::new(prev.value + l.value + r.value, prev.err + l.err + r.err)
                    }
                };
                core_acc = Some(next);
                next
            }
        };
        let (tail, bound) = tail_model(&g, x);
        let total = core.value + tail;
        let scale = spec.abs_tol.max(spec.rel_tol * core.value.norm());
        if bound <= spec.abs_tol / 10.0 || (bound.is_finite() && bound <= scale) {
            if !core.err.is_finite() {
                return Err(Error::NonConvergent(format!("quadrature on [-{x}, {x}] did not settle")));
            }
            return Ok(Estimate::new(total, core.err + bound));
        }
        x *= 2.0;
        if x > spec.x_max {
            return Err(Error::DivergentTail { x: x / 2.0, detail: format!("tail bound {bound:.3e}") });
        }
    }
}

/// ∫_{ℝ−it} g(z) dz.
pub fn line_integral(g: &AnalyticFn, t: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_real_line(|x| g.eval(C64::new(x, -t)), spec)
}

/// Diagnostics of a Gauss–Weierstrass extrapolation.
#[derive(Clone, Debug)]
pub struct GwResult {
    pub value: C64,
    pub err: f64,
    pub per_eps: Vec<(f64, C64)>,
    pub residual: f64,
}

/// Fits I(ε) by a polynomial in ε of the schedule's order and returns the
/// value at ε = 0, with the spread against the next lower order as error.
pub fn gw_extrapolate(per_eps: &[(f64, Estimate)], sched: &GwSchedule) -> Result<GwResult> {
    let fit = |order: usize| {
        let rows: Vec<Vec<f64>> =
            per_eps.iter().map(|(e, _)| (0..=order).map(|k| (e / sched.eps[0]).powi(k as i32)).collect()).collect();
        let y: Vec<C64> = per_eps.iter().map(|(_, v)| v.value).collect();
        least_squares(&rows, &y)
    };
    let (c, residual) = fit(sched.order);
    let (c_low, _) = fit(sched.order.saturating_sub(1));
    let quad_err = per_eps.iter().map(|(_, v)| v.err).fold(0.0, f64::max);
    let err = (c[0] - c_low[0]).norm() + 10.0 * residual + quad_err;
    let value = c[0];
    let res = GwResult { value, err, per_eps: per_eps.iter().map(|(e, v)| (*e, v.value)).collect(), residual };
    if !err.is_finite() || err > sched.tol * value.norm().max(1.0) {
        return Err(Error::NonConvergent(format!(
            "Gauss-Weierstrass extrapolation error {err:.3e} (fit residual {residual:.3e})"
        )));
    }
    Ok(res)
}

/// lim_{ε→0} ∫_{ℝ−it} e^{−εz²} g(z) dz by polynomial extrapolation in ε.
pub fn gw_integral(g: &AnalyticFn, t: f64, sched: &GwSchedule, spec: &QuadratureSpec) -> Result<GwResult> {
    let mut per = Vec::new();
    let spec = QuadratureSpec {
        rule: match spec.rule {
            Rule::TanhSinh => Rule::GaussLegendre { panel_width: 1.0 },
            r => r,
        },
        ..*spec
    };
    for &e in &sched.eps {
        let v = integrate_real_line(
            |x| {
                let z = C64::new(x, -t);
                (-(z * z) * e).exp() * g.eval(z)
            },
            &spec,
        )?;
        per.push((e, v));
    }
    gw_extrapolate(&per, sched)
}

/// Strip Fourier transform of f at ζ = ξ − is, integrating along ℝ − it.
///
/// Algebraically decaying f leaves an oscillatory tail that the real-line
/// rule cannot certify; for ξ ≠ 0 the two tails are then taken along
/// vertical rays on which e^{−iζz} decays, provided no listed singularity
/// lies in the swept quarter-strips.
pub fn ft_line(f: &AnalyticFn, t: f64, zeta: C64, spec: &QuadratureSpec) -> Result<Estimate> {
    let xi = zeta.re.abs();
    let width = if xi > 1.0 { (PI / xi).min(1.0) } else { 1.0 };
    let spec = QuadratureSpec {
        rule: match spec.rule {
            Rule::TanhSinh if xi > 2.0 => Rule::GaussLegendre { panel_width: width },
            r => r,
        },
        ..*spec
    };
    let mi = C64::new(0.0, -1.0);
    let g = |z: C64| f.eval(z) * (mi * zeta * z).exp();
    let n = (2.0 * PI).sqrt();
    match integrate_real_line(|x| g(C64::new(x, -t)), &spec) {
        Ok(v) => Ok(Estimate::new(v.value / n, v.err / n)),
        Err(Error::DivergentTail { .. }) if xi > 1e-2 => {
            let v = ft_with_rays(f, &g, t, zeta, &spec)?;
            Ok(Estimate::new(v.value / n, v.err / n))
        }
        Err(e) => Err(e),
    }
}

fn ft_with_rays<G: Fn(C64) -> C64>(
    f: &AnalyticFn,
    g: &G,
    t: f64,
    zeta: C64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let sigma = zeta.re.signum();
    // rays go towards Im z → −σ∞ from ±X − it
    let reach =
        f.singularities.iter().filter(|s| sigma * (-t - s.at.im) >= 0.0).map(|s| s.at.re.abs()).fold(0.0, f64::max);
    let x = (2.0 * reach + 2.0).max(16.0);
    if let crate::analytic::Domain::HalfPlane { .. } = f.domain {
        return Err(Error::DivergentTail { x, detail: "oscillatory tail and no room for a ray".into() });
    }
    let core = gl_panels(&|u: f64| g(C64::new(u, -t)), -x, x, 1.0f64.min(PI / zeta.re.abs()), spec.abs_tol / 10.0);
    let dir = C64::new(0.0, -sigma);
    let ray = |start: C64| -> Result<Estimate> {
        let rule = gl16();
        let mut acc = CompensatedSum::new();
        let mut y = 0.0;
        let step = 1.0f64.min(4.0 / zeta.re.abs());
        loop {
            let part = gl_panel(rule, y, y + step, |v| g(start + dir * v) * dir);
            acc.add(part);
            y += step;
            let mag = part.norm();
            if !mag.is_finite() {
                return Err(Error::DivergentTail { x, detail: "ray integrand not finite".into() });
            }
            if mag <= 1e-17 * acc.value().norm().max(1e-300) || mag < 1e-300 {
                return Ok(Estimate::new(acc.value(), mag + 8.0 * EPS * acc.magnitude()));
            }
            if y > 2000.0 {
                return Err(Error::DivergentTail { x, detail: "ray integrand does not decay".into() });
            }
        }
    };
    let right = ray(C64::new(x, -t))?;
    let left = ray(C64::new(-x, -t))?;
    let value = core.value + right.value - left.value;
    Ok(Estimate::new(value, core.err + right.err + left.err))
}

/// Parameters for sampling Â on a uniform frequency grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingPolicy {
    pub h0: f64,
    pub h_min: f64,
    /// Sampling stops once |Â| falls below floor·peak on both sides.
    pub floor: f64,
    pub max_range: f64,
    /// Required midpoint interpolation accuracy relative to the peak.
    pub interp_tol: f64,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy { h0: 0.25, h_min: 1.0 / 512.0, floor: 1e-20, max_range: 200.0, interp_tol: 1e-6 }
    }
}

impl SamplingPolicy {
    /// Wider range for integrands whose factor f grows along the line.
    pub fn deep() -> Self {
        SamplingPolicy { floor: 1e-40, ..Default::default() }
    }
}

const STENCIL: usize = 12;

/// Â sampled on ξ_k = xi0 + k·h along the line Im ζ = −t.
#[derive(Clone, Debug)]
pub struct SampledTransform {
    pub t: f64,
    pub xi0: f64,
    pub h: f64,
    pub samples: Vec<C64>,
    pub peak: f64,
    /// Largest quadrature error among the samples.
    pub sample_err: f64,
    /// Per-sample quadrature error estimates.
    pub errs: Vec<f64>,
    /// Largest observed midpoint interpolation error.
    pub interp_err: f64,
    /// Fitted exponential decay rates of |Â| towards −∞ and +∞.
    pub decay_left: f64,
    pub decay_right: f64,
}

impl SampledTransform {
    pub fn range(&self) -> (f64, f64) {
        (self.xi0, self.xi0 + self.h * (self.samples.len() - 1) as f64)
    }

    /// Â(ξ − it) by local barycentric interpolation.
    pub fn try_eval(&self, xi: f64) -> Result<C64> {
        let (lo, hi) = self.range();
        if !(xi >= lo && xi <= hi) {
            return Err(Error::OutsideSampledRange { xi, lo, hi });
        }
        Ok(interpolate(&self.samples, self.xi0, self.h, xi))
    }

    /// Â as an analytic-function handle on the line Im ζ = −t; the real part
    /// of the argument is used as ξ and points outside the range give NaN.
    pub fn as_fn(&self) -> AnalyticFn {
        let me = self.clone();
        AnalyticFn::new(move |z| me.try_eval(z.re).unwrap_or(C64::new(f64::NAN, f64::NAN)))
    }
}

fn barycentric_weights(n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n];
    let mut c = 1.0;
    for (j, wj) in w.iter_mut().enumerate() {
        *wj = if j % 2 == 0 { c } else { -c };
        c = c * (n - 1 - j) as f64 / (j + 1) as f64;
    }
    w
}

fn interpolate(samples: &[C64], xi0: f64, h: f64, xi: f64) -> C64 {
    let n = samples.len();
    let m = STENCIL.min(n);
    let pos = (xi - xi0) / h;
    let centre = pos.round() as i64;
    let mut start = centre - (m as i64) / 2;
    start = start.clamp(0, (n - m) as i64);
    let start = start as usize;
    let w = barycentric_weights(m);
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    for j in 0..m {
        let d = pos - (start + j) as f64;
        if d == 0.0 {
            return samples[start + j];
        }
        let c = w[j] / d;
        num += samples[start + j] * c;
        den += c;
    }
    num / den
}

fn parallel_map<T: Send, F: Fn(f64) -> T + Sync>(xs: &[f64], f: F) -> Vec<T> {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(16);
    if threads <= 1 || xs.len() < 16 {
        return xs.iter().map(|x| f(*x)).collect();
    }
    let chunk = xs.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> =
            xs.chunks(chunk).map(|c| s.spawn(|| c.iter().map(|x| f(*x)).collect::<Vec<T>>())).collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

/// Line inside the umbra's strip along which the generating function is
/// integrated: the real axis when the strip contains it.
pub fn default_line(a: &Umbra) -> f64 {
    let (lo, hi) = (a.strip.lower, a.strip.upper);
    if lo < 0.0 && hi > 0.0 {
        return 0.0;
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    }
}

/// Â for a regular umbra at height `t_target`, sampled and interpolated.
pub fn ft_umbra(a: &Umbra, t_target: f64, policy: &SamplingPolicy) -> Result<SampledTransform> {
    let idx = index_estimate(a, &ProbePolicy::default())?;
    if !(idx.alpha < idx.beta) {
        return Err(Error::SingularUmbra { alpha: idx.alpha, beta: idx.beta });
    }
    if !(t_target > idx.alpha && t_target < idx.beta) {
        return Err(Error::HeightOutside { t: t_target, lo: idx.alpha, hi: idx.beta });
    }
    let line = default_line(a);
    let gen = a.gen.clone();
    let (up, down) = (a.strip.upper - line, line - a.strip.lower);
    let sample = |xi: f64| {
        // |e^{−iζz}| = e^{−ξs − tx} on z = x − is: moving the line towards
        // the edge that damps this ξ keeps far tails at relative accuracy
        let s = if xi > 0.0 { line + (0.9 * up).min(0.5 * xi) } else { line - (0.9 * down).min(-0.5 * xi) };
        let spec = QuadratureSpec { abs_tol: 1e-300, rel_tol: 1e-14, ..QuadratureSpec::panels(1.0) };
        ft_line(&gen, s, C64::new(xi, -t_target), &spec)
    };

    // Range: march outwards in unit steps until |Â| is below floor·peak twice.
    let centre = sample(0.0)?;
    let mut peak = centre.value.norm();
    let mut bounds = [0.0f64; 2];
    for (side, sgn) in [(0usize, -1.0f64), (1, 1.0)] {
        let mut xi = 0.0;
        let mut quiet = 0;
        let mut last = Vec::new();
        while quiet < 2 {
            xi += sgn;
            if xi.abs() > policy.max_range {
                return Err(Error::DivergentTail {
                    x: xi,
                    detail: "transform does not decay within the sampling range".into(),
                });
            }
            let v = sample(xi)?;
            peak = peak.max(v.value.norm());
            last.push(v.value.norm());
            // below the floor, or indistinguishable from quadrature noise
            if v.value.norm() < policy.floor * peak || v.value.norm() <= 4.0 * v.err {
                quiet += 1;
            } else {
                quiet = 0;
            }
        }
        bounds[side] = xi;
    }
    let (lo, hi) = (bounds[0], bounds[1]);

    let mut h = policy.h0;
    let mut grid_x: Vec<f64>;
    let mut values: Vec<Estimate>;
    {
        let n = ((hi - lo) / h).round() as usize;
        grid_x = (0..=n).map(|k| lo + k as f64 * h).collect();
        values = parallel_map(&grid_x, sample).into_iter().collect::<Result<Vec<_>>>()?;
    }
    let probes_at = |h: f64, n: usize| -> Vec<f64> {
        // midpoints spread across the grid, avoiding the outermost cells
        (1..=9).map(|j| lo + h * ((j * n / 10) as f64 + 0.5)).collect()
    };
    let mut interp_err;
    loop {
        let n = grid_x.len() - 1;
        let probes = probes_at(h, n);
        let direct = parallel_map(&probes, sample).into_iter().collect::<Result<Vec<_>>>()?;
        let samples: Vec<C64> = values.iter().map(|v| v.value).collect();
        interp_err = probes
            .iter()
            .zip(&direct)
            .map(|(x, d)| (interpolate(&samples, lo, h, *x) - d.value).norm())
            .fold(0.0, f64::max);
        if interp_err <= policy.interp_tol * peak || h / 2.0 < policy.h_min {
            break;
        }
        // refine: keep old samples, add midpoints
        h /= 2.0;
        let mids: Vec<f64> = grid_x.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let mid_vals = parallel_map(&mids, sample).into_iter().collect::<Result<Vec<_>>>()?;
        let mut nx = Vec::with_capacity(grid_x.len() * 2);
        let mut nv = Vec::with_capacity(grid_x.len() * 2);
        for i in 0..grid_x.len() {
            nx.push(grid_x[i]);
            nv.push(values[i]);
            if i < mids.len() {
                nx.push(mids[i]);
                nv.push(mid_vals[i]);
            }
        }
        grid_x = nx;
        values = nv;
    }
    let samples: Vec<C64> = values.iter().map(|v| v.value).collect();
    let sample_err = values.iter().map(|v| v.err).fold(0.0, f64::max);
    let errs: Vec<f64> = values.iter().map(|v| v.err).collect();
    let decay = |from_left: bool| -> f64 {
        // slope of ln|Â| between the 1e-6 and 1e-10 (relative) levels
        let it: Vec<(f64, f64)> = grid_x.iter().zip(&samples).map(|(x, v)| (*x, v.norm() / peak)).collect();
        let side: Vec<&(f64, f64)> = if from_left {
            it.iter().filter(|p| p.0 < 0.0).collect()
        } else {
            it.iter().filter(|p| p.0 > 0.0).collect()
        };
        let a = side.iter().filter(|p| p.1 < 1e-6 && p.1 > 1e-11).map(|p| (p.0, p.1.ln())).collect::<Vec<_>>();
        if a.len() < 2 {
            return f64::INFINITY;
        }
        let (x0, y0) = a[0];
        let (x1, y1) = a[a.len() - 1];
        ((y1 - y0) / (x1 - x0)).abs()
    };
    let (decay_left, decay_right) = (decay(true), decay(false));
    Ok(SampledTransform {
        t: t_target,
        xi0: lo,
        h,
        samples,
        peak,
        sample_err,
        errs,
        interp_err,
        decay_left,
        decay_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::umbra::{make_special, Special};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn gaussian_line_integrals() {
        let g = AnalyticFn::new(|z: C64| (-(z * z)).exp());
        let spec = QuadratureSpec::default();
        for t in [0.0, 1.0] {
            let v = line_integral(&g, t, &spec).unwrap();
            assert!((v.value - PI.sqrt()).norm() < 1e-12, "t = {t}: {v:?}");
        }
    }

    #[test]
    fn lorentzian_line_integral() {
        let g = AnalyticFn::new(|z: C64| (1.0 + z * z).inv());
        let v = line_integral(&g, 0.0, &QuadratureSpec::default()).unwrap();
        assert!((v.value.re - PI).abs() < 1e-9, "{v:?}");
        assert!(v.err < 1e-8);
    }

    #[test]
    fn slowly_decaying_oscillation_is_rejected_undamped() {
        let g = AnalyticFn::new(|z: C64| if z.norm() < 1e-8 { c(1.0) } else { z.sin() / z });
        assert!(matches!(line_integral(&g, 0.0, &QuadratureSpec::default()), Err(Error::DivergentTail { .. })));
        let v = gw_integral(&g, 0.0, &GwSchedule::default(), &QuadratureSpec::default()).unwrap();
        assert!((v.value.re - PI).abs() < 1e-8, "{v:?}");
    }

    #[test]
    fn gw_matches_line_integral_for_integrable_integrand() {
        let g = AnalyticFn::new(|z: C64| (-(z * z)).exp() * z.cos());
        let spec = QuadratureSpec::default();
        let a = line_integral(&g, 0.3, &spec).unwrap();
        let b = gw_integral(&g, 0.3, &GwSchedule::default(), &spec).unwrap();
        assert!((a.value - b.value).norm() < 1e-10, "{a:?} {b:?}");
    }

    #[test]
    fn gw_rejects_constant() {
        let g = AnalyticFn::constant(c(1.0));
        assert!(gw_integral(&g, 0.0, &GwSchedule::default(), &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn fourier_examples() {
        let spec = QuadratureSpec::default();
        let g = AnalyticFn::new(|z: C64| (-(z * z) / 2.0).exp());
        for xi in [0.0, 0.7, -2.5] {
            let v = ft_line(&g, 0.0, c(xi), &spec).unwrap();
            assert!((v.value.re - (-xi * xi / 2.0).exp()).abs() < 1e-12);
            let w = ft_line(&g, 1.0, c(xi), &spec).unwrap();
            assert!((w.value - v.value).norm() < 1e-12);
        }
        let l = AnalyticFn::new(|z: C64| (1.0 + z * z).inv()).with_singularities([
            crate::analytic::Singularity::pole(C64::new(0.0, 1.0), 1),
            crate::analytic::Singularity::pole(C64::new(0.0, -1.0), 1),
        ]);
        for xi in [1.0, -2.0] {
            let v = ft_line(&l, 0.0, c(xi), &spec).unwrap();
            let want = (PI / 2.0).sqrt() * (-f64::abs(xi)).exp();
            assert!((v.value - want).norm() < 1e-10, "{v:?}");
        }
        let sech = AnalyticFn::new(|z: C64| z.cosh().inv());
        for xi in [0.0, 1.0, -2.0] {
            let v = ft_line(&sech, 0.2, c(xi), &spec).unwrap();
            let want = (PI / 2.0).sqrt() / (PI * xi / 2.0).cosh();
            assert!((v.value - want).norm() < 1e-11, "{v:?}");
        }
    }

    #[test]
    fn transform_of_bernoulli_umbra() {
        let b = make_special(Special::Bernoulli).unwrap();
        let tr = b.transform(0.5).unwrap();
        // closed form −π²/(√(2π) sinh²(πζ)), ζ = ξ − i/2
        for xi in [-3.0, -0.4, 0.0, 0.33, 1.7, 4.0] {
            let zeta = C64::new(xi, -0.5);
            let s = (zeta * PI).sinh();
            let exact = -C64::new(PI * PI / (2.0 * PI).sqrt(), 0.0) / (s * s);
            let v = tr.try_eval(xi).unwrap();
            assert!((v - exact).norm() < 1e-11 + 10.0 * tr.interp_err, "xi = {xi}: {v} vs {exact}");
        }
        // bound shape: decay rate 2π for ξ ≥ 0
        assert!((tr.decay_right - 2.0 * PI).abs() < 0.1, "{}", tr.decay_right);
        let (lo, hi) = tr.range();
        assert!(tr.try_eval(hi + 1.0).is_err() && tr.try_eval(lo - 1.0).is_err());
    }

    #[test]
    fn transform_of_euler_umbra_is_sech() {
        let e = make_special(Special::Euler).unwrap();
        let tr = e.transform(0.0).unwrap();
        for xi in [0.0, 1.0, -2.0, 5.0, 0.3] {
            let exact = (PI / 2.0).sqrt() / (PI * xi / 2.0).cosh();
            assert!((tr.try_eval(xi).unwrap().re - exact).abs() < 1e-11 + 10.0 * tr.interp_err);
        }
        assert!((tr.decay_left - PI / 2.0).abs() < 0.05);
        assert!((tr.decay_right - PI / 2.0).abs() < 0.05);
    }

    #[test]
    fn singular_umbra_needs_decomposition() {
        let a = make_special(Special::ConstExp(c(0.5))).unwrap();
        assert!(matches!(ft_umbra(&a, 0.5, &SamplingPolicy::default()), Err(Error::SingularUmbra { .. })));
    }
}
