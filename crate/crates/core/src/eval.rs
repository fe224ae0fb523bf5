//! f(A) by independent routes: moment series, contour integral against Â,
//! Gauss–Weierstrass damping of the same integral, and the Euler–Maclaurin
//! tail limit for the Bernoulli umbra. Also shifted evaluation, the D and Δ
//! fast paths, the mollifier decomposition of singular umbrae, and
//! reconciliation across routes.

use crate::analytic::{
    derivative, derivative_decay_probe, hierarchy_check, taylor, AnalyticFn, HierarchyParams, Singularity,
};
use crate::contour::{
    gw_extrapolate, integrate_real_line, GwSchedule, QuadratureSpec, SampledTransform, SamplingPolicy,
};
use crate::error::{Error, Result};
use crate::numerics::{richardson_doubling, CompensatedSum, Estimate, C64, EPS};
use crate::special::bernoulli_at_one;
use crate::umbra::{add, index_estimate, make_special, moment, ExpIndex, ProbePolicy, Special, Strip, Umbra};
use std::f64::consts::PI;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    Series,
    Contour,
    Gw,
    EulerMaclaurin,
    /// Closed-form identity of a catalog umbra.
    Special,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Route::Series => "series",
            Route::Contour => "contour",
            Route::Gw => "gw",
            Route::EulerMaclaurin => "euler_maclaurin",
            Route::Special => "special",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RouteOutcome {
    pub route: Route,
    pub value: Option<C64>,
    pub err: Option<f64>,
    /// Admission verdict or failure reason.
    pub verdict: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub routes: Vec<RouteOutcome>,
    /// Convergence trail (n, L(n)) of the Euler–Maclaurin route.
    pub trail: Vec<(usize, C64)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub value: C64,
    pub err_est: f64,
    pub route: Route,
    pub diagnostics: Diagnostics,
}

impl EvalResult {
    fn single(route: Route, value: C64, err_est: f64, verdict: &str) -> Self {
        EvalResult {
            value,
            err_est,
            route,
            diagnostics: Diagnostics {
                routes: vec![RouteOutcome {
                    route,
                    value: Some(value),
                    err: Some(err_est),
                    verdict: verdict.to_string(),
                }],
                ..Default::default()
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesParams {
    /// Number of Taylor terms N.
    pub terms: usize,
    /// Required relative margin of the coefficient growth below the
    /// moment radius.
    pub margin: f64,
}

impl Default for SeriesParams {
    fn default() -> Self {
        SeriesParams { terms: 40, margin: 0.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmParams {
    pub n_start: usize,
    pub n_max: usize,
    /// Expansion order p (at most 16).
    pub p: usize,
    pub tol: f64,
    /// Run the hierarchy and derivative-decay admission checks.
    pub admission: bool,
}

impl Default for EmParams {
    fn default() -> Self {
        EmParams { n_start: 4, n_max: 1024, p: 10, tol: 1e-12, admission: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteChoice {
    Series,
    Contour,
    Gw,
    EulerMaclaurin,
    Auto,
}

#[derive(Clone, Debug)]
pub struct EvalRequest {
    pub f: AnalyticFn,
    pub a: Umbra,
    pub route: RouteChoice,
    pub series: SeriesParams,
    /// Contour height t; the midpoint of the regular interval if absent.
    pub t: Option<f64>,
    pub em: EmParams,
    pub gw: GwSchedule,
}

impl EvalRequest {
    pub fn new(f: AnalyticFn, a: Umbra) -> Self {
        EvalRequest {
            f,
            a,
            route: RouteChoice::Auto,
            series: SeriesParams::default(),
            t: None,
            em: EmParams::default(),
            gw: GwSchedule::default(),
        }
    }
}

pub fn evaluate(req: &EvalRequest) -> Result<EvalResult> {
    match req.route {
        RouteChoice::Series => eval_series(&req.f, &req.a, &req.series),
        RouteChoice::Contour => eval_contour(&req.f, &req.a, req.t),
        RouteChoice::Gw => eval_gw(&req.f, &req.a, req.t, &req.gw),
        RouteChoice::EulerMaclaurin => {
            if !is_bernoulli(&req.a) {
                return Err(Error::Inadmissible(
                    "the Euler-Maclaurin route applies to the Bernoulli umbra only".into(),
                ));
            }
            eval_em(&req.f, &req.em)
        }
        RouteChoice::Auto => eval_auto_with(&req.f, &req.a, req.t, &req.series, &req.em, &req.gw),
    }
}

fn is_bernoulli(a: &Umbra) -> bool {
    a.kind == Some(Special::Bernoulli)
}

/// Σ_{n≤N} c_n·Aⁿ with c_n the Taylor coefficients of f at 0.
pub fn eval_series(f: &AnalyticFn, a: &Umbra, params: &SeriesParams) -> Result<EvalResult> {
    if !a.strip.contains_t(0.0) {
        return Err(Error::Inadmissible("0 is not interior to the strip".into()));
    }
    let coeffs = taylor(f, C64::new(0.0, 0.0), params.terms)
        .map_err(|e| Error::Inadmissible(format!("Taylor coefficients at 0: {e}")))?;
    eval_series_coeffs(&coeffs, a, params)
}

/// Series route from given Taylor coefficients c_n = f^{(n)}(0)/n!.
pub fn eval_series_coeffs(coeffs: &[Estimate], a: &Umbra, params: &SeriesParams) -> Result<EvalResult> {
    if !a.strip.contains_t(0.0) {
        return Err(Error::Inadmissible("0 is not interior to the strip".into()));
    }
    let n_max = coeffs.len() - 1;
    // Moments grow like n!/Rⁿ with R the radius of the largest disc in the
    // strip; Σ a_n Aⁿ/n! with a_n = n!c_n needs limsup |a_n|^{1/n} < R.
    let radius = (-a.strip.lower).min(a.strip.upper);
    let mut log_fact = 0.0;
    let mut tau: f64 = 0.0;
    for (n, c) in coeffs.iter().enumerate() {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        if n < n_max.div_ceil(2) || n == 0 {
            continue;
        }
        let m = c.value.norm();
        if m <= 2.0 * c.err || m == 0.0 {
            continue;
        }
        tau = tau.max(((m.ln() + log_fact) / n as f64).exp());
        // The n-th root creeps up slowly when f has a finite radius R; the
        // ratio |a_n/a_{n−2}|^{1/2} grows like n/R and exposes it.
        let prev = coeffs[n - 2];
        let pm = prev.value.norm();
        if pm > 2.0 * prev.err && pm > 0.0 {
            let log_ratio = m.ln() - pm.ln() + (n as f64).ln() + ((n - 1) as f64).ln();
            tau = tau.max((log_ratio / 2.0).exp());
        }
    }
    if tau >= radius * (1.0 - params.margin) {
        return Err(Error::Inadmissible(format!(
            "coefficient growth {tau:.4} not below the moment radius {radius:.4}"
        )));
    }
    let mut acc = CompensatedSum::new();
    let mut err = 0.0;
    let mut last_terms = [0.0f64; 2];
    for (n, c) in coeffs.iter().enumerate() {
        if c.value == C64::new(0.0, 0.0) && c.err == 0.0 {
            continue;
        }
        let m = moment(a, n)?;
        let term = c.value * m.value;
        acc.add(term);
        err += c.err * m.value.norm() + c.value.norm() * m.err;
        if n + 2 > n_max {
            last_terms[n + 1 - n_max] = term.norm();
        }
    }
    let ratio = tau / radius;
    let tail = last_terms[0].max(last_terms[1]) * ratio / (1.0 - ratio);
    let err = err + tail + 8.0 * EPS * acc.magnitude();
    let mut res = EvalResult::single(Route::Series, acc.value(), err, "coefficient test passed");
    res.diagnostics.notes.push(format!("coefficient growth {tau:.4e}, radius {radius:.4}"));
    Ok(res)
}

/// Midpoint of the regular interval of the measured index.
pub fn default_height(idx: &ExpIndex) -> f64 {
    match (idx.alpha.is_finite(), idx.beta.is_finite()) {
        (true, true) => 0.5 * (idx.alpha + idx.beta),
        (true, false) => idx.alpha + 1.0,
        (false, true) => idx.beta - 1.0,
        (false, false) => 0.0,
    }
}

/// Height, transform and measured index for the contour routes.
fn contour_setup(
    a: &Umbra,
    t: Option<f64>,
    policy: &SamplingPolicy,
) -> Result<(f64, std::sync::Arc<SampledTransform>)> {
    let idx = index_estimate(a, &ProbePolicy::default())?;
    if !idx.is_regular() {
        return Err(Error::SingularUmbra { alpha: idx.alpha, beta: idx.beta });
    }
    let t = t.unwrap_or_else(|| default_height(&idx));
    if !(t > idx.alpha && t < idx.beta) {
        return Err(Error::HeightOutside { t, lo: idx.alpha, hi: idx.beta });
    }
    Ok((t, a.transform_with(t, policy)?))
}

/// Samples of Â(ξ − it)·f(t + iξ) on the transform grid, after the decay
/// admission test.
fn contour_integrand(f: &AnalyticFn, tr: &SampledTransform) -> Result<(Vec<f64>, Vec<C64>, f64)> {
    let n = tr.samples.len();
    let xs: Vec<f64> = (0..n).map(|k| tr.xi0 + k as f64 * tr.h).collect();
    let fv: Vec<C64> = xs.iter().map(|&xi| f.eval(C64::new(tr.t, xi))).collect();
    if fv.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Inadmissible("f is not finite on the evaluation line".into()));
    }
    // growth of f along the line against the fitted decay of Â
    let rate = |k: usize| {
        let m = fv[k].norm().max(1e-300);
        let c = fv[n / 2].norm().max(1e-300);
        (m / c).ln() / (xs[k] - xs[n / 2]).abs().max(1.0)
    };
    let (gl, gr) = (rate(0), rate(n - 1));
    if gl >= tr.decay_left || gr >= tr.decay_right {
        return Err(Error::Inadmissible(format!(
            "f grows at rates ({gl:.3}, {gr:.3}) along the line, transform decays at ({:.3}, {:.3})",
            tr.decay_left, tr.decay_right
        )));
    }
    let w: Vec<C64> = tr.samples.iter().zip(&fv).map(|(a, b)| a * b).collect();
    let noise: f64 = fv.iter().zip(&tr.errs).map(|(v, e)| v.norm() * e).sum::<f64>() * tr.h;
    Ok((xs, w, noise))
}

fn trapezoid_pair(w: &[C64], h: f64) -> (C64, C64) {
    let mut fine = CompensatedSum::new();
    let mut coarse = CompensatedSum::new();
    for (k, v) in w.iter().enumerate() {
        fine.add(*v);
        if k % 2 == 0 {
            coarse.add(*v);
        }
    }
    (fine.value() * h, coarse.value() * (2.0 * h))
}

/// Integral of |w| beyond both ends of the grid, extrapolating the decay
/// over the last unit of ξ; infinite if either end is not decaying.
fn edge_error(w: &[C64], h: f64) -> f64 {
    let n = w.len();
    let m = ((1.0 / h).round() as usize).clamp(1, n / 4);
    let peak = w.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let side = |edge: f64, inner: f64| -> f64 {
        if edge <= 1e-300 || edge < 1e-17 * peak {
            return edge / h.max(1.0);
        }
        let rate = (inner / edge).ln() / (m as f64 * h);
        if !(rate > 0.05) {
            return f64::INFINITY;
        }
        edge / rate
    };
    side(w[0].norm(), w[m].norm()) + side(w[n - 1].norm(), w[n - 1 - m].norm())
}

/// (1/√(2π)) ∫ Â(ξ − it) f(t + iξ) dξ from the sampled transform.
pub fn eval_contour(f: &AnalyticFn, a: &Umbra, t: Option<f64>) -> Result<EvalResult> {
    eval_contour_with(f, a, t, &SamplingPolicy::default())
}

fn eval_contour_with(f: &AnalyticFn, a: &Umbra, t: Option<f64>, policy: &SamplingPolicy) -> Result<EvalResult> {
    let (t, tr) = contour_setup(a, t, policy)?;
    let (_, w, sample_noise) = contour_integrand(f, &tr)?;
    let (fine, coarse) = trapezoid_pair(&w, tr.h);
    let edge = edge_error(&w, tr.h);
    if !(edge <= 1e-9 * fine.norm().max(1e-3)) {
        // f grows along the line: retry once over the wider range
        if policy.floor > SamplingPolicy::deep().floor {
            return eval_contour_with(f, a, Some(t), &SamplingPolicy::deep());
        }
        return Err(Error::Inadmissible("integrand has not decayed at the ends of the sampled range".into()));
    }
    let n = (2.0 * PI).sqrt();
    let value = fine / n;
    let err = ((fine - coarse).norm() + sample_noise + edge) / n + 8.0 * EPS * value.norm();
    let mut res = EvalResult::single(Route::Contour, value, err, "decay test passed");
    res.diagnostics.notes.push(format!("t = {t}, {} transform samples, h = {}", tr.samples.len(), tr.h));
    Ok(res)
}

/// lim_{ε→0} of the contour integral damped by e^{−εζ²}.
pub fn eval_gw(f: &AnalyticFn, a: &Umbra, t: Option<f64>, sched: &GwSchedule) -> Result<EvalResult> {
    eval_gw_with(f, a, t, sched, &SamplingPolicy::default())
}

fn eval_gw_with(
    f: &AnalyticFn,
    a: &Umbra,
    t: Option<f64>,
    sched: &GwSchedule,
    policy: &SamplingPolicy,
) -> Result<EvalResult> {
    let (t, tr) = contour_setup(a, t, policy)?;
    let (xs, w, sample_noise) = contour_integrand(f, &tr)?;
    let n = (2.0 * PI).sqrt();
    let mut per = Vec::new();
    for &eps in &sched.eps {
        let damped: Vec<C64> = xs
            .iter()
            .zip(&w)
            .map(|(xi, v)| {
                let z = C64::new(*xi, -t);
                v * (-(z * z) * eps).exp()
            })
            .collect();
        let (fine, coarse) = trapezoid_pair(&damped, tr.h);
        let edge = edge_error(&damped, tr.h);
        if !(edge <= 1e-9 * fine.norm().max(1e-3)) {
            if policy.floor > SamplingPolicy::deep().floor {
                return eval_gw_with(f, a, Some(t), sched, &SamplingPolicy::deep());
            }
            return Err(Error::NonConvergent(format!("damped integrand not resolved at eps = {eps}")));
        }
        let err = ((fine - coarse).norm() + sample_noise + edge) / n;
        per.push((eps, Estimate::new(fine / n, err)));
    }
    let g = gw_extrapolate(&per, sched)?;
    let mut res = EvalResult::single(Route::Gw, g.value, g.err, "extrapolated");
    res.diagnostics.notes.push(format!("t = {t}, fit residual {:.3e}", g.residual));
    Ok(res)
}

/// f(B) as lim_n L(n, p), L(n, p) = Σ_{k≤p} B_k(1)/k!·f^{(k)}(n) − Σ_{j≤n} f′(j).
pub fn eval_em(f: &AnalyticFn, params: &EmParams) -> Result<EvalResult> {
    if params.p > 16 {
        return Err(Error::Domain(format!("expansion order p = {} exceeds 16", params.p)));
    }
    let mut notes = Vec::new();
    if params.admission {
        let probe = derivative_decay_probe(f, params.p);
        if !probe.decays {
            return Err(Error::Inadmissible(format!("f^({}) does not decay along the real axis", params.p)));
        }
        let fp = f.derivative_fn_coarse();
        let h = hierarchy_check(&fp, &HierarchyParams::bernoulli(params.p), &[5.0, 10.0, 20.0]);
        if !h.consistent {
            return Err(Error::Inadmissible(format!("hierarchy check on f': {}", h.reason)));
        }
        notes.push(format!("hierarchy: {}", h.reason));
    }
    let head = |n: usize| -> Result<(C64, f64)> {
        let c = taylor(f, C64::new(n as f64, 0.0), params.p)?;
        let mut acc = CompensatedSum::new();
        let mut err = 0.0;
        for (k, ck) in c.iter().enumerate() {
            let b = bernoulli_at_one(k);
            acc.add(ck.value * b);
            err += ck.err * b.abs();
        }
        Ok((acc.value(), err + 8.0 * EPS * acc.magnitude()))
    };
    let mut sum_fp = CompensatedSum::new();
    let mut sum_err = 0.0;
    let mut done = 0usize;
    let mut trail: Vec<(usize, C64)> = Vec::new();
    let mut noise: f64 = 0.0;
    let mut n = params.n_start.max(1);
    let mut best: Option<(C64, f64)> = None;
    while n <= params.n_max {
        for j in done + 1..=n {
            let d = derivative(f, C64::new(j as f64, 0.0), 1)?;
            if !d.value.re.is_finite() || !d.value.im.is_finite() {
                return Err(Error::Inadmissible(format!("f' not finite at {j}")));
            }
            sum_fp.add(d.value);
            sum_err += d.err;
        }
        done = n;
        let (h, herr) = head(n)?;
        let l = h - sum_fp.value();
        noise = noise.max(herr + sum_err + 8.0 * EPS * sum_fp.magnitude());
        trail.push((n, l));
        if trail.len() >= 2 {
            let vals: Vec<C64> = trail.iter().map(|p| p.1).collect();
            let raw = (vals[vals.len() - 1] - vals[vals.len() - 2]).norm();
            let rich = richardson_doubling(&vals, 1.0);
            let (v, e) = if rich.err < raw { (rich.value, rich.err) } else { (vals[vals.len() - 1], raw) };
            let e = e + noise;
            best = Some(match best {
                Some((bv, be)) if be <= e => (bv, be),
                _ => (v, e),
            });
            if e <= params.tol.max(4.0 * noise) {
                break;
            }
        }
        n *= 2;
    }
    let (value, err) = best.ok_or_else(|| Error::NonConvergent("Euler-Maclaurin trail too short".into()))?;
    if err > 1e-6 * value.norm().max(1.0) {
        return Err(Error::NonConvergent(format!(
            "Euler-Maclaurin limit unresolved by n = {}: error {err:.3e}",
            params.n_max
        )));
    }
    Ok(EvalResult {
        value,
        err_est: err,
        route: Route::EulerMaclaurin,
        diagnostics: Diagnostics {
            routes: vec![RouteOutcome {
                route: Route::EulerMaclaurin,
                value: Some(value),
                err: Some(err),
                verdict: "admitted".into(),
            }],
            trail,
            notes,
        },
    })
}

/// B^z: moments for integers z ≥ 0, otherwise the Euler–Maclaurin route on
/// t^z (principal branch), Re z > −1.
pub fn eval_power(z: C64) -> Result<EvalResult> {
    let b = make_special(Special::Bernoulli)?;
    if z.im == 0.0 && z.re >= 0.0 && z.re == z.re.round() && z.re <= 40.0 {
        let m = moment(&b, z.re as usize)?;
        return Ok(EvalResult::single(Route::Series, m.value, m.err, "moment"));
    }
    if z.re <= -1.0 {
        return Err(Error::Domain(format!("B^z needs Re z > -1, got {z}")));
    }
    eval_em(&AnalyticFn::power(z), &EmParams::default())
}

/// f(A) for the singular catalog umbrae, whose values are fixed by their
/// moments: (c) → f(c), [c] → c·f(0), D → f′(0), Δ → f(1) − f(0).
pub fn eval_special(f: &AnalyticFn, which: Special) -> Result<EvalResult> {
    let zero = C64::new(0.0, 0.0);
    let (v, e) = match which {
        Special::ConstExp(c) => (f.eval(c), 0.0),
        Special::ConstNum(c) => (c * f.eval(zero), 0.0),
        Special::D => {
            let d = derivative(f, zero, 1)?;
            (d.value, d.err)
        }
        Special::Delta => (f.eval(C64::new(1.0, 0.0)) - f.eval(zero), 0.0),
        Special::Bernoulli | Special::Euler => {
            return Err(Error::Domain("B and E are regular; use a numerical route".into()));
        }
    };
    Ok(EvalResult::single(Route::Special, v, e + 4.0 * EPS * v.norm(), "catalog identity"))
}

/// f(z + 1) − f(z) for Δ, f′(z) for D.
pub fn eval_special_shift(f: &AnalyticFn, which: Special, z: C64) -> Result<C64> {
    match which {
        Special::D => Ok(derivative(f, z, 1)?.value),
        Special::Delta => Ok(f.eval(z + 1.0) - f.eval(z)),
        _ => Err(Error::Domain("shift fast path exists for D and Delta only".into())),
    }
}

pub fn eval_auto(f: &AnalyticFn, a: &Umbra) -> Result<EvalResult> {
    eval_auto_with(f, a, None, &SeriesParams::default(), &EmParams::default(), &GwSchedule::default())
}

/// Runs every route that applies, returns the one with the smallest error
/// estimate and fails if two admitted routes disagree beyond their summed
/// estimates.
pub fn eval_auto_with(
    f: &AnalyticFn,
    a: &Umbra,
    t: Option<f64>,
    series: &SeriesParams,
    em: &EmParams,
    gw: &GwSchedule,
) -> Result<EvalResult> {
    if let Some(k) = a.kind {
        if !matches!(k, Special::Bernoulli | Special::Euler) {
            return eval_special(f, k);
        }
    }
    let mut outcomes: Vec<(Route, Result<EvalResult>)> = Vec::new();
    std::thread::scope(|s| {
        let em_handle = is_bernoulli(a).then(|| s.spawn(|| eval_em(f, em)));
        outcomes.push((Route::Series, eval_series(f, a, series)));
        outcomes.push((Route::Contour, eval_contour(f, a, t)));
        outcomes.push((Route::Gw, eval_gw(f, a, t, gw)));
        if let Some(h) = em_handle {
            outcomes.push((Route::EulerMaclaurin, h.join().expect("route thread")));
        }
    });
    let mut diag = Diagnostics::default();
    let mut ok: Vec<EvalResult> = Vec::new();
    for (route, r) in outcomes {
        match r {
            Ok(res) => {
                diag.routes.push(RouteOutcome {
                    route,
                    value: Some(res.value),
                    err: Some(res.err_est),
                    verdict: "ok".into(),
                });
                if route == Route::EulerMaclaurin {
                    diag.trail = res.diagnostics.trail.clone();
                }
                diag.notes.extend(res.diagnostics.notes.iter().map(|n| format!("{route}: {n}")));
                ok.push(res);
            }
            Err(e) => diag.routes.push(RouteOutcome { route, value: None, err: None, verdict: e.to_string() }),
        }
    }
    if ok.is_empty() {
        let reasons: Vec<String> = diag.routes.iter().map(|r| format!("{}: {}", r.route, r.verdict)).collect();
        return Err(Error::Inadmissible(format!("no admissible route ({})", reasons.join("; "))));
    }
    for i in 0..ok.len() {
        for j in i + 1..ok.len() {
            let gap = (ok[i].value - ok[j].value).norm();
            let allowed = ok[i].err_est + ok[j].err_est + 1e-13 * ok[i].value.norm().max(1.0);
            if gap > allowed {
                return Err(Error::CrossCheck(format!(
                    "{} = {} and {} = {} differ by {gap:.3e} (allowed {allowed:.3e})",
                    ok[i].route, ok[i].value, ok[j].route, ok[j].value
                )));
            }
        }
    }
    let best = ok
        .iter()
        .min_by(|x, y| x.err_est.partial_cmp(&y.err_est).unwrap_or(std::cmp::Ordering::Equal))
        .expect("nonempty");
    Ok(EvalResult { value: best.value, err_est: best.err_est, route: best.route, diagnostics: diag })
}

/// f(A + z₀) = g(A) with g(z) = f(z + z₀).
pub fn eval_shifted(f: &AnalyticFn, a: &Umbra, z0: C64) -> Result<EvalResult> {
    eval_auto(&f.shifted(z0), a)
}

/// d/dz₀ f(A + z₀) at 0 by a Cauchy circle of radius 0.1.
pub fn eval_derivative_in_shift(f: &AnalyticFn, a: &Umbra) -> Result<Estimate> {
    let r = 0.1;
    let ring = |m: usize| -> Result<(C64, f64)> {
        let mut acc = C64::new(0.0, 0.0);
        let mut err = 0.0;
        for j in 0..m {
            let w = C64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / m as f64);
            let v = eval_shifted(f, a, w * r)?;
            acc += v.value / w;
            err += v.err_est;
        }
        Ok((acc / (m as f64 * r), err / (m as f64 * r)))
    };
    let (d8, _) = ring(8)?;
    let (d16, e16) = ring(16)?;
    Ok(Estimate::new(d16, (d16 - d8).norm() + e16))
}

/// f(A + D) and f′(A) computed separately. They need not agree: the
/// interchange of derivative and evaluation requires uniform bounds that
/// some umbrae lack.
#[derive(Clone, Debug)]
pub struct ShiftDerivativeReport {
    pub with_d: Result<EvalResult>,
    pub derivative: Result<EvalResult>,
}

pub fn shift_by_d_report(f: &AnalyticFn, a: &Umbra) -> Result<ShiftDerivativeReport> {
    let ad = add(a, &make_special(Special::D)?)?;
    Ok(ShiftDerivativeReport { with_d: eval_auto(f, &ad), derivative: eval_auto(&f.derivative_fn(), a) })
}

/// Mollifier generating functions: ρ̌₊ − ρ̌₋ is the constant c₀, ρ̌₊ decays
/// super-exponentially as Re w → −∞ and ρ̌₋ as Re w → +∞.
///
/// ρ̌_±(w) = (1/2πi) ∫ ζ⁻¹ e^{−ζ²} e^{iζw} dζ along a line below (+) or
/// above (−) the pole at 0. The line passes through the saddle iw/2 when
/// that lies on the correct side; otherwise the other function is used and
/// the residue added.
fn mollifier_line(w: C64, s: f64) -> Result<C64> {
    // ζ = ξ + is
    let spec = QuadratureSpec { abs_tol: 1e-17, rel_tol: 1e-14, ..QuadratureSpec::panels(0.5) };
    let i = C64::new(0.0, 1.0);
    let v = integrate_real_line(
        |xi| {
            let z = C64::new(xi, s);
            (-(z * z) + i * z * w).exp() / z
        },
        &spec,
    )?;
    Ok(v.value / (2.0 * PI * i))
}

pub fn mollifier_plus(w: C64) -> Result<C64> {
    let s = 0.5 * w.re;
    if s <= -0.5 {
        mollifier_line(w, s)
    } else if w.re <= 1.0 {
        mollifier_line(w, -0.5)
    } else {
        Ok(mollifier_line(w, s.max(0.5))? + 1.0)
    }
}

pub fn mollifier_minus(w: C64) -> Result<C64> {
    let s = 0.5 * w.re;
    if s >= 0.5 {
        mollifier_line(w, s)
    } else if w.re >= -1.0 {
        mollifier_line(w, 0.5)
    } else {
        Ok(mollifier_line(w, s.min(-0.5))? - 1.0)
    }
}

fn mollifier_umbra(plus: bool) -> Umbra {
    let eval = move |w: C64| {
        let r = if plus { mollifier_plus(w) } else { mollifier_minus(w) };
        r.unwrap_or(C64::new(f64::NAN, f64::NAN))
    };
    let (index, label) = if plus {
        (ExpIndex { alpha: 0.0, beta: f64::INFINITY, estimated: false }, "Lambda+")
    } else {
        (ExpIndex { alpha: f64::NEG_INFINITY, beta: 0.0, estimated: false }, "Lambda-")
    };
    Umbra::new(AnalyticFn::new(eval), Strip::whole(), index, label)
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub plus: Umbra,
    pub minus: Umbra,
    /// Measured constant c₀ = ρ̌₊ − ρ̌₋.
    pub gap: Estimate,
}

/// A⁺ = A + Λ̌₊, A⁻ = A + Λ̌₋ (generating-function products), with
/// A⁺[−]A⁻ = c₀·A.
pub fn decompose_singular(a: &Umbra) -> Result<Decomposition> {
    let plus = add(a, &mollifier_umbra(true))?;
    let minus = add(a, &mollifier_umbra(false))?;
    let probes = [C64::new(0.0, 0.0), C64::new(0.4, -0.3), C64::new(-0.7, 0.2)];
    let mut gaps = Vec::new();
    for w in probes {
        // both on their plain lines ∓1/2, independent of the saddle choice
        gaps.push(mollifier_line(w, -0.5)? - mollifier_line(w, 0.5)?);
    }
    let mean = gaps.iter().sum::<C64>() / gaps.len() as f64;
    let spread = gaps.iter().map(|g| (g - mean).norm()).fold(0.0, f64::max);
    let (ip, im) = (index_estimate(&plus, &ProbePolicy::default())?, index_estimate(&minus, &ProbePolicy::default())?);
    let plus = Umbra::new(plus.gen, plus.strip, ip, plus.label);
    let minus = Umbra::new(minus.gen, minus.strip, im, minus.label);
    Ok(Decomposition { plus, minus, gap: Estimate::new(mean, spread + 1e-13) })
}

/// (z⁻¹e^{−z²}, Ω_{0,∞}): regular, but f(A + D) ≠ f′(A) for f = 1.
pub fn counterexample_umbra() -> Result<Umbra> {
    let gen = AnalyticFn::new(|z: C64| (-(z * z)).exp() / z).with_singularity(Singularity::pole(C64::new(0.0, 0.0), 1));
    Umbra::with_estimated_index(gen, Strip::new(0.0, f64::INFINITY)?, "z^-1 e^(-z^2)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{euler_gamma_limit, zeta};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn b() -> Umbra {
        make_special(Special::Bernoulli).unwrap()
    }

    fn gen_b1() -> f64 {
        let e = 1f64.exp();
        e / (e - 1.0)
    }

    #[test]
    fn series_examples() {
        let p = SeriesParams::default();
        let v = eval_series(&AnalyticFn::exp_linear(c(1.0)), &b(), &p).unwrap();
        assert!((v.value.re - gen_b1()).abs() < 1e-12, "{v:?}");
        let v = eval_series(&AnalyticFn::power(c(2.0)), &b(), &p).unwrap();
        assert!((v.value.re - 1.0 / 6.0).abs() < 1e-13);
        let d = make_special(Special::D).unwrap();
        let v = eval_series(&AnalyticFn::identity(), &d, &p).unwrap();
        assert!((v.value.re - 1.0).abs() < 1e-13);
        assert!(matches!(eval_series(&AnalyticFn::log(), &b(), &p), Err(Error::Inadmissible(_))));
        let ln1 = AnalyticFn::log().shifted(c(1.0));
        assert!(matches!(eval_series(&ln1, &b(), &p), Err(Error::Inadmissible(_))));
        assert!(matches!(eval_series(&AnalyticFn::exp_linear(c(3.0 * PI)), &b(), &p), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn contour_examples() {
        let v = eval_contour(&AnalyticFn::exp_linear(c(1.0)), &b(), Some(0.5)).unwrap();
        assert!((v.value.re - gen_b1()).abs() < 1e-9, "{v:?}");
        assert!(v.err_est < 1e-8);
        let v = eval_contour(&AnalyticFn::power(c(2.0)), &b(), Some(0.5)).unwrap();
        assert!((v.value - 1.0 / 6.0).norm() < 1e-9, "{v:?}");
        let v = eval_contour(&AnalyticFn::log(), &b(), Some(0.5)).unwrap();
        assert!((v.value.re + euler_gamma_limit()).abs() < 1e-9, "{v:?}");
        assert!(matches!(eval_contour(&AnalyticFn::log(), &b(), Some(1.5)), Err(Error::HeightOutside { .. })));
        let spiral = AnalyticFn::exp_linear(C64::new(0.0, 3.0 * PI));
        assert!(eval_contour(&spiral, &b(), Some(0.5)).is_err());
        let one = make_special(Special::ConstNum(c(1.0))).unwrap();
        assert!(matches!(eval_contour(&AnalyticFn::identity(), &one, None), Err(Error::SingularUmbra { .. })));
    }

    #[test]
    fn gw_examples() {
        let v = eval_gw(&AnalyticFn::identity(), &b(), None, &GwSchedule::default()).unwrap();
        assert!((v.value - 0.5).norm() < 1e-8, "{v:?}");
        let f = AnalyticFn::exp_linear(c(-0.5));
        let g = eval_gw(&f, &b(), None, &GwSchedule::default()).unwrap();
        let k = eval_contour(&f, &b(), None).unwrap();
        assert!((g.value - k.value).norm() < 1e-8);
        let spiral = AnalyticFn::exp_linear(C64::new(0.0, 3.0 * PI));
        assert!(eval_gw(&spiral, &b(), None, &GwSchedule::default()).is_err());
    }

    #[test]
    fn em_examples() {
        let p = EmParams::default();
        let v = eval_em(&AnalyticFn::power(c(2.0)), &p).unwrap();
        assert!((v.value.re - 1.0 / 6.0).abs() < 1e-12);
        // polynomial: the identity closes at the first pair
        assert_eq!(v.diagnostics.trail.len(), 2);
        let v = eval_em(&AnalyticFn::log(), &p).unwrap();
        assert!((v.value.re + euler_gamma_limit()).abs() < 1e-10, "{v:?}");
        let zlnz = AnalyticFn::new(|z: C64| z * z.ln()).with_singularity(Singularity::branch(c(0.0)));
        let v = eval_em(&zlnz, &p).unwrap();
        assert!((v.value.re - (1.0 - (2.0 * PI).ln()) / 2.0).abs() < 1e-10, "{v:?}");
        assert!(matches!(eval_em(&AnalyticFn::exp_linear(c(0.5)), &p), Err(Error::Inadmissible(_))));
        assert!(eval_em(&AnalyticFn::log(), &EmParams { p: 17, ..p }).is_err());
    }

    #[test]
    fn power_examples() {
        assert!((eval_power(c(2.0)).unwrap().value.re - 1.0 / 6.0).abs() < 1e-13);
        assert!((eval_power(c(0.0)).unwrap().value.re - 1.0).abs() < 1e-14);
        for z in [c(0.5), C64::new(2.0, 1.0), c(1.5)] {
            let v = eval_power(z).unwrap().value;
            let want = -z * zeta(c(1.0) - z).unwrap();
            assert!((v - want).norm() < 1e-8, "z = {z}: {v} vs {want}");
        }
        assert!(eval_power(c(-1.5)).is_err());
    }

    #[test]
    fn shifted_examples() {
        let g = euler_gamma_limit();
        let v = eval_shifted(&AnalyticFn::log(), &b(), c(1.0)).unwrap();
        assert!((v.value.re - (1.0 - g)).abs() < 1e-9, "{v:?}");
        let e = AnalyticFn::exp_linear(c(1.0));
        let v = eval_shifted(&e, &b(), c(2.0)).unwrap();
        assert!((v.value.re - 2f64.exp() * gen_b1()).abs() < 1e-8);
        let v0 = eval_shifted(&e, &b(), c(0.0)).unwrap();
        let v1 = eval_auto(&e, &b()).unwrap();
        assert!((v0.value - v1.value).norm() < 1e-14);
    }

    #[test]
    fn special_shift_examples() {
        let cube = AnalyticFn::power(c(3.0));
        assert!((eval_special_shift(&cube, Special::D, c(2.0)).unwrap() - 12.0).norm() < 1e-11);
        let sq = AnalyticFn::power(c(2.0));
        assert_eq!(eval_special_shift(&sq, Special::Delta, c(3.0)).unwrap(), c(7.0));
        let v = eval_special_shift(&AnalyticFn::log(), Special::Delta, c(1.0)).unwrap();
        assert!((v.re - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn derivative_in_shift() {
        let d = eval_derivative_in_shift(&AnalyticFn::power(c(2.0)), &b()).unwrap();
        assert!((d.value - 1.0).norm() < 1e-9, "{d:?}");
        let d = eval_derivative_in_shift(&AnalyticFn::exp_linear(c(1.0)), &b()).unwrap();
        assert!((d.value - gen_b1()).norm() < 1e-8, "{d:?}");
    }

    #[test]
    fn counterexample_is_reported_separately() {
        let a = counterexample_umbra().unwrap();
        let one = AnalyticFn::constant(c(1.0));
        let rep = shift_by_d_report(&one, &a).unwrap();
        let with_d = rep.with_d.unwrap();
        assert!((with_d.value - 1.0).norm() < 1e-8, "{with_d:?}");
        // f′ = 0, so f′(A) is 0 whenever it is computable
        if let Ok(d) = rep.derivative {
            assert!(d.value.norm() < 1e-8);
        }
    }

    #[test]
    fn auto_examples() {
        let v = eval_auto(&AnalyticFn::power(c(3.0)), &b()).unwrap();
        assert!(v.value.norm() < 1e-10);
        let ok: Vec<Route> = v.diagnostics.routes.iter().filter(|r| r.value.is_some()).map(|r| r.route).collect();
        assert!(ok.contains(&Route::Series) && ok.contains(&Route::EulerMaclaurin));
        let v = eval_auto(&AnalyticFn::log(), &b()).unwrap();
        assert!((v.value.re + euler_gamma_limit()).abs() < 1e-10);
        let series = v.diagnostics.routes.iter().find(|r| r.route == Route::Series).unwrap();
        assert!(series.value.is_none());
        let e = make_special(Special::Euler).unwrap();
        let v = eval_auto(&AnalyticFn::exp_linear(c(0.5)), &e).unwrap();
        assert!((v.value.re - 1.0 / 0.5f64.cosh()).abs() < 1e-10);
    }

    #[test]
    fn exponential_identity() {
        for a in [b(), make_special(Special::Euler).unwrap()] {
            for cc in [c(0.5), c(-0.5), c(1.0), c(-1.0), C64::new(1.0, 1.0)] {
                let v = eval_auto(&AnalyticFn::exp_linear(cc), &a).unwrap();
                let want = a.gen.eval(cc);
                assert!((v.value - want).norm() < 1e-8, "{} at {cc}: {v:?} vs {want}", a.label);
            }
        }
    }

    #[test]
    fn singular_catalog_identities() {
        let f = AnalyticFn::exp_linear(c(2.0));
        let ce = make_special(Special::ConstExp(c(0.5))).unwrap();
        assert!((eval_auto(&f, &ce).unwrap().value - 1f64.exp()).norm() < 1e-14);
        let d = make_special(Special::D).unwrap();
        assert!((eval_auto(&f, &d).unwrap().value - 2.0).norm() < 1e-11);
        let delta = make_special(Special::Delta).unwrap();
        assert!((eval_auto(&f, &delta).unwrap().value - (2f64.exp() - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn mollifier_gap_and_decomposition() {
        for w in [c(0.0), C64::new(2.5, -0.3), C64::new(-3.0, 0.4)] {
            let g = mollifier_plus(w).unwrap() - mollifier_minus(w).unwrap();
            assert!((g - 1.0).norm() < 1e-11, "{w}: {g}");
        }
        // ρ̌₊′(w) = e^{−w²/4}/(2√π)
        let plus = AnalyticFn::new(|w| mollifier_plus(w).unwrap());
        for w in [c(0.3), C64::new(-1.5, 0.2)] {
            let d = derivative(&plus, w, 1).unwrap().value;
            let want = (-(w * w) / 4.0).exp() / (2.0 * PI.sqrt());
            assert!((d - want).norm() < 1e-9, "{w}: {d} vs {want}");
        }
        let one = make_special(Special::ConstNum(c(1.0))).unwrap();
        let dec = decompose_singular(&one).unwrap();
        assert!((dec.gap.value - 1.0).norm() < 1e-11);
        assert!(dec.plus.index.is_regular() && dec.minus.index.is_regular());
        assert!(dec.plus.index.alpha < 0.05 && dec.minus.index.beta > -0.05);
        let delta = make_special(Special::Delta).unwrap();
        let dec = decompose_singular(&delta).unwrap();
        assert!(
            dec.plus.index.is_regular() && dec.minus.index.is_regular(),
            "{:?} {:?}",
            dec.plus.index,
            dec.minus.index
        );
        for w in [C64::new(0.2, 0.1), C64::new(-1.0, -0.5), C64::new(1.7, 0.3)] {
            let diff = dec.plus.gen.eval(w) - dec.minus.gen.eval(w);
            let want = delta.gen.eval(w) * dec.gap.value;
            assert!((diff - want).norm() < 1e-10 * want.norm().max(1.0));
        }
    }
}
