//! Named numerical checks of the identities the library rests on, grouped by
//! acceptance criterion. The acceptance test and the `identities` CLI
//! subcommand both run these.

use crate::analytic::{AnalyticFn, Singularity};
use crate::contour::{integrate_real_line, line_integral, GwSchedule, QuadratureSpec};
use crate::error::{Error, Result};
use crate::eval::{eval_contour, eval_em, eval_gw, eval_power, eval_series, EmParams, EvalResult, SeriesParams};
use crate::fracsum::{frac_sum_derivative, termwise_sum, FracSumParams, FracSummer};
use crate::gosper::{
    gosper_direct_cos, gosper_direct_sin, gosper_rhs, gosper_umbral, umbral_expansion, umbral_summand, DirectPolicy,
    Family, KernelSpec,
};
use crate::numerics::{richardson_doubling, CompensatedSum, C64, EPS};
use crate::special::{euler_gamma_limit, zeta, zeta_derivative};
use crate::umbra::{add, make_special, moment, scale, usum, Special};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub expected: C64,
    pub computed: C64,
    pub gap: f64,
    pub tol: f64,
    pub pass: bool,
    /// Failure reason or extra diagnostics.
    pub detail: String,
}

impl Check {
    fn compare(criterion: u8, name: impl Into<String>, expected: C64, computed: Result<C64>, tol: f64) -> Self {
        let name = name.into();
        match computed {
            Ok(v) => {
                let gap = (v - expected).norm();
                Check { criterion, name, expected, computed: v, gap, tol, pass: gap <= tol, detail: String::new() }
            }
            Err(e) => Check::failed(criterion, name, expected, tol, &e),
        }
    }

    fn failed(criterion: u8, name: String, expected: C64, tol: f64, e: &Error) -> Self {
        let nan = C64::new(f64::NAN, f64::NAN);
        Check { criterion, name, expected, computed: nan, gap: f64::INFINITY, tol, pass: false, detail: e.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// The acceptance checks.
    Core,
    /// Core plus wider grids.
    Full,
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "Euler-Maclaurin constants"),
    (2, "fractional sums"),
    (3, "B^z against -z zeta(1-z)"),
    (4, "Gosper identities"),
    (5, "Stirling constant and (-1/2)!"),
    (6, "route agreement"),
    (7, "fractional-sum derivative"),
    (8, "termwise summation"),
    (9, "structural identities"),
    (10, "zeta limits"),
];

pub fn criterion(k: u8) -> Vec<Check> {
    match k {
        1 => em_constants(),
        2 => fractional_sums(),
        3 => bernoulli_powers(&[c(2.0), c(3.0), c(4.0), c(0.5), c(1.5), C64::new(2.0, 1.0)]),
        4 => gosper_checks(&[c(0.5), c(1.0), c(2.0), C64::new(1.0, 1.0), C64::new(0.0, 2.0)]),
        5 => stirling_checks(),
        6 => route_agreement(),
        7 => derivative_checks(),
        8 => termwise_checks(),
        9 => structural_checks(),
        10 => zeta_limits(),
        _ => Vec::new(),
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    let mut out: Vec<Check> = CRITERIA.iter().flat_map(|&(k, _)| criterion(k)).collect();
    if suite == Suite::Full {
        let grid: Vec<C64> =
            (0..4).flat_map(|i| (0..3).map(move |j| C64::new(0.25 + 0.75 * i as f64, -1.0 + j as f64))).collect();
        out.extend(bernoulli_powers(&grid));
        let j0 = KernelSpec::bessel(0.0).expect("order 0");
        let j1 = KernelSpec::bessel(1.0).expect("order 1");
        for kernel in [j0, j1] {
            for b in [c(0.3), c(3.0), C64::new(0.5, -0.5)] {
                out.extend(gosper_pair(&kernel, b));
            }
        }
    }
    out
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn value(r: Result<EvalResult>) -> Result<C64> {
    r.map(|r| r.value)
}

fn z_log_z() -> AnalyticFn {
    AnalyticFn::new(|z| if z == C64::new(0.0, 0.0) { z } else { z * z.ln() })
        .with_singularity(Singularity::branch(c(0.0)))
}

fn em(f: &AnalyticFn) -> Result<EvalResult> {
    eval_em(f, &EmParams::default())
}

fn em_constants() -> Vec<Check> {
    let gamma = euler_gamma_limit();
    let zlogz = z_log_z();
    let z2logz = AnalyticFn::identity().mul(&z_log_z());
    let ln_a = zeta_derivative(c(-1.0)).map(|d| 1.0 / 12.0 - d.re);
    vec![
        Check::compare(1, "ln B = -gamma", c(-gamma), value(em(&AnalyticFn::log())), 1e-8),
        Check::compare(1, "B ln B = (1 - ln 2pi)/2", c((1.0 - (2.0 * PI).ln()) / 2.0), value(em(&zlogz)), 1e-8),
        match ln_a {
            Ok(la) => Check::compare(1, "B^2 ln B = 1/4 - 2 ln A", c(0.25 - 2.0 * la), value(em(&z2logz)), 1e-7),
            Err(e) => Check::failed(1, "B^2 ln B = 1/4 - 2 ln A".into(), c(f64::NAN), 1e-7, &e),
        },
    ]
}

fn fsum(f: AnalyticFn, x: f64, y: f64) -> Result<C64> {
    Ok(FracSummer::new(f, FracSumParams::default())?.sum(c(x), c(y))?.value)
}

fn fractional_sums() -> Vec<Check> {
    let tol = 1e-8;
    let mut out = vec![
        Check::compare(2, "sum_{1/4}^{-1/4} 1/k = pi", c(PI), fsum(AnalyticFn::power(c(-1.0)), 0.25, -0.25), tol),
        Check::compare(
            2,
            "sum_1^{-1/2} 1/k^2 = -pi^2/3",
            c(-PI * PI / 3.0),
            fsum(AnalyticFn::power(c(-2.0)), 1.0, -0.5),
            tol,
        ),
        Check::compare(2, "sum_1^{-1/2} 1 = -1/2", c(-0.5), fsum(AnalyticFn::constant(c(1.0)), 1.0, -0.5), tol),
    ];
    for m in [1, 2] {
        let p = 2 * m - 1;
        out.push(Check::compare(
            2,
            format!("sum_{{1/4}}^{{-1/4}} k^{p} = 0"),
            c(0.0),
            fsum(AnalyticFn::power(c(p as f64)), 0.25, -0.25),
            tol,
        ));
    }
    out
}

fn bernoulli_powers(zs: &[C64]) -> Vec<Check> {
    let b = make_special(Special::Bernoulli).expect("catalog");
    let mut out = Vec::new();
    for &z in zs {
        let want = match zeta(1.0 - z) {
            Ok(v) => -z * v,
            Err(e) => {
                out.push(Check::failed(3, format!("B^{z}"), c(f64::NAN), 1e-6, &e));
                continue;
            }
        };
        out.push(Check::compare(3, format!("B^({z}) power route"), want, value(eval_power(z)), 1e-6));
        let f = AnalyticFn::power(z);
        out.push(Check::compare(3, format!("B^({z}) contour route"), want, value(eval_contour(&f, &b, None)), 1e-6));
    }
    out
}

fn gosper_pair(kernel: &KernelSpec, b: C64) -> Vec<Check> {
    let p = DirectPolicy::default();
    let mut out = Vec::new();
    for (family, direct) in
        [(Family::Sin, gosper_direct_sin(kernel, b, &p)), (Family::Cos, gosper_direct_cos(kernel, b, &p))]
    {
        let name = format!("{family:?} family direct, b = {b}");
        match gosper_rhs(kernel, b, family) {
            Ok(want) => out.push(Check::compare(4, name, want, direct.map(|d| d.value), 1e-6)),
            Err(e) => out.push(Check::failed(4, name, c(f64::NAN), 1e-6, &e)),
        }
    }
    out
}

fn gosper_checks(bs: &[C64]) -> Vec<Check> {
    let sin = KernelSpec::sin_kernel();
    let cos = KernelSpec::cos_kernel();
    let p = DirectPolicy::default();
    let mut out = Vec::new();
    for &b in bs {
        for (kernel, family) in [(&sin, Family::Sin), (&cos, Family::Cos)] {
            let direct = match family {
                Family::Sin => gosper_direct_sin(kernel, b, &p),
                Family::Cos => gosper_direct_cos(kernel, b, &p),
            };
            let name = format!("{family:?} family direct, b = {b}");
            match gosper_rhs(kernel, b, family) {
                Ok(want) => out.push(Check::compare(4, name, want, direct.map(|d| d.value), 1e-6)),
                Err(e) => out.push(Check::failed(4, name, c(f64::NAN), 1e-6, &e)),
            }
        }
    }
    for b in [c(0.5), c(1.0)] {
        for (kernel, family, factor) in [(&sin, Family::Sin, 2.0), (&cos, Family::Cos, 4.0)] {
            let direct = match family {
                Family::Sin => gosper_direct_sin(kernel, b, &p),
                Family::Cos => gosper_direct_cos(kernel, b, &p),
            };
            let name = format!("{family:?} family umbral vs {factor} x direct, b = {b}");
            match direct {
                Ok(d) => out.push(Check::compare(
                    4,
                    name,
                    d.value * factor,
                    gosper_umbral(kernel, b, family).map(|u| u.value),
                    1e-5,
                )),
                Err(e) => out.push(Check::failed(4, name, c(f64::NAN), 1e-5, &e)),
            }
        }
    }
    out
}

/// c(n) = ln n! − (n + ½) ln n + n on a doubling grid.
fn stirling_sequence() -> Vec<C64> {
    let mut ln_fact = CompensatedSum::new();
    let mut k = 1usize;
    let mut out = Vec::new();
    for j in 0..11 {
        let n = 8usize << j;
        while k < n {
            k += 1;
            ln_fact.add(c((k as f64).ln()));
        }
        let nf = n as f64;
        out.push(ln_fact.value() - (nf + 0.5) * nf.ln() + nf);
    }
    out
}

fn stirling_checks() -> Vec<Check> {
    let want = c(0.5 * (2.0 * PI).ln());
    let g = z_log_z();
    let b = make_special(Special::Bernoulli).expect("catalog");
    let via_em = value(em(&g)).map(|v| 0.5 - v);
    let via_limit = richardson_doubling(&stirling_sequence(), 1.0).value;
    // g(B − ½) = 2g(B/2) − g(B) by the multiplication theorem at n = 2, and
    // ln(−½)! = g(B − ½) + ½ − g(B).
    let half_chain = (|| -> Result<C64> {
        let gb = em(&g)?.value;
        let half = scale(0.5, &b)?;
        let g_half = eval_contour(&g, &half, None)?.value;
        Ok(2.0 * g_half - gb + 0.5 - gb)
    })();
    vec![
        Check::compare(5, "ln sqrt(2pi) = 1/2 - B ln B", want, via_em, 1e-6),
        Check::compare(5, "ln sqrt(2pi) = lim c(n)", want, Ok(via_limit), 1e-6),
        Check::compare(5, "ln (-1/2)! = ln sqrt(pi)", c(0.5 * PI.ln()), half_chain, 1e-8),
    ]
}

fn route_results(f: &AnalyticFn, em_ok: bool) -> Vec<(&'static str, EvalResult)> {
    let b = make_special(Special::Bernoulli).expect("catalog");
    let mut out = Vec::new();
    if let Ok(r) = eval_series(f, &b, &SeriesParams::default()) {
        out.push(("series", r));
    }
    if let Ok(r) = eval_contour(f, &b, None) {
        out.push(("contour", r));
    }
    if let Ok(r) = eval_gw(f, &b, None, &GwSchedule::default()) {
        out.push(("gw", r));
    }
    if em_ok {
        if let Ok(r) = em(f) {
            out.push(("em", r));
        }
    }
    out
}

fn agreement(name: String, f: &AnalyticFn, em_ok: bool) -> Check {
    let rs = route_results(f, em_ok);
    let mut check = Check {
        criterion: 6,
        name,
        expected: rs.first().map(|r| r.1.value).unwrap_or(c(f64::NAN)),
        computed: c(f64::NAN),
        gap: 0.0,
        tol: 0.0,
        pass: rs.len() >= 2,
        detail: rs.iter().map(|r| r.0).collect::<Vec<_>>().join(","),
    };
    if rs.len() < 2 {
        check.detail = format!("fewer than two admissible routes: {}", check.detail);
        check.gap = f64::INFINITY;
        return check;
    }
    let mut worst = f64::NEG_INFINITY;
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            let (a, b) = (&rs[i].1, &rs[j].1);
            let gap = (a.value - b.value).norm();
            let tol = a.err_est + b.err_est + 64.0 * EPS * a.value.norm().max(1.0);
            if gap / tol > worst {
                worst = gap / tol;
                check.expected = a.value;
                check.computed = b.value;
                check.gap = gap;
                check.tol = tol;
            }
        }
    }
    check.pass = worst <= 1.0;
    check
}

fn route_agreement() -> Vec<Check> {
    let mut out = Vec::new();
    let polys: [Vec<C64>; 10] = [
        vec![c(1.0)],
        vec![c(0.0), c(1.0)],
        vec![c(1.0), c(-2.0), c(3.0)],
        vec![c(0.0), c(0.0), c(0.0), c(1.0)],
        vec![c(0.5), c(0.0), c(-1.0), c(0.0), c(1.0)],
        vec![c(0.0), c(0.0), c(0.0), c(0.0), c(0.0), c(1.0)],
        vec![c(1.0), c(1.0), c(1.0), c(1.0), c(1.0), c(1.0), c(1.0)],
        vec![C64::new(0.0, 1.0), c(2.0), C64::new(1.0, -1.0)],
        vec![c(0.0), C64::new(0.5, 0.5), c(0.0), C64::new(0.0, -0.25)],
        vec![c(-3.0), c(0.0), c(0.0), c(0.0), c(0.0), c(0.0), c(0.1)],
    ];
    for (i, p) in polys.iter().enumerate() {
        out.push(agreement(
            format!("polynomial {i} (degree {})", p.len() - 1),
            &AnalyticFn::polynomial(p.clone()),
            true,
        ));
    }
    let rates = [
        c(-0.9),
        c(-0.5),
        c(-0.2),
        c(0.2),
        c(0.5),
        c(0.9),
        C64::new(0.3, 0.4),
        C64::new(-0.3, 0.8),
        C64::new(0.5, -1.0),
        C64::new(-0.7, -0.3),
    ];
    for r in rates {
        out.push(agreement(format!("exp({r} z)"), &AnalyticFn::exp_linear(r), r.re < 0.0));
    }
    let shifts =
        [c(1.0), c(1.5), c(2.0), c(3.0), c(4.0), c(0.75), c(5.0), c(2.5), C64::new(1.0, 0.5), C64::new(2.0, -1.0)];
    for z0 in shifts {
        out.push(agreement(format!("ln(z + {z0})"), &AnalyticFn::log().shifted(z0), true));
    }
    out
}

fn derivative_checks() -> Vec<Check> {
    let params = FracSumParams::default();
    let cases: [(&str, AnalyticFn, AnalyticFn); 3] = [
        ("k", AnalyticFn::identity(), AnalyticFn::constant(c(1.0))),
        ("1/k", AnalyticFn::power(c(-1.0)), AnalyticFn::power(c(-2.0)).scale_by(c(-1.0))),
        ("ln k", AnalyticFn::log(), AnalyticFn::power(c(-1.0))),
    ];
    let mut out = Vec::new();
    for (name, f, fp) in &cases {
        for z in [1.0, 1.5, 2.0] {
            let label = format!("d/dz sum_1^z {name} at z = {z}");
            match frac_sum_derivative(f, Some(fp), c(z), &params) {
                Ok(r) => out.push(Check {
                    criterion: 7,
                    name: label,
                    expected: r.rhs.value,
                    computed: r.lhs.value,
                    gap: r.gap,
                    tol: 1e-6,
                    pass: r.gap < 1e-6,
                    detail: format!("c_f = {}", r.c_f.value),
                }),
                Err(e) => out.push(Check::failed(7, label, c(f64::NAN), 1e-6, &e)),
            }
        }
    }
    out
}

fn termwise_checks() -> Vec<Check> {
    let b = c(1.0);
    let params = FracSumParams::default();
    let mut out = Vec::new();
    for (kernel, family, x, y) in
        [(KernelSpec::sin_kernel(), Family::Sin, 0.25, -0.25), (KernelSpec::cos_kernel(), Family::Cos, 1.0, -0.5)]
    {
        let label = format!("{family:?} family termwise vs direct, b = 1");
        let run = || -> Result<Check> {
            let series = umbral_expansion(&kernel, b, family, 12)?;
            let full = umbral_summand(&kernel, b, family);
            let r = termwise_sum(&series, Some(&full), c(x), c(y), &params)?;
            Ok(Check {
                criterion: 8,
                name: label.clone(),
                expected: r.direct.value,
                computed: r.termwise,
                gap: r.gap,
                tol: 1e-6,
                pass: r.gap < 1e-6 && r.licensed,
                detail: format!("licensed = {}", r.licensed),
            })
        };
        out.push(run().unwrap_or_else(|e| Check::failed(8, label, c(f64::NAN), 1e-6, &e)));
    }
    out
}

fn structural_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let b = make_special(Special::Bernoulli).expect("catalog");
    let e = make_special(Special::Euler).expect("catalog");

    // (A₁ + A₂)ⁿ = Σ C(n, k) A₁ᵏ A₂ⁿ⁻ᵏ
    let run = || -> Result<Vec<Check>> {
        let s = add(&b, &e)?;
        let mut v = Vec::new();
        for n in [2usize, 5, 8] {
            let mut acc = C64::new(0.0, 0.0);
            let mut binom = 1.0;
            for k in 0..=n {
                acc += moment(&b, k)?.value * moment(&e, n - k)?.value * binom;
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            v.push(Check::compare(
                9,
                format!("moment convolution (B + E)^{n}"),
                acc,
                moment(&s, n).map(|m| m.value),
                1e-9 * acc.norm().max(1.0),
            ));
        }
        Ok(v)
    };
    out.extend(run().unwrap_or_else(|e| vec![Check::failed(9, "moment convolution".into(), c(f64::NAN), 1e-9, &e)]));

    // Σ_{j<n} (nB + (−j)) has generating function n𝔅
    for n in [2usize, 3, 5] {
        let run = || -> Result<Check> {
            let nb = scale(n as f64, &b)?;
            let mut acc = add(&nb, &make_special(Special::ConstExp(c(0.0)))?)?;
            for j in 1..n {
                acc = usum(&acc, &add(&nb, &make_special(Special::ConstExp(c(-(j as f64))))?)?)?;
            }
            let z = C64::new(0.3, 0.4);
            Ok(Check::compare(
                9,
                format!("multiplication theorem n = {n}"),
                b.gen.eval(z) * n as f64,
                Ok(acc.gen.eval(z)),
                1e-12,
            ))
        };
        out.push(
            run().unwrap_or_else(|e| {
                Check::failed(9, format!("multiplication theorem n = {n}"), c(f64::NAN), 1e-12, &e)
            }),
        );
    }

    // S(x, y) + S(y + 1, w) = S(x, w)
    let inv = FracSummer::new(AnalyticFn::power(c(-1.0)), FracSumParams::default());
    let inv2 = FracSummer::new(AnalyticFn::power(c(-2.0)), FracSumParams::default());
    match (&inv, &inv2) {
        (Ok(s1), Ok(s2)) => {
            for (x, y, w) in [(1.0, 0.5, 2.25), (0.5, 1.7, 3.1), (2.0, -0.3, 0.9)] {
                let run = || -> Result<(C64, C64)> {
                    let lhs = s1.sum(c(x), c(y))?.value + s1.sum(c(y + 1.0), c(w))?.value;
                    Ok((s1.sum(c(x), c(w))?.value, lhs))
                };
                let name = format!("continued summation ({x}, {y}, {w})");
                match run() {
                    Ok((want, got)) => out.push(Check::compare(9, name, want, Ok(got), 1e-8)),
                    Err(e) => out.push(Check::failed(9, name, c(f64::NAN), 1e-8, &e)),
                }
            }
            // Σ_x^y f(k + s) = Σ_{x+s}^{y+s} f(k)
            for (x, y, s) in [(1.0, 2.5, 0.5), (1.5, 0.25, 1.3)] {
                let shifted = FracSummer::new(AnalyticFn::power(c(-2.0)).shifted(c(s)), FracSumParams::default());
                let name = format!("shift covariance ({x}, {y}) by {s}");
                let run = || -> Result<(C64, C64)> {
                    Ok((s2.sum(c(x + s), c(y + s))?.value, shifted?.sum(c(x), c(y))?.value))
                };
                match run() {
                    Ok((want, got)) => out.push(Check::compare(9, name, want, Ok(got), 1e-8)),
                    Err(e) => out.push(Check::failed(9, name, c(f64::NAN), 1e-8, &e)),
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => out.push(Check::failed(9, "fractional summers".into(), c(f64::NAN), 1e-8, e)),
    }

    // line integrals of entire, decaying integrands do not depend on height
    let spec = QuadratureSpec::default();
    let integrands: [(&str, AnalyticFn); 3] = [
        ("exp(-z^2)", AnalyticFn::new(|z| (-z * z).exp())),
        ("z^2 exp(-z^2/2 + iz)", AnalyticFn::new(|z| z * z * (-z * z / 2.0 + C64::new(0.0, 1.0) * z).exp())),
        ("exp(-z^2 + z) cos z", AnalyticFn::new(|z| (-z * z + z).exp() * z.cos())),
    ];
    for (name, g) in &integrands {
        let run =
            || -> Result<(C64, C64)> { Ok((line_integral(g, 0.0, &spec)?.value, line_integral(g, 0.7, &spec)?.value)) };
        let label = format!("height independence of {name}");
        match run() {
            Ok((a, b)) => out.push(Check::compare(9, label, a, Ok(b), 1e-10)),
            Err(e) => out.push(Check::failed(9, label, c(f64::NAN), 1e-10, &e)),
        }
    }

    // ln ∫|Â_B(ξ − it) f(t + iξ)| dξ is convex in t
    for rate in [c(0.5), C64::new(-0.3, 1.0)] {
        let name = format!("log-convexity of the L1 norm, f = exp({rate} z)");
        match log_l1_norms(rate, [0.2, 0.5, 0.8]) {
            Ok([l0, l1, l2]) => {
                let excess = l1 - (l0 + l2) / 2.0;
                out.push(Check {
                    criterion: 9,
                    name,
                    expected: c((l0 + l2) / 2.0),
                    computed: c(l1),
                    gap: excess.max(0.0),
                    tol: 1e-6,
                    pass: excess <= 1e-6,
                    detail: String::new(),
                });
            }
            Err(e) => out.push(Check::failed(9, name, c(f64::NAN), 1e-6, &e)),
        }
    }
    out
}

/// ln of ∫|Â_B(ξ − it) e^{c(t + iξ)}| dξ at each height, with the closed
/// form Â_B(ζ) = −π²/(√(2π) sinh²(πζ)) valid for 0 < t < 1.
pub fn log_l1_norms<const N: usize>(rate: C64, ts: [f64; N]) -> Result<[f64; N]> {
    let spec = QuadratureSpec::default();
    let mut out = [0.0; N];
    for (o, &t) in out.iter_mut().zip(ts.iter()) {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::HeightOutside { t, lo: 0.0, hi: 1.0 });
        }
        let g = move |xi: f64| {
            let zeta = C64::new(xi, -t);
            let s = (zeta * PI).sinh();
            let a = -PI * PI / ((2.0 * PI).sqrt() * s * s);
            c((a * (rate * C64::new(t, xi)).exp()).norm())
        };
        *o = integrate_real_line(g, &spec)?.value.re.ln();
    }
    Ok(out)
}

/// ζ(1+s) = B^{−s}/s, ζ(1−s) = −B^{s}/s, ζ(s) = −B^{1−s}/(1−s).
fn zeta_limits() -> Vec<Check> {
    let s = 1e-4;
    let tol = 1e-5;
    let bp = |z: f64| eval_power(c(z)).map(|r| r.value);
    let zeta_b = |w: f64| -> Result<C64> {
        // ζ(w) = −B^{1−w}/(1−w)
        Ok(-bp(1.0 - w)? / (1.0 - w))
    };
    let gamma = euler_gamma_limit();
    let central = (|| -> Result<C64> {
        let up = zeta_b(1.0 + s)? - 1.0 / s;
        let down = zeta_b(1.0 - s)? + 1.0 / s;
        Ok((up + down) / 2.0)
    })();
    let oracle_up = zeta(c(1.0 + s)).map(|v| v - 1.0 / s);
    let slope = (|| -> Result<C64> { Ok((zeta_b(s)? - zeta_b(-s)?) / (2.0 * s)) })();
    let mut out = vec![Check::compare(10, "zeta(1+s) - 1/s -> gamma (central)", c(gamma), central, tol)];
    match oracle_up {
        Ok(want) => out.push(Check::compare(
            10,
            "zeta(1+s) - 1/s against the oracle",
            want,
            zeta_b(1.0 + s).map(|v| v - 1.0 / s),
            tol,
        )),
        Err(e) => out.push(Check::failed(10, "zeta(1+s) - 1/s against the oracle".into(), c(f64::NAN), tol, &e)),
    }
    match zeta(c(s)) {
        Ok(want) => out.push(Check::compare(10, "zeta(s) against the oracle", want, zeta_b(s), tol)),
        Err(e) => out.push(Check::failed(10, "zeta(s) against the oracle".into(), c(f64::NAN), tol, &e)),
    }
    out.push(Check::compare(10, "zeta(0) = -1/2", c(-0.5), zeta_b(0.0), tol));
    out.push(Check::compare(10, "zeta'(0) = -ln sqrt(2pi) (central)", c(-0.5 * (2.0 * PI).ln()), slope, tol));
    out
}
