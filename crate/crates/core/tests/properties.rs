//! Invariants as properties over randomly drawn parameters.

use proptest::prelude::*;
use umbral::analytic::AnalyticFn;
use umbral::contour::{line_integral, QuadratureSpec};
use umbral::eval::{eval_contour, eval_em, eval_series, EmParams, SeriesParams};
use umbral::expr::{parse, Expr, Func};
use umbral::fracsum::{direct_sum, frac_sum_poly, FracSumParams, FracSummer};
use umbral::identities::log_l1_norms;
use umbral::numerics::C64;
use umbral::special::gamma;
use umbral::umbra::{add, make_special, moment, scale, usum, Special};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn summer(f: AnalyticFn) -> FracSummer {
    FracSummer::new(f, FracSumParams::default()).unwrap()
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn moment_convolution(cexp in complex(1.0), n in 0usize..10) {
        let b = make_special(Special::Bernoulli).unwrap();
        let e = make_special(Special::ConstExp(cexp)).unwrap();
        let s = add(&b, &e).unwrap();
        let mut want = C64::new(0.0, 0.0);
        let mut binom = 1.0;
        for k in 0..=n {
            want += moment(&b, k).unwrap().value * cexp.powu((n - k) as u32) * binom;
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        let got = moment(&s, n).unwrap().value;
        prop_assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn multiplication_identity(n in 2usize..7, z in complex(1.0)) {
        let b = make_special(Special::Bernoulli).unwrap();
        let nb = scale(n as f64, &b).unwrap();
        let mut acc = add(&nb, &make_special(Special::ConstExp(c(0.0))).unwrap()).unwrap();
        for j in 1..n {
            acc = usum(&acc, &add(&nb, &make_special(Special::ConstExp(c(-(j as f64)))).unwrap()).unwrap()).unwrap();
        }
        let want = b.gen.eval(z) * n as f64;
        prop_assert!((acc.gen.eval(z) - want).norm() < 1e-11 * want.norm().max(1.0));
    }

    #[test]
    fn continued_summation(x in 0.5f64..3.0, y in 0.0f64..3.0, w in 0.0f64..3.0) {
        for s in [summer(AnalyticFn::power(c(-2.0))), summer(AnalyticFn::log())] {
            let lhs = s.sum(c(x), c(y)).unwrap().value + s.sum(c(y + 1.0), c(w)).unwrap().value;
            let rhs = s.sum(c(x), c(w)).unwrap().value;
            prop_assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn degenerate_interval(x in -3.5f64..4.0) {
        prop_assume!((x - x.round()).abs() > 0.05);
        let f = AnalyticFn::power(c(-1.0));
        let got = summer(f.clone()).sum(c(x), c(x)).unwrap().value;
        prop_assert!((got - f.eval(c(x))).norm() < 1e-8 * (1.0 / x.abs()).max(1.0), "{got}");
    }

    #[test]
    fn shift_covariance(x in 0.5f64..3.0, y in 0.0f64..3.0, s in 0.0f64..2.0) {
        let f = AnalyticFn::power(c(-2.0));
        let lhs = summer(f.shifted(c(s))).sum(c(x), c(y)).unwrap().value;
        let rhs = summer(f).sum(c(x + s), c(y + s)).unwrap().value;
        prop_assert!((lhs - rhs).norm() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn polynomial_oracle(coeffs in prop::collection::vec(-2.0f64..2.0, 1..6), x in -2.0f64..3.0, y in -2.0f64..3.0) {
        let cs: Vec<C64> = coeffs.iter().map(|&v| c(v)).collect();
        let got = summer(AnalyticFn::polynomial(cs.clone())).sum(c(x), c(y)).unwrap().value;
        let want = frac_sum_poly(&cs, c(x), c(y)).unwrap();
        prop_assert!((got - want).norm() < 1e-8 * want.norm().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn integer_consistency(m in 1usize..9, which in 0usize..3) {
        let f = match which {
            0 => AnalyticFn::power(c(-1.0)),
            1 => AnalyticFn::log(),
            _ => AnalyticFn::power(c(0.5)),
        };
        let got = summer(f.clone()).sum(c(1.0), c(m as f64)).unwrap().value;
        let want = direct_sum(&f, c(1.0), m);
        prop_assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn height_independence(a in complex(1.0), t1 in -1.0f64..1.0, t2 in -1.0f64..1.0) {
        let g = AnalyticFn::new(move |z: C64| (-z * z + a * z).exp());
        let spec = QuadratureSpec::default();
        let v1 = line_integral(&g, t1, &spec).unwrap().value;
        let v2 = line_integral(&g, t2, &spec).unwrap().value;
        prop_assert!((v1 - v2).norm() < 1e-9, "{v1} vs {v2}");
    }

    #[test]
    fn log_convexity(rate in complex(2.0), lo in 0.05f64..0.45, hi in 0.55f64..0.95) {
        let [l0, l1, l2] = log_l1_norms(rate, [lo, (lo + hi) / 2.0, hi]).unwrap();
        prop_assert!(l1 <= (l0 + l2) / 2.0 + 1e-6, "{l0} {l1} {l2}");
    }

    #[test]
    fn linearity_over_usum(c1 in complex(1.0), rate in complex(1.0)) {
        let b = make_special(Special::Bernoulli).unwrap();
        let e = make_special(Special::ConstExp(c1)).unwrap();
        let f = AnalyticFn::exp_linear(rate);
        let p = SeriesParams::default();
        let whole = eval_series(&f, &usum(&b, &e).unwrap(), &p).unwrap();
        let parts = eval_series(&f, &b, &p).unwrap().value + (rate * c1).exp();
        prop_assert!((whole.value - parts).norm() < 1e-9 + whole.err_est, "{} vs {parts}", whole.value);
    }

    #[test]
    fn route_agreement(re in -0.95f64..-0.05, im in -1.0f64..1.0) {
        let b = make_special(Special::Bernoulli).unwrap();
        let f = AnalyticFn::exp_linear(C64::new(re, im));
        let rs = [
            eval_series(&f, &b, &SeriesParams::default()).unwrap(),
            eval_contour(&f, &b, None).unwrap(),
            eval_em(&f, &EmParams::default()).unwrap(),
        ];
        for i in 0..3 {
            for j in i + 1..3 {
                let gap = (rs[i].value - rs[j].value).norm();
                prop_assert!(gap <= rs[i].err_est + rs[j].err_est + 1e-14, "{:?} vs {:?}", rs[i], rs[j]);
            }
        }
    }

    #[test]
    fn gamma_functional_equation(z in complex(4.0)) {
        prop_assume!((z - z.re.round()).norm() > 0.05 || z.re > 0.5);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-11 * rhs.norm().max(1e-300), "{lhs} vs {rhs}");
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0u32..64).prop_map(|k| Expr::Num(k as f64 / 8.0)), Just(Expr::I), Just(Expr::Z),];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Pow(Box::new(a), Box::new(b))),
            (
                inner.clone(),
                prop_oneof![Just(Func::Sin), Just(Func::Cos), Just(Func::Exp), Just(Func::Log), Just(Func::Sqrt)]
            )
                .prop_map(|(a, f)| Expr::Call(f, vec![a])),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Func::Pow, vec![a, b])),
        ]
    })
}

fn same_bits(a: C64, b: C64) -> bool {
    let eq = |x: f64, y: f64| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan());
    eq(a.re, b.re) && eq(a.im, b.im)
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn expr_round_trip(e in arb_expr(), z in complex(3.0)) {
        let printed = e.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(&back, &e, "printed as {}", printed);
        prop_assert!(same_bits(back.eval(z), e.eval(z)));
    }
}

#[test]
fn fubini_symmetry() {
    // f(z₁, z₂) = e^{c₁z₁ + c₂z₂} over B × E, inner evaluation by the series
    // route and outer by the contour route, in both orders
    let b = make_special(Special::Bernoulli).unwrap();
    let e = make_special(Special::Euler).unwrap();
    let (c1, c2) = (C64::new(0.4, 0.3), C64::new(-0.5, 0.2));
    let p = SeriesParams::default();
    let inner = |u: umbral::umbra::Umbra, rate: C64, other: C64| {
        AnalyticFn::new(move |w: C64| {
            let g = AnalyticFn::exp_linear(rate).scale_by((other * w).exp());
            eval_series(&g, &u, &p).map(|r| r.value).unwrap_or(C64::new(f64::NAN, f64::NAN))
        })
    };
    let be = eval_contour(&inner(e.clone(), c2, c1), &b, None).unwrap();
    let eb = eval_contour(&inner(b.clone(), c1, c2), &e, None).unwrap();
    assert!((be.value - eb.value).norm() < 1e-8 + be.err_est + eb.err_est, "{be:?} vs {eb:?}");
    let want = (c1 * c1.exp() / (c1.exp() - 1.0)) * (2.0 / (c2.exp() + (-c2).exp()));
    assert!((be.value - want).norm() < 1e-8, "{} vs {want}", be.value);
}

#[test]
fn limit_calculus() {
    // f_n = f·e^{z²/n²} → f on vertical lines, and the values converge
    let b = make_special(Special::Bernoulli).unwrap();
    let f = AnalyticFn::exp_linear(c(0.5));
    let want = eval_contour(&f, &b, None).unwrap().value;
    let mut last = f64::INFINITY;
    for n in [2.0f64, 4.0, 8.0, 16.0] {
        let fn_ = AnalyticFn::new(move |z: C64| (0.5 * z + z * z / (n * n)).exp());
        let gap = (eval_contour(&fn_, &b, None).unwrap().value - want).norm();
        assert!(gap < last, "n = {n}: {gap} not below {last}");
        last = gap;
    }
    assert!(last < 1e-2);
}

#[test]
fn bernoulli_closed_form_value() {
    // e^{cz}(B) = ce^c/(e^c − 1) through all three routes
    let b = make_special(Special::Bernoulli).unwrap();
    let cc = C64::new(-0.3, 0.7);
    let want = cc * cc.exp() / (cc.exp() - 1.0);
    for r in [
        eval_series(&AnalyticFn::exp_linear(cc), &b, &SeriesParams::default()).unwrap(),
        eval_contour(&AnalyticFn::exp_linear(cc), &b, None).unwrap(),
        eval_em(&AnalyticFn::exp_linear(cc), &EmParams::default()).unwrap(),
    ] {
        assert!((r.value - want).norm() < 1e-9, "{r:?}");
    }
}
