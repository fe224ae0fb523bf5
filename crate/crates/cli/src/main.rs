//! `umbral`: evaluation, fractional sums, Gosper checks, constants and the
//! identity suite from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation refused or failed.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;
use umbral::eval::{evaluate, EvalRequest, RouteChoice};
use umbral::fracsum::{frac_sum, FracSumParams, FracSumRequest};
use umbral::gosper::{
    gosper_direct_cos, gosper_direct_sin, gosper_rhs, gosper_umbral, DirectPolicy, Family, KernelSpec,
};
use umbral::identities::{run_suite, Suite};
use umbral::umbra::make_special_by_name;

#[derive(Parser, Debug)]
#[command(name = "umbral", version, about = "Numerical umbral calculus on strips")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the run manifest here instead of standard error.
    #[arg(long, global = true)]
    manifest: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone, Copy)]
struct OutputArgs {
    /// JSON on standard output.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// CSV on standard output.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate f at an umbra.
    Eval(EvalArgs),
    /// Fractional sum of f from one complex endpoint to another.
    Fracsum {
        /// Summand as a function of z.
        #[arg(long = "f")]
        f: String,
        /// Lower endpoint, a complex literal such as "0.5" or "1+2i".
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Upper endpoint, a complex literal.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Euler-Maclaurin expansion order.
        #[arg(long)]
        p: Option<usize>,
        /// Target accuracy of the limit sequence.
        #[arg(long)]
        tol: Option<f64>,
        /// Largest n of the limit sequence.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Gosper's Bessel-kernel series against their closed forms.
    Gosper {
        /// Series family: sin (terms over k) or cos (terms over k²).
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Parameter b, a complex literal.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Bessel order of the kernel z^{-nu} J_nu(z); defaults to the
        /// sin z/z kernel for the sin family and cos z for the cos family.
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<f64>,
        /// What to check against the closed form.
        #[arg(long, value_enum, default_value_t = CompareArg::Direct)]
        compare: CompareArg,
    },
    /// The constants table with its cross-checks.
    Constants,
    /// Run the identity suite.
    Identities {
        #[arg(long, value_enum, default_value_t = SuiteArg::Core)]
        suite: SuiteArg,
    },
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Function of z, e.g. "log(z)" or "exp(2*z)".
    #[arg(long = "f")]
    f: String,
    /// Catalog umbra: B, E, D, Delta, const_exp, const_num.
    #[arg(long, default_value = "B")]
    umbra: String,
    /// Parameter of const_exp and const_num.
    #[arg(long, allow_hyphen_values = true)]
    param: Option<String>,
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    route: RouteArg,
    /// Tolerance of the Euler-Maclaurin and Gauss-Weierstrass routes.
    #[arg(long)]
    tol: Option<f64>,
    /// Number of Taylor terms of the series route.
    #[arg(long)]
    n: Option<usize>,
    /// Euler-Maclaurin expansion order.
    #[arg(long)]
    p: Option<usize>,
    /// Contour height.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RouteArg {
    Auto,
    Series,
    Contour,
    Gw,
    Em,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Sin,
    Cos,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum CompareArg {
    Direct,
    Umbral,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Core,
    Full,
}

#[derive(Serialize, Clone, Copy, Debug)]
struct Cx {
    re: f64,
    im: f64,
}

impl From<C64> for Cx {
    fn from(z: C64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

#[derive(Serialize, Debug, Default)]
struct CheckRow {
    name: String,
    expected: Option<Cx>,
    computed: Option<Cx>,
    gap: Option<f64>,
    tol: Option<f64>,
    pass: Option<bool>,
    detail: String,
}

#[derive(Serialize, Debug)]
struct Report {
    value: Option<Cx>,
    err_est: Option<f64>,
    route: String,
    params: BTreeMap<String, Value>,
    checks: Vec<CheckRow>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) => m,
        }
    }
}

impl From<umbral::error::Error> for Failure {
    fn from(e: umbral::error::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

/// Parses "a", "bi", "a+bi" or "a-bi" (no spaces; "i" alone is 1i).
fn parse_complex(s: &str) -> Result<C64, Failure> {
    let bad = || Failure::Usage(format!("bad complex number '{s}': expected a, bi, a+bi or a-bi"));
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, Failure> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

fn compile(src: &str) -> Result<umbral::analytic::AnalyticFn, Failure> {
    umbral::expr::compile_str(src).map_err(|e| Failure::Usage(format!("expression '{src}': {e}")))
}

fn cx_json(z: C64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn cmd_eval(args: &EvalArgs, params: &mut BTreeMap<String, Value>) -> Result<Report, Failure> {
    let EvalArgs { f, umbra, param, route, tol, n, p, t } = args;
    let (route, tol, n, p, t) = (*route, *tol, *n, *p, *t);
    let func = compile(f)?;
    let param = param.as_deref().map(parse_complex).transpose()?;
    let a = make_special_by_name(umbra, param).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut req = EvalRequest::new(func, a);
    req.route = match route {
        RouteArg::Auto => RouteChoice::Auto,
        RouteArg::Series => RouteChoice::Series,
        RouteArg::Contour => RouteChoice::Contour,
        RouteArg::Gw => RouteChoice::Gw,
        RouteArg::Em => RouteChoice::EulerMaclaurin,
    };
    if let Some(tol) = tol {
        req.em.tol = tol;
        req.gw.tol = tol;
    }
    if let Some(n) = n {
        req.series.terms = n;
    }
    if let Some(p) = p {
        req.em.p = p;
    }
    req.t = t;
    params.insert("f".into(), json!(f));
    params.insert("umbra".into(), json!(umbra));
    if let Some(c) = param {
        params.insert("param".into(), cx_json(c));
    }
    params.insert("route".into(), json!(format!("{route:?}").to_lowercase()));
    params.insert("series_terms".into(), json!(req.series.terms));
    params.insert("em_p".into(), json!(req.em.p));
    params.insert("em_tol".into(), json!(req.em.tol));
    params.insert("gw_tol".into(), json!(req.gw.tol));
    params.insert("t".into(), json!(t));
    let r = evaluate(&req)?;
    let checks = r
        .diagnostics
        .routes
        .iter()
        .map(|o| CheckRow {
            name: o.route.to_string(),
            computed: o.value.map(Cx::from),
            gap: o.value.map(|v| (v - r.value).norm()),
            tol: o.err,
            detail: o.verdict.clone(),
            ..Default::default()
        })
        .collect();
    Ok(Report {
        value: Some(r.value.into()),
        err_est: Some(r.err_est),
        route: r.route.to_string(),
        params: params.clone(),
        checks,
    })
}

fn cmd_fracsum(
    f: &str,
    from: &str,
    to: &str,
    p: Option<usize>,
    tol: Option<f64>,
    n_max: Option<usize>,
    params: &mut BTreeMap<String, Value>,
) -> Result<Report, Failure> {
    let func = compile(f)?;
    let (x, y) = (parse_complex(from)?, parse_complex(to)?);
    let mut fp = FracSumParams::default();
    if let Some(p) = p {
        fp.p = p;
    }
    if let Some(tol) = tol {
        fp.tol = tol;
    }
    if let Some(n) = n_max {
        fp.n_max = n;
    }
    params.insert("f".into(), json!(f));
    params.insert("from".into(), cx_json(x));
    params.insert("to".into(), cx_json(y));
    params.insert("p".into(), json!(fp.p));
    params.insert("tol".into(), json!(fp.tol));
    params.insert("n_max".into(), json!(fp.n_max));
    let s = frac_sum(&FracSumRequest { f: func, x, y, params: fp })?;
    Ok(Report {
        value: Some(s.value.into()),
        err_est: Some(s.err),
        route: "fractional_sum".into(),
        params: params.clone(),
        checks: Vec::new(),
    })
}

fn cmd_gosper(
    family: FamilyArg,
    b: &str,
    nu: Option<f64>,
    compare: CompareArg,
    params: &mut BTreeMap<String, Value>,
) -> Result<Report, Failure> {
    let b = parse_complex(b)?;
    let fam = match family {
        FamilyArg::Sin => Family::Sin,
        FamilyArg::Cos => Family::Cos,
    };
    let kernel = match (nu, fam) {
        (Some(nu), _) => KernelSpec::bessel(nu).map_err(|e| Failure::Usage(e.to_string()))?,
        (None, Family::Sin) => KernelSpec::sin_kernel(),
        (None, Family::Cos) => KernelSpec::cos_kernel(),
    };
    params.insert("family".into(), json!(format!("{family:?}").to_lowercase()));
    params.insert("b".into(), cx_json(b));
    params.insert("nu".into(), json!(nu));
    params.insert("compare".into(), json!(format!("{compare:?}").to_lowercase()));
    let rhs = gosper_rhs(&kernel, b, fam)?;
    let mut checks = Vec::new();
    let mut head = None;
    if compare != CompareArg::Umbral {
        let policy = DirectPolicy::default();
        let d = match fam {
            Family::Sin => gosper_direct_sin(&kernel, b, &policy)?,
            Family::Cos => gosper_direct_cos(&kernel, b, &policy)?,
        };
        let gap = (d.value - rhs).norm();
        checks.push(CheckRow {
            name: "direct series vs closed form".into(),
            expected: Some(rhs.into()),
            computed: Some(d.value.into()),
            gap: Some(gap),
            tol: Some(1e-6),
            pass: Some(gap < 1e-6),
            detail: format!("{} terms", d.terms),
        });
        head = Some((d.value, d.err, "direct"));
    }
    if compare != CompareArg::Direct {
        let factor = match fam {
            Family::Sin => 2.0,
            Family::Cos => 4.0,
        };
        let u = gosper_umbral(&kernel, b, fam)?;
        let want = rhs * factor;
        let gap = (u.value - want).norm();
        checks.push(CheckRow {
            name: format!("umbral fractional sum vs {factor} x closed form"),
            expected: Some(want.into()),
            computed: Some(u.value.into()),
            gap: Some(gap),
            tol: Some(1e-5),
            pass: Some(gap < 1e-5),
            detail: String::new(),
        });
        head.get_or_insert((u.value, u.err, "umbral"));
    }
    let (v, e, route) = head.expect("at least one side computed");
    Ok(Report { value: Some(v.into()), err_est: Some(e), route: route.into(), params: params.clone(), checks })
}

fn cmd_constants(params: &mut BTreeMap<String, Value>) -> Result<Report, Failure> {
    let t = umbral::special::constants()?;
    params.insert("table".into(), json!("constants"));
    let row = |name: &str, v: f64, note: &str| CheckRow {
        name: name.into(),
        computed: Some(C64::new(v, 0.0).into()),
        detail: note.into(),
        ..Default::default()
    };
    let note = |k: &str| t.notes.iter().find(|n| n.0 == k).map(|n| n.1.clone()).unwrap_or_default();
    let checks = vec![
        row("euler_gamma", t.euler_gamma, &note("euler_gamma")),
        row("log_sqrt_2pi", t.log_sqrt_2pi, &note("log_sqrt_2pi")),
        row("glaisher_log", t.glaisher_log, &note("glaisher_log")),
    ];
    Ok(Report { value: None, err_est: None, route: "constants".into(), params: params.clone(), checks })
}

fn cmd_identities(suite: SuiteArg, params: &mut BTreeMap<String, Value>) -> Result<Report, Failure> {
    params.insert("suite".into(), json!(format!("{suite:?}").to_lowercase()));
    let checks: Vec<CheckRow> = run_suite(match suite {
        SuiteArg::Core => Suite::Core,
        SuiteArg::Full => Suite::Full,
    })
    .into_iter()
    .map(|c| CheckRow {
        name: format!("[{}] {}", c.criterion, c.name),
        expected: Some(c.expected.into()),
        computed: Some(c.computed.into()),
        gap: Some(c.gap),
        tol: Some(c.tol),
        pass: Some(c.pass),
        detail: c.detail,
    })
    .collect();
    Ok(Report { value: None, err_est: None, route: "identities".into(), params: params.clone(), checks })
}

fn fmt_cx(z: Option<Cx>) -> String {
    match z {
        // imaginary rounding residue is not worth printing
        Some(z) if z.im.abs() <= 1e-14 * z.re.abs().max(1.0) => format!("{:.12}", z.re),
        Some(z) => format!("{:.12}{:+.12}i", z.re, z.im),
        None => "-".into(),
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into())
}

fn render_text(r: &Report) -> String {
    let mut s = String::new();
    if let Some(v) = r.value {
        s += &format!("value    {}\nerr_est  {}\nroute    {}\n", fmt_cx(Some(v)), fmt_opt(r.err_est), r.route);
    }
    for c in &r.checks {
        let verdict = match c.pass {
            Some(true) => "ok",
            Some(false) => "FAIL",
            None => "",
        };
        s += &format!(
            "{:4} {}  computed {}  expected {}  gap {}  tol {}",
            verdict,
            c.name,
            fmt_cx(c.computed),
            fmt_cx(c.expected),
            fmt_opt(c.gap),
            fmt_opt(c.tol)
        );
        if !c.detail.is_empty() {
            s += &format!("  ({})", c.detail);
        }
        s.push('\n');
    }
    s
}

fn render_csv(r: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let num = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    let params = serde_json::to_string(&r.params).unwrap_or_default();
    w.write_record(["kind", "name", "re", "im", "err_or_gap", "tol", "pass", "route", "detail"]).ok();
    if let Some(v) = r.value {
        w.write_record(["value", "", &v.re.to_string(), &v.im.to_string(), &num(r.err_est), "", "", &r.route, &params])
            .ok();
    }
    for c in &r.checks {
        let pass = c.pass.map(|p| p.to_string()).unwrap_or_default();
        w.write_record([
            "check",
            &c.name,
            &num(c.computed.map(|z| z.re)),
            &num(c.computed.map(|z| z.im)),
            &num(c.gap),
            &num(c.tol),
            &pass,
            &r.route,
            &c.detail,
        ])
        .ok();
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

fn emit_manifest(path: Option<&str>, manifest: &Value) {
    let text = serde_json::to_string_pretty(manifest).unwrap_or_default();
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text + "\n") {
                eprintln!("cannot write manifest {p}: {e}");
            }
        }
        None => eprintln!("{text}"),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            if help {
                return ExitCode::SUCCESS;
            }
            let manifest = json!({
                "command": std::env::args().nth(1),
                "error": "usage",
                "exit_code": 1,
                "version": env!("CARGO_PKG_VERSION"),
                "wall_time_s": start.elapsed().as_secs_f64(),
            });
            emit_manifest(None, &manifest);
            return ExitCode::from(1);
        }
    };
    let mut params = BTreeMap::new();
    let (name, result) = match &cli.command {
        Command::Eval(args) => ("eval", cmd_eval(args, &mut params)),
        Command::Fracsum { f, from, to, p, tol, n_max } => {
            ("fracsum", cmd_fracsum(f, from, to, *p, *tol, *n_max, &mut params))
        }
        Command::Gosper { family, b, nu, compare } => ("gosper", cmd_gosper(*family, b, *nu, *compare, &mut params)),
        Command::Constants => ("constants", cmd_constants(&mut params)),
        Command::Identities { suite } => ("identities", cmd_identities(*suite, &mut params)),
    };
    let mut code = 0u8;
    let mut error = Value::Null;
    let mut diagnostics = Value::Null;
    match &result {
        Ok(report) => {
            let out = if cli.output.json {
                serde_json::to_string_pretty(report).unwrap_or_default() + "\n"
            } else if cli.output.csv {
                render_csv(report)
            } else {
                render_text(report)
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            diagnostics = json!(report.checks);
            if report.checks.iter().any(|c| c.pass == Some(false)) {
                code = 2;
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            code = f.code();
            error = json!(f.message());
        }
    }
    let manifest = json!({
        "command": name,
        "params": params,
        "diagnostics": diagnostics,
        "error": error,
        "exit_code": code,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    emit_manifest(cli.manifest.as_deref(), &manifest);
    ExitCode::from(code)
}
