//! Umbrae: generating functions on horizontal strips Ω_{a,b} = {x − it :
//! t ∈ (a, b)}, with their exponential-type index, the calculus operations
//! and the catalog of special umbrae.

use crate::analytic::{taylor, AnalyticFn, Singularity};
use crate::contour::{ft_umbra, SampledTransform, SamplingPolicy};
use crate::error::{Error, Result};
use crate::numerics::{expm1, least_squares, Estimate, C64};
use crate::special::bernoulli_at_one;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Open t-interval (lower, upper) of a strip; bounds may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Strip {
    pub lower: f64,
    pub upper: f64,
}

impl Strip {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower < upper) {
            return Err(Error::EmptyStrip);
        }
        Ok(Strip { lower, upper })
    }

    pub fn whole() -> Self {
        Strip { lower: f64::NEG_INFINITY, upper: f64::INFINITY }
    }

    /// t strictly inside (lower, upper).
    pub fn contains_t(&self, t: f64) -> bool {
        t > self.lower && t < self.upper
    }

    /// z = x − it lies in the open strip.
    pub fn contains(&self, z: C64) -> bool {
        self.contains_t(-z.im)
    }

    pub fn intersect(&self, other: &Strip) -> Result<Strip> {
        Strip::new(self.lower.max(other.lower), self.upper.min(other.upper))
    }

    /// The strip r⁻¹Ω.
    pub fn scaled(&self, r: f64) -> Strip {
        let (a, b) = (self.lower / r, self.upper / r);
        if r > 0.0 {
            Strip { lower: a, upper: b }
        } else {
            Strip { lower: b, upper: a }
        }
    }
}

/// Positive index α (growth as x → +∞) and negative index β (x → −∞).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpIndex {
    pub alpha: f64,
    pub beta: f64,
    /// Set when the values come from sampling or from the additive rule
    /// rather than from the catalog.
    pub estimated: bool,
}

impl ExpIndex {
    pub fn exact(alpha: f64, beta: f64) -> Self {
        ExpIndex { alpha, beta, estimated: false }
    }

    /// Regular ⇔ α < β. Estimated indices need a margin of 0.05, below the
    /// resolution of the probe fits.
    pub fn is_regular(&self) -> bool {
        if self.estimated {
            self.beta - self.alpha > 0.05
        } else {
            self.alpha < self.beta
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Special {
    /// (c) = (e^{cz}, ℂ).
    ConstExp(C64),
    /// [c] = (c, ℂ).
    ConstNum(C64),
    /// D = (z, ℂ).
    D,
    /// Δ = (e^z − 1, ℂ).
    Delta,
    /// B = (ze^z/(e^z − 1), Ω_{−2π,2π}).
    Bernoulli,
    /// E = (2/(e^z + e^{−z}), Ω_{−π/2,π/2}).
    Euler,
}

type TransformCache = Arc<Mutex<Vec<((u64, u64), Arc<SampledTransform>)>>>;

#[derive(Clone)]
pub struct Umbra {
    pub gen: AnalyticFn,
    pub strip: Strip,
    pub index: ExpIndex,
    pub label: String,
    pub kind: Option<Special>,
    moments: Arc<OnceLock<std::result::Result<Vec<Estimate>, Error>>>,
    transforms: TransformCache,
}

impl std::fmt::Debug for Umbra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Umbra")
            .field("label", &self.label)
            .field("strip", &self.strip)
            .field("index", &self.index)
            .finish()
    }
}

/// Number of moments computed together and cached on first use.
const MOMENT_CACHE: usize = 40;

impl Umbra {
    pub fn new(gen: AnalyticFn, strip: Strip, index: ExpIndex, label: impl Into<String>) -> Self {
        Umbra {
            gen,
            strip,
            index,
            label: label.into(),
            kind: None,
            moments: Arc::new(OnceLock::new()),
            transforms: Arc::new(Mutex::new(Vec::new())),
        }
    }

    /// Umbra whose index is measured by [`index_estimate`].
    pub fn with_estimated_index(gen: AnalyticFn, strip: Strip, label: impl Into<String>) -> Result<Self> {
        let mut u = Umbra::new(gen, strip, ExpIndex { alpha: f64::NAN, beta: f64::NAN, estimated: true }, label);
        u.index = index_estimate(&u, &ProbePolicy::default())?;
        Ok(u)
    }

    /// 𝒜(z), rejecting points not strictly inside the strip.
    pub fn eval_gen(&self, z: C64) -> Result<C64> {
        if !self.strip.contains(z) {
            return Err(Error::HeightOutside { t: -z.im, lo: self.strip.lower, hi: self.strip.upper });
        }
        Ok(self.gen.eval(z))
    }

    /// Â at height t, sampled once and shared between clones.
    pub fn transform(&self, t: f64) -> Result<Arc<SampledTransform>> {
        self.transform_with(t, &SamplingPolicy::default())
    }

    /// Â at height t under an explicit sampling policy (cached per height
    /// and floor).
    pub fn transform_with(&self, t: f64, policy: &SamplingPolicy) -> Result<Arc<SampledTransform>> {
        let key = (t.to_bits(), policy.floor.to_bits());
        let mut cache = self.transforms.lock().unwrap();
        if let Some((_, tr)) = cache.iter().find(|(k, _)| *k == key) {
            return Ok(tr.clone());
        }
        let tr = Arc::new(ft_umbra(self, t, policy)?);
        cache.push((key, tr.clone()));
        Ok(tr)
    }
}

fn gen_bernoulli(z: C64) -> C64 {
    if z.norm() < 1e-2 {
        // Σ_{n<12} B_n(1) zⁿ/n!
        let mut acc = C64::new(0.0, 0.0);
        let mut fact = 1.0;
        let mut coeffs = [0.0; 12];
        for (n, c) in coeffs.iter_mut().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            *c = bernoulli_at_one(n) / fact;
        }
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        return acc;
    }
    if z.re > 0.0 {
        -z / expm1(-z)
    } else {
        z * z.exp() / expm1(z)
    }
}

fn gen_euler(z: C64) -> C64 {
    if z.re > 0.0 {
        let e = (-z).exp();
        e * 2.0 / (1.0 + e * e)
    } else {
        let e = z.exp();
        e * 2.0 / (1.0 + e * e)
    }
}

/// The catalog umbra with its exact strip and index. Parameterless entries
/// are built once and shared, so their moment and transform caches persist.
pub fn make_special(which: Special) -> Result<Umbra> {
    static SHARED: OnceLock<[Umbra; 4]> = OnceLock::new();
    let shared = SHARED.get_or_init(|| {
        [Special::D, Special::Delta, Special::Bernoulli, Special::Euler]
            .map(|w| build_special(w).expect("catalog entry"))
    });
    Ok(match which {
        Special::D => shared[0].clone(),
        Special::Delta => shared[1].clone(),
        Special::Bernoulli => shared[2].clone(),
        Special::Euler => shared[3].clone(),
        other => build_special(other)?,
    })
}

fn build_special(which: Special) -> Result<Umbra> {
    let (gen, strip, index, label) = match which {
        Special::ConstExp(c) => {
            (AnalyticFn::exp_linear(c), Strip::whole(), ExpIndex::exact(c.re, c.re), format!("({c})"))
        }
        Special::ConstNum(c) => {
            let index = if c == C64::new(0.0, 0.0) {
                ExpIndex::exact(f64::NEG_INFINITY, f64::INFINITY)
            } else {
                ExpIndex::exact(0.0, 0.0)
            };
            (AnalyticFn::constant(c), Strip::whole(), index, format!("[{c}]"))
        }
        Special::D => (AnalyticFn::identity(), Strip::whole(), ExpIndex::exact(0.0, 0.0), "D".to_string()),
        Special::Delta => (AnalyticFn::new(expm1), Strip::whole(), ExpIndex::exact(1.0, 0.0), "Delta".to_string()),
        Special::Bernoulli => {
            let poles = (1..=8).flat_map(|k| {
                let p = C64::new(0.0, 2.0 * PI * k as f64);
                [Singularity::pole(p, 1), Singularity::pole(-p, 1)]
            });
            (
                AnalyticFn::new(gen_bernoulli).with_singularities(poles),
                Strip { lower: -2.0 * PI, upper: 2.0 * PI },
                ExpIndex::exact(0.0, 1.0),
                "B".to_string(),
            )
        }
        Special::Euler => {
            let poles = (0..8).flat_map(|k| {
                let p = C64::new(0.0, PI * (k as f64 + 0.5));
                [Singularity::pole(p, 1), Singularity::pole(-p, 1)]
            });
            (
                AnalyticFn::new(gen_euler).with_singularities(poles),
                Strip { lower: -PI / 2.0, upper: PI / 2.0 },
                ExpIndex::exact(-1.0, 1.0),
                "E".to_string(),
            )
        }
    };
    let mut u = Umbra::new(gen, strip, index, label);
    u.kind = Some(which);
    Ok(u)
}

/// Catalog lookup by name: const_exp, const_num, D, Delta, B, E.
pub fn make_special_by_name(name: &str, param: Option<C64>) -> Result<Umbra> {
    let need = |p: Option<C64>| p.ok_or_else(|| Error::UnknownUmbra(format!("{name} needs a parameter")));
    let which = match name {
        "const_exp" => Special::ConstExp(need(param)?),
        "const_num" => Special::ConstNum(need(param)?),
        "D" => Special::D,
        "Delta" => Special::Delta,
        "B" => Special::Bernoulli,
        "E" => Special::Euler,
        _ => return Err(Error::UnknownUmbra(name.to_string())),
    };
    make_special(which)
}

/// rA = (𝒜(rz), r⁻¹Ω).
pub fn scale(r: f64, a: &Umbra) -> Result<Umbra> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::Domain("scale factor must be finite and nonzero".into()));
    }
    let (al, be) = (a.index.alpha * r, a.index.beta * r);
    let index = ExpIndex {
        alpha: if r > 0.0 { al } else { be },
        beta: if r > 0.0 { be } else { al },
        estimated: a.index.estimated,
    };
    Ok(Umbra::new(a.gen.scaled(r), a.strip.scaled(r), index, format!("{r}*{}", a.label)))
}

/// A₁ + A₂ = (𝒜₁𝒜₂, Ω₁ ∩ Ω₂); index recorded as the component-wise sum.
pub fn add(a1: &Umbra, a2: &Umbra) -> Result<Umbra> {
    let strip = a1.strip.intersect(&a2.strip)?;
    let index =
        ExpIndex { alpha: a1.index.alpha + a2.index.alpha, beta: a1.index.beta + a2.index.beta, estimated: true };
    Ok(Umbra::new(a1.gen.mul(&a2.gen), strip, index, format!("({} + {})", a1.label, a2.label)))
}

/// A₁ [+] A₂ = (𝒜₁ + 𝒜₂, Ω₁ ∩ Ω₂); index re-measured.
pub fn usum(a1: &Umbra, a2: &Umbra) -> Result<Umbra> {
    let strip = a1.strip.intersect(&a2.strip)?;
    Umbra::with_estimated_index(a1.gen.add(&a2.gen), strip, format!("({} [+] {})", a1.label, a2.label))
}

/// A₁ [−] A₂ = (𝒜₁ − 𝒜₂, Ω₁ ∩ Ω₂); index re-measured.
pub fn udiff(a1: &Umbra, a2: &Umbra) -> Result<Umbra> {
    let strip = a1.strip.intersect(&a2.strip)?;
    let gen = a1.gen.sub(&a2.gen);
    let label = format!("({} [-] {})", a1.label, a2.label);
    match Umbra::with_estimated_index(gen.clone(), strip, label.clone()) {
        Ok(u) => Ok(u),
        // A difference may vanish identically; its index is then (−∞, ∞).
        Err(Error::ProbeOverflow(_)) => Err(Error::ProbeOverflow(f64::NAN)),
        Err(_) => Ok(Umbra::new(
            gen,
            strip,
            ExpIndex { alpha: f64::NEG_INFINITY, beta: f64::INFINITY, estimated: true },
            label,
        )),
    }
}

/// Aⁿ = 𝒜^{(n)}(0).
pub fn moment(a: &Umbra, n: usize) -> Result<Estimate> {
    if !a.strip.contains_t(0.0) {
        return Err(Error::MomentUndefined);
    }
    let scale_by_factorial = |c: &[Estimate]| -> Vec<Estimate> {
        let mut f = 1.0;
        c.iter()
            .enumerate()
            .map(|(k, e)| {
                if k > 0 {
                    f *= k as f64;
                }
                Estimate::new(e.value * f, e.err * f)
            })
            .collect()
    };
    if n <= MOMENT_CACHE {
        let cached =
            a.moments.get_or_init(|| taylor(&a.gen, C64::new(0.0, 0.0), MOMENT_CACHE).map(|c| scale_by_factorial(&c)));
        return match cached {
            Ok(m) => Ok(m[n]),
            Err(e) => Err(e.clone()),
        };
    }
    let c = taylor(&a.gen, C64::new(0.0, 0.0), n)?;
    Ok(scale_by_factorial(&c)[n])
}

/// Sampling policy for [`index_estimate`]: |x| ∈ [x_min, x_max] on `points`
/// nodes per side, along the line t (default: the strip's natural line).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbePolicy {
    pub t: Option<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Default for ProbePolicy {
    fn default() -> Self {
        ProbePolicy { t: None, x_min: 16.0, x_max: 64.0, points: 16 }
    }
}

/// Measured index: least-squares fit of ln|𝒜(x − it)| ≈ s·x + c + q·ln|x|
/// on each half-line; α is the slope towards +∞, β towards −∞. Sides on
/// which 𝒜 underflows to zero report ∓∞.
pub fn index_estimate(a: &Umbra, probe: &ProbePolicy) -> Result<ExpIndex> {
    let t = probe.t.unwrap_or_else(|| crate::contour::default_line(a));
    if !a.strip.contains_t(t) {
        return Err(Error::HeightOutside { t, lo: a.strip.lower, hi: a.strip.upper });
    }
    let side = |sgn: f64| -> Result<f64> {
        let mut rows = Vec::new();
        let mut ys = Vec::new();
        let mut underflow = 0;
        for j in 0..probe.points {
            let x = probe.x_min + (probe.x_max - probe.x_min) * j as f64 / (probe.points - 1) as f64;
            let v = a.gen.eval(C64::new(sgn * x, -t));
            let m = v.norm();
            if !m.is_finite() {
                return Err(Error::ProbeOverflow(sgn * x));
            }
            if m < 1e-300 {
                underflow += 1;
                continue;
            }
            rows.push(vec![sgn * x, 1.0, x.ln()]);
            ys.push(C64::new(m.ln(), 0.0));
        }
        if underflow > 0 && rows.len() < 4 {
            return Ok(-sgn * f64::INFINITY);
        }
        if rows.len() < 4 {
            return Err(Error::ProbeOverflow(f64::NAN));
        }
        let (c, _) = least_squares(&rows, &ys);
        Ok(c[0].re)
    };
    let alpha = side(1.0)?;
    let beta = side(-1.0)?;
    Ok(ExpIndex { alpha, beta, estimated: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{bernoulli_at_one, euler_numbers};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn grid() -> Vec<C64> {
        (0..100).map(|j| C64::new(-3.0 + 0.061 * j as f64, 1.9 - 0.037 * j as f64)).collect()
    }

    #[test]
    fn catalog_entries() {
        let b = make_special(Special::Bernoulli).unwrap();
        assert_eq!(b.gen.eval(c(0.0)), c(1.0));
        assert_eq!(b.strip, Strip { lower: -2.0 * PI, upper: 2.0 * PI });
        assert_eq!((b.index.alpha, b.index.beta), (0.0, 1.0));
        let d = make_special(Special::Delta).unwrap();
        assert!((d.gen.eval(c(1.0)).re - (1f64.exp() - 1.0)).abs() < 1e-15);
        assert!(make_special_by_name("Q", None).is_err());
        assert!(make_special_by_name("const_exp", None).is_err());
        // series fallback joins the closed form smoothly
        let z = C64::new(0.0099, 0.0);
        let closed = z * z.exp() / (z.exp() - 1.0);
        assert!((b.gen.eval(z) - closed).norm() < 1e-13);
    }

    #[test]
    fn boundary_points_rejected() {
        let e = make_special(Special::Euler).unwrap();
        assert!(e.eval_gen(C64::new(0.3, -PI / 2.0)).is_err());
        assert!(e.eval_gen(C64::new(0.3, -1.0)).is_ok());
    }

    #[test]
    fn scale_examples() {
        let b = make_special(Special::Bernoulli).unwrap();
        let b1 = scale(1.0, &b).unwrap();
        for z in grid() {
            assert_eq!(b1.gen.eval(z), b.gen.eval(z));
        }
        let b2 = scale(2.0, &b).unwrap();
        assert_eq!(b2.gen.eval(c(0.5)), b.gen.eval(c(1.0)));
        let bm = scale(-1.0, &b).unwrap();
        assert_eq!(bm.strip, Strip { lower: -2.0 * PI, upper: 2.0 * PI });
        assert_eq!((bm.index.alpha, bm.index.beta), (-1.0, 0.0));
        assert!(scale(0.0, &b).is_err());
        let back = scale(3.0, &scale(1.0 / 3.0, &b).unwrap()).unwrap();
        for z in grid() {
            assert!((back.gen.eval(z) - b.gen.eval(z)).norm() < 1e-13);
        }
    }

    #[test]
    fn add_and_usum_examples() {
        let b = make_special(Special::Bernoulli).unwrap();
        let e1 = make_special(Special::ConstExp(c(1.0))).unwrap();
        let s = add(&b, &e1).unwrap();
        assert!((moment(&s, 1).unwrap().value.re - 1.5).abs() < 1e-12);
        let delta = make_special(Special::Delta).unwrap();
        let bd = add(&b, &delta).unwrap();
        for z in grid() {
            assert!((bd.gen.eval(z) - z * z.exp()).norm() < 1e-12 * (1.0 + (z * z.exp()).norm()));
        }
        let d = make_special(Special::D).unwrap();
        let one = make_special(Special::ConstNum(c(1.0))).unwrap();
        let u = usum(&d, &one).unwrap();
        assert_eq!(u.gen.eval(c(2.5)), c(3.5));
        let z = udiff(&b, &b).unwrap();
        for p in grid() {
            assert_eq!(z.gen.eval(p), c(0.0));
        }
        let narrow =
            Umbra::new(AnalyticFn::identity(), Strip::new(10.0, 11.0).unwrap(), ExpIndex::exact(0.0, 0.0), "x");
        assert_eq!(add(&b, &narrow).unwrap_err(), Error::EmptyStrip);
    }

    #[test]
    fn multiplication_theorem_gen_identity() {
        let b = make_special(Special::Bernoulli).unwrap();
        for n in [2usize, 3, 5] {
            let nb = scale(n as f64, &b).unwrap();
            let mut acc = add(&nb, &make_special(Special::ConstExp(c(0.0))).unwrap()).unwrap();
            for j in 1..n {
                let term = add(&nb, &make_special(Special::ConstExp(c(-(j as f64)))).unwrap()).unwrap();
                acc = usum(&acc, &term).unwrap();
            }
            for z in grid() {
                if !acc.strip.contains(z) {
                    continue;
                }
                let want = b.gen.eval(z) * n as f64;
                assert!((acc.gen.eval(z) - want).norm() < 1e-12 * (1.0 + want.norm()), "n = {n}, z = {z}");
            }
        }
    }

    #[test]
    fn moments_of_catalog() {
        let b = make_special(Special::Bernoulli).unwrap();
        for n in 0..=20 {
            let m = moment(&b, n).unwrap();
            let want = bernoulli_at_one(n);
            let tol = (1e-10 * want.abs()).max(10.0 * m.err);
            assert!((m.value.re - want).abs() <= tol, "B^{n}: {m:?} vs {want}");
        }
        let e = make_special(Special::Euler).unwrap();
        let en = euler_numbers(20).unwrap();
        for n in 0..=20 {
            let m = moment(&e, n).unwrap();
            let tol = (1e-10 * en[n].abs()).max(10.0 * m.err);
            assert!((m.value.re - en[n]).abs() <= tol, "E^{n}: {m:?} vs {}", en[n]);
        }
        let d = make_special(Special::D).unwrap();
        assert!((moment(&d, 1).unwrap().value - 1.0).norm() < 1e-14);
        assert!(moment(&d, 3).unwrap().value.norm() < 1e-14);
        let shifted = Umbra::new(b.gen.clone(), Strip::new(1.0, 2.0).unwrap(), ExpIndex::exact(0.0, 1.0), "shifted");
        assert_eq!(moment(&shifted, 1).unwrap_err(), Error::MomentUndefined);
    }

    #[test]
    fn index_estimates() {
        let p = ProbePolicy::default();
        let b = index_estimate(&make_special(Special::Bernoulli).unwrap(), &p).unwrap();
        assert!(b.alpha.abs() < 0.02 && (b.beta - 1.0).abs() < 0.02, "{b:?}");
        let e2 = index_estimate(&make_special(Special::ConstExp(c(2.0))).unwrap(), &p).unwrap();
        assert!((e2.alpha - 2.0).abs() < 0.02 && (e2.beta - 2.0).abs() < 0.02);
        assert!(!e2.is_regular());
        let e = index_estimate(&make_special(Special::Euler).unwrap(), &p).unwrap();
        assert!((e.alpha + 1.0).abs() < 0.02 && (e.beta - 1.0).abs() < 0.02);
        assert!(e.is_regular());
        let d = index_estimate(&make_special(Special::D).unwrap(), &p).unwrap();
        assert!(!d.is_regular());
    }
}
