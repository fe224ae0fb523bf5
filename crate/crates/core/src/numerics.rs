//! Small numerical building blocks shared by the other modules: value/error
//! pairs, compensated summation, Gauss–Legendre rules and Richardson tables.

use num_complex::Complex64;
use std::sync::OnceLock;

pub type C64 = Complex64;

pub const EPS: f64 = f64::EPSILON;

/// A value together with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: C64,
    pub err: f64,
}

impl Estimate {
    pub fn new(value: C64, err: f64) -> Self {
        Estimate { value, err }
    }

    pub fn exact(value: C64) -> Self {
        Estimate { value, err: 0.0 }
    }
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
    abs: f64,
}

fn two_sum(acc: f64, x: f64, comp: &mut f64) -> f64 {
    let t = acc + x;
    if acc.abs() >= x.abs() {
        *comp += (acc - t) + x;
    } else {
        *comp += (x - t) + acc;
    }
    t
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: C64) {
        self.abs += x.norm();
        self.sum.re = two_sum(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }

    /// Sum of the magnitudes of everything added so far; the natural scale
    /// for the rounding error of the total.
    pub fn magnitude(&self) -> f64 {
        self.abs
    }
}

/// exp(w) − 1 without cancellation for small |w|.
pub fn expm1(w: C64) -> C64 {
    if w.norm() < 1e-2 {
        let mut term = w;
        let mut acc = w;
        for k in 2..12 {
            term = term * w / k as f64;
            acc += term;
        }
        acc
    } else {
        w.exp() - 1.0
    }
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Cached 16- and 24-point rules, the workhorses of the panel integrators.
pub fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(16))
}

pub fn gl24() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(24))
}

/// Integrate `f` over the real interval [a, b] with one panel of the given rule.
pub fn gl_panel<F: FnMut(f64) -> C64>(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64, mut f: F) -> C64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut acc = C64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        acc += f(mid + half * x) * *w;
    }
    acc * half
}

/// Result of extrapolating a sequence sampled on a doubling grid.
#[derive(Clone, Debug)]
pub struct LimitEstimate {
    pub value: C64,
    pub err: f64,
    /// Richardson order used (0 = raw sequence).
    pub order: usize,
}

/// Richardson extrapolation of values `s[j]` taken at N = N₀·2^j, for a
/// sequence with error expansion Σ c_k N^{−(g0 + k)}.
///
/// Returns the diagonal of the tableau entry with the smallest successive
/// difference, which doubles as its error estimate.
pub fn richardson_doubling(s: &[C64], g0: f64) -> LimitEstimate {
    let n = s.len();
    assert!(n > 0);
    if n == 1 {
        return LimitEstimate { value: s[0], err: f64::INFINITY, order: 0 };
    }
    let mut table: Vec<Vec<C64>> = vec![s.to_vec()];
    for k in 0..n - 1 {
        let f = 2f64.powf(g0 + k as f64);
        let prev = &table[k];
        let next: Vec<C64> = (0..prev.len() - 1).map(|i| (prev[i + 1] * f - prev[i]) / (f - 1.0)).collect();
        table.push(next);
    }
    let mut best = LimitEstimate { value: s[n - 1], err: (s[n - 1] - s[n - 2]).norm(), order: 0 };
    for (k, col) in table.iter().enumerate().skip(1) {
        if col.len() < 2 {
            break;
        }
        let last = col[col.len() - 1];
        let err = (last - col[col.len() - 2]).norm();
        if err < best.err {
            best = LimitEstimate { value: last, err, order: k };
        }
    }
    best
}

/// Least-squares fit of y ≈ Σ_j c_j φ_j(x); returns coefficients and the
/// root-mean-square residual. Solved through the normal equations, which is
/// adequate for the handful of well-scaled basis functions used here.
pub fn least_squares(rows: &[Vec<f64>], y: &[C64]) -> (Vec<C64>, f64) {
    let m = rows[0].len();
    let mut a = vec![vec![0.0; m]; m];
    let mut rhs = vec![C64::new(0.0, 0.0); m];
    for (row, yi) in rows.iter().zip(y) {
        for i in 0..m {
            for j in 0..m {
                a[i][j] += row[i] * row[j];
            }
            rhs[i] += *yi * row[i];
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        a.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            for c in col..m {
                a[r][c] -= f * a[col][c];
            }
            let t = rhs[col] * f;
            rhs[r] -= t;
        }
    }
    let mut c = vec![C64::new(0.0, 0.0); m];
    for i in (0..m).rev() {
        let mut acc = rhs[i];
        for j in i + 1..m {
            acc -= c[j] * a[i][j];
        }
        c[i] = acc / a[i][i];
    }
    let mut ss = 0.0;
    for (row, yi) in rows.iter().zip(y) {
        let fit: C64 = row.iter().zip(&c).map(|(r, ci)| ci * *r).sum();
        ss += (fit - yi).norm_sqr();
    }
    (c, (ss / y.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let r = gauss_legendre(10);
        let v = gl_panel(&r, 0.0, 2.0, |x| C64::new(x.powi(19), 0.0));
        assert!((v.re - 2f64.powi(20) / 20.0).abs() < 1e-9);
    }

    #[test]
    fn richardson_removes_power_tail() {
        let s: Vec<C64> = (0..6)
            .map(|j| {
                let n = 8.0 * 2f64.powi(j);
                C64::new(1.0 + 1.0 / n + 0.5 / (n * n) - 2.0 / (n * n * n), 0.0)
            })
            .collect();
        let e = richardson_doubling(&s, 1.0);
        assert!((e.value.re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(C64::new(1e16, 0.0));
        for _ in 0..10 {
            s.add(C64::new(1.0, 0.0));
        }
        s.add(C64::new(-1e16, 0.0));
        assert_eq!(s.value().re, 10.0);
    }

    #[test]
    fn expm1_small_argument() {
        let w = C64::new(1e-9, 2e-9);
        let v = expm1(w);
        assert!((v - w).norm() < 1e-17);
    }
}
