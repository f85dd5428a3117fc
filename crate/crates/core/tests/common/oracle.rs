//! Independent reference computations used only by tests.
//!
//! Nothing here calls into the library's numerical code: densities are
//! integrated by adaptive Simpson quadrature, t normalizing constants come
//! from an exact Gamma-ratio recurrence, and least squares is solved from
//! the normal equations by Gaussian elimination.
#![allow(dead_code)]

use std::f64::consts::PI;

pub fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `Γ((ν+1)/2) / (√(νπ) Γ(ν/2))` by the recurrence
/// `Γ((ν+3)/2)/Γ((ν+2)/2) = Γ((ν+1)/2)/Γ(ν/2) · (ν+1)/ν`.
pub fn t_normalizer(df: u64) -> f64 {
    let (mut ratio, mut nu) = if df % 2 == 1 {
        (1.0 / PI.sqrt(), 1u64)
    } else {
        (PI.sqrt() / 2.0, 2u64)
    };
    while nu < df {
        ratio *= (nu as f64 + 1.0) / nu as f64;
        nu += 2;
    }
    ratio / (df as f64 * PI).sqrt()
}

pub fn t_density(x: f64, df: u64) -> f64 {
    let nu = df as f64;
    t_normalizer(df) * (1.0 + x * x / nu).powf(-(nu + 1.0) / 2.0)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || b - a < 1e-4 {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`, split into unit
/// panels first so long ranges are not under-resolved.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let panels = ((hi - lo).ceil() as usize).max(1);
    let h = (hi - lo) / panels as f64;
    let f: &dyn Fn(f64) -> f64 = &f;
    let mut total = 0.0;
    for k in 0..panels {
        let x0 = lo + k as f64 * h;
        let x1 = if k + 1 == panels { hi } else { x0 + h };
        let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
        let whole = simpson(x0, x1, f0, fm, f1);
        total += adaptive(f, x0, x1, f0, fm, f1, whole, tol / panels as f64, 40);
    }
    sign * total
}

/// `Φ(x) = ½ + ∫₀ˣ φ`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 + integrate(normal_density, 0.0, x, 1e-15)
}

/// Student-t CDF as `½ + ∫₀ˣ f_ν`.
pub fn t_cdf(x: f64, df: u64) -> f64 {
    0.5 + integrate(|u| t_density(u, df), 0.0, x, 1e-15)
}

/// Bisection on a monotone CDF.
pub fn invert(cdf: impl Fn(f64) -> f64, p: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// OLS coefficients from `XᵀX β = Xᵀy`, Gaussian elimination with partial
/// pivoting. `rows` excludes the intercept; it is added here.
pub fn normal_equations(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let k = rows[0].len() + 1;
    let aug = |r: &Vec<f64>| {
        let mut v = vec![1.0];
        v.extend_from_slice(r);
        v
    };
    let mut a = vec![vec![0.0; k + 1]; k];
    for (r, &yi) in rows.iter().zip(y) {
        let x = aug(r);
        for i in 0..k {
            for j in 0..k {
                a[i][j] += x[i] * x[j];
            }
            a[i][k] += x[i] * yi;
        }
    }
    for c in 0..k {
        let piv = (c..k)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        a.swap(c, piv);
        for r in 0..k {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..=k {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    (0..k).map(|i| a[i][k] / a[i][i]).collect()
}

/// Brute-force leverage `x (XᵀX)⁻¹ xᵀ` via an explicit Gauss-Jordan inverse.
pub fn leverage(rows: &[Vec<f64>], x: &[f64]) -> f64 {
    let k = rows[0].len() + 1;
    let mut g = vec![vec![0.0; 2 * k]; k];
    for r in rows {
        let mut v = vec![1.0];
        v.extend_from_slice(r);
        for i in 0..k {
            for j in 0..k {
                g[i][j] += v[i] * v[j];
            }
        }
    }
    for i in 0..k {
        g[i][k + i] = 1.0;
    }
    for c in 0..k {
        let piv = (c..k)
            .max_by(|&i, &j| g[i][c].abs().total_cmp(&g[j][c].abs()))
            .unwrap();
        g.swap(c, piv);
        let d = g[c][c];
        for j in 0..2 * k {
            g[c][j] /= d;
        }
        for r in 0..k {
            if r != c {
                let f = g[r][c];
                for j in 0..2 * k {
                    g[r][j] -= f * g[c][j];
                }
            }
        }
    }
    let mut v = vec![1.0];
    v.extend_from_slice(x);
    (0..k)
        .map(|i| (0..k).map(|j| v[i] * g[i][k + j] * v[j]).sum::<f64>())
        .sum()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    sxy / (sxx * syy).sqrt()
}

/// Small deterministic generator for building test instances without
/// touching the library's RNG.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u01(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    /// Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u = self.next_u01();
        let v = self.next_u01();
        (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
    }
}

/// Random regression instance: `n` rows of `p` predictors with mixed
/// scales, outcome linear in them plus noise.
pub fn instance(seed: u64, n: usize, p: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut g = Lcg(seed ^ 0x9e37_79b9_7f4a_7c15);
    let scales: Vec<f64> = (0..p).map(|_| 0.1 + 10.0 * g.next_u01()).collect();
    let shifts: Vec<f64> = (0..p).map(|_| 50.0 * (g.next_u01() - 0.5)).collect();
    let beta: Vec<f64> = (0..p).map(|_| 2.0 * (g.next_u01() - 0.5)).collect();
    let noise = 0.2 + 3.0 * g.next_u01();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|j| shifts[j] + scales[j] * g.normal()).collect())
        .collect();
    let y = rows
        .iter()
        .map(|r| 3.0 + r.iter().zip(&beta).map(|(x, b)| x * b).sum::<f64>() + noise * g.normal())
        .collect();
    (rows, y)
}
