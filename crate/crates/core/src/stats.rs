//! Least-squares lines and Kolmogorov–Smirnov tests.

use crate::{Error, Result};

/// Ordinary least-squares line `y = intercept + slope · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_err: f64,
    pub intercept_err: f64,
    pub r_squared: f64,
    pub n: usize,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "{} abscissae for {} ordinates",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::DegenerateFit(format!("{n} points, need at least 3")));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all abscissae equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let s2 = sse / (nf - 2.0);
    let slope_err = (s2 / sxx).sqrt();
    let intercept_err = (s2 * (1.0 / nf + mx * mx / sxx)).sqrt();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(LinearFit {
        slope,
        intercept,
        slope_err,
        intercept_err,
        r_squared,
        n,
    })
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample variance with `n − 1` denominator.
pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// Least-squares parabola `y = c0 + c1 (x − x̄) + c2 (x − x̄)²`, centered at
/// the abscissa mean for conditioning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub center: f64,
    pub coeffs: [f64; 3],
    pub errs: [f64; 3],
    pub n: usize,
}

pub fn quadratic_fit(x: &[f64], y: &[f64]) -> Result<QuadraticFit> {
    let n = x.len();
    if n != y.len() || n < 4 {
        return Err(Error::DegenerateFit(format!("{n} points for a parabola, need at least 4")));
    }
    let center = mean(x);
    // Normal equations A c = b with A_ij = Σ u^(i+j).
    let mut pw = [0.0; 5];
    let mut b = [0.0; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let u = xi - center;
        let mut p = 1.0;
        for (k, slot) in pw.iter_mut().enumerate() {
            *slot += p;
            if k < 3 {
                b[k] += p * yi;
            }
            p *= u;
        }
    }
    let a = [[pw[0], pw[1], pw[2]], [pw[1], pw[2], pw[3]], [pw[2], pw[3], pw[4]]];
    let inv = invert3(&a).ok_or_else(|| Error::DegenerateFit("singular normal equations".into()))?;
    let mut c = [0.0; 3];
    for i in 0..3 {
        c[i] = (0..3).map(|j| inv[i][j] * b[j]).sum();
    }
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let u = xi - center;
            (yi - c[0] - c[1] * u - c[2] * u * u).powi(2)
        })
        .sum();
    let s2 = sse / (n as f64 - 3.0);
    let errs = [(s2 * inv[0][0]).sqrt(), (s2 * inv[1][1]).sqrt(), (s2 * inv[2][2]).sqrt()];
    Ok(QuadraticFit {
        center,
        coeffs: c,
        errs,
        n,
    })
}

fn invert3(a: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
        }
    }
    Some(inv)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn p_value(d: f64, n_eff: f64) -> f64 {
    let sq = n_eff.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)
}

/// Largest gap between the empirical CDF of `samples` and `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> KsTest {
    let statistic = ks_statistic(samples, cdf);
    KsTest {
        statistic,
        p_value: p_value(statistic, samples.len() as f64),
    }
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsTest {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    KsTest {
        statistic: d,
        p_value: p_value(d, na * nb / (na + nb)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_recovered() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.5 - 0.75 * v).collect();
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope + 0.75).abs() < 1e-12);
        assert!((f.intercept - 2.5).abs() < 1e-12);
        assert!(f.slope_err < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_error_matches_textbook_case() {
        // y = x + (+1, −1, +1, −1): residual variance 4/3 · ..., checked by hand.
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 0.0, 3.0, 2.0];
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 0.6).abs() < 1e-12);
        // sse = 3.2, s² = 1.6, sxx = 5 → se = sqrt(0.32)
        assert!((f.slope_err - 0.32f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(linear_fit(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn ks_uniform_grid_is_tiny() {
        let s: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let t = ks_one_sample(&s, |x| x.clamp(0.0, 1.0));
        assert!((t.statistic - 0.0005).abs() < 1e-12);
        assert!(t.p_value > 0.999);
    }

    #[test]
    fn ks_detects_shift() {
        let s: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0 * 0.5).collect();
        let t = ks_one_sample(&s, |x| x.clamp(0.0, 1.0));
        assert!(t.statistic > 0.49);
        assert!(t.p_value < 1e-10);
    }

    #[test]
    fn kolmogorov_reference_value() {
        // Q(1.36) ≈ 0.0494, the familiar 5% critical point.
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 5e-4);
    }

    #[test]
    fn two_sample_identical_is_zero() {
        let a: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let t = ks_two_sample(&a, &a);
        assert_eq!(t.statistic, 0.0);
    }

    #[test]
    fn parabola_recovered() {
        let x: Vec<f64> = (0..12).map(|i| i as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 - 2.0 * v + 0.3 * v * v).collect();
        let f = quadratic_fit(&x, &y).unwrap();
        let u0 = -f.center;
        // Evaluate at x = 0 and compare curvature.
        let y0 = f.coeffs[0] + f.coeffs[1] * u0 + f.coeffs[2] * u0 * u0;
        assert!((y0 - 1.0).abs() < 1e-10);
        assert!((f.coeffs[2] - 0.3).abs() < 1e-12);
    }
}
